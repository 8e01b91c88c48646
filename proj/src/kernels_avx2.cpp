// AVX2/FMA variants of the complex vector kernels. std::complex<double>
// arrays are interleaved (re, im), so one __m256d register holds two
// complex numbers. Tails shorter than the vector width fall back to the
// scalar loop.

#include "absentia/kernels.hpp"

#include <cassert>
#include <immintrin.h>

namespace absentia::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// [w0, w1] -> [w0, w0, w1, w1]
inline __m256d dup_pairs(const double* w) {
  __m256d v = _mm256_castpd128_pd256(_mm_loadu_pd(w));
  return _mm256_permute4x64_pd(v, 0b01010000);
}

// swap (re, im) within each complex: [a, b, c, d] -> [b, a, d, c]
inline __m256d swap_ri(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

const __m256d kNegEven = _mm256_setr_pd(-1.0, 1.0, -1.0, 1.0);

}  // namespace

cplx dot(std::span<const cplx> x, std::span<const cplx> y) {
  assert(x.size() == y.size());
  const double* xp = reinterpret_cast<const double*>(x.data());
  const double* yp = reinterpret_cast<const double*>(y.data());
  const std::size_t n2 = (x.size() / 2) * 2;
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  for (std::size_t i = 0; i < n2; i += 2) {
    __m256d a = _mm256_loadu_pd(xp + 2 * i);
    __m256d b = _mm256_loadu_pd(yp + 2 * i);
    acc_re = _mm256_fmadd_pd(a, b, acc_re);                      // xr*yr, xi*yi
    __m256d t = _mm256_mul_pd(a, swap_ri(b));                    // xr*yi, xi*yr
    acc_im = _mm256_fmadd_pd(t, kNegEven, acc_im);               // -? no: see below
  }
  // per complex: re = xr*yr + xi*yi, im = xr*yi - xi*yr.
  // acc_im lanes hold (-xr*yi, +xi*yr)? kNegEven negates even lanes, which
  // carry xr*yi, so flip the total sign at the end.
  double re = hsum(acc_re);
  double im = -hsum(acc_im);
  for (std::size_t i = n2; i < x.size(); ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

double nrm2sq(std::span<const cplx> x) {
  const double* xp = reinterpret_cast<const double*>(x.data());
  const std::size_t n2 = (x.size() / 2) * 2;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < n2; i += 2) {
    __m256d a = _mm256_loadu_pd(xp + 2 * i);
    acc = _mm256_fmadd_pd(a, a, acc);
  }
  double s = hsum(acc);
  for (std::size_t i = n2; i < x.size(); ++i)
    s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  assert(x.size() == y.size());
  const double* xp = reinterpret_cast<const double*>(x.data());
  double* yp = reinterpret_cast<double*>(y.data());
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  const std::size_t n2 = (x.size() / 2) * 2;
  for (std::size_t i = 0; i < n2; i += 2) {
    __m256d v = _mm256_loadu_pd(xp + 2 * i);
    __m256d w = _mm256_loadu_pd(yp + 2 * i);
    // (ar + i ai)(xr + i xi): even lane ar*xr - ai*xi, odd lane ar*xi + ai*xr
    __m256d prod = _mm256_addsub_pd(_mm256_mul_pd(ar, v),
                                    _mm256_mul_pd(ai, swap_ri(v)));
    _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(w, prod));
  }
  for (std::size_t i = n2; i < x.size(); ++i) y[i] += a * x[i];
}

void scal(cplx a, std::span<cplx> x) {
  double* xp = reinterpret_cast<double*>(x.data());
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  const std::size_t n2 = (x.size() / 2) * 2;
  for (std::size_t i = 0; i < n2; i += 2) {
    __m256d v = _mm256_loadu_pd(xp + 2 * i);
    __m256d prod = _mm256_addsub_pd(_mm256_mul_pd(ar, v),
                                    _mm256_mul_pd(ai, swap_ri(v)));
    _mm256_storeu_pd(xp + 2 * i, prod);
  }
  for (std::size_t i = n2; i < x.size(); ++i) x[i] *= a;
}

double weighted_nrm2sq(std::span<const double> w, std::span<const cplx> x) {
  assert(w.size() == x.size());
  const double* xp = reinterpret_cast<const double*>(x.data());
  const std::size_t n2 = (x.size() / 2) * 2;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < n2; i += 2) {
    __m256d a = _mm256_loadu_pd(xp + 2 * i);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(a, a), dup_pairs(w.data() + i), acc);
  }
  double s = hsum(acc);
  for (std::size_t i = n2; i < x.size(); ++i)
    s += w[i] * (x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  return s;
}

void diag_mul(std::span<const double> w, std::span<const cplx> x, std::span<cplx> y) {
  assert(w.size() == x.size() && x.size() == y.size());
  const double* xp = reinterpret_cast<const double*>(x.data());
  double* yp = reinterpret_cast<double*>(y.data());
  const std::size_t n2 = (x.size() / 2) * 2;
  for (std::size_t i = 0; i < n2; i += 2) {
    __m256d a = _mm256_loadu_pd(xp + 2 * i);
    _mm256_storeu_pd(yp + 2 * i, _mm256_mul_pd(a, dup_pairs(w.data() + i)));
  }
  for (std::size_t i = n2; i < x.size(); ++i) y[i] = w[i] * x[i];
}

}  // namespace absentia::kernels::avx2
