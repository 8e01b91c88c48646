#include "absentia/kernels.hpp"

#include <cassert>
#include <stdexcept>

namespace absentia::kernels {

namespace scalar {

cplx dot(std::span<const cplx> x, std::span<const cplx> y) {
  assert(x.size() == y.size());
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const cplx& a = x[i];
    const cplx& b = y[i];
    re += a.real() * b.real() + a.imag() * b.imag();
    im += a.real() * b.imag() - a.imag() * b.real();
  }
  return {re, im};
}

double nrm2sq(std::span<const cplx> x) {
  double s = 0.0;
  for (const cplx& a : x) s += a.real() * a.real() + a.imag() * a.imag();
  return s;
}

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void scal(cplx a, std::span<cplx> x) {
  for (cplx& v : x) v *= a;
}

double weighted_nrm2sq(std::span<const double> w, std::span<const cplx> x) {
  assert(w.size() == x.size());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    s += w[i] * (x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  return s;
}

void diag_mul(std::span<const double> w, std::span<const cplx> x, std::span<cplx> y) {
  assert(w.size() == x.size() && x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = w[i] * x[i];
}

}  // namespace scalar

// Implemented in kernels_avx2.cpp (compiled with -mavx2 -mfma).
namespace avx2 {
cplx dot(std::span<const cplx> x, std::span<const cplx> y);
double nrm2sq(std::span<const cplx> x);
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);
void scal(cplx a, std::span<cplx> x);
double weighted_nrm2sq(std::span<const double> w, std::span<const cplx> x);
void diag_mul(std::span<const double> w, std::span<const cplx> x, std::span<cplx> y);
}  // namespace avx2

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa g_isa = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;

}  // namespace

Isa active_isa() { return g_isa; }

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "?";
}

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && !cpu_has_avx2())
    throw std::runtime_error("kernels: AVX2 not supported on this CPU");
  g_isa = isa;
}

cplx dot(std::span<const cplx> x, std::span<const cplx> y) {
  return g_isa == Isa::avx2 ? avx2::dot(x, y) : scalar::dot(x, y);
}

double nrm2sq(std::span<const cplx> x) {
  return g_isa == Isa::avx2 ? avx2::nrm2sq(x) : scalar::nrm2sq(x);
}

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  g_isa == Isa::avx2 ? avx2::axpy(a, x, y) : scalar::axpy(a, x, y);
}

void scal(cplx a, std::span<cplx> x) {
  g_isa == Isa::avx2 ? avx2::scal(a, x) : scalar::scal(a, x);
}

double weighted_nrm2sq(std::span<const double> w, std::span<const cplx> x) {
  return g_isa == Isa::avx2 ? avx2::weighted_nrm2sq(w, x) : scalar::weighted_nrm2sq(w, x);
}

void diag_mul(std::span<const double> w, std::span<const cplx> x, std::span<cplx> y) {
  g_isa == Isa::avx2 ? avx2::diag_mul(w, x, y) : scalar::diag_mul(w, x, y);
}

}  // namespace absentia::kernels
