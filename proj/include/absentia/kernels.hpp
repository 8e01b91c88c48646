#pragma once

#include <complex>
#include <span>
#include <string_view>

namespace absentia::kernels {

using cplx = std::complex<double>;

/// Instruction sets the vector kernels are implemented for. The scalar
/// variants define the reference semantics; AVX2 variants are selected at
/// runtime when the CPU supports them and must agree with the reference up
/// to floating-point reassociation.
enum class Isa { scalar, avx2 };

Isa active_isa();
std::string_view isa_name(Isa isa);

/// Test hook: pin the dispatch to one instruction set. Throws
/// std::runtime_error if the requested set is unsupported on this CPU.
void force_isa(Isa isa);

/// sum_i conj(x[i]) * y[i]
cplx dot(std::span<const cplx> x, std::span<const cplx> y);

/// sum_i |x[i]|^2
double nrm2sq(std::span<const cplx> x);

/// y[i] += a * x[i]
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);

/// x[i] *= a
void scal(cplx a, std::span<cplx> x);

/// sum_i w[i] * |x[i]|^2  (w real)
double weighted_nrm2sq(std::span<const double> w, std::span<const cplx> x);

/// y[i] = w[i] * x[i]  (w real diagonal)
void diag_mul(std::span<const double> w, std::span<const cplx> x, std::span<cplx> y);

}  // namespace absentia::kernels
