#pragma once
#include <cstddef>

// Dense vector kernels used by the integrator and the matrix routines.
// A scalar reference implementation always exists; an AVX2+FMA variant is
// selected at runtime when the CPU supports it. Both variants are
// equivalence-tested against each other.
namespace wncs::kern {

enum class Backend { Scalar, Avx2, Neon };

Backend active_backend();
const char* backend_name();

// Test hook: force a backend (Scalar always succeeds; SIMD backends only if
// available). Returns the backend actually in effect.
Backend force_backend(Backend b);

double dot(const double* x, const double* y, std::size_t n);
double nrm2(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n); // y += a*x
void scal(double a, double* x, std::size_t n);                  // x *= a
// y = A*x for row-major A (r x c)
void matvec(const double* a, std::size_t r, std::size_t c, const double* x, double* y);

// Reference implementations (always scalar), used by the equivalence tests.
namespace ref {
double dot(const double* x, const double* y, std::size_t n);
double nrm2(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scal(double a, double* x, std::size_t n);
void matvec(const double* a, std::size_t r, std::size_t c, const double* x, double* y);
} // namespace ref

} // namespace wncs::kern
