#include "wncs/kernels.hpp"

#include <cmath>

namespace wncs::kern {

namespace ref {

double dot(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

double nrm2(const double* x, std::size_t n) {
    // scaled accumulation so large/small magnitudes do not overflow
    double scale = 0.0, ssq = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double ax = std::fabs(x[i]);
        if (ax == 0.0) continue;
        if (scale < ax) {
            ssq = 1.0 + ssq * (scale / ax) * (scale / ax);
            scale = ax;
        } else {
            ssq += (ax / scale) * (ax / scale);
        }
    }
    return scale * std::sqrt(ssq);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal(double a, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void matvec(const double* a, std::size_t r, std::size_t c, const double* x, double* y) {
    for (std::size_t i = 0; i < r; ++i) y[i] = dot(a + i * c, x, c);
}

} // namespace ref

#ifdef WNCS_HAVE_AVX2_TU
namespace avx2 {
bool available();
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scal(double a, double* x, std::size_t n);
void matvec(const double* a, std::size_t r, std::size_t c, const double* x, double* y);
} // namespace avx2
#endif

namespace {

struct Dispatch {
    Backend backend;
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*scal)(double, double*, std::size_t);
    void (*matvec)(const double*, std::size_t, std::size_t, const double*, double*);
};

constexpr Dispatch scalar_dispatch{Backend::Scalar, ref::dot, ref::axpy, ref::scal, ref::matvec};

Dispatch detect() {
#ifdef WNCS_HAVE_AVX2_TU
    if (avx2::available())
        return Dispatch{Backend::Avx2, avx2::dot, avx2::axpy, avx2::scal, avx2::matvec};
#endif
    return scalar_dispatch;
}

Dispatch g_dispatch = detect();

} // namespace

Backend active_backend() { return g_dispatch.backend; }

const char* backend_name() {
    switch (g_dispatch.backend) {
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
    default: return "scalar";
    }
}

Backend force_backend(Backend b) {
    if (b == Backend::Scalar) {
        g_dispatch = scalar_dispatch;
        return g_dispatch.backend;
    }
#ifdef WNCS_HAVE_AVX2_TU
    if (b == Backend::Avx2 && avx2::available()) {
        g_dispatch = Dispatch{Backend::Avx2, avx2::dot, avx2::axpy, avx2::scal, avx2::matvec};
        return g_dispatch.backend;
    }
#endif
    g_dispatch = detect();
    return g_dispatch.backend;
}

double dot(const double* x, const double* y, std::size_t n) { return g_dispatch.dot(x, y, n); }

double nrm2(const double* x, std::size_t n) {
    // sqrt(dot) is fine for the magnitudes seen here; divergence detection
    // saturates trajectories long before overflow territory.
    return std::sqrt(g_dispatch.dot(x, x, n));
}

void axpy(double a, const double* x, double* y, std::size_t n) { g_dispatch.axpy(a, x, y, n); }

void scal(double a, double* x, std::size_t n) { g_dispatch.scal(a, x, n); }

void matvec(const double* a, std::size_t r, std::size_t c, const double* x, double* y) {
    g_dispatch.matvec(a, r, c, x, y);
}

} // namespace wncs::kern
