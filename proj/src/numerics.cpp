#include "wncs/numerics.hpp"

#include "wncs/error.hpp"
#include "wncs/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wncs {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double sign_of(double a, double b) { return b >= 0.0 ? std::fabs(a) : -std::fabs(a); }

// Diagonal similarity scaling (radix 2, exact in floating point) so that row
// and column norms are comparable. Leaves eigenvalues unchanged.
void balance(Matrix& a) {
    const std::size_t n = a.rows();
    const double radix = 2.0, sqrdx = radix * radix;
    bool done = false;
    while (!done) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) {
                    c += std::fabs(a(j, i));
                    r += std::fabs(a(i, j));
                }
            if (c != 0.0 && r != 0.0) {
                double g = r / radix, f = 1.0, s = c + r;
                while (c < g) { f *= radix; c *= sqrdx; }
                g = r * radix;
                while (c > g) { f /= radix; c /= sqrdx; }
                if ((c + r) / f < 0.95 * s) {
                    done = false;
                    g = 1.0 / f;
                    for (std::size_t j = 0; j < n; ++j) a(i, j) *= g;
                    for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
                }
            }
        }
    }
}

// Householder similarity reduction to upper Hessenberg form.
void hessenberg(Matrix& a) {
    const std::size_t n = a.rows();
    if (n < 3) return;
    Vector v;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double xnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) xnorm = std::hypot(xnorm, a(i, k));
        if (xnorm == 0.0) continue;
        double alpha = a(k + 1, k) >= 0.0 ? -xnorm : xnorm;
        v.assign(n - k - 1, 0.0);
        v[0] = a(k + 1, k) - alpha;
        for (std::size_t i = k + 2; i < n; ++i) v[i - k - 1] = a(i, k);
        double vv = kern::ref::dot(v.data(), v.data(), v.size());
        if (vv == 0.0) continue;
        // left multiply by P = I - 2 v v^T / (v^T v) on rows k+1..n-1
        for (std::size_t j = k; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * a(k + 1 + i, j);
            s *= 2.0 / vv;
            for (std::size_t i = 0; i < v.size(); ++i) a(k + 1 + i, j) -= s * v[i];
        }
        // right multiply by P on columns k+1..n-1
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < v.size(); ++j) s += a(i, k + 1 + j) * v[j];
            s *= 2.0 / vv;
            for (std::size_t j = 0; j < v.size(); ++j) a(i, k + 1 + j) -= s * v[j];
        }
        a(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
}

// Francis double-shift QR on an upper Hessenberg matrix. Destroys h.
std::vector<Complex> hqr(Matrix& h) {
    const int n = static_cast<int>(h.rows());
    std::vector<Complex> eig(static_cast<std::size_t>(n));
    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::fabs(h(i, j));
    if (anorm == 0.0) return eig;
    int nn = n - 1;
    double t = 0.0;
    double p = 0, q = 0, r = 0, s = 0, u = 0, v = 0, w = 0, x = 0, y = 0, z = 0;
    while (nn >= 0) {
        int its = 0;
        int l;
        do {
            for (l = nn; l >= 1; --l) {
                s = std::fabs(h(l - 1, l - 1)) + std::fabs(h(l, l));
                if (s == 0.0) s = anorm;
                if (std::fabs(h(l, l - 1)) <= kEps * s) {
                    h(l, l - 1) = 0.0;
                    break;
                }
            }
            if (l < 0) l = 0;
            x = h(nn, nn);
            if (l == nn) {
                eig[nn--] = Complex(x + t, 0.0);
            } else {
                y = h(nn - 1, nn - 1);
                w = h(nn, nn - 1) * h(nn - 1, nn);
                if (l == nn - 1) {
                    p = 0.5 * (y - x);
                    q = p * p + w;
                    z = std::sqrt(std::fabs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + sign_of(z, p);
                        double r1 = x + z;
                        double r2 = (z != 0.0) ? x - w / z : r1;
                        eig[nn - 1] = Complex(r1, 0.0);
                        eig[nn] = Complex(r2, 0.0);
                    } else {
                        eig[nn] = Complex(x + p, z);
                        eig[nn - 1] = Complex(x + p, -z);
                    }
                    nn -= 2;
                } else {
                    if (its == 60) throw NumericsError("QR eigenvalue iteration stalled");
                    if (its != 0 && its % 10 == 0) {
                        // exceptional shift to break limit cycles
                        t += x;
                        for (int i = 0; i <= nn; ++i) h(i, i) -= x;
                        s = std::fabs(h(nn, nn - 1)) + std::fabs(h(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        w = -0.4375 * s * s;
                    }
                    ++its;
                    int m;
                    for (m = nn - 2; m >= l; --m) {
                        z = h(m, m);
                        r = x - z;
                        s = y - z;
                        p = (r * s - w) / h(m + 1, m) + h(m, m + 1);
                        q = h(m + 1, m + 1) - z - r - s;
                        r = h(m + 2, m + 1);
                        s = std::fabs(p) + std::fabs(q) + std::fabs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        u = std::fabs(h(m, m - 1)) * (std::fabs(q) + std::fabs(r));
                        v = std::fabs(p) *
                            (std::fabs(h(m - 1, m - 1)) + std::fabs(z) + std::fabs(h(m + 1, m + 1)));
                        if (u <= kEps * v) break;
                    }
                    for (int i = m + 2; i <= nn; ++i) {
                        h(i, i - 2) = 0.0;
                        if (i != m + 2) h(i, i - 3) = 0.0;
                    }
                    for (int k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = h(k, k - 1);
                            q = h(k + 1, k - 1);
                            r = (k != nn - 1) ? h(k + 2, k - 1) : 0.0;
                            x = std::fabs(p) + std::fabs(q) + std::fabs(r);
                            if (x != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        s = sign_of(std::sqrt(p * p + q * q + r * r), p);
                        if (s != 0.0) {
                            if (k == m) {
                                if (l != m) h(k, k - 1) = -h(k, k - 1);
                            } else {
                                h(k, k - 1) = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for (int j = k; j <= nn; ++j) {
                                p = h(k, j) + q * h(k + 1, j);
                                if (k != nn - 1) {
                                    p += r * h(k + 2, j);
                                    h(k + 2, j) -= p * z;
                                }
                                h(k + 1, j) -= p * y;
                                h(k, j) -= p * x;
                            }
                            int mmin = nn < k + 3 ? nn : k + 3;
                            for (int i = l; i <= mmin; ++i) {
                                p = x * h(i, k) + y * h(i, k + 1);
                                if (k != nn - 1) {
                                    p += z * h(i, k + 2);
                                    h(i, k + 2) -= p * r;
                                }
                                h(i, k + 1) -= p * q;
                                h(i, k) -= p;
                            }
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }
    std::sort(eig.begin(), eig.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return eig;
}

double power_iteration(const Matrix& m, Vector v) {
    const std::size_t r = m.rows(), c = m.cols();
    double nv = norm2(v);
    if (nv == 0.0) return 0.0;
    for (auto& e : v) e /= nv;
    Vector mv(r), w(c);
    double sigma2 = 0.0;
    int settled = 0;
    for (int it = 0; it < 100000; ++it) {
        kern::matvec(m.data(), r, c, v.data(), mv.data());
        double s2 = kern::ref::dot(mv.data(), mv.data(), r);
        std::fill(w.begin(), w.end(), 0.0);
        for (std::size_t i = 0; i < r; ++i)
            kern::ref::axpy(mv[i], m.data() + i * c, w.data(), c);
        double wn = norm2(w);
        if (wn == 0.0) return std::sqrt(s2);
        for (std::size_t j = 0; j < c; ++j) v[j] = w[j] / wn;
        if (std::fabs(s2 - sigma2) <= 1e-12 * std::max(s2, 1e-300)) {
            if (++settled >= 2) return std::sqrt(s2);
        } else {
            settled = 0;
        }
        sigma2 = s2;
    }
    return std::sqrt(sigma2);
}

} // namespace

double spectral_norm(const Matrix& m) {
    if (m.empty()) return 0.0;
    const std::size_t c = m.cols();
    // several deterministic starts guard against a start vector orthogonal
    // to the dominant singular subspace
    Vector ones(c, 1.0);
    Vector ramp(c);
    for (std::size_t j = 0; j < c; ++j) ramp[j] = 1.0 / static_cast<double>(j + 1);
    Vector alt(c);
    for (std::size_t j = 0; j < c; ++j) alt[j] = (j % 2 == 0) ? 1.0 : -0.5;
    double best = power_iteration(m, ones);
    best = std::max(best, power_iteration(m, ramp));
    best = std::max(best, power_iteration(m, alt));
    return best;
}

std::vector<Complex> eigenvalues(const Matrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("eigenvalues need a square matrix");
    if (m.empty()) return {};
    Matrix h = m;
    balance(h);
    hessenberg(h);
    return hqr(h);
}

double spectral_abscissa(const Matrix& m) {
    double a = -std::numeric_limits<double>::infinity();
    for (const auto& e : eigenvalues(m)) a = std::max(a, e.real());
    return a;
}

bool is_hurwitz(const Matrix& m) { return spectral_abscissa(m) < 0.0; }

namespace {

void check_dims(const StateSpace& sys) {
    if (sys.a.rows() != sys.a.cols()) throw DimensionError("state matrix must be square");
    if (sys.b.rows() != sys.a.rows()) throw DimensionError("input matrix row mismatch");
    if (sys.c.cols() != sys.a.rows()) throw DimensionError("output matrix column mismatch");
    if (sys.d.rows() != sys.c.rows() || sys.d.cols() != sys.b.cols())
        throw DimensionError("feedthrough shape mismatch");
}

// sigma_max of a complex matrix through its real embedding [[X,-Y],[Y,X]].
double sigma_max_complex(const std::vector<Complex>& g, std::size_t rows, std::size_t cols) {
    Matrix e(2 * rows, 2 * cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            double re = g[i * cols + j].real(), im = g[i * cols + j].imag();
            e(i, j) = re;
            e(i, cols + j) = -im;
            e(rows + i, j) = im;
            e(rows + i, cols + j) = re;
        }
    return spectral_norm(e);
}

} // namespace

double sigma_max_response(const StateSpace& sys, double omega) {
    check_dims(sys);
    const std::size_t n = sys.a.rows(), m = sys.b.cols(), p = sys.c.rows();
    if (m == 0 || p == 0) return 0.0;
    if (n == 0) return spectral_norm(sys.d);
    std::vector<Complex> lhs(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            lhs[i * n + j] = Complex(-sys.a(i, j), i == j ? omega : 0.0);
    std::vector<Complex> g(p * m);
    std::vector<Complex> rhs(n), x(n);
    for (std::size_t col = 0; col < m; ++col) {
        for (std::size_t i = 0; i < n; ++i) rhs[i] = sys.b(i, col);
        x = lu_solve_complex(lhs, n, rhs);
        for (std::size_t i = 0; i < p; ++i) {
            Complex acc(sys.d(i, col), 0.0);
            for (std::size_t j = 0; j < n; ++j) acc += sys.c(i, j) * x[j];
            g[i * m + col] = acc;
        }
    }
    return sigma_max_complex(g, p, m);
}

namespace {

Matrix bounded_real_hamiltonian(const StateSpace& sys, double gamma) {
    const std::size_t n = sys.a.rows(), m = sys.b.cols();
    Matrix r = Matrix::identity(m) * (gamma * gamma) - sys.d.transpose() * sys.d;
    Matrix rinv = inverse(r);
    Matrix abar = sys.a + sys.b * rinv * sys.d.transpose() * sys.c;
    Matrix q = sys.c.transpose() *
               (Matrix::identity(sys.c.rows()) + sys.d * rinv * sys.d.transpose()) * sys.c;
    Matrix h(2 * n, 2 * n);
    h.set_block(0, 0, abar);
    h.set_block(0, n, sys.b * rinv * sys.b.transpose());
    h.set_block(n, 0, -1.0 * q);
    h.set_block(n, n, -1.0 * abar.transpose());
    return h;
}

bool has_imaginary_axis_eig(const Matrix& h) {
    for (const auto& e : eigenvalues(h))
        if (std::fabs(e.real()) <= 1e-8 * (1.0 + std::abs(e))) return true;
    return false;
}

} // namespace

double l2_gain(const StateSpace& sys, double rel_tol) {
    check_dims(sys);
    const std::size_t n = sys.a.rows(), m = sys.b.cols(), p = sys.c.rows();
    if (m == 0 || p == 0) return 0.0;
    if (n == 0) return spectral_norm(sys.d);
    if (!is_hurwitz(sys.a)) throw DomainError("l2 gain requested for a non-Hurwitz system");
    double lo = spectral_norm(sys.d);
    lo = std::max(lo, sigma_max_response(sys, 0.0));
    for (int i = 0; i < 33; ++i) {
        double omega = 1e-3 * std::pow(1e8, i / 32.0);
        lo = std::max(lo, sigma_max_response(sys, omega));
    }
    if (lo == 0.0) return 0.0;
    double hi = 2.0 * lo;
    int grow = 0;
    while (has_imaginary_axis_eig(bounded_real_hamiltonian(sys, hi))) {
        lo = hi;
        hi *= 2.0;
        if (++grow > 200) throw NumericsError("l2 gain upper bound search failed");
    }
    for (int it = 0; it < 200 && (hi - lo) > rel_tol * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (has_imaginary_axis_eig(bounded_real_hamiltonian(sys, mid)))
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

double l2_gain_sweep(const StateSpace& sys, int points) {
    check_dims(sys);
    if (sys.b.cols() == 0 || sys.c.rows() == 0) return 0.0;
    if (sys.a.rows() == 0) return spectral_norm(sys.d);
    const double lo_w = 1e-3, hi_w = 1e5;
    std::vector<double> omegas;
    omegas.reserve(static_cast<std::size_t>(points) + 1);
    omegas.push_back(0.0);
    for (int i = 0; i < points; ++i)
        omegas.push_back(lo_w * std::pow(hi_w / lo_w, double(i) / double(points - 1)));
    double best = spectral_norm(sys.d);
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        double s = sigma_max_response(sys, omegas[i]);
        if (s > best) {
            best = s;
            best_i = i;
        }
    }
    // golden-section refinement in log frequency around the best sample
    double wa, wb;
    if (best_i == 0) {
        wa = 0.0;
        wb = omegas[std::min<std::size_t>(2, omegas.size() - 1)];
    } else {
        wa = omegas[best_i - 1];
        wb = best_i + 1 < omegas.size() ? omegas[best_i + 1] : omegas[best_i] * 10.0;
    }
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = wa, b = wb;
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    double f1 = sigma_max_response(sys, c1), f2 = sigma_max_response(sys, c2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + gr * (b - a);
            f2 = sigma_max_response(sys, c2);
        } else {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - gr * (b - a);
            f1 = sigma_max_response(sys, c1);
        }
    }
    return std::max(best, std::max(f1, f2));
}

} // namespace wncs
