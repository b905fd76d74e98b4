#include "wncs/matrix.hpp"

#include "wncs/error.hpp"
#include "wncs/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

namespace wncs {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionError("ragged initializer list");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diag(const Vector& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::abs() const {
    Matrix m = *this;
    for (auto& v : m.data_) v = std::fabs(v);
    return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix add shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sub shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    kern::scal(s, data_.data(), data_.size());
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix mul shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            kern::axpy(aik, b.data() + k * b.cols_, c.data() + i * c.cols_, b.cols_);
        }
    return c;
}

Vector operator*(const Matrix& a, const Vector& x) {
    if (a.cols_ != x.size()) throw DimensionError("matvec shape mismatch");
    Vector y(a.rows_);
    kern::matvec(a.data(), a.rows_, a.cols_, x.data(), y.data());
    return y;
}

void Matrix::set_block(std::size_t i, std::size_t j, const Matrix& block) {
    if (i + block.rows_ > rows_ || j + block.cols_ > cols_)
        throw DimensionError("set_block out of range");
    for (std::size_t r = 0; r < block.rows_; ++r)
        for (std::size_t c = 0; c < block.cols_; ++c) (*this)(i + r, j + c) = block(r, c);
}

Matrix Matrix::block(std::size_t i, std::size_t j, std::size_t r, std::size_t c) const {
    if (i + r > rows_ || j + c > cols_) throw DimensionError("block out of range");
    Matrix m(r, c);
    for (std::size_t rr = 0; rr < r; ++rr)
        for (std::size_t cc = 0; cc < c; ++cc) m(rr, cc) = (*this)(i + rr, j + cc);
    return m;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::fabs(v));
    return m;
}

double Matrix::frobenius() const { return kern::ref::nrm2(data_.data(), data_.size()); }

Matrix hcat(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw DimensionError("hcat row mismatch");
    Matrix m(a.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(0, a.cols(), b);
    return m;
}

Matrix vcat(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw DimensionError("vcat col mismatch");
    Matrix m(a.rows() + b.rows(), a.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), 0, b);
    return m;
}

namespace {

// In-place LU factorization with partial pivoting; perm holds row swaps.
void lu_factor(Matrix& a, std::vector<std::size_t>& perm) {
    const std::size_t n = a.rows();
    if (n != a.cols()) throw DimensionError("lu_factor needs a square matrix");
    perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::fabs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            double v = std::fabs(a(i, k));
            if (v > best) { best = v; p = i; }
        }
        if (best == 0.0) throw NumericsError("singular matrix in LU solve");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            std::swap(perm[k], perm[p]);
        }
        double pivot = a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            double m = a(i, k) / pivot;
            a(i, k) = m;
            if (m != 0.0)
                kern::ref::axpy(-m, a.data() + k * n + (k + 1), a.data() + i * n + (k + 1),
                                n - k - 1);
        }
    }
}

Vector lu_apply(const Matrix& a, const std::vector<std::size_t>& perm, const Vector& b) {
    const std::size_t n = a.rows();
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm[i]];
    for (std::size_t i = 1; i < n; ++i)
        x[i] -= kern::ref::dot(a.data() + i * n, x.data(), i);
    for (std::size_t ir = n; ir-- > 0;) {
        double s = x[ir] - kern::ref::dot(a.data() + ir * n + (ir + 1), x.data() + ir + 1,
                                          n - ir - 1);
        x[ir] = s / a(ir, ir);
    }
    return x;
}

} // namespace

Vector lu_solve(Matrix a, Vector b) {
    if (a.rows() != b.size()) throw DimensionError("lu_solve shape mismatch");
    std::vector<std::size_t> perm;
    lu_factor(a, perm);
    return lu_apply(a, perm, b);
}

Matrix lu_solve_many(Matrix a, Matrix b) {
    if (a.rows() != b.rows()) throw DimensionError("lu_solve_many shape mismatch");
    std::vector<std::size_t> perm;
    lu_factor(a, perm);
    Matrix x(b.rows(), b.cols());
    Vector col(b.rows());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
        Vector sol = lu_apply(a, perm, col);
        for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = sol[i];
    }
    return x;
}

Matrix inverse(const Matrix& a) { return lu_solve_many(a, Matrix::identity(a.rows())); }

std::vector<Complex> lu_solve_complex(std::vector<Complex> a, std::size_t n,
                                      std::vector<Complex> b) {
    if (a.size() != n * n || b.size() != n) throw DimensionError("complex solve shape mismatch");
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(a[k * n + k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            double v = std::abs(a[i * n + k]);
            if (v > best) { best = v; p = i; }
        }
        if (best == 0.0) throw NumericsError("singular matrix in complex LU solve");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
            std::swap(perm[k], perm[p]);
        }
        Complex pivot = a[k * n + k];
        for (std::size_t i = k + 1; i < n; ++i) {
            Complex m = a[i * n + k] / pivot;
            a[i * n + k] = m;
            for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= m * a[k * n + j];
        }
    }
    std::vector<Complex> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm[i]];
    for (std::size_t i = 1; i < n; ++i) {
        Complex s = 0.0;
        for (std::size_t j = 0; j < i; ++j) s += a[i * n + j] * x[j];
        x[i] -= s;
    }
    for (std::size_t ir = n; ir-- > 0;) {
        Complex s = x[ir];
        for (std::size_t j = ir + 1; j < n; ++j) s -= a[ir * n + j] * x[j];
        x[ir] = s / a[ir * n + ir];
    }
    return x;
}

double dot(const Vector& x, const Vector& y) {
    if (x.size() != y.size()) throw DimensionError("dot shape mismatch");
    return kern::dot(x.data(), y.data(), x.size());
}

double norm2(const Vector& x) { return kern::nrm2(x.data(), x.size()); }

} // namespace wncs
