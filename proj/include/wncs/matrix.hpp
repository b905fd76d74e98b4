#pragma once

// Small dense row-major matrix type. Dimensions here are tiny (<= ~16),
// so everything is straightforward O(n^3) with partial pivoting.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace wncs {

using Vector = std::vector<double>;
using Complex = std::complex<double>;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diag(const Vector& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    Matrix transpose() const;
    Matrix abs() const; // entrywise absolute value

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(double s);

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Vector operator*(const Matrix& a, const Vector& x);

    // Places `block` with its top-left corner at (i, j).
    void set_block(std::size_t i, std::size_t j, const Matrix& block);
    Matrix block(std::size_t i, std::size_t j, std::size_t r, std::size_t c) const;

    double max_abs() const;       // max entry magnitude
    double frobenius() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    Vector data_;
};

// Horizontal / vertical concatenation.
Matrix hcat(const Matrix& a, const Matrix& b);
Matrix vcat(const Matrix& a, const Matrix& b);

// Solve A x = b by LU with partial pivoting. Throws NumericsError on a
// singular pivot. solve_many treats B column-by-column, inverse is
// solve_many against I.
Vector lu_solve(Matrix a, Vector b);
Matrix lu_solve_many(Matrix a, Matrix b);
Matrix inverse(const Matrix& a);

// Complex LU solve used for frequency responses: (A) z = b with A, b complex,
// stored as dense vectors of std::complex<double> row-major.
std::vector<Complex> lu_solve_complex(std::vector<Complex> a, std::size_t n,
                                      std::vector<Complex> b);

double dot(const Vector& x, const Vector& y);
double norm2(const Vector& x);

} // namespace wncs
