#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "hyperqfim/errors.hpp"

namespace hyperqfim {

// Dense real matrix, row-major storage. Everything in this library lives in
// dimension 2..16, so there is no blocking, no sparsity, no expression
// templates -- just plain loops.
//
// All operations are pure functions on immutable values; nothing here holds
// shared mutable state, so concurrent use from sweep workers is safe.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols);

    static Matrix identity(int n);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }

    double& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return a_[static_cast<std::size_t>(r) * cols_ + c]; }

    Matrix transpose() const;
    double trace() const;
    double max_abs() const;
    bool all_finite() const noexcept;
    // max |a(r,c) - a(c,r)| over the square part
    double asymmetry() const;

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(double s);

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, Matrix a);

std::vector<double> operator*(const Matrix& a, std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);

// Kronecker product, dimensions (ra*rb) x (ca*cb).
Matrix kron(const Matrix& a, const Matrix& b);

// Column-stacking vectorization and its inverse.
std::vector<double> vec_cols(const Matrix& x);
Matrix unvec_cols(std::span<const double> v, int rows, int cols);

struct SymEigen {
    std::vector<double> values; // sorted descending
    Matrix vectors;             // orthonormal columns; a = V diag(values) V^T
};

// Cyclic Jacobi eigendecomposition. Rotations with an exactly-zero pivot are
// skipped, so block sparsity patterns (and exactly-degenerate 2x2 blocks) are
// resolved without cross-block rounding noise.
SymEigen eig_sym(const Matrix& a, double sym_tol = 1e-12);

// Moore-Penrose pseudo-inverse of a symmetric PSD matrix via eig_sym.
// Eigenvalues below rank_tol * lambda_max are treated as zero; an eigenvalue
// below -rank_tol * lambda_max raises not_psd.
Matrix pinv_sym(const Matrix& a, double rank_tol = 1e-12);

// V diag(exp(lambda)) V^T.
Matrix expm_sym(const Matrix& a);

// B = V^T m V (rotation into the eigenbasis).
Matrix rotate_to_basis(const Matrix& vectors, const Matrix& m);

} // namespace hyperqfim
