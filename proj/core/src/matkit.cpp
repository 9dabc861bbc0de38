#include "hyperqfim/matkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>

namespace hyperqfim {

namespace {

void require_finite(const Matrix& m, const char* who) {
    if (!m.all_finite()) raise(Errc::non_finite, std::string(who) + ": non-finite entry");
}

void require_square(const Matrix& m, const char* who) {
    if (m.rows() != m.cols() || m.rows() == 0)
        raise(Errc::dimension_mismatch, std::string(who) + ": square matrix required");
}

void require_symmetric(const Matrix& m, double tol, const char* who) {
    require_square(m, who);
    require_finite(m, who);
    if (m.asymmetry() > tol) raise(Errc::not_symmetric, std::string(who) + ": matrix not symmetric");
}

} // namespace

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows <= 0 || cols <= 0) raise(Errc::dimension_mismatch, "Matrix: non-positive dimensions");
    a_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const int nr = static_cast<int>(rows.size());
    if (nr == 0) raise(Errc::dimension_mismatch, "from_rows: empty");
    const int nc = static_cast<int>(rows.begin()->size());
    Matrix m(nr, nc);
    int r = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != nc)
            raise(Errc::dimension_mismatch, "from_rows: ragged rows");
        int c = 0;
        for (double v : row) m(r, c++) = v;
        ++r;
    }
    require_finite(m, "from_rows");
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

double Matrix::trace() const {
    double s = 0.0;
    const int n = std::min(rows_, cols_);
    for (int i = 0; i < n; ++i) s += (*this)(i, i);
    return s;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

bool Matrix::all_finite() const noexcept {
    for (double v : a_)
        if (!std::isfinite(v)) return false;
    return true;
}

double Matrix::asymmetry() const {
    double m = 0.0;
    const int n = std::min(rows_, cols_);
    for (int r = 0; r < n; ++r)
        for (int c = r + 1; c < n; ++c) m = std::max(m, std::abs((*this)(r, c) - (*this)(c, r)));
    return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) raise(Errc::dimension_mismatch, "operator+=");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) raise(Errc::dimension_mismatch, "operator-=");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& v : a_) v *= s;
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) raise(Errc::dimension_mismatch, "operator*: inner dimensions");
    Matrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

std::vector<double> operator*(const Matrix& a, std::span<const double> x) {
    if (a.cols() != static_cast<int>(x.size())) raise(Errc::dimension_mismatch, "matvec");
    std::vector<double> y(static_cast<std::size_t>(a.rows()), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = s;
    }
    return y;
}

double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) raise(Errc::dimension_mismatch, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    require_finite(a, "kron");
    require_finite(b, "kron");
    Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const double v = a(i, j);
            if (v == 0.0) continue;
            for (int r = 0; r < b.rows(); ++r)
                for (int c = 0; c < b.cols(); ++c)
                    k(i * b.rows() + r, j * b.cols() + c) = v * b(r, c);
        }
    return k;
}

std::vector<double> vec_cols(const Matrix& x) {
    require_finite(x, "vec_cols");
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(x.rows()) * x.cols());
    for (int c = 0; c < x.cols(); ++c)
        for (int r = 0; r < x.rows(); ++r) v.push_back(x(r, c));
    return v;
}

Matrix unvec_cols(std::span<const double> v, int rows, int cols) {
    if (static_cast<int>(v.size()) != rows * cols) raise(Errc::dimension_mismatch, "unvec_cols");
    Matrix m(rows, cols);
    std::size_t i = 0;
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) m(r, c) = v[i++];
    return m;
}

SymEigen eig_sym(const Matrix& a, double sym_tol) {
    require_symmetric(a, sym_tol, "eig_sym");
    const int n = a.rows();
    Matrix m = a;
    Matrix v = Matrix::identity(n);

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(m(p, q)));
        // scale-relative stop; exact zeros terminate after one sweep
        double scale = m.max_abs();
        if (off <= 1e-15 * std::max(scale, 1e-300)) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = m(p, q);
                if (apq == 0.0) continue;
                const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                const double app = m(p, p);
                const double aqq = m(q, q);
                m(p, p) = app - t * apq;
                m(q, q) = aqq + t * apq;
                m(p, q) = 0.0;
                m(q, p) = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = m(i, p);
                    const double aiq = m(i, q);
                    m(i, p) = c * aip - s * aiq;
                    m(p, i) = m(i, p);
                    m(i, q) = s * aip + c * aiq;
                    m(q, i) = m(i, q);
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = v(i, p);
                    const double viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return m(i, i) > m(j, j); });

    SymEigen e;
    e.values.resize(static_cast<std::size_t>(n));
    e.vectors = Matrix(n, n);
    for (int k = 0; k < n; ++k) {
        e.values[static_cast<std::size_t>(k)] = m(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
        for (int i = 0; i < n; ++i) e.vectors(i, k) = v(i, order[static_cast<std::size_t>(k)]);
    }
    return e;
}

Matrix pinv_sym(const Matrix& a, double rank_tol) {
    SymEigen e = eig_sym(a);
    const int n = a.rows();
    double scale = 0.0;
    for (double lam : e.values) scale = std::max(scale, std::abs(lam));
    if (scale == 0.0) return Matrix(n, n);

    for (double lam : e.values)
        if (lam < -rank_tol * scale)
            raise(Errc::not_psd, "pinv_sym: significantly negative eigenvalue");

    Matrix r(n, n);
    for (int k = 0; k < n; ++k) {
        const double lam = e.values[static_cast<std::size_t>(k)];
        if (lam <= rank_tol * scale) continue;
        const double w = 1.0 / lam;
        for (int i = 0; i < n; ++i) {
            const double vik = e.vectors(i, k);
            if (vik == 0.0) continue;
            for (int j = 0; j < n; ++j) r(i, j) += w * vik * e.vectors(j, k);
        }
    }
    return r;
}

Matrix expm_sym(const Matrix& a) {
    SymEigen e = eig_sym(a);
    const int n = a.rows();
    Matrix r(n, n);
    for (int k = 0; k < n; ++k) {
        const double w = std::exp(e.values[static_cast<std::size_t>(k)]);
        for (int i = 0; i < n; ++i) {
            const double vik = e.vectors(i, k);
            if (vik == 0.0) continue;
            for (int j = 0; j < n; ++j) r(i, j) += w * vik * e.vectors(j, k);
        }
    }
    return r;
}

Matrix rotate_to_basis(const Matrix& vectors, const Matrix& m) {
    return vectors.transpose() * m * vectors;
}

} // namespace hyperqfim
