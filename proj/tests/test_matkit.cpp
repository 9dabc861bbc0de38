#include <doctest.h>

#include <cmath>
#include <random>

#include "hyperqfim/matkit.hpp"

using namespace hyperqfim;

namespace {

std::mt19937_64 rng_for(const char* tag) {
    std::uint64_t h = 1469598103934665603ull;
    for (const char* p = tag; *p; ++p) h = (h ^ static_cast<std::uint64_t>(*p)) * 1099511628211ull;
    return std::mt19937_64(h);
}

Matrix random_matrix(std::mt19937_64& rng, int r, int c) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = u(rng);
    return m;
}

Matrix random_symmetric(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m(i, j) = m(j, i) = u(rng);
    return m;
}

// independent Gauss-Jordan inverse, used as the pinv oracle on full-rank input
Matrix gauss_inverse(Matrix a) {
    const int n = a.rows();
    Matrix inv = Matrix::identity(n);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        REQUIRE(std::abs(a(piv, col)) > 1e-12);
        if (piv != col)
            for (int c = 0; c < n; ++c) {
                std::swap(a(piv, c), a(col, c));
                std::swap(inv(piv, c), inv(col, c));
            }
        const double d = a(col, col);
        for (int c = 0; c < n; ++c) {
            a(col, c) /= d;
            inv(col, c) /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a(r, col);
            if (f == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                a(r, c) -= f * a(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

} // namespace

TEST_CASE("kron identity and diagonal cases") {
    const Matrix i4 = kron(Matrix::identity(2), Matrix::identity(2));
    CHECK((i4 - Matrix::identity(4)).max_abs() == 0.0);

    const Matrix a = Matrix::from_rows({{1.0, 0.0}, {0.0, 2.0}});
    const Matrix b = Matrix::from_rows({{3.0, 0.0}, {0.0, 4.0}});
    const Matrix k = kron(a, b);
    CHECK(k(0, 0) == 3.0);
    CHECK(k(1, 1) == 4.0);
    CHECK(k(2, 2) == 6.0);
    CHECK(k(3, 3) == 8.0);
    CHECK(k.max_abs() == 8.0);
    CHECK(k.asymmetry() == 0.0);
}

TEST_CASE("kron mixed-product identity on random pairs") {
    auto rng = rng_for("kron-mixed");
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix a = random_matrix(rng, 2, 2), b = random_matrix(rng, 2, 2);
        const Matrix c = random_matrix(rng, 2, 2), d = random_matrix(rng, 2, 2);
        CHECK((kron(a, b) * kron(c, d) - kron(a * c, b * d)).max_abs() < 1e-12);
    }
}

TEST_CASE("vec stacks columns first to last") {
    const Matrix x = Matrix::from_rows({{1.0, 3.0}, {2.0, 4.0}});
    const auto v = vec_cols(x);
    CHECK(v == std::vector<double>{1.0, 2.0, 3.0, 4.0});
    const Matrix back = unvec_cols(v, 2, 2);
    CHECK((back - x).max_abs() == 0.0);
}

TEST_CASE("vec identities: sandwich product and trace pairing") {
    auto rng = rng_for("vec-ident");
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix x = random_matrix(rng, 2, 2), z = random_matrix(rng, 2, 2),
                     y = random_matrix(rng, 2, 2);
        const auto lhs = vec_cols(x * z * y);
        const auto vz = vec_cols(z);
        const auto rhs = kron(y.transpose(), x) * std::span<const double>(vz);
        for (std::size_t i = 0; i < lhs.size(); ++i) CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-12));

        const Matrix u = random_matrix(rng, 3, 3), w = random_matrix(rng, 3, 3);
        CHECK((u.transpose() * w).trace() ==
              doctest::Approx(dot(vec_cols(u), vec_cols(w))).epsilon(1e-12));

        // two-factor identity in both factorizations
        const auto vxy = vec_cols(x * y);
        const auto vx = vec_cols(x);
        const auto vy = vec_cols(y);
        const auto left = kron(Matrix::identity(2), x) * std::span<const double>(vy);
        const auto right = kron(y.transpose(), Matrix::identity(2)) * std::span<const double>(vx);
        for (std::size_t i = 0; i < vxy.size(); ++i) {
            CHECK(vxy[i] == doctest::Approx(left[i]).epsilon(1e-12));
            CHECK(vxy[i] == doctest::Approx(right[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("eig_sym on diagonal and rank-1 input") {
    const SymEigen d = eig_sym(Matrix::from_rows({{3.0, 0.0}, {0.0, 1.0}}));
    CHECK(d.values[0] == 3.0);
    CHECK(d.values[1] == 1.0);

    const SymEigen r1 = eig_sym(Matrix::from_rows({{1.0, 1.0}, {1.0, 1.0}}));
    CHECK(r1.values[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(r1.values[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
}

TEST_CASE("eig_sym reconstructs random 16x16 and keeps vectors orthonormal") {
    auto rng = rng_for("eig-16");
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix a = random_symmetric(rng, 16);
        const SymEigen e = eig_sym(a);
        Matrix lam(16, 16);
        for (int i = 0; i < 16; ++i) lam(i, i) = e.values[static_cast<std::size_t>(i)];
        CHECK((e.vectors * lam * e.vectors.transpose() - a).max_abs() < 1e-10);
        CHECK((e.vectors.transpose() * e.vectors - Matrix::identity(16)).max_abs() < 1e-12);
        for (int i = 1; i < 16; ++i)
            CHECK(e.values[static_cast<std::size_t>(i - 1)] >= e.values[static_cast<std::size_t>(i)]);
    }
}

TEST_CASE("eig_sym rejects asymmetric input") {
    Matrix a = Matrix::identity(3);
    a(0, 1) = 1e-6;
    CHECK_THROWS_AS(eig_sym(a), Error);
    try {
        eig_sym(a);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::not_symmetric);
    }
}

TEST_CASE("pinv_sym inverts the nonzero part of a singular diagonal") {
    const Matrix p = pinv_sym(Matrix::from_rows({{2.0, 0.0}, {0.0, 0.0}}));
    CHECK(p(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p(1, 1) == 0.0);
    CHECK(p(0, 1) == 0.0);
}

TEST_CASE("pinv_sym equals a Gauss-Jordan inverse on full-rank input") {
    auto rng = rng_for("pinv-full");
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix b = random_matrix(rng, 4, 4);
        const Matrix a = b * b.transpose() + 0.5 * Matrix::identity(4);
        CHECK((pinv_sym(a) - gauss_inverse(a)).max_abs() < 1e-10);
    }
}

TEST_CASE("pinv_sym satisfies the Moore-Penrose identities") {
    auto rng = rng_for("pinv-mp");
    for (int trial = 0; trial < 20; ++trial) {
        const SymEigen basis = eig_sym(random_symmetric(rng, 6));
        Matrix d(6, 6);
        std::uniform_real_distribution<double> u(0.1, 2.0);
        for (int i = 0; i < 6; ++i) d(i, i) = (trial % 2 == 0 && i >= 4) ? 0.0 : u(rng);
        const Matrix a = basis.vectors * d * basis.vectors.transpose();
        const Matrix p = pinv_sym(a);
        CHECK((a * p * a - a).max_abs() < 1e-10);
        CHECK((p * a * p - p).max_abs() < 1e-10);
        CHECK((a * p).asymmetry() < 1e-10);
        CHECK((p * a).asymmetry() < 1e-10);
    }
}

TEST_CASE("pinv_sym rejects significantly negative eigenvalues") {
    try {
        pinv_sym(Matrix::from_rows({{1.0, 0.0}, {0.0, -0.5}}));
        FAIL("expected not_psd");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::not_psd);
    }
}

TEST_CASE("expm_sym: zero matrix, diagonal, Taylor-series oracle") {
    CHECK((expm_sym(Matrix(3, 3)) - Matrix::identity(3)).max_abs() < 1e-15);

    const Matrix e = expm_sym(Matrix::from_rows({{-1.0, 0.0}, {0.0, -2.0}}));
    CHECK(e(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(e(1, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(e(0, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));

    auto rng = rng_for("expm-taylor");
    for (int trial = 0; trial < 10; ++trial) {
        Matrix a = random_symmetric(rng, 5);
        a *= 0.3; // small norm so 12 Taylor terms suffice
        Matrix series = Matrix::identity(5);
        Matrix power = Matrix::identity(5);
        double fact = 1.0;
        for (int k = 1; k <= 12; ++k) {
            power = power * a;
            fact *= k;
            series += (1.0 / fact) * power;
        }
        CHECK((expm_sym(a) - series).max_abs() < 1e-10);
    }
}

TEST_CASE("expm_sym rejects asymmetric input") {
    Matrix a = Matrix::identity(2);
    a(1, 0) = 0.3;
    CHECK_THROWS_AS(expm_sym(a), Error);
}

TEST_CASE("matrix construction rejects non-finite entries") {
    CHECK_THROWS_AS(Matrix::from_rows({{1.0, std::nan("")}, {0.0, 1.0}}), Error);
}
