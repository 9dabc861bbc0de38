#include "hyperqfim/qfim.hpp"

#include <cmath>
#include <limits>

namespace hyperqfim {

namespace {

constexpr double kDetTol = 1e-14;
constexpr double kDiagTol = 1e-14;
constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

Matrix build_lambda(const XState& rho) {
    const Matrix m = rho.to_matrix();
    const Matrix id = Matrix::identity(4);
    return kron(m.transpose(), id) + kron(id, m);
}

std::vector<double> vec_partials(const XStatePartials& d) { return vec_cols(d.to_matrix()); }

QfiMatrix qfim_vectorized(const XState& rho, const XStatePartials& d_alpha,
                          const XStatePartials& d_phi, double rank_tol) {
    const Matrix lam_plus = pinv_sym(build_lambda(rho), rank_tol);
    const std::vector<double> va = vec_partials(d_alpha);
    const std::vector<double> vp = vec_partials(d_phi);
    const std::vector<double> la = lam_plus * std::span<const double>(va);
    const std::vector<double> lp = lam_plus * std::span<const double>(vp);

    QfiMatrix f;
    f.f_aa = 2.0 * dot(va, la);
    f.f_ap = 2.0 * dot(va, lp);
    f.f_pp = 2.0 * dot(vp, lp);
    return f;
}

namespace {

QfiMatrix eigenbasis_pair_sum(const SymEigen& eg, const Matrix& ba, const Matrix& bp,
                              double skip_below) {
    QfiMatrix f;
    const int n = static_cast<int>(eg.values.size());
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const double s = eg.values[static_cast<std::size_t>(a)] + eg.values[static_cast<std::size_t>(b)];
            if (s <= skip_below) continue;
            const double w = 2.0 / s;
            f.f_aa += w * ba(a, b) * ba(b, a);
            f.f_ap += w * ba(a, b) * bp(b, a);
            f.f_pp += w * bp(a, b) * bp(b, a);
        }
    }
    return f;
}

} // namespace

QfiMatrix qfim_spectral(const XState& rho, const XStatePartials& d_alpha,
                        const XStatePartials& d_phi, double rank_tol) {
    const SymEigen eg = eig_sym(rho.to_matrix());
    const Matrix ba = rotate_to_basis(eg.vectors, d_alpha.to_matrix());
    const Matrix bp = rotate_to_basis(eg.vectors, d_phi.to_matrix());
    const double pmax = std::max(eg.values.front(), 0.0);
    return eigenbasis_pair_sum(eg, ba, bp, rank_tol * pmax);
}

QfiMatrix qfim_integral(const XState& rho, const XStatePartials& d_alpha,
                        const XStatePartials& d_phi, double rank_tol) {
    const SymEigen eg = eig_sym(rho.to_matrix());
    const double pmax = std::max(eg.values.front(), 0.0);
    if (eg.values.back() <= rank_tol * pmax)
        raise(Errc::rank_deficient, "qfim_integral: state not full rank, integral diverges");
    const Matrix ba = rotate_to_basis(eg.vectors, d_alpha.to_matrix());
    const Matrix bp = rotate_to_basis(eg.vectors, d_phi.to_matrix());
    return eigenbasis_pair_sum(eg, ba, bp, 0.0);
}

Matrix SldOperator::to_matrix() const {
    Matrix m(4, 4);
    m(0, 0) = l11;
    m(0, 3) = m(3, 0) = l14;
    m(1, 1) = m(2, 2) = l22_diag;
    m(1, 2) = m(2, 1) = l22_off;
    m(3, 3) = l44;
    return m;
}

SldOperator sld(const XState& rho, const XStatePartials& d, double rank_tol) {
    const Matrix lam_plus = pinv_sym(build_lambda(rho), rank_tol);
    const std::vector<double> v = vec_partials(d);
    std::vector<double> lv = lam_plus * std::span<const double>(v);
    for (double& x : lv) x *= 2.0;
    const Matrix l = unvec_cols(lv, 4, 4);

    SldOperator out;
    out.l11 = l(0, 0);
    out.l14 = 0.5 * (l(0, 3) + l(3, 0));
    out.l22_diag = 0.5 * (l(1, 1) + l(2, 2));
    out.l22_off = 0.5 * (l(1, 2) + l(2, 1));
    out.l44 = l(3, 3);
    return out;
}

QfiMatrix qfim_from_slds(const XState& rho, const SldOperator& l_alpha, const SldOperator& l_phi) {
    const Matrix r = rho.to_matrix();
    const Matrix la = l_alpha.to_matrix();
    const Matrix lp = l_phi.to_matrix();

    QfiMatrix f;
    f.f_aa = ((la * la + la * la) * r).trace() * 0.5;
    f.f_ap = ((la * lp + lp * la) * r).trace() * 0.5;
    f.f_pp = ((lp * lp + lp * lp) * r).trace() * 0.5;
    return f;
}

double saturation_trace(const XState& rho, const SldOperator& l_alpha, const SldOperator& l_phi) {
    const Matrix la = l_alpha.to_matrix();
    const Matrix lp = l_phi.to_matrix();
    return (rho.to_matrix() * (la * lp - lp * la)).trace();
}

bool VarianceBounds::simultaneous_defined() const {
    return std::isfinite(var_sim_alpha) && std::isfinite(var_sim_phi);
}

VarianceBounds variance_bounds(const QfiMatrix& f) {
    VarianceBounds b;
    const double det = f.det();
    if (det > kDetTol) {
        b.var_sim_alpha = f.f_pp / det;
        b.var_sim_phi = f.f_aa / det;
    } else {
        b.var_sim_alpha = kInf;
        b.var_sim_phi = kInf;
    }
    b.var_ind_alpha = f.f_aa > kDiagTol ? 1.0 / f.f_aa : kInf;
    b.var_ind_phi = f.f_pp > kDiagTol ? 1.0 / f.f_pp : kInf;
    // algebraically (var_ind_alpha + var_ind_phi) / ((var_sim_alpha + var_sim_phi)/2)
    b.gamma_ratio = (f.f_aa > kDiagTol && f.f_pp > kDiagTol)
                        ? 2.0 * det / (f.f_aa * f.f_pp)
                        : std::numeric_limits<double>::quiet_NaN();
    return b;
}

double closed_form_variance(ClosedFormCase which, const ClosedFormArgs& args) {
    const double alpha = args.alpha;
    const double beta = args.beta;
    const double phi = args.phi;
    switch (which) {
    case ClosedFormCase::sim_phi_he_limit: {
        const double s = std::sin(phi);
        if (std::abs(s) < 1e-15)
            raise(Errc::domain_error, "closed_form_variance: sin(phi) = 0");
        const double c2 = std::cos(phi) * std::cos(phi);
        return (1.0 + c2) * (1.0 + c2) / (4.0 * s * s);
    }
    case ClosedFormCase::sim_phi_transverse:
    case ClosedFormCase::ind_phi_transverse:
        if (beta == 0.0) raise(Errc::domain_error, "closed_form_variance: beta = 0");
        return (1.0 - alpha) / (2.0 * beta * beta);
    case ClosedFormCase::sim_alpha_transverse:
        return 1.0 - alpha * alpha;
    case ClosedFormCase::sim_alpha_unpolarized: {
        const double s2 = 1.0 - std::cos(phi) * std::cos(phi);
        if (std::abs(s2) < 1e-15)
            raise(Errc::domain_error, "closed_form_variance: sin(phi) = 0");
        return 1.0 / (s2 * s2);
    }
    case ClosedFormCase::ind_phi_poles:
        if (beta == 0.0) raise(Errc::domain_error, "closed_form_variance: beta = 0");
        return (1.0 + alpha) * (1.0 + alpha) / (2.0 * beta * beta);
    }
    raise(Errc::domain_error, "closed_form_variance: unknown case");
}

Matrix lambda_plus_closed_form(const XState& rho) {
    const double r11 = rho.r11;
    const double r14 = rho.r14;
    const double r22 = rho.r22;
    const double r44 = rho.r44;

    const double outer_det = r11 * r44 - r14 * r14;
    const double outer_sum = r11 + r44;
    const double mixed = 2.0 * r11 * r22 + r11 * r44 + 2.0 * r22 * r44 - r14 * r14 + 4.0 * r22 * r22;
    const double d1 = 2.0 * outer_sum * outer_det;
    const double d2 = outer_det * mixed;
    const double d3 = 16.0 * r22;

    if (std::abs(outer_det) <= 1e-12 || std::abs(outer_sum) <= 1e-12 ||
        std::abs(mixed) <= 1e-12 || std::abs(r22) <= 1e-12)
        raise(Errc::closed_form_singular, "lambda_plus_closed_form: denominator below tolerance");

    Matrix l(16, 16);
    auto set_sym = [&l](int i, int j, double v) {
        l(i, j) = v;
        l(j, i) = v;
    };

    // coherence sector, vec indices {1, 4, 13, 16} (1-based)
    l(0, 0) = (-r14 * r14 + r44 * r44 + r11 * r44) / d1;
    l(3, 3) = (2.0 * r11 * r44 - r14 * r14) / d1;
    l(12, 12) = l(3, 3);
    l(15, 15) = (r11 * r11 + r11 * r44 - r14 * r14) / d1;
    set_sym(0, 3, -r14 * r44 / d1);
    set_sym(0, 12, -r14 * r44 / d1);
    set_sym(0, 15, r14 * r14 / d1);
    set_sym(3, 12, r14 * r14 / d1);
    set_sym(3, 15, -r11 * r14 / d1);
    set_sym(12, 15, -r11 * r14 / d1);

    // mixed sectors, vec indices {2, 3, 14, 15} and {5, 9, 8, 12}
    const double n_diag_low = -r14 * r14 * r22 - r14 * r14 * r44 + 2.0 * r22 * r22 * r44 +
                              r22 * r44 * r44 + 2.0 * r11 * r22 * r44 + r11 * r44 * r44;
    const double n_off_low = -r22 * (r14 * r14 + r44 * r44 + 2.0 * r22 * r44);
    const double n_cross_a =
        -r14 * (r11 * r22 + r11 * r44 + r22 * r44 - r14 * r14 + 2.0 * r22 * r22);
    const double n_cross_b = r14 * r22 * (r11 + 2.0 * r22 + r44);
    const double n_diag_high = r11 * r11 * r22 + r11 * r11 * r44 - r11 * r14 * r14 +
                               2.0 * r11 * r22 * r22 + 2.0 * r11 * r22 * r44 - r14 * r14 * r22;
    const double n_off_high = -r22 * (r11 * r11 + 2.0 * r11 * r22 + r14 * r14);

    struct Quad {
        int a, b, c, d; // 0-based vec indices, pattern (a,b) low pair / (c,d) high pair
    };
    for (const Quad q : {Quad{1, 2, 13, 14}, Quad{4, 8, 7, 11}}) {
        l(q.a, q.a) = n_diag_low / d2;
        l(q.b, q.b) = n_diag_low / d2;
        set_sym(q.a, q.b, n_off_low / d2);
        l(q.c, q.c) = n_diag_high / d2;
        l(q.d, q.d) = n_diag_high / d2;
        set_sym(q.c, q.d, n_off_high / d2);
        set_sym(q.a, q.c, n_cross_a / d2);
        set_sym(q.b, q.d, n_cross_a / d2);
        set_sym(q.a, q.d, n_cross_b / d2);
        set_sym(q.b, q.c, n_cross_b / d2);
    }

    // inner sector, vec indices {6, 7, 10, 11}
    l(5, 5) = l(6, 6) = l(9, 9) = l(10, 10) = 5.0 / d3;
    set_sym(5, 10, -3.0 / d3);
    set_sym(6, 9, -3.0 / d3);
    set_sym(5, 6, 1.0 / d3);
    set_sym(5, 9, 1.0 / d3);
    set_sym(6, 10, 1.0 / d3);
    set_sym(9, 10, 1.0 / d3);

    return l;
}

} // namespace hyperqfim
