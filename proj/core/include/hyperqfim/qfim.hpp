#pragma once

#include "hyperqfim/hyperon_state.hpp"
#include "hyperqfim/matkit.hpp"

namespace hyperqfim {

// 2x2 quantum Fisher information matrix over (alpha_psi, phi).
struct QfiMatrix {
    double f_aa = 0.0;
    double f_ap = 0.0;
    double f_pp = 0.0;

    double det() const { return f_aa * f_pp - f_ap * f_ap; }
};

// Lambda = rho^T (x) I + I (x) rho, 16x16, assembled with kron.
Matrix build_lambda(const XState& rho);

// Column-stacked 16-vector of the partial-derivative matrix.
std::vector<double> vec_partials(const XStatePartials& d);

// F_ij = 2 vec[d_i rho]^T Lambda^+ vec[d_j rho]  (vectorization method).
QfiMatrix qfim_vectorized(const XState& rho, const XStatePartials& d_alpha,
                          const XStatePartials& d_phi, double rank_tol = 1e-12);

// F_ij = 2 sum_{p_a + p_b > 0} <a|d_i rho|b><b|d_j rho|a> / (p_a + p_b) in the
// eigenbasis of rho. Terms with p_a + p_b <= rank_tol * p_max are skipped;
// with the default rank_tol = 0 only exact zeros (and negative sums) are
// dropped, which resolves the removable rank singularities of the boundary
// slices. This is the route the sweep engine uses.
QfiMatrix qfim_spectral(const XState& rho, const XStatePartials& d_alpha,
                        const XStatePartials& d_phi, double rank_tol = 0.0);

// Integral representation 2 int_0^inf tr[e^{-rho t} d_i rho e^{-rho t} d_j rho] dt,
// evaluated in closed form in the eigenbasis. Requires full rank
// (rank_deficient otherwise; the integrand does not decay on the kernel).
QfiMatrix qfim_integral(const XState& rho, const XStatePartials& d_alpha,
                        const XStatePartials& d_phi, double rank_tol = 1e-12);

// Symmetric logarithmic derivative with the X sparsity pattern:
// [[l11, 0, 0, l14], [0, l22d, l22o, 0], [0, l22o, l22d, 0], [l14, 0, 0, l44]].
struct SldOperator {
    double l11 = 0.0;
    double l14 = 0.0;
    double l22_diag = 0.0;
    double l22_off = 0.0;
    double l44 = 0.0;

    Matrix to_matrix() const;
};

// vec[L] = 2 Lambda^+ vec[d rho], reshaped. On rank-deficient states this is
// the minimal-norm (support) solution of d rho = (L rho + rho L)/2.
SldOperator sld(const XState& rho, const XStatePartials& d, double rank_tol = 1e-12);

// F_ij = tr[(L_i L_j + L_j L_i) rho] / 2.
QfiMatrix qfim_from_slds(const XState& rho, const SldOperator& l_alpha, const SldOperator& l_phi);

// tr(rho [L_alpha, L_phi]); identically zero for this real-symmetric family,
// certifying saturability of the matrix Cramer-Rao bound.
double saturation_trace(const XState& rho, const SldOperator& l_alpha, const SldOperator& l_phi);

// Cramer-Rao bounds. Undefined bounds are reported as IEEE infinity
// (simultaneous when det(F) <= 1e-14, individual when the diagonal entry is
// <= 1e-14); gamma_ratio is NaN if both individual bounds are undefined.
struct VarianceBounds {
    double var_sim_alpha = 0.0;
    double var_sim_phi = 0.0;
    double var_ind_alpha = 0.0;
    double var_ind_phi = 0.0;
    double gamma_ratio = 0.0;

    bool simultaneous_defined() const;
};

VarianceBounds variance_bounds(const QfiMatrix& f);

// Reference formulas for the analytically solvable slices, used to validate
// the general machinery.
enum class ClosedFormCase {
    sim_phi_he_limit,      // alpha=1, beta=gamma=0:      (1+cos^2 phi)^2 / (4 sin^2 phi)
    sim_phi_transverse,    // phi=pi/2:                   (1-alpha) / (2 beta^2)
    sim_alpha_transverse,  // phi=pi/2:                   1 - alpha^2
    sim_alpha_unpolarized, // alpha=beta=gamma=0:         1 / (1 - cos^2 phi)^2
    ind_phi_transverse,    // phi=pi/2:                   (1-alpha) / (2 beta^2)
    ind_phi_poles,         // phi=0 or pi:                (1+alpha)^2 / (2 beta^2)
};

struct ClosedFormArgs {
    double alpha = 0.0;
    double beta = 0.0;
    double phi = 0.0;
};

// domain_error at removable singularities (sin phi = 0, beta = 0).
double closed_form_variance(ClosedFormCase which, const ClosedFormArgs& args);

// Closed-form pseudo-inverse of Lambda for the production-family structure
// (inner coherence equal to inner population). Valid when the outer block is
// nonsingular; closed_form_singular when a denominator vanishes.
Matrix lambda_plus_closed_form(const XState& rho);

} // namespace hyperqfim
