#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "hyperqfim/matkit.hpp"

namespace hyperqfim {

enum class Mode { constrained, free_params };

// Production/decay parameters of the e+e- -> J/psi -> B Bbar chain.
//
// constrained mode: beta_psi and gamma_psi follow from (alpha_psi, delta_phi)
// via beta = sqrt(1-alpha^2) sin(dPhi), gamma = sqrt(1-alpha^2) cos(dPhi), so
// alpha^2 + beta^2 + gamma^2 = 1. free mode: (alpha, beta, gamma) are taken
// as given with no constraint; delta_phi is ignored. The two modes also
// differ in d/d(alpha): constrained mode chains through beta(alpha),
// gamma(alpha), free mode holds them fixed.
struct PhysicsParams {
    double alpha_psi = 0.0;
    double delta_phi = 0.0;
    Mode mode = Mode::constrained;
    double beta_psi = 0.0;  // free mode only
    double gamma_psi = 0.0; // free mode only
};

struct DerivedBetaGamma {
    double beta_psi;
    double gamma_psi;
};

// beta/gamma from (alpha, dPhi); mode_mismatch in free mode.
DerivedBetaGamma derived_params(const PhysicsParams& p);

struct AlphaBetaGamma {
    double alpha;
    double beta;
    double gamma;
};

// Mode-aware (alpha, beta, gamma) triple.
AlphaBetaGamma effective_abg(const PhysicsParams& p);

// 4x4 spin-correlation matrix S_{mu,nu} over (0, x, y, z) axes as a function
// of the production angle phi in [0, pi]. singular_denominator when
// 1 + alpha cos^2(phi) falls below tolerance.
Matrix correlation_matrix(const PhysicsParams& p, double phi);

// Coefficients of the X-form state: polarization a_z0 and diagonal
// correlations b_xx, b_yy, b_zz after the axis relabeling that diagonalizes
// the transverse sector.
struct XStateCoeffs {
    double a_z0;
    double b_xx;
    double b_yy;
    double b_zz;
};

XStateCoeffs xstate_coeffs(const PhysicsParams& p, double phi);

// Two-qubit X-form density matrix: nonzero entries on the main and
// anti-diagonal only, r22 = r33 and symmetric coherences. `physical` flags
// unit trace and positive semidefiniteness within 1e-12 (free-mode slices can
// legitimately leave the physical region; such states are flagged, not
// rejected).
struct XState {
    double r11 = 0.0;
    double r14 = 0.0;
    double r22 = 0.0;
    double r23 = 0.0;
    double r44 = 0.0;
    bool physical = true;

    double trace() const { return r11 + 2.0 * r22 + r44; }
    Matrix to_matrix() const;
};

// Checks trace and PSD and sets the flag; entries are taken as-is.
XState finalize_xstate(double r11, double r14, double r22, double r23, double r44);

// Literal assembly from the coefficient form.
XState density_matrix(const XStateCoeffs& c);

// Fused construction of the same state directly from the physics parameters.
// Algebraically identical to density_matrix(xstate_coeffs(p, phi)) but keeps
// the small outer-block occupancy (~cos^4 phi near phi = pi/2) instead of
// rounding it into the O(1) coefficients; sweeps and bound evaluations use
// this builder.
XState make_state(const PhysicsParams& p, double phi);

enum class Parameter { alpha_psi, phi };

struct XStatePartials {
    Parameter parameter = Parameter::alpha_psi;
    double dr11 = 0.0;
    double dr14 = 0.0;
    double dr22 = 0.0;
    double dr23 = 0.0;
    double dr44 = 0.0;

    Matrix to_matrix() const;
};

// Closed-form partial derivatives of the five X-state entries with respect to
// alpha_psi or phi at the same point as make_state.
XStatePartials density_partials(const PhysicsParams& p, double phi, Parameter which);

// Spectrum of the state assembled directly from the spin-correlation matrix
// in the Pauli tensor basis (complex Hermitian, handled by the real 2n x 2n
// embedding). Local-unitary equivalence makes this equal to the spectrum of
// the X-form state; used as an independent construction oracle. Returned
// descending.
std::array<double, 4> correlation_spectrum(const PhysicsParams& p, double phi);

// Single-baryon polarization beta cos(phi) sin(phi) / (1 + alpha cos^2(phi)).
double polarization(const PhysicsParams& p, double phi);

enum class Channel { lambda, sigma_plus, xi_minus, xi_zero };

// BESIII central values for the four octet channels.
PhysicsParams channel_preset(Channel c);
Channel channel_from_name(std::string_view name);

struct NamedPreset {
    std::string name;
    PhysicsParams params;
};

const std::vector<NamedPreset>& builtin_presets();

// Plain-text preset file: one channel per line "name alpha_psi delta_phi",
// '#' starts a comment. Lets updated measurements be ingested without a
// rebuild.
std::vector<NamedPreset> load_channel_presets(const std::string& path);

// Preset lookup across builtin and file-loaded entries (case-insensitive).
PhysicsParams find_preset(std::string_view name, const std::vector<NamedPreset>& extra = {});

} // namespace hyperqfim
