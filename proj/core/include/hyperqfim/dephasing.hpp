#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "hyperqfim/hyperon_state.hpp"
#include "hyperqfim/qfim.hpp"

namespace hyperqfim {

// The literal variant evaluates the dephasing kernel with oscillation
// arguments v*t; that choice gives
// G'(0) = 1 - 1/(2 tau) and pushes G above 1 for tau > 1/2, so the flip
// probability needs clamping. The rate-normalized variant (default) uses
// arguments v*t/(2 tau), which restores G'(0) = 0 and |G| <= 1.
enum class KernelVariant { literal, rate_normalized };

// Random-telegraph dephasing environment: correlation time tau (Markovian for
// tau < 1/4, oscillatory memory for tau > 1/4; the crossover point is
// rejected) and classical correlation mu in [0, 1] between the two qubits'
// noise. The telegraph frequency is fixed to 1.
struct NoiseModel {
    double tau;
    double mu;
    KernelVariant variant;

    explicit NoiseModel(double tau_, double mu_, KernelVariant v = KernelVariant::rate_normalized);

    bool markovian() const { return tau < 0.25; }
    // v = sqrt(|1 - 16 tau^2|)
    double oscillation_rate() const;
};

// Dephasing kernel G(t); G(0) = 1 in both variants and regimes.
double dephasing_kernel(double t, const NoiseModel& m);

struct FlipProbability {
    double value; // (1 - G)/2 clamped to [0, 1]
    bool clamped; // true when the raw value left [0, 1] (literal variant only)
};

FlipProbability flip_probability(double t, const NoiseModel& m);

// Weights p_{ij} over the sixteen Pauli pairs tau_i (x) tau_j; only the
// (identity, z) combinations are populated for dephasing. Built as
// (1 - mu) p_i p_j + mu p_i delta_ij with marginals p_0 = 1 - p, p_z = p.
struct KrausSet {
    std::array<double, 16> weights{}; // index i*4 + j, axes (0, x, y, z)

    double weight(int i, int j) const { return weights[static_cast<std::size_t>(i * 4 + j)]; }
    double sum() const;
};

KrausSet kraus_weights(double p, double mu);

// sum_ij O_ij rho O_ij^dag by explicit 4x4 conjugations. Diagonal entries are
// untouched; both coherences pick up the same factor.
XState apply_channel(const XState& rho, const KrausSet& k);

// kappa = G^2(t) + (1 - G^2(t)) mu, the coherence suppression factor.
double kappa_factor(double t, const NoiseModel& m);

struct EvolvedState {
    XState state;
    XStatePartials d_alpha;
    XStatePartials d_phi;
    double kappa;
};

// Scales r14, r23 and their partials by kappa(t); kappa carries no parameter
// dependence, so differentiation commutes with the channel.
EvolvedState evolve(const XState& rho0, const XStatePartials& d_alpha0,
                    const XStatePartials& d_phi0, double t, const NoiseModel& m);

// Per-time precision bounds along the dephasing evolution. Undefined bounds
// at a time point are recorded (infinities / flags), not fatal.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> kappa;
    std::vector<QfiMatrix> qfim;
    std::vector<VarianceBounds> bounds;
    std::vector<std::uint8_t> physical;
};

Trajectory run_trajectory(const PhysicsParams& p, double phi, const NoiseModel& m,
                          std::span<const double> times);

} // namespace hyperqfim
