#include "hyperqfim/dephasing.hpp"

#include <algorithm>
#include <cmath>

namespace hyperqfim {

namespace {

// sinh(x)/x and sin(x)/x with the removable singularity handled
double sinhc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 + x * x / 6.0;
    return std::sinh(x) / x;
}

double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

} // namespace

NoiseModel::NoiseModel(double tau_, double mu_, KernelVariant v) : tau(tau_), mu(mu_), variant(v) {
    if (!(tau > 0.0) || !std::isfinite(tau))
        raise(Errc::domain_error, "NoiseModel: tau must be positive");
    if (std::abs(tau - 0.25) <= 1e-12)
        raise(Errc::domain_error, "NoiseModel: tau = 1/4 sits on the regime boundary");
    if (!(mu >= 0.0 && mu <= 1.0))
        raise(Errc::domain_error, "NoiseModel: mu must lie in [0, 1]");
}

double NoiseModel::oscillation_rate() const { return std::sqrt(std::abs(1.0 - 16.0 * tau * tau)); }

double dephasing_kernel(double t, const NoiseModel& m) {
    if (!(t >= 0.0)) raise(Errc::domain_error, "dephasing_kernel: t must be >= 0");
    const double v = m.oscillation_rate();
    const double x = m.variant == KernelVariant::literal ? v * t : v * t / (2.0 * m.tau);
    const double x0 = t / (2.0 * m.tau);
    if (!m.markovian()) return std::exp(-x0) * (std::cos(x) + (x / v) * sinc(x));
    // sinh(x)/v written as (x/v) sinhc(x) so the tau -> 1/4 boundary stays finite
    if (x < 30.0) return std::exp(-x0) * (std::cosh(x) + (x / v) * sinhc(x));
    // two-exponential form: cosh(x) overflows long before exp(x - x0) matters
    // (x < x0 in both variants for tau < 1/4)
    return 0.5 * ((1.0 + 1.0 / v) * std::exp(x - x0) + (1.0 - 1.0 / v) * std::exp(-x - x0));
}

FlipProbability flip_probability(double t, const NoiseModel& m) {
    const double raw = 0.5 * (1.0 - dephasing_kernel(t, m));
    FlipProbability out;
    out.value = std::clamp(raw, 0.0, 1.0);
    out.clamped = raw < -1e-15 || raw > 1.0 + 1e-15;
    return out;
}

double KrausSet::sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

KrausSet kraus_weights(double p, double mu) {
    if (!(p >= 0.0 && p <= 1.0)) raise(Errc::domain_error, "kraus_weights: p outside [0, 1]");
    if (!(mu >= 0.0 && mu <= 1.0)) raise(Errc::domain_error, "kraus_weights: mu outside [0, 1]");
    const std::array<double, 4> marginal = {1.0 - p, 0.0, 0.0, p};
    KrausSet k;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double w = (1.0 - mu) * marginal[static_cast<std::size_t>(i)] * marginal[static_cast<std::size_t>(j)];
            if (i == j) w += mu * marginal[static_cast<std::size_t>(i)];
            k.weights[static_cast<std::size_t>(i * 4 + j)] = w;
        }
    return k;
}

XState apply_channel(const XState& rho, const KrausSet& k) {
    static const Matrix tau0 = Matrix::identity(2);
    static const Matrix tauz = Matrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});

    const Matrix in = rho.to_matrix();
    Matrix out(4, 4);
    for (int i : {0, 3})
        for (int j : {0, 3}) {
            const double w = k.weight(i, j);
            if (w == 0.0) continue;
            const Matrix op = kron(i == 0 ? tau0 : tauz, j == 0 ? tau0 : tauz);
            out += w * (op * in * op.transpose());
        }
    // weights off the (identity, z) axes would leave the X pattern; they are
    // structurally zero for this channel
    return finalize_xstate(out(0, 0), out(0, 3), out(1, 1), out(1, 2), out(3, 3));
}

double kappa_factor(double t, const NoiseModel& m) {
    const double g = dephasing_kernel(t, m);
    const double g2 = g * g;
    return g2 + (1.0 - g2) * m.mu;
}

EvolvedState evolve(const XState& rho0, const XStatePartials& d_alpha0,
                    const XStatePartials& d_phi0, double t, const NoiseModel& m) {
    const double kappa = kappa_factor(t, m);
    EvolvedState out;
    out.kappa = kappa;
    out.state = finalize_xstate(rho0.r11, kappa * rho0.r14, rho0.r22, kappa * rho0.r23, rho0.r44);
    out.d_alpha = d_alpha0;
    out.d_alpha.dr14 *= kappa;
    out.d_alpha.dr23 *= kappa;
    out.d_phi = d_phi0;
    out.d_phi.dr14 *= kappa;
    out.d_phi.dr23 *= kappa;
    return out;
}

Trajectory run_trajectory(const PhysicsParams& p, double phi, const NoiseModel& m,
                          std::span<const double> times) {
    if (times.empty()) raise(Errc::bad_config, "run_trajectory: empty time grid");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            raise(Errc::bad_config, "run_trajectory: times must be strictly increasing");

    const XState rho0 = make_state(p, phi);
    const XStatePartials da0 = density_partials(p, phi, Parameter::alpha_psi);
    const XStatePartials dp0 = density_partials(p, phi, Parameter::phi);

    Trajectory tr;
    tr.times.assign(times.begin(), times.end());
    tr.kappa.reserve(times.size());
    tr.qfim.reserve(times.size());
    tr.bounds.reserve(times.size());
    tr.physical.reserve(times.size());
    for (double t : times) {
        const EvolvedState ev = evolve(rho0, da0, dp0, t, m);
        const QfiMatrix f = qfim_spectral(ev.state, ev.d_alpha, ev.d_phi);
        tr.kappa.push_back(ev.kappa);
        tr.qfim.push_back(f);
        tr.bounds.push_back(variance_bounds(f));
        tr.physical.push_back(ev.state.physical ? 1 : 0);
    }
    return tr;
}

} // namespace hyperqfim
