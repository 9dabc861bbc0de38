#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hyperqfim/dephasing.hpp"

using namespace hyperqfim;

namespace {

const double kPi = std::numbers::pi;

PhysicsParams lambda_channel() { return channel_preset(Channel::lambda); }

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
    return v;
}

int count_sign_changes(const std::vector<double>& v) {
    int n = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if ((v[i - 1] < 0.0) != (v[i] < 0.0)) ++n;
    return n;
}

int count_local_extrema(const std::vector<double>& v, double tol) {
    int n = 0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        const double dl = v[i] - v[i - 1];
        const double dr = v[i + 1] - v[i];
        if ((dl > tol && dr < -tol) || (dl < -tol && dr > tol)) ++n;
    }
    return n;
}

} // namespace

TEST_CASE("noise model validation") {
    CHECK_THROWS_AS(NoiseModel(0.25, 0.5), Error);
    CHECK_THROWS_AS(NoiseModel(-0.1, 0.5), Error);
    CHECK_THROWS_AS(NoiseModel(0.2, 1.5), Error);
    const NoiseModel m(0.2, 0.5);
    CHECK(m.markovian());
    CHECK_FALSE(NoiseModel(5.0, 0.5).markovian());
    CHECK(NoiseModel(5.0, 0.0).oscillation_rate() == doctest::Approx(std::sqrt(399.0)));
}

TEST_CASE("kernel starts at one in every variant and regime") {
    for (const double tau : {0.1, 0.2, 0.5, 5.0})
        for (const KernelVariant v : {KernelVariant::literal, KernelVariant::rate_normalized}) {
            const NoiseModel m(tau, 0.3, v);
            CHECK(dephasing_kernel(0.0, m) == 1.0);
        }
}

TEST_CASE("markovian normalized kernel decays monotonically to zero") {
    const NoiseModel m(0.2, 0.0);
    double prev = 1.0;
    for (double t : linspace(0.0, 20.0, 400)) {
        const double g = dephasing_kernel(t, m);
        CHECK(g <= prev + 1e-15);
        CHECK(g >= 0.0);
        prev = g;
    }
    CHECK(prev < 1e-8);
}

TEST_CASE("markovian kernel stays finite for fast telegraphs at long times") {
    for (const KernelVariant v : {KernelVariant::literal, KernelVariant::rate_normalized}) {
        const NoiseModel m(0.01, 0.0, v);
        for (double t : {10.0, 100.0, 1000.0}) {
            const double g = dephasing_kernel(t, m);
            CHECK(std::isfinite(g));
            CHECK(g >= 0.0);
            CHECK(g <= 1.0);
        }
    }
    // continuity across the evaluation switch
    const NoiseModel m(0.2, 0.0);
    const double t_switch = 30.0 / (m.oscillation_rate() / (2.0 * m.tau));
    const double lo = dephasing_kernel(t_switch * (1.0 - 1e-9), m);
    const double hi = dephasing_kernel(t_switch * (1.0 + 1e-9), m);
    CHECK(lo == doctest::Approx(hi).epsilon(1e-9));
}

TEST_CASE("non-markovian normalized kernel oscillates near rate v/(2 tau)") {
    const NoiseModel m(5.0, 0.0);
    std::vector<double> g;
    for (double t : linspace(0.0, 5.0, 1000)) g.push_back(dephasing_kernel(t, m));
    CHECK(count_sign_changes(g) >= 1);
    CHECK(m.oscillation_rate() / (2.0 * m.tau) == doctest::Approx(2.0).epsilon(0.01));
    for (double v : g) CHECK(std::abs(v) <= 1.0 + 1e-12);
}

TEST_CASE("literal kernel exceeds one for slow telegraphs and is clamped in p") {
    // the overshoot window closes after t ~ (1 - 1/(2 tau)) / v^2
    const NoiseModel m(5.0, 0.0, KernelVariant::literal);
    CHECK(dephasing_kernel(0.002, m) > 1.0);
    const FlipProbability p = flip_probability(0.002, m);
    CHECK(p.value == 0.0);
    CHECK(p.clamped);

    const NoiseModel mn(5.0, 0.0);
    CHECK_FALSE(flip_probability(0.002, mn).clamped);
}

TEST_CASE("flip probability: zero at t = 0, nondecreasing in the markovian regime") {
    const NoiseModel m(0.2, 0.0);
    CHECK(flip_probability(0.0, m).value == 0.0);
    double prev = 0.0;
    for (double t : linspace(0.0, 20.0, 200)) {
        const double p = flip_probability(t, m).value;
        CHECK(p >= prev - 1e-15);
        CHECK(p <= 0.5 + 1e-15);
        prev = p;
    }
    // fully flipped kernel value maps to p = 1
    CHECK(0.5 * (1.0 - (-1.0)) == 1.0);
}

TEST_CASE("kraus weights on the analytic corners and normalization") {
    const KrausSet k1 = kraus_weights(0.3, 1.0);
    CHECK(k1.weight(0, 0) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(k1.weight(3, 3) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(k1.weight(0, 3) == 0.0);
    CHECK(k1.weight(3, 0) == 0.0);

    const KrausSet k2 = kraus_weights(0.5, 0.0);
    for (int i : {0, 3})
        for (int j : {0, 3}) CHECK(k2.weight(i, j) == doctest::Approx(0.25).epsilon(1e-15));

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const KrausSet k = kraus_weights(u(rng), u(rng));
        CHECK(k.sum() == doctest::Approx(1.0).epsilon(1e-15));
        for (double w : k.weights) CHECK(w >= 0.0);
        // only the (identity, z) combinations populated
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if ((i == 1 || i == 2 || j == 1 || j == 2)) CHECK(k.weight(i, j) == 0.0);
    }
}

TEST_CASE("channel action: identity cases and coherence scaling") {
    const XState rho = make_state(lambda_channel(), 1.0);

    const XState same = apply_channel(rho, kraus_weights(0.0, 0.3));
    CHECK(same.r14 == doctest::Approx(rho.r14).epsilon(1e-15));
    CHECK(same.r23 == doctest::Approx(rho.r23).epsilon(1e-15));

    const XState frozen = apply_channel(rho, kraus_weights(0.37, 1.0));
    CHECK(frozen.r14 == doctest::Approx(rho.r14).epsilon(1e-14));
    CHECK(frozen.r23 == doctest::Approx(rho.r23).epsilon(1e-14));

    const XState quarter = apply_channel(rho, kraus_weights(0.25, 0.0));
    CHECK(quarter.r14 == doctest::Approx(0.25 * rho.r14).epsilon(1e-14));
    CHECK(quarter.r23 == doctest::Approx(0.25 * rho.r23).epsilon(1e-14));
    CHECK(quarter.r11 == doctest::Approx(rho.r11).epsilon(1e-15));
    CHECK(quarter.r22 == doctest::Approx(rho.r22).epsilon(1e-15));
    CHECK(quarter.r44 == doctest::Approx(rho.r44).epsilon(1e-15));
}

TEST_CASE("kappa factor values and limits") {
    const NoiseModel m(0.2, 0.0);
    CHECK(kappa_factor(0.0, m) == 1.0);

    const NoiseModel m1(0.2, 1.0);
    for (double t : {0.5, 2.0, 7.0})
        CHECK(kappa_factor(t, m1) == doctest::Approx(1.0).epsilon(1e-15));

    // kappa = g^2 + (1-g^2) mu at the half-decayed point
    const double g = 0.5;
    CHECK(g * g + (1.0 - g * g) * 0.0 == doctest::Approx(0.25).epsilon(1e-15));

    // consistency with the kernel at arbitrary times
    const NoiseModel m2(0.15, 0.35);
    for (double t : {0.3, 1.1, 4.2}) {
        const double gg = dephasing_kernel(t, m2);
        CHECK(kappa_factor(t, m2) == doctest::Approx(gg * gg + (1.0 - gg * gg) * 0.35).epsilon(1e-15));
    }

    // markovian long-time limit: kappa -> mu
    const NoiseModel m3(0.2, 0.3);
    CHECK(kappa_factor(40.0, m3) == doctest::Approx(0.3).epsilon(1e-10));
}

TEST_CASE("evolve: identity at t = 0 and equivalence with the Kraus route") {
    const PhysicsParams p = lambda_channel();
    const XState rho = make_state(p, 1.1);
    const XStatePartials da = density_partials(p, 1.1, Parameter::alpha_psi);
    const XStatePartials dp = density_partials(p, 1.1, Parameter::phi);

    const NoiseModel m(0.2, 0.35);
    const EvolvedState at0 = evolve(rho, da, dp, 0.0, m);
    CHECK(at0.kappa == 1.0);
    CHECK(at0.state.r14 == rho.r14);
    CHECK(at0.state.r23 == rho.r23);
    CHECK(at0.d_alpha.dr14 == da.dr14);

    for (double t : {0.4, 1.0, 3.0, 8.0}) {
        const EvolvedState ev = evolve(rho, da, dp, t, m);
        const XState via_kraus = apply_channel(rho, kraus_weights(flip_probability(t, m).value, m.mu));
        CHECK(ev.state.r11 == doctest::Approx(via_kraus.r11).epsilon(1e-12));
        CHECK(ev.state.r14 == doctest::Approx(via_kraus.r14).scale(1.0).epsilon(1e-12));
        CHECK(ev.state.r22 == doctest::Approx(via_kraus.r22).epsilon(1e-12));
        CHECK(ev.state.r23 == doctest::Approx(via_kraus.r23).scale(1.0).epsilon(1e-12));
        CHECK(ev.state.r44 == doctest::Approx(via_kraus.r44).epsilon(1e-12));
        CHECK(ev.state.physical);
        CHECK(ev.kappa >= m.mu - 1e-12);
        CHECK(ev.kappa <= 1.0 + 1e-12);
    }
}

TEST_CASE("trajectory: frozen at mu = 1, monotone markovian, oscillatory memory") {
    const auto times = linspace(0.0, 10.0, 101);

    const Trajectory frozen =
        run_trajectory(lambda_channel(), kPi / 3.0, NoiseModel(0.2, 1.0), times);
    CHECK(frozen.kappa.front() == 1.0);
    for (std::size_t i = 0; i < frozen.times.size(); ++i) {
        CHECK(frozen.bounds[i].var_sim_alpha ==
              doctest::Approx(frozen.bounds[0].var_sim_alpha).epsilon(1e-9));
        CHECK(frozen.physical[i] == 1);
    }

    const Trajectory markov =
        run_trajectory(lambda_channel(), kPi / 2.0, NoiseModel(0.2, 0.2), times);
    for (std::size_t i = 1; i < markov.times.size(); ++i)
        CHECK(markov.bounds[i].var_sim_alpha >=
              markov.bounds[i - 1].var_sim_alpha - 1e-9 * std::abs(markov.bounds[i - 1].var_sim_alpha));
    // the transverse point stays decoupled along the whole trajectory
    for (const QfiMatrix& f : markov.qfim) CHECK(std::abs(f.f_ap) < 1e-12);

    // away from the transverse decoupling angle the memory kernel shows up as
    // damped oscillation of the simultaneous bound
    const Trajectory osc = run_trajectory(lambda_channel(), kPi / 3.0, NoiseModel(5.0, 0.2), times);
    std::vector<double> var;
    for (const auto& b : osc.bounds) var.push_back(b.var_sim_alpha);
    CHECK(count_local_extrema(var, 1e-12) >= 2);

    CHECK_THROWS_AS(run_trajectory(lambda_channel(), 1.0, NoiseModel(0.2, 0.2),
                                   std::vector<double>{0.0, 0.0, 1.0}),
                    Error);
    CHECK_THROWS_AS(run_trajectory(lambda_channel(), 1.0, NoiseModel(0.2, 0.2),
                                   std::vector<double>{}),
                    Error);
}
