#include <benchmark/benchmark.h>

#include <numbers>

#include "hyperqfim/dephasing.hpp"
#include "hyperqfim/qfim.hpp"
#include "hyperqfim/sweep.hpp"

using namespace hyperqfim;

namespace {

const double kPi = std::numbers::pi;

PhysicsParams lambda_channel() { return channel_preset(Channel::lambda); }

void BM_Kron4x4(benchmark::State& state) {
    const Matrix a = make_state(lambda_channel(), 1.0).to_matrix();
    const Matrix b = Matrix::identity(4);
    for (auto _ : state) benchmark::DoNotOptimize(kron(a, b));
}
BENCHMARK(BM_Kron4x4);

void BM_EigSym16(benchmark::State& state) {
    const Matrix lam = build_lambda(make_state(lambda_channel(), 1.0));
    for (auto _ : state) benchmark::DoNotOptimize(eig_sym(lam));
}
BENCHMARK(BM_EigSym16);

void BM_PinvSym16(benchmark::State& state) {
    const Matrix lam = build_lambda(make_state(lambda_channel(), 1.0));
    for (auto _ : state) benchmark::DoNotOptimize(pinv_sym(lam));
}
BENCHMARK(BM_PinvSym16);

void BM_QfimSpectral(benchmark::State& state) {
    const PhysicsParams p = lambda_channel();
    const XState rho = make_state(p, 1.0);
    const XStatePartials da = density_partials(p, 1.0, Parameter::alpha_psi);
    const XStatePartials dp = density_partials(p, 1.0, Parameter::phi);
    for (auto _ : state) benchmark::DoNotOptimize(qfim_spectral(rho, da, dp));
}
BENCHMARK(BM_QfimSpectral);

void BM_QfimVectorized(benchmark::State& state) {
    const PhysicsParams p = lambda_channel();
    const XState rho = make_state(p, 1.0);
    const XStatePartials da = density_partials(p, 1.0, Parameter::alpha_psi);
    const XStatePartials dp = density_partials(p, 1.0, Parameter::phi);
    for (auto _ : state) benchmark::DoNotOptimize(qfim_vectorized(rho, da, dp));
}
BENCHMARK(BM_QfimVectorized);

void BM_SweepRow(benchmark::State& state) {
    const PhysicsParams p = lambda_channel();
    const NoiseModel m(0.2, 0.4);
    for (auto _ : state) benchmark::DoNotOptimize(compute_row(p, 1.0, 2.0, &m));
}
BENCHMARK(BM_SweepRow);

void BM_TrajectoryPoint(benchmark::State& state) {
    const PhysicsParams p = lambda_channel();
    const XState rho = make_state(p, kPi / 3.0);
    const XStatePartials da = density_partials(p, kPi / 3.0, Parameter::alpha_psi);
    const XStatePartials dp = density_partials(p, kPi / 3.0, Parameter::phi);
    const NoiseModel m(5.0, 0.2);
    double t = 0.0;
    for (auto _ : state) {
        t += 0.01;
        const EvolvedState ev = evolve(rho, da, dp, t, m);
        benchmark::DoNotOptimize(variance_bounds(qfim_spectral(ev.state, ev.d_alpha, ev.d_phi)));
    }
}
BENCHMARK(BM_TrajectoryPoint);

} // namespace

BENCHMARK_MAIN();
