#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hyperqfim/selfcheck.hpp"
#include "hyperqfim/sweep.hpp"

using namespace hyperqfim;

namespace {

const double kPi = std::numbers::pi;

std::string csv_of(std::span<const SweepRow> rows) {
    std::ostringstream os;
    write_rows_csv(os, rows);
    return os.str();
}

} // namespace

TEST_CASE("grid construction and parsing") {
    const GridSpec g{0.0, 1.0, 5};
    CHECK(g.points() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(GridSpec{2.0, 9.0, 1}.points() == std::vector<double>{2.0});

    const GridSpec parsed = parse_grid("0:3.14:181");
    CHECK(parsed.start == 0.0);
    CHECK(parsed.stop == 3.14);
    CHECK(parsed.count == 181);
    CHECK_THROWS_AS(parse_grid("0:1"), Error);
    CHECK_THROWS_AS(parse_grid("0:1:x"), Error);
    CHECK_THROWS_AS(parse_grid("0:1:0"), Error);
}

TEST_CASE("format_g17 round-trips and uses the inf token") {
    CHECK(format_g17(0.25) == "0.25");
    CHECK(format_g17(std::numeric_limits<double>::infinity()) == "inf");
    const double v = 0.1 + 0.2;
    CHECK(std::stod(format_g17(v)) == v);
}

TEST_CASE("channel sweep emits one physical row per grid point") {
    SweepConfig cfg;
    cfg.params = channel_preset(Channel::lambda);
    cfg.phi_grid = {0.0, kPi, 181};
    const auto rows = run_sweep(cfg);
    REQUIRE(rows.size() == 181);
    for (const auto& r : rows) {
        CHECK(r.physical);
        CHECK(r.t == 0.0);
        CHECK(r.kappa == 1.0);
        CHECK(r.beta_psi == doctest::Approx(derived_params(cfg.params).beta_psi));
    }
}

TEST_CASE("single transverse point in the max-asymmetry slice") {
    SweepConfig cfg;
    cfg.params.mode = Mode::free_params;
    cfg.params.alpha_psi = 1.0;
    cfg.phi_grid = {kPi / 2.0, kPi / 2.0, 1};
    const auto rows = run_sweep(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].var_sim_phi == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("poles serialize simultaneous bounds as inf") {
    SweepConfig cfg;
    cfg.params = channel_preset(Channel::lambda);
    cfg.phi_grid = {0.0, 0.0, 1};
    const auto rows = run_sweep(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(std::isinf(rows[0].var_sim_phi));
    const std::string csv = csv_of(rows);
    CHECK(csv.find(",inf,") != std::string::npos);
}

TEST_CASE("csv header matches the documented schema") {
    const std::string csv = csv_of(std::vector<SweepRow>{});
    CHECK(csv == "phi,alpha_psi,beta_psi,gamma_psi,t,kappa,f_aa,f_ap,f_pp,var_sim_alpha,"
                 "var_sim_phi,var_ind_alpha,var_ind_phi,gamma_ratio,saturation_trace,"
                 "physical_flag\n");
}

TEST_CASE("rows are independently recomputable from their inputs") {
    SweepConfig cfg;
    cfg.params = channel_preset(Channel::xi_zero);
    cfg.phi_grid = {0.3, 2.8, 7};
    cfg.noise = NoiseModel(0.2, 0.4);
    cfg.time_grid = GridSpec{0.0, 4.0, 3};
    const auto rows = run_sweep(cfg);
    REQUIRE(rows.size() == 21);
    for (std::size_t i = 0; i < rows.size(); i += 5) {
        const auto& r = rows[i];
        PhysicsParams p = cfg.params;
        p.alpha_psi = r.alpha_psi;
        const XState rho = make_state(p, r.phi);
        const XStatePartials da = density_partials(p, r.phi, Parameter::alpha_psi);
        const XStatePartials dp = density_partials(p, r.phi, Parameter::phi);
        const EvolvedState ev = evolve(rho, da, dp, r.t, *cfg.noise);
        const QfiMatrix f = qfim_spectral(ev.state, ev.d_alpha, ev.d_phi);
        CHECK(r.kappa == ev.kappa);
        CHECK(r.f_aa == f.f_aa);
        CHECK(r.f_ap == f.f_ap);
        CHECK(r.f_pp == f.f_pp);
        const VarianceBounds b = variance_bounds(f);
        CHECK(r.var_sim_alpha == b.var_sim_alpha);
        CHECK(r.var_ind_phi == b.var_ind_phi);
    }
}

TEST_CASE("constrained alpha sweep across the boundary degrades per-point, not fatally") {
    SweepConfig cfg;
    cfg.params = channel_preset(Channel::lambda);
    cfg.phi_grid = {1.0, 1.0, 1};
    cfg.alpha_grid = GridSpec{-1.0, 1.0, 5}; // endpoints hit the chain-rule singularity
    const auto rows = run_sweep(cfg);
    REQUIRE(rows.size() == 5);
    CHECK_FALSE(rows.front().physical);
    CHECK(std::isnan(rows.front().f_aa));
    CHECK_FALSE(rows.back().physical);
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        CHECK(rows[i].physical);
        CHECK(std::isfinite(rows[i].f_aa));
    }
}

TEST_CASE("worker-pool width does not change the bytes") {
    SweepConfig cfg;
    cfg.params = channel_preset(Channel::sigma_plus);
    cfg.phi_grid = {0.1, kPi - 0.1, 53};
    cfg.alpha_grid = GridSpec{-0.6, 0.6, 5};
    cfg.threads = 1;
    const std::string one = csv_of(run_sweep(cfg));
    cfg.threads = 4;
    const std::string four = csv_of(run_sweep(cfg));
    CHECK(one == four);
}

TEST_CASE("json output mirrors the csv records") {
    SweepConfig cfg;
    cfg.params = channel_preset(Channel::lambda);
    cfg.phi_grid = {0.0, kPi, 5};
    const auto rows = run_sweep(cfg);
    std::ostringstream os;
    write_rows_json(os, rows);
    const auto parsed = nlohmann::json::parse(os.str());
    REQUIRE(parsed.is_array());
    REQUIRE(parsed.size() == rows.size());
    CHECK(parsed[2]["phi"].get<double>() == rows[2].phi);
    CHECK(parsed[2]["physical_flag"].get<int>() == 1);
    // pole rows carry the inf token
    CHECK(parsed[0]["var_sim_phi"].is_string());
    CHECK(parsed[0]["var_sim_phi"].get<std::string>() == "inf");
    CHECK(parsed[2]["var_sim_phi"].is_number());
}

TEST_CASE("figure datasets: slice contents") {
    const auto f6 = figure_rows("f6");
    CHECK(f6.size() == 6 * 181);
    for (const auto& r : f6)
        if (std::isfinite(r.gamma_ratio)) CHECK(r.gamma_ratio <= 2.0 + 1e-12);

    const auto f2b = figure_rows("f2b");
    std::set<double> alphas;
    for (const auto& r : f2b) alphas.insert(r.alpha_psi);
    CHECK(alphas == std::set<double>{0.475, 0.514, 0.586});

    const auto f9 = figure_rows("f9");
    std::set<double> chans;
    for (const auto& r : f9) {
        chans.insert(r.alpha_psi);
        CHECK(r.phi == kPi / 2.0);
    }
    CHECK(chans.size() == 4);
    CHECK(f9.size() == 4 * 201);

    CHECK_THROWS_AS(figure_rows("f99"), Error);
    CHECK(figure_ids().size() == 13);
}

TEST_CASE("self-check report: clean pass, injected fault, empty grid") {
    CheckOptions opts;
    opts.points = 40;
    const CheckReport clean = run_self_checks(opts);
    CHECK(clean.overall_pass());
    for (const auto& c : clean.checks) CHECK(c.status == CheckStatus::pass);

    // perturb one closed-form coefficient: exactly that check must fail
    CheckOptions bad = opts;
    bad.lambda_plus_impl = [](const XState& x) {
        Matrix m = lambda_plus_closed_form(x);
        m(5, 5) += 1e-6;
        return m;
    };
    const CheckReport faulty = run_self_checks(bad);
    CHECK(faulty.any_failed());
    for (const auto& c : faulty.checks) {
        if (c.name == "lambda-plus-closed-form")
            CHECK(c.status == CheckStatus::fail);
        else
            CHECK(c.status == CheckStatus::pass);
    }

    CheckOptions empty;
    empty.points = 0;
    const CheckReport skipped = run_self_checks(empty);
    CHECK_FALSE(skipped.any_ran());
    CHECK_FALSE(skipped.overall_pass());
    for (const auto& c : skipped.checks) CHECK(c.status == CheckStatus::skipped);
}
