#include "hyperqfim/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace hyperqfim {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
const double kPi = std::numbers::pi;

} // namespace

std::vector<double> GridSpec::points() const {
    if (count < 1) raise(Errc::bad_config, "grid count must be >= 1");
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        v.push_back(start);
        return v;
    }
    const double step = (stop - start) / (count - 1);
    for (int i = 0; i < count; ++i) v.push_back(start + step * i);
    v.back() = stop; // endpoints exact
    return v;
}

GridSpec parse_grid(const std::string& text) {
    std::istringstream ss(text);
    std::string a, b, n;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, n))
        raise(Errc::bad_config, "grid '" + text + "': expected start:stop:count");
    GridSpec g;
    try {
        g.start = std::stod(a);
        g.stop = std::stod(b);
        g.count = std::stoi(n);
    } catch (const std::exception&) {
        raise(Errc::bad_config, "grid '" + text + "': unparsable number");
    }
    if (g.count < 1) raise(Errc::bad_config, "grid '" + text + "': count must be >= 1");
    return g;
}

SweepRow compute_row(const PhysicsParams& params, double phi, double t, const NoiseModel* noise) {
    SweepRow row;
    row.phi = phi;
    row.t = t;
    try {
        const auto abg = effective_abg(params);
        row.alpha_psi = abg.alpha;
        row.beta_psi = abg.beta;
        row.gamma_psi = abg.gamma;

        XState rho = make_state(params, phi);
        XStatePartials da = density_partials(params, phi, Parameter::alpha_psi);
        XStatePartials dp = density_partials(params, phi, Parameter::phi);
        if (noise != nullptr) {
            const EvolvedState ev = evolve(rho, da, dp, t, *noise);
            rho = ev.state;
            da = ev.d_alpha;
            dp = ev.d_phi;
            row.kappa = ev.kappa;
        }

        const QfiMatrix f = qfim_spectral(rho, da, dp);
        row.f_aa = f.f_aa;
        row.f_ap = f.f_ap;
        row.f_pp = f.f_pp;
        const VarianceBounds b = variance_bounds(f);
        row.var_sim_alpha = b.var_sim_alpha;
        row.var_sim_phi = b.var_sim_phi;
        row.var_ind_alpha = b.var_ind_alpha;
        row.var_ind_phi = b.var_ind_phi;
        row.gamma_ratio = b.gamma_ratio;
        row.physical = rho.physical;
        if (rho.physical) {
            const SldOperator la = sld(rho, da);
            const SldOperator lp = sld(rho, dp);
            row.saturation_trace = saturation_trace(rho, la, lp);
        } else {
            row.saturation_trace = kNan;
        }
    } catch (const Error&) {
        // singular state point: keep the grid coordinates, mark everything else
        row.kappa = kNan;
        row.f_aa = row.f_ap = row.f_pp = kNan;
        row.var_sim_alpha = row.var_sim_phi = kNan;
        row.var_ind_alpha = row.var_ind_phi = kNan;
        row.gamma_ratio = kNan;
        row.saturation_trace = kNan;
        row.physical = false;
    }
    return row;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    if (cfg.time_grid.has_value() && !cfg.noise.has_value())
        raise(Errc::bad_config, "time grid requires a noise model");
    if (cfg.threads < 1) raise(Errc::bad_config, "threads must be >= 1");

    const std::vector<double> phis = cfg.phi_grid.points();
    std::vector<double> alphas;
    if (cfg.alpha_grid.has_value()) {
        alphas = cfg.alpha_grid->points();
    } else {
        alphas.push_back(cfg.params.alpha_psi);
    }
    std::vector<double> times;
    if (cfg.time_grid.has_value()) {
        times = cfg.time_grid->points();
    } else {
        times.push_back(0.0);
    }

    struct Point {
        double alpha, phi, t;
    };
    std::vector<Point> points;
    points.reserve(alphas.size() * phis.size() * times.size());
    for (double a : alphas)
        for (double phi : phis)
            for (double t : times) points.push_back({a, phi, t});

    const NoiseModel* noise = cfg.noise.has_value() ? &*cfg.noise : nullptr;
    std::vector<SweepRow> rows(points.size());
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            PhysicsParams p = cfg.params;
            p.alpha_psi = points[i].alpha;
            rows[i] = compute_row(p, points[i].phi, points[i].t, noise);
        }
    };

    const int nthreads = std::min<int>(cfg.threads, static_cast<int>(points.size()) > 0 ? static_cast<int>(points.size()) : 1);
    if (nthreads <= 1) {
        work(0, points.size());
    } else {
        std::vector<std::future<void>> futures;
        const std::size_t chunk = (points.size() + nthreads - 1) / nthreads;
        for (int w = 0; w < nthreads; ++w) {
            const std::size_t begin = static_cast<std::size_t>(w) * chunk;
            const std::size_t end = std::min(points.size(), begin + chunk);
            if (begin >= end) break;
            futures.push_back(std::async(std::launch::async, work, begin, end));
        }
        for (auto& f : futures) f.get();
    }
    return rows;
}

const std::vector<std::string>& sweep_columns() {
    static const std::vector<std::string> cols = {
        "phi",           "alpha_psi",     "beta_psi",      "gamma_psi",
        "t",             "kappa",         "f_aa",          "f_ap",
        "f_pp",          "var_sim_alpha", "var_sim_phi",   "var_ind_alpha",
        "var_ind_phi",   "gamma_ratio",   "saturation_trace", "physical_flag",
    };
    return cols;
}

std::string format_g17(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

std::array<double, 15> row_values(const SweepRow& r) {
    return {r.phi,          r.alpha_psi,     r.beta_psi,    r.gamma_psi,     r.t,
            r.kappa,        r.f_aa,          r.f_ap,        r.f_pp,          r.var_sim_alpha,
            r.var_sim_phi,  r.var_ind_alpha, r.var_ind_phi, r.gamma_ratio,   r.saturation_trace};
}

nlohmann::json json_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return v;
}

} // namespace

void write_rows_csv(std::ostream& os, std::span<const SweepRow> rows) {
    const auto& cols = sweep_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) os << ',';
        os << cols[i];
    }
    os << '\n';
    for (const SweepRow& r : rows) {
        const auto vals = row_values(r);
        for (double v : vals) os << format_g17(v) << ',';
        os << (r.physical ? '1' : '0') << '\n';
    }
}

void write_rows_json(std::ostream& os, std::span<const SweepRow> rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const SweepRow& r : rows) {
        const auto& cols = sweep_columns();
        const auto vals = row_values(r);
        nlohmann::json rec;
        for (std::size_t i = 0; i < vals.size(); ++i) rec[cols[i]] = json_number(vals[i]);
        rec[cols.back()] = r.physical ? 1 : 0;
        out.push_back(std::move(rec));
    }
    os << out.dump() << '\n';
}

void write_rows_file(const std::string& path, std::span<const SweepRow> rows, OutputFormat fmt) {
    std::ofstream os(path, std::ios::binary);
    if (!os) raise(Errc::bad_config, "cannot open output file: " + path);
    if (fmt == OutputFormat::csv)
        write_rows_csv(os, rows);
    else
        write_rows_json(os, rows);
}

namespace {

PhysicsParams free_params(double alpha, double beta, double gamma) {
    PhysicsParams p;
    p.mode = Mode::free_params;
    p.alpha_psi = alpha;
    p.beta_psi = beta;
    p.gamma_psi = gamma;
    return p;
}

GridSpec phi_full() { return {0.0, kPi, 181}; }

std::vector<SweepRow> channels_sweep(const std::vector<Channel>& chans, SweepConfig cfg) {
    std::vector<SweepRow> all;
    for (Channel c : chans) {
        cfg.params = channel_preset(c);
        auto rows = run_sweep(cfg);
        all.insert(all.end(), rows.begin(), rows.end());
    }
    return all;
}

std::vector<SweepRow> alpha_list_sweep(const std::vector<double>& alphas, double beta, double gamma,
                                       SweepConfig cfg) {
    std::vector<SweepRow> all;
    for (double a : alphas) {
        cfg.params = free_params(a, beta, gamma);
        auto rows = run_sweep(cfg);
        all.insert(all.end(), rows.begin(), rows.end());
    }
    return all;
}

std::vector<SweepRow> phi_list_sweep(const std::vector<double>& phis, double beta, double gamma,
                                     GridSpec alpha_grid, int threads) {
    std::vector<SweepRow> all;
    for (double phi : phis) {
        SweepConfig cfg;
        cfg.params = free_params(0.0, beta, gamma);
        cfg.phi_grid = {phi, phi, 1};
        cfg.alpha_grid = alpha_grid;
        cfg.threads = threads;
        auto rows = run_sweep(cfg);
        all.insert(all.end(), rows.begin(), rows.end());
    }
    return all;
}

} // namespace

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids = {"f2a", "f2b", "f3a", "f3b", "f4a", "f4b", "f5a",
                                                 "f5b", "f6",  "f7",  "f8",  "f9",  "f10"};
    return ids;
}

std::vector<SweepRow> figure_rows(const std::string& id, int threads) {
    SweepConfig base;
    base.phi_grid = phi_full();
    base.threads = threads;

    if (id == "f2a")
        return alpha_list_sweep({0.0, 0.25, 0.5, 0.75, 1.0}, 0.4, 0.0, base);
    if (id == "f3a")
        return alpha_list_sweep({-1.0, -0.75, -0.5, -0.25, 0.0}, 0.4, 0.0, base);
    if (id == "f2b")
        return channels_sweep({Channel::lambda, Channel::xi_zero, Channel::xi_minus}, base);
    if (id == "f3b")
        return channels_sweep(
            {Channel::lambda, Channel::xi_zero, Channel::xi_minus, Channel::sigma_plus}, base);
    if (id == "f4a" || id == "f4b")
        return phi_list_sweep({kPi / 6.0, kPi / 4.0, kPi / 3.0, kPi / 2.0}, 0.0, 0.0,
                              {-1.0, 1.0, 201}, threads);
    if (id == "f5a")
        return alpha_list_sweep({0.0, 0.25, 0.5, 0.75, 1.0}, 0.4, 0.0, base);
    if (id == "f5b")
        return alpha_list_sweep({-1.0, -0.75, -0.5, -0.25, 0.0}, 0.4, 0.0, base);
    if (id == "f6")
        return alpha_list_sweep({0.0, 0.2, 0.4, 0.6, 0.8, 0.99}, 0.0, 0.0, base);
    if (id == "f7" || id == "f8") {
        SweepConfig cfg = base;
        cfg.noise = NoiseModel(id == "f7" ? 0.2 : 5.0, 0.4);
        cfg.time_grid = GridSpec{0.0, 10.0, 51};
        return channels_sweep({Channel::xi_zero, Channel::sigma_plus}, cfg);
    }
    if (id == "f9" || id == "f10") {
        SweepConfig cfg;
        cfg.threads = threads;
        cfg.phi_grid = {kPi / 2.0, kPi / 2.0, 1};
        cfg.noise = NoiseModel(id == "f9" ? 0.2 : 5.0, 0.2);
        cfg.time_grid = GridSpec{0.0, 10.0, 201};
        return channels_sweep(
            {Channel::lambda, Channel::sigma_plus, Channel::xi_minus, Channel::xi_zero}, cfg);
    }
    raise(Errc::unknown_figure, "unknown figure id: " + id);
}

} // namespace hyperqfim
