#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyperqfim/selfcheck.hpp"
#include "hyperqfim/sweep.hpp"

namespace {

using namespace hyperqfim;

struct SweepCli {
    std::string channel;
    std::string preset_file;
    bool free_mode = false;
    double alpha = 0.0;
    double dphi = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    std::string phi_grid;
    std::string alpha_grid;
    std::string time_grid;
    double tau = 0.0;
    double mu = 0.0;
    std::string kernel = "normalized";
    std::string format = "csv";
    std::string out;
    int threads = 1;
    bool has_alpha = false;
    bool has_dphi = false;
    bool has_tau = false;
    bool has_mu = false;
};

PhysicsParams resolve_params(const SweepCli& s) {
    std::vector<NamedPreset> extra;
    if (!s.preset_file.empty()) extra = load_channel_presets(s.preset_file);
    if (!s.channel.empty()) {
        if (s.free_mode) raise(Errc::bad_config, "--channel and --free are mutually exclusive");
        if (s.has_alpha || s.has_dphi)
            raise(Errc::bad_config, "--channel and explicit --alpha/--dphi are mutually exclusive");
        return find_preset(s.channel, extra);
    }
    PhysicsParams p;
    if (s.free_mode) {
        p.mode = Mode::free_params;
        if (!s.has_alpha) raise(Errc::bad_config, "--free requires --alpha");
        p.alpha_psi = s.alpha;
        p.beta_psi = s.beta;
        p.gamma_psi = s.gamma;
        return p;
    }
    if (!s.has_alpha || !s.has_dphi)
        raise(Errc::bad_config, "provide --channel NAME, or --alpha/--dphi, or --free --alpha/--beta/--gamma");
    p.mode = Mode::constrained;
    p.alpha_psi = s.alpha;
    p.delta_phi = s.dphi;
    return p;
}

std::optional<NoiseModel> resolve_noise(const SweepCli& s) {
    if (!s.has_tau && !s.has_mu) return std::nullopt;
    if (!s.has_tau || !s.has_mu) raise(Errc::bad_config, "--tau and --mu must be given together");
    KernelVariant v;
    if (s.kernel == "literal")
        v = KernelVariant::literal;
    else if (s.kernel == "normalized")
        v = KernelVariant::rate_normalized;
    else
        raise(Errc::bad_config, "--kernel must be literal or normalized");
    return NoiseModel(s.tau, s.mu, v);
}

OutputFormat resolve_format(const std::string& f) {
    if (f == "csv") return OutputFormat::csv;
    if (f == "json") return OutputFormat::json;
    raise(Errc::bad_config, "--format must be csv or json");
}

int cmd_sweep(const SweepCli& s) {
    SweepConfig cfg;
    cfg.params = resolve_params(s);
    cfg.phi_grid = parse_grid(s.phi_grid);
    if (!s.alpha_grid.empty()) cfg.alpha_grid = parse_grid(s.alpha_grid);
    if (!s.time_grid.empty()) cfg.time_grid = parse_grid(s.time_grid);
    cfg.noise = resolve_noise(s);
    if (cfg.time_grid.has_value() && !cfg.noise.has_value())
        raise(Errc::bad_config, "--time-grid requires --tau/--mu");
    cfg.threads = s.threads;

    const auto rows = run_sweep(cfg);
    write_rows_file(s.out, rows, resolve_format(s.format));
    std::printf("wrote %zu rows to %s\n", rows.size(), s.out.c_str());
    return 0;
}

int cmd_figure(const std::string& id, const std::string& out, const std::string& format,
               int threads) {
    const auto rows = figure_rows(id, threads);
    write_rows_file(out, rows, resolve_format(format));
    std::printf("wrote %zu rows to %s\n", rows.size(), out.c_str());
    return 0;
}

int cmd_check(int points, std::uint64_t seed, bool verbose) {
    CheckOptions opts;
    opts.points = points;
    opts.seed = seed;
    const CheckReport report = run_self_checks(opts);
    std::printf("%-28s %-8s %-14s %-10s\n", "check", "status", "max residual", "tolerance");
    for (const auto& c : report.checks) {
        std::printf("%-28s %-8s %-14.3e %-10.1e", c.name.c_str(), to_string(c.status).c_str(),
                    c.max_residual, c.tolerance);
        if (verbose && !c.note.empty()) std::printf("  (%s)", c.note.c_str());
        std::printf("\n");
    }
    if (!report.any_ran()) {
        std::printf("overall: skipped (no checks ran)\n");
        return 2;
    }
    const bool ok = report.overall_pass();
    std::printf("overall: %s\n", ok ? "pass" : "FAIL");
    return ok ? 0 : 1;
}

int cmd_channel(const std::string& preset_file) {
    std::vector<NamedPreset> all = builtin_presets();
    if (!preset_file.empty()) {
        const auto extra = load_channel_presets(preset_file);
        all.insert(all.end(), extra.begin(), extra.end());
    }
    std::printf("%-12s %-12s %-12s %-22s %-22s\n", "channel", "alpha_psi", "delta_phi", "beta_psi",
                "gamma_psi");
    for (const auto& e : all) {
        const auto d = derived_params(e.params);
        std::printf("%-12s %-12g %-12g %-22.17g %-22.17g\n", e.name.c_str(), e.params.alpha_psi,
                    e.params.delta_phi, d.beta_psi, d.gamma_psi);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiparameter quantum-estimation precision bounds for "
                 "e+e- -> J/psi -> B Bbar hyperon pairs"};
    app.require_subcommand(1);

    SweepCli s;
    auto* sweep = app.add_subcommand("sweep", "Evaluate precision bounds over a parameter grid");
    sweep->add_option("--channel", s.channel, "Channel preset name (see 'channel')");
    sweep->add_option("--preset-file", s.preset_file, "Plain-text preset file");
    sweep->add_flag("--free", s.free_mode, "Free (alpha, beta, gamma) parametrization");
    sweep->add_option("--alpha", s.alpha, "Decay asymmetry alpha_psi")->check(CLI::Range(-1.0, 1.0));
    sweep->add_option("--dphi", s.dphi, "Relative phase DeltaPhi (rad, constrained mode)");
    sweep->add_option("--beta", s.beta, "beta_psi (free mode)");
    sweep->add_option("--gamma", s.gamma, "gamma_psi (free mode)");
    sweep->add_option("--phi-grid", s.phi_grid, "Scattering-angle grid a:b:n")->required();
    sweep->add_option("--alpha-grid", s.alpha_grid, "alpha_psi grid a:b:n");
    sweep->add_option("--time-grid", s.time_grid, "Evolution-time grid a:b:n");
    sweep->add_option("--tau", s.tau, "Telegraph correlation time");
    sweep->add_option("--mu", s.mu, "Classical noise correlation in [0,1]");
    sweep->add_option("--kernel", s.kernel, "Kernel variant: literal|normalized");
    sweep->add_option("--format", s.format, "Output format: csv|json");
    sweep->add_option("--out", s.out, "Output file")->required();
    sweep->add_option("--threads", s.threads, "Worker pool width")->check(CLI::PositiveNumber);

    std::string fig_id, fig_out, fig_format = "csv";
    int fig_threads = 1;
    auto* figure = app.add_subcommand("figure", "Emit a reference figure dataset");
    figure->add_option("id", fig_id, "Figure id (f2a..f10)")->required();
    figure->add_option("--out", fig_out, "Output file")->required();
    figure->add_option("--format", fig_format, "Output format: csv|json");
    figure->add_option("--threads", fig_threads, "Worker pool width")->check(CLI::PositiveNumber);

    int check_points = 100;
    std::uint64_t check_seed = 987654321ull;
    bool check_verbose = false;
    auto* check = app.add_subcommand("check", "Run the cross-oracle self-check suite");
    check->add_option("--points", check_points, "Grid points per check (0 skips grid checks)");
    check->add_option("--seed", check_seed, "RNG seed");
    check->add_flag("-v,--verbose", check_verbose, "Print notes");

    std::string chan_preset_file;
    auto* channel = app.add_subcommand("channel", "Print channel presets");
    channel->add_option("--preset-file", chan_preset_file, "Plain-text preset file");

    CLI11_PARSE(app, argc, argv);

    s.has_alpha = sweep->count("--alpha") > 0;
    s.has_dphi = sweep->count("--dphi") > 0;
    s.has_tau = sweep->count("--tau") > 0;
    s.has_mu = sweep->count("--mu") > 0;

    try {
        if (sweep->parsed()) return cmd_sweep(s);
        if (figure->parsed()) return cmd_figure(fig_id, fig_out, fig_format, fig_threads);
        if (check->parsed()) return cmd_check(check_points, check_seed, check_verbose);
        if (channel->parsed()) return cmd_channel(chan_preset_file);
    } catch (const hyperqfim::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
