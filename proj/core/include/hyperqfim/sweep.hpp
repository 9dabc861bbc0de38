#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hyperqfim/dephasing.hpp"
#include "hyperqfim/hyperon_state.hpp"
#include "hyperqfim/qfim.hpp"

namespace hyperqfim {

// Inclusive uniform grid; count == 1 collapses to {start}.
struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    int count = 1;

    std::vector<double> points() const;
};

// "a:b:n"
GridSpec parse_grid(const std::string& text);

enum class OutputFormat { csv, json };

struct SweepConfig {
    PhysicsParams params;
    GridSpec phi_grid;
    std::optional<GridSpec> alpha_grid; // sweeps alpha_psi over the grid
    std::optional<GridSpec> time_grid;  // requires noise
    std::optional<NoiseModel> noise;
    int threads = 1;
};

// One output record per grid point. Undefined bounds are IEEE infinities and
// serialize as the token "inf"; a state point where the construction itself
// is singular yields NaN columns and physical_flag = 0.
struct SweepRow {
    double phi = 0.0;
    double alpha_psi = 0.0;
    double beta_psi = 0.0;
    double gamma_psi = 0.0;
    double t = 0.0;
    double kappa = 1.0;
    double f_aa = 0.0;
    double f_ap = 0.0;
    double f_pp = 0.0;
    double var_sim_alpha = 0.0;
    double var_sim_phi = 0.0;
    double var_ind_alpha = 0.0;
    double var_ind_phi = 0.0;
    double gamma_ratio = 0.0;
    double saturation_trace = 0.0;
    bool physical = true;
};

// Single-point evaluation used for every row: state + partials, optional
// dephasing, spectral QFIM, bounds, SLD saturation certificate.
SweepRow compute_row(const PhysicsParams& params, double phi, double t,
                     const NoiseModel* noise);

// Grid order: alpha (outer), then phi, then t. Rows are assembled in grid
// order regardless of worker count.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

const std::vector<std::string>& sweep_columns();

// Fixed 17-significant-digit formatting, "." decimal separator, locale-free;
// infinities print as "inf".
std::string format_g17(double v);

void write_rows_csv(std::ostream& os, std::span<const SweepRow> rows);
void write_rows_json(std::ostream& os, std::span<const SweepRow> rows);
void write_rows_file(const std::string& path, std::span<const SweepRow> rows, OutputFormat fmt);

// Reference figure datasets over fixed parameter slices, keyed f2a..f10.
const std::vector<std::string>& figure_ids();
std::vector<SweepRow> figure_rows(const std::string& id, int threads = 1);

} // namespace hyperqfim
