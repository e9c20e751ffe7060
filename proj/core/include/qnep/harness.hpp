#pragma once

#include <string>
#include <vector>

#include "qnep/integrate.hpp"

namespace qnep {

/// Everything a single experiment run needs. Produced by parse_config from a
/// flat JSON object; every field has a usable default.
struct RunConfig {
    std::string experiment = "perturbation";  ///< perturbation | maxwellian | aoc
    SchemeConfig scheme;
    int n_cells = 100;
    double x_min = 0.0;
    double x_max = 1.0;
    double t_end = 0.1;
    double delta = -1.0;   ///< perturbation amplitude; < 0 picks the experiment default
    double kappa = 2220.0; ///< oscillation frequency of the maxwellian density profile
    std::vector<int> n_list = {80, 160, 320, 640};   ///< aoc grids
    std::string reference = "fine_grid";             ///< fine_grid | zero_potential
    std::vector<double> snapshots;                   ///< times at which to write field files
    std::string out_dir;                             ///< where experiment CSVs go ("" = none)
};

/// Parses a flat JSON object. Unknown keys are rejected with the offending
/// key named; out-of-range values raise ConfigError with the constraint
/// (e.g. "cfl must lie in (0,1)").
RunConfig parse_config(const std::string& text);

/// Small velocity perturbation of the quasineutral rest state:
/// rho = 1, u = 1 + delta cos(2 pi x), phi = 0 (delta defaults to eps^2).
RunReport experiment_perturbation(const RunConfig& cfg);

/// Perturbed-equilibrium profile rho = 1 + delta sin(kappa pi x), u = 0,
/// phi = 0; reports the damping diagnostic |phi|_inf per step.
RunReport experiment_maxwellian(const RunConfig& cfg);

struct AocRow {
    int n = 0;
    double l2_error_phi = 0.0;
    double aoc = 0.0;      ///< log2(previous error / this error)
    bool has_aoc = false;  ///< first row has none
};

struct AocTable {
    std::vector<AocRow> rows;
    double eps = 0.0;
    std::string scheme;
    std::string tableau;
    double gamma = 0.0;
    double t_end = 0.0;
    std::string reference;
};

/// Convergence sweep over cfg.n_list (consecutive sizes equal or doubled),
/// measuring the L2 error of phi against the configured reference:
/// fine_grid runs the same scheme at 4x the largest grid and restricts by
/// averaging nested cells; zero_potential compares against phi = 0.
AocTable experiment_aoc(const RunConfig& cfg);

/// sqrt(dx sum (field_i - ref_i)^2). NumericsError on length mismatch.
double l2_error(const std::vector<double>& field, const std::vector<double>& reference,
                double dx);

/// Field file: header "x,rho,u,phi", one row per cell, %.17g throughout so a
/// parse recovers the doubles bit-exactly.
void write_fields_csv(const RunReport& report, const std::string& path);

/// Diagnostics file: header "t,dt,max_rho_defect,max_div_q,total_mass,phi_inf".
void write_diagnostics_csv(const RunReport& report, const std::string& path);

/// Convergence file: header "N,l2_error_phi,aoc"; the first row's aoc column
/// is empty.
void write_aoc_csv(const AocTable& table, const std::string& path);

/// Parse-back counterparts (round-trip tests and external tooling).
struct FieldsCsv {
    std::vector<double> x, rho, u, phi;
};
FieldsCsv parse_fields_csv(const std::string& path);
std::vector<StepDiagnostics> parse_diagnostics_csv(const std::string& path);
AocTable parse_aoc_csv(const std::string& path);

}  // namespace qnep
