#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "qnep/errors.hpp"
#include "qnep/harness.hpp"

namespace {

/// Flags every subcommand shares; the option pointers record which overrides
/// were actually given on the command line.
struct CommonArgs {
    std::string config_path;
    double eps = 0.0;
    int n_cells = 0;
    std::string scheme;
    std::string tableau;
    double t_end = 0.0;
    std::string out_dir;
    CLI::Option* eps_opt = nullptr;
    CLI::Option* n_opt = nullptr;
    CLI::Option* scheme_opt = nullptr;
    CLI::Option* tableau_opt = nullptr;
    CLI::Option* t_end_opt = nullptr;
    CLI::Option* out_opt = nullptr;
};

void add_common_flags(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--config", a.config_path, "JSON config file (flat object)");
    a.eps_opt = cmd->add_option("--eps", a.eps, "scaled Debye length (>= 0)");
    a.n_opt = cmd->add_option("--n-cells", a.n_cells, "number of grid cells");
    a.scheme_opt = cmd->add_option("--scheme", a.scheme, "classical | si_ap");
    a.tableau_opt = cmd->add_option("--tableau", a.tableau,
                                    "imex_euler_111 | dirk_111_classical | ars222 | lsdirk222");
    a.t_end_opt = cmd->add_option("--t-end", a.t_end, "final time");
    a.out_opt = cmd->add_option("--out", a.out_dir, "output directory for CSV files");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qnep::ConfigError("cannot open '" + path + "' for reading");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Effective config = config file (or empty object) + forced experiment +
/// flag overrides, validated by parse_config in one pass. QNEP_OUT_DIR fills
/// in the output directory when neither file nor flag names one.
qnep::RunConfig load_config(const CommonArgs& a, const std::string& experiment) {
    nlohmann::json j = nlohmann::json::object();
    if (!a.config_path.empty()) {
        try {
            j = nlohmann::json::parse(read_file(a.config_path));
        } catch (const nlohmann::json::exception& e) {
            throw qnep::ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw qnep::ConfigError("config must be a JSON object");
    }
    if (!experiment.empty()) j["experiment"] = experiment;
    if (a.eps_opt->count() > 0) j["eps"] = a.eps;
    if (a.n_opt->count() > 0) j["n_cells"] = a.n_cells;
    if (a.scheme_opt->count() > 0) j["scheme"] = a.scheme;
    if (a.tableau_opt->count() > 0) j["tableau"] = a.tableau;
    if (a.t_end_opt->count() > 0) j["t_end"] = a.t_end;
    if (a.out_opt->count() > 0) j["out_dir"] = a.out_dir;

    qnep::RunConfig cfg = qnep::parse_config(j.dump());
    if (cfg.out_dir.empty())
        if (const char* env = std::getenv("QNEP_OUT_DIR")) cfg.out_dir = env;
    return cfg;
}

int run_aoc(const qnep::RunConfig& cfg) {
    const qnep::AocTable table = qnep::experiment_aoc(cfg);
    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        qnep::write_aoc_csv(table, cfg.out_dir + "/aoc.csv");
    }
    std::printf("# eps %g  scheme %s  tableau %s  gamma %g  t_end %g  reference %s\n",
                table.eps, table.scheme.c_str(), table.tableau.c_str(), table.gamma,
                table.t_end, table.reference.c_str());
    std::printf("%6s  %14s  %8s\n", "N", "l2_error_phi", "aoc");
    for (const qnep::AocRow& row : table.rows) {
        if (row.has_aoc)
            std::printf("%6d  %14.6e  %8.3f\n", row.n, row.l2_error_phi, row.aoc);
        else
            std::printf("%6d  %14.6e  %8s\n", row.n, row.l2_error_phi, "-");
    }
    return 0;
}

int run_experiment(const qnep::RunConfig& cfg) {
    if (cfg.experiment == "aoc") return run_aoc(cfg);

    const qnep::RunReport rep = cfg.experiment == "maxwellian"
                                    ? qnep::experiment_maxwellian(cfg)
                                    : qnep::experiment_perturbation(cfg);
    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        qnep::write_fields_csv(rep, cfg.out_dir + "/fields_" + cfg.experiment + ".csv");
        qnep::write_diagnostics_csv(rep,
                                    cfg.out_dir + "/diagnostics_" + cfg.experiment + ".csv");
    }

    const qnep::StepDiagnostics& last = rep.diagnostics.back();
    std::printf("steps %zu  t %.6g  max|rho-1| %.3e  max_div_q %.3e  mass %.12g  "
                "|phi|_inf %.3e\n",
                rep.diagnostics.size() - 1, last.t, last.max_rho_defect, last.max_div_q,
                last.total_mass, last.phi_inf);
    switch (rep.status) {
        case qnep::RunStatus::completed:
            std::printf("status: completed\n");
            return 0;
        case qnep::RunStatus::blow_up:
            std::printf("status: blow_up at t = %.6g\n", rep.blow_up_time);
            return 2;
        case qnep::RunStatus::error:
            std::fprintf(stderr, "status: error: %s\n", rep.message.c_str());
            return 1;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-volume solver for the scaled one-fluid Euler-Poisson system"};
    app.require_subcommand(1);

    CommonArgs run_args, pert_args, maxw_args, aoc_args;
    CLI::App* cmd_run = app.add_subcommand("run", "run whichever experiment the config names");
    CLI::App* cmd_pert =
        app.add_subcommand("perturbation", "small velocity perturbation of the rest state");
    CLI::App* cmd_maxw =
        app.add_subcommand("maxwellian", "perturbed equilibrium, potential damping diagnostic");
    CLI::App* cmd_aoc = app.add_subcommand("aoc", "grid convergence sweep over n_list");
    add_common_flags(cmd_run, run_args);
    add_common_flags(cmd_pert, pert_args);
    add_common_flags(cmd_maxw, maxw_args);
    add_common_flags(cmd_aoc, aoc_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        qnep::RunConfig cfg;
        if (cmd_run->parsed())
            cfg = load_config(run_args, "");
        else if (cmd_pert->parsed())
            cfg = load_config(pert_args, "perturbation");
        else if (cmd_maxw->parsed())
            cfg = load_config(maxw_args, "maxwellian");
        else
            cfg = load_config(aoc_args, "aoc");
        return run_experiment(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
