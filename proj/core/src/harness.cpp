#include "qnep/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "qnep/errors.hpp"

namespace qnep {

namespace {

using nlohmann::json;

template <typename T>
T typed(const json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& cell, const std::string& path) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0')
        throw NumericsError("malformed number '" + cell + "' in " + path);
    return v;
}

std::ofstream open_for_writing(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    return out;
}

std::vector<std::string> read_data_lines(const std::string& path, const std::string& header) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line) || line != header)
        throw NumericsError("unexpected header in " + path + ": '" + line + "'");
    std::vector<std::string> lines;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

RunReport fields_of(const State& s, const Grid1D& g) {
    RunReport rep;
    rep.x = g.centers;
    const int n = g.n_cells;
    rep.rho.resize(static_cast<std::size_t>(n));
    rep.u.resize(static_cast<std::size_t>(n));
    rep.phi.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        rep.rho[i] = s.rho(i);
        rep.u[i] = s.q(i) / s.rho(i);
        rep.phi[i] = s.phi(i);
    }
    return rep;
}

std::string snapshot_path(const std::string& out_dir, const std::string& tag, double t) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", t);
    return out_dir + "/" + tag + "_t" + buf + ".csv";
}

/// Shared driver: sets up snapshots and runs to cfg.t_end.
RunReport drive(const RunConfig& cfg, const Grid1D& g, State s, const std::string& tag) {
    const Tableau tab = load_tableau(cfg.scheme.tableau_id);
    std::vector<double> snaps = cfg.snapshots;
    std::sort(snaps.begin(), snaps.end());
    std::size_t next = 0;
    StepCallback cb;
    if (!cfg.out_dir.empty() && !snaps.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        cb = [&](const State& st, const StepDiagnostics&) {
            while (next < snaps.size() && st.t >= snaps[next] - 1e-12) {
                write_fields_csv(fields_of(st, g), snapshot_path(cfg.out_dir, tag, snaps[next]));
                ++next;
            }
        };
    }
    return run(std::move(s), cfg.scheme, tab, g, cfg.t_end, cb);
}

State perturbation_state(const Grid1D& g, double delta) {
    State s = make_state(g);
    for (int i = 0; i < g.n_cells; ++i) {
        const double x = g.centers[static_cast<std::size_t>(i)];
        s.rho(i) = 1.0;
        s.q(i) = 1.0 + delta * std::cos(2.0 * std::numbers::pi * x);
    }
    apply_periodic(s.rho);
    apply_dirichlet_zero(s.phi);
    refresh_face_momenta(s, g);
    return s;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    RunConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "experiment") {
            cfg.experiment = typed<std::string>(value, key);
            if (cfg.experiment != "perturbation" && cfg.experiment != "maxwellian" &&
                cfg.experiment != "aoc")
                throw ConfigError("unknown experiment '" + cfg.experiment +
                                  "' (perturbation | maxwellian | aoc)");
        } else if (key == "scheme") {
            const std::string v = typed<std::string>(value, key);
            if (v == "classical")
                cfg.scheme.scheme_kind = SchemeKind::classical;
            else if (v == "si_ap")
                cfg.scheme.scheme_kind = SchemeKind::si_ap;
            else
                throw ConfigError("unknown scheme '" + v + "' (classical | si_ap)");
        } else if (key == "tableau") {
            cfg.scheme.tableau_id = typed<std::string>(value, key);
            load_tableau(cfg.scheme.tableau_id);
        } else if (key == "cfl") {
            cfg.scheme.cfl_nu = typed<double>(value, key);
            if (!(cfg.scheme.cfl_nu > 0.0 && cfg.scheme.cfl_nu < 1.0))
                throw ConfigError("cfl must lie in (0,1)");
        } else if (key == "eps") {
            cfg.scheme.eps = typed<double>(value, key);
            if (!(cfg.scheme.eps >= 0.0)) throw ConfigError("eps must be nonnegative");
        } else if (key == "gamma") {
            cfg.scheme.gas.gamma = typed<double>(value, key);
            if (!(cfg.scheme.gas.gamma > 1.0)) throw ConfigError("gamma must exceed 1");
        } else if (key == "limiter") {
            const std::string v = typed<std::string>(value, key);
            if (v == "minmod")
                cfg.scheme.limiter = Limiter::minmod;
            else if (v == "none")
                cfg.scheme.limiter = Limiter::none;
            else
                throw ConfigError("unknown limiter '" + v + "' (minmod | none)");
        } else if (key == "dt_max") {
            cfg.scheme.dt_max = typed<double>(value, key);
            if (!(cfg.scheme.dt_max > 0.0)) throw ConfigError("dt_max must be positive");
        } else if (key == "wavespeed_floor") {
            cfg.scheme.wavespeed_floor = typed<double>(value, key);
            if (!(cfg.scheme.wavespeed_floor > 0.0))
                throw ConfigError("wavespeed_floor must be positive");
        } else if (key == "blow_up_threshold") {
            cfg.scheme.blow_up_threshold = typed<double>(value, key);
            if (!(cfg.scheme.blow_up_threshold > 0.0))
                throw ConfigError("blow_up_threshold must be positive");
        } else if (key == "eps_clip") {
            cfg.scheme.enforce_classical_eps_restriction = typed<bool>(value, key);
        } else if (key == "n_cells") {
            cfg.n_cells = typed<int>(value, key);
            if (cfg.n_cells < 4) throw ConfigError("n_cells must be at least 4");
        } else if (key == "domain") {
            const std::vector<double> v = typed<std::vector<double>>(value, key);
            if (v.size() != 2 || !(v[1] > v[0]))
                throw ConfigError("domain must be [x_min, x_max] with x_max > x_min");
            cfg.x_min = v[0];
            cfg.x_max = v[1];
        } else if (key == "t_end") {
            cfg.t_end = typed<double>(value, key);
            if (!(cfg.t_end >= 0.0)) throw ConfigError("t_end must be nonnegative");
        } else if (key == "delta") {
            cfg.delta = typed<double>(value, key);
        } else if (key == "kappa") {
            cfg.kappa = typed<double>(value, key);
            if (!(cfg.kappa > 0.0)) throw ConfigError("kappa must be positive");
        } else if (key == "n_list") {
            cfg.n_list = typed<std::vector<int>>(value, key);
            if (cfg.n_list.empty()) throw ConfigError("n_list must not be empty");
            for (int n : cfg.n_list)
                if (n < 4) throw ConfigError("n_list entries must be at least 4");
        } else if (key == "reference") {
            cfg.reference = typed<std::string>(value, key);
            if (cfg.reference != "fine_grid" && cfg.reference != "zero_potential")
                throw ConfigError("unknown reference '" + cfg.reference +
                                  "' (fine_grid | zero_potential)");
        } else if (key == "snapshots") {
            cfg.snapshots = typed<std::vector<double>>(value, key);
        } else if (key == "out_dir") {
            cfg.out_dir = typed<std::string>(value, key);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    return cfg;
}

RunReport experiment_perturbation(const RunConfig& cfg) {
    const Grid1D g = build_grid(cfg.n_cells, cfg.x_min, cfg.x_max);
    const double delta = cfg.delta < 0.0 ? cfg.scheme.eps * cfg.scheme.eps : cfg.delta;
    return drive(cfg, g, perturbation_state(g, delta), "perturbation");
}

RunReport experiment_maxwellian(const RunConfig& cfg) {
    const Grid1D g = build_grid(cfg.n_cells, cfg.x_min, cfg.x_max);
    const double delta = cfg.delta < 0.0 ? 1e-2 : cfg.delta;
    State s = make_state(g);
    for (int i = 0; i < g.n_cells; ++i) {
        const double x = g.centers[static_cast<std::size_t>(i)];
        s.rho(i) = 1.0 + delta * std::sin(cfg.kappa * std::numbers::pi * x);
        s.q(i) = 0.0;
    }
    apply_periodic(s.rho);
    apply_dirichlet_zero(s.phi);
    refresh_face_momenta(s, g);
    return drive(cfg, g, std::move(s), "maxwellian");
}

double l2_error(const std::vector<double>& field, const std::vector<double>& reference,
                double dx) {
    if (field.size() != reference.size())
        throw NumericsError("l2_error: length mismatch, " + std::to_string(field.size()) +
                            " vs " + std::to_string(reference.size()));
    double acc = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double d = field[i] - reference[i];
        acc += d * d;
    }
    return std::sqrt(dx * acc);
}

namespace {

RunReport aoc_case(const RunConfig& cfg, int n, double delta) {
    const Grid1D g = build_grid(n, cfg.x_min, cfg.x_max);
    const Tableau tab = load_tableau(cfg.scheme.tableau_id);
    RunReport rep = run(perturbation_state(g, delta), cfg.scheme, tab, g, cfg.t_end);
    if (rep.status != RunStatus::completed)
        throw NumericsError("convergence case N = " + std::to_string(n) +
                            " did not complete: " + rep.message);
    return rep;
}

std::vector<double> restrict_by_averaging(const std::vector<double>& fine, int n_coarse) {
    const int n_fine = static_cast<int>(fine.size());
    const int r = n_fine / n_coarse;
    std::vector<double> coarse(static_cast<std::size_t>(n_coarse), 0.0);
    for (int i = 0; i < n_coarse; ++i) {
        double acc = 0.0;
        for (int j = 0; j < r; ++j) acc += fine[static_cast<std::size_t>(i * r + j)];
        coarse[static_cast<std::size_t>(i)] = acc / r;
    }
    return coarse;
}

}  // namespace

AocTable experiment_aoc(const RunConfig& cfg) {
    if (cfg.n_list.empty()) throw ConfigError("n_list must not be empty");
    for (std::size_t i = 1; i < cfg.n_list.size(); ++i) {
        const int a = cfg.n_list[i - 1];
        const int b = cfg.n_list[i];
        if (b != a && b != 2 * a)
            throw ConfigError("n_list must be nested: consecutive entries equal or doubled, got " +
                              std::to_string(a) + " then " + std::to_string(b));
    }
    const double delta = cfg.delta < 0.0 ? 1e-2 : cfg.delta;

    AocTable table;
    table.eps = cfg.scheme.eps;
    table.scheme = cfg.scheme.scheme_kind == SchemeKind::classical ? "classical" : "si_ap";
    table.tableau = cfg.scheme.tableau_id;
    table.gamma = cfg.scheme.gas.gamma;
    table.t_end = cfg.t_end;
    table.reference = cfg.reference;

    std::vector<double> phi_ref;
    int n_ref = 0;
    if (cfg.reference == "fine_grid") {
        n_ref = 4 * *std::max_element(cfg.n_list.begin(), cfg.n_list.end());
        phi_ref = aoc_case(cfg, n_ref, delta).phi;
    }

    for (int n : cfg.n_list) {
        const RunReport rep = aoc_case(cfg, n, delta);
        std::vector<double> ref(static_cast<std::size_t>(n), 0.0);
        if (n_ref > 0) ref = restrict_by_averaging(phi_ref, n);
        const double dx = (cfg.x_max - cfg.x_min) / n;
        AocRow row;
        row.n = n;
        row.l2_error_phi = l2_error(rep.phi, ref, dx);
        if (!table.rows.empty()) {
            row.aoc = std::log2(table.rows.back().l2_error_phi / row.l2_error_phi);
            row.has_aoc = true;
        }
        table.rows.push_back(row);
    }
    return table;
}

void write_fields_csv(const RunReport& report, const std::string& path) {
    std::ofstream out = open_for_writing(path);
    out << "x,rho,u,phi\n";
    for (std::size_t i = 0; i < report.x.size(); ++i)
        out << format_double(report.x[i]) << ',' << format_double(report.rho[i]) << ','
            << format_double(report.u[i]) << ',' << format_double(report.phi[i]) << '\n';
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

void write_diagnostics_csv(const RunReport& report, const std::string& path) {
    std::ofstream out = open_for_writing(path);
    out << "t,dt,max_rho_defect,max_div_q,total_mass,phi_inf\n";
    for (const StepDiagnostics& d : report.diagnostics)
        out << format_double(d.t) << ',' << format_double(d.dt) << ','
            << format_double(d.max_rho_defect) << ',' << format_double(d.max_div_q) << ','
            << format_double(d.total_mass) << ',' << format_double(d.phi_inf) << '\n';
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

void write_aoc_csv(const AocTable& table, const std::string& path) {
    std::ofstream out = open_for_writing(path);
    out << "N,l2_error_phi,aoc\n";
    for (const AocRow& row : table.rows) {
        out << row.n << ',' << format_double(row.l2_error_phi) << ',';
        if (row.has_aoc) out << format_double(row.aoc);
        out << '\n';
    }
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

FieldsCsv parse_fields_csv(const std::string& path) {
    FieldsCsv f;
    for (const std::string& line : read_data_lines(path, "x,rho,u,phi")) {
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != 4) throw NumericsError("expected 4 columns in " + path);
        f.x.push_back(parse_number(cells[0], path));
        f.rho.push_back(parse_number(cells[1], path));
        f.u.push_back(parse_number(cells[2], path));
        f.phi.push_back(parse_number(cells[3], path));
    }
    return f;
}

std::vector<StepDiagnostics> parse_diagnostics_csv(const std::string& path) {
    std::vector<StepDiagnostics> rows;
    for (const std::string& line :
         read_data_lines(path, "t,dt,max_rho_defect,max_div_q,total_mass,phi_inf")) {
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != 6) throw NumericsError("expected 6 columns in " + path);
        StepDiagnostics d;
        d.t = parse_number(cells[0], path);
        d.dt = parse_number(cells[1], path);
        d.max_rho_defect = parse_number(cells[2], path);
        d.max_div_q = parse_number(cells[3], path);
        d.total_mass = parse_number(cells[4], path);
        d.phi_inf = parse_number(cells[5], path);
        rows.push_back(d);
    }
    return rows;
}

AocTable parse_aoc_csv(const std::string& path) {
    AocTable table;
    for (const std::string& line : read_data_lines(path, "N,l2_error_phi,aoc")) {
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != 3) throw NumericsError("expected 3 columns in " + path);
        AocRow row;
        row.n = static_cast<int>(parse_number(cells[0], path));
        row.l2_error_phi = parse_number(cells[1], path);
        if (!cells[2].empty()) {
            row.aoc = parse_number(cells[2], path);
            row.has_aoc = true;
        }
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace qnep
