#include "qnep/tableaux.hpp"

#include <cmath>
#include <cstdlib>

#include "qnep/errors.hpp"

namespace qnep {

namespace {

/// Nodes are the row sums; keeping them derived guarantees the row-sum
/// invariant at rounding level.
std::vector<double> row_sums(const std::vector<std::vector<double>>& m) {
    std::vector<double> sums;
    sums.reserve(m.size());
    for (const auto& row : m) {
        double acc = 0.0;
        for (double v : row) acc += v;
        sums.push_back(acc);
    }
    return sums;
}

Tableau make_imex_euler_111() {
    Tableau t;
    t.id = "imex_euler_111";
    t.s = 1;
    t.a_tilde = {{0.0}};
    t.a = {{1.0}};
    t.w_tilde = {1.0};
    t.w = {1.0};
    t.order = 1;
    t.stiffly_accurate_explicit = false;
    t.c_tilde = row_sums(t.a_tilde);
    t.c = row_sums(t.a);
    return t;
}

Tableau make_dirk_111_classical() {
    Tableau t;
    t.id = "dirk_111_classical";
    t.s = 2;
    t.a_tilde = {{0.0, 0.0}, {1.0, 0.0}};
    t.a = {{0.0, 0.0}, {0.0, 1.0}};
    t.w_tilde = {1.0, 0.0};
    t.w = {0.0, 1.0};
    t.order = 1;
    t.stiffly_accurate_explicit = true;
    t.c_tilde = row_sums(t.a_tilde);
    t.c = row_sums(t.a);
    return t;
}

Tableau make_ars222() {
    const double gamma = 1.0 - std::sqrt(2.0) / 2.0;
    const double sigma = 1.0 / (2.0 * gamma);
    const double delta = 1.0 - sigma;
    Tableau t;
    t.id = "ars222";
    t.s = 3;
    t.a_tilde = {{0.0, 0.0, 0.0}, {gamma, 0.0, 0.0}, {delta, 1.0 - delta, 0.0}};
    t.a = {{0.0, 0.0, 0.0}, {0.0, gamma, 0.0}, {0.0, 1.0 - gamma, gamma}};
    t.w_tilde = {delta, 1.0 - delta, 0.0};
    t.w = {0.0, 1.0 - gamma, gamma};
    t.order = 2;
    t.stiffly_accurate_explicit = true;
    t.c_tilde = row_sums(t.a_tilde);
    t.c = row_sums(t.a);
    return t;
}

Tableau make_lsdirk222() {
    const double gamma = 1.0 - std::sqrt(2.0) / 2.0;
    const double sigma = 1.0 / (2.0 * gamma);
    Tableau t;
    t.id = "lsdirk222";
    t.s = 2;
    t.a_tilde = {{0.0, 0.0}, {sigma, 0.0}};
    t.a = {{gamma, 0.0}, {1.0 - gamma, gamma}};
    t.w_tilde = {1.0 - gamma, gamma};
    t.w = {1.0 - gamma, gamma};
    t.order = 2;
    t.stiffly_accurate_explicit = false;
    t.c_tilde = row_sums(t.a_tilde);
    t.c = row_sums(t.a);
    return t;
}

}  // namespace

Tableau load_tableau(const std::string& id) {
    if (id == "imex_euler_111") return make_imex_euler_111();
    if (id == "dirk_111_classical") return make_dirk_111_classical();
    if (id == "ars222") return make_ars222();
    if (id == "lsdirk222") return make_lsdirk222();
    throw ConfigError("unknown tableau '" + id +
                      "' (registered: imex_euler_111, dirk_111_classical, ars222, lsdirk222)");
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double sum(const std::vector<double>& a) {
    double acc = 0.0;
    for (double v : a) acc += v;
    return acc;
}

void push_check(std::vector<TableauCheck>& out, const std::string& name, double residual,
                double tol = 1e-13) {
    out.push_back({name, std::abs(residual) <= tol, std::abs(residual)});
}

}  // namespace

std::vector<TableauCheck> validate_tableau(const Tableau& t) {
    std::vector<TableauCheck> checks;
    const int s = t.s;

    double r = 0.0;
    for (int k = 0; k < s; ++k)
        for (int l = k; l < s; ++l) r = std::max(r, std::abs(t.a_tilde[k][l]));
    push_check(checks, "explicit_strictly_lower_triangular", r);

    r = 0.0;
    for (int k = 0; k < s; ++k)
        for (int l = k + 1; l < s; ++l) r = std::max(r, std::abs(t.a[k][l]));
    push_check(checks, "implicit_lower_triangular", r);

    r = 0.0;
    for (int l = 0; l < s; ++l) r = std::max(r, std::abs(t.a[s - 1][l] - t.w[l]));
    push_check(checks, "stiffly_accurate_implicit", r);

    if (t.stiffly_accurate_explicit) {
        r = 0.0;
        for (int l = 0; l < s; ++l) r = std::max(r, std::abs(t.a_tilde[s - 1][l] - t.w_tilde[l]));
        push_check(checks, "stiffly_accurate_explicit", r);
    }

    r = 0.0;
    for (int k = 0; k < s; ++k) {
        r = std::max(r, std::abs(sum(t.a_tilde[k]) - t.c_tilde[k]));
        r = std::max(r, std::abs(sum(t.a[k]) - t.c[k]));
    }
    push_check(checks, "row_sums_match_nodes", r, 1e-14);

    push_check(checks, "first_order_implicit", sum(t.w) - 1.0);
    push_check(checks, "first_order_explicit", sum(t.w_tilde) - 1.0);

    if (t.order >= 2) {
        push_check(checks, "second_order_implicit", dot(t.w, t.c) - 0.5);
        push_check(checks, "second_order_explicit", dot(t.w_tilde, t.c_tilde) - 0.5);
        push_check(checks, "second_order_coupling_w_ctilde", dot(t.w, t.c_tilde) - 0.5);
        push_check(checks, "second_order_coupling_wtilde_c", dot(t.w_tilde, t.c) - 0.5);
    }
    return checks;
}

}  // namespace qnep
