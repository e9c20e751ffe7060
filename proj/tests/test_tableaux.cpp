#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"

#include "qnep/errors.hpp"
#include "qnep/tableaux.hpp"

using qnep::ConfigError;
using qnep::load_tableau;
using qnep::Tableau;
using qnep::TableauCheck;
using qnep::validate_tableau;

namespace {

const std::vector<std::string> registered_ids = {"imex_euler_111", "dirk_111_classical",
                                                 "ars222", "lsdirk222"};

}  // namespace

TEST_SUITE("tableaux") {

TEST_CASE("registered ids load and unknown ids are rejected by name") {
    for (const std::string& id : registered_ids) CHECK(load_tableau(id).id == id);
    CHECK_THROWS_WITH_AS(load_tableau("rk4"), doctest::Contains("rk4"), ConfigError);
}

TEST_CASE("coefficients are stored verbatim") {
    const double gamma = 1.0 - std::sqrt(2.0) / 2.0;
    const double sigma = 1.0 / (2.0 * gamma);
    const double delta = 1.0 - sigma;

    const Tableau e = load_tableau("imex_euler_111");
    CHECK(e.s == 1);
    CHECK(e.a_tilde[0][0] == 0.0);
    CHECK(e.a[0][0] == 1.0);
    CHECK(e.w_tilde == std::vector<double>{1.0});
    CHECK(e.w == std::vector<double>{1.0});
    CHECK(e.order == 1);
    CHECK_FALSE(e.stiffly_accurate_explicit);

    const Tableau d = load_tableau("dirk_111_classical");
    CHECK(d.s == 2);
    CHECK(d.a_tilde[1][0] == 1.0);
    CHECK(d.a[0][0] == 0.0);
    CHECK(d.a[1][1] == 1.0);
    CHECK(d.w_tilde == std::vector<double>{1.0, 0.0});
    CHECK(d.w == std::vector<double>{0.0, 1.0});
    CHECK(d.order == 1);
    CHECK(d.stiffly_accurate_explicit);

    const Tableau a2 = load_tableau("ars222");
    CHECK(a2.s == 3);
    CHECK(a2.a_tilde[1][0] == gamma);
    CHECK(a2.a_tilde[2][0] == delta);
    CHECK(a2.a_tilde[2][1] == 1.0 - delta);
    CHECK(a2.a[1][1] == gamma);
    CHECK(a2.a[2][1] == 1.0 - gamma);
    CHECK(a2.a[2][2] == gamma);
    CHECK(a2.w_tilde == std::vector<double>{delta, 1.0 - delta, 0.0});
    CHECK(a2.w == std::vector<double>{0.0, 1.0 - gamma, gamma});
    CHECK(a2.order == 2);
    CHECK(a2.stiffly_accurate_explicit);

    const Tableau l2 = load_tableau("lsdirk222");
    CHECK(l2.s == 2);
    CHECK(l2.a_tilde[1][0] == sigma);
    CHECK(l2.a[0][0] == gamma);
    CHECK(l2.a[1][0] == 1.0 - gamma);
    CHECK(l2.a[1][1] == gamma);
    CHECK(l2.w_tilde == std::vector<double>{1.0 - gamma, gamma});
    CHECK(l2.w == std::vector<double>{1.0 - gamma, gamma});
    CHECK(l2.order == 2);
    CHECK_FALSE(l2.stiffly_accurate_explicit);
}

TEST_CASE("nodes equal row sums") {
    for (const std::string& id : registered_ids) {
        const Tableau t = load_tableau(id);
        for (int k = 0; k < t.s; ++k) {
            double se = 0.0, si = 0.0;
            for (int l = 0; l < t.s; ++l) {
                se += t.a_tilde[k][l];
                si += t.a[k][l];
            }
            CHECK(t.c_tilde[k] == se);
            CHECK(t.c[k] == si);
        }
    }
}

TEST_CASE("every registered tableau passes validation with residuals within 1e-13") {
    for (const std::string& id : registered_ids) {
        const Tableau t = load_tableau(id);
        const std::vector<TableauCheck> checks = validate_tableau(t);
        CHECK(checks.size() >= 6);
        for (const TableauCheck& c : checks) {
            INFO(t.id, ": ", c.name, " residual ", c.residual);
            CHECK(c.pass);
            CHECK(c.residual <= 1e-13);
        }
    }
}

TEST_CASE("explicit stiff accuracy is checked only where declared") {
    auto has_check = [](const Tableau& t, const std::string& name) {
        for (const TableauCheck& c : validate_tableau(t))
            if (c.name == name) return true;
        return false;
    };
    CHECK(has_check(load_tableau("ars222"), "stiffly_accurate_explicit"));
    CHECK(has_check(load_tableau("dirk_111_classical"), "stiffly_accurate_explicit"));
    CHECK_FALSE(has_check(load_tableau("lsdirk222"), "stiffly_accurate_explicit"));
    CHECK_FALSE(has_check(load_tableau("imex_euler_111"), "stiffly_accurate_explicit"));
    for (const std::string& id : registered_ids)
        CHECK(has_check(load_tableau(id), "stiffly_accurate_implicit"));
}

TEST_CASE("repeated loads are bit-identical") {
    for (const std::string& id : registered_ids) {
        const Tableau a = load_tableau(id);
        const Tableau b = load_tableau(id);
        CHECK(a.a_tilde == b.a_tilde);
        CHECK(a.a == b.a);
        CHECK(a.c_tilde == b.c_tilde);
        CHECK(a.c == b.c);
        CHECK(a.w_tilde == b.w_tilde);
        CHECK(a.w == b.w);
    }
}

TEST_CASE("validation reports tampered coefficients without throwing") {
    Tableau t = load_tableau("ars222");
    t.w[2] += 1e-6;
    bool any_failed = false;
    for (const TableauCheck& c : validate_tableau(t)) any_failed = any_failed || !c.pass;
    CHECK(any_failed);

    Tableau u = load_tableau("lsdirk222");
    u.a_tilde[0][1] = 0.25;
    bool triangularity_failed = false;
    for (const TableauCheck& c : validate_tableau(u))
        if (c.name == "explicit_strictly_lower_triangular") triangularity_failed = !c.pass;
    CHECK(triangularity_failed);
}

}  // TEST_SUITE
