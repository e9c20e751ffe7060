#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"

#include "qnep/errors.hpp"
#include "qnep/spatial.hpp"

using namespace qnep;

namespace {

constexpr double pi = std::numbers::pi;

struct SmoothFields {
    CellField rho, q;
};

SmoothFields smooth_periodic(const Grid1D& g) {
    SmoothFields f{CellField(g), CellField(g)};
    for (int i = 0; i < g.n_cells; ++i) {
        const double x = g.centers[static_cast<std::size_t>(i)];
        f.rho(i) = 1.0 + 0.3 * std::sin(2.0 * pi * x);
        f.q(i) = 0.5 + 0.2 * std::cos(2.0 * pi * x);
    }
    apply_periodic(f.rho);
    apply_periodic(f.q);
    return f;
}

/// d/dx (q^2/rho + rho^gamma) of the smooth_periodic profile.
double momentum_flux_derivative(double x, double gamma) {
    const double rho = 1.0 + 0.3 * std::sin(2.0 * pi * x);
    const double q = 0.5 + 0.2 * std::cos(2.0 * pi * x);
    const double drho = 0.3 * 2.0 * pi * std::cos(2.0 * pi * x);
    const double dq = -0.2 * 2.0 * pi * std::sin(2.0 * pi * x);
    return (2.0 * q * dq * rho - q * q * drho) / (rho * rho) +
           gamma * std::pow(rho, gamma - 1.0) * drho;
}

double linf_flux_error(int n, const GasLaw& gas, Limiter limiter) {
    const Grid1D g = build_grid(n, 0.0, 1.0);
    const SmoothFields f = smooth_periodic(g);
    const std::vector<double> d = momentum_flux_divergence(f.rho, f.q, gas, limiter, g);
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = g.centers[static_cast<std::size_t>(i)];
        err = std::max(err, std::abs(d[static_cast<std::size_t>(i)] / g.dx -
                                     momentum_flux_derivative(x, gas.gamma)));
    }
    return err;
}

double l1_flux_error(int n, const GasLaw& gas, Limiter limiter) {
    const Grid1D g = build_grid(n, 0.0, 1.0);
    const SmoothFields f = smooth_periodic(g);
    const std::vector<double> d = momentum_flux_divergence(f.rho, f.q, gas, limiter, g);
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = g.centers[static_cast<std::size_t>(i)];
        err += std::abs(d[static_cast<std::size_t>(i)] / g.dx -
                        momentum_flux_derivative(x, gas.gamma)) *
               g.dx;
    }
    return err;
}

}  // namespace

TEST_SUITE("spatial") {

TEST_CASE("central fluxes average the neighbors") {
    CHECK(central_mass_flux(1.0, 1.0) == 1.0);
    CHECK(central_mass_flux(0.0, 2.0) == 1.0);
    CHECK(central_source_flux(3.0, 5.0) == 4.0);
}

TEST_CASE("rusanov momentum flux values") {
    const GasLaw g2{2.0};
    CHECK(rusanov_momentum_flux({1.0, 0.0}, {1.0, 0.0}, g2) == 1.0);
    CHECK(rusanov_momentum_flux({1.0, 1.0}, {1.0, 1.0}, g2) == 2.0);
    CHECK(rusanov_momentum_flux({1.0, 0.0}, {1.0, 1.0}, g2) == 0.5);
    CHECK_THROWS_AS(rusanov_momentum_flux({0.0, 0.0}, {1.0, 1.0}, g2), VacuumError);
    CHECK_THROWS_AS(rusanov_momentum_flux({1.0, 0.0}, {-1.0, 1.0}, g2), VacuumError);
}

TEST_CASE("rusanov dissipation vanishes exactly for equal momenta") {
    const GasLaw gas{1.4};
    const ConservedState uL{2.0, 0.7};
    const ConservedState uR{3.0, 0.7};
    const double expected = 0.5 * (euler_flux(uL, gas).f_q + euler_flux(uR, gas).f_q);
    CHECK(rusanov_momentum_flux(uL, uR, gas) == expected);
}

TEST_CASE("mass viscosity flux") {
    CHECK(mass_viscosity_face(1.0, 1.0, 0.5) == 0.0);
    CHECK_THROWS_AS(mass_viscosity_face(1.0, 1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(mass_viscosity_face(1.0, 1.0, -2.0), ConfigError);

    // A lone bump contributes the discrete Laplacian -2h at its own cell.
    const Grid1D g = build_grid(5, 0.0, 1.0);
    const double h = 0.01;
    CellField rho(g, 1.0);
    rho(2) = 1.0 + h;
    apply_periodic(rho);
    const std::vector<double> d = viscosity_divergence(rho, g);
    CHECK(d[2] == doctest::Approx(-2.0 * h).epsilon(1e-12));
    CHECK(d[1] == doctest::Approx(h).epsilon(1e-12));
    CHECK(d[3] == doctest::Approx(h).epsilon(1e-12));
    CHECK(d[0] == 0.0);
}

TEST_CASE("viscosity contribution approximates dx^2 times the second derivative") {
    const int n = 64;
    const Grid1D g = build_grid(n, 0.0, 1.0);
    CellField rho(g);
    for (int i = 0; i < n; ++i)
        rho(i) = 1.0 + 0.01 * std::sin(2.0 * pi * g.centers[static_cast<std::size_t>(i)]);
    apply_periodic(rho);
    const std::vector<double> d = viscosity_divergence(rho, g);
    for (int i = 0; i < n; ++i) {
        const double x = g.centers[static_cast<std::size_t>(i)];
        const double analytic =
            g.dx * g.dx * (-0.01 * 4.0 * pi * pi * std::sin(2.0 * pi * x));
        CHECK(d[static_cast<std::size_t>(i)] ==
              doctest::Approx(analytic).epsilon(0.05).scale(1e-8));
    }
}

TEST_CASE("source divergence of constant and linear potentials") {
    const Grid1D g = build_grid(10, 0.0, 1.0);

    CellField phi(g, 2.0);
    for (int i = -g.n_ghost; i < g.n_cells + g.n_ghost; ++i) phi(i) = 2.0;
    std::vector<double> d = source_divergence(phi, g);
    for (double v : d) CHECK(v == 0.0);

    for (int i = -g.n_ghost; i < g.n_cells + g.n_ghost; ++i)
        phi(i) = g.x_min + (i + 0.5) * g.dx;
    d = source_divergence(phi, g);
    for (double v : d) CHECK(v == doctest::Approx(g.dx).epsilon(1e-13));
}

TEST_CASE("assembled residuals vanish on a uniform state") {
    const Grid1D g = build_grid(12, 0.0, 1.0);
    CellField rho(g, 1.0), q(g, 1.0), phi(g, 0.0);
    apply_periodic(rho);
    apply_periodic(q);
    apply_dirichlet_zero(phi);
    const SpatialConfig cfg{Limiter::minmod, 0.8};
    const ExplicitResiduals r = assemble_explicit_residuals(rho, q, q, phi, GasLaw{}, cfg, g);
    for (int i = 0; i < g.n_cells; ++i) {
        const std::size_t j = static_cast<std::size_t>(i);
        CHECK(r.d_mass[j] == 0.0);
        CHECK(r.d_mom_flux[j] == 0.0);
        CHECK(r.d_source[j] == 0.0);
        CHECK(r.d_visc[j] == 0.0);
    }
}

TEST_CASE("mass flux divergence matches the analytic derivative on cosine data") {
    const int n = 100;
    const Grid1D g = build_grid(n, 0.0, 1.0);
    const double delta = 1e-2;
    CellField q(g);
    for (int i = 0; i < n; ++i)
        q(i) = 1.0 + delta * std::cos(2.0 * pi * g.centers[static_cast<std::size_t>(i)]);
    apply_periodic(q);
    const std::vector<double> d = mass_flux_divergence(q, g);
    for (int i = 0; i < n; ++i) {
        const double x = g.centers[static_cast<std::size_t>(i)];
        const double analytic = -delta * 2.0 * pi * std::sin(2.0 * pi * x);
        CHECK(d[static_cast<std::size_t>(i)] / g.dx ==
              doctest::Approx(analytic).epsilon(5e-3).scale(delta));
    }
}

TEST_CASE("flux-difference arrays telescope to zero on periodic fields") {
    const Grid1D g = build_grid(32, 0.0, 1.0);
    std::mt19937 rng(4711);
    std::uniform_real_distribution<double> drho(0.5, 1.5), dq(-1.0, 1.0);
    const SpatialConfig cfg{Limiter::minmod, 0.6};
    for (int trial = 0; trial < 25; ++trial) {
        CellField rho(g), q(g), phi(g);
        for (int i = 0; i < g.n_cells; ++i) {
            rho(i) = drho(rng);
            q(i) = dq(rng);
            phi(i) = dq(rng);
        }
        apply_periodic(rho);
        apply_periodic(q);
        apply_dirichlet_zero(phi);
        const ExplicitResiduals r =
            assemble_explicit_residuals(rho, q, q, phi, GasLaw{}, cfg, g);
        double sm = 0.0, sf = 0.0, sv = 0.0, l1 = 0.0;
        for (int i = 0; i < g.n_cells; ++i) {
            const std::size_t j = static_cast<std::size_t>(i);
            sm += r.d_mass[j];
            sf += r.d_mom_flux[j];
            sv += r.d_visc[j];
            l1 += std::abs(r.d_mom_flux[j]);
        }
        CHECK(std::abs(sm) <= 1e-12);
        CHECK(std::abs(sf) <= 1e-12 * std::max(1.0, l1));
        CHECK(std::abs(sv) <= 1e-12);
    }
}

TEST_CASE("source contribution is non-conservative in general") {
    const Grid1D g = build_grid(16, 0.0, 1.0);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    CellField rho(g), phi(g);
    for (int i = 0; i < g.n_cells; ++i) {
        rho(i) = 1.0 + 0.3 * dist(rng);
        phi(i) = dist(rng);
    }
    apply_periodic(rho);
    apply_dirichlet_zero(phi);
    const std::vector<double> ds = source_divergence(phi, g);
    double total = 0.0;
    for (int i = 0; i < g.n_cells; ++i) total += rho(i) * ds[static_cast<std::size_t>(i)];
    CHECK(std::abs(total) > 1e-6);
}

TEST_CASE("momentum flux divergence converges to the derivative") {
    const GasLaw gas;

    const double e64 = linf_flux_error(64, gas, Limiter::none);
    const double e128 = linf_flux_error(128, gas, Limiter::none);
    const double order_unlimited = std::log2(e64 / e128);
    CHECK(order_unlimited >= 1.7);
    CHECK(order_unlimited <= 2.3);

    const double m64 = l1_flux_error(64, gas, Limiter::minmod);
    const double m128 = l1_flux_error(128, gas, Limiter::minmod);
    CHECK(std::log2(m64 / m128) >= 0.9);
}

TEST_CASE("size mismatches are rejected") {
    const Grid1D g = build_grid(8, 0.0, 1.0);
    const Grid1D small = build_grid(4, 0.0, 1.0);
    CellField rho(g, 1.0), q(g, 0.0), phi(g, 0.0), wrong(small, 1.0);
    apply_periodic(rho);
    apply_periodic(q);
    apply_dirichlet_zero(phi);
    apply_periodic(wrong);
    const SpatialConfig cfg;
    CHECK_THROWS_AS(assemble_explicit_residuals(wrong, q, q, phi, GasLaw{}, cfg, g),
                    NumericsError);
}

}  // TEST_SUITE
