#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "qnep/integrate.hpp"

namespace {

qnep::State perturbed_state(const qnep::Grid1D& g, double delta) {
    qnep::State s = qnep::make_state(g);
    for (int i = 0; i < g.n_cells; ++i) {
        const double x = g.centers[static_cast<std::size_t>(i)];
        s.rho(i) = 1.0;
        s.q(i) = 1.0 + delta * std::cos(2.0 * std::numbers::pi * x);
    }
    qnep::apply_periodic(s.rho);
    qnep::apply_dirichlet_zero(s.phi);
    qnep::refresh_face_momenta(s, g);
    return s;
}

void bm_si_step(benchmark::State& bench) {
    const int n = static_cast<int>(bench.range(0));
    const qnep::Grid1D g = qnep::build_grid(n, 0.0, 1.0);
    qnep::SchemeConfig cfg;
    cfg.eps = 1e-4;
    const qnep::Tableau tab = qnep::load_tableau(cfg.tableau_id);
    const qnep::State s = perturbed_state(g, cfg.eps * cfg.eps);
    const double dt = qnep::compute_dt(s, g, cfg);
    for (auto _ : bench) {
        qnep::State next = qnep::si_imex_step(s, dt, cfg, tab, g);
        benchmark::DoNotOptimize(next.rho.data.data());
    }
}
BENCHMARK(bm_si_step)->Arg(100)->Arg(1000);

void bm_classical_step(benchmark::State& bench) {
    const int n = static_cast<int>(bench.range(0));
    const qnep::Grid1D g = qnep::build_grid(n, 0.0, 1.0);
    qnep::SchemeConfig cfg;
    cfg.scheme_kind = qnep::SchemeKind::classical;
    cfg.tableau_id = "ars222";
    cfg.eps = 1e-2;
    const qnep::Tableau tab = qnep::load_tableau(cfg.tableau_id);
    const qnep::State s = perturbed_state(g, cfg.eps * cfg.eps);
    const double dt = qnep::compute_dt(s, g, cfg);
    for (auto _ : bench) {
        qnep::State next = qnep::classical_imex_step(s, dt, cfg, tab, g);
        benchmark::DoNotOptimize(next.rho.data.data());
    }
}
BENCHMARK(bm_classical_step)->Arg(100)->Arg(1000);

void bm_stage_elliptic(benchmark::State& bench) {
    const int n = static_cast<int>(bench.range(0));
    const qnep::Grid1D g = qnep::build_grid(n, 0.0, 1.0);
    qnep::CellField rho(g, 1.0);
    std::vector<double> rhs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = g.centers[static_cast<std::size_t>(i)];
        rho(i) = 1.0 + 0.01 * std::sin(2.0 * std::numbers::pi * x);
        rhs[static_cast<std::size_t>(i)] = std::cos(2.0 * std::numbers::pi * x);
    }
    qnep::apply_periodic(rho);
    for (auto _ : bench) {
        const qnep::StageEllipticSystem sys =
            qnep::assemble_stage_elliptic(rho, 1e-3, 5e-4, 0.5, rhs, g);
        std::vector<double> phi = qnep::solve_stage_elliptic(sys);
        benchmark::DoNotOptimize(phi.data());
    }
}
BENCHMARK(bm_stage_elliptic)->Arg(100)->Arg(1000);

void bm_tridiagonal(benchmark::State& bench) {
    const int n = static_cast<int>(bench.range(0));
    const qnep::Grid1D g = qnep::build_grid(n, 0.0, 1.0);
    qnep::CellField rho(g, 1.0);
    std::vector<double> rhs(static_cast<std::size_t>(n), 1.0);
    qnep::apply_periodic(rho);
    const qnep::TridiagonalSystem sys =
        qnep::assemble_variable_poisson(rho, 0.1, 1e-3, 0.5, rhs, g);
    for (auto _ : bench) {
        std::vector<double> x = qnep::solve_tridiagonal(sys);
        benchmark::DoNotOptimize(x.data());
    }
}
BENCHMARK(bm_tridiagonal)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
