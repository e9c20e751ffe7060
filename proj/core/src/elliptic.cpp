#include "qnep/elliptic.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "qnep/errors.hpp"
#include "qnep/model.hpp"

namespace qnep {

namespace {

void check_density(const CellField& rho_E, const Grid1D& g) {
    for (int i = 0; i < g.n_cells; ++i)
        if (rho_E(i) < vacuum_threshold) throw VacuumError(rho_E(i), i);
}

#ifndef NDEBUG
void assert_residual(const std::vector<double>& lhs, const std::vector<double>& rhs,
                     double op_scale, const std::vector<double>& x) {
    double xmax = 0.0, rmax = 0.0, bmax = 0.0;
    for (double v : x) xmax = std::max(xmax, std::abs(v));
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        rmax = std::max(rmax, std::abs(lhs[i] - rhs[i]));
        bmax = std::max(bmax, std::abs(rhs[i]));
    }
    assert(rmax <= 1e-12 * (bmax + op_scale * xmax) + 1e-300);
    (void)rmax;
    (void)bmax;
}
#endif

}  // namespace

TridiagonalSystem assemble_variable_poisson(const CellField& rho_E, double eps, double dt,
                                            double a_kk, const std::vector<double>& rhs,
                                            const Grid1D& g) {
    const int n = g.n_cells;
    if (rho_E.n != n || rhs.size() != static_cast<std::size_t>(n))
        throw NumericsError("assemble_variable_poisson: sizes do not match grid");
    if (eps < 0.0) throw ConfigError("assemble_variable_poisson requires eps >= 0");
    if (!(dt > 0.0)) throw ConfigError("assemble_variable_poisson requires dt > 0");
    if (!(a_kk > 0.0)) throw ConfigError("assemble_variable_poisson requires a_kk > 0");
    check_density(rho_E, g);

    const double idx2 = 1.0 / (g.dx * g.dx);
    const double s = dt * dt * a_kk * a_kk;
    std::vector<double> c(static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j)
        c[static_cast<std::size_t>(j)] = eps * eps + s * 0.5 * (rho_E(j - 1) + rho_E(j));

    TridiagonalSystem sys;
    sys.sub.assign(static_cast<std::size_t>(n), 0.0);
    sys.diag.assign(static_cast<std::size_t>(n), 0.0);
    sys.super.assign(static_cast<std::size_t>(n), 0.0);
    sys.rhs = rhs;
    for (int i = 0; i < n; ++i) {
        const std::size_t is = static_cast<std::size_t>(i);
        const double cl = c[is];      // left face i-1/2
        const double cr = c[is + 1];  // right face i+1/2
        // Dirichlet ghosts double the boundary-face coupling onto the diagonal.
        const double cl_eff = (i == 0) ? 2.0 * cl : cl;
        const double cr_eff = (i == n - 1) ? 2.0 * cr : cr;
        sys.sub[is] = (i > 0) ? cl * idx2 : 0.0;
        sys.super[is] = (i < n - 1) ? cr * idx2 : 0.0;
        sys.diag[is] = -(cl_eff + cr_eff) * idx2;
    }
    return sys;
}

std::vector<double> apply_tridiagonal(const TridiagonalSystem& sys, const std::vector<double>& x) {
    const std::size_t n = sys.diag.size();
    if (x.size() != n) throw NumericsError("apply_tridiagonal: size mismatch");
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = sys.diag[i] * x[i];
        if (i > 0) y[i] += sys.sub[i] * x[i - 1];
        if (i + 1 < n) y[i] += sys.super[i] * x[i + 1];
    }
    return y;
}

std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys) {
    const std::size_t n = sys.diag.size();
    if (n == 0 || sys.sub.size() != n || sys.super.size() != n || sys.rhs.size() != n)
        throw NumericsError("solve_tridiagonal: inconsistent system sizes");

#ifndef NDEBUG
    for (std::size_t i = 0; i < n; ++i) {
        const double off = (i > 0 ? std::abs(sys.sub[i]) : 0.0) +
                           (i + 1 < n ? std::abs(sys.super[i]) : 0.0);
        assert(off <= std::abs(sys.diag[i]) * (1.0 + 1e-12) + 1e-300);
    }
#endif

    std::vector<double> cp(n), dp(n);
    double pivot = sys.diag[0];
    double scale = std::abs(sys.diag[0]);
    if (std::abs(pivot) <= 1e-300) throw NumericsError("solve_tridiagonal: zero pivot at row 0");
    cp[0] = sys.super[0] / pivot;
    dp[0] = sys.rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        scale = std::max(scale, std::abs(sys.diag[i]));
        pivot = sys.diag[i] - sys.sub[i] * cp[i - 1];
        if (std::abs(pivot) <= 1e-14 * scale)
            throw NumericsError("solve_tridiagonal: zero pivot at row " + std::to_string(i));
        cp[i] = sys.super[i] / pivot;
        dp[i] = (sys.rhs[i] - sys.sub[i] * dp[i - 1]) / pivot;
    }
    std::vector<double> x(n);
    x[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];

#ifndef NDEBUG
    double op_scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        op_scale = std::max(op_scale, std::abs(sys.sub[i]) + std::abs(sys.diag[i]) + std::abs(sys.super[i]));
    assert_residual(apply_tridiagonal(sys, x), sys.rhs, op_scale, x);
#endif
    return x;
}

std::vector<double> solve_standard_poisson(const CellField& rho, double eps, const Grid1D& g) {
    if (!(eps > 0.0)) throw ConfigError("classical Poisson singular at eps = 0");
    const int n = g.n_cells;
    if (rho.n != n) throw NumericsError("solve_standard_poisson: field does not match grid");

    const double k = eps * eps / (g.dx * g.dx);
    TridiagonalSystem sys;
    sys.sub.assign(static_cast<std::size_t>(n), k);
    sys.super.assign(static_cast<std::size_t>(n), k);
    sys.diag.assign(static_cast<std::size_t>(n), -2.0 * k);
    sys.diag.front() = -3.0 * k;  // ghost = -adjacent interior
    sys.diag.back() = -3.0 * k;
    sys.sub.front() = 0.0;
    sys.super.back() = 0.0;
    sys.rhs.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) sys.rhs[static_cast<std::size_t>(i)] = rho(i) - 1.0;
    return solve_tridiagonal(sys);
}

StageEllipticSystem assemble_stage_elliptic(const CellField& rho_E, double eps, double dt,
                                            double a_kk, const std::vector<double>& rhs,
                                            const Grid1D& g) {
    const int n = g.n_cells;
    if (rho_E.n != n || rhs.size() != static_cast<std::size_t>(n))
        throw NumericsError("assemble_stage_elliptic: sizes do not match grid");
    if (eps < 0.0) throw ConfigError("assemble_stage_elliptic requires eps >= 0");
    if (!(dt > 0.0)) throw ConfigError("assemble_stage_elliptic requires dt > 0");
    if (a_kk < 0.0) throw ConfigError("assemble_stage_elliptic requires a_kk >= 0");
    if (eps == 0.0 && a_kk == 0.0)
        throw ConfigError(
            "stage elliptic operator vanishes: eps = 0 with a zero implicit diagonal "
            "(use a tableau with positive diagonal entries at eps = 0)");
    check_density(rho_E, g);

    const double idx2 = 1.0 / (g.dx * g.dx);
    const double s = dt * dt * a_kk * a_kk;
    const double e2 = eps * eps;

    // Variable-coefficient part, single-valued on the circle: the shared
    // boundary face uses one value for both cell 0 and cell n-1.
    std::vector<double> w(static_cast<std::size_t>(n + 1));
    for (int j = 1; j < n; ++j) w[static_cast<std::size_t>(j)] = s * 0.5 * (rho_E(j - 1) + rho_E(j));
    w[0] = s * 0.5 * (rho_E(n - 1) + rho_E(0));
    w[static_cast<std::size_t>(n)] = w[0];

    StageEllipticSystem sys;
    sys.singular = (eps == 0.0);
    sys.corner = w[0] * idx2;
    sys.tri.sub.assign(static_cast<std::size_t>(n), 0.0);
    sys.tri.diag.assign(static_cast<std::size_t>(n), 0.0);
    sys.tri.super.assign(static_cast<std::size_t>(n), 0.0);
    sys.tri.rhs = rhs;
    for (int i = 0; i < n; ++i) {
        const std::size_t is = static_cast<std::size_t>(i);
        const double cl = e2 + w[is];
        const double cr = e2 + w[is + 1];
        sys.tri.sub[is] = (i > 0) ? cl * idx2 : 0.0;
        sys.tri.super[is] = (i < n - 1) ? cr * idx2 : 0.0;
        // The eps^2 Dirichlet part doubles at the boundary faces; the wrap
        // part keeps its single coupling, carried by the corner entries.
        double diag = cl + cr;
        if (i == 0) diag += e2;
        if (i == n - 1) diag += e2;
        sys.tri.diag[is] = -diag * idx2;
    }
    return sys;
}

std::vector<double> apply_stage_elliptic(const StageEllipticSystem& sys,
                                         const std::vector<double>& x) {
    std::vector<double> y = apply_tridiagonal(sys.tri, x);
    const std::size_t n = y.size();
    y[0] += sys.corner * x[n - 1];
    y[n - 1] += sys.corner * x[0];
    return y;
}

namespace {

std::vector<double> solve_cyclic_sherman_morrison(const StageEllipticSystem& sys) {
    const std::size_t n = sys.tri.diag.size();
    const double corner = sys.corner;
    const double gamma = -sys.tri.diag[0];

    TridiagonalSystem t = sys.tri;
    t.diag[0] -= gamma;
    t.diag[n - 1] -= corner * corner / gamma;

    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = corner;

    TridiagonalSystem tu = t;
    tu.rhs = u;
    const std::vector<double> z = solve_tridiagonal(tu);
    const std::vector<double> y = solve_tridiagonal(t);

    const double vy = y[0] + (corner / gamma) * y[n - 1];
    const double vz = z[0] + (corner / gamma) * z[n - 1];
    const double denom = 1.0 + vz;
    if (std::abs(denom) <= 1e-14) throw NumericsError("solve_stage_elliptic: singular corner update");

    std::vector<double> x(n);
    const double f = vy / denom;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] - f * z[i];
    return x;
}

std::vector<double> solve_gauged_singular(const StageEllipticSystem& sys) {
    const std::size_t n = sys.tri.diag.size();

    double rhs_sum = 0.0, rhs_max = 0.0;
    for (double v : sys.tri.rhs) {
        rhs_sum += v;
        rhs_max = std::max(rhs_max, std::abs(v));
    }
    if (std::abs(rhs_sum) > 1e-10 * static_cast<double>(n) * std::max(1.0, rhs_max))
        throw NumericsError(
            "quasineutral stage solve is inconsistent: mean density must be 1 at eps = 0");

    // Ground phi_{n-1} = 0 and drop its row; the corner couplings multiply
    // the grounded unknown, so the reduced system is plainly tridiagonal.
    TridiagonalSystem red;
    red.sub.assign(sys.tri.sub.begin(), sys.tri.sub.end() - 1);
    red.diag.assign(sys.tri.diag.begin(), sys.tri.diag.end() - 1);
    red.super.assign(sys.tri.super.begin(), sys.tri.super.end() - 1);
    red.rhs.assign(sys.tri.rhs.begin(), sys.tri.rhs.end() - 1);
    std::vector<double> xr = solve_tridiagonal(red);

    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) x[i] = xr[i];
    const double shift = 0.5 * (x[0] + x[n - 1]);
    for (double& v : x) v -= shift;
    return x;
}

}  // namespace

std::vector<double> solve_stage_elliptic(const StageEllipticSystem& sys) {
    const std::size_t n = sys.tri.diag.size();
    if (n < 3) throw NumericsError("solve_stage_elliptic: system too small");

    std::vector<double> x;
    if (sys.singular) {
        x = solve_gauged_singular(sys);
    } else if (sys.corner == 0.0) {
        x = solve_tridiagonal(sys.tri);
    } else {
        x = solve_cyclic_sherman_morrison(sys);
    }

#ifndef NDEBUG
    if (!sys.singular) {
        double op_scale = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            op_scale = std::max(op_scale, std::abs(sys.tri.sub[i]) + std::abs(sys.tri.diag[i]) +
                                              std::abs(sys.tri.super[i]) + std::abs(sys.corner));
        assert_residual(apply_stage_elliptic(sys, x), sys.tri.rhs, op_scale, x);
    }
#endif
    return x;
}

}  // namespace qnep
