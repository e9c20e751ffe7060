#include "qnep/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qnep/errors.hpp"

namespace qnep {

Grid1D build_grid(int n_cells, double x_min, double x_max) {
    if (n_cells < 4)
        throw ConfigError("n_cells must be at least 4, got " + std::to_string(n_cells));
    if (!(x_max > x_min))
        throw ConfigError("x_max must exceed x_min, got [" + std::to_string(x_min) + ", " +
                          std::to_string(x_max) + "]");
    Grid1D g;
    g.n_cells = n_cells;
    g.x_min = x_min;
    g.x_max = x_max;
    g.dx = (x_max - x_min) / n_cells;
    g.n_ghost = 2;
    g.centers.resize(static_cast<std::size_t>(n_cells));
    for (int i = 0; i < n_cells; ++i) g.centers[static_cast<std::size_t>(i)] = x_min + (i + 0.5) * g.dx;
    return g;
}

void apply_periodic(CellField& w) {
    const int n = w.n;
    for (int layer = 1; layer <= w.ng; ++layer) {
        w(-layer) = w(n - layer);
        w(n - 1 + layer) = w(layer - 1);
    }
    w.rule = BoundaryRule::periodic;
}

void apply_dirichlet_zero(CellField& w) {
    const int n = w.n;
    for (int layer = 1; layer <= w.ng; ++layer) {
        w(-layer) = -w(layer - 1);
        w(n - 1 + layer) = -w(n - layer);
    }
    w.rule = BoundaryRule::dirichlet_zero;
}

std::vector<double> delta_face(const std::vector<double>& f, const Grid1D& g) {
    const std::size_t n = static_cast<std::size_t>(g.n_cells);
    if (f.size() != n + 1)
        throw NumericsError("delta_face: expected " + std::to_string(n + 1) + " face values, got " +
                            std::to_string(f.size()));
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = f[i + 1] - f[i];
    return d;
}

std::vector<double> mu_cell(const CellField& w, const Grid1D& g) {
    const int n = g.n_cells;
    if (w.n != n) throw NumericsError("mu_cell: field does not match grid");
    std::vector<double> f(static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j) f[static_cast<std::size_t>(j)] = 0.5 * (w(j - 1) + w(j));
    return f;
}

namespace {

double minmod(double a, double b) {
    if (a > 0.0 && b > 0.0) return std::min(a, b);
    if (a < 0.0 && b < 0.0) return std::max(a, b);
    return 0.0;
}

double slope(const CellField& w, int i, Limiter limiter) {
    if (limiter == Limiter::minmod) return minmod(w(i + 1) - w(i), w(i) - w(i - 1));
    return 0.5 * (w(i + 1) - w(i - 1));
}

}  // namespace

FacePair reconstruct(const CellField& w, const Grid1D& g, Limiter limiter) {
    const int n = g.n_cells;
    if (w.n != n) throw NumericsError("reconstruct: field does not match grid");
    FacePair out;
    out.minus.resize(static_cast<std::size_t>(n + 1));
    out.plus.resize(static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j) {
        out.minus[static_cast<std::size_t>(j)] = w(j - 1) + 0.5 * slope(w, j - 1, limiter);
        out.plus[static_cast<std::size_t>(j)] = w(j) - 0.5 * slope(w, j, limiter);
    }
    return out;
}

}  // namespace qnep
