#pragma once

#include <vector>

namespace qnep {

/// Uniform 1D finite-volume grid. Cell i covers
/// [x_min + i dx, x_min + (i+1) dx); face j sits at x_min + j dx for
/// j in [0, n_cells]. Immutable after construction.
struct Grid1D {
    int n_cells = 0;
    double x_min = 0.0;
    double x_max = 0.0;
    double dx = 0.0;
    int n_ghost = 2;
    std::vector<double> centers;  ///< x_min + (i + 1/2) dx, interior cells only
};

/// pre: n_cells >= 4 and x_max > x_min (ConfigError otherwise).
Grid1D build_grid(int n_cells, double x_min, double x_max);

enum class BoundaryRule { none, periodic, dirichlet_zero };

/// Cell-centered values over the interior cells plus n_ghost ghost cells on
/// each side. Indexing is by interior cell number: operator()(i) is valid for
/// i in [-n_ghost, n + n_ghost).
struct CellField {
    CellField() = default;
    CellField(const Grid1D& g, double fill = 0.0)
        : n(g.n_cells), ng(g.n_ghost), rule(BoundaryRule::none),
          data(static_cast<std::size_t>(g.n_cells + 2 * g.n_ghost), fill) {}

    int n = 0;
    int ng = 0;
    BoundaryRule rule = BoundaryRule::none;
    std::vector<double> data;

    double& operator()(int i) { return data[static_cast<std::size_t>(i + ng)]; }
    double operator()(int i) const { return data[static_cast<std::size_t>(i + ng)]; }
};

/// Fills ghosts with wrapped interior values. Idempotent.
void apply_periodic(CellField& w);

/// Fills ghosts with the odd reflection of the interior about the boundary
/// face (ghost = -mirror interior), so a linear reconstruction hits zero on
/// the boundary faces. Idempotent.
void apply_dirichlet_zero(CellField& w);

/// delta_face(f)_i = f_{i+1/2} - f_{i-1/2}. Input holds n_cells + 1 faces,
/// output n_cells values. NumericsError on size mismatch.
std::vector<double> delta_face(const std::vector<double>& f, const Grid1D& g);

/// mu_cell(w)_{i+1/2} = (w_{i+1} + w_i)/2 over all n_cells + 1 faces; the two
/// boundary faces read one ghost value each. pre: ghosts filled.
std::vector<double> mu_cell(const CellField& w, const Grid1D& g);

enum class Limiter { none, minmod };

/// Left/right interpolated states at every face. With zero slopes, minus
/// equals the left cell value and plus the right cell value.
struct FacePair {
    std::vector<double> minus;  ///< w- at face j, extrapolated from cell j-1
    std::vector<double> plus;   ///< w+ at face j, extrapolated from cell j
};

/// Piecewise linear reconstruction. Limiter none uses the central slope
/// (w_{i+1} - w_{i-1})/2; minmod uses minmod(w_{i+1} - w_i, w_i - w_{i-1}).
/// pre: ghosts filled (two layers).
FacePair reconstruct(const CellField& w, const Grid1D& g, Limiter limiter);

}  // namespace qnep
