#pragma once

#include "qnep/mesh.hpp"

namespace qnep {

/// Tridiagonal linear system; sub[0] and super[n-1] are ignored.
struct TridiagonalSystem {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> super;
    std::vector<double> rhs;
};

/// Assembles row i of
///   [c_{i+1/2}(phi_{i+1} - phi_i) - c_{i-1/2}(phi_i - phi_{i-1})] / dx^2 = rhs_i
/// with face coefficient c_{i+1/2} = eps^2 + dt^2 a_kk^2 mu(rho_E)_{i+1/2}
/// and homogeneous Dirichlet ghosts (phi = 0 on the boundary faces). The
/// assembled operator is symmetric and diagonally dominant. rho_E needs
/// periodic ghosts filled for the two boundary-face averages.
/// pre: rho_E > 0 (VacuumError), eps >= 0, dt > 0, a_kk > 0.
TridiagonalSystem assemble_variable_poisson(const CellField& rho_E, double eps, double dt,
                                            double a_kk, const std::vector<double>& rhs,
                                            const Grid1D& g);

/// Direct Thomas elimination. pre: diagonally dominant (zero pivots raise
/// NumericsError). In debug builds the residual is asserted against
/// 1e-12 (|rhs| + |A||x|) row-wise.
std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys);

/// Applies the tridiagonal operator (without rhs) to x. Test/diagnostic aid.
std::vector<double> apply_tridiagonal(const TridiagonalSystem& sys, const std::vector<double>& x);

/// Solves eps^2 (Dirichlet Laplacian) phi = rho - 1 for the classical
/// constraint. errors: ConfigError "classical Poisson singular at eps = 0".
std::vector<double> solve_standard_poisson(const CellField& rho, double eps, const Grid1D& g);

/// Stage operator of the semi-implicit scheme:
///   eps^2 L_dirichlet + dt^2 a_kk^2 W,
/// where W = div(mu(rho_E) grad) uses the compact face gradient made
/// single-valued on the periodic circle: the two boundary faces share the
/// gradient (phi_0 - phi_{n-1})/dx, producing one symmetric corner pair.
/// This closure is what lets the implicit mass update telescope exactly.
struct StageEllipticSystem {
    TridiagonalSystem tri;
    double corner = 0.0;    ///< entries (0, n-1) and (n-1, 0)
    bool singular = false;  ///< eps == 0: constant null space, gauged solve
};

/// pre as assemble_variable_poisson, except a_kk may be zero only when
/// eps > 0 (ConfigError for eps == 0 with a_kk == 0: the stage operator
/// would vanish identically).
StageEllipticSystem assemble_stage_elliptic(const CellField& rho_E, double eps, double dt,
                                            double a_kk, const std::vector<double>& rhs,
                                            const Grid1D& g);

/// Direct solve of the stage system: Sherman-Morrison on the corner pair when
/// nonsingular; for the singular eps = 0 operator the right side must sum to
/// zero (NumericsError "mean density must be 1" otherwise) and the solution
/// is gauged so that phi_0 + phi_{n-1} = 0, the limit gauge of the eps > 0
/// solutions.
std::vector<double> solve_stage_elliptic(const StageEllipticSystem& sys);

/// Applies tridiagonal + corner pair to x. Test/diagnostic aid.
std::vector<double> apply_stage_elliptic(const StageEllipticSystem& sys,
                                         const std::vector<double>& x);

}  // namespace qnep
