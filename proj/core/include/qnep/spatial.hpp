#pragma once

#include "qnep/mesh.hpp"
#include "qnep/model.hpp"

namespace qnep {

/// Plain face-difference (delta_x) arrays of the explicit stage operators.
/// Time-step, mesh-ratio and tableau factors are applied by the caller:
/// d_source is to be multiplied by rho_E cellwise, d_visc already carries the
/// 1/nu of the stabilization flux.
struct ExplicitResiduals {
    std::vector<double> d_mass;      ///< delta_x of the central mass flux of q_I
    std::vector<double> d_mom_flux;  ///< delta_x of the Rusanov momentum flux on U_E
    std::vector<double> d_source;    ///< delta_x of the central potential flux
    std::vector<double> d_visc;      ///< delta_x of the stabilization flux G
};

/// Central mass flux (q_{i+1} + q_i)/2 from the two adjacent cell momenta.
double central_mass_flux(double q_left_cell, double q_right_cell);

/// Rusanov momentum flux on reconstructed face states, with dissipation on
/// the momentum only: (F_q(uR) + F_q(uL))/2 - (alpha/2)(q_R - q_L), where
/// alpha = 2 max(|q_L/rho_L|, |q_R/rho_R|) matches the eigenvalues of the
/// convective subsystem. VacuumError on nonpositive density.
double rusanov_momentum_flux(const ConservedState& uL, const ConservedState& uR,
                             const GasLaw& gas);

/// Central potential flux (phi_{i+1} + phi_i)/2. Its cell difference times
/// rho_E,i gives the non-conservative source contribution
/// rho_E,i (phi_{i+1} - phi_{i-1})/2.
double central_source_flux(double phi_left_cell, double phi_right_cell);

/// Stabilization flux G_{i+1/2} = (rho_{E,i+1} - rho_{E,i})/nu, nu = dt/dx.
/// The implicit mass update adds a_kk nu delta_x(G), a discrete Laplacian of
/// rho_E. ConfigError for nu <= 0.
double mass_viscosity_face(double rho_E_left, double rho_E_right, double nu);

struct SpatialConfig {
    Limiter limiter = Limiter::minmod;
    double nu = 1.0;  ///< mesh ratio dt/dx (only the viscosity flux uses it)
};

/// Assembles all four arrays at once:
///   d_mass     from the central flux of the cell momenta q_I_prev,
///   d_mom_flux from the Rusanov flux on reconstructed (rho_E, q_E),
///   d_source   from the central flux of phi_I_prev,
///   d_visc     from the stabilization flux on rho_E.
/// pre: ghosts filled (periodic on the hydrodynamic fields, dirichlet_zero
/// on the potential). Under periodic ghosts the totals of d_mass, d_mom_flux
/// and d_visc telescope to zero; d_source does not (non-conservative).
ExplicitResiduals assemble_explicit_residuals(const CellField& rho_E, const CellField& q_E,
                                              const CellField& q_I_prev,
                                              const CellField& phi_I_prev, const GasLaw& gas,
                                              const SpatialConfig& cfg, const Grid1D& g);

/// delta_x of the central mass flux of cell momenta (one component of
/// assemble_explicit_residuals, reused by the steppers).
std::vector<double> mass_flux_divergence(const CellField& q_I, const Grid1D& g);

/// delta_x of the Rusanov momentum flux on reconstructed (rho_E, q_E).
std::vector<double> momentum_flux_divergence(const CellField& rho_E, const CellField& q_E,
                                             const GasLaw& gas, Limiter limiter, const Grid1D& g);

/// delta_x of the central potential flux, (phi_{i+1} - phi_{i-1})/2.
std::vector<double> source_divergence(const CellField& phi, const Grid1D& g);

/// nu * delta_x(G) = rho_{E,i+1} - 2 rho_{E,i} + rho_{E,i-1} (assembled
/// directly so both of its uses in a stage share identical values).
std::vector<double> viscosity_divergence(const CellField& rho_E, const Grid1D& g);

}  // namespace qnep
