#include "qnep/spatial.hpp"

#include <cmath>

#include "qnep/errors.hpp"

namespace qnep {

double central_mass_flux(double q_left_cell, double q_right_cell) {
    return 0.5 * (q_left_cell + q_right_cell);
}

double rusanov_momentum_flux(const ConservedState& uL, const ConservedState& uR,
                             const GasLaw& gas) {
    if (uL.rho < vacuum_threshold) throw VacuumError(uL.rho, -1);
    if (uR.rho < vacuum_threshold) throw VacuumError(uR.rho, -1);
    const double alpha = 2.0 * std::max(std::abs(uL.q / uL.rho), std::abs(uR.q / uR.rho));
    const double fL = euler_flux(uL, gas).f_q;
    const double fR = euler_flux(uR, gas).f_q;
    return 0.5 * (fL + fR) - 0.5 * alpha * (uR.q - uL.q);
}

double central_source_flux(double phi_left_cell, double phi_right_cell) {
    return 0.5 * (phi_left_cell + phi_right_cell);
}

double mass_viscosity_face(double rho_E_left, double rho_E_right, double nu) {
    if (!(nu > 0.0)) throw ConfigError("mass_viscosity_face requires nu > 0");
    return (rho_E_right - rho_E_left) / nu;
}

std::vector<double> mass_flux_divergence(const CellField& q_I, const Grid1D& g) {
    return delta_face(mu_cell(q_I, g), g);
}

std::vector<double> momentum_flux_divergence(const CellField& rho_E, const CellField& q_E,
                                             const GasLaw& gas, Limiter limiter,
                                             const Grid1D& g) {
    const int n = g.n_cells;
    const FacePair rho_f = reconstruct(rho_E, g, limiter);
    const FacePair q_f = reconstruct(q_E, g, limiter);
    std::vector<double> flux(static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j) {
        const std::size_t js = static_cast<std::size_t>(j);
        if (rho_f.minus[js] < vacuum_threshold) throw VacuumError(rho_f.minus[js], j - 1);
        if (rho_f.plus[js] < vacuum_threshold) throw VacuumError(rho_f.plus[js], j);
        flux[js] = rusanov_momentum_flux({rho_f.minus[js], q_f.minus[js]},
                                         {rho_f.plus[js], q_f.plus[js]}, gas);
    }
    return delta_face(flux, g);
}

std::vector<double> source_divergence(const CellField& phi, const Grid1D& g) {
    const int n = g.n_cells;
    std::vector<double> d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        d[static_cast<std::size_t>(i)] = central_source_flux(phi(i), phi(i + 1)) -
                                         central_source_flux(phi(i - 1), phi(i));
    return d;
}

std::vector<double> viscosity_divergence(const CellField& rho_E, const Grid1D& g) {
    const int n = g.n_cells;
    std::vector<double> d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        d[static_cast<std::size_t>(i)] = rho_E(i + 1) - 2.0 * rho_E(i) + rho_E(i - 1);
    return d;
}

ExplicitResiduals assemble_explicit_residuals(const CellField& rho_E, const CellField& q_E,
                                              const CellField& q_I_prev,
                                              const CellField& phi_I_prev, const GasLaw& gas,
                                              const SpatialConfig& cfg, const Grid1D& g) {
    const int n = g.n_cells;
    if (rho_E.n != n || q_E.n != n || q_I_prev.n != n || phi_I_prev.n != n)
        throw NumericsError("assemble_explicit_residuals: field sizes do not match grid");

    ExplicitResiduals r;
    r.d_mass = mass_flux_divergence(q_I_prev, g);
    r.d_mom_flux = momentum_flux_divergence(rho_E, q_E, gas, cfg.limiter, g);
    r.d_source = source_divergence(phi_I_prev, g);

    std::vector<double> visc_flux(static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j)
        visc_flux[static_cast<std::size_t>(j)] = mass_viscosity_face(rho_E(j - 1), rho_E(j), cfg.nu);
    r.d_visc = delta_face(visc_flux, g);
    return r;
}

}  // namespace qnep
