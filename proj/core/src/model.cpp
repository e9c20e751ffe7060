#include "qnep/model.hpp"

#include <cmath>

#include "qnep/errors.hpp"

namespace qnep {

double pressure(double rho, const GasLaw& gas) {
    if (rho < vacuum_threshold) throw VacuumError(rho, -1);
    return std::pow(rho, gas.gamma);
}

double sound_speed(double rho, const GasLaw& gas) {
    if (rho < vacuum_threshold) throw VacuumError(rho, -1);
    return std::sqrt(gas.gamma * std::pow(rho, gas.gamma - 1.0));
}

Flux2 euler_flux(const ConservedState& u, const GasLaw& gas) {
    if (u.rho < vacuum_threshold) throw VacuumError(u.rho, -1);
    return {u.q, u.q * u.q / u.rho + pressure(u.rho, gas)};
}

double max_wavespeed(const ConservedState& u, const GasLaw& gas, SchemeKind kind) {
    if (u.rho < vacuum_threshold) throw VacuumError(u.rho, -1);
    const double speed = std::abs(u.q / u.rho);
    if (kind == SchemeKind::si_ap) return 2.0 * speed;
    return speed + sound_speed(u.rho, gas);
}

LinearMode linear_mode_solution(double xi, double eps, double c_s,
                                std::complex<double> rho0_hat, std::complex<double> u0_hat,
                                double t) {
    if (xi == 0.0) throw ConfigError("linear_mode_solution requires xi != 0");
    if (!(eps > 0.0)) throw ConfigError("linear_mode_solution requires eps > 0");

    // Eliminating phi_hat = -rho_hat/(eps^2 xi^2) from
    //   rho_hat' = -i xi u_hat,   u_hat' = -i xi c_s^2 rho_hat + i xi phi_hat
    // leaves rho_hat'' = -omega^2 rho_hat with the frequency below.
    const double ceff2 = c_s * c_s + 1.0 / (eps * eps * xi * xi);
    const double omega = std::sqrt(c_s * c_s * xi * xi + 1.0 / (eps * eps));
    const std::complex<double> i(0.0, 1.0);

    const std::complex<double> drho0 = -i * xi * u0_hat;
    const std::complex<double> du0 = -i * xi * ceff2 * rho0_hat;
    const double cw = std::cos(omega * t);
    const double sw = std::sin(omega * t);

    LinearMode m;
    m.rho_hat = rho0_hat * cw + drho0 * (sw / omega);
    m.u_hat = u0_hat * cw + du0 * (sw / omega);
    m.phi_hat = -m.rho_hat / (eps * eps * xi * xi);
    return m;
}

WellPreparednessDefect wellpreparedness_defect(const CellField& rho, const CellField& q,
                                               const Grid1D& g, double /*eps*/) {
    CellField qp = q;
    apply_periodic(qp);
    WellPreparednessDefect d;
    for (int i = 0; i < g.n_cells; ++i) {
        d.max_rho_defect = std::max(d.max_rho_defect, std::abs(rho(i) - 1.0));
        d.max_div_q = std::max(d.max_div_q, std::abs((qp(i + 1) - qp(i - 1)) / (2.0 * g.dx)));
    }
    return d;
}

}  // namespace qnep
