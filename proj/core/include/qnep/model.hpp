#pragma once

#include <complex>

#include "qnep/mesh.hpp"

namespace qnep {

/// Isentropic pressure law p(rho) = rho^gamma with gamma > 1.
struct GasLaw {
    double gamma = 5.0 / 3.0;
};

/// Densities below this are treated as vacuum and raise a hard error; the
/// regimes of interest keep rho near 1, so no clamping is attempted.
inline constexpr double vacuum_threshold = 1e-12;

/// p = rho^gamma. VacuumError for rho < vacuum_threshold.
double pressure(double rho, const GasLaw& gas);

/// c_s = sqrt(gamma rho^(gamma-1)). VacuumError for rho < vacuum_threshold.
double sound_speed(double rho, const GasLaw& gas);

struct ConservedState {
    double rho = 0.0;  ///< density
    double q = 0.0;    ///< momentum
};

struct Flux2 {
    double f_rho = 0.0;  ///< mass flux, q
    double f_q = 0.0;    ///< momentum flux, q^2/rho + p(rho)
};

Flux2 euler_flux(const ConservedState& u, const GasLaw& gas);

enum class SchemeKind { classical, si_ap };

/// Largest eigenvalue magnitude of the flux Jacobian relevant to the scheme:
/// classical |q/rho| + c_s (full acoustic fan), si_ap 2|q/rho| (the
/// convective subsystem left explicit by the semi-implicit splitting).
double max_wavespeed(const ConservedState& u, const GasLaw& gas, SchemeKind kind);

/// Complex amplitudes of one Fourier mode of the linearization about the
/// quasineutral rest state.
struct LinearMode {
    std::complex<double> rho_hat;
    std::complex<double> u_hat;
    std::complex<double> phi_hat;
};

/// Closed-form solution of the linearized mode system at time t: eliminating
/// phi_hat = -rho_hat/(eps^2 xi^2) gives a harmonic oscillator with angular
/// frequency omega = sqrt(c_s^2 xi^2 + 1/eps^2). Used as an analytic oracle
/// for the plasma-oscillation time scale (period 2 pi / omega ~ 2 pi eps).
/// pre: xi != 0 and eps > 0 (ConfigError otherwise).
LinearMode linear_mode_solution(double xi, double eps, double c_s,
                                std::complex<double> rho0_hat,
                                std::complex<double> u0_hat, double t);

struct WellPreparednessDefect {
    double max_rho_defect = 0.0;  ///< max |rho - 1|
    double max_div_q = 0.0;       ///< max |(q_{i+1} - q_{i-1})/(2 dx)|, periodic
};

/// Distance of a state from the quasineutral manifold, using the wide central
/// divergence on cell values. The defects are absolute; eps is accepted for
/// signature compatibility with callers that scale them.
WellPreparednessDefect wellpreparedness_defect(const CellField& rho, const CellField& q,
                                               const Grid1D& g, double eps);

}  // namespace qnep
