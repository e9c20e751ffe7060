#pragma once

#include <stdexcept>
#include <string>

namespace qnep {

/// Density fell below the vacuum threshold where a pressure, sound speed or
/// velocity had to be evaluated. `cell` is -1 when no grid location applies.
struct VacuumError : std::runtime_error {
    VacuumError(double rho_value, long cell_index)
        : std::runtime_error("vacuum state: rho = " + std::to_string(rho_value) +
                             (cell_index >= 0 ? " at cell " + std::to_string(cell_index) : "")),
          rho(rho_value),
          cell(cell_index) {}
    double rho;
    long cell;
};

/// Invalid user-facing configuration: grid sizes, parameter ranges, unknown
/// config keys, scheme/tableau combinations that are undefined.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Internal numerical failure: size mismatches, singular or inconsistent
/// linear systems. Indicates a bug or unusable input, not a physics event.
struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A field exceeded the blow-up threshold or became non-finite during a step.
/// Converted by the run loop into a blow_up termination status.
struct BlowUpError : std::runtime_error {
    BlowUpError(const std::string& what, double magnitude_value)
        : std::runtime_error(what), magnitude(magnitude_value) {}
    double magnitude;
};

}  // namespace qnep
