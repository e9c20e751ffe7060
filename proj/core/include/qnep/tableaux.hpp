#pragma once

#include <string>
#include <vector>

namespace qnep {

/// Double Butcher tableau of an IMEX Runge-Kutta pair: a strictly lower
/// triangular explicit part (a_tilde, c_tilde, w_tilde) and a diagonally
/// implicit part (a, c, w). Immutable after construction.
struct Tableau {
    std::string id;
    int s = 0;  ///< stage count

    std::vector<std::vector<double>> a_tilde;  ///< explicit coefficients, s x s
    std::vector<std::vector<double>> a;        ///< implicit coefficients, s x s
    std::vector<double> c_tilde;               ///< explicit nodes (row sums of a_tilde)
    std::vector<double> c;                     ///< implicit nodes (row sums of a)
    std::vector<double> w_tilde;               ///< explicit weights
    std::vector<double> w;                     ///< implicit weights

    int order = 1;  ///< formal order of the pair (1 or 2)

    /// True when the last explicit row equals w_tilde as well. The implicit
    /// part is stiffly accurate for every registered tableau; the explicit
    /// part only for some of them.
    bool stiffly_accurate_explicit = false;
};

/// Returns the registered tableau with exact coefficient values. The two
/// second-order pairs use the closed-form constants gamma = 1 - sqrt(2)/2,
/// sigma = 1/(2 gamma) and delta = 1 - sigma.
///
/// Registered ids: imex_euler_111, dirk_111_classical, ars222, lsdirk222.
/// Unknown ids raise a ConfigError naming the id. Pure: repeated calls return
/// bit-identical coefficients.
Tableau load_tableau(const std::string& id);

/// One named structural or order-condition check.
struct TableauCheck {
    std::string name;
    bool pass = false;
    double residual = 0.0;
};

/// Structural checks (triangularity, stiff accuracy, row sums, weight
/// consistency) plus the standard order-2 conditions when order == 2.
/// Failures are reported in the list, never thrown. The explicit-side stiff
/// accuracy check is emitted only for tableaux that declare it.
std::vector<TableauCheck> validate_tableau(const Tableau& t);

}  // namespace qnep
