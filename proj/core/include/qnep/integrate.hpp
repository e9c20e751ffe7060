#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qnep/elliptic.hpp"
#include "qnep/mesh.hpp"
#include "qnep/model.hpp"
#include "qnep/spatial.hpp"
#include "qnep/tableaux.hpp"

namespace qnep {

struct SchemeConfig {
    SchemeKind scheme_kind = SchemeKind::si_ap;
    std::string tableau_id = "lsdirk222";
    double cfl_nu = 0.45;  ///< in (0, 1)
    double eps = 1e-4;     ///< >= 0; the classical stepper needs eps > 0
    GasLaw gas;
    Limiter limiter = Limiter::minmod;
    double dt_max = 0.0;             ///< absolute cap; <= 0 means cfl_nu * dx
    double wavespeed_floor = 1e-12;  ///< keeps the CFL ratio finite at rest
    bool enforce_classical_eps_restriction = true;  ///< clip classical dt to eps
    double blow_up_threshold = 1e6;  ///< per-stage magnitude guard
};

/// Full solver state: cell fields plus the face momenta of the most recent
/// mass-flux chain (the semi-implicit scheme conserves mass and satisfies the
/// discrete quasineutrality constraint through these face values, so they are
/// part of the state, not a derived quantity).
struct State {
    double t = 0.0;
    CellField rho;
    CellField q;
    CellField phi;
    std::vector<double> q_face;
};

/// Zero-initialized state sized for the grid.
State make_state(const Grid1D& g);

/// Sets q_face to the central face average of q (periodic). Call after
/// filling initial data.
void refresh_face_momenta(State& s, const Grid1D& g);

/// CFL time step: cfl_nu * dx / max(wavespeed, floor), clipped to the
/// effective dt_max, and for the classical scheme (when enforced) to eps.
double compute_dt(const State& s, const Grid1D& g, const SchemeConfig& cfg);

/// Per-stage arrays of one semi-implicit step, exposed for the equivalence
/// oracle and for diagnostics. Index k holds stage k quantities; the cached
/// flux residual arrays already carry the mesh ratio nu = dt/dx.
struct StageWorkspace {
    int s = 0;
    std::vector<CellField> rho_E, q_E, rho_hat, q_hat, rho_I, q_I, phi;
    std::vector<std::vector<double>> q_face;  ///< stage face momenta, n+1 each
    std::vector<std::vector<double>> d_mass;  ///< nu delta_x(q_face)
    std::vector<std::vector<double>> d_mom;   ///< nu delta_x(Rusanov flux on U_E)
    std::vector<std::vector<double>> d_src;   ///< nu rho_E,i delta_x(central phi flux)
    std::vector<std::vector<double>> visc;    ///< a_kk (rho_E,i+1 - 2 rho_E,i + rho_E,i-1)
};

/// One step of the reformulated semi-implicit scheme. Per stage k:
/// explicit (rho_E, q_E), then (rho_hat_I, q_hat_I), then the stage elliptic
/// solve for phi, then the momentum and mass corrections. The update is the
/// last implicit stage triple (stiffly accurate implicit part). Works for
/// eps = 0 when every implicit diagonal is positive.
/// `capture`, when non-null, receives all stage arrays.
State si_imex_step(const State& s, double dt, const SchemeConfig& cfg, const Tableau& tab,
                   const Grid1D& g, StageWorkspace* capture = nullptr);

/// One step of the additively partitioned scheme: per stage the density is
/// updated explicitly (Rusanov flux on the full system), the Poisson
/// constraint eps^2 Lap phi = rho - 1 is solved, and the momentum update
/// takes the source semi-implicitly through the tableau diagonal. The final
/// update applies the weight vectors and re-solves the constraint.
/// pre: eps > 0.
State classical_imex_step(const State& s, double dt, const SchemeConfig& cfg,
                          const Tableau& tab, const Grid1D& g);

struct StageTriple {
    std::vector<double> rho_I;
    std::vector<double> q_I;
    std::vector<double> phi_I;
};

/// Equivalence oracle: assembles stage k (1-based) of the semi-implicit step
/// as one dense coupled linear system in (rho_I, q_I, phi) and solves it by
/// QR, independently of the tridiagonal elimination path. At eps = 0 the
/// gauge row phi_0 + phi_{n-1} = 0 closes the system.
/// pre: g.n_cells <= 64.
StageTriple dense_stage_oracle(const State& s, double dt, const SchemeConfig& cfg,
                               const Tableau& tab, const Grid1D& g, int k);

enum class RunStatus { completed, blow_up, error };

struct StepDiagnostics {
    double t = 0.0;
    double dt = 0.0;
    double max_rho_defect = 0.0;  ///< max |rho - 1|
    double max_div_q = 0.0;       ///< max |delta_x(q_face)| / dx
    double total_mass = 0.0;      ///< sum rho_i dx
    double phi_inf = 0.0;         ///< max |phi|
};

/// Diagnostics of a state (uses the stored face momenta for max_div_q).
StepDiagnostics measure(const State& s, const Grid1D& g);

struct RunReport {
    RunStatus status = RunStatus::completed;
    double blow_up_time = 0.0;  ///< meaningful when status == blow_up
    std::string message;        ///< meaningful when status == error
    std::vector<StepDiagnostics> diagnostics;  ///< initial state + one row per step
    std::vector<double> x, rho, u, phi;        ///< final interior fields
};

using StepCallback = std::function<void(const State&, const StepDiagnostics&)>;

/// Advances to t_end with compute_dt steps, the last one clipped to land on
/// t_end exactly. Any field exceeding the blow-up threshold (or non-finite)
/// ends the run with status blow_up; other step errors are reported with the
/// step index and time in the message.
RunReport run(State initial, const SchemeConfig& cfg, const Tableau& tab, const Grid1D& g,
              double t_end, const StepCallback& on_step = {});

}  // namespace qnep
