#include "qnep/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "qnep/errors.hpp"

namespace qnep {

namespace {

double effective_dt_max(const Grid1D& g, const SchemeConfig& cfg) {
    return cfg.dt_max > 0.0 ? cfg.dt_max : cfg.cfl_nu * g.dx;
}

void guard_field(const CellField& w, const char* what, double threshold) {
    for (int i = 0; i < w.n; ++i)
        if (!(std::abs(w(i)) <= threshold))
            throw BlowUpError(std::string(what) + " exceeded the blow-up threshold " +
                                  std::to_string(threshold),
                              w(i));
}

void check_positive_density(const CellField& rho) {
    for (int i = 0; i < rho.n; ++i)
        if (rho(i) < vacuum_threshold) throw VacuumError(rho(i), i);
}

/// Compact face gradient of phi, single-valued on the circle: both boundary
/// faces carry (phi_0 - phi_{n-1})/dx, so coefficient-weighted face
/// divergences of it telescope exactly and match the assembled stage operator.
std::vector<double> face_gradient_wrap(const CellField& phi, const Grid1D& g) {
    const int n = g.n_cells;
    std::vector<double> grad(static_cast<std::size_t>(n + 1));
    const double idx = 1.0 / g.dx;
    for (int j = 1; j < n; ++j) grad[j] = (phi(j) - phi(j - 1)) * idx;
    const double wrap = (phi(0) - phi(n - 1)) * idx;
    grad[0] = wrap;
    grad[n] = wrap;
    return grad;
}

StageWorkspace make_workspace(int s, const Grid1D& g) {
    StageWorkspace w;
    w.s = s;
    const std::size_t us = static_cast<std::size_t>(s);
    const std::size_t un = static_cast<std::size_t>(g.n_cells);
    w.rho_E.assign(us, CellField(g));
    w.q_E.assign(us, CellField(g));
    w.rho_hat.assign(us, CellField(g));
    w.q_hat.assign(us, CellField(g));
    w.rho_I.assign(us, CellField(g));
    w.q_I.assign(us, CellField(g));
    w.phi.assign(us, CellField(g));
    w.q_face.assign(us, std::vector<double>(un + 1, 0.0));
    w.d_mass.assign(us, std::vector<double>(un, 0.0));
    w.d_mom.assign(us, std::vector<double>(un, 0.0));
    w.d_src.assign(us, std::vector<double>(un, 0.0));
    w.visc.assign(us, std::vector<double>(un, 0.0));
    return w;
}

void si_stage(int k, const State& s0, double dt, const SchemeConfig& cfg, const Tableau& tab,
              const Grid1D& g, StageWorkspace& w) {
    const int n = g.n_cells;
    const double nu = dt / g.dx;
    const double akk = tab.a[k][k];
    const double thr = cfg.blow_up_threshold;

    CellField& rho_E = w.rho_E[k];
    for (int i = 0; i < n; ++i) rho_E(i) = s0.rho(i);
    for (int l = 0; l < k; ++l) {
        const double c = tab.a_tilde[k][l];
        if (c == 0.0) continue;
        for (int i = 0; i < n; ++i) rho_E(i) -= c * w.d_mass[l][i];
    }
    apply_periodic(rho_E);
    guard_field(rho_E, "rho_E", thr);
    check_positive_density(rho_E);

    CellField& q_E = w.q_E[k];
    for (int i = 0; i < n; ++i) q_E(i) = s0.q(i);
    for (int l = 0; l < k; ++l) {
        const double c = tab.a_tilde[k][l];
        if (c == 0.0) continue;
        for (int i = 0; i < n; ++i) q_E(i) += c * (w.d_src[l][i] - w.d_mom[l][i]);
    }
    apply_periodic(q_E);
    guard_field(q_E, "q_E", thr);

    {
        const std::vector<double> div = momentum_flux_divergence(rho_E, q_E, cfg.gas, cfg.limiter, g);
        for (int i = 0; i < n; ++i) w.d_mom[k][i] = nu * div[i];
    }
    {
        const std::vector<double> lap = viscosity_divergence(rho_E, g);
        for (int i = 0; i < n; ++i) w.visc[k][i] = akk * lap[i];
    }

    CellField& rho_hat = w.rho_hat[k];
    for (int i = 0; i < n; ++i) rho_hat(i) = s0.rho(i);
    for (int l = 0; l < k; ++l) {
        const double c = tab.a[k][l];
        if (c == 0.0) continue;
        for (int i = 0; i < n; ++i) rho_hat(i) -= c * w.d_mass[l][i];
    }
    apply_periodic(rho_hat);

    // the momentum predictor sums the explicit flux through stage k itself
    CellField& q_hat = w.q_hat[k];
    for (int i = 0; i < n; ++i) q_hat(i) = s0.q(i);
    for (int l = 0; l <= k; ++l) {
        const double c = tab.a[k][l];
        if (c == 0.0) continue;
        for (int i = 0; i < n; ++i) q_hat(i) -= c * w.d_mom[l][i];
    }
    for (int l = 0; l < k; ++l) {
        const double c = tab.a[k][l];
        if (c == 0.0) continue;
        for (int i = 0; i < n; ++i) q_hat(i) += c * w.d_src[l][i];
    }
    apply_periodic(q_hat);

    const std::vector<double> mu_q_hat = mu_cell(q_hat, g);

    std::vector<double> rhs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        rhs[i] = rho_hat(i) + w.visc[k][i] - akk * (nu * (mu_q_hat[i + 1] - mu_q_hat[i])) - 1.0;

    const StageEllipticSystem sys = assemble_stage_elliptic(rho_E, cfg.eps, dt, akk, rhs, g);
    const std::vector<double> phi_values = solve_stage_elliptic(sys);
    CellField& phi = w.phi[k];
    for (int i = 0; i < n; ++i) phi(i) = phi_values[i];
    apply_dirichlet_zero(phi);
    guard_field(phi, "phi", thr);

    // wide central source, used by the cell momenta and later explicit stages
    {
        const std::vector<double> sdiv = source_divergence(phi, g);
        for (int i = 0; i < n; ++i) w.d_src[k][i] = nu * rho_E(i) * sdiv[i];
    }

    CellField& q_I = w.q_I[k];
    for (int i = 0; i < n; ++i) q_I(i) = q_hat(i) + akk * w.d_src[k][i];
    apply_periodic(q_I);
    guard_field(q_I, "q_I", thr);

    // face momenta with the compact wrap gradient: the mass update below is
    // then the elliptic equation re-read, so the constraint holds to solver
    // precision
    std::vector<double>& qf = w.q_face[k];
    {
        const std::vector<double> mu_rho = mu_cell(rho_E, g);
        const std::vector<double> grad = face_gradient_wrap(phi, g);
        const double f = dt * akk;
        for (int j = 0; j < n; ++j) qf[j] = mu_q_hat[j] + f * mu_rho[j] * grad[j];
        qf[n] = qf[0];
    }
    for (int i = 0; i < n; ++i) w.d_mass[k][i] = nu * (qf[i + 1] - qf[i]);

    CellField& rho_I = w.rho_I[k];
    for (int i = 0; i < n; ++i) rho_I(i) = rho_hat(i) + w.visc[k][i] - akk * w.d_mass[k][i];
    apply_periodic(rho_I);
    guard_field(rho_I, "rho_I", thr);
    check_positive_density(rho_I);
}

struct ClassicalFluxDivergences {
    std::vector<double> d_mass;
    std::vector<double> d_mom;
};

/// Rusanov flux on the full system with the acoustic wave speed; dissipation
/// acts on both components.
ClassicalFluxDivergences classical_flux_divergence(const CellField& rho, const CellField& q,
                                                   const GasLaw& gas, Limiter limiter,
                                                   const Grid1D& g) {
    const int n = g.n_cells;
    const FacePair r = reconstruct(rho, g, limiter);
    const FacePair m = reconstruct(q, g, limiter);
    std::vector<double> f_rho(static_cast<std::size_t>(n + 1));
    std::vector<double> f_q(static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j) {
        const ConservedState uL{r.minus[j], m.minus[j]};
        const ConservedState uR{r.plus[j], m.plus[j]};
        if (uL.rho < vacuum_threshold) throw VacuumError(uL.rho, j - 1);
        if (uR.rho < vacuum_threshold) throw VacuumError(uR.rho, j);
        const double alpha = std::max(max_wavespeed(uL, gas, SchemeKind::classical),
                                      max_wavespeed(uR, gas, SchemeKind::classical));
        const Flux2 fL = euler_flux(uL, gas);
        const Flux2 fR = euler_flux(uR, gas);
        f_rho[j] = 0.5 * (fL.f_rho + fR.f_rho) - 0.5 * alpha * (uR.rho - uL.rho);
        f_q[j] = 0.5 * (fL.f_q + fR.f_q) - 0.5 * alpha * (uR.q - uL.q);
    }
    ClassicalFluxDivergences d;
    d.d_mass = delta_face(f_rho, g);
    d.d_mom = delta_face(f_q, g);
    return d;
}

}  // namespace

State make_state(const Grid1D& g) {
    State s;
    s.rho = CellField(g);
    s.q = CellField(g);
    s.phi = CellField(g);
    s.q_face.assign(static_cast<std::size_t>(g.n_cells + 1), 0.0);
    return s;
}

void refresh_face_momenta(State& s, const Grid1D& g) {
    apply_periodic(s.q);
    s.q_face = mu_cell(s.q, g);
    s.q_face[static_cast<std::size_t>(g.n_cells)] = s.q_face[0];
}

double compute_dt(const State& s, const Grid1D& g, const SchemeConfig& cfg) {
    double wmax = 0.0;
    for (int i = 0; i < g.n_cells; ++i) {
        const ConservedState u{s.rho(i), s.q(i)};
        wmax = std::max(wmax, max_wavespeed(u, cfg.gas, cfg.scheme_kind));
    }
    wmax = std::max(wmax, cfg.wavespeed_floor);
    double dt = cfg.cfl_nu * g.dx / wmax;
    dt = std::min(dt, effective_dt_max(g, cfg));
    if (cfg.scheme_kind == SchemeKind::classical && cfg.enforce_classical_eps_restriction)
        dt = std::min(dt, cfg.eps);
    return dt;
}

State si_imex_step(const State& s, double dt, const SchemeConfig& cfg, const Tableau& tab,
                   const Grid1D& g, StageWorkspace* capture) {
    if (!(dt > 0.0)) throw ConfigError("si_imex_step requires dt > 0");
    if (tab.s < 1) throw ConfigError("tableau '" + tab.id + "' has no stages");
    if (s.rho.n != g.n_cells) throw NumericsError("si_imex_step: state does not match grid");

    StageWorkspace w = make_workspace(tab.s, g);
    for (int k = 0; k < tab.s; ++k) si_stage(k, s, dt, cfg, tab, g, w);

    State out;
    out.t = s.t + dt;
    const int last = tab.s - 1;
    out.rho = w.rho_I[last];
    out.q = w.q_I[last];
    out.phi = w.phi[last];
    out.q_face = w.q_face[last];
    if (capture) *capture = std::move(w);
    return out;
}

State classical_imex_step(const State& s, double dt, const SchemeConfig& cfg,
                          const Tableau& tab, const Grid1D& g) {
    if (!(dt > 0.0)) throw ConfigError("classical_imex_step requires dt > 0");
    if (tab.s < 1) throw ConfigError("tableau '" + tab.id + "' has no stages");
    if (s.rho.n != g.n_cells) throw NumericsError("classical_imex_step: state does not match grid");

    const int n = g.n_cells;
    const int ns = tab.s;
    const double nu = dt / g.dx;
    const double thr = cfg.blow_up_threshold;

    std::vector<CellField> rho_st(ns, CellField(g));
    std::vector<CellField> q_st(ns, CellField(g));
    std::vector<CellField> phi_st(ns, CellField(g));
    std::vector<std::vector<double>> dm(ns), dq(ns), dsrc(ns);

    for (int k = 0; k < ns; ++k) {
        CellField& rho_k = rho_st[k];
        for (int i = 0; i < n; ++i) rho_k(i) = s.rho(i);
        for (int l = 0; l < k; ++l) {
            const double c = tab.a_tilde[k][l];
            if (c == 0.0) continue;
            for (int i = 0; i < n; ++i) rho_k(i) -= c * dm[l][i];
        }
        apply_periodic(rho_k);
        guard_field(rho_k, "rho", thr);

        const std::vector<double> phi_values = solve_standard_poisson(rho_k, cfg.eps, g);
        CellField& phi_k = phi_st[k];
        for (int i = 0; i < n; ++i) phi_k(i) = phi_values[i];
        apply_dirichlet_zero(phi_k);
        guard_field(phi_k, "phi", thr);

        dsrc[k].assign(static_cast<std::size_t>(n), 0.0);
        {
            const std::vector<double> sdiv = source_divergence(phi_k, g);
            for (int i = 0; i < n; ++i) dsrc[k][i] = nu * rho_k(i) * sdiv[i];
        }

        CellField& q_k = q_st[k];
        for (int i = 0; i < n; ++i) q_k(i) = s.q(i);
        for (int l = 0; l < k; ++l) {
            const double c = tab.a_tilde[k][l];
            if (c == 0.0) continue;
            for (int i = 0; i < n; ++i) q_k(i) -= c * dq[l][i];
        }
        for (int l = 0; l <= k; ++l) {
            const double c = tab.a[k][l];
            if (c == 0.0) continue;
            for (int i = 0; i < n; ++i) q_k(i) += c * dsrc[l][i];
        }
        apply_periodic(q_k);
        guard_field(q_k, "q", thr);

        const ClassicalFluxDivergences f =
            classical_flux_divergence(rho_k, q_k, cfg.gas, cfg.limiter, g);
        dm[k].assign(static_cast<std::size_t>(n), 0.0);
        dq[k].assign(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) {
            dm[k][i] = nu * f.d_mass[i];
            dq[k][i] = nu * f.d_mom[i];
        }
    }

    State out = make_state(g);
    out.t = s.t + dt;
    for (int i = 0; i < n; ++i) {
        double r = s.rho(i);
        double m = s.q(i);
        for (int l = 0; l < ns; ++l) {
            r -= tab.w_tilde[l] * dm[l][i];
            m += tab.w[l] * dsrc[l][i] - tab.w_tilde[l] * dq[l][i];
        }
        out.rho(i) = r;
        out.q(i) = m;
    }
    apply_periodic(out.rho);
    apply_periodic(out.q);
    guard_field(out.rho, "rho", thr);
    guard_field(out.q, "q", thr);
    check_positive_density(out.rho);

    const std::vector<double> phi_values = solve_standard_poisson(out.rho, cfg.eps, g);
    for (int i = 0; i < n; ++i) out.phi(i) = phi_values[i];
    apply_dirichlet_zero(out.phi);
    guard_field(out.phi, "phi", thr);

    out.q_face = mu_cell(out.q, g);
    out.q_face[static_cast<std::size_t>(n)] = out.q_face[0];
    return out;
}

StageTriple dense_stage_oracle(const State& s, double dt, const SchemeConfig& cfg,
                               const Tableau& tab, const Grid1D& g, int k) {
    const int n = g.n_cells;
    if (n > 64)
        throw ConfigError("dense_stage_oracle supports n_cells <= 64, got " + std::to_string(n));
    if (k < 1 || k > tab.s) throw ConfigError("stage index must lie in [1, s]");

    StageWorkspace w;
    si_imex_step(s, dt, cfg, tab, g, &w);
    const int kk = k - 1;
    const double akk = tab.a[kk][kk];
    const double nu = dt / g.dx;
    const double idx2 = 1.0 / (g.dx * g.dx);
    const double e2 = cfg.eps * cfg.eps;

    const CellField& rho_E = w.rho_E[kk];
    const CellField& rho_hat = w.rho_hat[kk];
    const CellField& q_hat = w.q_hat[kk];
    const std::vector<double> mu_q_hat = mu_cell(q_hat, g);
    const std::vector<double> mu_rho = mu_cell(rho_E, g);
    std::vector<double> cw(static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j) cw[j] = dt * dt * akk * akk * mu_rho[j];
    cw[n] = cw[0];

    const bool gauged = (cfg.eps == 0.0);
    const int rows = 3 * n + (gauged ? 1 : 0);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, 3 * n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
    const auto P = [n](int i) { return 2 * n + i; };

    for (int i = 0; i < n; ++i) {
        // mass row: rho_I plus the face divergence of the implicit momentum
        // correction equals the predictor data
        const int left = (i == 0) ? n - 1 : i - 1;
        const int right = (i == n - 1) ? 0 : i + 1;
        A(i, i) = 1.0;
        A(i, P(i)) += -(cw[i] + cw[i + 1]) * idx2;
        A(i, P(right)) += cw[i + 1] * idx2;
        A(i, P(left)) += cw[i] * idx2;
        b(i) = rho_hat(i) + w.visc[kk][i] - akk * nu * (mu_q_hat[i + 1] - mu_q_hat[i]);

        // momentum row: q_I - dt a_kk rho_E (wide gradient of phi) = q_hat,
        // with Dirichlet ghosts phi_{-1} = -phi_0, phi_n = -phi_{n-1}
        A(n + i, n + i) = 1.0;
        const double kcoef = dt * akk * rho_E(i) / (2.0 * g.dx);
        if (i + 1 <= n - 1)
            A(n + i, P(i + 1)) += -kcoef;
        else
            A(n + i, P(n - 1)) += kcoef;
        if (i - 1 >= 0)
            A(n + i, P(i - 1)) += kcoef;
        else
            A(n + i, P(0)) += -kcoef;
        b(n + i) = q_hat(i);

        // constraint row: eps^2 (Dirichlet Laplacian phi)_i - rho_I_i = -1
        A(2 * n + i, i) = -1.0;
        const double diag = (i == 0 || i == n - 1) ? -3.0 : -2.0;
        A(2 * n + i, P(i)) += e2 * diag * idx2;
        if (i > 0) A(2 * n + i, P(i - 1)) += e2 * idx2;
        if (i < n - 1) A(2 * n + i, P(i + 1)) += e2 * idx2;
        b(2 * n + i) = -1.0;
    }
    if (gauged) {
        A(3 * n, P(0)) = 1.0;
        A(3 * n, P(n - 1)) = 1.0;
        b(3 * n) = 0.0;
    }

    const auto qr = A.colPivHouseholderQr();
    if (qr.rank() < 3 * n) throw NumericsError("dense_stage_oracle: singular dense system");
    const Eigen::VectorXd x = qr.solve(b);

    StageTriple out;
    out.rho_I.resize(static_cast<std::size_t>(n));
    out.q_I.resize(static_cast<std::size_t>(n));
    out.phi_I.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out.rho_I[i] = x(i);
        out.q_I[i] = x(n + i);
        out.phi_I[i] = x(2 * n + i);
    }
    return out;
}

StepDiagnostics measure(const State& s, const Grid1D& g) {
    const int n = g.n_cells;
    if (s.rho.n != n || s.q_face.size() != static_cast<std::size_t>(n + 1))
        throw NumericsError("measure: state does not match grid");
    StepDiagnostics d;
    d.t = s.t;
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
        d.max_rho_defect = std::max(d.max_rho_defect, std::abs(s.rho(i) - 1.0));
        d.phi_inf = std::max(d.phi_inf, std::abs(s.phi(i)));
        d.max_div_q = std::max(d.max_div_q, std::abs(s.q_face[i + 1] - s.q_face[i]) / g.dx);
        mass += s.rho(i);
    }
    d.total_mass = mass * g.dx;
    return d;
}

RunReport run(State initial, const SchemeConfig& cfg, const Tableau& tab, const Grid1D& g,
              double t_end, const StepCallback& on_step) {
    const double tiny = 1e-12 * std::max(1.0, std::abs(t_end));
    if (t_end < initial.t - tiny)
        throw ConfigError("t_end must not precede the initial time");

    RunReport rep;
    State s = std::move(initial);
    rep.diagnostics.push_back(measure(s, g));

    int step = 0;
    while (s.t < t_end - tiny) {
        ++step;
        double dt = 0.0;
        try {
            dt = compute_dt(s, g, cfg);
            const bool final_step = (s.t + dt >= t_end);
            if (final_step) dt = t_end - s.t;
            State next = (cfg.scheme_kind == SchemeKind::classical)
                             ? classical_imex_step(s, dt, cfg, tab, g)
                             : si_imex_step(s, dt, cfg, tab, g);
            if (final_step) next.t = t_end;
            s = std::move(next);
        } catch (const BlowUpError& e) {
            rep.status = RunStatus::blow_up;
            rep.blow_up_time = s.t + dt;
            rep.message = e.what();
            break;
        } catch (const std::exception& e) {
            rep.status = RunStatus::error;
            rep.message = "step " + std::to_string(step) + " at t = " + std::to_string(s.t) +
                          ": " + e.what();
            break;
        }
        StepDiagnostics d = measure(s, g);
        d.dt = dt;
        rep.diagnostics.push_back(d);
        if (on_step) on_step(s, d);
    }

    const int n = g.n_cells;
    rep.x = g.centers;
    rep.rho.resize(static_cast<std::size_t>(n));
    rep.u.resize(static_cast<std::size_t>(n));
    rep.phi.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        rep.rho[i] = s.rho(i);
        rep.u[i] = s.q(i) / s.rho(i);
        rep.phi[i] = s.phi(i);
    }
    return rep;
}

}  // namespace qnep
