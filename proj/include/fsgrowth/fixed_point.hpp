#pragma once

#include "fsgrowth/compatibility.hpp"
#include "fsgrowth/domain.hpp"
#include "fsgrowth/errors.hpp"
#include "fsgrowth/function_spaces.hpp"
#include "fsgrowth/heat.hpp"
#include "fsgrowth/interface.hpp"
#include "fsgrowth/kinematics.hpp"
#include "fsgrowth/nonlinear_terms.hpp"
#include "fsgrowth/params.hpp"
#include "fsgrowth/state.hpp"
#include "fsgrowth/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace fsgrowth {

struct DriverConfig {
  double dt = 0.01;
  double window = 0.1;  // initial window length
  double tol = 1e-8;    // Picard tolerance in the discrete Y_T norm
  int max_iter = 30;
  int max_halvings = 8;
  double divergence_factor = 1e3;  // residual growth that counts as divergence
  GForm g_form = GForm::Pointwise;
  TimeQuadrature quadrature = TimeQuadrature::Trapezoid;
  NormSpec norms;
  double M_q = 0.0;  // multiplication constant; estimated when <= 0
  double compat_tol = 1e-8;
  bool require_compatibility = true;

  void validate() const {
    if (!(dt > 0.0)) throw ConfigError("numerics: dt must be positive");
    if (!(window >= dt)) throw ConfigError("numerics: window0 must be at least dt");
    if (!(tol > 0.0)) throw ConfigError("numerics: tol must be positive");
    if (max_iter < 1) throw ConfigError("numerics: max_iter must be at least 1");
    if (max_halvings < 0) throw ConfigError("numerics: max_halvings must be nonnegative");
    norms.validate_driver();
  }
};

struct IterationReport {
  double t_a = 0.0;
  double t_b = 0.0;
  int iterates = 0;
  int halvings = 0;
  std::vector<double> residual_history;
  double contraction_estimate = 0.0;  // sup of successive residual ratios
  bool accepted = false;
  bool monotone = true;  // nonincreasing after the second iterate, three strikes allowed
  std::string message;
};

/// Linear solvers for a fixed (domain, params, dt), factorized once.
class LinearBlock {
 public:
  LinearBlock(const TwoPhaseDomain& d, const PhysParams& p, double dt)
      : d_(d), p_(p), dt_(dt),
        heat_f_(d, Phase::Fluid, p.D_f, dt),
        heat_s_(d, Phase::Solid, p.D_s, dt),
        stokes_(d, p, dt, OuterBoundary::Neumann) {}

  const TwoPhaseDomain& domain() const { return d_; }
  const PhysParams& params() const { return p_; }
  double dt() const { return dt_; }
  const HeatSolver& heat(Phase ph) const { return ph == Phase::Fluid ? heat_f_ : heat_s_; }
  const StokesSolver& stokes() const { return stokes_; }

 private:
  TwoPhaseDomain d_;
  PhysParams p_;
  double dt_;
  HeatSolver heat_f_;
  HeatSolver heat_s_;
  StokesSolver stokes_;
};

/// Initial data of one window: the level at t_a and the deformation there.
struct WindowStart {
  double t = 0.0;
  LevelState level;
  TensorField F;
};

inline WindowStart initial_window_start(const TwoPhaseDomain& d, const InitialData& w0) {
  w0.validate();
  return {0.0, level_from_initial(d, w0), identity_tensor_field(d)};
}

/// Constant-in-time extension of the window's initial data over `steps` steps.
inline StateW constant_extension(const WindowStart& s, int steps, double dt) {
  StateW w;
  for (int m = 0; m <= steps; ++m) {
    w.t.push_back(s.t + dt * m);
    w.levels.push_back(s.level);
  }
  return w;
}

inline KinematicsState kinematics_of(const TwoPhaseDomain& d, const StateW& w, const TensorField& F0, double M_q,
                                     TimeQuadrature rule) {
  std::vector<MacVelocity> v;
  std::vector<ScalarField> g;
  v.reserve(w.size());
  g.reserve(w.size());
  for (const auto& l : w.levels) {
    v.push_back(l.v);
    g.push_back(l.g);
  }
  return build_kinematics(d, v, g, w.t.front(), w.dt(), F0, M_q, rule);
}

/// One application of L^{-1} N(w, w0): assemble the nonlinear data from the
/// iterate at every level, then march heat -> Stokes -> ODEs in time.
inline StateW picard_step(const StateW& w, const WindowStart& start, const LinearBlock& lin, double M_q,
                          GForm g_form = GForm::Pointwise, TimeQuadrature rule = TimeQuadrature::Trapezoid) {
  const TwoPhaseDomain& d = lin.domain();
  const PhysParams& p = lin.params();
  const double dt = lin.dt();
  if (w.size() < 2) throw ConfigError("picard_step: window needs at least one step");
  if (std::abs(w.dt() - dt) > 1e-12 * dt) throw ConfigError("picard_step: iterate time step differs from solver dt");
  const KinematicsState kin = kinematics_of(d, w, start.F, M_q, rule);

  StateW out;
  out.t = w.t;
  out.levels.reserve(w.size());
  out.levels.push_back(start.level);
  for (std::size_t m = 0; m + 1 < w.size(); ++m) {
    const NonlinearData N = assemble_nonlinear(d, w.levels[m + 1], level_kinematics(kin, m + 1), p, g_form);
    const LevelState& prev = out.levels[m];
    LevelState next(d);

    HeatRHS hf = HeatRHS::zeros(d, Phase::Fluid);
    hf.c_init = restrict_to(d, prev.c, Phase::Fluid);
    hf.f_bulk = restrict_to(d, N.F1, Phase::Fluid);
    hf.f_gamma = N.F2_f;
    HeatRHS hs = HeatRHS::zeros(d, Phase::Solid);
    hs.c_init = restrict_to(d, prev.c, Phase::Solid);
    hs.f_bulk = restrict_to(d, N.F1, Phase::Solid);
    hs.f_gamma = N.F2_s;
    hs.f_gammas = N.F3;
    const ScalarField cf = lin.heat(Phase::Fluid).solve(hf);
    const ScalarField cs = lin.heat(Phase::Solid).solve(hs);
    next.c = merge_phases(d, cf, cs);

    StokesRHS sr = StokesRHS::zeros(d);
    sr.k = N.K;
    sr.g_div = N.G;
    cs.for_each([&](int i, int j, const double& c) { sr.g_div(i, j) += p.growth_rate() * c; });
    sr.h1 = N.H1;
    sr.h2 = N.H2;
    sr.v_init = prev.v;
    const StokesSolution st = lin.stokes().solve(sr);
    next.v = st.v;
    next.pi = st.pi;

    next.cstar.for_each([&](int i, int j, double& v) { v = prev.cstar(i, j) + dt * (p.beta * cs(i, j) + N.F4(i, j)); });
    next.g.for_each([&](int i, int j, double& v) { v = prev.g(i, j) + dt * (p.metric_rate() * cs(i, j) + N.F5(i, j)); });
    out.levels.push_back(std::move(next));
  }
  // the pressure at the window start is not an unknown of the step equations
  out.levels[0].pi = out.levels[1].pi;
  return out;
}

inline double picard_residual(const StateW& a, const StateW& b, const NormSpec& spec, const TwoPhaseDomain& d) {
  return discrete_YT_norm(a - b, spec, d).max();
}

struct WindowResult {
  StateW w;
  TensorField F_end;  // deformation at the window end
  IterationReport report;
};

namespace detail {

inline void update_monotone(IterationReport& r) {
  int strikes = 0;
  for (std::size_t k = 2; k < r.residual_history.size(); ++k)
    if (r.residual_history[k] > r.residual_history[k - 1]) ++strikes;
  r.monotone = strikes <= 3;
}

// Iterate on a fixed window length; returns false when the attempt fails.
inline bool attempt_window(const WindowStart& start, int steps, const LinearBlock& lin, const DriverConfig& cfg,
                           double M_q, const StateW* initial_iterate, WindowResult& res) {
  const TwoPhaseDomain& d = lin.domain();
  StateW w = initial_iterate ? *initial_iterate : constant_extension(start, steps, lin.dt());
  IterationReport& rep = res.report;
  rep.residual_history.clear();
  rep.contraction_estimate = 0.0;
  rep.iterates = 0;
  try {
    for (int k = 0; k < cfg.max_iter; ++k) {
      StateW next = picard_step(w, start, lin, M_q, cfg.g_form, cfg.quadrature);
      const double r = picard_residual(next, w, cfg.norms, d);
      ++rep.iterates;
      if (!std::isfinite(r)) {
        rep.message = "non-finite Picard residual";
        return false;
      }
      if (!rep.residual_history.empty() && rep.residual_history.back() > 0.0)
        rep.contraction_estimate = std::max(rep.contraction_estimate, r / rep.residual_history.back());
      rep.residual_history.push_back(r);
      w = std::move(next);
      if (r <= cfg.tol) {
        const KinematicsState kin = kinematics_of(d, w, start.F, M_q, cfg.quadrature);
        for (const auto& l : w.levels) check_growth_floor(l.g);
        res.F_end = kin.F.back();
        res.w = std::move(w);
        update_monotone(rep);
        rep.accepted = true;
        rep.message = "converged";
        return true;
      }
      if (rep.residual_history.size() > 1 && r > cfg.divergence_factor * rep.residual_history.front()) {
        rep.message = "Picard iteration diverged";
        return false;
      }
    }
    rep.message = "max_iter reached without convergence";
    return false;
  } catch (const GrowthBoundViolation& e) {
    rep.message = e.what();
  } catch (const SingularDeformation& e) {
    rep.message = e.what();
  }
  return false;
}

}  // namespace detail

/// Picard iteration on [start.t, start.t + window]; on failure the window is
/// halved and retried up to cfg.max_halvings times.
inline WindowResult run_window(const WindowStart& start, double window, const LinearBlock& lin, const DriverConfig& cfg,
                               double M_q, const StateW* initial_iterate = nullptr) {
  const double dt = lin.dt();
  int steps = static_cast<int>(std::llround(window / dt));
  if (steps < 1) throw SolverError("run_window: window shorter than dt");
  WindowResult res;
  for (int h = 0; h <= cfg.max_halvings; ++h) {
    res.report = IterationReport{};
    res.report.t_a = start.t;
    res.report.t_b = start.t + steps * dt;
    res.report.halvings = h;
    const StateW* init = (h == 0 && initial_iterate && static_cast<int>(initial_iterate->size()) == steps + 1)
                             ? initial_iterate
                             : nullptr;
    if (detail::attempt_window(start, steps, lin, cfg, M_q, init, res)) return res;
    if (steps == 1) break;
    steps = std::max(1, steps / 2);
  }
  std::ostringstream os;
  os << "window at t = " << start.t << " failed after " << res.report.halvings
     << " halvings: " << res.report.message;
  throw SolverError(os.str());
}

inline double resolve_M_q(const TwoPhaseDomain& d, const DriverConfig& cfg) {
  return cfg.M_q > 0.0 ? cfg.M_q : estimate_multiplication_constant(d, cfg.norms.q);
}

/// Convenience overload building the solvers and the window start from w0.
inline WindowResult run_window(const InitialData& w0, double window, const DriverConfig& cfg, const PhysParams& p,
                               const TwoPhaseDomain& d) {
  cfg.validate();
  p.validate();
  const LinearBlock lin(d, p, cfg.dt);
  return run_window(initial_window_start(d, w0), window, lin, cfg, resolve_M_q(d, cfg));
}

struct Trajectory {
  std::vector<double> t;
  std::vector<LevelState> levels;
  std::vector<TensorField> F;  // deformation per stored level
  std::vector<IterationReport> reports;
  CompatibilityReport compatibility;
};

/// Chains windows over [0, T_total]; each window starts from the previous
/// terminal state, and the deformation is carried across windows.
inline Trajectory run_continuation(const InitialData& w0, double T_total, const DriverConfig& cfg, const PhysParams& p,
                                   const TwoPhaseDomain& d) {
  cfg.validate();
  p.validate();
  if (!(T_total >= cfg.window - 1e-12)) throw ConfigError("run_continuation: T_total must be at least window0");
  Trajectory tr;
  tr.compatibility = check_compatibility(w0, p, d, cfg.compat_tol);
  if (cfg.require_compatibility && !tr.compatibility.pass()) {
    std::ostringstream os;
    os << "initial data violate the compatibility conditions:";
    for (const auto& it : tr.compatibility.items)
      if (!it.pass) os << ' ' << it.name << '=' << it.residual;
    throw ConfigError(os.str());
  }
  const LinearBlock lin(d, p, cfg.dt);
  const double M_q = resolve_M_q(d, cfg);
  WindowStart start = initial_window_start(d, w0);
  tr.t.push_back(0.0);
  tr.levels.push_back(start.level);
  tr.F.push_back(start.F);
  const long total_steps = std::llround(T_total / cfg.dt);
  long done = 0;
  const int window_steps = static_cast<int>(std::llround(cfg.window / cfg.dt));
  while (done < total_steps) {
    const int steps = static_cast<int>(std::min<long>(window_steps, total_steps - done));
    WindowResult res = run_window(start, steps * cfg.dt, lin, cfg, M_q);
    const KinematicsState kin = kinematics_of(d, res.w, start.F, M_q, cfg.quadrature);
    for (std::size_t m = 1; m < res.w.size(); ++m) {
      tr.t.push_back(res.w.t[m]);
      tr.levels.push_back(res.w.levels[m]);
      tr.F.push_back(kin.F[m]);
    }
    // the first window level carries the converged pressure
    tr.levels[tr.levels.size() - res.w.size()].pi = res.w.levels[0].pi;
    done += static_cast<long>(res.w.size()) - 1;
    start.t = res.w.t.back();
    start.level = res.w.levels.back();
    start.F = res.F_end;
    tr.reports.push_back(std::move(res.report));
  }
  return tr;
}

// ---------------------------------------------------------------------------
// Audits

struct NonnegativityReport {
  double tolerance = 0.0;
  std::vector<double> min_per_level;
  std::vector<int> flagged;  // level indices with min < -tolerance

  bool pass() const { return flagged.empty(); }
};

/// Minimum of c per level; flags levels below -tolerance (default
/// 1e-10 * ||c(first level)||_inf).
inline NonnegativityReport nonnegativity_audit(const std::vector<ScalarField>& c, double tolerance = -1.0) {
  NonnegativityReport r;
  if (c.empty()) return r;
  if (tolerance < 0.0) tolerance = 1e-10 * max_abs(c.front());
  r.tolerance = tolerance;
  for (std::size_t m = 0; m < c.size(); ++m) {
    double lo = std::numeric_limits<double>::infinity();
    for (double v : c[m].values()) lo = std::min(lo, v);
    r.min_per_level.push_back(lo);
    if (lo < -tolerance) r.flagged.push_back(static_cast<int>(m));
  }
  return r;
}

inline NonnegativityReport nonnegativity_audit(const Trajectory& tr, double tolerance = -1.0) {
  std::vector<ScalarField> c;
  for (const auto& l : tr.levels) c.push_back(l.c);
  return nonnegativity_audit(c, tolerance);
}

/// Divergence constraints of an accepted state:
///   fluid: Div v - G_f,  solid: Div v - (gamma beta / rho_s) c_s - G_s.
struct ConstraintAudit {
  double fluid = 0.0;
  double solid = 0.0;
};

inline ConstraintAudit divergence_constraint_audit(const StateW& w, const TensorField& F0, double M_q,
                                                   const DriverConfig& cfg, const PhysParams& p,
                                                   const TwoPhaseDomain& d) {
  const KinematicsState kin = kinematics_of(d, w, F0, M_q, cfg.quadrature);
  ConstraintAudit a;
  for (std::size_t m = 1; m < w.size(); ++m) {
    const ScalarField G = assemble_G(d, w.levels[m].v, kin.Finv[m], cfg.g_form);
    const ScalarField div = divergence(d, w.levels[m].v);
    div.for_each([&](int i, int j, const double& v) {
      if (d.is_fluid_row(j))
        a.fluid = std::max(a.fluid, std::abs(v - G(i, j)));
      else
        a.solid = std::max(a.solid, std::abs(v - p.growth_rate() * w.levels[m].c(i, j) - G(i, j)));
    });
  }
  return a;
}

/// max |J_f - 1| and max |J_s - g^n| over a trajectory.
struct DeterminantAudit {
  double fluid = 0.0;
  double solid = 0.0;
};

inline DeterminantAudit determinant_audit(const Trajectory& tr, const PhysParams& p, const TwoPhaseDomain& d) {
  DeterminantAudit a;
  for (std::size_t m = 0; m < tr.levels.size(); ++m) {
    tr.F[m].for_each([&](int i, int j, const Mat2& F) {
      const double J = F.determinant();
      if (d.is_fluid_row(j))
        a.fluid = std::max(a.fluid, std::abs(J - 1.0));
      else
        a.solid = std::max(a.solid, std::abs(J - std::pow(tr.levels[m].g(i, j), p.n_dim)));
    });
  }
  return a;
}

}  // namespace fsgrowth
