#include "lisim/engine.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <sstream>

#include "lisim/error.hpp"
#include "lisim/solid.hpp"

namespace lisim {

namespace {

constexpr double kCeFloor = 1.0;  // mol/m^3

double mean4(const double* v) { return 0.25 * (v[0] + v[1] + v[2] + v[3]); }

// Relative error of a numerical quadrature of the returned jn(x) against the exact total.
double jn_integral_error(const CellParameters& p, const ReactionSolution& r) {
  if (r.mode == JnMode::uniform) return 0.0;
  const double target = mean_flux(p, r.side, r.current) * r.length;
  auto f = [&](double x) { return r.flux(x); };
  const double q = boost::math::quadrature::gauss<double, 30>::integrate(f, 0.0, r.length);
  double scale = std::abs(target);
  if (scale == 0.0) {
    for (double j : r.jn) scale = std::max(scale, std::abs(j) * r.length);
    if (scale == 0.0) return std::abs(q);
  }
  return std::abs(q - target) / scale;
}

[[noreturn]] void strict_fail(const std::string& what) { throw Error(ErrorKind::domain, what); }

}  // namespace

void StepInput::validate() const {
  if (!(dt > 0.0 && dt <= kMaxStep)) {
    throw Error(ErrorKind::invalid_input, "step dt must lie in (0, 10] s");
  }
  if (!(T_amb > 0)) throw Error(ErrorKind::invalid_input, "ambient temperature must be positive");
  if (!std::isfinite(value)) throw Error(ErrorKind::invalid_input, "step input is not finite");
}

std::array<double, 8> Snapshot::jn() const noexcept {
  std::array<double, 8> out{};
  for (int i = 0; i < 4; ++i) {
    out[i] = neg.jn[i];
    out[4 + i] = pos.jn[i];
  }
  return out;
}

Engine::Engine(CellParameters params, OcpPair ocp, StoichiometryWindow window, EngineConfig cfg)
    : p_(std::move(params)), ocp_(std::move(ocp)), window_(window), cfg_(cfg) {
  p_.validate();
  cfg_.corrector.validate();
  for (Electrode e : {Electrode::negative, Electrode::positive}) {
    const auto& m = cfg_.jn_mode[index_of(e)];
    if (m) {
      mode_[index_of(e)] = *m;
    } else {
      const bool lfp = ocp_[e].material() == "lfpo" || ocp_[e].material() == "lfp";
      mode_[index_of(e)] = lfp ? JnMode::uniform : JnMode::analytic;
    }
  }
}

CellState Engine::initial_state(double soc0, double T_amb) const {
  return initialize_state(p_, window_, soc0, T_amb);
}

double Engine::soc(const CellState& s) const noexcept {
  const double y = electrode_average(s.solid.neg.bulk) / p_.neg.cs_max;
  return (y - window_.y0_neg) / window_.span_neg();
}

Snapshot Engine::evaluate(const CellState& s, double current) const {
  Snapshot snap;
  const double T = s.T;
  snap.T = T;
  snap.current = current;
  snap.de = interface_diffusivity(p_, s.lag_ce, T);
  snap.matrix = assemble_interface_matrix(p_, snap.de, cfg_.interface_form);
  snap.profile = solve_profile(p_, snap.matrix, s.qe);
  if (cfg_.strict) validate_profile(snap.profile);

  const CollocationGrid gn = collocation_grid(p_.neg.thickness);
  const CollocationGrid gp = collocation_grid(p_.pos.thickness);
  for (int i = 0; i < 4; ++i) {
    snap.ce[i] = snap.profile.neg(gn.x[i]);
    snap.ce[4 + i] = snap.profile.pos(gp.x[i]);
  }
  std::array<double, 3> ce_sep{snap.profile.sep(0.0), snap.profile.sep(0.5 * p_.sep.thickness),
                               snap.profile.sep(p_.sep.thickness)};
  auto floor_ce = [&](double& c) {
    if (c < kCeFloor) {
      c = kCeFloor;
      snap.flags |= flag::ce_clamped;
    }
  };
  for (double& c : snap.ce) floor_ce(c);
  for (double& c : ce_sep) floor_ce(c);

  for (Electrode e : {Electrode::negative, Electrode::positive}) {
    const int off = 4 * index_of(e);
    const ElectrodeParams& el = p_.electrode(e);
    const ElectrodeSolid& es = s.electrode(e);
    snap.kr[index_of(e)] = reaction_rate_coeff(p_, e, T);
    for (int i = 0; i < 4; ++i) {
      const SurfaceConc sc = surface_conc(es.bulk[i], es.offset[i], el.cs_max);
      if (sc.clamped) {
        if (cfg_.strict) strict_fail("surface concentration left (0, cs_max)");
        snap.flags |= flag::css_clamped;
      }
      snap.css[off + i] = sc.value;
      bool extrap = false;
      snap.ocp[off + i] = ocp_[e].potential(sc.value / el.cs_max, &extrap);
      if (extrap) snap.flags |= flag::ocp_extrapolated;
      const DiffusivityEval d = solid_diffusivity(p_, e, es.bulk[i], T);
      if (d.clamped) snap.flags |= flag::ds_clamped;
      snap.ds[off + i] = d.value;
      snap.i0[off + i] = exchange_current(snap.kr[index_of(e)], snap.ce[off + i], sc.value, el.cs_max);
    }
  }

  // Transport means per domain.
  std::array<double, 8> kap{}, fac{};
  for (int k = 0; k < 8; ++k) {
    const double eps = k < 4 ? p_.neg.eps_e : p_.pos.eps_e;
    kap[k] = bruggeman(p_, electrolyte_conductivity(p_, snap.ce[k], T), eps);
    fac[k] = diffusion_potential_factor(p_, snap.ce[k], T);
  }
  double ks = 0.0, fs = 0.0;
  for (double c : ce_sep) {
    ks += bruggeman(p_, electrolyte_conductivity(p_, c, T), p_.sep.eps_e) / 3.0;
    fs += diffusion_potential_factor(p_, c, T) / 3.0;
  }
  snap.transport.kappa = {mean4(&kap[0]), ks, mean4(&kap[4])};
  snap.transport.factor = {mean4(&fac[0]), fs, mean4(&fac[4])};

  for (Electrode e : {Electrode::negative, Electrode::positive}) {
    const int off = 4 * index_of(e);
    ReactionSolution& r = e == Electrode::negative ? snap.neg : snap.pos;
    if (mode_[index_of(e)] == JnMode::uniform) {
      r = jn_uniform(p_, e, current);
      continue;
    }
    ElectrodeConditions c;
    double kd = 0.0;
    for (int i = 0; i < 4; ++i) {
      c.ce[i] = snap.ce[off + i];
      c.css[i] = snap.css[off + i];
      c.ocp[i] = snap.ocp[off + i];
      kd += kap[off + i] * fac[off + i] / 4.0;
    }
    c.a_e = e == Electrode::negative ? snap.profile.a_neg : snap.profile.a_pos;
    c.b_e = e == Electrode::negative ? snap.profile.b_neg : snap.profile.b_pos;
    c.kappa_mean = snap.transport.kappa[e == Electrode::negative ? 0 : 2];
    c.kappa_D_mean = kd;
    c.kr = snap.kr[index_of(e)];
    c.T = T;
    c.current = current;
    r = jn_profile(p_, e, c);
  }

  snap.at_neg = {snap.neg.jn[0], snap.i0[0], snap.ocp[0]};
  snap.at_pos = {snap.pos.jn[3], snap.i0[7], snap.ocp[7]};
  if (!(snap.at_neg.i0 > 0) || !(snap.at_pos.i0 > 0)) {
    throw Error(ErrorKind::degenerate, "exchange current vanished at a collector");
  }
  snap.voltage = terminal_voltage(p_, snap.neg, snap.pos, snap.at_neg, snap.at_pos, snap.profile,
                                  snap.transport, T, current);
  const std::span<const double, 4> jn_neg(snap.neg.jn.data(), 4), jn_pos(snap.pos.jn.data(), 4);
  const std::span<const double, 4> u_neg(snap.ocp.data(), 4), u_pos(snap.ocp.data() + 4, 4);
  snap.heat = heat_rate(p_, jn_neg, u_neg, jn_pos, u_pos, current, snap.voltage.V);
  snap.ocv_surface = snap.ocp[7] - snap.ocp[0];
  return snap;
}

StepRecord Engine::make_record(const CellState& s, const Snapshot& snap) const {
  StepRecord r;
  r.t = s.t;
  r.I = snap.current;
  r.V = snap.voltage.V;
  r.T = s.T;
  r.soc = soc(s);
  r.ce = snap.ce;
  r.css = snap.css;
  for (int i = 0; i < 4; ++i) {
    r.cs_bulk[i] = s.solid.neg.bulk[i];
    r.cs_bulk[4 + i] = s.solid.pos.bulk[i];
  }
  r.jn = snap.jn();
  r.qe_neg = s.qe.neg;
  r.qe_pos = s.qe.pos;
  r.heat = snap.heat;
  r.flags = snap.flags;
  r.voltage = snap.voltage;
  r.ocv_surface = snap.ocv_surface;
  if (cfg_.audit_jn_integral) {
    r.jn_integral_error =
        std::max(jn_integral_error(p_, snap.neg), jn_integral_error(p_, snap.pos));
  }
  r.y_bulk = {electrode_average(s.solid.neg.bulk) / p_.neg.cs_max,
              electrode_average(s.solid.pos.bulk) / p_.pos.cs_max};
  return r;
}

Engine::Result Engine::step_current(const CellState& s, double current, double T_amb,
                                    double dt) const {
  StepInput::current(current, T_amb, dt).validate();
  const Snapshot pre = evaluate(s, current);
  std::uint32_t flags = 0;

  CellState n = s;
  n.qe = step_qe(s.qe, qe_dynamics(p_, pre.matrix, pre.de, current), dt);
  for (Electrode e : {Electrode::negative, Electrode::positive}) {
    const ElectrodeParams& el = p_.electrode(e);
    const int off = 4 * index_of(e);
    const ReactionSolution& r = e == Electrode::negative ? pre.neg : pre.pos;
    ElectrodeSolid& es = n.electrode(e);
    for (int i = 0; i < 4; ++i) {
      const BulkStep b = step_bulk(es.bulk[i], r.jn[i], el.particle_radius, dt, el.cs_max);
      if (b.saturated) {
        if (cfg_.strict) strict_fail("bulk concentration saturated");
        flags |= flag::bulk_saturated;
      }
      es.bulk[i] = b.value;
      es.offset[i] = step_offset(es.offset[i], r.jn[i], pre.ds[off + i], el.particle_radius,
                                 el.ks, dt);
    }
  }
  n.T = step_temperature(p_, s.T, pre.heat, T_amb, dt).T;
  const CorrectionStep corr = advance_correction(p_, cfg_.corrector, n, dt);
  if (corr.shift[0] != 0.0 || corr.shift[1] != 0.0) flags |= flag::corrected;
  if (corr.scale < 1.0) flags |= flag::correction_limited;
  n.t = s.t + dt;
  n.step = s.step + 1;

  n.lag_ce = pre.profile.interfaces();
  const Snapshot post = evaluate(n, current);
  n.lag_ce = post.profile.interfaces();

  Result out{n, make_record(n, post)};
  out.record.flags |= flags | pre.flags;
  out.record.correction_li_change = corr.lithium_change;
  return out;
}

double Engine::cv_hold_current(const CellState& s, double v_target, double T_amb, double dt,
                               double guess) const {
  auto f = [&](double I) { return step_current(s, I, T_amb, dt).record.V - v_target; };
  constexpr double tol = 1e-4;
  double x0 = guess;
  double f0 = f(x0);
  if (std::abs(f0) < tol) {
    // polish the guess so a held voltage keeps moving the current
    const double h = 1e-4 * p_.one_c_current();
    const double slope = (f(x0 + h) - f0) / h;
    if (slope == 0.0) return x0;
    const double x1 = x0 - f0 / slope;
    return std::abs(f(x1)) <= std::abs(f0) ? x1 : x0;
  }
  // V falls as the current rises, so a positive residual needs more current.
  const double probe = 0.02 * p_.one_c_current();
  double x1 = x0 + (f0 > 0 ? probe : -probe);
  double f1 = f(x1);
  double lo = 0, hi = 0, flo = 0, fhi = 0;
  bool bracketed = false;
  int side = 0;
  for (int it = 0; it < 20; ++it) {
    if (std::abs(f1) < tol) return x1;
    if (!bracketed && f0 * f1 < 0) {
      bracketed = true;
      lo = std::min(x0, x1);
      hi = std::max(x0, x1);
      flo = lo == x0 ? f0 : f1;
      fhi = hi == x0 ? f0 : f1;
    }
    double x2;
    if (bracketed) {
      // Illinois false position
      x2 = (lo * fhi - hi * flo) / (fhi - flo);
      const double f2 = f(x2);
      if (std::abs(f2) < tol) return x2;
      if (f2 * flo > 0) {
        lo = x2;
        flo = f2;
        if (side == -1) fhi *= 0.5;
        side = -1;
      } else {
        hi = x2;
        fhi = f2;
        if (side == 1) flo *= 0.5;
        side = 1;
      }
      continue;
    }
    const double slope = (f1 - f0) / (x1 - x0);
    x2 = slope != 0.0 ? x1 - f1 / slope : x1 + (f1 > 0 ? probe : -probe);
    // limit the secant jump to a few C
    const double cap = 5.0 * p_.one_c_current();
    x2 = std::clamp(x2, x1 - cap, x1 + cap);
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f(x1);
  }
  std::ostringstream os;
  os << "CV hold at " << v_target << " V did not converge in 20 iterations";
  throw Error(ErrorKind::convergence, os.str());
}

Engine::Result Engine::step(const CellState& s, const StepInput& in) const {
  in.validate();
  if (in.mode == StepInput::Mode::current) return step_current(s, in.value, in.T_amb, in.dt);
  const double I = cv_hold_current(s, in.value, in.T_amb, in.dt, 0.0);
  return step_current(s, I, in.T_amb, in.dt);
}

}  // namespace lisim
