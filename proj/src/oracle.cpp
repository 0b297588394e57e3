#include "lisim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lisim/error.hpp"
#include "lisim/output.hpp"

namespace lisim {

namespace {

// Thomas algorithm; sub[0] and sup[n-1] are ignored. Overwrites d with the solution.
void solve_tridiagonal(const std::vector<double>& sub, const std::vector<double>& diag,
                       const std::vector<double>& sup, std::vector<double>& d) {
  const std::size_t n = diag.size();
  std::vector<double> c(n);
  double beta = diag[0];
  d[0] /= beta;
  for (std::size_t i = 1; i < n; ++i) {
    c[i] = sup[i - 1] / beta;
    beta = diag[i] - sub[i] * c[i];
    d[i] = (d[i] - sub[i] * d[i - 1]) / beta;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i + 1] * d[i + 1];
}

// Shell volumes and outer-face areas of a sphere split into n equal-width shells, in units
// of dr^3/3 and dr^2 (the 4 pi factor cancels).
struct Shells {
  std::vector<double> vol, face;
  explicit Shells(int n) : vol(n), face(n) {
    for (int j = 0; j < n; ++j) {
      const double a = j, b = j + 1.0;
      vol[j] = (b * b * b - a * a * a) / 3.0;
      face[j] = b * b;
    }
  }
};

double particle_mean(const double* c, int n) {
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    const double a = j, b = j + 1.0;
    s += (b * b * b - a * a * a) * c[j];
  }
  return s / (static_cast<double>(n) * n * n);
}

// Quadratic extrapolation to r = R from the last two shell centres and the flux condition.
// Quadratic in r through the two outer shell averages with the given surface slope.
double surface_value(double c_last, double c_prev, double slope, double dr, int n) {
  // r^2-weighted averages of (r - n)^k over shell [j, j+1], 3-point Gauss is exact here
  auto moment = [n](int j, int k) {
    static constexpr double x[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static constexpr double w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double r = j + 0.5 + 0.5 * x[i];
      num += w[i] * std::pow(r - n, k) * r * r;
      den += w[i] * r * r;
    }
    return num / den;
  };
  const double m1l = moment(n - 1, 1), m2l = moment(n - 1, 2);
  const double m1p = moment(n - 2, 1), m2p = moment(n - 2, 2);
  const double b = slope * dr;
  const double q = (c_last - c_prev - b * (m1l - m1p)) / (m2l - m2p);
  return c_last - b * m1l - q * m2l;
}

// Linear interpolation on cell centres (i + 1/2) dx, extrapolating at both ends.
double sample_at(const double* v, int n, double dx, double x) {
  int i = static_cast<int>(std::floor(x / dx - 0.5));
  i = std::clamp(i, 0, n - 2);
  const double xi = (i + 0.5) * dx;
  return v[i] + (v[i + 1] - v[i]) * (x - xi) / dx;
}

struct Kinetics {
  const OcpCurve* ocp;
  double css0, g, ce, kr, cs_max, film, T;
};

struct JnSolve {
  double j = 0.0;
  double dj = 0.0;  // d j / d phi_se
};

}  // namespace

struct P2DSolver::Fields {
  std::vector<double> jn, css, ocp;
  std::vector<double> kappa, factor;  // per x-cell, at the ce used by the kinetics
  std::vector<double> ce_kin;
  std::vector<double> ie;             // face currents per electrode cell (right face), A/m^2
  double V = 0.0;
  double heat = 0.0;
  double charge_error = 0.0;
};

void P2DMesh::validate() const {
  if (n_neg < 4 || n_sep < 4 || n_pos < 4 || n_r < 4) {
    throw Error(ErrorKind::invalid_input, "P2D mesh counts must all be >= 4");
  }
}

P2DSolver::P2DSolver(CellParameters p, OcpPair ocp, StoichiometryWindow w, P2DConfig cfg)
    : p_(std::move(p)), ocp_(std::move(ocp)), window_(w), cfg_(cfg) {
  p_.validate();
  cfg_.mesh.validate();
  const P2DMesh& m = cfg_.mesh;
  auto add = [&](int n, double L, double A, double eps) {
    for (int i = 0; i < n; ++i) {
      dx_.push_back(L / n);
      area_.push_back(A);
      eps_.push_back(eps);
    }
  };
  add(m.n_neg, p_.neg.thickness, p_.neg.area, p_.neg.eps_e);
  add(m.n_sep, p_.sep.thickness, p_.sep.area, p_.sep.eps_e);
  add(m.n_pos, p_.pos.thickness, p_.pos.area, p_.pos.eps_e);
}

P2DState P2DSolver::initial_state(double soc0, double T_amb) const {
  if (!(soc0 >= 0 && soc0 <= 1)) throw Error(ErrorKind::invalid_input, "soc0 must lie in [0,1]");
  const P2DMesh& m = cfg_.mesh;
  P2DState s;
  const int nel = m.n_neg + m.n_pos;
  s.cs.resize(static_cast<std::size_t>(nel) * m.n_r);
  s.phi_se.resize(nel);
  s.jn.assign(nel, 0.0);
  const double yn = window_.y_neg(soc0), yp = window_.y_pos(soc0);
  for (int e = 0; e < nel; ++e) {
    const bool neg = e < m.n_neg;
    const double c = neg ? yn * p_.neg.cs_max : yp * p_.pos.cs_max;
    std::fill_n(s.cs.begin() + static_cast<std::ptrdiff_t>(e) * m.n_r, m.n_r, c);
    s.phi_se[e] = neg ? ocp_.neg.potential(yn) : ocp_.pos.potential(yp);
  }
  s.ce.assign(dx_.size(), p_.ce0);
  s.T = T_amb;
  return s;
}

double P2DSolver::total_lithium(const P2DState& s) const {
  const P2DMesh& m = cfg_.mesh;
  double solid = 0.0;
  for (int e = 0; e < m.n_neg + m.n_pos; ++e) {
    const bool neg = e < m.n_neg;
    const ElectrodeParams& el = neg ? p_.neg : p_.pos;
    // particle volume fraction implied by the specific area, as the flux source uses it
    const double frac = el.specific_area * el.particle_radius / 3.0;
    const double dx = el.thickness / (neg ? m.n_neg : m.n_pos);
    solid += frac * el.area * dx * particle_mean(&s.cs[static_cast<std::size_t>(e) * m.n_r], m.n_r);
  }
  double liquid = 0.0;
  for (std::size_t k = 0; k < s.ce.size(); ++k) liquid += eps_[k] * area_[k] * dx_[k] * s.ce[k];
  return solid + liquid;
}

double P2DSolver::soc(const P2DState& s) const {
  const P2DMesh& m = cfg_.mesh;
  double y = 0.0;
  for (int e = 0; e < m.n_neg; ++e) {
    y += particle_mean(&s.cs[static_cast<std::size_t>(e) * m.n_r], m.n_r);
  }
  y /= m.n_neg * p_.neg.cs_max;
  return (y - window_.y0_neg) / window_.span_neg();
}

void P2DSolver::advance(P2DState& s, double current, double T_amb, double dt, Fields& f) const {
  const P2DMesh& m = cfg_.mesh;
  const int nr = m.n_r;
  const int nel = m.n_neg + m.n_pos;
  const double T = s.T;
  const double F = p_.faraday;
  const Shells shells(nr);

  // Particles: c_new = ca + jn * cb.
  std::vector<double> ca(static_cast<std::size_t>(nel) * nr), cb(ca.size());
  std::vector<double> css0(nel), g(nel);
  {
    std::vector<double> sub(nr), diag(nr), sup(nr), da(nr), db(nr);
    for (int e = 0; e < nel; ++e) {
      const bool neg = e < m.n_neg;
      const Electrode side = neg ? Electrode::negative : Electrode::positive;
      const ElectrodeParams& el = p_.electrode(side);
      const double dr = el.particle_radius / nr;
      const double* c = &s.cs[static_cast<std::size_t>(e) * nr];
      const double ds = solid_diffusivity(p_, side, particle_mean(c, nr), T).value;
      // Divided through by dr: volumes in dr^3/3 units become dr^2 units after dividing by dr.
      const double k = ds / dr;
      for (int j = 0; j < nr; ++j) {
        const double v = shells.vol[j] * dr * dr * dr / dt;
        const double fo = j + 1 < nr ? shells.face[j] * dr * dr * k : 0.0;
        const double fi = j > 0 ? shells.face[j - 1] * dr * dr * k : 0.0;
        diag[j] = v + fo + fi;
        sup[j] = -fo;
        sub[j] = -fi;
        da[j] = v * c[j];
        db[j] = 0.0;
      }
      db[nr - 1] = -shells.face[nr - 1] * dr * dr;
      solve_tridiagonal(sub, diag, sup, da);
      solve_tridiagonal(sub, diag, sup, db);
      std::copy(da.begin(), da.end(), ca.begin() + static_cast<std::ptrdiff_t>(e) * nr);
      std::copy(db.begin(), db.end(), cb.begin() + static_cast<std::ptrdiff_t>(e) * nr);
      css0[e] = surface_value(da[nr - 1], da[nr - 2], 0.0, dr, nr);
      g[e] = surface_value(db[nr - 1], db[nr - 2], -1.0 / ds, dr, nr);
    }
  }

  const std::size_t ncell = dx_.size();
  const int sep_begin = m.n_neg, pos_begin = m.n_neg + m.n_sep;
  auto cell_of = [&](int e) { return e < m.n_neg ? e : pos_begin + (e - m.n_neg); };

  // Electrolyte diffusivities at the start-of-step concentration.
  std::vector<double> de(ncell);
  for (std::size_t k = 0; k < ncell; ++k) {
    de[k] = bruggeman(p_, electrolyte_diffusivity(p_, s.ce[k], T), eps_[k]);
  }

  f.jn = s.jn;
  f.ie.assign(nel, 0.0);
  std::vector<double> phi = s.phi_se;
  std::vector<double> ce_kin = s.ce;
  std::vector<double> ce_new(ncell);
  f.kappa.assign(ncell, 0.0);
  f.factor.assign(ncell, 0.0);

  const double kr_neg = reaction_rate_coeff(p_, Electrode::negative, T);
  const double kr_pos = reaction_rate_coeff(p_, Electrode::positive, T);
  const double rt2f = 2.0 * thermal_voltage(p_, T);

  auto solve_j = [&](double target, const Kinetics& kin, double j0) -> JnSolve {
    constexpr double margin = 1e-9;
    const double lo_c = margin * kin.cs_max, hi_c = (1.0 - margin) * kin.cs_max;
    // g < 0: larger j depletes the surface
    double jlo = (hi_c - kin.css0) / kin.g, jhi = (lo_c - kin.css0) / kin.g;
    auto eval = [&](double j, double* dh) {
      const double css = kin.css0 + kin.g * j;
      const double prod = css * (kin.cs_max - css);
      const double i0 = kin.kr * std::sqrt(kin.ce * prod);
      const double z = F * j / (2.0 * i0);
      const double y = css / kin.cs_max;
      if (dh) {
        const double di0 = kin.kr * std::sqrt(kin.ce) * (kin.cs_max - 2.0 * css) /
                           (2.0 * std::sqrt(prod)) * kin.g;
        const double dz = F / (2.0 * i0) - F * j * di0 / (2.0 * i0 * i0);
        *dh = kin.ocp->slope(y) * kin.g / kin.cs_max + F * kin.film + rt2f * dz / std::sqrt(1 + z * z);
      }
      return kin.ocp->potential(y) + F * kin.film * j + rt2f * std::asinh(z) - target;
    };
    double j = std::clamp(j0, jlo, jhi);
    if (!(j > jlo && j < jhi)) j = 0.5 * (jlo + jhi);
    double dh = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double r = eval(j, &dh);
      if (r > 0) jhi = j; else jlo = j;
      if (std::abs(r) < 1e-13 || jhi - jlo < 1e-15 * std::max(1.0, std::abs(j))) break;
      double next = j - r / dh;
      if (!(dh > 0) || !(next > jlo && next < jhi)) next = 0.5 * (jlo + jhi);
      j = next;
    }
    eval(j, &dh);
    return {j, 1.0 / dh};
  };

  for (int pass = 0; pass < cfg_.picard_passes; ++pass) {
    for (std::size_t k = 0; k < ncell; ++k) {
      f.kappa[k] = bruggeman(p_, electrolyte_conductivity(p_, ce_kin[k], T), eps_[k]);
      f.factor[k] = diffusion_potential_factor(p_, ce_kin[k], T);
    }
    for (Electrode side : {Electrode::negative, Electrode::positive}) {
      const bool neg = side == Electrode::negative;
      const ElectrodeParams& el = p_.electrode(side);
      const int n = neg ? m.n_neg : m.n_pos;
      const int e0 = neg ? 0 : m.n_neg;
      const int c0 = neg ? 0 : pos_begin;
      const double dx = el.thickness / n;
      const double sigma = solid_conductivity_eff(p_, side);
      const double iA = current / el.area;
      const double ie_left = neg ? 0.0 : iA, ie_right = neg ? iA : 0.0;
      const double src = el.specific_area * F * dx;
      std::vector<double> w(n), cst(n);
      for (int i = 0; i + 1 < n; ++i) {
        const double ka = f.kappa[c0 + i], kb = f.kappa[c0 + i + 1];
        const double kf = 2.0 * ka * kb / (ka + kb);
        const double ff = 0.5 * (f.factor[c0 + i] + f.factor[c0 + i + 1]);
        w[i] = dx * (1.0 / sigma + 1.0 / kf);
        cst[i] = -dx * iA / sigma + ff * std::log(ce_kin[c0 + i + 1] / ce_kin[c0 + i]);
      }
      std::vector<Kinetics> kin(n);
      for (int i = 0; i < n; ++i) {
        kin[i] = {&ocp_[side], css0[e0 + i], g[e0 + i], ce_kin[c0 + i], neg ? kr_neg : kr_pos,
                  el.cs_max, el.film_resistance, T};
      }
      const double scale = std::max(std::abs(iA), p_.one_c_current() / el.area);
      std::vector<JnSolve> js(n);
      std::vector<double> res(n), sub(n), diag(n), sup(n);
      auto residual = [&](const std::vector<double>& ph) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) js[i] = solve_j(ph[i], kin[i], f.jn[e0 + i]);
        double left = ie_left;
        for (int i = 0; i < n; ++i) {
          const double right = i + 1 < n ? (ph[i + 1] - ph[i] - cst[i]) / w[i] : ie_right;
          res[i] = right - left - src * js[i].j;
          worst = std::max(worst, std::abs(res[i]));
          left = right;
        }
        return worst / scale;
      };
      std::vector<double> ph(phi.begin() + e0, phi.begin() + e0 + n);
      double norm = residual(ph);
      int it = 0;
      while (norm > cfg_.newton_tol) {
        if (++it > cfg_.max_newton) {
          std::ostringstream os;
          os << "P2D Newton did not converge (" << to_string(side) << ", residual " << norm << ")";
          throw Error(ErrorKind::convergence, os.str());
        }
        for (int i = 0; i < n; ++i) {
          diag[i] = -src * js[i].dj;
          sub[i] = sup[i] = 0.0;
          if (i + 1 < n) {
            diag[i] -= 1.0 / w[i];
            sup[i] = 1.0 / w[i];
          }
          if (i > 0) {
            diag[i] -= 1.0 / w[i - 1];
            sub[i] = 1.0 / w[i - 1];
          }
        }
        std::vector<double> step(res.size());
        for (int i = 0; i < n; ++i) step[i] = -res[i];
        solve_tridiagonal(sub, diag, sup, step);
        std::vector<double> trial(n);
        double lambda = 1.0;
        double next = norm;
        for (int k = 0; k < 20; ++k, lambda *= 0.5) {
          for (int i = 0; i < n; ++i) trial[i] = ph[i] + lambda * step[i];
          next = residual(trial);
          if (next < norm) break;
        }
        if (!(next < norm)) {
          throw Error(ErrorKind::convergence, "P2D Newton line search failed");
        }
        ph = trial;
        norm = next;
      }
      // js holds the converged fluxes
      for (int i = 0; i < n; ++i) {
        phi[e0 + i] = ph[i];
        f.jn[e0 + i] = js[i].j;
        f.ie[e0 + i] = i + 1 < n ? (ph[i + 1] - ph[i] - cst[i]) / w[i] : ie_right;
      }
    }

    // Electrolyte: implicit control-volume diffusion with the reaction source.
    {
      std::vector<double> sub(ncell, 0.0), diag(ncell), sup(ncell, 0.0);
      for (std::size_t k = 0; k < ncell; ++k) {
        const double cap = eps_[k] * area_[k] * dx_[k] / dt;
        diag[k] = cap;
        ce_new[k] = cap * s.ce[k];
      }
      for (std::size_t k = 0; k + 1 < ncell; ++k) {
        const double G = 1.0 / (dx_[k] / (2.0 * area_[k] * de[k]) +
                                dx_[k + 1] / (2.0 * area_[k + 1] * de[k + 1]));
        diag[k] += G;
        diag[k + 1] += G;
        sup[k] = -G;
        sub[k + 1] = -G;
      }
      for (int e = 0; e < nel; ++e) {
        const int k = cell_of(e);
        const ElectrodeParams& el = e < m.n_neg ? p_.neg : p_.pos;
        ce_new[k] += (1.0 - p_.t_plus) * el.specific_area * f.jn[e] * area_[k] * dx_[k];
      }
      solve_tridiagonal(sub, diag, sup, ce_new);
      for (double c : ce_new) {
        if (!(c > 0)) throw Error(ErrorKind::convergence, "P2D electrolyte concentration <= 0");
      }
    }
    if (pass + 1 < cfg_.picard_passes) ce_kin = ce_new;
  }
  f.ce_kin = ce_kin;

  // Terminal voltage from the converged fields.
  std::vector<double> phi_e(ncell, 0.0);
  for (std::size_t k = 0; k + 1 < ncell; ++k) {
    double Ie;
    if (static_cast<int>(k) < m.n_neg - 1) {
      Ie = f.ie[k] * area_[k];
    } else if (static_cast<int>(k) >= pos_begin) {
      Ie = f.ie[m.n_neg + (static_cast<int>(k) - pos_begin)] * area_[k];
    } else {
      Ie = current;
    }
    const double R = dx_[k] / (2.0 * area_[k] * f.kappa[k]) +
                     dx_[k + 1] / (2.0 * area_[k + 1] * f.kappa[k + 1]);
    const double ff = 0.5 * (f.factor[k] + f.factor[k + 1]);
    phi_e[k + 1] = phi_e[k] - Ie * R - ff * std::log(ce_kin[k + 1] / ce_kin[k]);
  }
  (void)sep_begin;
  const double dxn = p_.neg.thickness / m.n_neg, dxp = p_.pos.thickness / m.n_pos;
  const double sn = solid_conductivity_eff(p_, Electrode::negative);
  const double sp = solid_conductivity_eff(p_, Electrode::positive);
  const double asFn = p_.neg.specific_area * F, asFp = p_.pos.specific_area * F;
  const double phis_left = phi[0] + phi_e[0] +
                           dxn / (2.0 * sn) * (current / p_.neg.area - asFn * f.jn[0] * dxn / 4.0);
  const int last = nel - 1;
  const double phis_right = phi[last] + phi_e[ncell - 1] -
                            dxp / (2.0 * sp) * (current / p_.pos.area + asFp * f.jn[last] * dxp / 4.0);
  f.V = phis_right - phis_left - p_.contact_resistance * current;

  // Commit particles and fields.
  f.css.resize(nel);
  f.ocp.resize(nel);
  double reaction = 0.0, qn = 0.0, qp = 0.0;
  for (int e = 0; e < nel; ++e) {
    const bool neg = e < m.n_neg;
    const ElectrodeParams& el = neg ? p_.neg : p_.pos;
    double* c = &s.cs[static_cast<std::size_t>(e) * nr];
    for (int j = 0; j < nr; ++j) c[j] = ca[e * nr + j] + f.jn[e] * cb[e * nr + j];
    f.css[e] = std::clamp(css0[e] + g[e] * f.jn[e], 0.0, el.cs_max);
    f.ocp[e] = ocp_[neg ? Electrode::negative : Electrode::positive].potential(f.css[e] / el.cs_max);
    const double dx = neg ? dxn : dxp;
    reaction += el.area * el.specific_area * f.jn[e] * f.ocp[e] * dx;
    (neg ? qn : qp) += el.specific_area * F * f.jn[e] * el.area * dx;
  }
  const double ref = std::max(std::abs(current), p_.one_c_current());
  f.charge_error = std::max(std::abs(qn - current), std::abs(qp + current)) / ref;
  f.heat = -F * reaction - current * f.V;
  s.ce = ce_new;
  s.phi_se = phi;
  s.jn = f.jn;
  s.T = step_temperature(p_, T, f.heat, T_amb, dt).T;
  s.t += dt;
  ++s.step;
}

StepRecord P2DSolver::sample(const P2DState& s, const Fields& f, double current) const {
  const P2DMesh& m = cfg_.mesh;
  const int nr = m.n_r;
  const int pos_begin = m.n_neg + m.n_sep;
  StepRecord r;
  r.t = s.t;
  r.I = current;
  r.V = f.V;
  r.T = s.T;
  r.soc = soc(s);
  r.heat = f.heat;
  r.jn_integral_error = f.charge_error;
  r.voltage.V = f.V;

  std::vector<double> mean(m.n_neg + m.n_pos);
  for (std::size_t e = 0; e < mean.size(); ++e) mean[e] = particle_mean(&s.cs[e * nr], nr);

  for (Electrode side : {Electrode::negative, Electrode::positive}) {
    const bool neg = side == Electrode::negative;
    const ElectrodeParams& el = p_.electrode(side);
    const int n = neg ? m.n_neg : m.n_pos;
    const int e0 = neg ? 0 : m.n_neg;
    const int c0 = neg ? 0 : pos_begin;
    const double dx = el.thickness / n;
    const int off = neg ? 0 : 4;
    for (int i = 0; i < 4; ++i) {
      const double x = el.thickness * i / 3.0;
      r.ce[off + i] = sample_at(&s.ce[c0], n, dx, x);
      r.css[off + i] = std::clamp(sample_at(&f.css[e0], n, dx, x), 0.0, el.cs_max);
      r.cs_bulk[off + i] = sample_at(&mean[e0], n, dx, x);
      r.jn[off + i] = sample_at(&f.jn[e0], n, dx, x);
    }
    double q = 0.0, y = 0.0;
    for (int i = 0; i < n; ++i) {
      q += eps_[c0 + i] * area_[c0 + i] * dx_[c0 + i] * s.ce[c0 + i];
      y += mean[e0 + i];
    }
    (neg ? r.qe_neg : r.qe_pos) = q;
    r.y_bulk[neg ? 0 : 1] = y / (n * el.cs_max);
  }
  r.ocv_surface = ocp_.pos.potential(r.css[7] / p_.pos.cs_max) -
                  ocp_.neg.potential(r.css[0] / p_.neg.cs_max);
  return r;
}

StepRecord P2DSolver::step(P2DState& s, double current, double T_amb, double dt) const {
  StepInput::current(current, T_amb, dt).validate();
  std::function<StepRecord(P2DState&, double, int)> attempt =
      [&](P2DState& st, double h, int depth) -> StepRecord {
    P2DState trial = st;
    Fields f;
    try {
      advance(trial, current, T_amb, h, f);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::convergence || depth >= cfg_.max_halvings) throw;
      attempt(st, 0.5 * h, depth + 1);
      return attempt(st, 0.5 * h, depth + 1);
    }
    st = std::move(trial);
    return sample(st, f, current);
  };
  return attempt(s, dt, 0);
}

double P2DSolver::cv_hold_current(const P2DState& s, double v_target, double T_amb, double dt,
                                  double guess) const {
  auto f = [&](double I) {
    P2DState trial = s;
    return step(trial, I, T_amb, dt).V - v_target;
  };
  constexpr double tol = 1e-4;
  const double probe = 0.02 * p_.one_c_current();
  double x0 = guess, f0 = f(x0);
  if (std::abs(f0) < tol) return x0;
  double x1 = x0 + (f0 > 0 ? probe : -probe), f1 = f(x1);
  for (int it = 0; it < 20; ++it) {
    if (std::abs(f1) < tol) return x1;
    const double slope = (f1 - f0) / (x1 - x0);
    double x2 = slope != 0.0 ? x1 - f1 / slope : x1 + (f1 > 0 ? probe : -probe);
    const double cap = 5.0 * p_.one_c_current();
    x2 = std::clamp(x2, x1 - cap, x1 + cap);
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f(x1);
  }
  throw Error(ErrorKind::convergence, "P2D CV hold did not converge");
}

Trajectory P2DSolver::run(const Scenario& scenario) const {
  return run_from(initial_state(scenario.soc0, scenario.T_amb), scenario);
}

Trajectory P2DSolver::run_from(P2DState state, const Scenario& scenario) const {
  Trajectory traj;
  traj.model = "p2d";
  traj.params = p_.name;
  auto stepper = [&](const StepInput& in, double guess) {
    in.validate();
    const double I = in.mode == StepInput::Mode::current
                         ? in.value
                         : cv_hold_current(state, in.value, in.T_amb, in.dt, guess);
    return step(state, I, in.T_amb, in.dt);
  };
  drive_scenario(scenario, p_, stepper, traj);
  return traj;
}

}  // namespace lisim
