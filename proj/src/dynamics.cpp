#include "cpv/dynamics.hpp"

#include <cmath>
#include <functional>

#include "cpv/verifier.hpp"

namespace cpv {

namespace {

constexpr double kBlowupLimit = 1e8;

using State8 = std::array<double, 8>;

Vec4d christoffel_contract(const FamilySpec& spec, const ChartPoint& p, const Vec4d& v) {
  const StructureBundle b = eval_structure(spec, p, 1);
  const ChristoffelData cd = christoffel(b.g);
  Vec4d a{};
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) s += cd.gamma[i][j][k].value() * v[size_t(j)] * v[size_t(k)];
    a[size_t(i)] = -s;
  }
  return a;
}

// generic RK4 over (position, velocity) with a configurable acceleration law
Curve integrate_second_order(const FamilySpec& spec, const ChartPoint& p0, const Vec4d& v0,
                             double t_max, int steps,
                             const std::function<Vec4d(const ChartPoint&, const Vec4d&)>& force) {
  Curve out;
  if (steps < 16) throw std::invalid_argument("need at least 16 integration steps");
  const double h = t_max / steps;
  if (std::abs(h) < 1e-14) throw std::invalid_argument("step underflow");

  auto rhs = [&](const State8& s, State8& d) {
    ChartPoint p;
    Vec4d v;
    for (int i = 0; i < 4; ++i) {
      p[i] = s[size_t(i)];
      v[size_t(i)] = s[size_t(i + 4)];
    }
    const Vec4d a = force(p, v);
    for (int i = 0; i < 4; ++i) {
      d[size_t(i)] = v[size_t(i)];
      d[size_t(i + 4)] = a[size_t(i)];
    }
  };

  State8 s{};
  for (int i = 0; i < 4; ++i) {
    s[size_t(i)] = p0[i];
    s[size_t(i + 4)] = v0[size_t(i)];
  }
  auto push_sample = [&](double t, const State8& st) {
    CurveSample cs;
    cs.t = t;
    for (int i = 0; i < 4; ++i) {
      cs.p[i] = st[size_t(i)];
      cs.vel[size_t(i)] = st[size_t(i + 4)];
    }
    cs.acc = force(cs.p, cs.vel);
    out.samples.push_back(cs);
  };
  push_sample(0.0, s);

  for (int n = 0; n < steps; ++n) {
    State8 k1, k2, k3, k4, tmp;
    try {
      rhs(s, k1);
      for (int i = 0; i < 8; ++i) tmp[size_t(i)] = s[size_t(i)] + 0.5 * h * k1[size_t(i)];
      rhs(tmp, k2);
      for (int i = 0; i < 8; ++i) tmp[size_t(i)] = s[size_t(i)] + 0.5 * h * k2[size_t(i)];
      rhs(tmp, k3);
      for (int i = 0; i < 8; ++i) tmp[size_t(i)] = s[size_t(i)] + h * k3[size_t(i)];
      rhs(tmp, k4);
    } catch (const std::domain_error&) {
      // a stage evaluation overshot the chart domain
      out.truncated = true;
      return out;
    }
    for (int i = 0; i < 8; ++i)
      s[size_t(i)] += h / 6.0 *
                      (k1[size_t(i)] + 2.0 * k2[size_t(i)] + 2.0 * k3[size_t(i)] + k4[size_t(i)]);
    ChartPoint p;
    for (int i = 0; i < 4; ++i) p[i] = s[size_t(i)];
    bool blown = false;
    for (double x : s)
      if (!std::isfinite(x) || std::abs(x) > kBlowupLimit) blown = true;
    // second-order curves need well-conditioned tensor evaluation along the
    // way, so they stop at the sampling-quality domain boundary
    if (blown || !in_domain(spec, p)) {
      out.truncated = true;
      return out;
    }
    push_sample((n + 1) * h, s);
  }
  return out;
}

// Euclidean least-squares residual of `a` outside span(basis)
double outside_span(const Vec4d& a, const std::vector<Vec4d>& basis) {
  const size_t m = basis.size();
  double G[2][2] = {}, rhsv[2] = {};
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j) G[i][j] = dot(basis[i], basis[j]);
    rhsv[i] = dot(basis[i], a);
  }
  double w[2] = {};
  if (m == 1) {
    w[0] = rhsv[0] / G[0][0];
  } else {
    const double det = G[0][0] * G[1][1] - G[0][1] * G[1][0];
    if (det < 1e-20 * std::max(1.0, G[0][0] * G[1][1]))
      jet_fail("velocity and J velocity are numerically dependent");
    w[0] = (rhsv[0] * G[1][1] - rhsv[1] * G[0][1]) / det;
    w[1] = (rhsv[1] * G[0][0] - rhsv[0] * G[1][0]) / det;
  }
  Vec4d res = a;
  for (size_t i = 0; i < m; ++i)
    for (int k = 0; k < 4; ++k) res[size_t(k)] -= w[i] * basis[i][size_t(k)];
  return norm2(res);
}

double curve_plane_residual(const Curve& curve, const FamilySpec& spec, bool with_j) {
  if (curve.samples.size() < 3) throw std::invalid_argument("curve needs at least 3 samples");
  double worst = 0.0;
  for (const CurveSample& cs : curve.samples) {
    const StructureBundle b = eval_structure(spec, cs.p, 1);
    const ChristoffelData cd = christoffel(b.g);
    Vec4d a = cs.acc;  // nabla_dot dot = ddot + Gamma(dot, dot)
    for (int i = 0; i < 4; ++i) {
      double s = 0.0;
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          s += cd.gamma[i][j][k].value() * cs.vel[size_t(j)] * cs.vel[size_t(k)];
      a[size_t(i)] += s;
    }
    std::vector<Vec4d> basis{cs.vel};
    if (with_j) {
      const Mat4d J = values_of(b.J.a);
      Vec4d jv{};
      for (int i = 0; i < 4; ++i) {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) s += J[i][k] * cs.vel[size_t(k)];
        jv[size_t(i)] = s;
      }
      basis.push_back(jv);
    }
    const double denom = norm2(a) + dot(cs.vel, cs.vel);
    worst = std::max(worst, outside_span(a, basis) / denom);
  }
  return worst;
}

double polyval_d(const std::vector<double>& coeffs, double x) {
  double v = 0.0;
  for (int k = int(coeffs.size()) - 1; k >= 0; --k) v = v * x + coeffs[size_t(k)];
  return v;
}

}  // namespace

std::vector<double> tau_grid(double a, double b, int n) {
  if (n < 2) throw std::invalid_argument("tau grid needs at least 2 points");
  std::vector<double> g(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) g[size_t(i)] = a + (b - a) * i / (n - 1);
  return g;
}

Curve integrate_flow(const FamilySpec& spec, const ChartPoint& p0, double tau_max, int steps) {
  if (!family_has_v(spec.id))
    throw std::invalid_argument("general normal forms carry no c-projective vector field");
  if (steps < 16) throw std::invalid_argument("need at least 16 integration steps");
  const double h = tau_max / steps;
  if (std::abs(h) < 1e-14) throw std::invalid_argument("step underflow");

  // the catalog vector fields are globally smooth in their charts, so the
  // integration itself never needs the metric domain; samples outside it only
  // raise the truncated flag
  Curve out;
  out.truncated = !in_domain_eval(spec, p0);
  ChartPoint p = p0;
  auto push = [&](double t, const ChartPoint& q) {
    CurveSample cs;
    cs.t = t;
    cs.p = q;
    cs.vel = v_values(spec, q);
    out.samples.push_back(cs);
  };
  push(0.0, p);
  auto f = [&](const ChartPoint& q) { return v_values(spec, q); };
  for (int n = 0; n < steps; ++n) {
    const Vec4d k1 = f(p);
    ChartPoint q2 = p, q3 = p, q4 = p;
    for (int i = 0; i < 4; ++i) q2[i] += 0.5 * h * k1[size_t(i)];
    const Vec4d k2 = f(q2);
    for (int i = 0; i < 4; ++i) q3[i] += 0.5 * h * k2[size_t(i)];
    const Vec4d k3 = f(q3);
    for (int i = 0; i < 4; ++i) q4[i] += h * k3[size_t(i)];
    const Vec4d k4 = f(q4);
    for (int i = 0; i < 4; ++i)
      p[i] += h / 6.0 * (k1[size_t(i)] + 2 * k2[size_t(i)] + 2 * k3[size_t(i)] + k4[size_t(i)]);
    bool blown = false;
    for (int i = 0; i < 4; ++i)
      if (!std::isfinite(p[i]) || std::abs(p[i]) > kBlowupLimit) blown = true;
    if (blown) {
      out.truncated = true;
      return out;
    }
    if (!in_domain_eval(spec, p)) out.truncated = true;
    push((n + 1) * h, p);
  }
  return out;
}

ChartPoint flow_point(const FamilySpec& spec, const ChartPoint& p0, double tau, int steps) {
  if (tau == 0.0) return p0;
  const Curve c = integrate_flow(spec, p0, tau, steps);
  if (int(c.samples.size()) != steps + 1) jet_fail("flow blew up during pushforward");
  return c.samples.back().p;
}

EigenFlow eigen_along_flow(const FamilySpec& spec, const ChartPoint& p0,
                           const std::vector<double>& taus) {
  EigenFlow out;
  out.tau = taus;
  const LieConstants k = documented_lie_constants(spec);
  EigenType type0 = EigenType::RealSplit;
  for (size_t i = 0; i < taus.size(); ++i) {
    const ChartPoint p = flow_point(spec, p0, taus[i], 64);
    const StructureBundle b = eval_structure(spec, p, 1);
    const Classification cl = classify_point(values_of(b.A.a));
    std::complex<double> r = cl.rho, s = cl.sigma;
    if (i == 0) {
      type0 = cl.type;
    } else {
      if (cl.type != type0) out.type_change = true;
      // continuity tracking: keep each branch close to its predecessor
      if (std::abs(r - out.rho.back()) + std::abs(s - out.sigma.back()) >
          std::abs(s - out.rho.back()) + std::abs(r - out.sigma.back()))
        std::swap(r, s);
    }
    out.rho.push_back(r);
    out.sigma.push_back(s);
  }
  // fourth-order central differences of both branches against the quadratic
  const double h = taus.size() > 1 ? taus[1] - taus[0] : 1.0;
  auto check_branch = [&](const std::vector<std::complex<double>>& f) {
    double worst = 0.0;
    for (size_t i = 2; i + 2 < f.size(); ++i) {
      const std::complex<double> d =
          (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
      const std::complex<double> rhs =
          -k.delta * f[i] * f[i] + (k.beta - k.gamma) * f[i] + k.alpha;
      worst = std::max(worst, std::abs(d - rhs));
    }
    return worst;
  };
  out.ode_residual = std::max(check_branch(out.rho), check_branch(out.sigma));
  return out;
}

ScalCurve scal_along_flow(const FamilySpec& spec, const ChartPoint& p0,
                          const std::vector<double>& taus) {
  ScalCurve out;
  out.tau = taus;
  out.source = "numeric";
  for (double t : taus) {
    const ChartPoint p = flow_point(spec, p0, t, 64);
    const MetricJet gh = eval_ghat(spec, p, 2);
    out.scal.push_back(riemann_ricci_scal(gh).scal);
  }
  return out;
}

ScalCurve scal_closed_form(const FamilySpec& spec, const std::vector<double>& taus, double u2) {
  spec.validate();
  if (spec.comp_C != 1.0)
    throw std::invalid_argument("closed-form Scal is normalized to C = 1");
  ScalCurve out;
  out.tau = taus;
  const double c = spec.comp_c;

  if (spec.id == FamilyId::L2) {
    if (spec.eps != -1)
      throw std::invalid_argument("the closed-form L2 curve requires split signature (eps = -1)");
    if (spec.c1 == spec.c2) throw std::invalid_argument("closed form requires c1 != c2");
    out.source = "closed_form_L2";
    const double b = spec.beta, c1 = spec.c1, c2 = spec.c2;
    const double d1s = spec.d1 * spec.d1, d2s = spec.d2 * spec.d2;
    // frozen numerator/denominator tables of the flow-restricted Scal
    const double C[8] = {
        2 * b * (b + 0.5) * (d1s - d2s),
        6 * (c2 * d2s - c1 * d1s) * (b + 0.5) * b + 4 * (c1 * d2s - c2 * d1s) * (b + 2) * b,
        6 * (c1 * c1 * d1s - c2 * c2 * d2s) * (b + 0.5) * b +
            2 * (c2 * c2 * d1s - c1 * c1 * d2s) * (1 + 7 * b + b * b) +
            12 * c1 * c2 * (d1s - d2s) * (b + 2) * b,
        2 * (c2 * c2 * c2 * d2s - c1 * c1 * c1 * d1s) * (b + 0.5) * b +
            8 * (c1 * c1 * c1 * d2s - c2 * c2 * c2 * d1s) * (b + 0.5) +
            6 * c1 * c2 * (c1 * d2s - c2 * d1s) * (1 + 7 * b + b * b) +
            12 * c1 * c2 * (c2 * d2s - c1 * d1s) * (b + 2) * b,
        (c2 * c2 * c2 * c2 * d1s - c1 * c1 * c1 * c1 * d2s) * (b + 2) +
            4 * c1 * c2 * (c1 * c1 * d1s - c2 * c2 * d2s) * (b + 2) * b +
            6 * c1 * c1 * c2 * c2 * (d1s - d2s) * (1 + 7 * b + b * b) +
            24 * c1 * c2 * (c2 * c2 * d1s - c1 * c1 * d2s) * (b + 0.5),
        3 * c1 * c2 * (c1 * c1 * c1 * d2s - c2 * c2 * c2 * d1s) * (b + 2) +
            24 * c1 * c1 * c2 * c2 * (c1 * d2s - c2 * d1s) * (b + 0.5) +
            2 * c1 * c1 * c2 * c2 * (c2 * d2s - c1 * d1s) * (1 + 7 * b + b * b),
        3 * c1 * c1 * c2 * c2 * (c2 * c2 * d1s - c1 * c1 * d2s) * (b + 2) +
            8 * c1 * c1 * c1 * c2 * c2 * c2 * (d1s - d2s) * (b + 0.5),
        c1 * c1 * c1 * c2 * c2 * c2 * (c1 * d2s - c2 * d1s) * (b + 2),
    };
    const double D[5] = {1.0, -2 * (c1 + c2), 2 * c1 * c2 + (c1 + c2) * (c1 + c2),
                         -2 * c1 * c2 * (c1 + c2), c1 * c1 * c2 * c2};
    for (double t : taus) {
      const double u = std::exp((b - 1) * t);
      double num = 0.0, den = 0.0;
      for (int k = 0; k < 8; ++k) num += C[k] * std::pow(c, 7 - k) * std::pow(u, k);
      for (int k = 0; k < 5; ++k) den += D[k] * std::pow(c, 4 - k) * std::pow(u, k);
      if (std::abs(den) < 1e-14) throw std::domain_error("closed form denominator vanished");
      out.scal.push_back(3.0 * std::exp(3 * t) / (d1s * d2s * (c1 - c2)) * num / den);
    }
    return out;
  }

  if (spec.id == FamilyId::D2) {
    out.source = "closed_form_D2";
    const double c1 = spec.c1, d1s = spec.d1 * spec.d1;
    const double G = polyval_d(spec.gfun_poly, u2);
    const auto dG = polyder(spec.gfun_poly);
    const double Gp = polyval_d(dG, u2);
    const double Gpp = polyval_d(polyder(dG), u2);

    if (spec.beta == -2.0) {
      for (double t : taus) {
        const double e3 = std::exp(3 * t);
        const double den = c - c1 / e3;
        if (std::abs(den) < 1e-14) throw std::domain_error("closed form denominator vanished");
        out.scal.push_back(-c * c / (c1 * d1s * den) *
                           ((36 + d1s * Gpp) * c1 * c1 / e3 - (18 + 2 * d1s * Gpp) * c1 * c +
                            (-18 + d1s * Gpp) * c * c * e3));
      }
      return out;
    }
    const double b = spec.beta;
    const double K = d1s * (Gp * Gp - G * Gpp);
    const double G3 = G * G * G;
    const double C[5] = {6 * b * (b + 0.5) * G3 + K, -12 * b * (b + 2) * G3 - 3 * K,
                         6 * (1 + 7 * b + b * b) * G3 + 3 * K, -24 * (b + 0.5) * G3 - K,
                         3 * (b + 2) * G3};
    for (double t : taus) {
      const double u = std::exp((b - 1) * t);
      double num = 0.0;
      for (int k = 0; k < 5; ++k)
        num += C[k] * std::pow(c, 4 - k) * std::pow(c1, k) * std::pow(u, k);
      const double den = (c - c1 * u) * (c - c1 * u);
      if (std::abs(den) < 1e-14) throw std::domain_error("closed form denominator vanished");
      out.scal.push_back(c * std::exp(3 * t) / (c1 * d1s * G3) * num / den);
    }
    return out;
  }
  throw std::invalid_argument("closed-form Scal exists for the L2 and D2 families only");
}

Curve geodesic(const FamilySpec& spec, const ChartPoint& p0, const Vec4d& v0, double t_max,
               int steps) {
  if (!in_domain_eval(spec, p0)) jet_fail("geodesic start outside the family domain");
  if (norm2(v0) == 0.0) throw std::invalid_argument("geodesic needs a nonzero velocity");
  return integrate_second_order(
      spec, p0, v0, t_max, steps,
      [&](const ChartPoint& p, const Vec4d& v) { return christoffel_contract(spec, p, v); });
}

Curve driven_jplanar_curve(const FamilySpec& spec, const ChartPoint& p0, const Vec4d& v0,
                           double t_max, int steps, double lambda) {
  return integrate_second_order(
      spec, p0, v0, t_max, steps, [&](const ChartPoint& p, const Vec4d& v) {
        Vec4d a = christoffel_contract(spec, p, v);
        const StructureBundle b = eval_structure(spec, p, 1);
        const Mat4d J = values_of(b.J.a);
        for (int i = 0; i < 4; ++i) {
          double s = 0.0;
          for (int k = 0; k < 4; ++k) s += J[i][k] * v[size_t(k)];
          a[size_t(i)] += lambda * s;
        }
        return a;
      });
}

Curve offplane_control_curve(const FamilySpec& spec, const ChartPoint& p0, const Vec4d& v0,
                             double t_max, int steps, double size) {
  return integrate_second_order(
      spec, p0, v0, t_max, steps, [&](const ChartPoint& p, const Vec4d& v) {
        Vec4d a = christoffel_contract(spec, p, v);
        // the injected size is relative to the same scale the planarity
        // residual is normalized by, so detection is chart independent
        const double scale = norm2(a) + dot(v, v);
        const StructureBundle b = eval_structure(spec, p, 1);
        const Mat4d J = values_of(b.J.a);
        Vec4d jv{};
        for (int i = 0; i < 4; ++i) {
          double s = 0.0;
          for (int k = 0; k < 4; ++k) s += J[i][k] * v[size_t(k)];
          jv[size_t(i)] = s;
        }
        // orthogonalize a fixed reference against span{v, Jv} in the same
        // chart-Euclidean sense the planarity residual projects with (a
        // g-orthogonal component can be invisible to that projection near
        // null configurations in split signature)
        Vec4d w{1.0, 0.3, -0.2, 0.5};
        const double e1 = dot(v, v), e12 = dot(v, jv), e2 = dot(jv, jv);
        const double edet = e1 * e2 - e12 * e12;
        const double r1 = dot(w, v), r2 = dot(w, jv);
        const double w1 = (r1 * e2 - r2 * e12) / edet;
        const double w2 = (r2 * e1 - r1 * e12) / edet;
        for (int i = 0; i < 4; ++i) w[size_t(i)] -= w1 * v[size_t(i)] + w2 * jv[size_t(i)];
        const double n = norm2(w);
        if (n < 1e-8) jet_fail("off-plane control direction degenerated");
        for (int i = 0; i < 4; ++i) a[size_t(i)] += size * scale / n * w[size_t(i)];
        return a;
      });
}

double jplanar_residual(const Curve& curve, const FamilySpec& spec) {
  return curve_plane_residual(curve, spec, true);
}

double geodesic_residual(const Curve& curve, const FamilySpec& spec) {
  return curve_plane_residual(curve, spec, false);
}

double energy_drift(const Curve& curve, const FamilySpec& spec) {
  double e0 = 0.0, worst = 0.0;
  bool first = true;
  for (const CurveSample& cs : curve.samples) {
    const StructureBundle b = eval_structure(spec, cs.p, 0);
    const Mat4d gv = values_of(b.g.g);
    double e = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) e += gv[i][j] * cs.vel[size_t(i)] * cs.vel[size_t(j)];
    if (first) {
      e0 = e;
      first = false;
    }
    worst = std::max(worst, std::abs(e - e0));
  }
  return worst / std::max(1.0, std::abs(e0));
}

double clairaut_drift(const Curve& curve, const FamilySpec& spec) {
  double v0 = 0.0, worst = 0.0;
  bool first = true;
  for (const CurveSample& cs : curve.samples) {
    const StructureBundle b = eval_structure(spec, cs.p, 2);
    const KillingPair kp = killing_fields(b);
    const Mat4d gv = values_of(b.g.g);
    const Vec4d k1 = values_of(kp.k1);
    double val = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) val += gv[i][j] * k1[size_t(i)] * cs.vel[size_t(j)];
    if (first) {
      v0 = val;
      first = false;
    }
    worst = std::max(worst, std::abs(val - v0));
  }
  return worst / std::max(1.0, std::abs(v0));
}

ResidualReport flow_invariance_check(const FamilySpec& spec, const Curve& curve,
                                     const std::vector<double>& tau_list, double tol) {
  if (curve.samples.size() < 7)
    throw std::invalid_argument("invariance check needs at least 7 curve samples");
  ResidualReport rep;
  rep.name = std::string("jplanar/") + family_name(spec.id);
  const double base = jplanar_residual(curve, spec);
  rep.add("jplanar", "input_curve", int(curve.samples.size()), 0, base, 1e-6);

  const double h = curve.samples[1].t - curve.samples[0].t;
  for (double tau : tau_list) {
    std::vector<ChartPoint> image;
    image.reserve(curve.samples.size());
    for (const CurveSample& cs : curve.samples) image.push_back(flow_point(spec, cs.p, tau, 64));
    Curve pushed;
    for (size_t i = 2; i + 2 < image.size(); ++i) {
      CurveSample cs;
      cs.t = curve.samples[i].t;
      cs.p = image[i];
      for (int k = 0; k < 4; ++k) {
        cs.vel[size_t(k)] = (-image[i + 2][k] + 8 * image[i + 1][k] - 8 * image[i - 1][k] +
                             image[i - 2][k]) /
                            (12 * h);
        cs.acc[size_t(k)] = (-image[i + 2][k] + 16 * image[i + 1][k] - 30 * image[i][k] +
                             16 * image[i - 1][k] - image[i - 2][k]) /
                            (12 * h * h);
      }
      pushed.samples.push_back(cs);
    }
    char label[64];
    std::snprintf(label, sizeof(label), "pushed_tau_%g", tau);
    rep.add("jplanar", label, int(pushed.samples.size()), 0, jplanar_residual(pushed, spec), tol);
  }
  return rep;
}

double tanh_template_residual(const FamilySpec& spec, const ChartPoint& p0,
                              const std::vector<double>& taus) {
  if (spec.id != FamilyId::L2 && spec.id != FamilyId::D2)
    throw std::invalid_argument("the bounded-solution template applies to L2 / D2");
  const double b52 = spec.beta + 1.0;  // essential-normalization constants
  const double ct = 0.25 * (spec.beta - 1.0) * (spec.beta - 1.0);
  const double sq = std::sqrt(ct);

  const EigenFlow ef = eigen_along_flow(spec, p0, taus);
  // nonconstant branch mapped through the basis change to the essential
  // normalization: rho' = (-beta rho - 1)/(rho + 1)
  auto pick = [&](size_t i) {
    const std::complex<double> r = ef.rho[i], s = ef.sigma[i];
    const std::complex<double> x = (std::abs(r) > std::abs(s)) ? r : s;
    return ((-spec.beta * x - 1.0) / (x + 1.0)).real();
  };
  const double r0 = pick(0);
  const double w = -(r0 + 0.5 * b52) / sq;
  if (std::abs(w) >= 1.0) throw std::domain_error("start value outside the bounded branch");
  const double d = std::atanh(w) / sq - taus.front();

  double worst = 0.0;
  for (size_t i = 0; i < taus.size(); ++i) {
    const double expect = -0.5 * b52 - sq * std::tanh(sq * (taus[i] + d));
    worst = std::max(worst, std::abs(pick(i) - expect));
  }
  return worst;
}

}  // namespace cpv
