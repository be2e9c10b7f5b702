#include "cpv/geometry.hpp"

namespace cpv {

int metric_order(const MetricJet& g) { return g.g[0][0].order(); }

bool nondegenerate(const Mat4d& g) {
  // Hadamard ratio |det| / prod ||row_i||: scale-free and anisotropy-safe,
  // so uniformly collapsing charts stay usable while genuine degeneracies
  // are rejected
  double prod = 1.0;
  for (int i = 0; i < 4; ++i) {
    double n = 0.0;
    for (int j = 0; j < 4; ++j) n += g[i][j] * g[i][j];
    prod *= std::sqrt(n);
  }
  if (prod <= 0.0 || !std::isfinite(prod)) return false;
  return std::abs(mat_det(g)) > kNondegenThreshold * prod;
}

void signature_of(MetricJet& g) {
  // eigenvalue signs of the symmetric value matrix via Jacobi iteration
  Mat4d m = values_of(g.g);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) off += m[p][q] * m[p][q];
    if (off < 1e-24) break;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) {
        if (std::abs(m[p][q]) < 1e-18) continue;
        const double theta = 0.5 * std::atan2(2.0 * m[p][q], m[q][q] - m[p][p]);
        const double c = std::cos(theta), s = std::sin(theta);
        for (int k = 0; k < 4; ++k) {
          const double mkp = m[k][p], mkq = m[k][q];
          m[k][p] = c * mkp - s * mkq;
          m[k][q] = s * mkp + c * mkq;
        }
        for (int k = 0; k < 4; ++k) {
          const double mpk = m[p][k], mqk = m[q][k];
          m[p][k] = c * mpk - s * mqk;
          m[q][k] = s * mpk + c * mqk;
        }
      }
  }
  g.plus = g.minus = 0;
  for (int i = 0; i < 4; ++i) (m[i][i] > 0 ? g.plus : g.minus)++;
}

ChristoffelData christoffel(const MetricJet& g) {
  const int order = metric_order(g);
  if (order < 1) jet_fail("christoffel needs a metric of order >= 1");
  if (!nondegenerate(values_of(g.g))) jet_fail("singular metric");
  const Mat4J ginv = mat_inverse(g.g);

  // dg[k][i][j] = d_k g_ij at order-1
  std::array<Mat4J, 4> dg;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) dg[k][i][j] = derivative(g.g[i][j], k);

  ChristoffelData cd;
  for (auto& m : cd.gamma) m = jet_zero_mat(order - 1);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = j; k < 4; ++k) {
        RJet s = RJet::constant(0.0, order - 1);
        for (int l = 0; l < 4; ++l)
          s = s + truncated(ginv[i][l], order - 1) * (dg[j][l][k] + dg[k][j][l] - dg[l][j][k]);
        cd.gamma[i][j][k] = 0.5 * s;
        cd.gamma[i][k][j] = cd.gamma[i][j][k];
      }
  return cd;
}

CurvatureData riemann_ricci_scal(const MetricJet& g) {
  if (metric_order(g) < 2) jet_fail("curvature needs a metric of order >= 2");
  const ChristoffelData cd = christoffel(g);

  double gam[4][4][4];
  double dgam[4][4][4][4];  // dgam[k][i][l][j] = d_k Gamma^i_{lj}
  for (int i = 0; i < 4; ++i)
    for (int l = 0; l < 4; ++l)
      for (int j = 0; j < 4; ++j) {
        gam[i][l][j] = cd.gamma[i][l][j].value();
        for (int k = 0; k < 4; ++k) dgam[k][i][l][j] = derivative(cd.gamma[i][l][j], k).value();
      }

  // sign convention: R(X,Y) = nabla_Y nabla_X - nabla_X nabla_Y + nabla_[X,Y],
  // the one under which the catalog's closed-form curvature values hold
  CurvatureData out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double r = dgam[l][i][k][j] - dgam[k][i][l][j];
          for (int m = 0; m < 4; ++m)
            r += gam[i][l][m] * gam[m][k][j] - gam[i][k][m] * gam[m][l][j];
          out.riem[i][j][k][l] = r;
        }

  for (int j = 0; j < 4; ++j)
    for (int l = 0; l < 4; ++l) {
      double r = 0.0;
      for (int k = 0; k < 4; ++k) r += out.riem[k][j][k][l];
      out.ric[j][l] = r;
    }

  const Mat4d ginv = mat_inverse(values_of(g.g));
  double s = 0.0;
  for (int j = 0; j < 4; ++j)
    for (int l = 0; l < 4; ++l) s += ginv[j][l] * out.ric[j][l];
  out.scal = s;
  return out;
}

Tens112 covariant_derivative_endo_jets(const Mat4J& a, const ChristoffelData& gamma) {
  if (a[0][0].order() < 1) jet_fail("covariant derivative needs order >= 1");
  Tens112 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        double s = derivative(a[i][j], k).value();
        for (int l = 0; l < 4; ++l)
          s += gamma.gamma[i][k][l].value() * a[l][j].value() -
               gamma.gamma[l][k][j].value() * a[i][l].value();
        r.t[i][j][k] = s;
      }
  return r;
}

Tens112 covariant_derivative_endo(const EndoJet& a, const ChristoffelData& gamma) {
  return covariant_derivative_endo_jets(a.a, gamma);
}

Mat4J lie_derivative_metric(const Vec4J& v, const MetricJet& g) {
  const int order = metric_order(g);
  if (order < 1 || v[0].order() < 1) jet_fail("lie derivative needs order >= 1");
  Mat4J r = jet_zero_mat(order - 1);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      RJet s = RJet::constant(0.0, order - 1);
      for (int k = 0; k < 4; ++k)
        s = s + truncated(v[k], order - 1) * derivative(g.g[i][j], k) +
            truncated(g.g[k][j], order - 1) * derivative(v[k], i) +
            truncated(g.g[i][k], order - 1) * derivative(v[k], j);
      r[i][j] = s;
    }
  return r;
}

Mat4J lie_derivative_endo(const Vec4J& v, const EndoJet& a) {
  const int order = a.a[0][0].order();
  if (order < 1 || v[0].order() < 1) jet_fail("lie derivative needs order >= 1");
  Mat4J r = jet_zero_mat(order - 1);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      RJet s = RJet::constant(0.0, order - 1);
      for (int k = 0; k < 4; ++k)
        s = s + truncated(v[k], order - 1) * derivative(a.a[i][j], k) -
            truncated(a.a[k][j], order - 1) * derivative(v[i], k) +
            truncated(a.a[i][k], order - 1) * derivative(v[k], j);
      r[i][j] = s;
    }
  return r;
}

Tens3Alt exterior_derivative(const FormJet& w) {
  Tens3Alt r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        r.t[i][j][k] = derivative(w.w[j][k], i).value() + derivative(w.w[k][i], j).value() +
                       derivative(w.w[i][j], k).value();
  return r;
}

Mat4d exterior_derivative_oneform(const Vec4J& alpha) {
  Mat4d r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      r[i][j] = derivative(alpha[j], i).value() - derivative(alpha[i], j).value();
  return r;
}

double max_abs(const Tens3Alt& t) {
  double m = 0.0;
  for (auto& a : t.t)
    for (auto& b : a)
      for (double x : b) m = std::max(m, std::abs(x));
  return m;
}

double max_abs(const Tens112& t) {
  double m = 0.0;
  for (auto& a : t.t)
    for (auto& b : a)
      for (double x : b) m = std::max(m, std::abs(x));
  return m;
}

EndoJet complex_structure_from(const MetricJet& g, const FormJet& w, double tol) {
  if (!nondegenerate(values_of(g.g))) jet_fail("singular metric");
  const Mat4J ginv = mat_inverse(g.g);
  EndoJet j;
  j.a = mat_mul(ginv, w.w);
  for (auto& row : j.a)
    for (auto& e : row) e = -e;  // omega = g(J.,.)  =>  J = -g^{-1} omega
  // J^2 = -Id at the value level
  const Mat4d jv = values_of(j.a);
  Mat4d j2{};
  double res = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double s = (a == b) ? 1.0 : 0.0;
      for (int k = 0; k < 4; ++k) s += jv[a][k] * jv[k][b];
      j2[a][b] = s;
      res = std::max(res, std::abs(s));
    }
  if (res > tol) jet_fail("J^2 + Id residual above tolerance: inconsistent (g, omega)");
  return j;
}

Vec4J gradient(const MetricJet& g, const RJet& f) {
  const int order = f.order();
  if (order < 1) jet_fail("gradient needs order >= 1");
  const Mat4J ginv = mat_inverse(g.g);
  Vec4J r = jet_zero_vec(order - 1);
  for (int i = 0; i < 4; ++i) {
    RJet s = RJet::constant(0.0, order - 1);
    for (int j = 0; j < 4; ++j) s = s + truncated(ginv[i][j], order - 1) * derivative(f, j);
    r[i] = s;
  }
  return r;
}

double killing_residual(const Vec4J& v, const MetricJet& g) {
  return max_abs(values_of(lie_derivative_metric(v, g)));
}

double hamiltonian_residual(const Vec4d& k, const RJet& h, const FormJet& w) {
  double r = 0.0;
  for (int j = 0; j < 4; ++j) {
    double s = (h.order() >= 1) ? derivative(h, j).value() : 0.0;
    for (int i = 0; i < 4; ++i) s += w.w[i][j].value() * k[i];
    r = std::max(r, std::abs(s));
  }
  return r;
}

double nabla_g_residual(const MetricJet& g) {
  const ChristoffelData cd = christoffel(g);
  double r = 0.0;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = derivative(g.g[i][j], k).value();
        for (int l = 0; l < 4; ++l)
          s -= cd.gamma[l][k][i].value() * g.g[l][j].value() +
               cd.gamma[l][k][j].value() * g.g[i][l].value();
        r = std::max(r, std::abs(s));
      }
  return r;
}

double nabla_endo_residual(const EndoJet& a, const MetricJet& g) {
  const ChristoffelData cd = christoffel(g);
  return max_abs(covariant_derivative_endo(a, cd));
}

double j_squared_residual(const EndoJet& j) {
  const Mat4d jv = values_of(j.a);
  double r = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double s = (a == b) ? 1.0 : 0.0;
      for (int k = 0; k < 4; ++k) s += jv[a][k] * jv[k][b];
      r = std::max(r, std::abs(s));
    }
  return r;
}

double hermiticity_residual(const MetricJet& g, const EndoJet& j) {
  const Mat4d jv = values_of(j.a);
  const Mat4d gv = values_of(g.g);
  double r = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double s = -gv[a][b];
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) s += jv[k][a] * gv[k][l] * jv[l][b];
      r = std::max(r, std::abs(s));
    }
  return r;
}

double curvature_symmetry_residual(const MetricJet& g) {
  const CurvatureData c = riemann_ricci_scal(g);
  const Mat4d gv = values_of(g.g);
  double rlow[4][4][4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int m = 0; m < 4; ++m) s += gv[i][m] * c.riem[m][j][k][l];
          rlow[i][j][k][l] = s;
        }
  double r = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          r = std::max(r, std::abs(rlow[i][j][k][l] + rlow[j][i][k][l]));
          r = std::max(r, std::abs(rlow[i][j][k][l] + rlow[i][j][l][k]));
          r = std::max(r, std::abs(rlow[i][j][k][l] - rlow[k][l][i][j]));
          r = std::max(r, std::abs(rlow[i][j][k][l] + rlow[i][k][l][j] + rlow[i][l][j][k]));
        }
  return r;
}

Vec4d commutator_values(const Vec4J& x, const Vec4J& y) {
  Vec4d r{};
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j)
      s += x[j].value() * derivative(y[i], j).value() -
           y[j].value() * derivative(x[i], j).value();
    r[i] = s;
  }
  return r;
}

Vec4J apply_endo(const EndoJet& j, const Vec4J& v) {
  const int order = std::min(j.a[0][0].order(), v[0].order());
  Vec4J r = jet_zero_vec(order);
  for (int i = 0; i < 4; ++i) {
    RJet s = RJet::constant(0.0, order);
    for (int k = 0; k < 4; ++k) s = s + truncated(j.a[i][k], order) * truncated(v[k], order);
    r[i] = s;
  }
  return r;
}

}  // namespace cpv
