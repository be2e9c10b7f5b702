#include "cpv/verifier.hpp"

#include <cmath>
#include <mutex>

#include "cpv/parallel.hpp"

namespace cpv {

namespace {

constexpr int kMaxRejections = 1000;

// max-reduction helper for parallel point sweeps
struct MaxAcc {
  double v = 0.0;
  std::mutex mu;
  void update(double x) {
    std::lock_guard<std::mutex> lock(mu);
    v = std::max(v, x);
  }
};

Mat4d metric_times_endo(const Mat4d& g, const Mat4d& a) {
  Mat4d r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += g[i][k] * a[k][j];
      r[i][j] = s;
    }
  return r;
}

}  // namespace

LieConstants documented_lie_constants(const FamilySpec& spec) {
  switch (spec.id) {
    case FamilyId::L1:
    case FamilyId::CL1:
      return {1.0, 0.0, 0.0, 0.0};  // (0 1; 0 0)
    case FamilyId::L2:
    case FamilyId::CL2:
    case FamilyId::D2:
      return {0.0, spec.beta, 1.0, 0.0};  // (1 0; 0 beta)
    case FamilyId::L3:
    case FamilyId::CL3:
      return {1.0, 1.0, 1.0, 0.0};  // (1 1; 0 1)
    case FamilyId::L4:
    case FamilyId::CL4:
      return {-1.0, spec.beta, spec.beta, 1.0};  // (beta -1; 1 beta)
    case FamilyId::D1:
      return {0.0, 0.0, 0.0, 1.0};  // transpose of (0 1; 0 0)
    case FamilyId::D3:
      return {0.0, 1.0, 1.0, 1.0};  // transpose of (1 1; 0 1)
    default:
      throw std::invalid_argument("general normal forms carry no c-projective vector field");
  }
}

double main_equation_residual(const MetricJet& g, const EndoJet& J, const EndoJet& A) {
  const ChristoffelData gamma = christoffel(g);
  const Tens112 nabla = covariant_derivative_endo(A, gamma);

  const Mat4d gv = values_of(g.g);
  const Mat4d jv = values_of(J.a);

  RJet tr = RJet::constant(0.0, A.a[0][0].order());
  for (int i = 0; i < 4; ++i) tr = tr + A.a[i][i];
  Vec4d dtr{};  // Lambda^b = d(tr A)/4
  for (int j = 0; j < 4; ++j) dtr[j] = 0.25 * derivative(tr, j).value();

  const Mat4d ginv = mat_inverse(gv);
  Vec4d lam{}, jlam{};
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += ginv[i][j] * dtr[j];
    lam[i] = s;
  }
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += jv[i][k] * lam[k];
    jlam[i] = s;
  }
  Vec4d jlam_flat{};
  for (int j = 0; j < 4; ++j) {
    double s = 0.0;
    for (int l = 0; l < 4; ++l) s += gv[j][l] * jlam[l];
    jlam_flat[j] = s;
  }

  double res = 0.0;
  for (int k = 0; k < 4; ++k)  // X = d_k
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double rhs = gv[k][j] * lam[i] + dtr[j] * (i == k ? 1.0 : 0.0);
        double jx_flat = 0.0;  // (J d_k)^b_j
        for (int l = 0; l < 4; ++l) jx_flat += gv[j][l] * jv[l][k];
        rhs += jx_flat * jlam[i] + jlam_flat[j] * jv[i][k];
        res = std::max(res, std::abs(nabla.t[i][j][k] - rhs));
      }
  return res;
}

double christtrafo_residual(const MetricJet& g, const MetricJet& ghat, const EndoJet& J) {
  const ChristoffelData gam = christoffel(g);
  const ChristoffelData gam_hat = christoffel(ghat);
  const RJet detg = mat_det(g.g);
  const RJet detgh = mat_det(ghat.g);
  if (detg.value() * detgh.value() <= 0.0)
    jet_fail("nonpositive determinant ratio between the metrics");

  // Phi = d phi, phi = ln(det ghat / det g)/12
  Vec4d phi{};
  for (int j = 0; j < 4; ++j)
    phi[j] = (derivative(detgh, j).value() / detgh.value() -
              derivative(detg, j).value() / detg.value()) /
             12.0;

  const Mat4d jv = values_of(J.a);
  double res = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        double rhs = phi[j] * (i == k ? 1.0 : 0.0) + phi[k] * (i == j ? 1.0 : 0.0);
        double pj = 0.0, pk = 0.0;  // Phi(J d_j), Phi(J d_k)
        for (int l = 0; l < 4; ++l) {
          pj += phi[l] * jv[l][j];
          pk += phi[l] * jv[l][k];
        }
        rhs -= pj * jv[i][k] + pk * jv[i][j];
        res = std::max(res,
                       std::abs(gam_hat.gamma[i][j][k].value() - gam.gamma[i][j][k].value() - rhs));
      }
  return res;
}

std::pair<double, double> lie_pair_residual(const MetricJet& g, const EndoJet& /*J*/,
                                            const EndoJet& A, const Vec4J& v,
                                            const LieConstants& k) {
  const Mat4d lg = values_of(lie_derivative_metric(v, g));
  const Mat4d la = values_of(lie_derivative_endo(v, A));
  const Mat4d gv = values_of(g.g);
  const Mat4d av = values_of(A.a);
  const Mat4d ga = metric_times_endo(gv, av);
  const double tra = av[0][0] + av[1][1] + av[2][2] + av[3][3];

  double rg = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double rhs = -k.delta * ga[i][j] - (0.5 * k.delta * tra + 3.0 * k.gamma) * gv[i][j];
      rg = std::max(rg, std::abs(lg[i][j] - rhs));
    }

  double ra = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double a2 = 0.0;
      for (int l = 0; l < 4; ++l) a2 += av[i][l] * av[l][j];
      const double rhs =
          -k.delta * a2 + (k.beta - k.gamma) * av[i][j] + k.alpha * (i == j ? 1.0 : 0.0);
      ra = std::max(ra, std::abs(la[i][j] - rhs));
    }
  return {rg, ra};
}

FitResult fit_lie_constants(const FamilySpec& spec, const std::vector<ChartPoint>& samples) {
  if (!family_has_v(spec.id))
    throw std::invalid_argument("general normal forms carry no c-projective vector field");
  if (samples.size() < 2) throw std::invalid_argument("need at least 2 samples");

  // stacked linear system in u = (alpha, beta, gamma, delta)
  double ata[4][4] = {};
  double atb[4] = {};
  struct Row {
    std::array<double, 4> a;
    double b;
  };
  std::vector<Row> rows;
  bool nonproportional = false;

  for (const ChartPoint& p : samples) {
    const StructureBundle bd = eval_structure(spec, p, 2);
    const Mat4d gv = values_of(bd.g.g);
    const Mat4d av = values_of(bd.A.a);
    const Mat4d lg = values_of(lie_derivative_metric(bd.v, bd.g));
    const Mat4d la = values_of(lie_derivative_endo(bd.v, bd.A));
    const Mat4d ga = metric_times_endo(gv, av);
    const double tra = av[0][0] + av[1][1] + av[2][2] + av[3][3];

    double dev = 0.0;  // |A - (tr A / 4) Id|
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        dev = std::max(dev, std::abs(av[i][j] - (i == j ? tra / 4.0 : 0.0)));
    if (dev > 1e-8) nonproportional = true;

    // L_v g + delta (gA + tr A g / 2) + 3 gamma g = 0
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j)
        rows.push_back({{0.0, 0.0, 3.0 * gv[i][j], ga[i][j] + 0.5 * tra * gv[i][j]},
                        -lg[i][j]});
    // alpha Id + beta A - gamma A - delta A^2 = L_v A
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double a2 = 0.0;
        for (int l = 0; l < 4; ++l) a2 += av[i][l] * av[l][j];
        rows.push_back({{i == j ? 1.0 : 0.0, av[i][j], -av[i][j], -a2}, la[i][j]});
      }
  }
  if (!nonproportional)
    throw std::invalid_argument("degenerate normal system: A proportional to Id at all samples");

  for (const Row& r : rows) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) ata[i][j] += r.a[size_t(i)] * r.a[size_t(j)];
      atb[i] += r.a[size_t(i)] * r.b;
    }
  }
  Mat4d n{}, ninv{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) n[i][j] = ata[i][j];
  double det = 0.0;
  if (!mat_inverse_det(n, ninv, det) || std::abs(det) < 1e-12)
    throw std::invalid_argument("degenerate normal system in the least-squares fit");
  double u[4] = {};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) u[i] += ninv[i][j] * atb[j];

  FitResult out;
  out.k = {u[0], u[1], u[2], u[3]};
  for (const Row& r : rows) {
    double s = -r.b;
    for (int i = 0; i < 4; ++i) s += r.a[size_t(i)] * u[i];
    out.consistency = std::max(out.consistency, std::abs(s));
  }
  return out;
}

EndoJet flow_solution_Av(const MetricJet& g, const EndoJet& /*J*/, const Vec4J& v) {
  const int order = metric_order(g) - 1;
  const Mat4J lg = lie_derivative_metric(v, g);
  Mat4J ginv = mat_inverse(g.g);
  Mat4J m = jet_zero_mat(order);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      RJet s = RJet::constant(0.0, order);
      for (int k = 0; k < 4; ++k) s = s + truncated(ginv[i][k], order) * lg[k][j];
      m[i][j] = s;
    }
  RJet tr = m[0][0] + m[1][1] + m[2][2] + m[3][3];
  EndoJet out;
  out.a = m;
  for (int i = 0; i < 4; ++i) out.a[i][i] = out.a[i][i] - tr / 6.0;
  return out;
}

std::pair<double, double> endo_class_residuals(const MetricJet& g, const EndoJet& J,
                                               const EndoJet& A) {
  const Mat4d gv = values_of(g.g);
  const Mat4d av = values_of(A.a);
  const Mat4d jv = values_of(J.a);
  const Mat4d ga = metric_times_endo(gv, av);
  double sym = 0.0, comm = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      sym = std::max(sym, std::abs(ga[i][j] - ga[j][i]));
      double aj = 0.0, ja = 0.0;
      for (int k = 0; k < 4; ++k) {
        aj += av[i][k] * jv[k][j];
        ja += jv[i][k] * av[k][j];
      }
      comm = std::max(comm, std::abs(aj - ja));
    }
  return {sym, comm};
}

std::vector<ChartPoint> sample_points(const FamilySpec& spec, int n, std::uint64_t seed) {
  spec.validate();
  const Box box = default_box(spec);
  SplitMix64 rng(seed);
  std::vector<ChartPoint> pts;
  pts.reserve(size_t(n));
  int rejections = 0;
  while (int(pts.size()) < n) {
    ChartPoint p;
    for (int i = 0; i < 4; ++i) p[i] = rng.uniform(box.iv[size_t(i)].first, box.iv[size_t(i)].second);
    if (in_domain(spec, p)) {
      pts.push_back(p);
      rejections = 0;
    } else if (++rejections > kMaxRejections) {
      throw std::runtime_error("sampling rejected 1000 points in a row: box misses the domain");
    }
  }
  return pts;
}

KillingPair killing_fields(const StructureBundle& b) {
  KillingPair kp{jet_zero_vec(1), jet_zero_vec(1), RJet::constant(0, 0), RJet::constant(0, 0)};
  auto [mu1, mu2] = symmetric_function_jets(b.A);
  kp.mu1 = mu1;
  kp.mu2 = mu2;
  kp.k1 = apply_endo(b.J, gradient(b.g, mu1));
  kp.k2 = apply_endo(b.J, gradient(b.g, mu2));
  return kp;
}

ResidualReport kahler_suite(const FamilySpec& spec, int n, std::uint64_t seed,
                            const Tolerances& tol) {
  const auto pts = sample_points(spec, n, seed);
  MaxAcc j2, herm, dw, nj, ng;
  parallel_for(n, [&](int i) {
    const StructureBundle b = eval_structure(spec, pts[size_t(i)], 2);
    j2.update(j_squared_residual(b.J));
    herm.update(hermiticity_residual(b.g, b.J));
    dw.update(max_abs(exterior_derivative(b.omega)));
    ng.update(nabla_g_residual(b.g));
    nj.update(nabla_endo_residual(b.J, b.g));
  });
  ResidualReport rep;
  rep.name = std::string("kahler/") + family_name(spec.id);
  rep.add("kahler", "J2+Id", n, seed, j2.v, tol.jet);
  rep.add("kahler", "hermiticity", n, seed, herm.v, tol.jet);
  rep.add("kahler", "domega", n, seed, dw.v, tol.jet);
  rep.add("kahler", "nabla_J", n, seed, nj.v, tol.jet);
  rep.add("kahler", "nabla_g", n, seed, ng.v, tol.jet);
  return rep;
}

ResidualReport metrisability_suite(const FamilySpec& spec, int n, std::uint64_t seed,
                                   const Tolerances& tol, double perturb) {
  const auto pts = sample_points(spec, n, seed);
  MaxAcc res, sym, comm;
  double min_perturbed = perturb > 0.0 ? 1e300 : 0.0;
  MaxAcc perturbed;
  std::mutex min_mu;
  parallel_for(n, [&](int i) {
    const ChartPoint& p = pts[size_t(i)];
    const StructureBundle b = eval_structure(spec, p, 2);
    res.update(main_equation_residual(b.g, b.J, b.A));
    const auto [s, c] = endo_class_residuals(b.g, b.J, b.A);
    sym.update(s);
    comm.update(c);
    if (perturb > 0.0) {
      // J-commuting g-symmetric perturbation direction x Id, normalized by its
      // own equation image so the injected size is measured in the same units
      // as the residual (the metrisability equation is linear in A)
      EndoJet dir;
      dir.a = jet_zero_mat(2);
      const RJet f = RJet::variable(p[0], 0, 2);
      for (int d = 0; d < 4; ++d) dir.a[d][d] = f;
      const double unit = main_equation_residual(b.g, b.J, dir);
      EndoJet ap = b.A;
      for (int d = 0; d < 4; ++d) ap.a[d][d] = ap.a[d][d] + (perturb / unit) * f;
      const double r = main_equation_residual(b.g, b.J, ap);
      perturbed.update(r);
      std::lock_guard<std::mutex> lock(min_mu);
      min_perturbed = std::min(min_perturbed, r);
    }
  });
  ResidualReport rep;
  rep.name = std::string("metrisability/") + family_name(spec.id);
  rep.add("metrisability", "main_equation", n, seed, res.v, tol.jet);
  rep.add("metrisability", "A_g_symmetry", n, seed, sym.v, tol.jet);
  rep.add("metrisability", "A_J_commutation", n, seed, comm.v, tol.jet);
  if (perturb > 0.0) {
    // the injected perturbation must be detected within a factor 10
    rep.add_control("metrisability", "perturbed_A_detected", n, seed, min_perturbed,
                    perturb / 10.0);
    rep.add("metrisability", "perturbed_A_bounded", n, seed, perturbed.v, perturb * 10.0,
            "negative control upper bound");
  }
  return rep;
}

ResidualReport lie_suite(const FamilySpec& spec, int n, std::uint64_t seed,
                         const Tolerances& tol) {
  const auto pts = sample_points(spec, n, seed);
  const LieConstants k = documented_lie_constants(spec);
  MaxAcc rg, ra, av_main, av_sym, av_comm;
  parallel_for(n, [&](int i) {
    const StructureBundle b = eval_structure(spec, pts[size_t(i)], 3);
    const auto [g_res, a_res] = lie_pair_residual(b.g, b.J, b.A, b.v, k);
    rg.update(g_res);
    ra.update(a_res);
    // flow-induced solution: A_v solves the metrisability equation
    const EndoJet av = flow_solution_Av(b.g, b.J, b.v);
    MetricJet g2 = b.g;
    for (auto& row : g2.g)
      for (auto& e : row) e = truncated(e, 2);
    EndoJet j2 = b.J;
    for (auto& row : j2.a)
      for (auto& e : row) e = truncated(e, 2);
    av_main.update(main_equation_residual(g2, j2, av));
    const auto [s, c] = endo_class_residuals(g2, j2, av);
    av_sym.update(s);
    av_comm.update(c);
  });
  ResidualReport rep;
  rep.name = std::string("lie/") + family_name(spec.id);
  rep.add("lie", "L_v_g", n, seed, rg.v, tol.jet);
  rep.add("lie", "L_v_A", n, seed, ra.v, tol.jet);
  rep.add("lie", "A_v_main_equation", n, seed, av_main.v, tol.jet);
  rep.add("lie", "A_v_g_symmetry", n, seed, av_sym.v, 1e-9);
  rep.add("lie", "A_v_J_commutation", n, seed, av_comm.v, 1e-9);
  // fitted constants must reproduce the documented normal form
  const auto fit = fit_lie_constants(spec, sample_points(spec, std::max(8, n / 8), seed ^ 0x5a5aULL));
  const double kerr = std::max({std::abs(fit.k.alpha - k.alpha), std::abs(fit.k.beta - k.beta),
                                std::abs(fit.k.gamma - k.gamma), std::abs(fit.k.delta - k.delta)});
  rep.add("lie", "fit_constants", std::max(8, n / 8), seed ^ 0x5a5aULL, kerr, 1e-7);
  rep.add("lie", "fit_consistency", std::max(8, n / 8), seed ^ 0x5a5aULL, fit.consistency, 1e-7);
  return rep;
}

ResidualReport christtrafo_suite(const FamilySpec& spec, int n, std::uint64_t seed,
                                 const Tolerances&) {
  const int pts_per_cell = std::max(2, n / 16);
  const auto pts = sample_points(spec, pts_per_cell, seed);

  // c-grid placed below every sampled eigenvalue (vertically shifted for the
  // degenerate families where c = 0 is excluded)
  double emin = 1e300;
  for (const auto& p : pts) {
    const EigenProfiles ev = eigen_profiles(spec, p);
    emin = std::min(emin, std::min(ev.rho.real(), ev.sigma.real()));
  }
  const std::array<double, 3> cs{emin - 0.5, emin - 1.0, emin - 1.5};
  const std::array<double, 3> Cs{0.5, 1.0, 2.0};

  MaxAcc res;
  for (double c : cs)
    for (double Cv : Cs) {
      FamilySpec s2 = spec;
      s2.comp_c = c;
      s2.comp_C = Cv;
      if (std::abs(c) < 0.05) s2.comp_c = c - 0.1;  // keep clear of the degenerate c = 0
      MaxAcc cell;
      parallel_for(int(pts.size()), [&](int i) {
        const StructureBundle b = eval_structure(s2, pts[size_t(i)], 2);
        const MetricJet gh = eval_ghat(s2, pts[size_t(i)], 2);
        cell.update(christtrafo_residual(b.g, gh, b.J));
      });
      res.update(cell.v);
    }

  // generic non-equivalent control: ghat = g + 0.1 ds (x) ds
  double control = 1e300;
  for (int i = 0; i < int(pts.size()); ++i) {
    const StructureBundle b = eval_structure(spec, pts[size_t(i)], 2);
    MetricJet gh = b.g;
    gh.g[2][2] = gh.g[2][2] + 0.1;
    control = std::min(control, christtrafo_residual(b.g, gh, b.J));
  }

  ResidualReport rep;
  rep.name = std::string("christtrafo/") + family_name(spec.id);
  rep.add("christtrafo", "ghat_grid_3x3", int(pts.size()) * 9, seed, res.v, 1e-7);
  rep.add_control("christtrafo", "non_equivalent_control", int(pts.size()), seed, control, 1e-3);
  return rep;
}

ResidualReport killing_suite(const FamilySpec& spec, int n, std::uint64_t seed,
                             const Tolerances& tol) {
  const auto pts = sample_points(spec, n, seed);
  const bool order_two = family_kind(spec.id) != FamilyKind::Degenerate;
  MaxAcc k1r, k2r, h1r, h2r;
  parallel_for(n, [&](int i) {
    const StructureBundle b = eval_structure(spec, pts[size_t(i)], 3);
    const KillingPair kp = killing_fields(b);
    MetricJet g2 = b.g;
    for (auto& row : g2.g)
      for (auto& e : row) e = truncated(e, 2);
    k1r.update(killing_residual(kp.k1, g2));
    h1r.update(hamiltonian_residual(values_of(kp.k1), kp.mu1, b.omega));
    if (order_two) {
      k2r.update(killing_residual(kp.k2, g2));
      h2r.update(hamiltonian_residual(values_of(kp.k2), kp.mu2, b.omega));
    }
  });
  ResidualReport rep;
  rep.name = std::string("killing/") + family_name(spec.id);
  rep.add("killing", "K1_killing", n, seed, k1r.v, tol.jet);
  rep.add("killing", "K1_hamiltonian", n, seed, h1r.v, tol.jet);
  if (order_two) {
    rep.add("killing", "K2_killing", n, seed, k2r.v, tol.jet);
    rep.add("killing", "K2_hamiltonian", n, seed, h2r.v, tol.jet);
  } else {
    rep.add("killing", "K2_skipped_constant_eigenvalue", 0, seed, 0.0, 1.0,
            "constant eigenvalue: sigma branch skipped");
  }
  return rep;
}

ResidualReport eigen_structure_checks(const FamilySpec& spec,
                                      const std::vector<ChartPoint>& samples, std::uint64_t seed,
                                      const Tolerances&) {
  const FamilyKind kind = family_kind(spec.id);
  MaxAcc grad_rho, grad_sigma, commute, ortho;
  parallel_for(int(samples.size()), [&](int idx) {
    const ChartPoint& p = samples[size_t(idx)];
    const StructureBundle b = eval_structure(spec, p, 3);
    const KillingPair kp = killing_fields(b);
    const Mat4d av = values_of(b.A.a);
    const Mat4d gv = values_of(b.g.g);
    const Mat4d ginv = mat_inverse(gv);

    // (a) gradients of the eigenvalues lie in the matching eigenspaces
    auto eigen_grad_residual = [&](const std::complex<double>& lambda,
                                   const Vec4<std::complex<double>>& grad) {
      double r = 0.0;
      for (int i = 0; i < 4; ++i) {
        std::complex<double> s = -lambda * grad[size_t(i)];
        for (int j = 0; j < 4; ++j) s += av[i][j] * grad[size_t(j)];
        r = std::max(r, std::abs(s));
      }
      return r;
    };
    if (kind == FamilyKind::Degenerate) {
      // nonconstant branch rho = mu1 - c0; sigma is constant, gradient zero
      const double c0 = (spec.id == FamilyId::GEN_D) ? spec.c0 : 0.0;
      const RJet rho_jet = kp.mu1 - c0;
      Vec4<std::complex<double>> grad{};
      const Vec4J gr = gradient(b.g, rho_jet);
      for (int i = 0; i < 4; ++i) grad[size_t(i)] = gr[size_t(i)].value();
      grad_rho.update(eigen_grad_residual(rho_jet.value(), grad));
    } else {
      // rho, sigma from the quadratic in complex arithmetic
      const CJet m1 = complexify(kp.mu1), m2 = complexify(kp.mu2);
      const CJet disc = m1 * m1 - 4.0 * m2;
      const CJet root = sqrt(disc);
      const CJet rj = 0.5 * (m1 - root);
      const CJet sj = 0.5 * (m1 + root);
      auto cgrad = [&](const CJet& f) {
        Vec4<std::complex<double>> g{};
        for (int i = 0; i < 4; ++i) {
          std::complex<double> s = 0.0;
          for (int j = 0; j < 4; ++j) s += ginv[i][j] * derivative(f, j).value();
          g[size_t(i)] = s;
        }
        return g;
      };
      grad_rho.update(eigen_grad_residual(rj.value(), cgrad(rj)));
      grad_sigma.update(eigen_grad_residual(sj.value(), cgrad(sj)));
    }

    // (b) commutators and (c) orthogonality of the canonical fields
    if (kind != FamilyKind::Degenerate) {
      Vec4J v1 = apply_endo(b.J, kp.k1), v2 = apply_endo(b.J, kp.k2);
      for (auto& e : v1) e = -e;
      for (auto& e : v2) e = -e;
      commute.update(max_abs(commutator_values(kp.k1, kp.k2)));
      commute.update(max_abs(commutator_values(kp.k1, v2)));
      commute.update(max_abs(commutator_values(v1, v2)));
      auto gdot = [&](const Vec4J& a, const Vec4J& bvec) {
        double s = 0.0;
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) s += gv[i][j] * a[size_t(i)].value() * bvec[size_t(j)].value();
        return s;
      };
      ortho.update(std::abs(gdot(v1, kp.k1)));
      ortho.update(std::abs(gdot(v1, kp.k2)));
      ortho.update(std::abs(gdot(v2, kp.k1)));
      ortho.update(std::abs(gdot(v2, kp.k2)));
    }
  });
  ResidualReport rep;
  rep.name = std::string("eigen/") + family_name(spec.id);
  const int n = int(samples.size());
  rep.add("eigen", "grad_rho_in_eigenspace", n, seed, grad_rho.v, 1e-7);
  if (kind != FamilyKind::Degenerate) {
    rep.add("eigen", "grad_sigma_in_eigenspace", n, seed, grad_sigma.v, 1e-7);
    rep.add("eigen", "commutators", n, seed, commute.v, 1e-7);
    rep.add("eigen", "D_JD_orthogonality", n, seed, ortho.v, 1e-7);
  } else {
    rep.add("eigen", "sigma_branch_skipped", 0, seed, 0.0, 1.0,
            "constant eigenvalue: sigma branch skipped");
  }
  return rep;
}

ResidualReport verify_family(const FamilySpec& spec, int n, std::uint64_t seed,
                             const Tolerances& tol, double perturb) {
  ResidualReport rep;
  rep.name = std::string("verify/") + family_name(spec.id);
  rep.merge(kahler_suite(spec, n, seed, tol));
  rep.merge(metrisability_suite(spec, n, seed, tol, perturb));
  rep.merge(christtrafo_suite(spec, n, seed, tol));
  if (family_has_v(spec.id)) rep.merge(lie_suite(spec, n, seed, tol));
  rep.merge(killing_suite(spec, n, seed, tol));
  rep.merge(eigen_structure_checks(spec, sample_points(spec, std::max(4, n / 8), seed ^ 0x77ULL),
                                   seed ^ 0x77ULL, tol));
  return rep;
}

}  // namespace cpv
