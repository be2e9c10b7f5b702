// Acceptance suite: every criterion runs at its pinned tolerance and prints
// one pass/fail line. Exit code 0 iff all criteria hold.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "cpv/dynamics.hpp"
#include "cpv/verifier.hpp"
#include "expr_gen.hpp"
#include "oracles.hpp"

using namespace cpv;

namespace {

int g_failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
  std::printf("[%2d] %-28s %s  (%s)\n", idx, name, pass ? "PASS" : "FAIL", detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3e", x);
  return buf;
}

FamilySpec spec_of(FamilyId id) {
  FamilySpec s;
  s.id = id;
  return s;
}

// seeded random degree-<=3 profiles for the general normal forms
FamilySpec general_spec(FamilyId id, SplitMix64& rng) {
  FamilySpec s = spec_of(id);
  auto small = [&](double amp) { return amp * (2.0 * rng.next_double() - 1.0); };
  if (id == FamilyId::GEN_L) {
    s.rho_poly = {small(0.2), 1.0 + small(0.2), small(0.15), small(0.1)};
    s.sigma_poly = {3.0 + small(0.3), 1.0 + small(0.2), small(0.15), small(0.1)};
  } else if (id == FamilyId::GEN_CL) {
    s.rho_cpoly = {{small(0.2), small(0.1)},
                   {1.0 + small(0.15), small(0.1)},
                   {small(0.1), small(0.1)},
                   {small(0.05), small(0.05)}};
  } else {
    s.rho_poly = {0.3 + 0.2 * rng.next_double(), 1.0 + small(0.2), small(0.1),
                  0.05 * rng.next_double()};
    s.gfun_poly = {2.0 + rng.next_double(), small(0.4), 0.5 + rng.next_double()};
  }
  return s;
}

ChartPoint box_center(const FamilySpec& s) {
  const Box box = default_box(s);
  ChartPoint p;
  for (int i = 0; i < 4; ++i) p[i] = 0.5 * (box.iv[size_t(i)].first + box.iv[size_t(i)].second);
  return p;
}

std::vector<FamilySpec> catalog_with_general(std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<FamilySpec> specs;
  for (FamilyId id : named_families()) specs.push_back(spec_of(id));
  for (FamilyId id : {FamilyId::GEN_L, FamilyId::GEN_CL, FamilyId::GEN_D})
    specs.push_back(general_spec(id, rng));
  return specs;
}

void criterion_1_kahler() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::string worst_at;
  for (const FamilySpec& s : catalog_with_general(2026)) {
    const ResidualReport rep = kahler_suite(s, 100, 7);
    for (const auto& c : rep.checks)
      if (c.max_residual > worst) {
        worst = c.max_residual;
        worst_at = std::string(family_name(s.id)) + "/" + c.check;
      }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool pass = worst < 1e-8 && secs < 30.0;
  report(1, "kahler-converse", pass,
         "max " + fmt(worst) + " at " + worst_at + ", " + fmt(secs) + " s");
}

void criterion_2_metrisability() {
  double worst = 0.0;
  double ctrl_lo = 1e300, ctrl_hi = 0.0;
  for (const FamilySpec& s : catalog_with_general(2027)) {
    const ResidualReport rep = metrisability_suite(s, 100, 11, {}, 1e-3);
    for (const auto& c : rep.checks) {
      if (c.check == "main_equation") worst = std::max(worst, c.max_residual);
      if (c.check == "perturbed_A_detected") ctrl_lo = std::min(ctrl_lo, c.max_residual);
      if (c.check == "perturbed_A_bounded") ctrl_hi = std::max(ctrl_hi, c.max_residual);
    }
  }
  const bool pass = worst < 1e-8 && ctrl_lo > 1e-4 && ctrl_hi < 1e-2;
  report(2, "metrisability", pass,
         "max " + fmt(worst) + ", control in [" + fmt(ctrl_lo) + ", " + fmt(ctrl_hi) + "]");
}

void criterion_3_christtrafo() {
  double worst = 0.0, ctrl = 1e300;
  for (const FamilySpec& s : catalog_with_general(2028)) {
    const ResidualReport rep = christtrafo_suite(s, 32, 13);
    for (const auto& c : rep.checks) {
      if (c.check == "ghat_grid_3x3") worst = std::max(worst, c.max_residual);
      if (c.check == "non_equivalent_control") ctrl = std::min(ctrl, c.max_residual);
    }
  }
  const bool pass = worst < 1e-7 && ctrl > 1e-3;
  report(3, "companion-equivalence", pass, "max " + fmt(worst) + ", control " + fmt(ctrl));
}

void criterion_4_lie() {
  double worst = 0.0;
  for (FamilyId id : {FamilyId::L1, FamilyId::L2, FamilyId::L3, FamilyId::L4, FamilyId::CL1,
                      FamilyId::CL2, FamilyId::CL3, FamilyId::CL4}) {
    FamilySpec s = spec_of(id);
    if (id == FamilyId::L2 || id == FamilyId::CL2) s.beta = -0.4;
    if (id == FamilyId::L4 || id == FamilyId::CL4) s.beta = 0.6;
    const LieConstants k = documented_lie_constants(s);
    for (const ChartPoint& p : sample_points(s, 100, 17)) {
      const StructureBundle b = eval_structure(s, p, 2);
      const auto [rg, ra] = lie_pair_residual(b.g, b.J, b.A, b.v, k);
      worst = std::max(worst, std::max(rg, ra));
    }
  }

  struct Want {
    FamilyId id;
    double beta;
    LieConstants k;
  };
  double fit_err = 0.0, fit_cons = 0.0;
  for (const Want w : {Want{FamilyId::D1, 0.0, {0.0, 0.0, 0.0, 1.0}},
                       Want{FamilyId::D3, 0.0, {0.0, 1.0, 1.0, 1.0}},
                       Want{FamilyId::D2, -0.7, {0.0, -0.7, 1.0, 0.0}},
                       Want{FamilyId::D2, -2.0, {0.0, -2.0, 1.0, 0.0}}}) {
    FamilySpec s = spec_of(w.id);
    s.beta = w.beta;
    const FitResult fit = fit_lie_constants(s, sample_points(s, 40, 19));
    fit_err = std::max({fit_err, std::abs(fit.k.alpha - w.k.alpha),
                        std::abs(fit.k.beta - w.k.beta), std::abs(fit.k.gamma - w.k.gamma),
                        std::abs(fit.k.delta - w.k.delta)});
    fit_cons = std::max(fit_cons, fit.consistency);
  }
  const bool pass = worst < 1e-8 && fit_err < 1e-7 && fit_cons < 1e-7;
  report(4, "lie-system-constants", pass,
         "pair " + fmt(worst) + ", fit err " + fmt(fit_err) + ", consistency " + fmt(fit_cons));
}

void criterion_5_scal_constants() {
  const auto taus = tau_grid(-2.0, 2.0, 81);
  double worst = 0.0;
  auto check_const = [&](const FamilySpec& s, const ChartPoint& p0, double expect) {
    const ScalCurve sc = scal_along_flow(s, p0, taus);
    for (double v : sc.scal)
      worst = std::max(worst, std::abs(v - expect) / std::max(1.0, std::abs(expect)));
  };

  FamilySpec a = spec_of(FamilyId::L2);  // beta 0, c1^2 d2^2 = c2^2 d1^2
  a.beta = 0.0; a.c1 = 1.0; a.c2 = 2.0; a.d1 = 1.0; a.d2 = 2.0; a.eps = -1; a.comp_c = 0.3;
  check_const(a, ChartPoint{{0, 0, 0, 0}}, -6.0);

  FamilySpec b = spec_of(FamilyId::L2);  // beta -1/2, c1 d2^2 = c2 d1^2
  b.beta = -0.5; b.c1 = 1.0; b.c2 = 4.0; b.d1 = 1.0; b.d2 = 2.0; b.eps = -1; b.comp_c = 0.3;
  check_const(b, ChartPoint{{0, 0, 0, 0}}, -27.0 * 1.0 * 0.3 / 2.0);

  FamilySpec c = spec_of(FamilyId::L2);  // beta -2, d1^2 = d2^2
  c.beta = -2.0; c.c1 = 1.0; c.c2 = 2.0; c.d1 = 1.5; c.d2 = 1.5; c.eps = -1; c.comp_c = -0.4;
  check_const(c, ChartPoint{{0, 0, 0, 0}}, -54.0 * 0.16 / 2.25);

  FamilySpec d = spec_of(FamilyId::D2);  // beta -2, d1^2 G'' = 18
  d.beta = -2.0; d.c1 = 1.0; d.d1 = 1.0; d.gfun_poly = {1.0, 1.0, 9.0}; d.comp_c = 0.5;
  check_const(d, ChartPoint{{0, 0, 0, 0.25}}, 54.0 * 0.25);

  report(5, "scal-constants", worst < 1e-6, "max relative deviation " + fmt(worst));
}

void criterion_6_closed_form() {
  // the frozen coefficient tables carry the printed constants; re-transcribe
  // them here independently and compare evaluator output at random parameters
  SplitMix64 rng(31415);
  double worst = 0.0;
  const auto taus = tau_grid(-2.0, 2.0, 41);

  for (int draw = 0; draw < 20; ++draw) {
    FamilySpec s = spec_of(FamilyId::L2);
    s.eps = -1;
    do {
      s.beta = rng.uniform(-2.5, 2.5);
    } while (std::abs(s.beta - 1.0) < 0.2);
    s.c1 = rng.uniform(0.5, 2.0);
    s.c2 = s.c1 + rng.uniform(0.5, 1.5);
    s.d1 = rng.uniform(0.7, 2.0);
    s.d2 = rng.uniform(0.7, 2.0);
    s.comp_c = rng.uniform(-2.5, -0.5);
    const ScalCurve num = scal_along_flow(s, ChartPoint{{0, 0, 0, 0}}, taus);
    const ScalCurve cf = scal_closed_form(s, taus);
    for (size_t i = 0; i < taus.size(); ++i)
      worst = std::max(worst, std::abs(num.scal[i] - cf.scal[i]) /
                                  std::max(1.0, std::abs(cf.scal[i])));
  }
  for (int draw = 0; draw < 20; ++draw) {
    FamilySpec s = spec_of(FamilyId::D2);
    s.beta = (draw % 4 == 0) ? -2.0 : rng.uniform(-2.5, 0.7);
    s.c1 = rng.uniform(0.5, 2.0);
    s.d1 = rng.uniform(0.7, 2.0);
    s.gfun_poly = {2.0 + rng.next_double(), 0.4 * (2 * rng.next_double() - 1),
                   0.5 + rng.next_double()};
    s.comp_c = rng.uniform(-2.5, -0.3);
    const double u2 = rng.uniform(-0.5, 0.5);
    const ScalCurve num = scal_along_flow(s, ChartPoint{{0, 0, 0, u2}}, taus);
    const ScalCurve cf = scal_closed_form(s, taus, u2);
    for (size_t i = 0; i < taus.size(); ++i)
      worst = std::max(worst, std::abs(num.scal[i] - cf.scal[i]) /
                                  std::max(1.0, std::abs(cf.scal[i])));
  }

  // verbatim re-transcription of the printed tables, compared per monomial
  double table_err = 0.0;
  {
    SplitMix64 prng(999);
    for (int rep = 0; rep < 50; ++rep) {
      const double b = prng.uniform(-3, 3), c1 = prng.uniform(0.5, 3), c2 = prng.uniform(0.5, 3);
      const double d1s = prng.uniform(0.5, 3), d2s = prng.uniform(0.5, 3);
      const double C0 = 2 * b * (b + 0.5) * (d1s - d2s);
      const double C1 =
          6 * (c2 * d2s - c1 * d1s) * (b + 0.5) * b + 4 * (c1 * d2s - c2 * d1s) * (b + 2) * b;
      const double C2 = 6 * (c1 * c1 * d1s - c2 * c2 * d2s) * (b + 0.5) * b +
                        2 * (c2 * c2 * d1s - c1 * c1 * d2s) * (1 + 7 * b + b * b) +
                        12 * c1 * c2 * (d1s - d2s) * (b + 2) * b;
      const double C3 = 2 * (std::pow(c2, 3) * d2s - std::pow(c1, 3) * d1s) * (b + 0.5) * b +
                        8 * (std::pow(c1, 3) * d2s - std::pow(c2, 3) * d1s) * (b + 0.5) +
                        6 * c1 * c2 * (c1 * d2s - c2 * d1s) * (1 + 7 * b + b * b) +
                        12 * c1 * c2 * (c2 * d2s - c1 * d1s) * (b + 2) * b;
      const double C4 = (std::pow(c2, 4) * d1s - std::pow(c1, 4) * d2s) * (b + 2) +
                        4 * c1 * c2 * (c1 * c1 * d1s - c2 * c2 * d2s) * (b + 2) * b +
                        6 * c1 * c1 * c2 * c2 * (d1s - d2s) * (1 + 7 * b + b * b) +
                        24 * c1 * c2 * (c2 * c2 * d1s - c1 * c1 * d2s) * (b + 0.5);
      const double C5 = 3 * c1 * c2 * (std::pow(c1, 3) * d2s - std::pow(c2, 3) * d1s) * (b + 2) +
                        24 * c1 * c1 * c2 * c2 * (c1 * d2s - c2 * d1s) * (b + 0.5) +
                        2 * c1 * c1 * c2 * c2 * (c2 * d2s - c1 * d1s) * (1 + 7 * b + b * b);
      const double C6 = 3 * c1 * c1 * c2 * c2 * (c2 * c2 * d1s - c1 * c1 * d2s) * (b + 2) +
                        8 * std::pow(c1 * c2, 3) * (d1s - d2s) * (b + 0.5);
      const double C7 = std::pow(c1 * c2, 3) * (c1 * d2s - c2 * d1s) * (b + 2);
      const double D0 = 1, D1 = -2 * (c1 + c2), D2 = 2 * c1 * c2 + (c1 + c2) * (c1 + c2);
      const double D3 = -2 * c1 * c2 * (c1 + c2), D4 = c1 * c1 * c2 * c2;

      // evaluate the shipped closed form at one (tau, c) and compare against
      // this re-transcription assembled term by term
      FamilySpec s = spec_of(FamilyId::L2);
      s.eps = -1;
      s.beta = b;
      s.c1 = c1;
      s.c2 = c2;
      s.d1 = std::sqrt(d1s);
      s.d2 = std::sqrt(d2s);
      s.comp_c = prng.uniform(-4, 4);
      const double tau = prng.uniform(-1, 1);
      const double u = std::exp((b - 1) * tau);
      const double cc = s.comp_c;
      const double num = C0 * std::pow(cc, 7) + C1 * std::pow(cc, 6) * u +
                         C2 * std::pow(cc, 5) * u * u + C3 * std::pow(cc, 4) * std::pow(u, 3) +
                         C4 * std::pow(cc, 3) * std::pow(u, 4) +
                         C5 * std::pow(cc, 2) * std::pow(u, 5) + C6 * cc * std::pow(u, 6) +
                         C7 * std::pow(u, 7);
      const double den = D0 * std::pow(cc, 4) + D1 * std::pow(cc, 3) * u +
                         D2 * cc * cc * u * u + D3 * cc * std::pow(u, 3) + D4 * std::pow(u, 4);
      if (std::abs(den) < 1e-6 || c1 == c2) continue;
      const double expect =
          3.0 * std::exp(3 * tau) / (d1s * d2s * (c1 - c2)) * num / den;
      const double got = scal_closed_form(s, {tau, tau + 1}, 0.0).scal[0];
      table_err = std::max(table_err,
                           std::abs(got - expect) / std::max(1.0, std::abs(expect)));
    }
  }
  const bool pass = worst < 1e-6 && table_err < 1e-10;
  report(6, "closed-form-agreement", pass,
         "flow diff " + fmt(worst) + ", table re-transcription " + fmt(table_err));
}

void criterion_7_eigen_dynamics() {
  struct Win {
    FamilyId id;
    double a, b;
  };
  double worst = 0.0;
  for (const Win w : {Win{FamilyId::L1, -1, 1}, {FamilyId::L2, -1, 1}, {FamilyId::L3, -1, 1},
                      {FamilyId::L4, -0.45, 0.45}, {FamilyId::CL1, -1, 1}, {FamilyId::CL2, -1, 1},
                      {FamilyId::CL3, -1, 1}, {FamilyId::CL4, -0.35, 0.35},
                      {FamilyId::D1, -0.3, 1.5}, {FamilyId::D2, -1, 1}, {FamilyId::D3, -0.3, 1.5}}) {
    FamilySpec s = spec_of(w.id);
    const EigenFlow ef = eigen_along_flow(s, box_center(s), tau_grid(w.a, w.b, 201));
    worst = std::max(worst, ef.ode_residual);
  }

  // L4 eigenvalue equals -tan(x0 + tau)
  FamilySpec l4 = spec_of(FamilyId::L4);
  const ChartPoint p0 = box_center(l4);
  const auto taus = tau_grid(-0.4, 0.4, 81);
  const EigenFlow ef = eigen_along_flow(l4, p0, taus);
  double tan_err = 0.0;
  for (size_t i = 0; i < taus.size(); ++i) {
    const double er = -std::tan(p0[0] + taus[i]);
    const double es = -std::tan(p0[1] + taus[i]);
    tan_err = std::max(tan_err, std::abs(ef.rho[i].real() - std::min(er, es)));
    tan_err = std::max(tan_err, std::abs(ef.sigma[i].real() - std::max(er, es)));
  }

  FamilySpec l2 = spec_of(FamilyId::L2);
  l2.beta = 0.4;
  const double tanh_l2 = tanh_template_residual(l2, box_center(l2), tau_grid(-1.5, 1.5, 101));
  FamilySpec d2 = spec_of(FamilyId::D2);
  d2.beta = -0.6;
  const double tanh_d2 = tanh_template_residual(d2, box_center(d2), tau_grid(-1.0, 1.0, 101));

  const bool pass = worst < 1e-6 && tan_err < 1e-8 && std::max(tanh_l2, tanh_d2) < 1e-6;
  report(7, "eigenvalue-dynamics", pass,
         "ode " + fmt(worst) + ", tan " + fmt(tan_err) + ", tanh " +
             fmt(std::max(tanh_l2, tanh_d2)));
}

void criterion_8_jplanar() {
  double worst_invariance = 0.0, min_geodesic_defect = 1e300, min_control = 1e300;
  for (FamilyId id : {FamilyId::L4, FamilyId::D3}) {
    FamilySpec s = spec_of(id);
    const ChartPoint p0 = box_center(s);
    const Vec4d v0{id == FamilyId::D3 ? 0.1 : 0.4, 0.3, 0.5, -0.2};
    const Curve geo = geodesic(s, p0, v0, id == FamilyId::D3 ? 0.18 : 0.35, 128);
    const double h = geo.samples[1].t - geo.samples[0].t;
    for (double tau : {0.3, 0.7}) {
      std::vector<ChartPoint> image;
      for (const CurveSample& cs : geo.samples) image.push_back(flow_point(s, cs.p, tau, 64));
      Curve pushed;
      for (size_t i = 2; i + 2 < image.size(); ++i) {
        CurveSample cs;
        cs.t = geo.samples[i].t;
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
      worst_invariance = std::max(worst_invariance, jplanar_residual(pushed, s));
      min_geodesic_defect = std::min(min_geodesic_defect, geodesic_residual(pushed, s));
    }
    const Curve control = offplane_control_curve(s, p0, v0, id == FamilyId::D3 ? 0.18 : 0.3,
                                                 64, 0.1);
    min_control = std::min(min_control, jplanar_residual(control, s));
  }
  const bool pass = worst_invariance < 1e-4 && min_geodesic_defect > 1e-2 && min_control > 1e-2;
  report(8, "jplanar-flow-invariance", pass,
         "image " + fmt(worst_invariance) + ", geodesic defect " + fmt(min_geodesic_defect) +
             ", control " + fmt(min_control));
}

void criterion_9_killing() {
  double killing = 0.0, structure = 0.0;
  for (FamilyId id : {FamilyId::L1, FamilyId::L2, FamilyId::L3, FamilyId::L4, FamilyId::CL1,
                      FamilyId::CL2, FamilyId::CL3, FamilyId::CL4, FamilyId::GEN_L,
                      FamilyId::GEN_CL}) {
    SplitMix64 rng(404 + int(id));
    FamilySpec s = family_is_general(id) ? general_spec(id, rng) : spec_of(id);
    const ResidualReport kr = killing_suite(s, 25, 23);
    for (const auto& c : kr.checks)
      if (c.check == "K1_killing" || c.check == "K2_killing")
        killing = std::max(killing, c.max_residual);
    const ResidualReport er = eigen_structure_checks(s, sample_points(s, 25, 29), 29);
    for (const auto& c : er.checks)
      if (c.check == "commutators" || c.check == "D_JD_orthogonality")
        structure = std::max(structure, c.max_residual);
  }
  const bool pass = killing < 1e-8 && structure < 1e-7;
  report(9, "killing-structure", pass,
         "killing " + fmt(killing) + ", commutators/orthogonality " + fmt(structure));
}

void criterion_10_ad_core() {
  std::mt19937_64 rng(60221023);
  std::uniform_real_distribution<double> pt(-0.8, 0.8);
  double worst = 0.0;
  int n_expr = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const auto tree = exprgen::random_tree(rng, 3);
    const std::array<double, 4> x{pt(rng), pt(rng), pt(rng), pt(rng)};
    const auto seeds = seed_coordinates(x, 2);
    const RJet jet = exprgen::eval_jet(*tree, seeds);
    auto f = [&](const std::array<double, 4>& p) { return exprgen::eval_d(*tree, p); };
    worst = std::max(worst, std::abs(jet.value() - f(x)));
    for (int d = 0; d < 4; ++d) {
      std::array<int, 4> a{};
      a[size_t(d)] = 1;
      const double fd = oracle::fd_first(f, x, d);
      const double jc = jet.coeff(a[0], a[1], a[2], a[3]);
      worst = std::max(worst, std::abs(jc - fd) / std::max(1.0, std::abs(jc)));
      const double fd2 = oracle::fd_second(f, x, d);
      a[size_t(d)] = 2;
      const double jc2 = 2.0 * jet.coeff(a[0], a[1], a[2], a[3]);
      worst = std::max(worst, std::abs(jc2 - fd2) / std::max(1.0, std::abs(jc2)));
    }
    // one mixed second derivative per expression
    const int d1 = rep % 4, d2 = (rep / 4) % 4;
    if (d1 != d2) {
      std::array<int, 4> a{};
      a[size_t(d1)] += 1;
      a[size_t(d2)] += 1;
      const double fd = oracle::fd_mixed(f, x, d1, d2);
      const double jc = jet.coeff(a[0], a[1], a[2], a[3]);
      worst = std::max(worst, std::abs(jc - fd) / std::max(1.0, std::abs(jc)));
    }
    ++n_expr;
  }

  // polynomial cases are exact against the symbolic oracle
  std::mt19937_64 prng(77);
  std::uniform_real_distribution<double> base(-1.2, 1.2);
  double poly_err = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto p = oracle::random_poly(prng, 3);
    const std::array<double, 4> x{base(prng), base(prng), base(prng), base(prng)};
    const auto seeds = seed_coordinates(x, 3);
    RJet jet = RJet::constant(0.0, 3);
    for (const auto& [a, v] : p.c) {
      RJet t = RJet::constant(v, 3);
      for (int d = 0; d < 4; ++d)
        for (int k = 0; k < a[size_t(d)]; ++k) t = t * seeds[size_t(d)];
      jet = jet + t;
    }
    for (int i0 = 0; i0 <= 3; ++i0)
      for (int i1 = 0; i1 + i0 <= 3; ++i1)
        for (int i2 = 0; i2 + i1 + i0 <= 3; ++i2)
          for (int i3 = 0; i3 + i2 + i1 + i0 <= 3; ++i3) {
            const double expect = p.taylor_coeff(x, {i0, i1, i2, i3});
            poly_err = std::max(poly_err, std::abs(jet.coeff(i0, i1, i2, i3) - expect) /
                                              std::max(1.0, std::abs(expect)));
          }
  }
  const bool pass = worst < 1e-6 && poly_err < 1e-12 && n_expr == 1000;
  report(10, "ad-core", pass,
         "fd deviation " + fmt(worst) + " over 1000 expressions, polynomial " + fmt(poly_err));
}

}  // namespace

int main() {
  std::printf("acceptance suite (tolerances pinned in code)\n");
  const auto t0 = std::chrono::steady_clock::now();
  criterion_1_kahler();
  criterion_2_metrisability();
  criterion_3_christtrafo();
  criterion_4_lie();
  criterion_5_scal_constants();
  criterion_6_closed_form();
  criterion_7_eigen_dynamics();
  criterion_8_jplanar();
  criterion_9_killing();
  criterion_10_ad_core();
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s (%d/10 criteria, %.1f s)\n", g_failures == 0 ? "ALL PASS" : "FAILURES",
              10 - g_failures, secs);
  return g_failures == 0 ? 0 : 1;
}
