#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "cpv/families.hpp"
#include "cpv/verifier.hpp"
#include "oracles.hpp"

using namespace cpv;

namespace {

FamilySpec spec_of(FamilyId id) {
  FamilySpec s;
  s.id = id;
  return s;
}

ChartPoint some_point(const FamilySpec& s, std::uint64_t seed = 11) {
  return sample_points(s, 1, seed)[0];
}

}  // namespace

TEST_CASE("L1 catalog values") {
  FamilySpec s = spec_of(FamilyId::L1);
  s.c1 = s.c2 = 1.0;
  const ChartPoint p{{2.0, 1.0, 0.0, 0.0}};
  const StructureBundle b = eval_structure(s, p, 2);

  RJet tr = RJet::constant(0.0, 2);
  for (int i = 0; i < 4; ++i) tr = tr + b.A.a[i][i];
  CHECK(tr.value() == doctest::Approx(6.0));  // 2 (rho + sigma) = 2 (x + y)

  const Vec4d v = values_of(b.v);
  CHECK(v[0] == 1.0);
  CHECK(v[1] == 1.0);
  CHECK(v[2] == 0.0);  // -t at t = 0
  CHECK(v[3] == 0.0);

  // K1 = d_s and K2 = d_t in these coordinates
  const KillingPair kp = killing_fields(b);
  CHECK(kp.k1[0].value() == doctest::Approx(0.0));
  CHECK(kp.k1[1].value() == doctest::Approx(0.0));
  CHECK(kp.k1[2].value() == doctest::Approx(1.0));
  CHECK(kp.k1[3].value() == doctest::Approx(0.0));
  CHECK(kp.k2[2].value() == doctest::Approx(0.0));
  CHECK(kp.k2[3].value() == doctest::Approx(1.0));
}

TEST_CASE("L2 profile value") {
  FamilySpec s = spec_of(FamilyId::L2);
  s.beta = 0.0;
  s.c1 = 1.0;
  const EigenProfiles ev = eigen_profiles(s, ChartPoint{{0.0, -0.5, 0.0, 0.0}});
  CHECK(ev.rho.real() == doctest::Approx(1.0));  // c1 e^{-x} at x = 0
  CHECK(ev.rho.imag() == 0.0);
}

TEST_CASE("D2 with beta = -2 vector field ordering") {
  FamilySpec s = spec_of(FamilyId::D2);
  s.beta = -2.0;
  const Vec4d v = v_values(s, ChartPoint{{1.0, 0.0, 0.0, 3.0}});
  CHECK(v[0] == 1.0);
  CHECK(v[1] == 3.0);  // u2 d_t
  CHECK(v[2] == 1.0);
  CHECK(v[3] == 0.0);
}

TEST_CASE("every family passes the Kahler residuals at sampled points") {
  for (FamilyId id : all_families()) {
    CAPTURE(family_name(id));
    FamilySpec s = spec_of(id);
    for (const ChartPoint& p : sample_points(s, 5, 99)) {
      const StructureBundle b = eval_structure(s, p, 2);
      CHECK(j_squared_residual(b.J) < 1e-9);
      CHECK(hermiticity_residual(b.g, b.J) < 1e-9);
      CHECK(max_abs(exterior_derivative(b.omega)) < 1e-9);
      CHECK(nabla_g_residual(b.g) < 1e-9);
      CHECK(nabla_endo_residual(b.J, b.g) < 1e-8);
      const auto [sym, comm] = endo_class_residuals(b.g, b.J, b.A);
      CHECK(sym < 1e-9);
      CHECK(comm < 1e-9);
    }
  }
}

TEST_CASE("metric compatibility cross-checked by finite differences") {
  // jet-path nabla g is exact; the FD route carries truncation error
  for (FamilyId id : {FamilyId::L1, FamilyId::CL2, FamilyId::D1}) {
    CAPTURE(family_name(id));
    FamilySpec s = spec_of(id);
    const ChartPoint p = some_point(s, 7);
    const StructureBundle b = eval_structure(s, p, 2);
    const ChristoffelData cd = christoffel(b.g);
    auto gfun = [&](const std::array<double, 4>& q) {
      return values_of(eval_structure(s, ChartPoint{q}, 0).g.g);
    };
    double worst = 0.0;
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          const double dg = oracle::fd_first(
              [&](const std::array<double, 4>& q) { return gfun(q)[i][j]; }, p.x, k, 5e-3);
          double contraction = 0.0;
          for (int l = 0; l < 4; ++l)
            contraction += cd.gamma[l][k][i].value() * b.g.g[l][j].value() +
                           cd.gamma[l][k][j].value() * b.g.g[i][l].value();
          worst = std::max(worst, std::abs(dg - contraction));
        }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("curvature symmetries hold on every family") {
  for (FamilyId id : all_families()) {
    CAPTURE(family_name(id));
    FamilySpec s = spec_of(id);
    for (const ChartPoint& p : sample_points(s, 3, 77)) {
      const StructureBundle b = eval_structure(s, p, 2);
      CHECK(curvature_symmetry_residual(b.g) < 1e-8);
    }
  }
}

TEST_CASE("complex-Liouville assembly is real") {
  for (FamilyId id : {FamilyId::CL1, FamilyId::CL2, FamilyId::CL3, FamilyId::CL4, FamilyId::GEN_CL}) {
    CAPTURE(family_name(id));
    FamilySpec s = spec_of(id);
    const StructureBundle b = eval_structure(s, some_point(s), 2);
    CHECK(b.imag_residue < 1e-10);
  }
}

TEST_CASE("split signature for complex-Liouville families") {
  FamilySpec s = spec_of(FamilyId::CL1);
  const StructureBundle b = eval_structure(s, some_point(s), 1);
  CHECK(b.g.plus == 2);
  CHECK(b.g.minus == 2);
}

TEST_CASE("classify_point") {
  Mat4d id{};
  for (int i = 0; i < 4; ++i) id[i][i] = 1.0;
  const auto c0 = classify_point(id);
  CHECK(c0.type == EigenType::SingleEigenvalue);
  CHECK(c0.rho.real() == doctest::Approx(1.0));

  // L1 at (2,1,.,.) splits into (1, 2)
  FamilySpec s = spec_of(FamilyId::L1);
  s.c1 = s.c2 = 1.0;
  const StructureBundle b = eval_structure(s, ChartPoint{{2.0, 1.0, 0.3, -0.4}}, 1);
  const auto c1 = classify_point(values_of(b.A.a));
  CHECK(c1.type == EigenType::RealSplit);
  CHECK(c1.rho.real() == doctest::Approx(1.0));
  CHECK(c1.sigma.real() == doctest::Approx(2.0));

  // CL1 at z = i has eigenvalues (i, -i), positive imaginary part first
  FamilySpec cs = spec_of(FamilyId::CL1);
  const StructureBundle cb = eval_structure(cs, ChartPoint{{0.0, 1.0, 0.0, 0.0}}, 1);
  const auto c2 = classify_point(values_of(cb.A.a));
  CHECK(c2.type == EigenType::ComplexPair);
  CHECK(c2.rho.real() == doctest::Approx(0.0));
  CHECK(c2.rho.imag() == doctest::Approx(1.0));
  CHECK(c2.sigma.imag() == doctest::Approx(-1.0));
}

TEST_CASE("symmetric functions") {
  Mat4d a{};
  a[0][0] = 2.0;
  a[1][1] = 3.0;
  a[2][2] = 2.0;
  a[3][3] = 3.0;
  const auto [m1, m2] = symmetric_functions(a);
  CHECK(m1 == doctest::Approx(5.0));
  CHECK(m2 == doctest::Approx(6.0));

  // L2 family: mu1 = c1 e^{(beta-1)x} + c2 e^{(beta-1)y}
  FamilySpec s = spec_of(FamilyId::L2);
  s.beta = 0.5;
  const ChartPoint p{{0.4, -0.6, 0.2, 0.1}};
  const StructureBundle b = eval_structure(s, p, 1);
  const auto [mu1, mu2] = symmetric_functions(values_of(b.A.a));
  const double expect =
      s.c1 * std::exp((s.beta - 1) * p[0]) + s.c2 * std::exp((s.beta - 1) * p[1]);
  CHECK(mu1 == doctest::Approx(expect).epsilon(1e-12));
  CHECK(mu2 == doctest::Approx(s.c1 * std::exp((s.beta - 1) * p[0]) * s.c2 *
                               std::exp((s.beta - 1) * p[1]))
                   .epsilon(1e-12));

  // construct-then-read on canonical blocks: A = diag(A', A'), g = diag(g', g')
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  for (int rep = 0; rep < 20; ++rep) {
    const double rho = val(rng), sigma = rho + 1.5 + std::abs(val(rng));
    Mat4d m{};
    m[0][0] = rho;
    m[1][1] = sigma;
    m[2][2] = rho;
    m[3][3] = sigma;
    const auto [p1, p2] = symmetric_functions(m);
    CHECK(p1 == doctest::Approx(rho + sigma).epsilon(1e-12));
    CHECK(p2 == doctest::Approx(rho * sigma).epsilon(1e-12));
    const auto cl = classify_point(m);
    CHECK(cl.type == EigenType::RealSplit);
    CHECK(cl.rho.real() == doctest::Approx(std::min(rho, sigma)));
    CHECK(cl.sigma.real() == doctest::Approx(std::max(rho, sigma)));
  }

  // a matrix whose characteristic polynomial is not a perfect square
  Mat4d bad{};
  bad[0][0] = 1.0;
  bad[1][1] = 2.0;
  bad[2][2] = 3.0;
  bad[3][3] = 4.0;
  CHECK_THROWS((void)symmetric_functions(bad));
}

TEST_CASE("eigenvalue formulas match the printed profiles") {
  for (FamilyId id : named_families()) {
    CAPTURE(family_name(id));
    FamilySpec s = spec_of(id);
    for (const ChartPoint& p : sample_points(s, 10, 321)) {
      const StructureBundle b = eval_structure(s, p, 1);
      const auto cl = classify_point(values_of(b.A.a));
      const EigenProfiles ev = eigen_profiles(s, p);
      if (family_kind(id) == FamilyKind::ComplexLiouville) {
        CHECK(cl.type == EigenType::ComplexPair);
        const auto want = ev.rho.imag() > 0 ? ev.rho : ev.sigma;
        CHECK(std::abs(cl.rho - want) < 1e-10);
      } else if (family_kind(id) == FamilyKind::Degenerate) {
        CHECK(cl.type == EigenType::RealSplit);
        // one branch is the nonconstant rho(x), the other the constant 0
        const double lo = std::min(ev.rho.real(), 0.0), hi = std::max(ev.rho.real(), 0.0);
        CHECK(cl.rho.real() == doctest::Approx(lo).epsilon(1e-10));
        CHECK(cl.sigma.real() == doctest::Approx(hi).epsilon(1e-10));
      } else {
        CHECK(cl.type == EigenType::RealSplit);
        const double lo = std::min(ev.rho.real(), ev.sigma.real());
        const double hi = std::max(ev.rho.real(), ev.sigma.real());
        CHECK(cl.rho.real() == doctest::Approx(lo).epsilon(1e-10));
        CHECK(cl.sigma.real() == doctest::Approx(hi).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("degenerate structure equation d tau = Omega for both one-form choices") {
  // flat chart: tau = u1 du2
  for (FamilyId id : {FamilyId::D1, FamilyId::D3}) {
    FamilySpec s = spec_of(id);
    const ChartPoint p = some_point(s);
    const auto seeds = seed_coordinates(p.x, 2);
    Vec4J tau = jet_zero_vec(2);
    RJet om12 = RJet::constant(0.0, 2);
    if (id == FamilyId::D1) {
      tau[3] = seeds[2];  // u1 du2
      om12 = RJet::constant(1.0, 2);
    } else {
      const RJet G = polyval(s.gfun_poly, seeds[3]);
      const RJet w = exp(-3.0 * seeds[2]) * G;
      tau[3] = (-1.0 / 3.0) * w;
      om12 = w;
    }
    const Mat4d dtau = exterior_derivative_oneform(tau);
    CHECK(dtau[2][3] == doctest::Approx(om12.value()).epsilon(1e-10));
  }
}

TEST_CASE("companion metric scales linearly in C and rejects eigenvalue collisions") {
  FamilySpec s = spec_of(FamilyId::L2);
  const ChartPoint p = some_point(s);
  s.comp_c = -1.0;
  s.comp_C = 1.0;
  const MetricJet g1 = eval_ghat(s, p, 1);
  s.comp_C = 2.0;
  const MetricJet g2 = eval_ghat(s, p, 1);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(g2.g[i][j].value() == doctest::Approx(2.0 * g1.g[i][j].value()).epsilon(1e-12));

  // degenerate family: c equal to the eigenvalue rho(p) is rejected
  FamilySpec d = spec_of(FamilyId::D1);
  const ChartPoint q{{1.0, 0.2, 0.1, 0.3}};  // rho = 1/x = 1
  d.comp_c = 1.0;
  CHECK_THROWS((void)eval_ghat(d, q, 1));
  d.comp_c = 0.0;  // degenerate families need c != 0
  CHECK_THROWS((void)eval_ghat(d, q, 1));
  d.comp_c = -0.7;
  const MetricJet gh = eval_ghat(d, q, 1);
  CHECK(std::abs(mat_det(values_of(gh.g))) > 1e-10);
}

TEST_CASE("domain and parameter validation") {
  FamilySpec s = spec_of(FamilyId::L2);
  s.beta = 1.0;
  CHECK_THROWS_WITH_AS((void)eval_structure(s, ChartPoint{{0, 0, 0, 0}}, 1),
                       "beta must differ from 1", std::invalid_argument);

  FamilySpec l1 = spec_of(FamilyId::L1);
  l1.c1 = l1.c2 = 1.0;
  CHECK_FALSE(in_domain(l1, ChartPoint{{1.0, 1.0, 0.0, 0.0}}));  // rho = sigma
  CHECK_THROWS((void)eval_structure(l1, ChartPoint{{1.0, 1.0, 0.0, 0.0}}, 1));

  FamilySpec d1 = spec_of(FamilyId::D1);
  CHECK_FALSE(in_domain(d1, ChartPoint{{0.0, 0.0, 0.0, 0.0}}));  // pole of 1/x

  FamilySpec l4 = spec_of(FamilyId::L4);
  CHECK_FALSE(in_domain(l4, ChartPoint{{M_PI / 2, 0.3, 0.0, 0.0}}));  // cos x = 0
}

TEST_CASE("GEN_D honors the structure constant c0") {
  FamilySpec s = spec_of(FamilyId::GEN_D);
  s.c0 = 0.0;
  const ChartPoint p = some_point(s);
  const StructureBundle b0 = eval_structure(s, p, 2);
  const auto cl0 = classify_point(values_of(b0.A.a));
  CHECK(std::min(std::abs(cl0.rho), std::abs(cl0.sigma)) < 1e-9);  // constant eigenvalue 0

  s.c0 = -0.8;
  const StructureBundle b1 = eval_structure(s, p, 2);
  const auto cl1 = classify_point(values_of(b1.A.a));
  const double cmin = std::min(std::abs(cl1.rho + 0.8), std::abs(cl1.sigma + 0.8));
  CHECK(cmin < 1e-9);  // constant eigenvalue -0.8
  // both normalizations define Kahler structures
  CHECK(max_abs(exterior_derivative(b1.omega)) < 1e-9);
  CHECK(nabla_endo_residual(b1.J, b1.g) < 1e-8);
  // companion formula restricted to c0 = 0
  s.comp_c = -2.0;
  CHECK_THROWS((void)eval_ghat(s, p, 2));
}

TEST_CASE("family catalog metadata") {
  CHECK(all_families().size() == 14);
  CHECK(named_families().size() == 11);
  CHECK(family_from_name("L4").value() == FamilyId::L4);
  CHECK(!family_from_name("L9").has_value());
  const FamilyInfo fi = family_info(FamilyId::L4);
  CHECK(fi.profile.find("-tan(x)") != std::string::npos);
  CHECK(family_has_v(FamilyId::D3));
  CHECK(!family_has_v(FamilyId::GEN_L));
}
