#include "cpv/families.hpp"

#include <cmath>
#include <stdexcept>

namespace cpv {

namespace {

using C = std::complex<double>;

// sampling margins (well-conditioned points) vs evaluation gates (true
// degeneracies only; flows may pass close to the singular loci)
struct DomainGaps {
  double eigen;  // |rho - sigma|
  double imag;   // |Im rho| (complex Liouville)
  double cosg;   // |cos| (tan-profile cases)
  double pole;   // |x| for 1/x profiles
  double gfun;   // |G(u2)|
  double deriv;
  double scale;
};
constexpr DomainGaps kSamplingGaps{0.05, 0.05, 0.1, 0.1, 0.05, 1e-6, 1e-8};
constexpr DomainGaps kEvalGaps{1e-7, 1e-7, 1e-7, 1e-7, 1e-7, 1e-9, 1e-9};
constexpr double kImagResidueTol = 1e-10;

struct SideProfile {
  RJet rho, drho, F;
};

// x-side / y-side chart data of the Liouville families; `scale` is c1 or c2,
// `escale` is d1 or d2
SideProfile liouville_side(const FamilySpec& s, const RJet& X, double scale, double escale,
                           const std::vector<double>& poly) {
  SideProfile p{RJet::constant(0, X.order()), RJet::constant(0, X.order()),
                RJet::constant(1.0, X.order())};
  switch (s.id) {
    case FamilyId::L1:
      p.rho = X;
      p.drho = RJet::constant(1.0, X.order());
      p.F = RJet::constant(scale, X.order());
      break;
    case FamilyId::L2:
      p.rho = scale * exp((s.beta - 1.0) * X);
      p.drho = (s.beta - 1.0) * p.rho;
      p.F = escale * exp(-0.5 * (s.beta + 2.0) * X);
      break;
    case FamilyId::L3:
      p.rho = X;
      p.drho = RJet::constant(1.0, X.order());
      p.F = scale * exp(-1.5 * X);
      break;
    case FamilyId::L4: {
      const RJet t = tan(X);
      p.rho = -t;
      p.drho = -(1.0 + t * t);
      p.F = scale * exp(-1.5 * s.beta * X) / sqrt(abs(cos(X)));
      break;
    }
    case FamilyId::GEN_L:
      p.rho = polyval(poly, X);
      p.drho = polyval(polyder(poly), X);
      break;
    default:
      jet_fail("not a Liouville family");
  }
  return p;
}

struct CLProfile {
  CJet rho, drho, F;
};

CLProfile cl_profile(const FamilySpec& s, const CJet& Z) {
  const C fconst{s.c1, s.c2};
  CLProfile p{CJet::constant({0, 0}, Z.order()), CJet::constant({0, 0}, Z.order()),
              CJet::constant({1, 0}, Z.order())};
  switch (s.id) {
    case FamilyId::CL1:
      p.rho = Z;
      p.drho = CJet::constant({1, 0}, Z.order());
      p.F = CJet::constant(fconst, Z.order());
      break;
    case FamilyId::CL2:
      p.rho = exp(C(s.beta - 1.0, 0) * Z);
      p.drho = C(s.beta - 1.0, 0) * p.rho;
      p.F = fconst * exp(C(-0.5 * (s.beta + 2.0), 0) * Z);
      break;
    case FamilyId::CL3:
      p.rho = Z;
      p.drho = CJet::constant({1, 0}, Z.order());
      p.F = fconst * exp(C(-1.5, 0) * Z);
      break;
    case FamilyId::CL4: {
      const CJet t = tan(Z);
      p.rho = -t;
      p.drho = -(C(1, 0) + t * t);
      p.F = fconst * exp(C(-1.5 * s.beta, 0) * Z) / sqrt(cos(Z));
      break;
    }
    case FamilyId::GEN_CL:
      p.rho = polyval(s.rho_cpoly, Z);
      p.drho = polyval(polyder(s.rho_cpoly), Z);
      break;
    default:
      jet_fail("not a complex-Liouville family");
  }
  return p;
}

struct DegProfile {
  RJet rho, drho, F;       // functions of x
  RJet h11, h22, om12, tau2;  // base Kahler data on the (u1, u2) domain
};

DegProfile deg_profile(const FamilySpec& s, const RJet& X, const RJet& U1, const RJet& U2) {
  const int order = X.order();
  DegProfile p{RJet::constant(0, order), RJet::constant(0, order), RJet::constant(1.0, order),
               RJet::constant(0, order), RJet::constant(0, order), RJet::constant(0, order),
               RJet::constant(0, order)};
  const RJet G = polyval(s.gfun_poly, U2);
  const bool flat_chart =  // tau = u1 du2, h = G du1^2 + du2^2 / G
      s.id == FamilyId::D1 || s.id == FamilyId::GEN_D ||
      (s.id == FamilyId::D2 && s.beta == -2.0);
  if (flat_chart) {
    p.h11 = G;
    p.h22 = inverse(G);
    p.om12 = RJet::constant(1.0, order);
    p.tau2 = U1;
  } else {
    const double k = (s.id == FamilyId::D3) ? 3.0 : s.beta + 2.0;
    const RJet w = exp(-k * U1) * G;
    p.h11 = w;
    p.h22 = w;
    p.om12 = w;
    p.tau2 = (-1.0 / k) * w;
  }
  switch (s.id) {
    case FamilyId::D1:
      p.rho = inverse(X);
      p.drho = -(p.rho * p.rho);
      p.F = s.c1 / sqrt(abs(X));
      break;
    case FamilyId::D2:
      p.rho = s.c1 * exp((s.beta - 1.0) * X);
      p.drho = (s.beta - 1.0) * p.rho;
      p.F = s.d1 * exp(-0.5 * (s.beta + 2.0) * X);
      break;
    case FamilyId::D3:
      p.rho = inverse(X);
      p.drho = -(p.rho * p.rho);
      p.F = s.c1 * exp(-1.5 * X) / sqrt(abs(X));
      break;
    case FamilyId::GEN_D:
      p.rho = polyval(s.rho_poly, X);
      p.drho = polyval(polyder(s.rho_poly), X);
      break;
    default:
      jet_fail("not a degenerate family");
  }
  return p;
}

void set_sym(Mat4J& m, int i, int j, const RJet& v) {
  m[i][j] = v;
  m[j][i] = v;
}
void set_alt(Mat4J& m, int i, int j, const RJet& v) {
  m[i][j] = v;
  m[j][i] = -v;
}

StructureBundle assemble_liouville(const FamilySpec& spec, const ChartPoint& p, int order) {
  const auto seeds = seed_coordinates(p.x, order);
  const RJet &X = seeds[0], &Y = seeds[1], &S = seeds[2], &T = seeds[3];
  const SideProfile px = liouville_side(spec, X, spec.c1, spec.d1, spec.rho_poly);
  const SideProfile py = liouville_side(spec, Y, spec.c2, spec.d2, spec.sigma_poly);
  const double eps = spec.eps;

  const RJet den = px.rho - py.rho;
  const RJet a = (px.drho / px.F) * (px.drho / px.F);
  const RJet b = (py.drho / py.F) * (py.drho / py.F);

  StructureBundle out;
  out.g.g = jet_zero_mat(order);
  set_sym(out.g.g, 0, 0, den * px.F * px.F);
  set_sym(out.g.g, 1, 1, eps * den * py.F * py.F);
  set_sym(out.g.g, 2, 2, (a + eps * b) / den);
  set_sym(out.g.g, 2, 3, (a * py.rho + eps * b * px.rho) / den);
  set_sym(out.g.g, 3, 3, (a * py.rho * py.rho + eps * b * px.rho * px.rho) / den);

  out.omega.w = jet_zero_mat(order);
  set_alt(out.omega.w, 0, 2, px.drho);
  set_alt(out.omega.w, 0, 3, px.drho * py.rho);
  set_alt(out.omega.w, 1, 2, py.drho);
  set_alt(out.omega.w, 1, 3, py.drho * px.rho);

  out.A.a = jet_zero_mat(order);
  out.A.a[0][0] = px.rho;
  out.A.a[1][1] = py.rho;
  out.A.a[2][2] = px.rho + py.rho;
  out.A.a[2][3] = px.rho * py.rho;
  out.A.a[3][2] = RJet::constant(-1.0, order);

  out.v = jet_zero_vec(order);
  const RJet one = RJet::constant(1.0, order);
  switch (spec.id) {
    case FamilyId::L1:
      out.v = {one, one, -T, RJet::constant(0.0, order)};
      break;
    case FamilyId::L2:
      out.v = {one, one, -(spec.beta + 2.0) * S, -(2.0 * spec.beta + 1.0) * T};
      break;
    case FamilyId::L3:
      out.v = {one, one, -(3.0 * S + T), -3.0 * T};
      break;
    case FamilyId::L4:
      out.v = {one, one, -(3.0 * spec.beta * S - T), -(S + 3.0 * spec.beta * T)};
      break;
    default:
      break;  // GEN_L carries no vector field
  }
  return out;
}

StructureBundle assemble_cl(const FamilySpec& spec, const ChartPoint& p, int order) {
  const CJet Z = complex_coordinate(p[0], p[1], order);
  const CLProfile pr = cl_profile(spec, Z);
  const CJet rho = pr.rho, rhob = conj(pr.rho);
  const CJet dr = pr.drho, drb = conj(pr.drho);
  const CJet F = pr.F, Fb = conj(pr.F);

  // one-forms over (dx, dy, ds, dt) with complex jet components
  const CJet zero = CJet::constant({0, 0}, order);
  const CJet one = CJet::constant({1, 0}, order);
  const CJet iU = CJet::constant({0, 1}, order);
  const Vec4C dz{one, iU, zero, zero};
  const Vec4C dzb{one, -iU, zero, zero};
  const Vec4C u1{zero, zero, one, rho};   // ds + rho dt
  const Vec4C u2{zero, zero, one, rhob};  // ds + conj(rho) dt

  const CJet c_dz = 0.25 * (rhob - rho) * F * F;
  const CJet c_dzb = -0.25 * (rhob - rho) * Fb * Fb;
  const CJet pa = dr / F, pb = drb / Fb;
  const CJet c_u1 = 4.0 / (rho - rhob) * pb * pb;
  const CJet c_u2 = -4.0 / (rho - rhob) * pa * pa;

  Mat4C gc = cjet_zero_mat(order);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      gc[i][j] = c_dz * dz[i] * dz[j] + c_dzb * dzb[i] * dzb[j] + c_u1 * u1[i] * u1[j] +
                 c_u2 * u2[i] * u2[j];

  Mat4C wc = cjet_zero_mat(order);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      wc[i][j] = dr * (dz[i] * u2[j] - dz[j] * u2[i]) + drb * (dzb[i] * u1[j] - dzb[j] * u1[i]);

  // A = rho dz-block + conj + (rho + rhob) ds-block + rho rhob ds x dt - dt x ds
  const Vec4C Dz{0.5 * one, -0.5 * iU, zero, zero};
  const Vec4C Dzb{0.5 * one, 0.5 * iU, zero, zero};
  Mat4C ac = cjet_zero_mat(order);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) ac[i][j] = rho * Dz[i] * dz[j] + rhob * Dzb[i] * dzb[j];
  ac[2][2] = ac[2][2] + (rho + rhob);
  ac[2][3] = ac[2][3] + rho * rhob;
  ac[3][2] = ac[3][2] - one;

  StructureBundle out;
  double r1 = 0, r2 = 0, r3 = 0;
  out.g.g = real_part(gc, &r1);
  out.omega.w = real_part(wc, &r2);
  out.A.a = real_part(ac, &r3);
  out.imag_residue = std::max({r1, r2, r3});
  if (out.imag_residue > kImagResidueTol)
    jet_fail("complex-Liouville assembly produced a non-real tensor (conjugate pairing bug?)");

  out.v = jet_zero_vec(order);
  const auto seeds = seed_coordinates(p.x, order);
  const RJet &S = seeds[2], &T = seeds[3];
  const RJet rone = RJet::constant(1.0, order), rzero = RJet::constant(0.0, order);
  switch (spec.id) {
    case FamilyId::CL1:
      out.v = {rone, rzero, -T, rzero};
      break;
    case FamilyId::CL2:
      out.v = {rone, rzero, -(spec.beta + 2.0) * S, -(2.0 * spec.beta + 1.0) * T};
      break;
    case FamilyId::CL3:
      out.v = {rone, rzero, -(3.0 * S + T), -3.0 * T};
      break;
    case FamilyId::CL4:
      out.v = {rone, rzero, -(3.0 * spec.beta * S - T), -(S + 3.0 * spec.beta * T)};
      break;
    default:
      break;  // GEN_CL carries no vector field
  }
  return out;
}

StructureBundle assemble_degenerate(const FamilySpec& spec, const ChartPoint& p, int order) {
  // coordinates (x, t, u1, u2)
  const auto seeds = seed_coordinates(p.x, order);
  const RJet &X = seeds[0], &T = seeds[1], &U1 = seeds[2], &U2 = seeds[3];
  const DegProfile pr = deg_profile(spec, X, U1, U2);
  const double c0 = (spec.id == FamilyId::GEN_D) ? spec.c0 : 0.0;

  const RJet rc = pr.rho - c0;                 // rho - c0
  const RJet w = (pr.drho / pr.F) * (pr.drho / pr.F) / rc;  // theta^2 coefficient of g
  const Vec4J theta{RJet::constant(0.0, order), RJet::constant(1.0, order),
                    RJet::constant(0.0, order), -pr.tau2};

  StructureBundle out;
  out.g.g = jet_zero_mat(order);
  set_sym(out.g.g, 0, 0, rc * pr.F * pr.F);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j)
      if (!(i == 0 && j == 0)) set_sym(out.g.g, i, j, out.g.g[i][j] + w * theta[i] * theta[j]);
  set_sym(out.g.g, 2, 2, out.g.g[2][2] - rc * pr.h11);
  set_sym(out.g.g, 3, 3, out.g.g[3][3] - rc * pr.h22);

  out.omega.w = jet_zero_mat(order);
  set_alt(out.omega.w, 2, 3, -rc * pr.om12);
  for (int j = 1; j < 4; ++j)
    if (max_abs_coeff(theta[j]) != 0.0) set_alt(out.omega.w, 0, j, pr.drho * theta[j]);

  // gA = c0 (c0 - rho) h + rho w theta^2 + rho (rho - c0) F^2 dx^2, then A = g^{-1} (gA)
  Mat4J gA = jet_zero_mat(order);
  set_sym(gA, 0, 0, pr.rho * rc * pr.F * pr.F);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j)
      if (!(i == 0 && j == 0)) set_sym(gA, i, j, gA[i][j] + pr.rho * w * theta[i] * theta[j]);
  set_sym(gA, 2, 2, gA[2][2] - c0 * rc * pr.h11);
  set_sym(gA, 3, 3, gA[3][3] - c0 * rc * pr.h22);
  out.A.a = mat_mul(mat_inverse(out.g.g), gA);

  out.v = jet_zero_vec(order);
  const RJet one = RJet::constant(1.0, order), zero = RJet::constant(0.0, order);
  switch (spec.id) {
    case FamilyId::D1:
      out.v = {one, U2, one, zero};
      break;
    case FamilyId::D2:
      if (spec.beta == -2.0)
        out.v = {one, U2, one, zero};
      else
        out.v = {one, -(spec.beta + 2.0) * T, one, zero};
      break;
    case FamilyId::D3:
      out.v = {one, -3.0 * T, one, zero};
      break;
    default:
      break;  // GEN_D carries no vector field
  }
  return out;
}

}  // namespace

FamilyKind family_kind(FamilyId id) {
  switch (id) {
    case FamilyId::L1: case FamilyId::L2: case FamilyId::L3: case FamilyId::L4:
    case FamilyId::GEN_L:
      return FamilyKind::Liouville;
    case FamilyId::CL1: case FamilyId::CL2: case FamilyId::CL3: case FamilyId::CL4:
    case FamilyId::GEN_CL:
      return FamilyKind::ComplexLiouville;
    default:
      return FamilyKind::Degenerate;
  }
}

bool family_has_v(FamilyId id) { return !family_is_general(id); }

bool family_is_general(FamilyId id) {
  return id == FamilyId::GEN_L || id == FamilyId::GEN_CL || id == FamilyId::GEN_D;
}

const char* family_name(FamilyId id) {
  switch (id) {
    case FamilyId::L1: return "L1";
    case FamilyId::L2: return "L2";
    case FamilyId::L3: return "L3";
    case FamilyId::L4: return "L4";
    case FamilyId::CL1: return "CL1";
    case FamilyId::CL2: return "CL2";
    case FamilyId::CL3: return "CL3";
    case FamilyId::CL4: return "CL4";
    case FamilyId::D1: return "D1";
    case FamilyId::D2: return "D2";
    case FamilyId::D3: return "D3";
    case FamilyId::GEN_L: return "GEN_L";
    case FamilyId::GEN_CL: return "GEN_CL";
    case FamilyId::GEN_D: return "GEN_D";
  }
  return "?";
}

std::optional<FamilyId> family_from_name(const std::string& name) {
  for (FamilyId id : all_families())
    if (name == family_name(id)) return id;
  return std::nullopt;
}

const std::vector<FamilyId>& all_families() {
  static const std::vector<FamilyId> v{
      FamilyId::L1, FamilyId::L2, FamilyId::L3, FamilyId::L4,
      FamilyId::CL1, FamilyId::CL2, FamilyId::CL3, FamilyId::CL4,
      FamilyId::D1, FamilyId::D2, FamilyId::D3,
      FamilyId::GEN_L, FamilyId::GEN_CL, FamilyId::GEN_D};
  return v;
}

const std::vector<FamilyId>& named_families() {
  static const std::vector<FamilyId> v{
      FamilyId::L1, FamilyId::L2, FamilyId::L3, FamilyId::L4,
      FamilyId::CL1, FamilyId::CL2, FamilyId::CL3, FamilyId::CL4,
      FamilyId::D1, FamilyId::D2, FamilyId::D3};
  return v;
}

void FamilySpec::validate() const {
  const bool beta_case = id == FamilyId::L2 || id == FamilyId::CL2 || id == FamilyId::D2;
  if (beta_case && beta == 1.0) throw std::invalid_argument("beta must differ from 1");
  if (eps != 1 && eps != -1) throw std::invalid_argument("eps must be +1 or -1");
  if (d1 == 0.0) throw std::invalid_argument("d1 must be nonzero");
  switch (id) {
    case FamilyId::L1: case FamilyId::L3: case FamilyId::L4:
      if (c1 == 0.0 || c2 == 0.0) throw std::invalid_argument("c1, c2 must be nonzero");
      break;
    case FamilyId::L2:
      if (c1 == 0.0 || c2 == 0.0 || d2 == 0.0)
        throw std::invalid_argument("c1, c2, d1, d2 must be nonzero");
      break;
    case FamilyId::CL1: case FamilyId::CL2: case FamilyId::CL3: case FamilyId::CL4:
      if (c1 == 0.0 && c2 == 0.0) throw std::invalid_argument("c1 + i c2 must be nonzero");
      break;
    case FamilyId::D1: case FamilyId::D3:
      if (c1 == 0.0) throw std::invalid_argument("c1 must be nonzero");
      break;
    case FamilyId::D2:
      if (c1 == 0.0) throw std::invalid_argument("c1 must be nonzero");
      break;
    case FamilyId::GEN_L:
      if (rho_poly.empty() || sigma_poly.empty())
        throw std::invalid_argument("GEN_L requires rho and sigma profile polynomials");
      break;
    case FamilyId::GEN_CL:
      if (rho_cpoly.empty()) throw std::invalid_argument("GEN_CL requires a rho(z) polynomial");
      break;
    case FamilyId::GEN_D:
      if (rho_poly.empty()) throw std::invalid_argument("GEN_D requires a rho profile polynomial");
      break;
  }
  if (family_kind(id) == FamilyKind::Degenerate && gfun_poly.empty())
    throw std::invalid_argument("degenerate families require G(u2) coefficients");
}

Box default_box(const FamilySpec& spec) {
  if (spec.box) return *spec.box;
  auto mk = [](double a0, double b0, double a1, double b1, double a2, double b2, double a3,
               double b3) {
    return Box{{{{a0, b0}, {a1, b1}, {a2, b2}, {a3, b3}}}};
  };
  switch (spec.id) {
    case FamilyId::L1: return mk(1.5, 2.5, 0.5, 1.2, -1, 1, -1, 1);
    case FamilyId::L2: return mk(0.1, 0.9, -0.9, -0.1, -1, 1, -1, 1);
    case FamilyId::L3: return mk(0.6, 1.2, -0.3, 0.3, -1, 1, -1, 1);
    case FamilyId::L4: return mk(0.2, 0.6, -0.6, -0.2, -1, 1, -1, 1);
    case FamilyId::CL1: return mk(-1, 1, 0.5, 1.5, -1, 1, -1, 1);
    case FamilyId::CL2: return mk(-0.5, 1.0, 0.4, 1.2, -1, 1, -1, 1);
    case FamilyId::CL3: return mk(-1, 1, 0.5, 1.5, -1, 1, -1, 1);
    case FamilyId::CL4: return mk(-0.5, 0.5, 0.3, 0.9, -1, 1, -1, 1);
    case FamilyId::D1: return mk(0.5, 1.5, -1, 1, -0.5, 0.5, -0.8, 0.8);
    case FamilyId::D2: return mk(0.1, 1.0, -1, 1, -0.5, 0.5, -0.8, 0.8);
    case FamilyId::D3: return mk(0.5, 1.5, -1, 1, -0.5, 0.5, -0.8, 0.8);
    case FamilyId::GEN_L: return mk(-0.5, 0.5, -0.5, 0.5, -1, 1, -1, 1);
    case FamilyId::GEN_CL: return mk(-0.5, 0.5, 0.5, 1.2, -1, 1, -1, 1);
    case FamilyId::GEN_D: return mk(0.5, 1.5, -1, 1, -0.5, 0.5, -0.8, 0.8);
  }
  return mk(-1, 1, -1, 1, -1, 1, -1, 1);
}

EigenProfiles eigen_profiles(const FamilySpec& spec, const ChartPoint& p) {
  EigenProfiles out;
  switch (family_kind(spec.id)) {
    case FamilyKind::Liouville: {
      const RJet X = RJet::constant(p[0], 0), Y = RJet::constant(p[1], 0);
      const auto px = liouville_side(spec, X, spec.c1, spec.d1, spec.rho_poly);
      const auto py = liouville_side(spec, Y, spec.c2, spec.d2, spec.sigma_poly);
      out.rho = px.rho.value();
      out.drho = px.drho.value();
      out.sigma = py.rho.value();
      out.dsigma = py.drho.value();
      break;
    }
    case FamilyKind::ComplexLiouville: {
      const CJet Z = complex_coordinate(p[0], p[1], 0);
      const auto pr = cl_profile(spec, Z);
      out.rho = pr.rho.value();
      out.drho = pr.drho.value();
      out.sigma = std::conj(pr.rho.value());
      out.dsigma = std::conj(pr.drho.value());
      break;
    }
    case FamilyKind::Degenerate: {
      const RJet X = RJet::constant(p[0], 0), U1 = RJet::constant(p[2], 0),
                 U2 = RJet::constant(p[3], 0);
      const auto pr = deg_profile(spec, X, U1, U2);
      out.rho = pr.rho.value();
      out.drho = pr.drho.value();
      out.sigma = (spec.id == FamilyId::GEN_D) ? spec.c0 : 0.0;
      out.dsigma = 0.0;
      break;
    }
  }
  return out;
}

namespace {

bool in_domain_gaps(const FamilySpec& spec, const ChartPoint& p, const DomainGaps& gap) {
  for (double c : p.x)
    if (!std::isfinite(c)) return false;
  try {
    switch (family_kind(spec.id)) {
      case FamilyKind::Liouville: {
        if (spec.id == FamilyId::L4 &&
            (std::abs(std::cos(p[0])) <= gap.cosg || std::abs(std::cos(p[1])) <= gap.cosg))
          return false;
        const RJet X = RJet::constant(p[0], 0), Y = RJet::constant(p[1], 0);
        const auto px = liouville_side(spec, X, spec.c1, spec.d1, spec.rho_poly);
        const auto py = liouville_side(spec, Y, spec.c2, spec.d2, spec.sigma_poly);
        return std::abs(px.rho.value() - py.rho.value()) > gap.eigen &&
               std::abs(px.drho.value()) > gap.deriv && std::abs(py.drho.value()) > gap.deriv &&
               std::abs(px.F.value()) > gap.scale && std::abs(py.F.value()) > gap.scale;
      }
      case FamilyKind::ComplexLiouville: {
        if (spec.id == FamilyId::CL4) {
          const C cz = std::cos(C(p[0], p[1]));
          if (std::abs(cz) <= gap.cosg || cz.real() <= gap.cosg / 2) return false;
        }
        const CJet Z = complex_coordinate(p[0], p[1], 0);
        const auto pr = cl_profile(spec, Z);
        return std::abs(pr.rho.value().imag()) > gap.imag &&
               std::abs(pr.drho.value()) > gap.deriv && std::abs(pr.F.value()) > gap.scale;
      }
      case FamilyKind::Degenerate: {
        if ((spec.id == FamilyId::D1 || spec.id == FamilyId::D3) && std::abs(p[0]) <= gap.pole)
          return false;
        const RJet X = RJet::constant(p[0], 0), U1 = RJet::constant(p[2], 0),
                   U2 = RJet::constant(p[3], 0);
        const auto pr = deg_profile(spec, X, U1, U2);
        const double c0 = (spec.id == FamilyId::GEN_D) ? spec.c0 : 0.0;
        const double gval = polyval(spec.gfun_poly, U2).value();
        return std::abs(pr.rho.value() - c0) > gap.eigen &&
               std::abs(pr.drho.value()) > gap.deriv && std::abs(pr.F.value()) > gap.scale &&
               std::abs(gval) > gap.gfun;
      }
    }
  } catch (const std::exception&) {
    return false;  // pole or branch violation inside the profile evaluation
  }
  return false;
}

}  // namespace

bool in_domain(const FamilySpec& spec, const ChartPoint& p) {
  return in_domain_gaps(spec, p, kSamplingGaps);
}

bool in_domain_eval(const FamilySpec& spec, const ChartPoint& p) {
  return in_domain_gaps(spec, p, kEvalGaps);
}

StructureBundle eval_structure(const FamilySpec& spec, const ChartPoint& p, int order) {
  spec.validate();
  if (!in_domain_eval(spec, p)) jet_fail("chart point outside the family domain");
  StructureBundle out;
  switch (family_kind(spec.id)) {
    case FamilyKind::Liouville:
      out = assemble_liouville(spec, p, order);
      break;
    case FamilyKind::ComplexLiouville:
      out = assemble_cl(spec, p, order);
      break;
    case FamilyKind::Degenerate:
      out = assemble_degenerate(spec, p, order);
      break;
  }
  signature_of(out.g);
  out.J = complex_structure_from(out.g, out.omega);
  return out;
}

MetricJet eval_ghat(const FamilySpec& spec, const ChartPoint& p, int order) {
  spec.validate();
  if (spec.comp_C == 0.0) throw std::invalid_argument("companion parameter C must be nonzero");
  if (!in_domain_eval(spec, p)) jet_fail("chart point outside the family domain");
  const double c = spec.comp_c, Cc = spec.comp_C;
  const EigenProfiles ev = eigen_profiles(spec, p);
  if (std::abs(ev.rho - c) < 1e-6 || std::abs(ev.sigma - c) < 1e-6)
    jet_fail("companion parameter c collides with an eigenvalue at the point");

  MetricJet out;
  out.g = jet_zero_mat(order);
  switch (family_kind(spec.id)) {
    case FamilyKind::Liouville: {
      const auto seeds = seed_coordinates(p.x, order);
      const auto px = liouville_side(spec, seeds[0], spec.c1, spec.d1, spec.rho_poly);
      const auto py = liouville_side(spec, seeds[1], spec.c2, spec.d2, spec.sigma_poly);
      const double eps = spec.eps;
      const RJet rho = px.rho, sig = py.rho;
      const RJet rc = rho - c, sc = sig - c, den = rho - sig;
      const RJet P = Cc / (rc * rc * sc * sc * den);
      const RJet a = (px.drho / px.F) * (px.drho / px.F);
      const RJet b = (py.drho / py.F) * (py.drho / py.F);
      set_sym(out.g, 0, 0, P * den * den * sc * px.F * px.F);
      set_sym(out.g, 1, 1, eps * P * den * den * rc * py.F * py.F);
      set_sym(out.g, 2, 2, P * (a * sc + eps * b * rc));
      set_sym(out.g, 3, 3, P * (a * sig * sig * sc + eps * b * rho * rho * rc));
      set_sym(out.g, 2, 3, P * (a * sig * sc + eps * b * rho * rc));
      break;
    }
    case FamilyKind::ComplexLiouville: {
      const CJet Z = complex_coordinate(p[0], p[1], order);
      const auto pr = cl_profile(spec, Z);
      const CJet rho = pr.rho, rhob = conj(pr.rho);
      const CJet rc = rho - C(c, 0), rcb = rhob - C(c, 0);
      const CJet P = C(Cc, 0) / (rc * rc * rcb * rcb * (rhob - rho));
      const CJet pa = pr.drho / pr.F, pb = conj(pr.drho) / conj(pr.F);
      const CJet zero = CJet::constant({0, 0}, order);
      const CJet one = CJet::constant({1, 0}, order);
      const CJet iU = CJet::constant({0, 1}, order);
      const Vec4C dz{one, iU, zero, zero};
      const Vec4C dzb{one, -iU, zero, zero};
      const CJet q = 0.25 * (rhob - rho) * (rhob - rho);
      const CJet c_dz = P * q * rcb * pr.F * pr.F;
      const CJet c_dzb = -P * q * rc * conj(pr.F) * conj(pr.F);
      // The (ds, dt) terms carry the factor 4/(rho - rhob) of the metric
      // normal form; the printed companion formula shares the overall
      // 1/(rhob - rho) instead, which is off by -4 against the defining
      // relation ghat = C g (A - c Id)^{-1} / ((rho - c)(rhob - c)).
      const CJet Q = -4.0 * P;
      Mat4C gc = cjet_zero_mat(order);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) gc[i][j] = c_dz * dz[i] * dz[j] + c_dzb * dzb[i] * dzb[j];
      gc[2][2] = gc[2][2] + Q * (pb * pb * rc - pa * pa * rcb);
      gc[3][3] = gc[3][3] + Q * (pb * pb * rho * rho * rc - pa * pa * rhob * rhob * rcb);
      const CJet gst = Q * (pb * pb * rho * rc - pa * pa * rhob * rcb);
      gc[2][3] = gc[2][3] + gst;
      gc[3][2] = gc[3][2] + gst;
      double res = 0.0;
      out.g = real_part(gc, &res);
      if (res > kImagResidueTol)
        jet_fail("companion metric assembly produced a non-real tensor");
      break;
    }
    case FamilyKind::Degenerate: {
      if (spec.id == FamilyId::GEN_D && spec.c0 != 0.0)
        throw std::invalid_argument(
            "the printed companion formula applies to the c0 = 0 normalization only");
      if (c == 0.0)
        throw std::invalid_argument(
            "companion parameter c must be nonzero for degenerate families");
      const auto seeds = seed_coordinates(p.x, order);
      const auto pr = deg_profile(spec, seeds[0], seeds[2], seeds[3]);
      const RJet rho = pr.rho;
      const RJet rc = rho - c;
      const RJet pref = Cc / (c * rc);
      const Vec4J theta{RJet::constant(0.0, order), RJet::constant(1.0, order),
                        RJet::constant(0.0, order), -pr.tau2};
      const RJet w = pref * (pr.drho / pr.F) * (pr.drho / pr.F) / (rho * rc);
      set_sym(out.g, 0, 0, pref * rho * pr.F * pr.F / rc);
      for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j)
          if (!(i == 0 && j == 0)) set_sym(out.g, i, j, out.g[i][j] + w * theta[i] * theta[j]);
      set_sym(out.g, 2, 2, out.g[2][2] + pref * rho / c * pr.h11);
      set_sym(out.g, 3, 3, out.g[3][3] + pref * rho / c * pr.h22);
      break;
    }
  }
  if (!nondegenerate(values_of(out.g)))
    jet_fail("companion metric is singular at the point");
  signature_of(out);
  return out;
}

std::pair<double, double> symmetric_functions(const Mat4d& a) {
  const double e1 = a[0][0] + a[1][1] + a[2][2] + a[3][3];
  double tr2 = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) tr2 += a[i][j] * a[j][i];
  const double e2 = 0.5 * (e1 * e1 - tr2);
  const double mu1 = 0.5 * e1;
  const double mu2 = 0.5 * (e2 - mu1 * mu1);

  // perfect-square check: char poly must equal (t^2 - mu1 t + mu2)^2
  double e3 = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k)
        e3 += a[i][i] * (a[j][j] * a[k][k] - a[j][k] * a[k][j]) -
              a[i][j] * (a[j][i] * a[k][k] - a[j][k] * a[k][i]) +
              a[i][k] * (a[j][i] * a[k][j] - a[j][j] * a[k][i]);
  const double e4 = mat_det(a);
  const double scale = std::max(1.0, max_abs(a));
  if (std::abs(e3 - 2.0 * mu1 * mu2) > 1e-8 * scale * scale * scale ||
      std::abs(e4 - mu2 * mu2) > 1e-8 * scale * scale * scale * scale)
    jet_fail("characteristic polynomial is not a perfect square: A is not in the class");
  return {mu1, mu2};
}

Classification classify_point(const Mat4d& a, double tie_tol) {
  const auto [mu1, mu2] = symmetric_functions(a);
  const double f = mu1 * mu1 - 4.0 * mu2;
  Classification out{};
  if (f > tie_tol) {
    out.type = EigenType::RealSplit;
    const double r = std::sqrt(f);
    out.rho = 0.5 * (mu1 - r);
    out.sigma = 0.5 * (mu1 + r);
  } else if (f < -tie_tol) {
    out.type = EigenType::ComplexPair;
    const double r = std::sqrt(-f);
    out.rho = C(0.5 * mu1, 0.5 * r);
    out.sigma = std::conj(out.rho);
  } else {
    out.type = EigenType::SingleEigenvalue;
    out.rho = out.sigma = 0.5 * mu1;
  }
  return out;
}

std::pair<RJet, RJet> symmetric_function_jets(const EndoJet& a) {
  const int order = a.a[0][0].order();
  RJet e1 = RJet::constant(0.0, order);
  for (int i = 0; i < 4; ++i) e1 = e1 + a.a[i][i];
  RJet tr2 = RJet::constant(0.0, order);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) tr2 = tr2 + a.a[i][j] * a.a[j][i];
  const RJet e2 = 0.5 * (e1 * e1 - tr2);
  const RJet mu1 = 0.5 * e1;
  const RJet mu2 = 0.5 * (e2 - mu1 * mu1);
  return {mu1, mu2};
}

Vec4d v_values(const FamilySpec& spec, const ChartPoint& p) {
  const double s = p[2], t = p[3];
  switch (spec.id) {
    case FamilyId::L1: return {1, 1, -t, 0};
    case FamilyId::L2: return {1, 1, -(spec.beta + 2.0) * s, -(2.0 * spec.beta + 1.0) * t};
    case FamilyId::L3: return {1, 1, -(3.0 * s + t), -3.0 * t};
    case FamilyId::L4:
      return {1, 1, -(3.0 * spec.beta * s - t), -(s + 3.0 * spec.beta * t)};
    case FamilyId::CL1: return {1, 0, -t, 0};
    case FamilyId::CL2: return {1, 0, -(spec.beta + 2.0) * s, -(2.0 * spec.beta + 1.0) * t};
    case FamilyId::CL3: return {1, 0, -(3.0 * s + t), -3.0 * t};
    case FamilyId::CL4:
      return {1, 0, -(3.0 * spec.beta * s - t), -(s + 3.0 * spec.beta * t)};
    case FamilyId::D1: return {1, p[3], 1, 0};  // (x, t, u1, u2): v^t = u2
    case FamilyId::D2:
      if (spec.beta == -2.0) return {1, p[3], 1, 0};
      return {1, -(spec.beta + 2.0) * p[1], 1, 0};
    case FamilyId::D3: return {1, -3.0 * p[1], 1, 0};
    default: return {0, 0, 0, 0};
  }
}

FamilyInfo family_info(FamilyId id) {
  FamilyInfo fi;
  fi.name = family_name(id);
  switch (family_kind(id)) {
    case FamilyKind::Liouville: fi.kind = "Liouville"; break;
    case FamilyKind::ComplexLiouville: fi.kind = "complex Liouville"; break;
    case FamilyKind::Degenerate: fi.kind = "degenerate"; break;
  }
  switch (id) {
    case FamilyId::L1:
      fi.params = "c1, c2, eps";
      fi.profile = "rho(x) = x, sigma(y) = y, F = c1, G = c2";
      fi.vfield = "d_x + d_y - t d_s";
      fi.domain = "rho(x) != sigma(y)";
      break;
    case FamilyId::L2:
      fi.params = "beta (!= 1), c1, c2, d1, d2, eps";
      fi.profile =
          "rho = c1 e^{(beta-1)x}, sigma = c2 e^{(beta-1)y}, "
          "F = d1 e^{-(beta+2)x/2}, G = d2 e^{-(beta+2)y/2}";
      fi.vfield = "d_x + d_y - (beta+2) s d_s - (2 beta+1) t d_t";
      fi.domain = "rho(x) != sigma(y)";
      break;
    case FamilyId::L3:
      fi.params = "c1, c2, eps";
      fi.profile = "rho(x) = x, sigma(y) = y, F = c1 e^{-3x/2}, G = c2 e^{-3y/2}";
      fi.vfield = "d_x + d_y - (3s + t) d_s - 3t d_t";
      fi.domain = "rho(x) != sigma(y)";
      break;
    case FamilyId::L4:
      fi.params = "beta, c1, c2, eps";
      fi.profile =
          "rho(x) = -tan(x), sigma(y) = -tan(y), "
          "F = c1 e^{-3 beta x/2}/sqrt|cos x|, G = c2 e^{-3 beta y/2}/sqrt|cos y|";
      fi.vfield = "d_x + d_y - (3 beta s - t) d_s - (s + 3 beta t) d_t";
      fi.domain = "rho != sigma, cos x != 0, cos y != 0";
      break;
    case FamilyId::CL1:
      fi.params = "c1, c2 (F = c1 + i c2)";
      fi.profile = "rho(z) = z, F = c1 + i c2";
      fi.vfield = "d_x - t d_s";
      fi.domain = "Im rho(z) != 0";
      break;
    case FamilyId::CL2:
      fi.params = "beta (!= 1), c1, c2";
      fi.profile = "rho(z) = e^{(beta-1)z}, F = (c1 + i c2) e^{-(beta+2)z/2}";
      fi.vfield = "d_x - (beta+2) s d_s - (2 beta+1) t d_t";
      fi.domain = "Im rho(z) != 0";
      break;
    case FamilyId::CL3:
      fi.params = "c1, c2";
      fi.profile = "rho(z) = z, F = (c1 + i c2) e^{-3z/2}";
      fi.vfield = "d_x - (3s + t) d_s - 3t d_t";
      fi.domain = "Im rho(z) != 0";
      break;
    case FamilyId::CL4:
      fi.params = "beta, c1, c2";
      fi.profile = "rho(z) = -tan(z), F = (c1 + i c2) e^{-3 beta z/2}/sqrt(cos z)";
      fi.vfield = "d_x - (3 beta s - t) d_s - (s + 3 beta t) d_t";
      fi.domain = "Im rho(z) != 0, cos z away from the branch cut";
      break;
    case FamilyId::D1:
      fi.params = "c1, G(u2) coefficients";
      fi.profile = "rho(x) = 1/x, F = c1/sqrt|x|, tau = u1 du2, h = G du1^2 + du2^2/G";
      fi.vfield = "d_x + u2 d_t + d_u1";
      fi.domain = "x != 0, G(u2) != 0";
      break;
    case FamilyId::D2:
      fi.params = "beta (!= 1), c1, d1, G(u2) coefficients";
      fi.profile =
          "rho = c1 e^{(beta-1)x}, F = d1 e^{-(beta+2)x/2}; beta = -2: tau = u1 du2, "
          "h = G du1^2 + du2^2/G; else tau = -e^{-(beta+2)u1} G du2/(beta+2), "
          "h = e^{-(beta+2)u1} G (du1^2 + du2^2)";
      fi.vfield = "beta = -2: d_x + u2 d_t + d_u1; else d_x - (beta+2) t d_t + d_u1";
      fi.domain = "rho != 0, G(u2) != 0";
      break;
    case FamilyId::D3:
      fi.params = "c1, G(u2) coefficients";
      fi.profile =
          "rho(x) = 1/x, F = c1 e^{-3x/2}/sqrt|x|, tau = -e^{-3u1} G du2/3, "
          "h = e^{-3u1} G (du1^2 + du2^2)";
      fi.vfield = "d_x - 3t d_t + d_u1";
      fi.domain = "x != 0, G(u2) != 0";
      break;
    case FamilyId::GEN_L:
      fi.params = "rho(x), sigma(y) polynomials, eps";
      fi.profile = "general Liouville normal form with polynomial profiles";
      fi.vfield = "(none)";
      fi.domain = "rho(x) != sigma(y), rho' != 0, sigma' != 0";
      break;
    case FamilyId::GEN_CL:
      fi.params = "rho(z) complex polynomial";
      fi.profile = "general complex-Liouville normal form with a polynomial profile";
      fi.vfield = "(none)";
      fi.domain = "Im rho(z) != 0, rho'(z) != 0";
      break;
    case FamilyId::GEN_D:
      fi.params = "rho(x) polynomial, c0, G(u2) coefficients";
      fi.profile = "general degenerate normal form, constant eigenvalue c0";
      fi.vfield = "(none)";
      fi.domain = "rho(x) != c0, rho' != 0, G(u2) != 0";
      break;
  }
  return fi;
}

}  // namespace cpv
