#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cpv/geometry.hpp"

namespace cpv {

// Catalog of the classified Kahler structures with an essential c-projective
// vector field (cases L1-L4, CL1-CL4, D1-D3), the companion metrics ghat, and
// the general normal forms GEN_L / GEN_CL / GEN_D with polynomial profiles.

enum class FamilyId {
  L1, L2, L3, L4,
  CL1, CL2, CL3, CL4,
  D1, D2, D3,
  GEN_L, GEN_CL, GEN_D,
};

enum class FamilyKind { Liouville, ComplexLiouville, Degenerate };

struct Box {
  std::array<std::pair<double, double>, 4> iv;
  bool operator==(const Box&) const = default;
};

struct FamilySpec {
  FamilyId id = FamilyId::L1;

  double beta = 0.0;
  double c1 = 1.0, c2 = 2.0;
  double d1 = 1.0, d2 = 2.0;
  int eps = +1;  // Liouville signature switch; complex-Liouville is split only

  // companion-metric parameters (Theorem 1.2)
  double comp_c = -1.0;
  double comp_C = 1.0;

  // GEN_D structure constant eigenvalue; fixed to 0 for D1-D3
  double c0 = 0.0;

  // profile polynomials (general normal forms), coefficient lists c0 + c1 t + ...
  std::vector<double> rho_poly{0.0, 1.0, 0.0, 0.1};
  std::vector<double> sigma_poly{3.0, 1.0, 0.2, 0.0};
  std::vector<std::complex<double>> rho_cpoly{{0.0, 0.0}, {1.0, 0.0}, {0.1, 0.05}};

  // G(u2) for the degenerate families, default preset 2 + u2^2
  std::vector<double> gfun_poly{2.0, 0.0, 1.0};

  std::optional<Box> box;  // sampling box override

  // throws std::invalid_argument on parameter constraint violations
  void validate() const;

  bool operator==(const FamilySpec&) const = default;
};

struct StructureBundle {
  MetricJet g;
  FormJet omega;
  EndoJet J;
  EndoJet A;
  Vec4J v;          // zero for GEN_* (Theorem 3.1 forms carry no vector field)
  double imag_residue = 0.0;  // complex-Liouville assembly check
};

FamilyKind family_kind(FamilyId id);
bool family_has_v(FamilyId id);
bool family_is_general(FamilyId id);
const char* family_name(FamilyId id);
std::optional<FamilyId> family_from_name(const std::string& name);
const std::vector<FamilyId>& all_families();
const std::vector<FamilyId>& named_families();  // the 11 classified cases

Box default_box(const FamilySpec& spec);

// Sampling predicate: clears the singular loci with margin (well-conditioned
// verification points). Evaluation predicate: rejects only true degeneracies,
// so flows may traverse near-singular regions.
bool in_domain(const FamilySpec& spec, const ChartPoint& p);
bool in_domain_eval(const FamilySpec& spec, const ChartPoint& p);

// Theorem 1.1 / Theorem 3.1 evaluator. Throws on domain violations and on a
// complex-assembly imaginary residue above 1e-10.
StructureBundle eval_structure(const FamilySpec& spec, const ChartPoint& p, int order);

// Theorem 1.2 companion metric ghat(c, C) in the same chart
MetricJet eval_ghat(const FamilySpec& spec, const ChartPoint& p, int order);

// pointwise eigenvalue data of A via sqrt(det(A - t Id)) = t^2 - mu1 t + mu2
enum class EigenType { RealSplit, ComplexPair, SingleEigenvalue };
struct Classification {
  EigenType type;
  std::complex<double> rho, sigma;  // RealSplit: rho < sigma (real); ComplexPair: Im rho > 0
};
Classification classify_point(const Mat4d& a, double tie_tol = 1e-10);
std::pair<double, double> symmetric_functions(const Mat4d& a);

// mu1, mu2 as jets of the same order as A
std::pair<RJet, RJet> symmetric_function_jets(const EndoJet& a);

// scalar profile data at a chart point (rho, rho', sigma, sigma')
struct EigenProfiles {
  std::complex<double> rho, drho, sigma, dsigma;
};
EigenProfiles eigen_profiles(const FamilySpec& spec, const ChartPoint& p);

// vector field v at a point (zero for GEN_*)
Vec4d v_values(const FamilySpec& spec, const ChartPoint& p);

// catalog metadata for the CLI listing
struct FamilyInfo {
  std::string name;
  std::string kind;
  std::string params;
  std::string profile;
  std::string vfield;
  std::string domain;
};
FamilyInfo family_info(FamilyId id);

}  // namespace cpv
