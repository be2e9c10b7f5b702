#pragma once

#include "cpv/families.hpp"
#include "cpv/report.hpp"

namespace cpv {

// Residual suites for the defining equations of c-projective geometry:
// metrisability, connection change, the Lie-derivative system with its
// normal-form constants, the flow-induced solution A_v, and the
// eigenvalue-structure checks.

// matrix of L_v on the two-dimensional solution space, (gamma alpha; delta beta)
struct LieConstants {
  double alpha = 0.0, beta = 0.0, gamma = 0.0, delta = 0.0;
};

// the normal-form constants each classified case was solved with (D1/D3 carry
// the transposed matrices; D2 is diagonal, so transposition is a no-op)
LieConstants documented_lie_constants(const FamilySpec& spec);

struct Tolerances {
  double jet = 1e-8;  // identities evaluated through the jet path
  double fd = 1e-5;   // finite-difference cross-checks
  bool operator==(const Tolerances&) const = default;
};

// residual of nabla A = X^b (x) Lambda + Lambda^b (x) X + (JX)^b (x) J Lambda
// + (J Lambda)^b (x) JX over coordinate X, with Lambda = grad_g(tr A)/4
double main_equation_residual(const MetricJet& g, const EndoJet& J, const EndoJet& A);

// residual of the c-projective connection change between g and ghat with
// Phi = d phi, phi = ln(det ghat / det g)/12
double christtrafo_residual(const MetricJet& g, const MetricJet& ghat, const EndoJet& J);

// residuals of L_v g = -delta gA - (delta tr A / 2 + 3 gamma) g and
// L_v A = -delta A^2 + (beta - gamma) A + alpha Id
std::pair<double, double> lie_pair_residual(const MetricJet& g, const EndoJet& J,
                                            const EndoJet& A, const Vec4J& v,
                                            const LieConstants& k);

struct FitResult {
  LieConstants k;
  double consistency = 0.0;  // post-fit max residual across stacked equations
};
FitResult fit_lie_constants(const FamilySpec& spec, const std::vector<ChartPoint>& samples);

// A_v = g^{-1} L_v g - tr(g^{-1} L_v g) Id / 6
EndoJet flow_solution_Av(const MetricJet& g, const EndoJet& J, const Vec4J& v);

// g-symmetry |gA - (gA)^T| and J-commutation |AJ - JA| of an endomorphism
std::pair<double, double> endo_class_residuals(const MetricJet& g, const EndoJet& J,
                                               const EndoJet& A);

// rejection sampling from the family box; throws after 1000 consecutive misses
std::vector<ChartPoint> sample_points(const FamilySpec& spec, int n, std::uint64_t seed);

// suites ------------------------------------------------------------------

ResidualReport kahler_suite(const FamilySpec& spec, int n, std::uint64_t seed,
                            const Tolerances& tol = {});
ResidualReport metrisability_suite(const FamilySpec& spec, int n, std::uint64_t seed,
                                   const Tolerances& tol = {}, double perturb = 0.0);
ResidualReport lie_suite(const FamilySpec& spec, int n, std::uint64_t seed,
                         const Tolerances& tol = {});
ResidualReport christtrafo_suite(const FamilySpec& spec, int n, std::uint64_t seed,
                                 const Tolerances& tol = {});
ResidualReport killing_suite(const FamilySpec& spec, int n, std::uint64_t seed,
                             const Tolerances& tol = {});
ResidualReport eigen_structure_checks(const FamilySpec& spec,
                                      const std::vector<ChartPoint>& samples,
                                      std::uint64_t seed, const Tolerances& tol = {});

// everything the `verify` command runs for one family
ResidualReport verify_family(const FamilySpec& spec, int n, std::uint64_t seed,
                             const Tolerances& tol = {}, double perturb = 0.0);

// Killing fields K_i = J grad mu_i and their Hamiltonians, order >= 1 jets
struct KillingPair {
  Vec4J k1, k2;
  RJet mu1, mu2;
};
KillingPair killing_fields(const StructureBundle& b);

}  // namespace cpv
