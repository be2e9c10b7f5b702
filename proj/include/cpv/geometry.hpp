#pragma once

#include "cpv/tensors.hpp"

namespace cpv {

// Pointwise tensor calculus on a 4-dimensional chart. All tensors are carried
// as jets at a single base point; "values" means the degree-0 part.

struct ChartPoint {
  std::array<double, 4> x{};
  double operator[](int i) const { return x[size_t(i)]; }
  double& operator[](int i) { return x[size_t(i)]; }
};

struct MetricJet {
  Mat4J g;           // symmetric
  int plus = 0;      // signature: number of positive eigenvalues at the point
  int minus = 0;
};

struct EndoJet {
  Mat4J a;  // type (1,1), a[i][j] = A^i_j
};

struct FormJet {
  Mat4J w;  // antisymmetric, w[i][j] = omega_ij
};

// Gamma[i][j][k] = Gamma^i_{jk}, symmetric in (j,k); order = metric order - 1
struct ChristoffelData {
  std::array<Mat4J, 4> gamma;
};

struct CurvatureData {
  double riem[4][4][4][4];  // R^i_{jkl}
  double ric[4][4];
  double scal;
};

inline constexpr double kNondegenThreshold = 1e-10;

int metric_order(const MetricJet& g);
void signature_of(MetricJet& g);
bool nondegenerate(const Mat4d& g);

// Levi-Civita connection, Gamma^i_{jk} = 1/2 g^{il} (d_j g_lk + d_k g_jl - d_l g_jk)
ChristoffelData christoffel(const MetricJet& g);

// curvature from an order->=2 metric
CurvatureData riemann_ricci_scal(const MetricJet& g);

// (nabla A)^i_{jk} = d_k A^i_j + Gamma^i_{kl} A^l_j - Gamma^l_{kj} A^i_l, values
struct Tens112 {
  double t[4][4][4];  // t[i][j][k]
};
Tens112 covariant_derivative_endo(const EndoJet& a, const ChristoffelData& gamma);
Tens112 covariant_derivative_endo_jets(const Mat4J& a, const ChristoffelData& gamma);

// Lie derivatives along a jet vector field, one order lower than the inputs
Mat4J lie_derivative_metric(const Vec4J& v, const MetricJet& g);
Mat4J lie_derivative_endo(const Vec4J& v, const EndoJet& a);

// exterior derivative of a 2-form: (dw)_{ijk} values
struct Tens3Alt {
  double t[4][4][4];
};
Tens3Alt exterior_derivative(const FormJet& w);
Mat4d exterior_derivative_oneform(const Vec4J& alpha);
double max_abs(const Tens3Alt& t);
double max_abs(const Tens112& t);

// J from omega = g(J.,.), i.e. J = -g^{-1} omega; validates J^2 = -Id and
// hermiticity of g
EndoJet complex_structure_from(const MetricJet& g, const FormJet& w, double tol = 1e-9);

// grad_g f as a jet vector field (order of f minus one)
Vec4J gradient(const MetricJet& g, const RJet& f);

double killing_residual(const Vec4J& v, const MetricJet& g);

// max_j | omega_ij K^i + d_j H |, the residual of iota_K omega = -dH
double hamiltonian_residual(const Vec4d& k, const RJet& h, const FormJet& w);

// diagnostic residuals used across the suites
double nabla_g_residual(const MetricJet& g);                      // metric compatibility
double nabla_endo_residual(const EndoJet& a, const MetricJet& g); // max |nabla A|
double j_squared_residual(const EndoJet& j);
double hermiticity_residual(const MetricJet& g, const EndoJet& j);
double curvature_symmetry_residual(const MetricJet& g);

// [X,Y]^i = X^j d_j Y^i - Y^j d_j X^i, values
Vec4d commutator_values(const Vec4J& x, const Vec4J& y);

Vec4J apply_endo(const EndoJet& j, const Vec4J& v);

}  // namespace cpv
