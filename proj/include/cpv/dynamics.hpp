#pragma once

#include "cpv/families.hpp"
#include "cpv/report.hpp"

namespace cpv {

// ODE integration of the c-projective flow, geodesics and J-planar curves,
// eigenvalue and scalar-curvature evolution along the flow, and the
// closed-form Scal(tau) evaluators for the L2 / D2 companion metrics.

struct CurveSample {
  double t = 0.0;
  ChartPoint p;
  Vec4d vel{};
  Vec4d acc{};
};

struct Curve {
  std::vector<CurveSample> samples;
  bool truncated = false;  // integration left the family domain
};

std::vector<double> tau_grid(double a, double b, int n);

// classic fixed-step RK4 on dp/dtau = v(p); one sample per step
Curve integrate_flow(const FamilySpec& spec, const ChartPoint& p0, double tau_max, int steps);
ChartPoint flow_point(const FamilySpec& spec, const ChartPoint& p0, double tau, int steps = 64);

struct EigenFlow {
  std::vector<double> tau;
  std::vector<std::complex<double>> rho, sigma;  // continuity-tracked branches
  double ode_residual = 0.0;  // max |drho/dtau + delta rho^2 - (beta-gamma) rho - alpha|
  bool type_change = false;
};
EigenFlow eigen_along_flow(const FamilySpec& spec, const ChartPoint& p0,
                           const std::vector<double>& taus);

struct ScalCurve {
  std::vector<double> tau;
  std::vector<double> scal;
  std::string source;  // "numeric", "closed_form_L2", "closed_form_D2"
};

// numeric Scal of ghat(c, C) at each flow point
ScalCurve scal_along_flow(const FamilySpec& spec, const ChartPoint& p0,
                          const std::vector<double>& taus);

// the closed-form Scal(tau) along the flow from x = y = 0 (L2) or
// x = u1 = 0 (D2), C = 1 and split signature for L2; u2 is the (constant)
// base coordinate of the flow line for D2
ScalCurve scal_closed_form(const FamilySpec& spec, const std::vector<double>& taus,
                           double u2 = 0.0);

// RK4 on the geodesic equation; samples carry velocity and acceleration
Curve geodesic(const FamilySpec& spec, const ChartPoint& p0, const Vec4d& v0, double t_max,
               int steps);

// driven integrators for J-planar controls:
//   ddx = -Gamma(dx,dx) + lambda * J dx          (J-planar by construction)
Curve driven_jplanar_curve(const FamilySpec& spec, const ChartPoint& p0, const Vec4d& v0,
                           double t_max, int steps, double lambda);
//   ddx = -Gamma(dx,dx) + w, w forced outside span{dx, J dx}, |w| = size
Curve offplane_control_curve(const FamilySpec& spec, const ChartPoint& p0, const Vec4d& v0,
                             double t_max, int steps, double size);

// max over samples of |component of nabla_dot dot outside span{dot, J dot}|
// normalized by |a| + |dot|^2; Euclidean least-squares projection in chart
// coordinates (sign-safe for null directions in split signature)
double jplanar_residual(const Curve& curve, const FamilySpec& spec);
// same with the span reduced to {dot}: zero exactly on geodesics
double geodesic_residual(const Curve& curve, const FamilySpec& spec);

// relative drift of g(dot,dot) along the curve
double energy_drift(const Curve& curve, const FamilySpec& spec);
// drift of the Clairaut-type integral g(K1, dot) along the curve
double clairaut_drift(const Curve& curve, const FamilySpec& spec);

// pushes the curve through the flow for each tau and re-estimates the
// derivatives by fourth-order finite differences along the image
ResidualReport flow_invariance_check(const FamilySpec& spec, const Curve& curve,
                                     const std::vector<double>& tau_list,
                                     double tol = 1e-4);

// bounded-solution template of the essential normalization: the transformed
// eigenvalue (-beta rho - 1)/(rho + 1) of an L2/D2 family must follow
// -b/2 - sqrt(ct) tanh(sqrt(ct)(tau + d)), b = beta + 1, ct = (beta - 1)^2/4
double tanh_template_residual(const FamilySpec& spec, const ChartPoint& p0,
                              const std::vector<double>& taus);

}  // namespace cpv
