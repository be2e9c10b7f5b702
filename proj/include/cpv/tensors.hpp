#pragma once

#include <algorithm>
#include <cmath>

#include "cpv/jet.hpp"

namespace cpv {

template <class T>
using Vec4 = std::array<T, 4>;
template <class T>
using Mat4 = std::array<std::array<T, 4>, 4>;

using Vec4d = Vec4<double>;
using Mat4d = Mat4<double>;
using Vec4J = Vec4<RJet>;
using Mat4J = Mat4<RJet>;
using Vec4C = Vec4<CJet>;
using Mat4C = Mat4<CJet>;

template <class T>
Mat4<T> mat_constant(const T& v) {
  Mat4<T> m;
  for (auto& row : m) row.fill(v);
  return m;
}

inline Mat4J jet_zero_mat(int order) { return mat_constant(RJet::constant(0.0, order)); }
inline Mat4C cjet_zero_mat(int order) { return mat_constant(CJet::constant({0.0, 0.0}, order)); }
inline Vec4J jet_zero_vec(int order) { Vec4J v; v.fill(RJet::constant(0.0, order)); return v; }

template <class T>
Mat4<T> mat_mul(const Mat4<T>& a, const Mat4<T>& b) {
  Mat4<T> r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      T s = a[i][0] * b[0][j];
      for (int k = 1; k < 4; ++k) s = s + a[i][k] * b[k][j];
      r[i][j] = s;
    }
  return r;
}

template <class T>
Vec4<T> mat_vec(const Mat4<T>& a, const Vec4<T>& x) {
  Vec4<T> r;
  for (int i = 0; i < 4; ++i) {
    T s = a[i][0] * x[0];
    for (int k = 1; k < 4; ++k) s = s + a[i][k] * x[k];
    r[i] = s;
  }
  return r;
}

template <class T>
Mat4<T> transpose(const Mat4<T>& a) {
  Mat4<T> r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = a[j][i];
  return r;
}

inline double abs_value(double x) { return std::abs(x); }
inline double abs_value(const std::complex<double>& x) { return std::abs(x); }
inline double abs_value(const RJet& x) { return std::abs(x.value()); }
inline double abs_value(const CJet& x) { return std::abs(x.value()); }

inline double one_like(double) { return 1.0; }
inline std::complex<double> one_like(const std::complex<double>&) { return {1.0, 0.0}; }
inline RJet one_like(const RJet& x) { return RJet::constant(1.0, x.order()); }
inline CJet one_like(const CJet& x) { return CJet::constant({1.0, 0.0}, x.order()); }

// exact-zero test: a jet with zero value can still carry derivative
// coefficients, so elimination steps may only be skipped when every
// coefficient vanishes
inline bool exactly_zero(double x) { return x == 0.0; }
inline bool exactly_zero(const std::complex<double>& x) { return x == std::complex<double>{}; }
template <class T>
bool exactly_zero(const Jet<T>& x) {
  for (int i = 0; i < x.size(); ++i)
    if (!(x[i] == T{})) return false;
  return true;
}

// Gauss-Jordan inverse with partial pivoting on |value|; also returns det.
// Works over doubles and over jets (a jet is invertible iff its value is).
template <class T>
bool mat_inverse_det(const Mat4<T>& a, Mat4<T>& inv, T& det) {
  Mat4<T> m = a;
  const T one = one_like(a[0][0]);
  const T zero = one - one;
  Mat4<T> r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = (i == j) ? one : zero;
  det = one;
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int i = col + 1; i < 4; ++i)
      if (abs_value(m[i][col]) > abs_value(m[piv][col])) piv = i;
    if (abs_value(m[piv][col]) < 1e-300) return false;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      std::swap(r[piv], r[col]);
      det = -det;
    }
    det = det * m[col][col];
    const T p = m[col][col];
    for (int j = 0; j < 4; ++j) {
      m[col][j] = m[col][j] / p;
      r[col][j] = r[col][j] / p;
    }
    for (int i = 0; i < 4; ++i) {
      if (i == col) continue;
      const T f = m[i][col];
      if (exactly_zero(f)) continue;
      for (int j = 0; j < 4; ++j) {
        m[i][j] = m[i][j] - f * m[col][j];
        r[i][j] = r[i][j] - f * r[col][j];
      }
    }
  }
  inv = r;
  return true;
}

template <class T>
Mat4<T> mat_inverse(const Mat4<T>& a) {
  Mat4<T> inv;
  T det;
  if (!mat_inverse_det(a, inv, det)) jet_fail("singular matrix");
  return inv;
}

// division-free determinant (cofactor expansion), valid for near-singular input
template <class T>
T mat_det(const Mat4<T>& a) {
  auto minor3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
    return a[r0][c0] * (a[r1][c1] * a[r2][c2] - a[r1][c2] * a[r2][c1]) -
           a[r0][c1] * (a[r1][c0] * a[r2][c2] - a[r1][c2] * a[r2][c0]) +
           a[r0][c2] * (a[r1][c0] * a[r2][c1] - a[r1][c1] * a[r2][c0]);
  };
  return a[0][0] * minor3(1, 2, 3, 1, 2, 3) - a[0][1] * minor3(1, 2, 3, 0, 2, 3) +
         a[0][2] * minor3(1, 2, 3, 0, 1, 3) - a[0][3] * minor3(1, 2, 3, 0, 1, 2);
}

template <class T>
T mat_trace(const Mat4<T>& a) {
  return a[0][0] + a[1][1] + a[2][2] + a[3][3];
}

inline Mat4d values_of(const Mat4J& m) {
  Mat4d r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = m[i][j].value();
  return r;
}

inline Vec4d values_of(const Vec4J& v) {
  return {v[0].value(), v[1].value(), v[2].value(), v[3].value()};
}

inline double max_abs(const Mat4d& m) {
  double r = 0.0;
  for (const auto& row : m)
    for (double x : row) r = std::max(r, std::abs(x));
  return r;
}

inline double max_abs(const Vec4d& v) {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

inline double dot(const Vec4d& a, const Vec4d& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

inline double norm2(const Vec4d& a) { return std::sqrt(dot(a, a)); }

inline Mat4C complexify(const Mat4J& m) {
  Mat4C r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = complexify(m[i][j]);
  return r;
}

inline Mat4J real_part(const Mat4C& m, double* imag_residue = nullptr) {
  Mat4J r;
  double res = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      res = std::max(res, max_abs_imag(m[i][j]));
      r[i][j] = real_part(m[i][j]);
    }
  if (imag_residue) *imag_residue = res;
  return r;
}

}  // namespace cpv
