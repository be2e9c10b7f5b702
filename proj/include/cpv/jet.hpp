#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpv {

// Truncated Taylor jets in 4 real chart variables, order <= 3.
// Coefficients are stored in Taylor form, i.e. c_alpha = (d^alpha f)/alpha!,
// so multiplication is plain truncated polynomial convolution.

inline constexpr int kVars = 4;
inline constexpr int kMaxOrder = 3;
inline constexpr int kMaxCoeffs = 35;  // C(3+4,4)

namespace jet_detail {

struct Tables {
  std::array<std::array<std::uint8_t, kVars>, kMaxCoeffs> alpha{};
  std::array<std::uint8_t, kMaxCoeffs> degree{};
  // prod[i * kMaxCoeffs + j] = index of alpha_i + alpha_j, or -1 if degree > 3
  std::array<std::int16_t, kMaxCoeffs * kMaxCoeffs> prod{};
  // shift[i * kVars + d] = index of alpha_i + e_d, or -1
  std::array<std::int16_t, kMaxCoeffs * kVars> shift{};
  std::array<int, kMaxOrder + 1> count{};  // coefficients per order: 1,5,15,35
};

const Tables& tables();

}  // namespace jet_detail

inline int jet_coeff_count(int order) { return jet_detail::tables().count[order]; }

[[noreturn]] inline void jet_fail(const std::string& msg) { throw std::domain_error("jet: " + msg); }

template <class T>
class Jet {
 public:
  Jet() : order_(0) { c_.fill(T{}); }

  static Jet constant(const T& v, int order) {
    check_order(order);
    Jet j;
    j.order_ = order;
    j.c_[0] = v;
    return j;
  }

  // Jet of the identity coordinate function x_var at value v.
  static Jet variable(const T& v, int var, int order) {
    check_order(order);
    if (var < 0 || var >= kVars) jet_fail("variable index out of range");
    Jet j;
    j.order_ = order;
    j.c_[0] = v;
    if (order >= 1) j.c_[1 + var] = T{1};
    return j;
  }

  int order() const { return order_; }
  int size() const { return jet_coeff_count(order_); }
  const T& value() const { return c_[0]; }
  const T& operator[](int i) const { return c_[i]; }
  T& operator[](int i) { return c_[i]; }

  // coefficient for multi-index (i0,i1,i2,i3); zero above the stored order
  T coeff(int i0, int i1, int i2, int i3) const {
    const auto& tb = jet_detail::tables();
    for (int k = 0; k < size(); ++k) {
      const auto& a = tb.alpha[k];
      if (a[0] == i0 && a[1] == i1 && a[2] == i2 && a[3] == i3) return c_[k];
    }
    return T{};
  }

  Jet operator-() const {
    Jet r = *this;
    for (int i = 0; i < size(); ++i) r.c_[i] = -r.c_[i];
    return r;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    check_same_order(a, b);
    Jet r = a;
    for (int i = 0; i < r.size(); ++i) r.c_[i] += b.c_[i];
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    check_same_order(a, b);
    Jet r = a;
    for (int i = 0; i < r.size(); ++i) r.c_[i] -= b.c_[i];
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    check_same_order(a, b);
    const auto& tb = jet_detail::tables();
    Jet r;
    r.order_ = a.order_;
    const int n = a.size();
    for (int i = 0; i < n; ++i) {
      if (a.c_[i] == T{}) continue;
      const std::int16_t* row = tb.prod.data() + i * kMaxCoeffs;
      for (int j = 0; j < n; ++j) {
        const std::int16_t k = row[j];
        if (k < 0 || k >= n) continue;
        r.c_[k] += a.c_[i] * b.c_[j];
      }
    }
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * inverse(b); }

  friend Jet operator+(const Jet& a, const T& s) { Jet r = a; r.c_[0] += s; return r; }
  friend Jet operator+(const T& s, const Jet& a) { return a + s; }
  friend Jet operator-(const Jet& a, const T& s) { Jet r = a; r.c_[0] -= s; return r; }
  friend Jet operator-(const T& s, const Jet& a) { return (-a) + s; }
  friend Jet operator*(const Jet& a, const T& s) {
    Jet r = a;
    for (int i = 0; i < r.size(); ++i) r.c_[i] *= s;
    return r;
  }
  friend Jet operator*(const T& s, const Jet& a) { return a * s; }
  friend Jet operator/(const Jet& a, const T& s) {
    Jet r = a;
    for (int i = 0; i < r.size(); ++i) r.c_[i] /= s;
    return r;
  }
  friend Jet operator/(const T& s, const Jet& a) { return inverse(a) * s; }

  // 1/b, requires b.value() != 0
  friend Jet inverse(const Jet& b) {
    if (b.c_[0] == T{}) jet_fail("division by a jet with zero value");
    // 1/(b0 (1+u)) = (1 - u + u^2 - u^3)/b0 with u = b/b0 - 1
    Jet u = b / b.c_[0];
    u.c_[0] = T{};
    Jet r = Jet::constant(T{1}, b.order_);
    if (b.order_ >= 1) {
      Jet u2 = u * u;
      r = r - u + u2 - u2 * u;
    }
    return r / b.c_[0];
  }

  // d/dx_dir, order drops by one
  friend Jet derivative(const Jet& a, int dir) {
    if (a.order_ == 0) jet_fail("derivative of an order-0 jet");
    if (dir < 0 || dir >= kVars) jet_fail("derivative direction out of range");
    const auto& tb = jet_detail::tables();
    Jet r;
    r.order_ = a.order_ - 1;
    for (int i = 0; i < r.size(); ++i) {
      const std::int16_t k = tb.shift[i * kVars + dir];
      r.c_[i] = a.c_[k] * T(double(tb.alpha[i][dir] + 1));
    }
    return r;
  }

  // composition with a univariate analytic outer function given by its raw
  // derivatives f^{(k)} at a.value()
  friend Jet compose(const Jet& a, const std::array<T, kMaxOrder + 1>& df) {
    Jet w = a;
    w.c_[0] = T{};
    Jet r = Jet::constant(df[0], a.order_);
    if (a.order_ >= 1) {
      r = r + df[1] * w;
      if (a.order_ >= 2) {
        Jet w2 = w * w;
        r = r + (df[2] / T{2}) * w2;
        if (a.order_ >= 3) r = r + (df[3] / T{6}) * (w2 * w);
      }
    }
    return r;
  }

 private:
  static void check_order(int order) {
    if (order < 0 || order > kMaxOrder) jet_fail("order out of range [0,3]");
  }
  static void check_same_order(const Jet& a, const Jet& b) {
    if (a.order_ != b.order_) jet_fail("order mismatch");
  }

  int order_;
  std::array<T, kMaxCoeffs> c_;
};

using RJet = Jet<double>;
using CJet = Jet<std::complex<double>>;

// ---- elementary functions ----------------------------------------------

namespace jet_detail {

inline void require_real_domain(double, bool ok, const char* what) {
  if (!ok) jet_fail(std::string("argument outside the domain of ") + what);
}

}  // namespace jet_detail

template <class T>
Jet<T> exp(const Jet<T>& a) {
  using std::exp;
  const T e = exp(a.value());
  return compose(a, {e, e, e, e});
}

template <class T>
Jet<T> log(const Jet<T>& a) {
  using std::log;
  const T v = a.value();
  if constexpr (std::is_same_v<T, double>) jet_detail::require_real_domain(v, v > 0.0, "ln");
  else if (v == T{}) jet_fail("ln of a jet with zero value");
  const T i1 = T{1} / v, i2 = i1 * i1;
  return compose(a, {log(v), i1, -i2, T{2} * i2 * i1});
}

template <class T>
Jet<T> sqrt(const Jet<T>& a) {
  using std::sqrt;
  const T v = a.value();
  if constexpr (std::is_same_v<T, double>) jet_detail::require_real_domain(v, v > 0.0, "sqrt");
  else if (v == T{}) jet_fail("sqrt of a jet with zero value");
  const T s = sqrt(v);
  const T d1 = T{0.5} / s;
  const T d2 = T{-0.25} / (s * v);
  const T d3 = T{0.375} / (s * v * v);
  return compose(a, {s, d1, d2, d3});
}

template <class T>
Jet<T> sin(const Jet<T>& a) {
  using std::sin; using std::cos;
  const T s = sin(a.value()), c = cos(a.value());
  return compose(a, {s, c, -s, -c});
}

template <class T>
Jet<T> cos(const Jet<T>& a) {
  using std::sin; using std::cos;
  const T s = sin(a.value()), c = cos(a.value());
  return compose(a, {c, -s, -c, s});
}

template <class T>
Jet<T> tan(const Jet<T>& a) {
  using std::tan; using std::cos; using std::abs;
  if constexpr (std::is_same_v<T, double>)
    jet_detail::require_real_domain(a.value(), abs(cos(a.value())) > 1e-12, "tan");
  const T t = tan(a.value());
  const T u = T{1} + t * t;  // sec^2
  return compose(a, {t, u, T{2} * t * u, T{2} * u * (T{1} + T{3} * t * t)});
}

template <class T>
Jet<T> tanh(const Jet<T>& a) {
  using std::tanh;
  const T t = tanh(a.value());
  const T u = T{1} - t * t;
  return compose(a, {t, u, T{-2} * t * u, T{-2} * u * (T{1} - T{3} * t * t)});
}

template <class T>
Jet<T> pow(const Jet<T>& a, double p) {
  using std::pow;
  const T v = a.value();
  if constexpr (std::is_same_v<T, double>) jet_detail::require_real_domain(v, v > 0.0, "pow");
  const T f0 = pow(v, T(p));
  const T f1 = T(p) * pow(v, T(p - 1));
  const T f2 = T(p) * T(p - 1) * pow(v, T(p - 2));
  const T f3 = T(p) * T(p - 1) * T(p - 2) * pow(v, T(p - 3));
  return compose(a, {f0, f1, f2, f3});
}

// |a| as a jet: flips sign when the value is negative (valid away from zero)
inline RJet abs(const RJet& a) {
  if (a.value() == 0.0) jet_fail("abs of a jet with zero value");
  return a.value() < 0.0 ? -a : a;
}

// ---- complex <-> real helpers -------------------------------------------

inline CJet complexify(const RJet& a) {
  CJet r = CJet::constant({0.0, 0.0}, a.order());
  for (int i = 0; i < a.size(); ++i) r[i] = std::complex<double>(a[i], 0.0);
  return r;
}

inline CJet conj(const CJet& a) {
  CJet r = a;
  for (int i = 0; i < r.size(); ++i) r[i] = std::conj(r[i]);
  return r;
}

inline RJet real_part(const CJet& a) {
  RJet r = RJet::constant(0.0, a.order());
  for (int i = 0; i < a.size(); ++i) r[i] = a[i].real();
  return r;
}

inline RJet imag_part(const CJet& a) {
  RJet r = RJet::constant(0.0, a.order());
  for (int i = 0; i < a.size(); ++i) r[i] = a[i].imag();
  return r;
}

inline double max_abs_imag(const CJet& a) {
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i].imag()));
  return m;
}

inline double max_abs_coeff(const RJet& a) {
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

// drop coefficients above the given order
template <class T>
Jet<T> truncated(const Jet<T>& a, int order) {
  if (order > a.order()) jet_fail("cannot truncate upwards");
  Jet<T> r = Jet<T>::constant(T{}, order);
  for (int i = 0; i < r.size(); ++i) r[i] = a[i];
  return r;
}

// jet of the complex chart coordinate z = x + i y at a point
inline CJet complex_coordinate(double x, double y, int order) {
  CJet z = CJet::constant({x, y}, order);
  if (order >= 1) {
    z[1] = {1.0, 0.0};  // d/dx
    z[2] = {0.0, 1.0};  // d/dy
  }
  return z;
}

// seed_coordinates: jets of the four identity chart functions at p
inline std::array<RJet, 4> seed_coordinates(const std::array<double, 4>& p, int order) {
  return {RJet::variable(p[0], 0, order), RJet::variable(p[1], 1, order),
          RJet::variable(p[2], 2, order), RJet::variable(p[3], 3, order)};
}

// value of a real polynomial sum c_k t^k and its derivative, as jets
template <class T>
Jet<T> polyval(const std::vector<T>& coeffs, const Jet<T>& t) {
  Jet<T> r = Jet<T>::constant(T{}, t.order());
  for (int k = int(coeffs.size()) - 1; k >= 0; --k) r = r * t + coeffs[size_t(k)];
  return r;
}

template <class T>
std::vector<T> polyder(const std::vector<T>& coeffs) {
  std::vector<T> d;
  for (size_t k = 1; k < coeffs.size(); ++k) d.push_back(T(double(k)) * coeffs[k]);
  if (d.empty()) d.push_back(T{});
  return d;
}

}  // namespace cpv
