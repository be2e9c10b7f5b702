#include "cpv/jet.hpp"

namespace cpv {
namespace jet_detail {

namespace {

Tables build_tables() {
  Tables t;
  int idx = 0;
  for (int d = 0; d <= kMaxOrder; ++d) {
    for (int i0 = d; i0 >= 0; --i0)
      for (int i1 = d - i0; i1 >= 0; --i1)
        for (int i2 = d - i0 - i1; i2 >= 0; --i2) {
          const int i3 = d - i0 - i1 - i2;
          t.alpha[idx] = {std::uint8_t(i0), std::uint8_t(i1), std::uint8_t(i2), std::uint8_t(i3)};
          t.degree[idx] = std::uint8_t(d);
          ++idx;
        }
    t.count[d] = idx;
  }

  auto find = [&](int a0, int a1, int a2, int a3) -> std::int16_t {
    if (a0 + a1 + a2 + a3 > kMaxOrder) return -1;
    for (int k = 0; k < kMaxCoeffs; ++k) {
      const auto& a = t.alpha[k];
      if (a[0] == a0 && a[1] == a1 && a[2] == a2 && a[3] == a3) return std::int16_t(k);
    }
    return -1;
  };

  for (int i = 0; i < kMaxCoeffs; ++i) {
    for (int j = 0; j < kMaxCoeffs; ++j) {
      const auto& a = t.alpha[i];
      const auto& b = t.alpha[j];
      t.prod[i * kMaxCoeffs + j] = find(a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]);
    }
    for (int d = 0; d < kVars; ++d) {
      auto a = t.alpha[i];
      a[d] += 1;
      t.shift[i * kVars + d] = find(a[0], a[1], a[2], a[3]);
    }
  }
  return t;
}

}  // namespace

const Tables& tables() {
  static const Tables t = build_tables();
  return t;
}

}  // namespace jet_detail
}  // namespace cpv
