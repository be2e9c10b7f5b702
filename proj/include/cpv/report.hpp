#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cpv {

// Seeded splittable 64-bit generator (splitmix64). Streams derived with
// split() are independent, which keeps per-sample draws deterministic even
// when sweeps run in parallel.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [a, b)
  double uniform(double a, double b) { return a + (b - a) * next_double(); }

  SplitMix64 split() { return SplitMix64(next_u64() ^ 0x9e3779b97f4a7c15ULL); }

 private:
  std::uint64_t state_;
};

struct CheckRecord {
  std::string suite;
  std::string check;
  int n_samples = 0;
  std::uint64_t seed = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct ResidualReport {
  std::string name;
  std::vector<CheckRecord> checks;

  void add(const CheckRecord& c) { checks.push_back(c); }
  void add(std::string suite, std::string check, int n, std::uint64_t seed, double residual,
           double tol, std::string note = "") {
    checks.push_back(
        {std::move(suite), std::move(check), n, seed, residual, tol, residual < tol,
         std::move(note)});
  }
  // a negative control passes when the residual EXCEEDS the floor
  void add_control(std::string suite, std::string check, int n, std::uint64_t seed,
                   double residual, double floor, std::string note = "negative control") {
    checks.push_back(
        {std::move(suite), std::move(check), n, seed, residual, floor, residual > floor,
         std::move(note)});
  }
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  void merge(const ResidualReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  }

  std::string to_text() const;
  std::string to_json() const;
};

}  // namespace cpv
