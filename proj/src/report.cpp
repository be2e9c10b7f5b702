#include "cpv/report.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace cpv {

namespace {

std::string fmt_sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3e", x);
  return buf;
}

}  // namespace

std::string ResidualReport::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << c.suite << '\t' << c.check << "\tn=" << c.n_samples << "\tseed=" << c.seed
       << "\tmax_residual=" << fmt_sci(c.max_residual);
    const bool control = c.note.rfind("negative control", 0) == 0;
    os << (control ? "\tfloor=" : "\ttol=") << fmt_sci(c.tolerance) << '\t'
       << (c.pass ? "PASS" : "FAIL");
    if (!c.note.empty()) os << '\t' << c.note;
    os << '\n';
  }
  return os.str();
}

std::string ResidualReport::to_json() const {
  nlohmann::json j;
  j["report"] = name;
  j["pass"] = all_pass();
  auto& arr = j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json e;
    e["suite"] = c.suite;
    e["check"] = c.check;
    e["n_samples"] = c.n_samples;
    e["seed"] = c.seed;
    e["max_residual"] = c.max_residual;
    e["tolerance"] = c.tolerance;
    e["pass"] = c.pass;
    if (!c.note.empty()) e["note"] = c.note;
    arr.push_back(e);
  }
  return j.dump(2);
}

}  // namespace cpv
