#include "cpv/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace cpv {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += format_double(v[i]);
  }
  return s;
}

std::string join_complex(const std::vector<std::complex<double>>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += format_double(v[i].real()) + " " + format_double(v[i].imag());
  }
  return s;
}

}  // namespace

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  size_t pos = 0;
  double v;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  if (pos != t.size()) throw std::invalid_argument("trailing characters in number: '" + text + "'");
  return v;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& part : split(text, ','))
    if (!trim(part).empty()) out.push_back(parse_double(part));
  return out;
}

std::vector<double> parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw std::invalid_argument("range must be 'start:stop:count'");
  const double a = parse_double(parts[0]);
  const double b = parse_double(parts[1]);
  const int n = int(parse_double(parts[2]));
  if (n < 2) throw std::invalid_argument("range needs at least 2 points");
  std::vector<double> g(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) g[size_t(i)] = a + (b - a) * i / (n - 1);
  return g;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (section == "family" && key == "id") {
        const auto id = family_from_name(value);
        if (!id) throw std::invalid_argument("unknown family id '" + value + "'");
        cfg.spec.id = *id;
      } else if (section == "params") {
        if (key == "beta") cfg.spec.beta = parse_double(value);
        else if (key == "c1") cfg.spec.c1 = parse_double(value);
        else if (key == "c2") cfg.spec.c2 = parse_double(value);
        else if (key == "d1") cfg.spec.d1 = parse_double(value);
        else if (key == "d2") cfg.spec.d2 = parse_double(value);
        else if (key == "eps") cfg.spec.eps = int(parse_double(value));
        else if (key == "c") cfg.spec.comp_c = parse_double(value);
        else if (key == "C") cfg.spec.comp_C = parse_double(value);
        else if (key == "c0") cfg.spec.c0 = parse_double(value);
        else if (key == "rho_poly") cfg.spec.rho_poly = parse_number_list(value);
        else if (key == "sigma_poly") cfg.spec.sigma_poly = parse_number_list(value);
        else if (key == "gfun_poly") cfg.spec.gfun_poly = parse_number_list(value);
        else if (key == "rho_cpoly") {
          cfg.spec.rho_cpoly.clear();
          for (const std::string& pair : split(value, ',')) {
            const auto nums = split(trim(pair), ' ');
            if (nums.size() != 2)
              throw std::invalid_argument("rho_cpoly entries are 're im' pairs");
            cfg.spec.rho_cpoly.emplace_back(parse_double(nums[0]), parse_double(nums[1]));
          }
        } else {
          throw std::invalid_argument("unknown key '" + key + "' in [params]");
        }
      } else if (section == "sampling") {
        if (key == "n") cfg.n = int(parse_double(value));
        else if (key == "seed") cfg.seed = std::uint64_t(std::stoull(trim(value)));
        else if (key == "box") {
          const auto ivs = split(value, ',');
          if (ivs.size() != 4)
            throw std::invalid_argument("box needs 4 'lo:hi' intervals");
          Box box;
          for (int i = 0; i < 4; ++i) {
            const auto lh = split(trim(ivs[size_t(i)]), ':');
            if (lh.size() != 2) throw std::invalid_argument("box interval must be 'lo:hi'");
            box.iv[size_t(i)] = {parse_double(lh[0]), parse_double(lh[1])};
          }
          cfg.spec.box = box;
        } else {
          throw std::invalid_argument("unknown key '" + key + "' in [sampling]");
        }
      } else if (section == "tolerances") {
        if (key == "jet") cfg.tol.jet = parse_double(value);
        else if (key == "fd") cfg.tol.fd = parse_double(value);
        else throw std::invalid_argument("unknown key '" + key + "' in [tolerances]");
      } else if (section == "output") {
        if (key == "path") cfg.out_path = value;
        else if (key == "format") {
          if (value != "text" && value != "json" && value != "csv")
            throw std::invalid_argument("format must be text, json or csv");
          cfg.format = value;
        } else {
          throw std::invalid_argument("unknown key '" + key + "' in [output]");
        }
      } else {
        throw std::invalid_argument("unknown section/key [" + section + "] " + key);
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "[family]\n" << "id = " << family_name(cfg.spec.id) << "\n\n";
  os << "[params]\n";
  os << "beta = " << format_double(cfg.spec.beta) << "\n";
  os << "c1 = " << format_double(cfg.spec.c1) << "\n";
  os << "c2 = " << format_double(cfg.spec.c2) << "\n";
  os << "d1 = " << format_double(cfg.spec.d1) << "\n";
  os << "d2 = " << format_double(cfg.spec.d2) << "\n";
  os << "eps = " << cfg.spec.eps << "\n";
  os << "c = " << format_double(cfg.spec.comp_c) << "\n";
  os << "C = " << format_double(cfg.spec.comp_C) << "\n";
  os << "c0 = " << format_double(cfg.spec.c0) << "\n";
  os << "rho_poly = " << join_doubles(cfg.spec.rho_poly) << "\n";
  os << "sigma_poly = " << join_doubles(cfg.spec.sigma_poly) << "\n";
  os << "rho_cpoly = " << join_complex(cfg.spec.rho_cpoly) << "\n";
  os << "gfun_poly = " << join_doubles(cfg.spec.gfun_poly) << "\n\n";
  os << "[sampling]\n";
  os << "n = " << cfg.n << "\n";
  os << "seed = " << cfg.seed << "\n";
  if (cfg.spec.box) {
    os << "box = ";
    for (int i = 0; i < 4; ++i) {
      if (i) os << ", ";
      os << format_double(cfg.spec.box->iv[size_t(i)].first) << ":"
         << format_double(cfg.spec.box->iv[size_t(i)].second);
    }
    os << "\n";
  }
  os << "\n[tolerances]\n";
  os << "jet = " << format_double(cfg.tol.jet) << "\n";
  os << "fd = " << format_double(cfg.tol.fd) << "\n\n";
  os << "[output]\n";
  if (!cfg.out_path.empty()) os << "path = " << cfg.out_path << "\n";
  os << "format = " << cfg.format << "\n";
  return os.str();
}

std::string format_double(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string curve_csv(const std::vector<std::array<double, 5>>& rows, bool with_scal,
                      const std::vector<double>& scal, const std::vector<double>& scal2,
                      const std::string& scal2_name) {
  std::string out = "tau,x,y,s,t";
  if (with_scal) out += ",scal";
  if (!scal2.empty()) out += "," + scal2_name;
  out += "\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    for (int k = 0; k < 5; ++k) {
      if (k) out += ",";
      out += format_double(rows[i][size_t(k)]);
    }
    if (with_scal) out += "," + format_double(scal[i]);
    if (!scal2.empty()) out += "," + format_double(scal2[i]);
    out += "\n";
  }
  return out;
}

}  // namespace cpv
