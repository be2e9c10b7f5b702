// cproj: verification suites, flows, scalar-curvature comparisons and data
// export for the catalog of Kahler structures with a c-projective vector
// field. Exit codes: 0 all checks pass, 1 residual failure, 2 configuration
// or domain error.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cpv/config.hpp"
#include "cpv/dynamics.hpp"
#include "cpv/verifier.hpp"

namespace {

using namespace cpv;

struct GlobalOpts {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::string family;
  bool has_seed = false;
  std::uint64_t seed = 0;
  bool has_tol = false;
  double tol = 0.0;

  // parameter flags (only applied when explicitly given; flags beat the file)
  std::map<std::string, double> params;
  std::string box_text;
  std::string rho_poly, sigma_poly, gfun_poly, rho_cpoly;
  int n = -1;
};

void add_common(CLI::App* cmd, GlobalOpts& g) {
  cmd->add_option("--config", g.config_path, "configuration document");
  cmd->add_option("--seed", [&g](const std::vector<std::string>& v) {
    g.has_seed = true;
    g.seed = std::stoull(v[0]);
    return true;
  }, "RNG seed (64-bit)");
  cmd->add_option("--tol", [&g](const std::vector<std::string>& v) {
    g.has_tol = true;
    g.tol = parse_double(v[0]);
    return true;
  }, "jet-path tolerance override");
  cmd->add_option("--out", g.out_path, "output file path");
  cmd->add_option("--format", g.format, "output format (text|json|csv)")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  cmd->add_option("--family", g.family, "family id (L1..L4, CL1..CL4, D1..D3, GEN_*)");
  cmd->add_option("--n", g.n, "sample count");
  for (const char* key : {"beta", "c1", "c2", "d1", "d2", "eps", "c", "C", "c0"}) {
    cmd->add_option(std::string("--") + key, [&g, key](const std::vector<std::string>& v) {
      g.params[key] = parse_double(v[0]);
      return true;
    }, std::string("family parameter ") + key);
  }
  cmd->add_option("--box", g.box_text, "sampling box: 4 comma-separated lo:hi intervals");
  cmd->add_option("--rho-poly", g.rho_poly, "GEN profile rho coefficients a0,a1,...");
  cmd->add_option("--sigma-poly", g.sigma_poly, "GEN_L profile sigma coefficients");
  cmd->add_option("--gfun-poly", g.gfun_poly, "degenerate G(u2) coefficients");
  cmd->add_option("--rho-cpoly", g.rho_cpoly, "GEN_CL rho(z) 're im' pairs, comma separated");
}

RunConfig build_config(const GlobalOpts& g) {
  RunConfig cfg;
  if (!g.config_path.empty()) cfg = load_config(g.config_path);
  if (!g.family.empty()) {
    const auto id = family_from_name(g.family);
    if (!id) throw std::invalid_argument("unknown family id '" + g.family + "'");
    cfg.spec.id = *id;
  }
  for (const auto& [key, value] : g.params) {
    if (key == "beta") cfg.spec.beta = value;
    else if (key == "c1") cfg.spec.c1 = value;
    else if (key == "c2") cfg.spec.c2 = value;
    else if (key == "d1") cfg.spec.d1 = value;
    else if (key == "d2") cfg.spec.d2 = value;
    else if (key == "eps") cfg.spec.eps = int(value);
    else if (key == "c") cfg.spec.comp_c = value;
    else if (key == "C") cfg.spec.comp_C = value;
    else if (key == "c0") cfg.spec.c0 = value;
  }
  if (!g.box_text.empty()) {
    RunConfig tmp = parse_config("[sampling]\nbox = " + g.box_text + "\n");
    cfg.spec.box = tmp.spec.box;
  }
  if (!g.rho_poly.empty()) cfg.spec.rho_poly = parse_number_list(g.rho_poly);
  if (!g.sigma_poly.empty()) cfg.spec.sigma_poly = parse_number_list(g.sigma_poly);
  if (!g.gfun_poly.empty()) cfg.spec.gfun_poly = parse_number_list(g.gfun_poly);
  if (!g.rho_cpoly.empty()) {
    RunConfig tmp = parse_config("[params]\nrho_cpoly = " + g.rho_cpoly + "\n");
    cfg.spec.rho_cpoly = tmp.spec.rho_cpoly;
  }
  if (g.n > 0) cfg.n = g.n;
  if (g.has_seed) cfg.seed = g.seed;
  if (g.has_tol) cfg.tol.jet = g.tol;
  if (!g.out_path.empty()) cfg.out_path = g.out_path;
  if (!g.format.empty()) cfg.format = g.format;
  cfg.spec.validate();
  return cfg;
}

void emit(const RunConfig& cfg, const std::string& text) {
  std::cout << text;
  if (!cfg.out_path.empty()) {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write to '" + cfg.out_path + "'");
    out << text;
  }
}

int emit_report(const RunConfig& cfg, const ResidualReport& rep) {
  emit(cfg, cfg.format == "json" ? rep.to_json() + "\n" : rep.to_text());
  return rep.all_pass() ? 0 : 1;
}

ChartPoint parse_point(const std::string& text, const FamilySpec& spec) {
  ChartPoint p;
  if (text.empty()) {
    const Box box = default_box(spec);
    for (int i = 0; i < 4; ++i)
      p[i] = 0.5 * (box.iv[size_t(i)].first + box.iv[size_t(i)].second);
    return p;
  }
  const auto v = parse_number_list(text);
  if (v.size() != 4) throw std::invalid_argument("point needs 4 comma-separated coordinates");
  for (int i = 0; i < 4; ++i) p[i] = v[size_t(i)];
  return p;
}

int cmd_families(const std::string& filter, bool as_json) {
  if (!filter.empty() && !family_from_name(filter)) {
    std::cerr << "unknown family id '" << filter << "'\n";
    return 2;
  }
  nlohmann::json arr = nlohmann::json::array();
  for (FamilyId id : all_families()) {
    if (!filter.empty() && filter != family_name(id)) continue;
    const FamilyInfo fi = family_info(id);
    if (as_json) {
      RunConfig cfg;
      cfg.spec.id = id;
      nlohmann::json e;
      e["id"] = fi.name;
      e["kind"] = fi.kind;
      e["params"] = fi.params;
      e["profile"] = fi.profile;
      e["vfield"] = fi.vfield;
      e["domain"] = fi.domain;
      e["config"] = serialize_config(cfg);
      arr.push_back(e);
    } else {
      std::cout << fi.name << "  (" << fi.kind << ")\n"
                << "  parameters: " << fi.params << "\n"
                << "  profile:    " << fi.profile << "\n"
                << "  v:          " << fi.vfield << "\n"
                << "  domain:     " << fi.domain << "\n";
    }
  }
  if (as_json) std::cout << arr.dump(2) << "\n";
  return 0;
}

int cmd_verify(const RunConfig& cfg, double perturb) {
  ResidualReport rep = verify_family(cfg.spec, cfg.n, cfg.seed, cfg.tol, perturb);
  if (perturb > 0.0) {
    // negative-control mode: the perturbed tensor must FAIL the strict check
    const auto pts = sample_points(cfg.spec, std::max(4, cfg.n / 8), cfg.seed);
    double worst = 0.0;
    for (const ChartPoint& p : pts) {
      const StructureBundle b = eval_structure(cfg.spec, p, 2);
      EndoJet dir;
      dir.a = jet_zero_mat(2);
      const RJet f = RJet::variable(p[0], 0, 2);
      for (int d = 0; d < 4; ++d) dir.a[d][d] = f;
      const double unit = main_equation_residual(b.g, b.J, dir);
      EndoJet ap = b.A;
      for (int d = 0; d < 4; ++d) ap.a[d][d] = ap.a[d][d] + (perturb / unit) * f;
      worst = std::max(worst, main_equation_residual(b.g, b.J, ap));
    }
    rep.add("metrisability", "perturbed_main_equation", int(pts.size()), cfg.seed, worst,
            cfg.tol.jet, "negative-control mode: expected to FAIL");
  }
  return emit_report(cfg, rep);
}

int cmd_scal(const RunConfig& cfg_in, const std::string& tau_text, const std::string& p0_text,
             bool compare, double compare_tol) {
  RunConfig cfg = cfg_in;
  const auto taus = parse_range(tau_text);
  if (compare && cfg.spec.id != FamilyId::L2 && cfg.spec.id != FamilyId::D2)
    throw std::invalid_argument("--compare is restricted to the L2 and D2 closed forms");
  if (compare && cfg.spec.id == FamilyId::L2)
    cfg.spec.eps = -1;  // the closed form lives in split signature

  ChartPoint p0;
  if (!p0_text.empty()) {
    p0 = parse_point(p0_text, cfg.spec);
  } else {
    // closed-form normalization: flow starts at x = y = 0 (L2) / x = u1 = 0 (D2)
    p0 = ChartPoint{{0.0, 0.0, 0.0, 0.0}};
    if (cfg.spec.id == FamilyId::D2) p0 = ChartPoint{{0.0, 0.0, 0.0, 0.25}};
  }

  const ScalCurve numeric = scal_along_flow(cfg.spec, p0, taus);
  std::vector<std::array<double, 5>> rows;
  for (size_t i = 0; i < taus.size(); ++i) {
    const ChartPoint q = flow_point(cfg.spec, p0, taus[i], 64);
    rows.push_back({taus[i], q[0], q[1], q[2], q[3]});
  }

  int rc = 0;
  std::vector<double> closed;
  std::string summary;
  if (compare) {
    const double u2 = (family_kind(cfg.spec.id) == FamilyKind::Degenerate) ? p0[3] : 0.0;
    closed = scal_closed_form(cfg.spec, taus, u2).scal;
    double worst = 0.0;
    for (size_t i = 0; i < taus.size(); ++i)
      worst = std::max(worst, std::abs(numeric.scal[i] - closed[i]) /
                                  std::max(1.0, std::abs(closed[i])));
    summary = "# closed-form max relative deviation: " + format_double(worst) + "\n";
    if (worst > compare_tol) rc = 1;
  }
  emit(cfg, curve_csv(rows, true, numeric.scal, closed, "scal_closed") + summary);
  return rc;
}

int cmd_flow(const RunConfig& cfg, const std::string& p0_text, double tau, int steps) {
  const ChartPoint p0 = parse_point(p0_text, cfg.spec);
  const Curve curve = integrate_flow(cfg.spec, p0, tau, steps);
  std::vector<std::array<double, 5>> rows;
  for (const CurveSample& cs : curve.samples)
    rows.push_back({cs.t, cs.p[0], cs.p[1], cs.p[2], cs.p[3]});
  std::string note = curve.truncated ? "# note: curve leaves the family domain\n" : "";
  emit(cfg, curve_csv(rows, false, {}) + note);
  return 0;
}

int cmd_jplanar(const RunConfig& cfg, const std::string& p0_text, const std::string& v0_text,
                const std::string& tau_list_text, double tmax, int steps) {
  const ChartPoint p0 = parse_point(p0_text, cfg.spec);
  Vec4d v0{0.4, 0.3, 0.5, -0.2};
  if (!v0_text.empty()) {
    const auto v = parse_number_list(v0_text);
    if (v.size() != 4) throw std::invalid_argument("--v0 needs 4 comma-separated components");
    for (int i = 0; i < 4; ++i) v0[size_t(i)] = v[size_t(i)];
  }
  std::vector<double> tau_list{0.3, 0.7};
  if (!tau_list_text.empty()) tau_list = parse_number_list(tau_list_text);
  const Curve geo = geodesic(cfg.spec, p0, v0, tmax, steps);
  if (geo.truncated)
    throw std::domain_error("geodesic left the family domain; shorten --tmax or move --p0");
  const ResidualReport rep = flow_invariance_check(cfg.spec, geo, tau_list);
  return emit_report(cfg, rep);
}

int cmd_fit(const RunConfig& cfg) {
  const auto samples = sample_points(cfg.spec, cfg.n, cfg.seed);
  const FitResult fit = fit_lie_constants(cfg.spec, samples);
  if (cfg.format == "json") {
    nlohmann::json j;
    j["family"] = family_name(cfg.spec.id);
    j["gamma"] = fit.k.gamma;
    j["alpha"] = fit.k.alpha;
    j["delta"] = fit.k.delta;
    j["beta"] = fit.k.beta;
    j["consistency"] = fit.consistency;
    emit(cfg, j.dump(2) + "\n");
  } else {
    auto r = [](double v) {
      double snapped = std::round(v);
      if (snapped == 0.0) snapped = 0.0;  // normalize -0
      return std::abs(v - snapped) < 1e-7 ? format_double(snapped) : format_double(v);
    };
    std::ostringstream os;
    os << "fitted (gamma,alpha;delta,beta) = (" << r(fit.k.gamma) << "," << r(fit.k.alpha) << ";"
       << r(fit.k.delta) << "," << r(fit.k.beta) << ")\n"
       << "consistency = " << format_double(fit.consistency) << "\n";
    emit(cfg, os.str());
  }
  return fit.consistency < 1e-7 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification toolkit for Kahler surfaces with c-projective symmetry"};
  app.require_subcommand(1);

  GlobalOpts g_verify, g_scal, g_flow, g_jp, g_fit;

  auto* families = app.add_subcommand("families", "list the structure catalog");
  std::string fam_filter;
  bool fam_json = false;
  families->add_option("--id", fam_filter, "show one entry");
  families->add_flag("--json", fam_json, "machine-readable listing");

  auto* verify = app.add_subcommand("verify", "run the residual suites for one family");
  add_common(verify, g_verify);
  double perturb = 0.0;
  verify->add_option("--perturb", perturb, "negative-control mode: perturb A by this size");

  auto* scal = app.add_subcommand("scal", "scalar curvature of ghat along the flow");
  add_common(scal, g_scal);
  std::string tau_text = "-2:2:81", scal_p0;
  bool compare = false;
  double compare_tol = 1e-6;
  scal->add_option("--tau", tau_text, "tau grid start:stop:count");
  scal->add_option("--p0", scal_p0, "flow start (default: closed-form normalization)");
  scal->add_flag("--compare", compare, "compare against the closed-form evaluator");
  scal->add_option("--compare-tol", compare_tol, "relative tolerance for --compare");

  auto* flow = app.add_subcommand("flow", "integrate the c-projective flow");
  add_common(flow, g_flow);
  std::string flow_p0;
  double flow_tau = 1.0;
  int flow_steps = 256;
  flow->add_option("--p0", flow_p0, "start point x,y,s,t");
  flow->add_option("--tau", flow_tau, "flow time");
  flow->add_option("--steps", flow_steps, "RK4 steps");

  auto* jplanar = app.add_subcommand("jplanar", "J-planarity of flow-pushed geodesics");
  add_common(jplanar, g_jp);
  std::string jp_p0, jp_v0, jp_taus;
  double jp_tmax = 0.4;
  int jp_steps = 64;
  jplanar->add_option("--p0", jp_p0, "geodesic start point");
  jplanar->add_option("--v0", jp_v0, "geodesic start velocity");
  jplanar->add_option("--tau-list", jp_taus, "flow times, comma separated");
  jplanar->add_option("--tmax", jp_tmax, "geodesic parameter length");
  jplanar->add_option("--steps", jp_steps, "integration steps");

  auto* fit = app.add_subcommand("fit", "least-squares recovery of the Lie constants");
  add_common(fit, g_fit);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(families)) return cmd_families(fam_filter, fam_json);
    if (app.got_subcommand(verify)) return cmd_verify(build_config(g_verify), perturb);
    if (app.got_subcommand(scal))
      return cmd_scal(build_config(g_scal), tau_text, scal_p0, compare, compare_tol);
    if (app.got_subcommand(flow))
      return cmd_flow(build_config(g_flow), flow_p0, flow_tau, flow_steps);
    if (app.got_subcommand(jplanar))
      return cmd_jplanar(build_config(g_jp), jp_p0, jp_v0, jp_taus, jp_tmax, jp_steps);
    if (app.got_subcommand(fit)) return cmd_fit(build_config(g_fit));
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
