#include "rsmooth/manifest.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rsmooth {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<std::string>& manifest_known_keys() {
  static const std::vector<std::string> keys = {
      // run
      "command", "seed", "seeds", "out", "format", "workers",
      // instance selection and parameters
      "instance", "delta", "L0", "L1", "sigma", "sigma1", "sigma2", "eps", "dim", "T",
      "growth_c", "g_norm", "c1", "c2", "beta_g2",
      // optimizer
      "optimizer", "eta", "gamma", "alpha_rule", "alpha_eta", "alpha_c", "alpha_table_norms",
      "alpha_table_values",
      // trajectory / sweep
      "steps", "T_cap", "sweep_param", "sweep_values", "eta_tie", "eta_tie_factor",
      // certification
      "samples", "profile_out",
      // walk layer
      "p", "lambda", "n_mc", "horizon", "barrier", "method", "tol", "survival_delta",
  };
  return keys;
}

bool RunManifest::has(const std::string& key) const {
  return std::any_of(entries.begin(), entries.end(),
                     [&](const auto& kv) { return kv.first == key; });
}

std::string RunManifest::get(const std::string& key, const std::string& fallback) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  return fallback;
}

double RunManifest::get_num(const std::string& key, double fallback) const {
  std::string v = get(key);
  if (v.empty()) return fallback;
  std::size_t pos = 0;
  double out = std::stod(v, &pos);
  if (pos != v.size())
    throw std::invalid_argument("manifest: key '" + key + "' is not a number: " + v);
  return out;
}

long RunManifest::get_long(const std::string& key, long fallback) const {
  std::string v = get(key);
  if (v.empty()) return fallback;
  std::size_t pos = 0;
  long out = std::stol(v, &pos);
  if (pos != v.size())
    throw std::invalid_argument("manifest: key '" + key + "' is not an integer: " + v);
  return out;
}

std::vector<double> RunManifest::get_list(const std::string& key) const {
  std::vector<double> out;
  std::string v = get(key);
  if (v.empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(trim(item)));
  return out;
}

void RunManifest::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries)
    if (k == key) {
      v = value;
      return;
    }
  entries.emplace_back(key, value);
}

void RunManifest::set_num(const std::string& key, double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  set(key, buf);
}

RunManifest parse_manifest_text(const std::string& text) {
  RunManifest m;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  const auto& known = manifest_known_keys();
  while (std::getline(ss, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("manifest line " + std::to_string(lineno) +
                                  ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::invalid_argument("manifest: unknown key '" + key + "'");
    if (m.has(key))
      throw std::invalid_argument("manifest: duplicate key '" + key + "'");
    m.entries.emplace_back(key, value);
  }
  return m;
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest_text(ss.str());
}

std::string serialize_manifest(const RunManifest& m) {
  std::ostringstream os;
  for (const auto& [k, v] : m.entries) os << k << " = " << v << "\n";
  return os.str();
}

RunManifest manifest_from_output(const std::string& file_text) {
  std::stringstream ss(file_text);
  std::string line, body;
  bool inside = false;
  while (std::getline(ss, line)) {
    std::string t = trim(line);
    if (t == "# manifest-begin") {
      inside = true;
      continue;
    }
    if (t == "# manifest-end") break;
    if (inside && t.rfind("# ", 0) == 0) body += t.substr(2) + "\n";
  }
  if (body.empty()) throw std::invalid_argument("no embedded manifest found in output");
  return parse_manifest_text(body);
}

ProblemParams params_from_manifest(const RunManifest& m) {
  ProblemParams p;
  p.Delta = m.get_num("delta", 1.0);
  p.L0 = m.get_num("L0", 1.0);
  p.L1 = m.get_num("L1", 1.0);
  p.sigma = m.get_num("sigma", 0.0);
  p.sigma1 = m.get_num("sigma1", 0.0);
  p.sigma2 = m.get_num("sigma2", 0.0);
  p.epsilon = m.get_num("eps", 0.1);
  return p;
}

StepSizeFn stepsize_from_manifest(const RunManifest& m) {
  std::string rule = m.get("alpha_rule", "constant");
  double eta = m.get_num("alpha_eta", m.get_num("eta", 1.0));
  double c = m.get_num("alpha_c", 1.0);
  if (rule == "constant") return StepSizeFn::constant_rule(eta);
  if (rule == "clip") return StepSizeFn::clip_rule(eta, c);
  if (rule == "normalized") return StepSizeFn::normalized_rule(c);
  if (rule == "negative") return StepSizeFn::negative_rule(c);
  if (rule == "table") {
    std::vector<double> norms = m.get_list("alpha_table_norms");
    std::vector<double> values = m.get_list("alpha_table_values");
    return StepSizeFn::table_rule(std::move(norms), std::move(values));
  }
  throw std::invalid_argument("unknown alpha_rule '" + rule +
                              "' (constant|clip|normalized|negative|table)");
}

OptimizerConfig optimizer_from_manifest(const RunManifest& m) {
  OptimizerConfig cfg;
  cfg.kind = optimizer_from_name(m.get("optimizer", "dan"));
  cfg.eta = m.get_num("eta", 1.0);
  cfg.gamma = m.get_num("gamma", 1e-8);  // the practical small-constant regime
  if (cfg.kind == OptimizerKind::single_step) cfg.alpha = stepsize_from_manifest(m);
  return cfg;
}

ProblemInstance instance_from_manifest(const RunManifest& m) {
  std::string family = m.get("instance");
  if (family.empty()) throw std::invalid_argument("manifest: key 'instance' is required");
  ProblemParams p = params_from_manifest(m);
  if (family == "psi") return psi_objective(p);
  if (family == "hinge") return hinge_objective(p);
  if (family == "coordwise") return coordwise_exp_objective(p, m.get_long("T", m.get_long("dim", 8)));
  // chain and drori depend on the optimizer's (eta, gamma); default gamma
  // matches optimizer_from_manifest so a run stays self-consistent
  if (family == "drori")
    return drori_objective(p, m.get_num("eta", 1.0), m.get_num("gamma", 1e-8),
                           m.get_long("T", 8));
  if (family == "chain") {
    double eta = m.get_num("eta", 1.0);
    double gamma = m.get_num("gamma", 1e-8);
    long t_max = m.get_long("T", 64);
    auto sched = std::make_shared<const ChainSchedule>(
        chain_schedule(p, eta, gamma, t_max, m.get_num("growth_c", 576.0)));
    return chain_objective(sched);
  }
  if (family == "periodic") {
    double gn = m.get_num("g_norm", std::max(p.epsilon, 1.0));
    Vec g = {gn};
    StepSizeFn alpha = stepsize_from_manifest(m);
    return periodic_exp_objective(g, alpha(g), p);
  }
  if (family == "tricky") {
    double c1 = m.get_num("c1", -1.0);
    double c2 = m.get_num("c2", 4.0);
    double prob = m.get_num("p", 2.0 / 3.0);
    StepSizeFn alpha = stepsize_from_manifest(m);
    Vec g2 = {c2};
    double beta_g2 = m.has("beta_g2") ? m.get_num("beta_g2", 0.0)
                                      : alpha(g2) * std::abs(c2);
    return tricky_linear_objective(Vec{c1}, g2, prob, p, beta_g2);
  }
  if (family == "quadbump")
    return quad_bump_objective(stepsize_from_manifest(m), p, m.get_long("T", 8));
  throw std::invalid_argument(
      "unknown instance '" + family +
      "' (psi|chain|drori|coordwise|hinge|periodic|tricky|quadbump)");
}

void emit_plot_data(std::ostream& out, const SweepResult& result, const std::string& x_axis,
                    const std::string& y_axis, const std::vector<std::string>& header_lines) {
  if (result.rows.empty()) throw std::invalid_argument("emit_plot_data: empty table");
  if (x_axis != result.axis)
    throw std::invalid_argument("emit_plot_data: axis '" + x_axis + "' not present in table (axis is '" +
                                result.axis + "')");
  if (y_axis != "t_eps")
    throw std::invalid_argument("emit_plot_data: axis '" + y_axis + "' not present in table");
  for (const auto& line : header_lines) out << "# " << line << "\n";
  char buf[80];
  if (result.fitted) {
    std::snprintf(buf, sizeof buf, "# slope=%.6g intercept=%.6g r2=%.6g", result.fit.slope,
                  result.fit.intercept, result.fit.r2);
    out << buf << "\n";
  }
  out << "# " << x_axis << " " << y_axis << "\n";
  for (const auto& row : result.rows) {
    std::snprintf(buf, sizeof buf, "%.17g", row.param);
    out << buf << " ";
    if (row.t_eps == kNotReached)
      out << "NOT_REACHED";
    else
      out << row.t_eps;
    out << "\n";
  }
}

}  // namespace rsmooth
