#include "ambp/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ambp {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& v,
                    std::vector<std::string>& issues) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    issues.push_back(key + ": cannot parse number '" + v + "'");
    return 0.0;
  }
}

std::vector<double> parse_list(const std::string& key, const std::string& v,
                               std::vector<std::string>& issues) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item, issues));
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v,
                std::vector<std::string>& issues) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  issues.push_back(key + ": cannot parse boolean '" + v + "'");
  return false;
}

}  // namespace

std::string format_double(double v) {
  // shortest representation that parses back to the same bits
  char buf[64];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::stod(buf) == v) return buf;
  }
  return buf;
}

void validate(const QuadratureSpec& q, std::vector<std::string>& issues) {
  if (q.node_count < 32) issues.push_back("solver.quad_nodes: must be >= 32");
  if (!(q.tail_width_sd >= 8.0))
    issues.push_back("solver.tail_width: must be >= 8 standard deviations");
  if (!(q.panel_width_sd > 0.0))
    issues.push_back("solver.panel_width: must be > 0");
  if (!(q.rel_tol > 0.0)) issues.push_back("solver.quad_tol: must be > 0");
}

ProblemConfig ProblemConfig::defaults() { return ProblemConfig{}; }

void ProblemConfig::validate_or_throw() const {
  std::vector<std::string> issues;
  validate(market, issues);
  validate(contract, issues);
  validate(risk, issues);
  validate(ambiguity, issues);
  validate(prior, issues);
  validate(quadrature, issues);
  if (!(wealth > 0.0)) issues.push_back("market.initial_wealth: must be > 0");
  if (ambiguity.kind == AmbiguityKind::power &&
      !(risk.alpha > 0.0 && risk.alpha < 1.0))
    issues.push_back(
        "ambiguity/risk: power-power requires positive utility (alpha in (0,1))");
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

ProblemConfig parse_config(const std::string& text) {
  ProblemConfig cfg = ProblemConfig::defaults();
  std::vector<std::string> issues;
  std::vector<double> prior_z = cfg.prior.drifts, prior_p = cfg.prior.weights;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool ambiguity_kind_set = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.push_back("line " + std::to_string(lineno) + ": bad section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    std::string full = section + "." + key;

    if (section == "market") {
      if (key == "r") cfg.market.rate = parse_double(full, val, issues);
      else if (key == "sigma") cfg.market.sigma = parse_double(full, val, issues);
      else if (key == "horizon") cfg.market.horizon = parse_double(full, val, issues);
      else if (key == "initial_wealth") cfg.wealth = parse_double(full, val, issues);
      else issues.push_back(full + ": unknown key");
    } else if (section == "contract") {
      if (key == "delta") cfg.contract.delta = parse_double(full, val, issues);
      else if (key == "strike") cfg.contract.strike = parse_double(full, val, issues);
      else if (key == "base_fee") cfg.contract.base_fee = parse_double(full, val, issues);
      else if (key == "linear") cfg.contract.linear = parse_bool(full, val, issues);
      else issues.push_back(full + ": unknown key");
    } else if (section == "risk") {
      if (key == "alpha") cfg.risk.alpha = parse_double(full, val, issues);
      else issues.push_back(full + ": unknown key");
    } else if (section == "ambiguity") {
      if (key == "kind") {
        ambiguity_kind_set = true;
        if (val == "neutral") cfg.ambiguity.kind = AmbiguityKind::neutral;
        else if (val == "power") cfg.ambiguity.kind = AmbiguityKind::power;
        else if (val == "exponential") cfg.ambiguity.kind = AmbiguityKind::exponential;
        else if (val == "log") cfg.ambiguity.kind = AmbiguityKind::log;
        else issues.push_back(full + ": unknown aggregator '" + val + "'");
      } else if (key == "lambda") cfg.ambiguity.lambda = parse_double(full, val, issues);
      else if (key == "gamma") cfg.ambiguity.gamma = parse_double(full, val, issues);
      else issues.push_back(full + ": unknown key");
    } else if (section == "prior") {
      if (key == "z") prior_z = parse_list(full, val, issues);
      else if (key == "p") prior_p = parse_list(full, val, issues);
      else issues.push_back(full + ": unknown key");
    } else if (section == "solver") {
      if (key == "quad_nodes") cfg.quadrature.node_count =
          static_cast<int>(parse_double(full, val, issues));
      else if (key == "tail_width") cfg.quadrature.tail_width_sd = parse_double(full, val, issues);
      else if (key == "panel_width") cfg.quadrature.panel_width_sd = parse_double(full, val, issues);
      else if (key == "quad_tol") cfg.quadrature.rel_tol = parse_double(full, val, issues);
      else if (key == "max_depth") cfg.quadrature.max_depth =
          static_cast<int>(parse_double(full, val, issues));
      else if (key == "root_tol") cfg.solver.root_tol = parse_double(full, val, issues);
      else if (key == "budget_tol") cfg.solver.budget_rel_tol = parse_double(full, val, issues);
      else if (key == "grid_step") cfg.solver.grid_step = parse_double(full, val, issues);
      else if (key == "refine_width") cfg.solver.refine_width = parse_double(full, val, issues);
      else if (key == "simplex_eps") cfg.solver.simplex_eps = parse_double(full, val, issues);
      else issues.push_back(full + ": unknown key");
    } else {
      issues.push_back("line " + std::to_string(lineno) + ": unknown section [" +
                       section + "]");
    }
  }
  if (prior_z.size() != prior_p.size())
    issues.push_back("prior: z and p lists must have equal length");
  else cfg.prior = DiscretePrior{prior_z, prior_p};
  (void)ambiguity_kind_set;
  if (!issues.empty()) throw ConfigError(std::move(issues));
  cfg.validate_or_throw();
  return cfg;
}

ProblemConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::map<std::string, std::string> config_entries(const ProblemConfig& cfg) {
  std::map<std::string, std::string> m;
  m["market.r"] = format_double(cfg.market.rate);
  m["market.sigma"] = format_double(cfg.market.sigma);
  m["market.horizon"] = format_double(cfg.market.horizon);
  m["market.initial_wealth"] = format_double(cfg.wealth);
  m["contract.delta"] = format_double(cfg.contract.delta);
  m["contract.strike"] = format_double(cfg.contract.strike);
  m["contract.base_fee"] = format_double(cfg.contract.base_fee);
  m["contract.linear"] = cfg.contract.linear ? "true" : "false";
  m["risk.alpha"] = format_double(cfg.risk.alpha);
  m["ambiguity.kind"] = to_string(cfg.ambiguity.kind);
  if (cfg.ambiguity.kind == AmbiguityKind::power)
    m["ambiguity.lambda"] = format_double(cfg.ambiguity.lambda);
  if (cfg.ambiguity.kind == AmbiguityKind::exponential)
    m["ambiguity.gamma"] = format_double(cfg.ambiguity.gamma);
  {
    std::string z, p;
    for (std::size_t i = 0; i < cfg.prior.size(); ++i) {
      if (i) { z += ", "; p += ", "; }
      z += format_double(cfg.prior.drifts[i]);
      p += format_double(cfg.prior.weights[i]);
    }
    m["prior.z"] = z;
    m["prior.p"] = p;
  }
  m["solver.quad_nodes"] = std::to_string(cfg.quadrature.node_count);
  m["solver.tail_width"] = format_double(cfg.quadrature.tail_width_sd);
  m["solver.panel_width"] = format_double(cfg.quadrature.panel_width_sd);
  m["solver.quad_tol"] = format_double(cfg.quadrature.rel_tol);
  m["solver.max_depth"] = std::to_string(cfg.quadrature.max_depth);
  m["solver.root_tol"] = format_double(cfg.solver.root_tol);
  m["solver.budget_tol"] = format_double(cfg.solver.budget_rel_tol);
  m["solver.grid_step"] = format_double(cfg.solver.grid_step);
  m["solver.refine_width"] = format_double(cfg.solver.refine_width);
  m["solver.simplex_eps"] = format_double(cfg.solver.simplex_eps);
  return m;
}

std::string serialize_config(const ProblemConfig& cfg) {
  auto m = config_entries(cfg);
  std::ostringstream os;
  std::string cur;
  for (const auto& [full, val] : m) {
    auto dot = full.find('.');
    std::string sec = full.substr(0, dot), key = full.substr(dot + 1);
    if (sec != cur) {
      if (!cur.empty()) os << "\n";
      os << "[" << sec << "]\n";
      cur = sec;
    }
    os << key << " = " << val << "\n";
  }
  return os.str();
}

}  // namespace ambp
