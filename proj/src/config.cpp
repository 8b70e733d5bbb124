#include "modica/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace modica {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double parse_double(const std::string& s, int line) {
  size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError(line, 1, "expected a number, got '" + s + "'");
  }
  if (pos != s.size()) throw ConfigError(line, 1, "trailing characters in number '" + s + "'");
  return v;
}

int parse_int(const std::string& s, int line) {
  double v = parse_double(s, line);
  int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) throw ConfigError(line, 1, "expected an integer, got '" + s + "'");
  return i;
}

std::vector<double> parse_doubles(const std::string& s, int line) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(parse_double(item, line));
  return out;
}

std::vector<int> parse_ints(const std::string& s, int line) {
  std::vector<int> out;
  for (const auto& item : split_list(s)) out.push_back(parse_int(item, line));
  return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  // parallel term lists assembled at the end
  std::vector<double> phi_c, phi_b, phi_p;
  bool have_phi = false;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(lineno, static_cast<int>(raw.find('[')) + 1, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }

    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(lineno, 1, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(lineno, 1, "empty key");

    auto unknown = [&]() {
      throw ConfigError(lineno, 1, "unknown key '" + key + "' in section [" + section + "]");
    };

    if (section == "problem") {
      if (key == "dim") cfg.dim = parse_int(value, lineno);
      else if (key == "grid_n") cfg.grid_n = parse_ints(value, lineno);
      else if (key == "grid_length") cfg.grid_length = parse_doubles(value, lineno);
      else if (key == "grid_origin") cfg.grid_origin = parse_doubles(value, lineno);
      else if (key == "topology") cfg.topology = value;
      else if (key == "phi_c") { phi_c = parse_doubles(value, lineno); have_phi = true; }
      else if (key == "phi_b") { phi_b = parse_doubles(value, lineno); have_phi = true; }
      else if (key == "phi_p") { phi_p = parse_doubles(value, lineno); have_phi = true; }
      else if (key == "f") cfg.f_name = value;
      else if (key == "f_params") cfg.f_params = parse_doubles(value, lineno);
      else if (key == "g") cfg.g_name = value;
      else if (key == "g_params") cfg.g_params = parse_doubles(value, lineno);
      else if (key == "s") cfg.s_name = value;
      else if (key == "s_params") cfg.s_params = parse_doubles(value, lineno);
      else if (key == "s_h") cfg.s_string_params = split_list(value);
      else if (key == "beta") cfg.beta = parse_double(value, lineno);
      else if (key == "initial") cfg.initial = value;
      else if (key == "initial_params") cfg.initial_params = parse_doubles(value, lineno);
      else if (key == "analytic") cfg.analytic = value;
      else if (key == "M") cfg.M = parse_double(value, lineno);
      else if (key == "mu") cfg.mu = parse_double(value, lineno);
      else if (key == "regime") cfg.regime = value;
      else unknown();
    } else if (section == "checks") {
      if (key == "run") cfg.checks = split_list(value);
      else unknown();
    } else if (section == "params") {
      if (key == "seed") cfg.seed = static_cast<uint64_t>(parse_double(value, lineno));
      else if (key == "samples") cfg.samples = static_cast<uint64_t>(parse_double(value, lineno));
      else if (key == "max_iters") cfg.max_iters = parse_int(value, lineno);
      else if (key == "tol") cfg.tol = parse_double(value, lineno);
      else if (key == "damping") cfg.damping = parse_double(value, lineno);
      else if (key == "jacobian") cfg.jacobian = value;
      else if (key == "delta") cfg.delta = parse_double(value, lineno);
      else unknown();
    } else if (section == "counterexample") {
      if (key == "p") cfg.ce_p = parse_double(value, lineno);
      else if (key == "beta") cfg.ce_beta = parse_double(value, lineno);
      else if (key == "n") cfg.ce_n = parse_int(value, lineno);
      else unknown();
    } else if (section == "rigidity") {
      if (key == "r0") cfg.rigidity_r0 = parse_double(value, lineno);
      else if (key == "tol") cfg.rigidity_tol = parse_double(value, lineno);
      else unknown();
    } else if (section == "output") {
      if (key == "dir") cfg.out_dir = value;
      else unknown();
    } else {
      throw ConfigError(lineno, 1, "unknown section [" + section + "]");
    }
  }

  if (have_phi) {
    if (phi_c.size() != phi_b.size() || phi_c.size() != phi_p.size())
      throw ConfigError(lineno, 1, "phi_c, phi_b, phi_p must have equal lengths");
    for (size_t k = 0; k < phi_c.size(); ++k)
      cfg.phi_terms.push_back({phi_c[k], phi_b[k], phi_p[k]});
  }
  if (cfg.phi_terms.empty()) cfg.phi_terms.push_back({1.0, 0.0, 2.0});
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, 0, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void validate_config(const RunConfig& cfg) {
  auto fail = [](const std::string& msg) { throw ConfigError(0, 0, msg); };
  if (cfg.dim < 1 || cfg.dim > 3) fail("dim must be 1-3");
  if (static_cast<int>(cfg.grid_n.size()) != cfg.dim && !cfg.grid_n.empty())
    fail("grid_n must list one count per axis");
  if (cfg.topology != "periodic" && cfg.topology != "clamped") fail("topology must be periodic or clamped");
  if (cfg.regime != "A" && cfg.regime != "B" && cfg.regime != "auto") fail("regime must be A, B or auto");
  if (cfg.jacobian != "numeric_colored" && cfg.jacobian != "picard")
    fail("jacobian must be numeric_colored or picard");

  static const std::vector<std::string> known_checks{
      "ellipticity", "solve", "bound", "lemma", "remainder", "case", "rigidity", "counterexample"};
  for (const auto& c : cfg.checks)
    if (std::find(known_checks.begin(), known_checks.end(), c) == known_checks.end())
      fail("unknown check '" + c + "'");

  static const std::vector<std::string> fs{"allen_cahn", "linear", "zero"};
  static const std::vector<std::string> gs{"zero", "power_drift", "bilinear_drift", "constant_drift"};
  static const std::vector<std::string> ss{"identity", "power_u", "constant_drift", "linear_drift"};
  static const std::vector<std::string> inits{"constant", "cos_x", "cos_xy"};
  if (std::find(fs.begin(), fs.end(), cfg.f_name) == fs.end()) fail("unknown f '" + cfg.f_name + "'");
  if (std::find(gs.begin(), gs.end(), cfg.g_name) == gs.end()) fail("unknown g '" + cfg.g_name + "'");
  if (std::find(ss.begin(), ss.end(), cfg.s_name) == ss.end()) fail("unknown s '" + cfg.s_name + "'");
  if (std::find(inits.begin(), inits.end(), cfg.initial) == inits.end())
    fail("unknown initial '" + cfg.initial + "'");
  if (!cfg.analytic.empty() && cfg.analytic != "tanh_heteroclinic")
    fail("unknown analytic field '" + cfg.analytic + "'");

  auto wants = [&](const char* name) {
    return std::find(cfg.checks.begin(), cfg.checks.end(), name) != cfg.checks.end();
  };
  bool has_field = wants("solve") || !cfg.analytic.empty();
  if ((wants("bound") || wants("lemma") || wants("remainder") || wants("rigidity")) && !has_field)
    fail("bound/lemma/remainder/rigidity need either the solve check or an analytic field");
  if (wants("case") && !cfg.beta) fail("the case check needs a declared beta");
  if (wants("remainder") && !cfg.beta) fail("the remainder check needs a declared beta");
}

}  // namespace modica
