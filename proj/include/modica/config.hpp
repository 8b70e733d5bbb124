#ifndef MODICA_CONFIG_HPP
#define MODICA_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modica/phi.hpp"

namespace modica {

/// Raised on malformed config text; carries the 1-based source position.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, int col, const std::string& msg)
      : std::runtime_error("config error at line " + std::to_string(line) + ", column " +
                           std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

/// Parsed run configuration. The file format is flat UTF-8 text with
/// [section] headers and key = value pairs; arrays are comma lists;
/// '#' starts a comment.
struct RunConfig {
  // [problem]
  int dim = 1;
  std::vector<int> grid_n;
  std::vector<double> grid_length;
  std::vector<double> grid_origin;
  std::string topology = "periodic";
  std::vector<PhiTerm> phi_terms;
  std::string f_name = "zero";
  std::vector<double> f_params;
  std::string g_name = "zero";
  std::vector<double> g_params;
  std::string s_name = "identity";
  std::vector<double> s_params;
  std::vector<std::string> s_string_params;
  std::optional<double> beta;
  std::string initial = "constant";
  std::vector<double> initial_params{0.0};
  std::string analytic;  // "tanh_heteroclinic" replaces solve with the exact field
  std::optional<double> M;
  double mu = 0.5;
  std::string regime = "auto";  // A, B, or auto

  // [checks]
  std::vector<std::string> checks;

  // [params]
  uint64_t seed = 42;
  uint64_t samples = 100000;
  int max_iters = 50;
  double tol = 1e-10;
  double damping = 1.0;
  std::string jacobian = "numeric_colored";
  std::optional<double> delta;

  // [counterexample]
  double ce_p = 3.0;
  double ce_beta = 4.0;
  int ce_n = 2;

  // [rigidity]
  double rigidity_r0 = 0.0;
  double rigidity_tol = 1e-8;

  // [output]
  std::string out_dir = "out";
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Validates cross-field invariants (registry names exist, check
/// dependencies are satisfied); throws ConfigError on failure.
void validate_config(const RunConfig& cfg);

struct RunOverrides {
  std::optional<uint64_t> seed;
  std::optional<std::string> out_dir;
  double tol_scale = 1.0;
  std::optional<std::vector<std::string>> checks;
};

/// Executes the configured checks in dependency order, writes one summary
/// line per check plus per-check CSVs into the output directory, and
/// returns the process exit status: 0 when every check passed, 1
/// otherwise.
int run_config(const RunConfig& cfg, const RunOverrides& overrides = {});

}  // namespace modica

#endif
