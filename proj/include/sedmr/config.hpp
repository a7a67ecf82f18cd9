#pragma once

// Line-oriented `key = value` run configuration. Precedence: scenario preset,
// then file keys in order, then command-line overrides (appended as extra
// pairs). Unknown keys and malformed values are reported with their line
// number. serialize_config emits a resolved manifest that re-parses to an
// identical run.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sedmr/driver.hpp"

namespace sedmr {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string scenario = "custom";
  std::string problem = "batch";  // batch | fed
  std::size_t n0 = 256;           // fine-grid intervals
  int levels = 5;
  int order = 3;
  double epsilon = 1e-4;
  double theta = 1.0;
  double cfl = 0.5;
  double t_end = 3600.0;
  std::vector<double> snapshots{3600.0};
  double height = 1.0;
  double u_max = 1.0;
  double v_inf = 6.05e-4;
  double rz_exponent = 12.59;
  bool compression = false;
  double sigma0 = 100.0;
  double sigma_exponent = 8.0;
  double u_c = 0.23;
  double delta_rho_g = 14715.0;
  std::size_t table_nodes = std::size_t{1} << 17;
  double u0_value = 0.10;
  double u0_fill = 0.75;   // suspension surface as a fraction of height
  double u0_ramp = 0.03125;  // surface ramp width as a fraction of height
  double u0_tilt = 0.06;   // relative bottom-heavy stratification of u0
  Schedule q = Schedule::constant(0.0);
  std::optional<Schedule> feed;
  std::string out_dir = "out";
  std::string kernels = "auto";
  bool write_masks = true;
};

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;  // 0 for command-line overrides
};

// Splits text into key/value pairs; throws ConfigError("line N: ...").
std::vector<KeyValue> parse_config_text(const std::string& text);

// Scenario defaults: custom | ideal-batch | flocculated-batch | continuous.
RunConfig preset(const std::string& scenario);

// Preset of the last scenario pair (default custom), remaining pairs applied
// in order, snapshots defaulted to {t_end} when empty, then validated.
RunConfig make_config(const std::vector<KeyValue>& pairs);

void validate_config(const RunConfig& cfg);

std::string serialize_config(const RunConfig& cfg);

ProblemSpec build_problem(const RunConfig& cfg);
GridHierarchy build_grid(const RunConfig& cfg);
ThresholdPolicy build_policy(const RunConfig& cfg);
SchemeConfig build_scheme(const RunConfig& cfg);

}  // namespace sedmr
