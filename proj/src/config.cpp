#include "sedmr/config.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <utility>

namespace sedmr {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string where(const KeyValue& kv) {
  if (kv.line > 0) return "line " + std::to_string(kv.line) + ": ";
  return "";
}

[[noreturn]] void fail(const KeyValue& kv, const std::string& what) {
  throw ConfigError(where(kv) + "key '" + kv.key + "': " + what);
}

double parse_double(const KeyValue& kv, const std::string& text) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) fail(kv, "trailing characters in '" + text + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(kv, "expected a number, got '" + text + "'");
  }
}

long long parse_integer(const KeyValue& kv) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(kv.value, &pos);
    if (pos != kv.value.size())
      fail(kv, "trailing characters in '" + kv.value + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(kv, "expected an integer, got '" + kv.value + "'");
  }
}

bool parse_bool(const KeyValue& kv) {
  if (kv.value == "true" || kv.value == "1") return true;
  if (kv.value == "false" || kv.value == "0") return false;
  fail(kv, "expected true/false, got '" + kv.value + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = s.find(sep, start);
    if (at == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, at - start));
    start = at + 1;
  }
}

std::vector<double> parse_double_list(const KeyValue& kv) {
  std::vector<double> values;
  if (trim(kv.value).empty()) return values;
  for (const std::string& part : split(kv.value, ','))
    values.push_back(parse_double(kv, trim(part)));
  return values;
}

// "v" for a constant, or "t0:v0,t1:v1,..." piecewise-constant in time.
Schedule parse_schedule(const KeyValue& kv) {
  if (kv.value.find(':') == std::string::npos)
    return Schedule::constant(parse_double(kv, trim(kv.value)));
  Schedule s;
  s.times.clear();
  s.values.clear();
  for (const std::string& part : split(kv.value, ',')) {
    const auto pieces = split(part, ':');
    if (pieces.size() != 2)
      fail(kv, "expected 't:value' entries, got '" + part + "'");
    s.times.push_back(parse_double(kv, trim(pieces[0])));
    s.values.push_back(parse_double(kv, trim(pieces[1])));
  }
  return s;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += fmt(values[i]);
  }
  return out;
}

std::string fmt(const Schedule& s) {
  std::string out;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    if (i) out += ',';
    out += fmt(s.times[i]) + ':' + fmt(s.values[i]);
  }
  return out;
}

void set_key(RunConfig& cfg, const KeyValue& kv) {
  const std::string& k = kv.key;
  if (k == "problem") {
    if (kv.value != "batch" && kv.value != "fed")
      fail(kv, "expected batch or fed");
    cfg.problem = kv.value;
  } else if (k == "n0") {
    const long long v = parse_integer(kv);
    if (v < 2) fail(kv, "must be at least 2");
    cfg.n0 = static_cast<std::size_t>(v);
  } else if (k == "levels") {
    cfg.levels = static_cast<int>(parse_integer(kv));
  } else if (k == "order") {
    cfg.order = static_cast<int>(parse_integer(kv));
  } else if (k == "epsilon") {
    cfg.epsilon = parse_double(kv, kv.value);
  } else if (k == "theta") {
    cfg.theta = parse_double(kv, kv.value);
  } else if (k == "cfl") {
    cfg.cfl = parse_double(kv, kv.value);
  } else if (k == "t_end") {
    cfg.t_end = parse_double(kv, kv.value);
  } else if (k == "snapshots") {
    cfg.snapshots = parse_double_list(kv);
  } else if (k == "height") {
    cfg.height = parse_double(kv, kv.value);
  } else if (k == "u_max") {
    cfg.u_max = parse_double(kv, kv.value);
  } else if (k == "v_inf") {
    cfg.v_inf = parse_double(kv, kv.value);
  } else if (k == "rz_exponent") {
    cfg.rz_exponent = parse_double(kv, kv.value);
  } else if (k == "compression") {
    cfg.compression = parse_bool(kv);
  } else if (k == "sigma0") {
    cfg.sigma0 = parse_double(kv, kv.value);
  } else if (k == "sigma_exponent") {
    cfg.sigma_exponent = parse_double(kv, kv.value);
  } else if (k == "u_c") {
    cfg.u_c = parse_double(kv, kv.value);
  } else if (k == "delta_rho_g") {
    cfg.delta_rho_g = parse_double(kv, kv.value);
  } else if (k == "table_nodes") {
    const long long v = parse_integer(kv);
    if (v < 16) fail(kv, "must be at least 16");
    cfg.table_nodes = static_cast<std::size_t>(v);
  } else if (k == "u0_value") {
    cfg.u0_value = parse_double(kv, kv.value);
  } else if (k == "u0_fill") {
    cfg.u0_fill = parse_double(kv, kv.value);
  } else if (k == "u0_ramp") {
    cfg.u0_ramp = parse_double(kv, kv.value);
  } else if (k == "u0_tilt") {
    cfg.u0_tilt = parse_double(kv, kv.value);
  } else if (k == "q") {
    cfg.q = parse_schedule(kv);
  } else if (k == "feed") {
    if (trim(kv.value) == "none")
      cfg.feed.reset();
    else
      cfg.feed = parse_schedule(kv);
  } else if (k == "out_dir") {
    cfg.out_dir = kv.value;
  } else if (k == "kernels") {
    cfg.kernels = kv.value;
  } else if (k == "write_masks") {
    cfg.write_masks = parse_bool(kv);
  } else {
    throw ConfigError(where(kv) + "unknown key '" + k + "'");
  }
}

}  // namespace

std::vector<KeyValue> parse_config_text(const std::string& text) {
  std::vector<KeyValue> pairs;
  int line_no = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++line_no;
    std::string line = raw;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + line + "'");
    KeyValue kv;
    kv.key = trim(line.substr(0, eq));
    kv.value = trim(line.substr(eq + 1));
    kv.line = line_no;
    if (kv.key.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    pairs.push_back(std::move(kv));
  }
  return pairs;
}

RunConfig preset(const std::string& scenario) {
  RunConfig cfg;
  cfg.scenario = scenario;
  if (scenario == "custom") {
    return cfg;
  }
  if (scenario == "ideal-batch") {
    // Ideal suspension: pure hindered settling, no effective stress.
    cfg.problem = "batch";
    cfg.n0 = 256;
    cfg.levels = 5;
    cfg.epsilon = 1e-4;
    cfg.t_end = 3600.0;
    cfg.snapshots = {60.0, 300.0, 1800.0, 3600.0};
    cfg.compression = false;
    cfg.u0_value = 0.10;
    return cfg;
  }
  if (scenario == "flocculated-batch") {
    cfg.problem = "batch";
    cfg.n0 = 128;
    cfg.levels = 5;
    cfg.epsilon = 1e-3;
    cfg.t_end = 7200.0;
    cfg.snapshots = {60.0, 1800.0, 3600.0, 7200.0};
    cfg.compression = true;
    cfg.u0_value = 0.125;
    return cfg;
  }
  if (scenario == "continuous") {
    // Fed column: clear water filled through a top feed against a bottom
    // discharge.
    cfg.problem = "fed";
    cfg.n0 = 512;
    cfg.levels = 5;
    cfg.epsilon = 5e-4;
    cfg.t_end = 7200.0;
    cfg.snapshots = {1800.0, 3600.0, 7200.0};
    cfg.compression = true;
    cfg.u0_value = 0.0;
    cfg.q = Schedule::constant(-1.0e-5);
    cfg.feed = Schedule::constant(-3.0e-6);
    return cfg;
  }
  throw ConfigError("scenario: unknown name '" + scenario +
                    "' (expected custom, ideal-batch, flocculated-batch or "
                    "continuous)");
}

RunConfig make_config(const std::vector<KeyValue>& pairs) {
  std::string scenario = "custom";
  for (const KeyValue& kv : pairs)
    if (kv.key == "scenario") scenario = kv.value;
  RunConfig cfg = preset(scenario);
  for (const KeyValue& kv : pairs) {
    if (kv.key == "scenario") continue;
    set_key(cfg, kv);
  }
  if (cfg.snapshots.empty()) cfg.snapshots = {cfg.t_end};
  validate_config(cfg);
  return cfg;
}

void validate_config(const RunConfig& cfg) {
  const auto fail_field = [](const std::string& msg) {
    throw ConfigError(msg);
  };
  if (cfg.problem != "batch" && cfg.problem != "fed")
    fail_field("problem: expected batch or fed");
  try {
    GridHierarchy::create(cfg.n0, cfg.levels, cfg.order, cfg.height);
  } catch (const std::invalid_argument& e) {
    fail_field(e.what());
  }
  if (!(cfg.epsilon >= 0.0)) fail_field("epsilon: must be non-negative");
  if (!(cfg.theta >= 0.0) || cfg.theta > 2.0)
    fail_field("theta: must lie in [0, 2]");
  if (!(cfg.cfl > 0.0) || cfg.cfl > 1.0)
    fail_field("cfl: must lie in (0, 1]");
  if (!(cfg.t_end >= 0.0)) fail_field("t_end: must be non-negative");
  double prev = 0.0;
  for (double t : cfg.snapshots) {
    if (!(t >= prev))
      fail_field("snapshots: must be non-negative and non-decreasing");
    if (t > cfg.t_end) fail_field("snapshots: must not exceed t_end");
    prev = t;
  }
  if (cfg.u_max != 1.0)
    fail_field(
        "u_max: the Richardson-Zaki flux form vanishes only at 1; set "
        "u_max = 1");
  if (!(cfg.v_inf > 0.0)) fail_field("v_inf: must be positive");
  if (!(cfg.rz_exponent > 0.0)) fail_field("rz_exponent: must be positive");
  if (cfg.compression) {
    if (!(cfg.u_c > 0.0) || !(cfg.u_c < cfg.u_max))
      fail_field("u_c: must lie in (0, u_max)");
    if (!(cfg.sigma0 > 0.0)) fail_field("sigma0: must be positive");
    if (!(cfg.sigma_exponent > 1.0))
      fail_field("sigma_exponent: must exceed 1");
    if (!(cfg.delta_rho_g > 0.0))
      fail_field("delta_rho_g: must be positive");
    if (cfg.table_nodes < 16) fail_field("table_nodes: must be at least 16");
  }
  if (!(cfg.u0_value >= 0.0) || cfg.u0_value > cfg.u_max)
    fail_field("u0_value: must lie in [0, u_max]");
  if (!(cfg.u0_fill > 0.0) || cfg.u0_fill > 1.0)
    fail_field("u0_fill: must lie in (0, 1]");
  if (!(cfg.u0_ramp >= 0.0) || cfg.u0_ramp > 0.5)
    fail_field("u0_ramp: must lie in [0, 0.5]");
  if (std::fabs(cfg.u0_tilt) > 0.5)
    fail_field("u0_tilt: must lie in [-0.5, 0.5]");
  if (cfg.u0_value * (1.0 + std::fabs(cfg.u0_tilt)) > cfg.u_max)
    fail_field("u0_tilt: stratified concentration exceeds u_max");
  for (double v : cfg.q.values)
    if (v > 0.0) fail_field("q: bulk velocity must be <= 0");
  if (cfg.problem == "fed" && !cfg.feed)
    fail_field("feed: required when problem = fed");
  if (cfg.problem == "batch" && cfg.feed)
    fail_field("feed: only valid when problem = fed");
  if (cfg.kernels != "auto" && cfg.kernels != "scalar" &&
      cfg.kernels != "avx2")
    fail_field("kernels: expected auto, scalar or avx2");
  if (cfg.out_dir.empty()) fail_field("out_dir: must not be empty");
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  const auto put = [&out](const std::string& k, const std::string& v) {
    out += k + " = " + v + '\n';
  };
  put("scenario", cfg.scenario);
  put("problem", cfg.problem);
  put("n0", std::to_string(cfg.n0));
  put("levels", std::to_string(cfg.levels));
  put("order", std::to_string(cfg.order));
  put("epsilon", fmt(cfg.epsilon));
  put("theta", fmt(cfg.theta));
  put("cfl", fmt(cfg.cfl));
  put("t_end", fmt(cfg.t_end));
  put("snapshots", fmt(cfg.snapshots));
  put("height", fmt(cfg.height));
  put("u_max", fmt(cfg.u_max));
  put("v_inf", fmt(cfg.v_inf));
  put("rz_exponent", fmt(cfg.rz_exponent));
  put("compression", cfg.compression ? "true" : "false");
  put("sigma0", fmt(cfg.sigma0));
  put("sigma_exponent", fmt(cfg.sigma_exponent));
  put("u_c", fmt(cfg.u_c));
  put("delta_rho_g", fmt(cfg.delta_rho_g));
  put("table_nodes", std::to_string(cfg.table_nodes));
  put("u0_value", fmt(cfg.u0_value));
  put("u0_fill", fmt(cfg.u0_fill));
  put("u0_ramp", fmt(cfg.u0_ramp));
  put("u0_tilt", fmt(cfg.u0_tilt));
  put("q", fmt(cfg.q));
  put("feed", cfg.feed ? fmt(*cfg.feed) : "none");
  put("out_dir", cfg.out_dir);
  put("kernels", cfg.kernels);
  put("write_masks", cfg.write_masks ? "true" : "false");
  return out;
}

ProblemSpec build_problem(const RunConfig& cfg) {
  auto flux = std::make_shared<RichardsonZakiFlux>(cfg.v_inf, cfg.rz_exponent,
                                                   cfg.u_max);
  std::shared_ptr<const Diffusion> diffusion;
  if (cfg.compression) {
    CompressionLaw law;
    law.sigma0 = cfg.sigma0;
    law.exponent = cfg.sigma_exponent;
    law.u_c = cfg.u_c;
    diffusion = std::make_shared<ConsolidationDiffusion>(
        flux, law, cfg.delta_rho_g, cfg.table_nodes);
  } else {
    diffusion = std::make_shared<NoDiffusion>();
  }

  ProblemSpec spec;
  spec.kind = cfg.problem == "fed" ? ProblemKind::fed_column
                                   : ProblemKind::batch_column;
  spec.height = cfg.height;
  spec.t_end = cfg.t_end;
  spec.flux = std::move(flux);
  spec.diffusion = std::move(diffusion);
  spec.q = cfg.q;
  spec.feed = cfg.feed;
  // Suspension below the fill surface, clear fluid above. The bulk carries a
  // mild vertical stratification and the surface is a smooth half-cosine
  // ramp; perfectly uniform columns are a degenerate special case that no
  // real slurry exhibits.
  const double fill_x = cfg.u0_fill * cfg.height;
  const double value = cfg.u0_value;
  const double ramp_w = cfg.u0_ramp * cfg.height;
  const double tilt = cfg.u0_tilt;
  const double height = cfg.height;
  spec.u0 = [fill_x, value, ramp_w, tilt, height](double x) {
    if (x >= fill_x) return 0.0;
    const double pi = 3.14159265358979323846;
    const double bulk = value * (1.0 + tilt * std::cos(pi * x / height));
    if (ramp_w <= 0.0 || x <= fill_x - ramp_w) return bulk;
    return bulk * 0.5 * (1.0 + std::cos(pi * (x - (fill_x - ramp_w)) / ramp_w));
  };
  return spec;
}

GridHierarchy build_grid(const RunConfig& cfg) {
  return GridHierarchy::create(cfg.n0, cfg.levels, cfg.order, cfg.height);
}

ThresholdPolicy build_policy(const RunConfig& cfg) {
  ThresholdPolicy policy;
  policy.epsilon = cfg.epsilon;
  policy.levels = cfg.levels;
  return policy;
}

SchemeConfig build_scheme(const RunConfig& cfg) {
  SchemeConfig scheme;
  scheme.theta = cfg.theta;
  scheme.cfl = cfg.cfl;
  return scheme;
}

}  // namespace sedmr
