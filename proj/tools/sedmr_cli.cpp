// Command-line front end: layer a scenario preset, an optional config file
// and flag overrides into one resolved run; execute the reference and
// adaptive solvers; write profiles, metrics, detail dumps and the resolved
// manifest. Exit codes: 0 success, 1 configuration/validation error, 2
// runtime failure.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sedmr/config.hpp"
#include "sedmr/io.hpp"
#include "sedmr/kernels.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream)
    throw sedmr::ConfigError("config: cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return buffer.str();
}

void print_summary(const sedmr::RunConfig& cfg,
                   const sedmr::ScenarioResult& result) {
  const sedmr::RunMetrics& m = result.metrics;
  std::printf("scenario %s: n0=%zu levels=%d epsilon=%g theta=%g cfl=%g\n",
              cfg.scenario.c_str(), cfg.n0, cfg.levels, cfg.epsilon, cfg.theta,
              cfg.cfl);
  std::printf("kernel lane: %s\n", sedmr::kernels::ops().name);
  std::printf("%10s %9s %9s %9s %12s %12s %12s\n", "t", "V", "V_strict", "mu",
              "e1", "einf", "mass");
  for (std::size_t i = 0; i < m.times.size(); ++i)
    std::printf("%10g %9.4f %9.4f %9.4f %12.4e %12.4e %12.9f\n", m.times[i],
                m.v_with_safety[i], m.v_strict[i], m.mu_flux[i], m.e1[i],
                m.einf[i], m.mass[i]);
  std::printf("flux evaluations: reference %llu, adaptive %llu, ratio %.4f\n",
              static_cast<unsigned long long>(m.ref_flux_evals),
              static_cast<unsigned long long>(m.mr_flux_evals),
              m.flux_ratio());
  std::printf("wall time: reference %.3fs, adaptive %.3fs, ratio %.2f\n",
              m.ref_wall_seconds, m.mr_wall_seconds, m.wall_ratio());
  std::printf("outputs: %s\n", cfg.out_dir.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Adaptive multiresolution solver for sedimentation-consolidation "
      "columns"};

  std::string config_path, scenario, out_dir, snapshots, kernels_lane;
  std::string epsilon, levels, n0, theta, cfl, t_end;
  app.add_option("--config", config_path, "Config file (key = value lines)");
  app.add_option("--scenario", scenario,
                 "Preset: ideal-batch, flocculated-batch, continuous, custom");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--epsilon", epsilon, "Detail threshold");
  app.add_option("--levels", levels, "Multiresolution levels");
  app.add_option("--n0", n0, "Fine-grid intervals");
  app.add_option("--theta", theta, "Limiter weight in [0, 2]");
  app.add_option("--cfl", cfl, "CFL number in (0, 1]");
  app.add_option("--t-end", t_end, "Final time [s]");
  app.add_option("--snapshots", snapshots, "Comma-separated output times [s]");
  app.add_option("--kernels", kernels_lane, "Kernel lane: auto, scalar, avx2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    std::vector<sedmr::KeyValue> pairs;
    if (!config_path.empty()) pairs = sedmr::parse_config_text(read_file(config_path));
    const auto push = [&pairs](const char* key, const std::string& value) {
      if (!value.empty()) pairs.push_back({key, value, 0});
    };
    push("scenario", scenario);
    push("out_dir", out_dir);
    push("epsilon", epsilon);
    push("levels", levels);
    push("n0", n0);
    push("theta", theta);
    push("cfl", cfl);
    push("t_end", t_end);
    push("snapshots", snapshots);
    push("kernels", kernels_lane);

    const sedmr::RunConfig cfg = sedmr::make_config(pairs);
    sedmr::kernels::select(cfg.kernels);

    const sedmr::ProblemSpec spec = sedmr::build_problem(cfg);
    sedmr::validate_problem(spec);
    const sedmr::GridHierarchy grid = sedmr::build_grid(cfg);
    const sedmr::ThresholdPolicy policy = sedmr::build_policy(cfg);
    const sedmr::SchemeConfig scheme = sedmr::build_scheme(cfg);

    const sedmr::ScenarioResult result =
        sedmr::run_scenario(spec, scheme, grid, policy, cfg.snapshots);
    sedmr::io::write_outputs(cfg.out_dir, cfg, result);
    print_summary(cfg, result);
    return 0;
  } catch (const sedmr::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return 2;
  }
}
