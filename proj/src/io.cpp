#include "sedmr/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sedmr::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_time_label(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

std::string profile_csv(const StateVector& state) {
  std::string out = "x,u\n";
  for (std::size_t i = 0; i < state.values.size(); ++i) {
    out += format_double(state.dx * static_cast<double>(i));
    out += ',';
    out += format_double(state.values[i]);
    out += '\n';
  }
  return out;
}

std::string metrics_csv(const RunMetrics& metrics) {
  std::string out = "t,V,mu,e1,einf,mass\n";
  for (std::size_t i = 0; i < metrics.times.size(); ++i) {
    out += format_double(metrics.times[i]);
    out += ',';
    out += format_double(metrics.v_with_safety[i]);
    out += ',';
    out += format_double(metrics.mu_flux[i]);
    out += ',';
    out += format_double(metrics.e1[i]);
    out += ',';
    out += format_double(metrics.einf[i]);
    out += ',';
    out += format_double(metrics.mass[i]);
    out += '\n';
  }
  return out;
}

std::string mask_csv(const GridHierarchy& grid, const DetailMask& mask,
                     const MRState& tree) {
  std::string out;
  for (int k = 1; k <= grid.levels; ++k) {
    const auto& flags = mask.flags[static_cast<std::size_t>(k - 1)];
    const auto& details = tree.details[static_cast<std::size_t>(k - 1)];
    for (std::size_t j = 0; j < flags.size(); ++j) {
      if (!flags[j]) continue;
      out += std::to_string(k);
      out += ',';
      out += std::to_string(j);
      out += ',';
      out += format_double(grid.detail_x(k, j));
      out += ',';
      out += format_double(details[j]);
      out += '\n';
    }
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream)
    throw std::runtime_error("cannot open '" + path.string() +
                             "' for writing");
  stream << text;
  if (!stream)
    throw std::runtime_error("failed writing '" + path.string() + "'");
}

void write_outputs(const std::filesystem::path& out_dir, const RunConfig& cfg,
                   const ScenarioResult& result) {
  std::filesystem::create_directories(out_dir);
  const auto& adaptive = result.adaptive;
  for (std::size_t i = 0; i < adaptive.snapshots.size(); ++i) {
    const std::string label = format_time_label(result.metrics.times[i]);
    write_text(out_dir / ("profile_t" + label + ".csv"),
               profile_csv(adaptive.snapshots[i]));
    if (cfg.write_masks) {
      const GridHierarchy grid = build_grid(cfg);
      write_text(out_dir / ("mask_t" + label + ".csv"),
                 mask_csv(grid, adaptive.masks[i], adaptive.trees[i]));
    }
  }
  write_text(out_dir / "metrics.csv", metrics_csv(result.metrics));
  write_text(out_dir / "run.cfg", serialize_config(cfg));
}

}  // namespace sedmr::io
