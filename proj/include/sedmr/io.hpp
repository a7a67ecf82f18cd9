#pragma once

// Output writers: per-snapshot solution profiles, the metrics table, retained
// detail dumps, and the resolved-run manifest. Numeric text carries 17
// significant digits so identical configurations produce byte-identical
// files.

#include <filesystem>
#include <string>

#include "sedmr/config.hpp"

namespace sedmr::io {

std::string format_double(double v);      // %.17g
std::string format_time_label(double t);  // %g, used in file names

std::string profile_csv(const StateVector& state);  // header "x,u"
std::string metrics_csv(const RunMetrics& metrics);  // t,V,mu,e1,einf,mass
// One line per retained detail: level,index,x_position,detail_value.
std::string mask_csv(const GridHierarchy& grid, const DetailMask& mask,
                     const MRState& tree);

void write_text(const std::filesystem::path& path, const std::string& text);

// profile_t<label>.csv (+ mask_t<label>.csv) per snapshot, metrics.csv, and
// run.cfg under out_dir. Profiles are the adaptive run's solution.
void write_outputs(const std::filesystem::path& out_dir, const RunConfig& cfg,
                   const ScenarioResult& result);

}  // namespace sedmr::io
