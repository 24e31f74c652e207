#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "windfarm/appendix.hpp"
#include "windfarm/integrator.hpp"
#include "windfarm/simulation.hpp"

namespace windfarm {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Single or aggregate run: `t,<states>,<outputs>`.
std::string trajectory_csv(const Trajectory& tr);

/// Farm run: one row per (sample, replica) with
/// `t,replica,<states>,<outputs>,farm_total_*`.
std::string farm_csv(const Trajectory& tr, int n);

std::string crosscheck_csv(const std::vector<DiscrepancyRow>& rows);

std::string report_json(const EquivalenceReport& r);

/// Writes `path.partial` and renames it over `path`, so a reader never sees
/// a half-written file under the final name.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace windfarm
