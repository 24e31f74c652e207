#include "windfarm/export.hpp"

#include <array>
#include <charconv>
#include <fstream>

#include "json.hpp"
#include "windfarm/error.hpp"
#include "windfarm/model.hpp"

namespace windfarm {
namespace {

constexpr std::array<std::string_view, kFarmTotals> kTotalNames{
    "farm_total_p_tot", "farm_total_q_tot", "farm_total_i_g_d", "farm_total_i_g_q"};

void append(std::string& out, double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), res.ptr);
}

void header(std::string& out, bool farm) {
  out += "t";
  if (farm) out += ",replica";
  for (auto n : state_names()) {
    out += ',';
    out += n;
  }
  for (auto n : output_names()) {
    out += ',';
    out += n;
  }
  if (farm) {
    for (auto n : kTotalNames) {
      out += ',';
      out += n;
    }
  }
  out += '\n';
}

nlohmann::json per_state(const std::array<double, kStateSize>& v) {
  nlohmann::json o = nlohmann::json::object();
  for (std::size_t i = 0; i < kStateSize; ++i) o[std::string(state_names()[i])] = v[i];
  return o;
}

}  // namespace

std::string format_double(double v) {
  std::string s;
  append(s, v);
  return s;
}

std::string trajectory_csv(const Trajectory& tr) {
  if (tr.dim != kStateSize || tr.output_dim != kOutputCount) {
    throw Error("trajectory_csv expects a single 27-state trajectory with outputs");
  }
  std::string out;
  out.reserve(tr.size() * 46 * 22);
  header(out, false);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    append(out, tr.times[k]);
    for (double v : tr.state(k)) {
      out += ',';
      append(out, v);
    }
    for (double v : tr.output(k)) {
      out += ',';
      append(out, v);
    }
    out += '\n';
  }
  return out;
}

std::string farm_csv(const Trajectory& tr, int n) {
  const auto replicas = static_cast<std::size_t>(n);
  if (n < 1 || tr.dim != replicas * kStateSize ||
      tr.output_dim != replicas * kOutputCount + kFarmTotals) {
    throw Error("farm_csv: trajectory layout does not match n");
  }
  std::string out;
  out.reserve(tr.size() * replicas * 50 * 22);
  header(out, true);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const auto x = tr.state(k);
    const auto y = tr.output(k);
    const auto totals = y.subspan(replicas * kOutputCount, kFarmTotals);
    for (std::size_t j = 0; j < replicas; ++j) {
      append(out, tr.times[k]);
      out += ',';
      out += std::to_string(j);
      for (double v : x.subspan(j * kStateSize, kStateSize)) {
        out += ',';
        append(out, v);
      }
      for (double v : y.subspan(j * kOutputCount, kOutputCount)) {
        out += ',';
        append(out, v);
      }
      for (double v : totals) {
        out += ',';
        append(out, v);
      }
      out += '\n';
    }
  }
  return out;
}

std::string crosscheck_csv(const std::vector<DiscrepancyRow>& rows) {
  std::string out = "state_index,description,max_abs_diff,sample_state_id\n";
  for (const auto& r : rows) {
    out += std::to_string(r.state_index);
    out += ",\"";
    for (char c : r.description) {
      if (c == '"') out += '"';
      out += c;
    }
    out += "\",";
    append(out, r.max_abs_diff);
    out += ',';
    out += std::to_string(r.sample_state_id);
    out += '\n';
  }
  return out;
}

std::string report_json(const EquivalenceReport& r) {
  nlohmann::json j = {
      {"n", r.n},
      {"samples", r.samples},
      {"max_abs_error", per_state(r.max_abs_error)},
      {"max_rel_error", per_state(r.max_rel_error)},
      {"partition_rel_error", per_state(r.partition_rel_error)},
      {"global_max_rel_error", r.global_max_rel_error},
      {"worst_state", state_names()[r.worst_state]},
      {"replica_spread", r.replica_spread},
      {"threshold", r.threshold},
      {"pass", r.pass},
      {"farm_wall_s", r.farm_wall_s},
      {"aggregate_wall_s", r.aggregate_wall_s},
      {"speedup", r.speedup},
  };
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path partial = path;
  partial += ".partial";
  {
    std::ofstream out(partial, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + partial.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write to " + partial.string() + " failed");
  }
  std::filesystem::rename(partial, path);
}

}  // namespace windfarm
