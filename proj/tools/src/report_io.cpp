#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "hooley/error.hpp"
#include "powersum/cli.hpp"
#include "json.hpp"

namespace powersum {

using nlohmann::ordered_json;

std::size_t emit_report(const hooley::CheckReport& report, const std::filesystem::path& jsonl, std::ostream& out) {
  if (report.rows.empty()) throw hooley::PreconditionError("emit_report: no results");
  std::ofstream file;
  if (!jsonl.empty()) {
    if (jsonl.has_parent_path()) std::filesystem::create_directories(jsonl.parent_path());
    file.open(jsonl);
    if (!file) throw std::runtime_error("cannot write " + jsonl.string());
  }
  std::ostream& sink = jsonl.empty() ? out : file;
  for (const auto& r : report.rows) {
    ordered_json j;
    j["check"] = r.check;
    j["instance"] = r.instance;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["ratio"] = r.ratio;
    j["pass"] = r.pass;
    sink << j.dump() << '\n';
  }
  if (file.is_open() && !file) throw std::runtime_error("write failed: " + jsonl.string());

  struct Group {
    std::size_t rows = 0, failures = 0;
    double max_ratio = 0.0;
  };
  std::vector<std::pair<std::string, Group>> groups;
  for (const auto& r : report.rows) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == r.check; });
    if (it == groups.end()) it = groups.insert(groups.end(), {r.check, Group{}});
    ++it->second.rows;
    it->second.failures += !r.pass;
    it->second.max_ratio = std::max(it->second.max_ratio, r.ratio);
  }
  std::size_t width = 5;
  for (const auto& g : groups) width = std::max(width, g.first.size());
  out << std::left << std::setw(static_cast<int>(width)) << "check" << "  " << std::right << std::setw(6) << "rows"
      << "  " << std::setw(8) << "failures" << "  " << std::setw(12) << "max_ratio" << '\n';
  for (const auto& [name, g] : groups) {
    std::ostringstream ratio;
    ratio << std::setprecision(6) << g.max_ratio;
    out << std::left << std::setw(static_cast<int>(width)) << name << "  " << std::right << std::setw(6) << g.rows
        << "  " << std::setw(8) << g.failures << "  " << std::setw(12) << ratio.str() << '\n';
  }
  const std::size_t failed = report.failures();
  out << report.rows.size() << " checks, " << failed << " failed\n";
  return failed;
}

std::string manifest_json(const RunManifest& m) {
  ordered_json j;
  j["command_line"] = m.command_line;
  j["version"] = m.version;
  j["started"] = m.started;
  j["finished"] = m.finished;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : m.config) cfg[k] = v;
  j["config"] = cfg;
  j["input_hash"] = m.input_hash;
  j["outputs"] = m.outputs;
  j["budget"] = {{"preset", m.budget.name},
                 {"max_points", m.budget.max_points},
                 {"max_box", m.budget.max_box},
                 {"max_enum", m.budget.max_enum},
                 {"max_x", m.budget.max_x},
                 {"segment_size", m.budget.segment_size},
                 {"threads", m.budget.threads}};
  return j.dump(2) + "\n";
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << manifest_json(m);
}

}  // namespace powersum
