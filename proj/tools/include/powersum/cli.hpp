#pragma once

// Command-line driver for the hooley library: argument parsing, report and
// manifest output, and the verification suites.

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "hooley/budget.hpp"
#include "hooley/report.hpp"

namespace powersum {

enum ExitCode : int { kOk = 0, kAssertion = 1, kUsage = 2, kBudget = 3 };

// argv without the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// One JSON object per row to `jsonl` (or to `out` when jsonl is empty), then a
// per-check summary table to `out`. Returns the number of failed rows.
// PreconditionError on an empty report, std::runtime_error on an unwritable path.
std::size_t emit_report(const hooley::CheckReport& report, const std::filesystem::path& jsonl, std::ostream& out);

struct RunManifest {
  std::vector<std::string> command_line;
  std::map<std::string, std::string> config;  // parsed options, canonical form
  std::string version;
  std::string started, finished;              // UTC, ISO 8601
  std::string input_hash;                     // FNV-1a 64 of the canonical inputs
  std::vector<std::string> outputs;
  hooley::Budget budget;
};

std::string manifest_json(const RunManifest& m);
void write_manifest(const RunManifest& m, const std::filesystem::path& path);

// Verification panels: "core" runs all of "delta", "congruence", "meanvalue",
// "powersums". Sizes scale with the budget preset.
hooley::CheckReport verify_suite(std::string_view suite, const hooley::Budget& budget);

// "lo:hi:log|lin[:n]" with lo, hi integers or 1e6-style literals.
std::vector<std::uint64_t> parse_grid(std::string_view text);
std::uint64_t parse_count(std::string_view text);

}  // namespace powersum
