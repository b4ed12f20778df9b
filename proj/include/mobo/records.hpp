#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mobo/archive.hpp"
#include "mobo/mobo_loop.hpp"
#include "mobo/objectives.hpp"
#include "mobo/pareto.hpp"

namespace mobo {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

// Archive JSONL: one object per evaluation, keys in this order:
//   {"index":1,"phase":"init","config":{<name>:<value>,...},"f1":..,"f2":..,"elapsed_s":..}
std::string archive_to_jsonl(const SearchSpace& space, const Archive& archive);
Archive archive_from_jsonl(const SearchSpace& space, const std::string& text);

// Progression CSV: header eval_index,elapsed_s,best_acc,hv,best_J
inline constexpr const char* kProgressionHeader = "eval_index,elapsed_s,best_acc,hv,best_J";
std::string progression_to_csv(const std::vector<ProgressionPoint>& curve);
std::vector<ProgressionPoint> progression_from_csv(const std::string& text);

nlohmann::json front_to_json(const ParetoFront& front);

/// Run metadata, final summaries and front. real_time_s is deliberately not
/// part of it so the file is reproducible.
nlohmann::json run_record_to_json(const RunRecord& record, const std::string& archive_file,
                                  const std::string& progression_file);

struct RunFiles {
  std::filesystem::path record;
  std::filesystem::path archive;
  std::filesystem::path progression;
};

/// <dir>/<stem>.json, <stem>.archive.jsonl, <stem>.progression.csv
RunFiles run_files(const std::filesystem::path& dir, const std::string& stem);

/// Writes the three files (creating dir). Each file is written to a
/// temporary name and renamed so a crash never leaves a half-written record.
RunFiles write_run(const RunRecord& record, const ObjectiveProblem& problem, const std::filesystem::path& dir,
                   const std::string& stem);

/// Reads a record and its archive, recomputes front and curves, and checks
/// them against the stored summaries. Throws std::runtime_error on missing
/// or inconsistent files.
RunRecord load_run(const std::filesystem::path& record_file);

std::string read_text(const std::filesystem::path& path);
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace mobo
