#include "mobo/records.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mobo {

namespace fs = std::filesystem;
using ordered = nlohmann::ordered_json;

namespace {

ordered config_values(const SearchSpace& space, const Configuration& cfg) {
  ordered out = ordered::object();
  for (std::size_t i = 0; i < space.size(); ++i) {
    std::visit([&](const auto& v) { out[space.dims()[i].name] = v; }, cfg[i]);
  }
  return out;
}

double parse_number(const std::string& field, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::runtime_error("progression csv line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return v;
}

bool same(double a, double b) { return a == b || std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_number failed");
  return std::string(buf, ptr);
}

std::string archive_to_jsonl(const SearchSpace& space, const Archive& archive) {
  std::string out;
  for (const auto& e : archive.entries()) {
    ordered line = ordered::object();
    line["index"] = e.eval_index;
    line["phase"] = phase_name(e.phase);
    line["config"] = config_values(space, e.config);
    line["f1"] = e.objectives.f1;
    line["f2"] = e.objectives.f2;
    line["elapsed_s"] = e.elapsed_s;
    out += line.dump();
    out += '\n';
  }
  return out;
}

Archive archive_from_jsonl(const SearchSpace& space, const std::string& text) {
  Archive archive;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto index = j.at("index").get<std::size_t>();
      if (index != archive.size() + 1) throw std::runtime_error("index out of sequence");
      archive.append(configuration_from_json(space, j.at("config")),
                     {j.at("f1").get<double>(), j.at("f2").get<double>()}, j.at("elapsed_s").get<double>(),
                     phase_from_name(j.at("phase").get<std::string>()));
    } catch (const std::exception& e) {
      throw std::runtime_error("archive line " + std::to_string(n) + ": " + e.what());
    }
  }
  return archive;
}

std::string progression_to_csv(const std::vector<ProgressionPoint>& curve) {
  std::string out = kProgressionHeader;
  out += '\n';
  for (const auto& p : curve) {
    out += std::to_string(p.eval_index) + ',' + format_number(p.elapsed_s) + ',' + format_number(p.best_accuracy) + ',' +
           format_number(p.hypervolume) + ',' + format_number(p.best_j) + '\n';
  }
  return out;
}

std::vector<ProgressionPoint> progression_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kProgressionHeader) throw std::runtime_error("progression csv: bad header");
  std::vector<ProgressionPoint> out;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
    if (fields.size() != 5) throw std::runtime_error("progression csv line " + std::to_string(n) + ": expected 5 fields");
    out.push_back({static_cast<std::size_t>(parse_number(fields[0], n)), parse_number(fields[1], n),
                   parse_number(fields[2], n), parse_number(fields[3], n), parse_number(fields[4], n)});
  }
  return out;
}

nlohmann::json front_to_json(const ParetoFront& front) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : front.points) out.push_back({{"f1", p.y.f1}, {"f2", p.y.f2}, {"id", p.id}});
  return out;
}

nlohmann::json run_record_to_json(const RunRecord& r, const std::string& archive_file,
                                  const std::string& progression_file) {
  return {
      {"problem", r.problem},
      {"problem_params", r.problem_params},
      {"method", r.method},
      {"seed", r.seed},
      {"budget", r.budget},
      {"fairness", fairness_name(r.fairness)},
      {"initializer", to_json(r.initializer)},
      {"pool_size", r.acquisition.pool_size},
      {"ref", {r.acquisition.ref.f1, r.acquisition.ref.f2}},
      {"checkpoint_every", r.checkpoint_every},
      {"bounds", {{"f1", {r.bounds.f1.lo, r.bounds.f1.hi}}, {"f2", {r.bounds.f2.lo, r.bounds.f2.hi}}}},
      {"evaluations", r.archive.size()},
      {"init_evaluations", r.init_evaluations},
      {"overhead_evaluations", r.overhead_evaluations},
      {"fallback_proposals", r.fallback_proposals},
      {"training_seed", r.training_seed},
      {"simulated_time_s", r.simulated_time_s},
      {"final", {{"hv", r.final_hv}, {"best_acc", r.final_best_acc}, {"best_J", r.final_j}}},
      {"front", front_to_json(r.front)},
      {"archive_file", archive_file},
      {"progression_file", progression_file},
  };
}

RunFiles run_files(const fs::path& dir, const std::string& stem) {
  return {dir / (stem + ".json"), dir / (stem + ".archive.jsonl"), dir / (stem + ".progression.csv")};
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_atomic(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

RunFiles write_run(const RunRecord& record, const ObjectiveProblem& problem, const fs::path& dir,
                   const std::string& stem) {
  const RunFiles files = run_files(dir, stem);
  write_text_atomic(files.archive, archive_to_jsonl(problem.space, record.archive));
  write_text_atomic(files.progression, progression_to_csv(record.progression));
  const auto j = run_record_to_json(record, files.archive.filename().string(), files.progression.filename().string());
  // record last: its presence marks the cell complete
  write_text_atomic(files.record, j.dump(2) + "\n");
  return files;
}

RunRecord load_run(const fs::path& record_file) {
  try {
    const auto j = nlohmann::json::parse(read_text(record_file));
    RunRecord r;
    r.problem = j.at("problem").get<std::string>();
    r.problem_params = j.value("problem_params", nlohmann::json::object());
    r.method = j.at("method").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.budget = j.at("budget").get<std::size_t>();
    r.fairness = fairness_from_name(j.at("fairness").get<std::string>());
    r.initializer = initializer_spec_from_json(j.at("initializer"));
    r.acquisition.pool_size = j.at("pool_size").get<std::size_t>();
    r.acquisition.ref = {j.at("ref").at(0).get<double>(), j.at("ref").at(1).get<double>()};
    r.checkpoint_every = j.at("checkpoint_every").get<std::size_t>();
    const auto& b = j.at("bounds");
    r.bounds = {{b.at("f1").at(0).get<double>(), b.at("f1").at(1).get<double>()},
                {b.at("f2").at(0).get<double>(), b.at("f2").at(1).get<double>()}};
    r.overhead_evaluations = j.at("overhead_evaluations").get<std::size_t>();
    r.fallback_proposals = j.at("fallback_proposals").get<std::size_t>();
    r.training_seed = j.at("training_seed").get<std::vector<std::size_t>>();

    const ObjectiveProblem problem = make_problem(r.problem, r.problem_params);
    const fs::path dir = record_file.parent_path();
    r.archive = archive_from_jsonl(problem.space, read_text(dir / j.at("archive_file").get<std::string>()));
    finalize_record(r);

    if (r.archive.size() != r.budget) {
      throw std::runtime_error("archive holds " + std::to_string(r.archive.size()) + " entries, budget is " +
                               std::to_string(r.budget));
    }
    const auto& fin = j.at("final");
    if (!same(fin.at("hv").get<double>(), r.final_hv) || !same(fin.at("best_acc").get<double>(), r.final_best_acc) ||
        !same(fin.at("best_J").get<double>(), r.final_j)) {
      throw std::runtime_error("stored summaries disagree with the archive");
    }
    return r;
  } catch (const std::exception& e) {
    throw std::runtime_error("cannot load run " + record_file.string() + ": " + e.what());
  }
}

}  // namespace mobo
