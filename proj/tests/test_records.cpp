#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "mobo/records.hpp"

namespace mobo {
namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = MOBO_FIXTURE_DIR;

SearchSpace golden_space() {
  return SearchSpace({{"layers", IntegerRange{1, 3, 1}},
                      {"kernel", Categorical{{3, 5}}},
                      {"bn", Boolean{}},
                      {"dropout", ContinuousRange{0.0, 0.5}}});
}

Archive golden_archive() {
  Archive a;
  a.append(Configuration({std::int64_t{2}, std::int64_t{5}, true, 0.25}), {-0.8125, 4136.0}, 12.5, Phase::init);
  a.append(Configuration({std::int64_t{1}, std::int64_t{3}, false, 0.1}), {-0.5, 1034.0}, 20.0, Phase::bo);
  return a;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mobo_records_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

TEST(Records, ArchiveJsonlMatchesGoldenFile) {
  const std::string golden = read_text(kFixtures / "golden_archive.jsonl");
  EXPECT_EQ(archive_to_jsonl(golden_space(), golden_archive()), golden);
  const Archive back = archive_from_jsonl(golden_space(), golden);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].config, golden_archive()[0].config);
  EXPECT_EQ(back[1].objectives, golden_archive()[1].objectives);
  EXPECT_EQ(back[1].phase, Phase::bo);
  EXPECT_EQ(archive_to_jsonl(golden_space(), back), golden);
}

TEST(Records, ProgressionCsvMatchesHandValues) {
  const ObjectiveBounds bounds{{-1.0, 0.0}, {0.0, 8272.0}};
  const auto curve = progression_curves(golden_archive(), bounds, 1);
  const std::string text = progression_to_csv(curve);
  EXPECT_EQ(text.substr(0, text.find('\n')), "eval_index,elapsed_s,best_acc,hv,best_J");
  const auto want = progression_from_csv(read_text(kFixtures / "golden_progression.csv"));
  const auto got = progression_from_csv(text);
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].eval_index, want[i].eval_index);
    EXPECT_EQ(got[i].elapsed_s, want[i].elapsed_s);
    EXPECT_EQ(got[i].best_accuracy, want[i].best_accuracy);
    EXPECT_NEAR(got[i].hypervolume, want[i].hypervolume, 1e-12);
    EXPECT_NEAR(got[i].best_j, want[i].best_j, 1e-12);
    // text round trip is exact
    EXPECT_EQ(got[i].hypervolume, curve[i].hypervolume);
  }
}

TEST(Records, NumbersRoundTripExactly) {
  SeededStream rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<double>(rng.uniform_index(20)) - 10.0);
    const std::string s = format_number(v);
    EXPECT_EQ(std::stod(s), v) << s;
  }
  EXPECT_EQ(format_number(20.0), "20");
  EXPECT_EQ(format_number(0.1), "0.1");
}

TEST(Records, MalformedInputIsRejected) {
  EXPECT_THROW(progression_from_csv("eval,elapsed\n"), std::runtime_error);
  EXPECT_THROW(progression_from_csv(std::string(kProgressionHeader) + "\n1,2,3\n"), std::runtime_error);
  EXPECT_THROW(progression_from_csv(std::string(kProgressionHeader) + "\n1,2,x,4,5\n"), std::runtime_error);
  const std::string golden = read_text(kFixtures / "golden_archive.jsonl");
  const std::string second_only = golden.substr(golden.find('\n') + 1);
  EXPECT_THROW(archive_from_jsonl(golden_space(), second_only), std::runtime_error);  // index 2 first
  EXPECT_THROW(archive_from_jsonl(golden_space(), "{not json}\n"), std::runtime_error);
}

RunRecord small_run() {
  const auto problem = benchmark_biobjective("schaffer-n1", 201);
  InitializerSpec spec;
  spec.method = InitMethod::lhs;
  spec.n_points = 4;
  RunOptions o;
  o.budget = 9;
  o.seed = 3;
  o.acquisition.pool_size = 64;
  o.checkpoint_every = 2;
  auto rec = run_mobo(problem, spec, o);
  rec.problem_params = {{"grid_points", 201}};
  return rec;
}

TEST(Records, WriteAndLoadRun) {
  const auto dir = scratch_dir("roundtrip");
  const auto rec = small_run();
  const auto problem = make_problem("schaffer-n1", rec.problem_params);
  const auto files = write_run(rec, problem, dir, "lhs_seed3");
  EXPECT_EQ(files.record.filename(), "lhs_seed3.json");
  EXPECT_EQ(files.archive.filename(), "lhs_seed3.archive.jsonl");
  EXPECT_EQ(files.progression.filename(), "lhs_seed3.progression.csv");
  for (const auto& f : {files.record, files.archive, files.progression}) EXPECT_TRUE(fs::exists(f));
  for (const auto& e : fs::directory_iterator(dir)) EXPECT_NE(e.path().extension(), ".tmp");

  const auto back = load_run(files.record);
  EXPECT_EQ(back.method, "lhs");
  EXPECT_EQ(back.seed, 3u);
  EXPECT_EQ(back.budget, 9u);
  EXPECT_EQ(back.archive.size(), 9u);
  EXPECT_EQ(back.final_hv, rec.final_hv);
  EXPECT_EQ(back.front.objectives(), rec.front.objectives());
  EXPECT_EQ(back.training_seed, rec.training_seed);

  // rewriting the loaded record reproduces every byte
  const auto dir2 = scratch_dir("roundtrip2");
  const auto files2 = write_run(back, problem, dir2, "lhs_seed3");
  EXPECT_EQ(read_text(files.archive), read_text(files2.archive));
  EXPECT_EQ(read_text(files.progression), read_text(files2.progression));
  EXPECT_EQ(read_text(files.record), read_text(files2.record));
  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST(Records, LoadRunDetectsCorruption) {
  const auto dir = scratch_dir("corrupt");
  const auto rec = small_run();
  const auto problem = make_problem("schaffer-n1", rec.problem_params);
  const auto files = write_run(rec, problem, dir, "run");
  const std::string archive = read_text(files.archive);

  // truncated archive
  write_text_atomic(files.archive, archive.substr(0, archive.rfind('\n', archive.size() - 2) + 1));
  EXPECT_THROW(load_run(files.record), std::runtime_error);

  // tampered objective value
  std::string tampered = archive;
  const auto pos = tampered.find("\"f1\":");
  tampered.insert(pos + 5, "-");
  write_text_atomic(files.archive, tampered);
  EXPECT_THROW(load_run(files.record), std::runtime_error);

  // missing archive
  fs::remove(files.archive);
  EXPECT_THROW(load_run(files.record), std::runtime_error);
  EXPECT_THROW(load_run(dir / "absent.json"), std::runtime_error);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace mobo
