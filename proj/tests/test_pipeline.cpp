#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "taxenrich/error.hpp"
#include "taxenrich/pipeline.hpp"
#include "test_support.hpp"

namespace taxenrich {
namespace {

namespace fs = std::filesystem;
using testing::read_text;
using testing::TempDir;
using testing::toy_dir;
using testing::write_text;

PipelineConfig toy_config() { return load_config(toy_dir() / "pipeline.conf"); }

std::string stage_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const DataError& e) {
    return e.stage();
  }
  return "<no error>";
}

TEST(Config, ParsesAndResolvesRelativePaths) {
  std::istringstream in("# comment\ntaxonomy = cats.txt\ndocuments=docs.tsv\nkb_pairs=/abs/kb.tsv\n"
                        "tau = 0.25\nk=3\nsimilarity_mode=co-occurrence-cosine\ncount_somewhat=true\n");
  const auto c = parse_config(in, "/base");
  EXPECT_EQ(c.taxonomy, fs::path("/base/cats.txt"));
  EXPECT_EQ(c.kb_pairs, fs::path("/abs/kb.tsv"));
  EXPECT_EQ(c.tau, 0.25);
  EXPECT_EQ(c.k, 3u);
  EXPECT_EQ(c.similarity_mode, SimilarityMode::cooccurrence_cosine);
  EXPECT_TRUE(c.count_somewhat);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, RejectsBadValues) {
  PipelineConfig c = toy_config();
  EXPECT_THROW(c.set("nonsense", "1"), std::invalid_argument);
  EXPECT_THROW(c.set("tau", "abc"), std::invalid_argument);
  c.tau = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = toy_config();
  c.k = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = toy_config();
  c.similarity_mode = SimilarityMode::table;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  std::istringstream no_eq("tau 0.5\n");
  EXPECT_THROW(parse_config(no_eq), std::invalid_argument);
}

TEST(Build, ToyModelRoundTrips) {
  TempDir dir("build");
  const auto summary = build_model(toy_config(), dir.path());
  EXPECT_EQ(summary.categories, 23u);
  EXPECT_EQ(summary.entities_skipped, 2u);
  EXPECT_GT(summary.entities_attached, 0u);
  for (const auto name : model_artifacts()) EXPECT_TRUE(fs::exists(dir / std::string(name))) << name;

  const auto manifest = verify_model(dir.path());
  EXPECT_EQ(manifest.at("format_version"), "1");
  EXPECT_EQ(manifest.at("param.tau"), "0.8");

  const auto model = load_model(dir.path());
  const auto c = score(model, "galaxy nexus spec");
  EXPECT_EQ(model.taxonomy->path(c.ranked[0].first),
            "/Top/Shopping/Consumer_Electronics/Communications/Wireless/Cellular_Phones");
  const auto& top = model.entity_index.at("galaxy nexus");
  EXPECT_EQ(model.taxonomy->path(top[0].category),
            "/Top/Shopping/Consumer_Electronics/Communications/Wireless/Cellular_Phones");
}

TEST(Build, IsByteDeterministic) {
  TempDir a("det_a");
  TempDir b("det_b");
  build_model(toy_config(), a.path());
  build_model(toy_config(), b.path());
  EXPECT_EQ(read_text(a / "manifest.txt"), read_text(b / "manifest.txt"));
  for (const auto name : model_artifacts()) {
    EXPECT_EQ(read_text(a / std::string(name)), read_text(b / std::string(name))) << name;
  }
  const auto ma = load_model(a.path());
  const auto mb = load_model(b.path());
  const auto input = toy_dir() / "inputs.txt";
  EXPECT_EQ(classify_to_string(ma, input, 5), classify_to_string(mb, input, 5));
}

TEST(Build, LoadedModelMatchesInMemoryScores) {
  TempDir dir("reload");
  build_model(toy_config(), dir.path());
  const auto model = load_model(dir.path());
  std::ifstream in(toy_dir() / "inputs.txt");
  std::ostringstream streamed;
  classify_stream(model, in, streamed, 5);
  EXPECT_EQ(streamed.str(), classify_to_string(model, toy_dir() / "inputs.txt", 5));
}

TEST(Build, ErrorsCarryStage) {
  TempDir dir("errors");
  auto c = toy_config();
  c.kb_pairs = dir / "missing.tsv";
  EXPECT_EQ(stage_of([&] { build_model(c, dir / "m"); }), "concept_kb.load");

  c = toy_config();
  c.taxonomy = dir / "missing.txt";
  EXPECT_EQ(stage_of([&] { build_model(c, dir / "m"); }), "taxonomy.load");

  write_text(dir / "bad_kb.tsv", "concept\tentity\tnot_a_number\n");
  c = toy_config();
  c.kb_pairs = dir / "bad_kb.tsv";
  EXPECT_EQ(stage_of([&] { build_model(c, dir / "m"); }), "concept_kb.load");

  c = toy_config();
  c.tau = -1;
  EXPECT_EQ(stage_of([&] { build_model(c, dir / "m"); }), "config");
}

TEST(Load, CorruptionIsDetected) {
  TempDir dir("corrupt");
  build_model(toy_config(), dir.path());

  const auto attachments = read_text(dir / "attachments.tsv");
  write_text(dir / "attachments.tsv", attachments + "x");
  EXPECT_EQ(stage_of([&] { load_model(dir.path()); }), "model.load");
  write_text(dir / "attachments.tsv", attachments);
  EXPECT_NO_THROW(load_model(dir.path()));

  const auto manifest = read_text(dir / "manifest.txt");
  write_text(dir / "manifest.txt", "garbage line without equals\n" + manifest);
  EXPECT_EQ(stage_of([&] { load_model(dir.path()); }), "model.load");
  write_text(dir / "manifest.txt", "");
  EXPECT_EQ(stage_of([&] { load_model(dir.path()); }), "model.load");
  fs::remove(dir / "manifest.txt");
  EXPECT_EQ(stage_of([&] { load_model(dir.path()); }), "model.load");
}

TEST(Degenerate, EmptyKnowledgeBase) {
  TempDir dir("empty_kb");
  write_text(dir / "kb.tsv", "");
  auto c = toy_config();
  c.kb_pairs = dir / "kb.tsv";
  const auto summary = build_model(c, dir / "m");
  EXPECT_EQ(summary.entities_attached, 0u);
  const auto model = load_model(dir / "m");
  const auto result = score(model, "galaxy nexus phone");
  EXPECT_EQ(result.ranked.size(), 5u);
  EXPECT_TRUE(result.detected_entities.empty());
}

TEST(Degenerate, NoDocuments) {
  TempDir dir("no_docs");
  write_text(dir / "docs.tsv", "");
  auto c = toy_config();
  c.documents = dir / "docs.tsv";
  const auto summary = build_model(c, dir / "m");
  EXPECT_EQ(summary.empty_centroids, summary.categories);
  EXPECT_EQ(summary.entities_attached, 0u);
  const auto model = load_model(dir / "m");
  for (const auto& [id, s] : score(model, "phone").ranked) EXPECT_EQ(s, 0.0);
}

TEST(Degenerate, SingleCategoryAndBlankInput) {
  TempDir dir("single");
  write_text(dir / "cats.txt", "/Only\n");
  write_text(dir / "docs.tsv", "d1\t/Only\tphones and more phones\nd2\t/Only\t   \n");
  write_text(dir / "kb.tsv", "device\tphones\t3\n");
  auto c = toy_config();
  c.taxonomy = dir / "cats.txt";
  c.documents = dir / "docs.tsv";
  c.kb_pairs = dir / "kb.tsv";
  const auto summary = build_model(c, dir / "m");
  EXPECT_EQ(summary.categories, 1u);
  EXPECT_EQ(summary.documents_skipped_empty, 1u);
  const auto model = load_model(dir / "m");
  write_text(dir / "in.txt", "\nphones\n");
  const auto rows = classify_to_string(model, dir / "in.txt", 5);
  EXPECT_EQ(rows.substr(0, rows.find('\n')), "1\t1\t/Only\t0");
}

TEST(SweepTau, ElevenPointsAndInteriorOptimum) {
  const auto f = testing::complementary_fixture();
  std::vector<double> taus;
  for (int i = 0; i <= 10; ++i) taus.push_back(i / 10.0);
  const auto points = sweep_tau(f.model, f.lines, f.annotations, taus, 1);
  ASSERT_EQ(points.size(), 11u);
  EXPECT_EQ(points.front().precision, 0.5);
  EXPECT_EQ(points.back().precision, 0.5);
  for (const auto& p : points) {
    const bool interior = p.tau > 0.36 && p.tau < 0.76;
    EXPECT_EQ(p.precision, interior ? 1.0 : 0.5) << "tau=" << p.tau;
  }
}

TEST(SweepTau, MatchesDirectScoring) {
  TempDir dir("sweep");
  build_model(toy_config(), dir.path());
  auto model = load_model(dir.path());
  std::vector<std::string> lines;
  std::ifstream in(toy_dir() / "inputs.txt");
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  AnnotationSet ann;
  ann.set("1", "/Top/Shopping/Consumer_Electronics/Communications/Wireless/Cellular_Phones",
          Grade::relevant);
  const std::vector<double> taus = {0.0, 0.8, 1.0};
  const auto points = sweep_tau(model, lines, ann, taus, 1);
  for (const auto& p : points) {
    model.params.tau = p.tau;
    const auto top = score(model, lines[0]).ranked[0].first;
    const double hit = ann.grade("1", model.taxonomy->path(top)) == Grade::relevant ? 1.0 : 0.0;
    EXPECT_DOUBLE_EQ(p.precision, hit / static_cast<double>(lines.size())) << p.tau;
  }
}

}  // namespace
}  // namespace taxenrich
