#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "test_util.hpp"
#include "textcoord/pipeline.hpp"

using namespace textcoord;
using testutil::TempDir;
namespace fs = std::filesystem;

namespace {

std::string fixture_corpus(const TempDir& dir) {
  std::string path = dir.file("fixture.jsonl");
  std::ofstream out(path);
  auto rec = [&](const std::string& id, const std::string& user,
                 const std::string& body) {
    out << R"({"post_id":")" << id << R"(","author_username":")" << user
        << R"(","author_name":")" << user << R"(","body":")" << body
        << R"(","is_echo":false,"hashtags":[],"mentions":[],"urls":[],)"
        << R"("has_media":false,"echo_count":0,"impression_count":0,)"
        << R"("upvote_count":0,"comment_count":0,"timestamp":null})" << '\n';
  };
  rec("p1", "alice", "stop the steal right now");
  rec("p2", "alice", "stop the steal tomorrow");
  rec("p3", "bob", "stop the steal right now");
  rec("p4", "carol", "completely different topic here");
  rec("p5", "dave", "yet another unrelated message");
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), {});
}

}  // namespace

TEST_CASE("pipeline writes the full artifact set for a small fixture") {
  TempDir dir;
  PipelineConfig cfg;
  cfg.input_path = fixture_corpus(dir);
  cfg.output_dir = dir.file("out");
  cfg.dim = 64;
  cfg.k = 2;

  auto result = run_pipeline(cfg);
  const std::vector<std::string> expected = {
      "corpus.jsonl",          "classes.csv",  "embeddings.emb",
      "similarity_edges.csv",  "coordination_edges.csv",
      "core_edges.csv",        "core.graphml", "analysis.json",
      "run_report.json"};
  CHECK(result.artifacts == expected);
  for (const auto& name : expected)
    CHECK(fs::exists(fs::path(cfg.output_dir) / name));
  CHECK(result.n_posts == 5);
  CHECK(result.n_users == 4);
}

TEST_CASE("k >= N propagates as a knn stage error") {
  TempDir dir;
  PipelineConfig cfg;
  cfg.input_path = fixture_corpus(dir);
  cfg.output_dir = dir.file("out");
  cfg.k = 5;  // N = 5 originals
  CHECK_THROWS_WITH_AS(run_pipeline(cfg),
                       doctest::Contains("knn: k must be < N"),
                       std::runtime_error);
}

TEST_CASE("two runs of the same config are byte-identical") {
  TempDir dir;
  PipelineConfig cfg;
  cfg.input_path = fixture_corpus(dir);
  cfg.dim = 64;
  cfg.k = 2;

  cfg.output_dir = dir.file("out1");
  auto r1 = run_pipeline(cfg);
  cfg.output_dir = dir.file("out2");
  auto r2 = run_pipeline(cfg);

  REQUIRE(r1.artifacts == r2.artifacts);
  for (const auto& name : r1.artifacts) {
    CAPTURE(name);
    CHECK(slurp(dir.file("out1/" + name)) == slurp(dir.file("out2/" + name)));
  }
}

TEST_CASE("config validation rejects bad values") {
  PipelineConfig cfg;
  cfg.input_path = "in.jsonl";
  cfg.output_dir = "out";

  SUBCASE("bad multiplier") {
    cfg.std_multiplier = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::runtime_error);
  }
  SUBCASE("bad format") {
    cfg.input_format = "xml";
    CHECK_THROWS_AS(cfg.validate(), std::runtime_error);
  }
  SUBCASE("import without a path") {
    cfg.vectorizer = "import";
    CHECK_THROWS_AS(cfg.validate(), std::runtime_error);
  }
}

TEST_CASE("config file round-trips through the loader") {
  TempDir dir;
  {
    std::ofstream out(dir.file("cfg.json"));
    out << R"({"input": "in.jsonl", "out": "outdir", "k": 7,)"
        << R"( "std_multiplier": 1.5, "dim": 128, "seed": 3,)"
        << R"( "exports": ["csv", "dot"]})";
  }
  auto cfg = PipelineConfig::from_file(dir.file("cfg.json"));
  CHECK(cfg.input_path == "in.jsonl");
  CHECK(cfg.output_dir == "outdir");
  CHECK(cfg.k == 7);
  CHECK(cfg.std_multiplier == doctest::Approx(1.5));
  CHECK(cfg.dim == 128);
  CHECK(cfg.exports == std::vector<std::string>{"csv", "dot"});
}

TEST_CASE("missing input fails in the ingest stage") {
  PipelineConfig cfg;
  cfg.input_path = "/nonexistent/file.jsonl";
  cfg.output_dir = fs::temp_directory_path() / "textcoord_nowhere";
  CHECK_THROWS_WITH_AS(run_pipeline(cfg), doctest::Contains("ingest:"),
                       std::runtime_error);
}
