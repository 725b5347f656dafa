#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <unistd.h>

#include "json.hpp"
#include "symvalic/cli.hpp"

namespace {

using namespace symvalic;
namespace fs = std::filesystem;

const fs::path kFixtures = SYMVALIC_FIXTURES;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return (kFixtures / name).string(); }

TEST(Cli, ScanSafe) {
  auto r = run({"scan", fixture("safe.svc")});
  EXPECT_EQ(r.code, cli::kClean);
  EXPECT_TRUE(nlohmann::json::parse(r.out).at("warnings").empty());
}

TEST(Cli, ScanUnguarded) {
  auto r = run({"scan", fixture("unguarded_selfdestruct.svc")});
  EXPECT_EQ(r.code, cli::kWarnings);
  auto doc = nlohmann::json::parse(r.out);
  int unguarded = 0;
  for (const auto& w : doc.at("warnings")) unguarded += w.at("kind").get<std::string>() == "UNGUARDED_SENSITIVE";
  EXPECT_EQ(unguarded, 1);
}

TEST(Cli, SyntaxError) {
  auto r = run({"analyze", fixture("syntax_error.svc")});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find(":3:17:"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"analyze"}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({"analyze", fixture("missing.svc")}).code, cli::kUsage);
  EXPECT_EQ(run({"scan", fixture("safe.svc"), "--format", "xml"}).code, cli::kUsage);
}

TEST(Cli, Help) { EXPECT_EQ(run({"--help"}).code, cli::kClean); }

TEST(Cli, Truncation) {
  auto r = run({"analyze", fixture("which_paths.svc"), "--max-inferences", "1"});
  EXPECT_EQ(r.code, cli::kTruncated);
}

TEST(Cli, AnalyzeJson) {
  auto r = run({"analyze", fixture("which_paths.svc")});
  EXPECT_EQ(r.code, cli::kClean);
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc.at("schema"), "symvalic-result/1");
}

TEST(Cli, TextFormat) {
  auto r = run({"scan", fixture("unguarded_selfdestruct.svc"), "--format", "text"});
  EXPECT_EQ(r.code, cli::kWarnings);
  EXPECT_NE(r.out.find("UNGUARDED_SENSITIVE Unguarded.sensitive @"), std::string::npos) << r.out;
}

TEST(Cli, ByteIdenticalOutput) {
  auto a = run({"analyze", fixture("safe.svc"), "--seed", "9"});
  auto b = run({"analyze", fixture("safe.svc"), "--seed", "9"});
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, CorpusScan) {
  fs::path dir = fs::temp_directory_path() / ("symvalic-cli-test-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (const auto& e : fs::directory_iterator(kFixtures / "corpus_swap")) fs::copy_file(e.path(), dir / e.path().filename());
  auto r = run({"corpus-scan", dir.string(), "--jobs", "2"});
  EXPECT_EQ(r.code, cli::kWarnings);
  auto ws = nlohmann::json::parse(r.out).at("warnings");
  ASSERT_EQ(ws.size(), 1u);
  EXPECT_EQ(ws[0].at("contract"), "Willow");
  EXPECT_TRUE(fs::exists(dir / "out" / "facts.round-1.json"));

  auto facts = (dir / "out" / "facts.round-1.json").string();
  auto scanned = run({"scan", fixture("safe.svc"), "--facts", facts});
  EXPECT_EQ(scanned.code, cli::kClean);
  auto infer = run({"corpus-infer", dir.string(), "--rounds", "1"});
  EXPECT_EQ(infer.code, cli::kClean);
  EXPECT_EQ(nlohmann::json::parse(infer.out).at("schema"), "symvalic-facts/1");
  fs::remove_all(dir);
}

TEST(Cli, StricterThresholdsSilenceAnomaly) {
  fs::path dir = fs::temp_directory_path() / ("symvalic-cli-frac-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (const auto& e : fs::directory_iterator(kFixtures / "corpus_swap")) fs::copy_file(e.path(), dir / e.path().filename());
  auto r = run({"corpus-scan", dir.string(), "--guarded-frac", "0.96"});
  EXPECT_EQ(r.code, cli::kClean);
  fs::remove_all(dir);
}

}  // namespace
