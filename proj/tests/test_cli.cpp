#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <sys/wait.h>

#include "support.hpp"

using namespace emodeng;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

// Runs the CLI with stdout captured and stderr appended to it.
Run cli(const std::string& args) {
  std::string cmd = std::string(EMODENG_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string config() { return "--config " + (test::source_dir() / "emodeng.toml").string(); }
std::string fx(const std::string& name) { return test::fixture(name).string(); }

}  // namespace

TEST(Cli, NormalizeGoldenPassage) {
  auto r = cli(config() + " normalize " + fx("passage.txt"));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, test::read_file(test::fixture("passage.modern.txt")));
}

TEST(Cli, NormalizeIsByteStable) {
  auto a = cli(config() + " normalize " + fx("figures.txt"));
  auto b = cli(config() + " normalize " + fx("figures.txt"));
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, test::read_file(test::fixture("figures.modern.txt")));
}

TEST(Cli, NormalizeWritesSidecars) {
  test::TempDir dir;
  auto r = cli(config() + " normalize --annotations --outdir " + dir.path().string() + " " + fx("passage.txt") +
               " " + fx("candidates.txt"));
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(test::read_file(dir / "passage.modern.txt"), test::read_file(test::fixture("passage.modern.txt")));
  EXPECT_TRUE(std::filesystem::exists(dir / "candidates.modern.txt"));
  std::string ann = test::read_file(dir / "passage.annotations.jsonl");
  std::size_t lines = 0;
  for (std::size_t pos = 0; (pos = ann.find('\n', pos)) != std::string::npos; ++pos) ++lines;
  EXPECT_GT(lines, 100u);
  auto first = nlohmann::json::parse(ann.substr(0, ann.find('\n')));
  EXPECT_EQ(first["doc"], "passage.txt");
  auto rep = nlohmann::json::parse(test::read_file(dir / "passage.report.json"));
  EXPECT_EQ(rep["corpus_size"], 127);
}

TEST(Cli, NormalizeOutputFile) {
  test::TempDir dir;
  auto out = dir / "x.txt";
  EXPECT_EQ(cli(config() + " normalize " + fx("candidates.txt") + " -o " + out.string()).status, 0);
  EXPECT_EQ(test::read_file(out), "The increasing of their governors was not inferior to the rest.\n");
  EXPECT_EQ(cli(config() + " normalize " + fx("candidates.txt") + " " + fx("empty.txt") + " -o " + out.string()).status, 2);
}

TEST(Cli, Annotate) {
  auto r = cli(config() + " annotate " + fx("candidates.txt"));
  EXPECT_EQ(r.status, 0);
  auto first = nlohmann::json::parse(r.out.substr(0, r.out.find('\n')));
  EXPECT_EQ(first["layer"], "lexical");
  EXPECT_TRUE(first.contains("span"));
}

TEST(Cli, StatsEmptyIsZeroReport) {
  auto r = cli(config() + " stats --json " + fx("empty.txt"));
  ASSERT_EQ(r.status, 0) << r.out;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["aggregate"]["corpus_size"], 0);
  EXPECT_EQ(j["aggregate"]["unknown_distinct"], 0);
  auto t = cli(config() + " stats " + fx("empty.txt"));
  EXPECT_EQ(t.status, 0);
  EXPECT_NE(t.out.find("TOTAL"), std::string::npos);
}

TEST(Cli, StatsKeepsInputOrder) {
  auto r = cli(config() + " stats --json " + fx("candidates.txt") + " " + fx("passage.txt") + " " + fx("stats200.txt"));
  ASSERT_EQ(r.status, 0);
  auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["documents"].size(), 3u);
  EXPECT_EQ(j["documents"][0]["documents"][0], "candidates.txt");
  EXPECT_EQ(j["documents"][1]["documents"][0], "passage.txt");
  EXPECT_EQ(j["documents"][2]["documents"][0], "stats200.txt");
  EXPECT_EQ(j["aggregate"]["corpus_size"], 11 + 127 + 200);
}

TEST(Cli, LexiconCheck) {
  test::TempDir dir;
  test::write_file(dir / "bad.dic", "# version: 1\ngood,N+Nb=s\nbad\nx,y,Q+Z\n");
  auto r = cli(config() + " lexicon check " + (dir / "bad.dic").string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("bad.dic:3:"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("bad.dic:4:5: unknown category code 'Q'"), std::string::npos) << r.out;
  auto ok = cli(config() + " lexicon check " + (test::data_dir() / "xvii.dic").string() + " " +
                (test::data_dir() / "syntax.rules").string() + " " + (test::data_dir() / "morph.rules").string() +
                " " + (test::data_dir() / "paradigms.txt").string());
  EXPECT_EQ(ok.status, 0) << ok.out;
  test::write_file(dir / "syntax.rules", "rule a priority 1\n  match: <Q>\n");
  auto bad_rules = cli(config() + " lexicon check " + (dir / "syntax.rules").string());
  EXPECT_EQ(bad_rules.status, 2);
  EXPECT_NE(bad_rules.out.find("syntax.rules:2:"), std::string::npos) << bad_rules.out;
}

TEST(Cli, CandidatesWorkflow) {
  test::TempDir dir;
  std::string store = " --store " + (dir / "st").string();
  auto r = cli(config() + " candidates" + store + " " + fx("candidates.txt"));
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("6 new candidate(s)"), std::string::npos);
  auto list = cli(config() + " candidates" + store + " list --json");
  ASSERT_EQ(list.status, 0);
  auto j = nlohmann::json::parse(list.out);
  ASSERT_EQ(j.size(), 6u);
  std::string id = j[0]["id"];
  EXPECT_EQ(cli(config() + " candidates" + store + " reject " + id).status, 0);
  EXPECT_EQ(cli(config() + " candidates" + store + " reject " + id).status, 1);
  EXPECT_EQ(cli(config() + " candidates" + store + " reset " + id).status, 0);
  EXPECT_EQ(cli(config() + " candidates" + store + " reset nope").status, 1);
  EXPECT_EQ(nlohmann::json::parse(cli(config() + " candidates" + store + " list --json").out).size(), 6u);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("--config /nonexistent.toml normalize " + fx("passage.txt")).status, 2);
  EXPECT_EQ(cli(config() + " normalize").status, 2);
  EXPECT_EQ(cli(config() + " frobnicate").status, 2);
  EXPECT_EQ(cli(config() + " normalize /nonexistent.txt").status, 2);
  EXPECT_EQ(cli("--help").status, 0);
  test::TempDir dir;
  test::write_file(dir / "bad.toml", "[lexicon]\norder = [\"xvii\"]\n");
  EXPECT_EQ(cli("--config " + (dir / "bad.toml").string() + " stats " + fx("empty.txt")).status, 2);
}

TEST(Cli, Version) {
  auto r = cli(config() + " --version");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("emodeng ", 0), 0u);
  EXPECT_NE(r.out.find("xvii.dic 1"), std::string::npos);
  EXPECT_NE(r.out.find("modern.dic"), std::string::npos);
}
