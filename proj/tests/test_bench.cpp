#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "ineq/benchmark.hpp"
#include "ineq/heuristics.hpp"
#include "ineq/runner.hpp"

using namespace ineq;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run cli(const std::string& args) {
  std::string cmd = std::string(INEQ_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

}  // namespace

TEST(Benchmark, TwentyProblemsInOrder) {
  const auto& ps = load_benchmark();
  ASSERT_EQ(ps.size(), 20u);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "MO-INT-20/%02zu", i + 1);
    EXPECT_EQ(ps[i].id, id);
    EXPECT_FALSE(ps[i].source.empty());
    if (ps[i].supported) EXPECT_TRUE(ps[i].goal.has_value()) << id;
  }
  EXPECT_FALSE(ps[11].supported);
  EXPECT_FALSE(ps[19].supported);
  EXPECT_EQ(std::count_if(ps.begin(), ps.end(), [](const Problem& p) { return p.supported; }), 18);
}

TEST(Benchmark, ProblemLookup) {
  EXPECT_EQ(find_problem("5")->id, "MO-INT-20/05");
  EXPECT_EQ(find_problem("05")->id, "MO-INT-20/05");
  EXPECT_EQ(find_problem("MO-INT-20/05")->id, "MO-INT-20/05");
  EXPECT_FALSE(find_problem("21"));
  EXPECT_FALSE(find_problem("x"));
}

TEST(Benchmark, ConditionsBecomeAssumptions) {
  const auto& p = *find_problem("03");
  ASSERT_EQ(p.goal->assumptions->conditions.size(), 1u);
  const auto& q = *find_problem("15");
  EXPECT_EQ(q.goal->assumptions->facts.size(), 1u);
  EXPECT_THROW(make_problem("a <= (b", {"a", "b"}, Domain::Positive), ParseError);
}

TEST(Runner, StrategyNames) {
  for (auto s : {Strategy::BestFirst, Strategy::Bfs, Strategy::Mcts})
    EXPECT_EQ(strategy_from_name(strategy_name(s)), s);
  EXPECT_FALSE(strategy_from_name("dfs"));
}

TEST(Runner, ZeroTimeBenchIsWellFormed) {
  SearchLimits lim;
  lim.seconds = 0;
  auto report = run_bench(load_benchmark(), Strategy::BestFirst, [] { return Heuristic(tree_depth_score); },
                          "tree-depth", lim);
  EXPECT_EQ(report.solved(), 0u);
  ASSERT_EQ(report.rows.size(), 20u);
  std::istringstream tsv(report.tsv());
  std::string line;
  std::size_t lines = 0;
  while (std::getline(tsv, line)) {
    ++lines;
    EXPECT_EQ(std::count(line.begin(), line.end(), '\t'), 6) << line;
  }
  EXPECT_EQ(lines, 22u);
  EXPECT_NE(report.table().find("solved 0 of 20"), std::string::npos);
}

TEST(Runner, StatsLineFields) {
  SearchLimits lim;
  lim.seconds = 60;
  auto r = run_search(*find_problem("05")->goal, Strategy::BestFirst, tree_depth_score, lim);
  std::string line = stats_line("MO-INT-20/05", Strategy::BestFirst, r);
  std::vector<std::string> f;
  std::istringstream is(line);
  for (std::string x; std::getline(is, x, '\t');) f.push_back(x);
  ASSERT_EQ(f.size(), 6u);
  EXPECT_EQ(f[0], "MO-INT-20/05");
  EXPECT_EQ(f[1], "best-first");
  EXPECT_EQ(f[2], "solved");
  EXPECT_EQ(f[5], "2");
}

TEST(Cli, ExitCodes) {
  auto solved = cli("prove --id MO-INT-20/05 --time 60");
  EXPECT_EQ(solved.status, 0);
  EXPECT_NE(solved.out.find("by <function try_together_l>, this is true!"), std::string::npos);
  EXPECT_EQ(cli("prove --expr \"a+b >= 2*sqrt(a*b)\" --vars a,b --positive").status, 0);
  EXPECT_EQ(cli("prove --id MO-INT-20/12").status, 3);
  EXPECT_EQ(cli("prove --id MO-INT-20/06 --time 0").status, 2);
  EXPECT_EQ(cli("prove --expr \"a <= (b\" --vars a,b").status, 65);
  EXPECT_EQ(cli("prove --id 05 --strategy dfs").status, 64);
  EXPECT_EQ(cli("frobnicate").status, 64);
  EXPECT_EQ(cli("").status, 64);
}

TEST(Cli, BenchWithZeroTimeWritesReport) {
  std::string path = ::testing::TempDir() + "bench.tsv";
  auto r = cli("bench --time 0 --out " + path);
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("solved 0 of 20"), std::string::npos);
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "id\tstrategy\theuristic\tstatus\texpansions\telapsed_ms\tsteps");
}

TEST(Cli, ScorerTestAgainstBuiltInScorer) {
  auto r = cli(std::string("scorer-test --cmd \"") + INEQ_CLI_PATH + " scorer-serve\"");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("100/100 OK"), std::string::npos);
  EXPECT_NE(cli("scorer-test --cmd \"cat\" --count 3").status, 0);
}

TEST(Cli, GeneratePretrainCurriculum) {
  std::string dir = ::testing::TempDir();
  auto g = cli("generate --premises 3 --out " + dir + "d.ndtheorems");
  ASSERT_EQ(g.status, 0);
  EXPECT_NE(g.out.find("records:"), std::string::npos);
  auto p = cli("pretrain --data " + dir + "d.ndtheorems --out " + dir + "m.ckpt --epochs 20");
  ASSERT_EQ(p.status, 0);
  EXPECT_NE(p.out.find("spearman"), std::string::npos);
  auto c = cli("curriculum --data " + dir + "d.ndtheorems --model " + dir + "m.ckpt --out " + dir +
               "m2.ckpt --problems 2 --time 10");
  EXPECT_EQ(c.status, 0);
  EXPECT_EQ(c.out.rfind("index\tid\tsolved", 0), 0u);
  std::ifstream ck(dir + "m2.ckpt");
  std::string head;
  std::getline(ck, head);
  EXPECT_EQ(head, "IFVM 1 10 32");
  EXPECT_EQ(cli("pretrain --data /nonexistent --out x").status, 64);
}
