#include <gtest/gtest.h>

#include <cmath>
#include <deque>
#include <random>
#include <sstream>

#include "ineq/benchmark.hpp"
#include "ineq/heuristics.hpp"
#include "ineq/io.hpp"

using namespace ineq;

namespace {

Inequality goal(const std::string& text) {
  return *make_problem(text, {"a", "b", "c"}, Domain::Positive).goal;
}

// Straightforward restatement of the relabeling rule used as the oracle.
std::vector<double> oracle_relabel(const std::vector<double>& path, const std::vector<double>& off, double eps,
                                   double eta) {
  std::vector<double> out;
  double m = -1;
  for (double v : path) {
    out.push_back(eps * v);
    m = std::max(m, eps * v);
  }
  for (double v : off) out.push_back(std::max(m, v) * eta + 1 - eta);
  return out;
}

double round12(double x) { return std::round(x * 1e12) / 1e12; }

class ScriptedChannel : public LineChannel {
 public:
  using Reply = std::function<std::string(const std::string&)>;
  explicit ScriptedChannel(Reply reply) : reply_(std::move(reply)) {}
  void send(const std::string& line) override {
    sent.push_back(line);
    std::string r = reply_(line);
    if (!r.empty()) pending_.push_back(r);
  }
  std::string receive(std::chrono::milliseconds) override {
    if (pending_.empty()) throw ScorerTimeout("no reply");
    std::string r = pending_.front();
    pending_.pop_front();
    return r;
  }
  std::vector<std::string> sent;

 private:
  Reply reply_;
  std::deque<std::string> pending_;
};

std::string request_id(const std::string& line) {
  std::istringstream is(line);
  std::string verb, id;
  is >> verb >> id;
  return id;
}

}  // namespace

TEST(TreeDepth, ScoreIsDepthOverDepthPlusOne) {
  Inequality g = goal("a <= (a+b)^2");
  double d = std::max(tree_depth(g.lhs), tree_depth(g.rhs));
  EXPECT_EQ(d, 3);
  EXPECT_DOUBLE_EQ(tree_depth_score(g), d / (d + 1));
  EXPECT_LT(tree_depth_score(goal("a <= b + c")), tree_depth_score(g));
}

TEST(Relabel, WorkedExample) {
  Inequality g = goal("a <= a + b");
  CurriculumConfig cfg;
  auto out = curriculum_relabel({{g, 0.8}}, {{g, 0.5}}, cfg);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_DOUBLE_EQ(out[0].label, 0.3 * 0.8);
  EXPECT_DOUBLE_EQ(out[1].label, 0.5 * 0.7 + 1 - 0.7);
  EXPECT_NEAR(out[0].label, 0.24, 1e-15);
  EXPECT_NEAR(out[1].label, 0.65, 1e-15);
}

TEST(Relabel, MatchesOracleOnFuzzedCases) {
  Inequality g = goal("a <= a + b");
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> count(1, 6);
  for (int t = 0; t < 10000; ++t) {
    CurriculumConfig cfg;
    cfg.epsilon = u(rng);
    cfg.eta = u(rng);
    std::vector<std::pair<Inequality, double>> path, off;
    std::vector<double> pv, ov;
    for (int i = count(rng); i > 0; --i) pv.push_back(u(rng)), path.push_back({g, pv.back()});
    for (int i = count(rng) - 1; i > 0; --i) ov.push_back(u(rng)), off.push_back({g, ov.back()});
    auto got = curriculum_relabel(path, off, cfg);
    auto want = oracle_relabel(pv, ov, cfg.epsilon, cfg.eta);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) ASSERT_EQ(round12(got[i].label), round12(want[i])) << t;
  }
}

TEST(Model, CheckpointRoundTripPreservesScores) {
  ValueModel m(8, 3);
  std::vector<std::pair<Inequality, int>> data;
  for (const auto& p : load_benchmark())
    if (p.goal) data.push_back({*p.goal, std::max(tree_depth(p.goal->lhs), tree_depth(p.goal->rhs))});
  pretrain(m, data, {20, 1});
  std::stringstream ss;
  m.save(ss);
  EXPECT_EQ(ss.str().rfind("IFVM 1 10 8\n", 0), 0u);
  ValueModel back = ValueModel::load(ss);
  for (const auto& [g, d] : data) EXPECT_DOUBLE_EQ(back.score(g), m.score(g));
}

TEST(Model, RejectsBadCheckpoints) {
  for (const char* text : {"", "IFVM 2 10 8\n", "IFVM 1 9 8\n", "IFVM 1 10 2\n0\n0\n", "XXXX 1 10 8\n"}) {
    std::istringstream is(text);
    EXPECT_THROW(ValueModel::load(is), CheckpointError) << text;
  }
}

TEST(Model, PretrainingRanksByTreeDepth) {
  std::vector<std::pair<Inequality, int>> train, test;
  std::mt19937_64 rng(9);
  const char* atoms[] = {"a", "b", "c"};
  auto grow = [&](int depth) {
    std::string e = atoms[rng() % 3];
    for (int i = 0; i < depth; ++i) {
      std::string f = atoms[rng() % 3];
      switch (rng() % 3) {
        case 0: e = "(" + e + " + " + f + ")"; break;
        case 1: e = "(" + e + ")*" + f; break;
        default: e = "sqrt(" + e + " + " + f + ")"; break;
      }
    }
    return e;
  };
  for (int i = 0; i < 400; ++i) {
    int d = 1 + static_cast<int>(rng() % 8);
    Inequality g = goal(grow(d) + " <= " + grow(1 + static_cast<int>(rng() % d)));
    int td = std::max(tree_depth(g.lhs), tree_depth(g.rhs));
    (i % 5 == 0 ? test : train).push_back({g, td});
  }
  ValueModel m;
  pretrain(m, train);
  std::vector<double> pred, depth;
  for (const auto& [g, d] : test) pred.push_back(m.score(g)), depth.push_back(d);
  EXPECT_GE(spearman(pred, depth), 0.9);
}

TEST(Model, SpearmanHandlesTies) {
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0);
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0);
  EXPECT_NEAR(spearman({1, 1, 2, 2}, {1, 1, 2, 2}), 1.0, 1e-12);
}

TEST(Scorer, Base64RoundTrip) {
  for (std::string s : {"", "a", "ab", "abc", "1/(a*b*c) <= 3", "sqrt(a^2 + 8*b*c)"}) {
    auto back = base64_decode(base64_encode(s));
    ASSERT_TRUE(back);
    EXPECT_EQ(*back, s);
  }
  EXPECT_EQ(base64_encode("abc"), "YWJj");
  EXPECT_FALSE(base64_decode("Y*Jj"));
}

TEST(Scorer, HandshakeAndScores) {
  auto ch = std::make_unique<ScriptedChannel>([](const std::string& line) -> std::string {
    if (line == "HELLO 1") return "READY";
    if (line.rfind("SCORE ", 0) == 0) return "VALUE " + request_id(line) + " 0.25";
    return "";
  });
  auto* raw = ch.get();
  ScorerClient client(std::move(ch));
  client.handshake();
  Inequality g = goal("a <= b");
  EXPECT_DOUBLE_EQ(client.score(g), 0.25);
  EXPECT_DOUBLE_EQ(client.score(g), 0.25);
  client.bye();
  ASSERT_EQ(raw->sent.size(), 4u);
  EXPECT_EQ(raw->sent[1], "SCORE 1 " + base64_encode("a <= b"));
  EXPECT_EQ(request_id(raw->sent[2]), "2");
  EXPECT_EQ(raw->sent[3], "BYE");
}

TEST(Scorer, RejectsBadReplies) {
  Inequality g = goal("a <= b");
  for (std::string bad : {"ERR {id} busy", "VALUE {id} 1.5", "VALUE {id} x", "VALUE 99 0.5", "HELLO", ""}) {
    auto ch = std::make_unique<ScriptedChannel>([bad](const std::string& line) -> std::string {
      if (line == "HELLO 1") return "READY";
      std::string r = bad;
      if (auto p = r.find("{id}"); p != std::string::npos) r.replace(p, 4, request_id(line));
      return r;
    });
    ScorerClient client(std::move(ch));
    client.handshake();
    EXPECT_THROW(client.score(g), ScorerError) << bad;
  }
}

TEST(Scorer, SilentScorerTimesOut) {
  ScorerClient client(spawn_channel("sleep 5"), std::chrono::milliseconds(200));
  EXPECT_THROW(client.handshake(), ScorerTimeout);
}

TEST(Scorer, BuiltInReferenceScorerOverAPipe) {
  ScorerClient client(spawn_channel(std::string(INEQ_CLI_PATH) + " scorer-serve"));
  client.handshake();
  for (const auto& p : load_benchmark()) {
    if (!p.goal) continue;
    EXPECT_NEAR(client.score(*p.goal), tree_depth_score(*p.goal), 1e-6) << p.id;
  }
  client.bye();
}

TEST(Features, FixedOrderAndHomogeneityFlag) {
  auto f = features(goal("a + b <= 2*c"));
  auto h = features(goal("a + b <= c^2"));
  EXPECT_EQ(f.size(), kFeatureDim);
  EXPECT_EQ(f[9], 1.0);
  EXPECT_EQ(h[9], 0.0);
  EXPECT_EQ(f[5], 3.0);
}
