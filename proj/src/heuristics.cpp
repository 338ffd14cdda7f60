#include "ineq/heuristics.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "ineq/calculus.hpp"
#include "ineq/poly.hpp"

namespace ineq {

double tree_depth_score(const Inequality& g) {
  double d = std::max(tree_depth(g.lhs), tree_depth(g.rhs));
  return d / (d + 1);
}

namespace {

struct Counts {
  double adds = 0;
  double muls = 0;
  double pows = 0;
  double fractions = 0;
  double radicals = 0;
};

void count_nodes(const Expr& e, Counts& c) {
  if (e.is_add()) c.adds += 1;
  if (e.is_mul()) c.muls += 1;
  if (e.is_pow()) {
    c.pows += 1;
    const Expr& x = e.exponent();
    if (x.is_const()) {
      if (x.value() < 0) c.fractions += 1;
      if (x.value().get_den() != 1) c.radicals += 1;
    }
  }
  for (const auto& o : e.operands()) count_nodes(o, c);
}

double max_degree(const Expr& e) {
  try {
    Poly p = to_poly(e, 400);
    double best = 0;
    for (const auto& [m, c] : p) {
      bool plain = true;
      for (const auto& [atom, q] : m) plain = plain && atom.is_symbol();
      if (plain) best = std::max(best, monomial_degree(m).get_d());
    }
    return best;
  } catch (const std::exception&) {
    return 0;
  }
}

bool homogeneous(const Inequality& g) {
  auto l = g.lhs.is_zero() ? std::nullopt : homogeneous_degree(g.lhs);
  auto r = g.rhs.is_zero() ? std::nullopt : homogeneous_degree(g.rhs);
  if (g.lhs.is_zero()) return r.has_value();
  if (g.rhs.is_zero()) return l.has_value();
  return l && r && *l == *r;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

FeatureVector features(const Inequality& g) {
  Counts c;
  count_nodes(g.lhs, c);
  count_nodes(g.rhs, c);
  auto syms = free_symbols(g.lhs);
  for (const auto& s : free_symbols(g.rhs)) syms.insert(s);
  return {static_cast<double>(std::max(tree_depth(g.lhs), tree_depth(g.rhs))),
          static_cast<double>(string_length(g.lhs) + string_length(g.rhs)),
          c.adds,
          c.muls,
          c.pows,
          static_cast<double>(syms.size()),
          std::max(max_degree(g.lhs), max_degree(g.rhs)),
          c.fractions,
          c.radicals,
          homogeneous(g) ? 1.0 : 0.0};
}

ValueModel::ValueModel(std::size_t hidden, std::uint64_t seed, double lr) : hidden_(hidden), lr_(lr) {
  mean_.fill(0);
  std_.fill(1);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n1(0, 1 / std::sqrt(static_cast<double>(kFeatureDim)));
  std::normal_distribution<double> n2(0, 1 / std::sqrt(static_cast<double>(hidden)));
  w1_.resize(hidden * kFeatureDim);
  for (auto& w : w1_) w = n1(rng);
  b1_.assign(hidden, 0);
  w2_.resize(hidden);
  for (auto& w : w2_) w = n2(rng);
}

std::vector<double> ValueModel::standardize(const FeatureVector& x) const {
  std::vector<double> z(kFeatureDim);
  for (std::size_t i = 0; i < kFeatureDim; ++i) z[i] = (x[i] - mean_[i]) / std_[i];
  return z;
}

double ValueModel::predict(const FeatureVector& x) const {
  auto z = standardize(x);
  double o = b2_;
  for (std::size_t j = 0; j < hidden_; ++j) {
    double s = b1_[j];
    for (std::size_t i = 0; i < kFeatureDim; ++i) s += w1_[j * kFeatureDim + i] * z[i];
    o += w2_[j] * std::tanh(s);
  }
  return sigmoid(o);
}

double ValueModel::train_step(const FeatureVector& x, double target) {
  auto z = standardize(x);
  std::vector<double> a(hidden_);
  double o = b2_;
  for (std::size_t j = 0; j < hidden_; ++j) {
    double s = b1_[j];
    for (std::size_t i = 0; i < kFeatureDim; ++i) s += w1_[j * kFeatureDim + i] * z[i];
    a[j] = std::tanh(s);
    o += w2_[j] * a[j];
  }
  double y = sigmoid(o);
  double loss = (y - target) * (y - target);
  double g_o = 2 * (y - target) * y * (1 - y);
  for (std::size_t j = 0; j < hidden_; ++j) {
    double g_s = g_o * w2_[j] * (1 - a[j] * a[j]);
    w2_[j] -= lr_ * g_o * a[j];
    b1_[j] -= lr_ * g_s;
    for (std::size_t i = 0; i < kFeatureDim; ++i) w1_[j * kFeatureDim + i] -= lr_ * g_s * z[i];
  }
  b2_ -= lr_ * g_o;
  return loss;
}

void ValueModel::fit_normalization(const std::vector<FeatureVector>& xs) {
  if (xs.empty()) return;
  for (std::size_t i = 0; i < kFeatureDim; ++i) {
    double m = 0;
    for (const auto& x : xs) m += x[i];
    m /= static_cast<double>(xs.size());
    double v = 0;
    for (const auto& x : xs) v += (x[i] - m) * (x[i] - m);
    v /= static_cast<double>(xs.size());
    mean_[i] = m;
    std_[i] = v > 1e-12 ? std::sqrt(v) : 1.0;
  }
}

void ValueModel::save(std::ostream& os) const {
  os << "IFVM 1 " << kFeatureDim << " " << hidden_ << "\n";
  os.precision(17);
  for (double v : mean_) os << v << "\n";
  for (double v : std_) os << v << "\n";
  for (double v : w1_) os << v << "\n";
  for (double v : b1_) os << v << "\n";
  for (double v : w2_) os << v << "\n";
  os << b2_ << "\n";
}

ValueModel ValueModel::load(std::istream& is) {
  std::string magic;
  int version = 0;
  std::size_t dim = 0;
  std::size_t hidden = 0;
  if (!(is >> magic >> version >> dim >> hidden) || magic != "IFVM") throw CheckpointError("missing IFVM header");
  if (version != 1) throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  if (dim != kFeatureDim) throw CheckpointError("feature dimension mismatch");
  if (hidden == 0 || hidden > 100000) throw CheckpointError("bad hidden width");
  ValueModel m(hidden);
  auto read = [&](double& v) {
    if (!(is >> v) || !std::isfinite(v)) throw CheckpointError("truncated or non-finite parameter");
  };
  for (double& v : m.mean_) read(v);
  for (double& v : m.std_) read(v);
  for (double& v : m.w1_) read(v);
  for (double& v : m.b1_) read(v);
  for (double& v : m.w2_) read(v);
  read(m.b2_);
  return m;
}

Heuristic ValueModel::as_heuristic() const {
  auto m = std::make_shared<ValueModel>(*this);
  return [m](const Inequality& g) { return m->score(g); };
}

void pretrain(ValueModel& model, const std::vector<std::pair<Inequality, int>>& dataset, const PretrainOptions& opts) {
  if (dataset.empty()) return;
  std::vector<FeatureVector> xs;
  std::vector<double> ys;
  for (const auto& [g, d] : dataset) {
    xs.push_back(features(g));
    ys.push_back(static_cast<double>(d) / (d + 1));
  }
  model.fit_normalization(xs);
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(opts.seed);
  for (int e = 0; e < opts.epochs; ++e) {
    std::shuffle(order.begin(), order.end(), rng);
    for (auto i : order) model.train_step(xs[i], ys[i]);
  }
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2 + 1;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return 0;
  auto rx = ranks(x);
  auto ry = ranks(y);
  double n = static_cast<double>(x.size());
  double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0;
  double sxx = 0;
  double syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<Labeled> curriculum_relabel(const std::vector<std::pair<Inequality, double>>& path,
                                        const std::vector<std::pair<Inequality, double>>& off_path,
                                        const CurriculumConfig& cfg) {
  std::vector<Labeled> out;
  double m = 0;
  for (const auto& [g, v] : path) {
    double label = cfg.epsilon * v;
    m = std::max(m, label);
    out.push_back({g, label});
  }
  for (const auto& [g, v] : off_path) out.push_back({g, std::max(m, v) * cfg.eta + 1 - cfg.eta});
  return out;
}

CurriculumReport curriculum_run(ValueModel& model, const std::vector<Inequality>& problems, const Prover& prover,
                                const CurriculumConfig& cfg) {
  CurriculumReport report;
  std::mt19937_64 rng(97);
  for (std::size_t i = 0; i < problems.size(); ++i) {
    SearchResult res = prover(problems[i], model.as_heuristic());
    CurriculumEntry entry;
    entry.index = i;
    entry.solved = res.proof.has_value();
    entry.expansions = res.stats.expansions;
    entry.elapsed = res.stats.elapsed;
    if (entry.solved) {
      std::unordered_set<int> on_path(res.proof_path.begin(), res.proof_path.end());
      std::vector<std::pair<Inequality, double>> path;
      std::vector<std::pair<Inequality, double>> off;
      for (int idx : res.proof_path) path.push_back({res.arena[idx].target, model.score(res.arena[idx].target)});
      for (std::size_t k = 0; k < res.arena.size() && off.size() < cfg.max_off_path; ++k) {
        if (on_path.count(static_cast<int>(k))) continue;
        off.push_back({res.arena[k].target, model.score(res.arena[k].target)});
      }
      auto labels = curriculum_relabel(path, off, cfg);
      entry.labels = labels.size();
      std::vector<FeatureVector> xs;
      for (const auto& l : labels) xs.push_back(features(l.goal));
      std::vector<std::size_t> order(xs.size());
      std::iota(order.begin(), order.end(), 0);
      for (int loop = 0; loop < cfg.loops; ++loop) {
        std::shuffle(order.begin(), order.end(), rng);
        for (auto k : order) model.train_step(xs[k], labels[k].label);
      }
    }
    report.entries.push_back(entry);
  }
  return report;
}

// --- external scorer -------------------------------------------------------

namespace {

constexpr const char* kB64 = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

class ProcessChannel : public LineChannel {
 public:
  explicit ProcessChannel(const std::string& command) {
    int to_child[2];
    int from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0) throw ScorerError("pipe failed");
    pid_ = fork();
    if (pid_ < 0) throw ScorerError("fork failed");
    if (pid_ == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    out_ = to_child[1];
    in_ = from_child[0];
    signal(SIGPIPE, SIG_IGN);
  }

  ~ProcessChannel() override {
    close(out_);
    close(in_);
    int status = 0;
    for (int i = 0; i < 50; ++i) {
      if (waitpid(pid_, &status, WNOHANG) != 0) return;
      usleep(10000);
    }
    kill(pid_, SIGKILL);
    waitpid(pid_, &status, 0);
  }

  void send(const std::string& line) override {
    std::string data = line + "\n";
    const char* p = data.data();
    std::size_t left = data.size();
    while (left > 0) {
      ssize_t n = write(out_, p, left);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw ScorerError("connection lost");
      }
      p += n;
      left -= static_cast<std::size_t>(n);
    }
  }

  std::string receive(std::chrono::milliseconds timeout) override {
    auto deadline = std::chrono::steady_clock::now() + timeout;
    while (true) {
      if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) throw ScorerTimeout("scorer timed out");
      pollfd pfd{in_, POLLIN, 0};
      int r = poll(&pfd, 1, static_cast<int>(left.count()));
      if (r < 0 && errno == EINTR) continue;
      if (r == 0) throw ScorerTimeout("scorer timed out");
      char buf[4096];
      ssize_t n = read(in_, buf, sizeof buf);
      if (n <= 0) throw ScorerError("connection lost");
      buffer_.append(buf, static_cast<std::size_t>(n));
    }
  }

 private:
  pid_t pid_ = -1;
  int out_ = -1;
  int in_ = -1;
  std::string buffer_;
};

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

}  // namespace

std::string base64_encode(const std::string& in) {
  std::string out;
  std::size_t i = 0;
  for (; i + 2 < in.size(); i += 3) {
    unsigned v = (static_cast<unsigned char>(in[i]) << 16) | (static_cast<unsigned char>(in[i + 1]) << 8) |
                 static_cast<unsigned char>(in[i + 2]);
    for (int k = 3; k >= 0; --k) out += kB64[(v >> (6 * k)) & 63];
  }
  if (std::size_t rest = in.size() - i; rest > 0) {
    unsigned v = static_cast<unsigned char>(in[i]) << 16;
    if (rest == 2) v |= static_cast<unsigned char>(in[i + 1]) << 8;
    out += kB64[(v >> 18) & 63];
    out += kB64[(v >> 12) & 63];
    out += rest == 2 ? kB64[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::optional<std::string> base64_decode(const std::string& in) {
  if (in.size() % 4 != 0) return std::nullopt;
  std::string out;
  for (std::size_t i = 0; i < in.size(); i += 4) {
    unsigned v = 0;
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      char c = in[i + k];
      unsigned d = 0;
      if (c == '=') {
        if (i + 4 != in.size() || k < 2) return std::nullopt;
        ++pad;
      } else {
        if (pad) return std::nullopt;
        const char* p = std::strchr(kB64, c);
        if (!p || c == '\0') return std::nullopt;
        d = static_cast<unsigned>(p - kB64);
      }
      v = (v << 6) | d;
    }
    out += static_cast<char>((v >> 16) & 255);
    if (pad < 2) out += static_cast<char>((v >> 8) & 255);
    if (pad < 1) out += static_cast<char>(v & 255);
  }
  return out;
}

std::unique_ptr<LineChannel> spawn_channel(const std::string& command) {
  return std::make_unique<ProcessChannel>(command);
}

ScorerClient::ScorerClient(std::unique_ptr<LineChannel> channel, std::chrono::milliseconds timeout)
    : channel_(std::move(channel)), timeout_(timeout) {}

ScorerClient::~ScorerClient() {
  try {
    bye();
  } catch (const std::exception&) {
  }
}

void ScorerClient::handshake() {
  channel_->send("HELLO 1");
  std::string reply = channel_->receive(timeout_);
  if (reply != "READY") throw ScorerError("expected READY, got '" + reply + "'");
  ready_ = true;
}

double ScorerClient::score(const Inequality& g) {
  if (!ready_ || closed_) throw ScorerError("no session");
  std::uint64_t id = next_id_++;
  channel_->send("SCORE " + std::to_string(id) + " " + base64_encode(g.oriented().text()));
  auto words = split_words(channel_->receive(timeout_));
  if (words.size() >= 2 && words[0] == "ERR") throw ScorerError("scorer error for request " + words[1]);
  if (words.size() == 1 && words[0] == "BYE") {
    closed_ = true;
    throw ScorerError("scorer closed the session");
  }
  if (words.size() != 3 || words[0] != "VALUE") throw ScorerError("malformed reply");
  if (words[1] != std::to_string(id)) throw ScorerError("reply id mismatch");
  char* end = nullptr;
  double v = std::strtod(words[2].c_str(), &end);
  if (end == words[2].c_str() || *end != '\0' || !std::isfinite(v)) throw ScorerError("malformed value");
  if (v < 0 || v > 1) throw ScorerError("value out of range");
  return v;
}

void ScorerClient::bye() {
  if (closed_ || !ready_) return;
  closed_ = true;
  channel_->send("BYE");
}

Heuristic ScorerClient::as_heuristic() {
  return [this](const Inequality& g) { return score(g); };
}

}  // namespace ineq
