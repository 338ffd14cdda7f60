#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ineq/inequality.hpp"
#include "ineq/prover.hpp"

namespace ineq {

/// d/(d+1) with d the larger tree depth of the two sides; lower is better.
double tree_depth_score(const Inequality& g);

/// Fixed-order features: tree depth, string length, Add/Mul/Pow counts,
/// distinct symbols, max monomial degree, fraction count, radical count,
/// homogeneous flag.
inline constexpr std::size_t kFeatureDim = 10;
using FeatureVector = std::array<double, kFeatureDim>;

FeatureVector features(const Inequality& g);

/// One-hidden-layer scorer with a sigmoid output. Inputs are standardized
/// with statistics fixed by `fit_normalization`.
class ValueModel {
 public:
  explicit ValueModel(std::size_t hidden = 32, std::uint64_t seed = 7, double lr = 1e-2);

  double predict(const FeatureVector& x) const;
  double score(const Inequality& g) const { return predict(features(g)); }

  /// One SGD step on squared error; returns the loss before the step.
  double train_step(const FeatureVector& x, double target);

  void fit_normalization(const std::vector<FeatureVector>& xs);

  std::size_t hidden() const { return hidden_; }
  double learning_rate() const { return lr_; }
  void set_learning_rate(double lr) { lr_ = lr; }

  /// `IFVM 1 <dim> <hidden>` then mean, std, W1 (row-major), b1, w2, b2,
  /// one decimal per line.
  void save(std::ostream& os) const;
  static ValueModel load(std::istream& is);

  Heuristic as_heuristic() const;

 private:
  std::vector<double> standardize(const FeatureVector& x) const;

  std::size_t hidden_;
  double lr_;
  std::array<double, kFeatureDim> mean_{};
  std::array<double, kFeatureDim> std_{};
  std::vector<double> w1_;  // hidden x dim
  std::vector<double> b1_;
  std::vector<double> w2_;
  double b2_ = 0;
};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PretrainOptions {
  int epochs = 200;
  std::uint64_t seed = 11;
};

/// Regresses the model toward d/(d+1) for each (goal, d).
void pretrain(ValueModel& model, const std::vector<std::pair<Inequality, int>>& dataset,
              const PretrainOptions& opts = {});

double spearman(const std::vector<double>& x, const std::vector<double>& y);

struct CurriculumConfig {
  double epsilon = 0.3;
  double eta = 0.7;
  int loops = 10;
  double seconds_per_problem = 40 * 60;
  std::size_t max_off_path = 400;  // off-path nodes kept per solved problem
};

struct Labeled {
  Inequality goal;
  double label = 0;
};

/// Path nodes get epsilon*v; off-path nodes get max(m, v)*eta + 1 - eta
/// where m is the largest relabeled path value.
std::vector<Labeled> curriculum_relabel(const std::vector<std::pair<Inequality, double>>& path,
                                        const std::vector<std::pair<Inequality, double>>& off_path,
                                        const CurriculumConfig& cfg);

/// Prover handle: searches one goal under a heuristic.
using Prover = std::function<SearchResult(const Inequality&, const Heuristic&)>;

struct CurriculumEntry {
  std::size_t index = 0;
  bool solved = false;
  std::size_t expansions = 0;
  double elapsed = 0;
  std::size_t labels = 0;
};

struct CurriculumReport {
  std::vector<CurriculumEntry> entries;
};

/// Solves problems in order, relabels each solved search and trains
/// `cfg.loops` epochs on the new labels before moving on.
CurriculumReport curriculum_run(ValueModel& model, const std::vector<Inequality>& problems, const Prover& prover,
                                const CurriculumConfig& cfg);

// --- external scorer -------------------------------------------------------

class ScorerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ScorerTimeout : public ScorerError {
 public:
  using ScorerError::ScorerError;
};

std::string base64_encode(const std::string& in);
std::optional<std::string> base64_decode(const std::string& in);

/// Newline-delimited byte stream to a scorer.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual void send(const std::string& line) = 0;
  /// Next line without its newline; throws ScorerTimeout or ScorerError.
  virtual std::string receive(std::chrono::milliseconds timeout) = 0;
};

/// Channel to a child process started with `/bin/sh -c command`.
std::unique_ptr<LineChannel> spawn_channel(const std::string& command);

class ScorerClient {
 public:
  explicit ScorerClient(std::unique_ptr<LineChannel> channel,
                        std::chrono::milliseconds timeout = std::chrono::milliseconds(5000));
  ~ScorerClient();

  /// HELLO 1 / READY.
  void handshake();
  /// SCORE <id> <base64> / VALUE <id> <x>; ERR replies and bad values throw.
  double score(const Inequality& g);
  void bye();

  Heuristic as_heuristic();

 private:
  std::unique_ptr<LineChannel> channel_;
  std::chrono::milliseconds timeout_;
  std::uint64_t next_id_ = 1;
  bool ready_ = false;
  bool closed_ = false;
};

}  // namespace ineq
