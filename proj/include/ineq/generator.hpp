#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ineq/inequality.hpp"
#include "ineq/theorem.hpp"

namespace ineq {

enum class PremiseOp { Add, Mul, Div, SqrtSquarePlusProduct, Square };

struct GeneratorConfig {
  std::vector<std::string> vars{"a", "b", "c"};
  int premise_loops = 2;       // pairwise-combination rounds
  int loops = 3;               // generation passes over R
  std::size_t select = 20;     // M
  int max_iterations = 25;     // per premise
  std::vector<PremiseOp> ops{PremiseOp::Add, PremiseOp::Mul, PremiseOp::Div, PremiseOp::SqrtSquarePlusProduct,
                             PremiseOp::Square};
  std::size_t premises = 50;   // how many premises a run draws
  std::uint64_t seed = 42;
  std::size_t workers = 1;
  MatchBudget budget{0.25, 24, 4, 5, 3};
};

/// One step of a record's derivation. `kind` is "seed" (theorem on the
/// premise), "link" (theorem on one side, chained by transitivity) or
/// "rule".
struct DerivationStep {
  std::string kind;
  std::string name;  // theorem or rule name
  std::string side;  // "lhs"/"rhs" for links, "" otherwise
  std::string text;  // inequality after the step
};

struct TheoremRecord {
  std::string id;
  std::string inequality;  // canonical text, <=-oriented
  std::string premise;
  std::vector<std::string> vars;
  std::vector<DerivationStep> chain;
  int inference_depth = 0;  // chain length
  int tree_depth = 0;
  std::size_t length = 0;
  Assignment equality_point;
  std::string parent;  // id of the record it was derived from, "" for seeds
  std::uint64_t seed = 0;

  bool operator==(const TheoremRecord& o) const;
};

/// Premise construction: pairwise combination of the variables for `premise_loops`
/// rounds, then the cyclic sum of every expression, deduplicated.
std::vector<Expr> gen_premises(const GeneratorConfig& cfg);

/// Forward-chaining generation on one premise; every returned record is validated.
std::vector<TheoremRecord> generate_theorems(const Expr& premise, const GeneratorConfig& cfg,
                                             std::uint64_t stream = 0);

/// Draws cfg.premises premises and runs generate_theorems on each (in
/// parallel when cfg.workers > 1); merged in premise order and deduplicated.
std::vector<TheoremRecord> generate_dataset(const GeneratorConfig& cfg);

/// |lhs - rhs| <= 1e-9 max(1, |lhs|) at the candidate.
bool check_equality_condition(const Inequality& g, const Assignment& candidate);

/// The all-equal point (all ones; scaled onto a homogeneous condition).
Assignment default_equality_point(const Inequality& g);

/// Checks the inequality at `samples` random satisfying points.
bool numerically_valid(const Inequality& g, int samples, std::uint64_t seed, double slack = 1e-9);

Inequality record_inequality(const TheoremRecord& r);

/// Re-derives each chain step from the previous one (the premise first).
bool replay_record(const TheoremRecord& r, const MatchBudget& budget = {});

/// By canonical hash, then by values at five fixed points.
std::vector<TheoremRecord> dedup(const std::vector<TheoremRecord>& records);

class DatasetError : public std::runtime_error {
 public:
  DatasetError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " on line " + std::to_string(line)), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// One JSON object per line.
void persist(const std::vector<TheoremRecord>& records, std::ostream& os);
std::vector<TheoremRecord> load(std::istream& is);

struct DatasetStats {
  std::map<int, std::size_t> inference_depth;
  std::map<int, std::size_t> tree_depth;
  std::map<int, std::size_t> length;  // bucket lower bound, width 20
  std::size_t total = 0;
};

DatasetStats stats(const std::vector<TheoremRecord>& records);
std::string stats_text(const DatasetStats& s);
std::string stats_table(const DatasetStats& s);  // tab-delimited

}  // namespace ineq
