#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ineq/benchmark.hpp"
#include "ineq/prover.hpp"

namespace ineq {

enum class Strategy { BestFirst, Bfs, Mcts };

std::optional<Strategy> strategy_from_name(const std::string& name);
const char* strategy_name(Strategy s);

SearchResult run_search(const Inequality& goal, Strategy s, const Heuristic& h, const SearchLimits& lim,
                        const MctsConfig& mcts = {});

/// Tab-separated: id, strategy, solved, expansions, elapsed ms, proof length.
std::string stats_line(const std::string& id, Strategy s, const SearchResult& r);

struct BenchRow {
  std::string id;
  std::string source;
  bool supported = true;
  bool solved = false;
  std::size_t expansions = 0;
  double elapsed = 0;
  std::size_t proof_length = 0;
  std::string proof;  // rendered, when solved
};

struct BenchReport {
  std::string strategy;
  std::string heuristic;
  double seconds = 0;
  std::vector<BenchRow> rows;
  std::size_t solved() const;
  std::string table() const;  // human-readable
  std::string tsv() const;    // machine-readable
};

/// Heuristics are made per problem so that stateful scorers are never
/// shared between concurrent searches.
using HeuristicFactory = std::function<Heuristic()>;

BenchReport run_bench(const std::vector<Problem>& problems, Strategy s, const HeuristicFactory& make_h,
                      const std::string& heuristic_name, const SearchLimits& lim, std::size_t jobs = 1,
                      const std::function<void(const BenchRow&)>& on_row = {});

}  // namespace ineq
