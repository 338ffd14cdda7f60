#include "ineq/runner.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

namespace ineq {

std::optional<Strategy> strategy_from_name(const std::string& name) {
  if (name == "best-first") return Strategy::BestFirst;
  if (name == "bfs") return Strategy::Bfs;
  if (name == "mcts") return Strategy::Mcts;
  return std::nullopt;
}

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::BestFirst:
      return "best-first";
    case Strategy::Bfs:
      return "bfs";
    case Strategy::Mcts:
      return "mcts";
  }
  return "?";
}

SearchResult run_search(const Inequality& goal, Strategy s, const Heuristic& h, const SearchLimits& lim,
                        const MctsConfig& mcts) {
  switch (s) {
    case Strategy::BestFirst:
      return best_first_search(goal, h, lim);
    case Strategy::Bfs:
      return bfs_search(goal, lim);
    case Strategy::Mcts:
      return mcts_search(goal, h, mcts, lim);
  }
  return {};
}

std::string stats_line(const std::string& id, Strategy s, const SearchResult& r) {
  std::ostringstream os;
  os << id << "\t" << strategy_name(s) << "\t" << (r.proof ? "solved" : "unsolved") << "\t" << r.stats.expansions
     << "\t" << static_cast<long long>(r.stats.elapsed * 1000) << "\t" << (r.proof ? r.proof->length() : 0);
  return os.str();
}

std::size_t BenchReport::solved() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.solved ? 1 : 0;
  return n;
}

std::string BenchReport::table() const {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-14s %-32s %-10s %10s %10s %6s\n", "problem", "source", "status", "expansions",
                "seconds", "steps");
  os << buf;
  for (const auto& r : rows) {
    const char* status = !r.supported ? "unsupported" : r.solved ? "solved" : "unsolved";
    std::snprintf(buf, sizeof buf, "%-14s %-32s %-10s %10zu %10.1f %6zu\n", r.id.c_str(), r.source.c_str(), status,
                  r.expansions, r.elapsed, r.proof_length);
    os << buf;
  }
  os << "solved " << solved() << " of " << rows.size() << " (" << strategy << ", " << heuristic << ", " << seconds
     << " s limit)\n";
  return os.str();
}

std::string BenchReport::tsv() const {
  std::ostringstream os;
  os << "id\tstrategy\theuristic\tstatus\texpansions\telapsed_ms\tsteps\n";
  for (const auto& r : rows) {
    os << r.id << "\t" << strategy << "\t" << heuristic << "\t"
       << (!r.supported ? "unsupported" : r.solved ? "solved" : "unsolved") << "\t" << r.expansions << "\t"
       << static_cast<long long>(r.elapsed * 1000) << "\t" << r.proof_length << "\n";
  }
  os << "total\t" << strategy << "\t" << heuristic << "\tsolved=" << solved() << "\t\t\t\n";
  return os.str();
}

BenchReport run_bench(const std::vector<Problem>& problems, Strategy s, const HeuristicFactory& make_h,
                      const std::string& heuristic_name, const SearchLimits& lim, std::size_t jobs,
                      const std::function<void(const BenchRow&)>& on_row) {
  BenchReport report;
  report.strategy = strategy_name(s);
  report.heuristic = heuristic_name;
  report.seconds = lim.seconds;
  report.rows.resize(problems.size());
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < problems.size();) {
      const Problem& p = problems[i];
      BenchRow row;
      row.id = p.id;
      row.source = p.source;
      row.supported = p.supported;
      if (p.supported && lim.seconds > 0) {
        SearchResult r = run_search(*p.goal, s, make_h(), lim);
        row.solved = r.proof.has_value();
        row.expansions = r.stats.expansions;
        row.elapsed = r.stats.elapsed;
        if (r.proof) {
          row.proof_length = r.proof->length();
          row.proof = render_proof(*r.proof);
        }
      }
      std::lock_guard<std::mutex> lock(mu);
      report.rows[i] = row;
      if (on_row) on_row(row);
    }
  };
  std::size_t n = std::max<std::size_t>(1, std::min(jobs, problems.size()));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return report;
}

}  // namespace ineq
