// Command-line entry point: prove, bench, generate, pretrain, curriculum,
// scorer-test and a built-in tree-depth scorer (scorer-serve).

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include "ineq/benchmark.hpp"
#include "ineq/generator.hpp"
#include "ineq/heuristics.hpp"
#include "ineq/prover.hpp"
#include "ineq/runner.hpp"

using namespace ineq;

namespace {

constexpr int kSolved = 0;
constexpr int kFailure = 1;
constexpr int kUnsolved = 2;
constexpr int kUnsupported = 3;
constexpr int kUsage = 64;
constexpr int kParse = 65;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, ',');)
    if (!part.empty()) out.push_back(part);
  return out;
}

// Heuristic spec: "tree-depth", "model:<checkpoint>" or "scorer:<command>".
struct HeuristicSource {
  std::string spec = "tree-depth";
  std::shared_ptr<ValueModel> model;

  void resolve() {
    if (spec == "tree-depth" || spec.rfind("scorer:", 0) == 0) return;
    if (spec.rfind("model:", 0) == 0) {
      std::ifstream in(spec.substr(6));
      if (!in) throw UsageError("cannot open checkpoint " + spec.substr(6));
      model = std::make_shared<ValueModel>(ValueModel::load(in));
      return;
    }
    throw UsageError("unknown heuristic '" + spec + "' (tree-depth, model:<file>, scorer:<command>)");
  }

  HeuristicFactory factory() const {
    if (model) return [m = model] { return m->as_heuristic(); };
    if (spec.rfind("scorer:", 0) == 0) {
      std::string cmd = spec.substr(7);
      return [cmd] {
        auto client = std::make_shared<ScorerClient>(spawn_channel(cmd));
        client->handshake();
        return Heuristic([client](const Inequality& g) { return client->score(g); });
      };
    }
    return [] { return Heuristic(tree_depth_score); };
  }
};

struct LimitOptions {
  double seconds = 90 * 60;
  std::size_t max_expansions = 1000000;
  int samples = 200;
  std::uint64_t seed = 1;

  void add(CLI::App* app) {
    app->add_option("--time", seconds, "Wall-clock limit per problem in seconds")->check(CLI::NonNegativeNumber);
    app->add_option("--max-expansions", max_expansions, "Expansion limit per problem");
    app->add_option("--samples", samples, "Falsification samples per subgoal");
    app->add_option("--seed", seed, "Seed for falsification sampling");
  }

  SearchLimits limits() const {
    SearchLimits lim;
    lim.seconds = seconds;
    lim.max_expansions = max_expansions;
    lim.falsify_samples = samples;
    lim.seed = seed;
    return lim;
  }
};

Strategy parse_strategy(const std::string& name) {
  auto s = strategy_from_name(name);
  if (!s) throw UsageError("unknown strategy '" + name + "' (best-first, bfs, mcts)");
  return *s;
}

int cmd_prove(const std::string& id, const std::string& expr, const std::string& vars, bool nonneg,
              const std::vector<std::string>& conds, const std::string& strategy, HeuristicSource& hs,
              const LimitOptions& lo, bool quiet) {
  Strategy s = parse_strategy(strategy);
  Problem p;
  if (!id.empty()) {
    auto found = find_problem(id);
    if (!found) throw UsageError("no benchmark problem '" + id + "'");
    p = *found;
  } else {
    if (expr.empty() || vars.empty()) throw UsageError("give --id, or --expr with --vars");
    p = make_problem(expr, split_csv(vars), nonneg ? Domain::NonNegative : Domain::Positive, conds);
    p.id = "adhoc";
  }
  if (!p.supported) {
    std::cout << p.id << "\tunsupported\t" << p.note << "\n";
    return kUnsupported;
  }
  hs.resolve();
  SearchResult r = run_search(*p.goal, s, hs.factory()(), lo.limits());
  if (r.proof && !quiet) std::cout << render_proof(*r.proof);
  std::cout << stats_line(p.id, s, r) << "\n";
  return r.proof ? kSolved : kUnsolved;
}

int cmd_bench(const std::string& strategy, HeuristicSource& hs, const LimitOptions& lo, std::size_t jobs,
              const std::string& ids, const std::string& out, bool proofs) {
  Strategy s = parse_strategy(strategy);
  hs.resolve();
  std::vector<Problem> problems;
  if (ids.empty()) {
    problems = load_benchmark();
  } else {
    for (const auto& ref : split_csv(ids)) {
      auto p = find_problem(ref);
      if (!p) throw UsageError("no benchmark problem '" + ref + "'");
      problems.push_back(*p);
    }
  }
  auto report = run_bench(problems, s, hs.factory(), hs.spec, lo.limits(), jobs, [&](const BenchRow& row) {
    std::cerr << row.id << " " << (!row.supported ? "unsupported" : row.solved ? "solved" : "unsolved") << " "
              << row.elapsed << "s\n";
    if (proofs && row.solved) std::cerr << row.proof;
  });
  std::cout << report.table();
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw UsageError("cannot write " + out);
    f << report.tsv();
  }
  return kSolved;
}

int cmd_generate(GeneratorConfig cfg, const std::string& vars, const std::string& out, const std::string& stats_out) {
  if (!vars.empty()) cfg.vars = split_csv(vars);
  auto records = generate_dataset(cfg);
  std::ofstream f(out);
  if (!f) throw UsageError("cannot write " + out);
  persist(records, f);
  auto st = stats(records);
  std::cout << stats_text(st);
  if (!stats_out.empty()) {
    std::ofstream s(stats_out);
    s << stats_table(st);
  }
  return kSolved;
}

std::vector<TheoremRecord> read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open dataset " + path);
  return load(in);
}

int cmd_pretrain(const std::string& data, const std::string& out, std::size_t hidden, int epochs, double holdout) {
  auto records = read_dataset(data);
  if (records.empty()) throw UsageError("dataset is empty");
  std::vector<std::pair<Inequality, int>> all;
  for (const auto& r : records) {
    Inequality g = record_inequality(r);
    all.push_back({g, r.tree_depth});
  }
  std::mt19937_64 rng(5);
  std::shuffle(all.begin(), all.end(), rng);
  std::size_t n_test = static_cast<std::size_t>(static_cast<double>(all.size()) * holdout);
  std::vector<std::pair<Inequality, int>> train(all.begin() + static_cast<long>(n_test), all.end());
  ValueModel model(hidden);
  PretrainOptions opts;
  opts.epochs = epochs;
  pretrain(model, train, opts);
  std::vector<double> pred;
  std::vector<double> depth;
  for (std::size_t i = 0; i < n_test; ++i) {
    pred.push_back(model.score(all[i].first));
    depth.push_back(all[i].second);
  }
  std::cout << "train " << train.size() << " held-out " << n_test << " spearman " << spearman(pred, depth) << "\n";
  std::ofstream f(out);
  if (!f) throw UsageError("cannot write " + out);
  model.save(f);
  return kSolved;
}

int cmd_curriculum(const std::string& data, const std::string& model_path, const std::string& out,
                   std::size_t count, double seconds, const std::string& report_path) {
  auto records = read_dataset(data);
  std::ifstream in(model_path);
  if (!in) throw UsageError("cannot open checkpoint " + model_path);
  ValueModel model = ValueModel::load(in);
  // Inference depth >= 4, then ascending tree depth, then string length.
  std::vector<TheoremRecord> picked;
  for (const auto& r : records)
    if (r.inference_depth >= 4) picked.push_back(r);
  std::stable_sort(picked.begin(), picked.end(), [](const auto& x, const auto& y) {
    return std::tie(x.tree_depth, x.length) < std::tie(y.tree_depth, y.length);
  });
  if (picked.size() > count) picked.resize(count);
  std::vector<Inequality> problems;
  for (const auto& r : picked) problems.push_back(record_inequality(r));
  CurriculumConfig cfg;
  cfg.seconds_per_problem = seconds;
  SearchLimits lim;
  lim.seconds = seconds;
  Prover prover = [&](const Inequality& g, const Heuristic& h) { return best_first_search(g, h, lim); };
  auto report = curriculum_run(model, problems, prover, cfg);
  std::ostringstream os;
  os << "index\tid\tsolved\texpansions\telapsed_ms\tlabels\n";
  for (const auto& e : report.entries)
    os << e.index << "\t" << picked[e.index].id << "\t" << (e.solved ? 1 : 0) << "\t" << e.expansions << "\t"
       << static_cast<long long>(e.elapsed * 1000) << "\t" << e.labels << "\n";
  std::cout << os.str();
  if (!report_path.empty()) std::ofstream(report_path) << os.str();
  std::ofstream f(out);
  if (!f) throw UsageError("cannot write " + out);
  model.save(f);
  return kSolved;
}

int cmd_scorer_test(const std::string& cmd, std::size_t count) {
  ScorerClient client(spawn_channel(cmd));
  client.handshake();
  std::size_t ok = 0;
  const auto& bench = load_benchmark();
  for (std::size_t i = 0; i < count; ++i) {
    const Problem& p = bench[i % bench.size()];
    Inequality g = p.goal ? *p.goal : make_le(symbol("a"), symbol("b"), make_assumptions({"a", "b"}));
    try {
      double v = client.score(g);
      if (v >= 0 && v <= 1) ++ok;
    } catch (const ScorerError& e) {
      std::cerr << "request " << i + 1 << ": " << e.what() << "\n";
    }
  }
  client.bye();
  std::cout << ok << "/" << count << " OK\n";
  return ok == count ? kSolved : kFailure;
}

// Reference scorer on stdio: replies d/(d+1) for every parsed goal.
int cmd_scorer_serve() {
  std::string line;
  bool ready = false;
  while (std::getline(std::cin, line)) {
    std::istringstream is(line);
    std::string verb;
    is >> verb;
    if (verb == "HELLO") {
      std::cout << "READY" << std::endl;
      ready = true;
    } else if (verb == "BYE") {
      break;
    } else if (verb == "SCORE") {
      std::string id;
      std::string payload;
      is >> id >> payload;
      auto text = base64_decode(payload);
      if (!ready || id.empty() || !text) {
        std::cout << "ERR " << (id.empty() ? "0" : id) << " malformed" << std::endl;
        continue;
      }
      try {
        auto r = parse_relation(*text);
        double d = std::max(tree_depth(r.lhs), tree_depth(r.rhs));
        std::cout << "VALUE " << id << " " << d / (d + 1) << std::endl;
      } catch (const ParseError&) {
        std::cout << "ERR " << id << " unparsable" << std::endl;
      }
    } else {
      std::cout << "ERR 0 unknown-verb" << std::endl;
    }
  }
  return kSolved;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Olympiad inequality prover"};
  app.require_subcommand(1);

  HeuristicSource hs;
  LimitOptions lo;

  auto* prove = app.add_subcommand("prove", "Prove one benchmark or ad-hoc inequality");
  std::string id;
  std::string expr;
  std::string vars;
  bool positive = false;
  bool nonneg = false;
  std::vector<std::string> conds;
  std::string strategy = "best-first";
  bool quiet = false;
  prove->add_option("--id", id, "Benchmark problem, e.g. MO-INT-20/05");
  prove->add_option("--expr", expr, "Inequality in the problem grammar");
  prove->add_option("--vars", vars, "Comma-separated variables");
  prove->add_flag("--positive", positive, "Variables are positive (default)");
  prove->add_flag("--nonneg", nonneg, "Variables are nonnegative");
  prove->add_option("--cond", conds, "Side condition such as 'a*b*c = 1' (repeatable)");
  prove->add_option("--strategy", strategy, "best-first, bfs or mcts");
  prove->add_option("--heuristic", hs.spec, "tree-depth, model:<file> or scorer:<command>");
  prove->add_flag("--quiet", quiet, "Print only the statistics line");
  lo.add(prove);

  auto* bench = app.add_subcommand("bench", "Run the embedded 20-problem benchmark");
  std::size_t jobs = 1;
  std::string ids;
  std::string out;
  bool proofs = false;
  bench->add_option("--strategy", strategy, "best-first, bfs or mcts");
  bench->add_option("--heuristic", hs.spec, "tree-depth, model:<file> or scorer:<command>");
  bench->add_option("--jobs", jobs, "Problems run in parallel");
  bench->add_option("--ids", ids, "Comma-separated subset of problems");
  bench->add_option("--out", out, "Write a tab-separated report");
  bench->add_flag("--proofs", proofs, "Print proofs as problems finish");
  lo.add(bench);

  auto* gen = app.add_subcommand("generate", "Generate synthetic theorems");
  GeneratorConfig gcfg;
  std::string gen_vars;
  std::string gen_out;
  std::string gen_stats;
  gen->add_option("--vars", gen_vars, "Comma-separated variables");
  gen->add_option("--premises", gcfg.premises, "Number of premises");
  gen->add_option("--premise-loops", gcfg.premise_loops, "Premise combination rounds");
  gen->add_option("--loops", gcfg.loops, "Forward-reasoning loops per premise");
  gen->add_option("--select", gcfg.select, "Inequalities kept per loop");
  gen->add_option("--max-iterations", gcfg.max_iterations, "Iteration cap per premise");
  gen->add_option("--seed", gcfg.seed, "Random seed");
  gen->add_option("--workers", gcfg.workers, "Worker threads");
  gen->add_option("--out", gen_out, "Dataset file")->required();
  gen->add_option("--stats", gen_stats, "Write histograms as a tab-separated table");

  auto* pre = app.add_subcommand("pretrain", "Pretrain the value model on tree depth");
  std::string data;
  std::string model_out;
  std::size_t hidden = 32;
  int epochs = 200;
  double holdout = 0.2;
  pre->add_option("--data", data, "Dataset file")->required();
  pre->add_option("--out", model_out, "Checkpoint to write")->required();
  pre->add_option("--hidden", hidden, "Hidden width");
  pre->add_option("--epochs", epochs, "Training epochs");
  pre->add_option("--holdout", holdout, "Held-out fraction")->check(CLI::Range(0.0, 0.9));

  auto* cur = app.add_subcommand("curriculum", "Curriculum fine-tuning on generated theorems");
  std::string model_in;
  std::size_t count = 10;
  double cur_seconds = 40 * 60;
  std::string report_path;
  cur->add_option("--data", data, "Dataset file")->required();
  cur->add_option("--model", model_in, "Pretrained checkpoint")->required();
  cur->add_option("--out", model_out, "Checkpoint to write")->required();
  cur->add_option("--problems", count, "Problems taken after filtering and sorting");
  cur->add_option("--time", cur_seconds, "Time limit per problem in seconds");
  cur->add_option("--report", report_path, "Write the progress report");

  auto* st = app.add_subcommand("scorer-test", "Handshake with an external scorer and round-trip scores");
  std::string scorer_cmd;
  std::size_t scorer_count = 100;
  st->add_option("--cmd", scorer_cmd, "Command that speaks the scorer protocol on stdio")->required();
  st->add_option("--count", scorer_count, "Number of SCORE requests");

  auto* serve = app.add_subcommand("scorer-serve", "Serve tree-depth scores on stdio");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*prove) return cmd_prove(id, expr, vars, nonneg, conds, strategy, hs, lo, quiet);
    if (*bench) return cmd_bench(strategy, hs, lo, jobs, ids, out, proofs);
    if (*gen) return cmd_generate(gcfg, gen_vars, gen_out, gen_stats);
    if (*pre) return cmd_pretrain(data, model_out, hidden, epochs, holdout);
    if (*cur) return cmd_curriculum(data, model_in, model_out, count, cur_seconds, report_path);
    if (*st) return cmd_scorer_test(scorer_cmd, scorer_count);
    if (*serve) return cmd_scorer_serve();
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const DatasetError& e) {
    std::cerr << "dataset: " << e.what() << "\n";
    return kParse;
  } catch (const CheckpointError& e) {
    std::cerr << "checkpoint: " << e.what() << "\n";
    return kParse;
  } catch (const ScorerError& e) {
    std::cerr << "scorer: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
