#include "ineq/generator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "ineq/calculus.hpp"
#include "ineq/prover.hpp"
#include "ineq/rewrite.hpp"

namespace ineq {

namespace {

using json = nlohmann::json;

Expr apply_op(PremiseOp op, const Expr& x, const Expr& y, const std::vector<std::string>& vars) {
  switch (op) {
    case PremiseOp::Add:
      return x + y;
    case PremiseOp::Mul:
      return x * y;
    case PremiseOp::Div:
      return x / y;
    case PremiseOp::SqrtSquarePlusProduct:
      return sqrt(pow(x, 2L) + integer(2) * y * rotate(y, vars));
    case PremiseOp::Square:
      return pow(x, 2L);
  }
  return x;
}

AssumptionsPtr positive_vars(const std::vector<std::string>& vars) { return make_assumptions(vars); }

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool same_point(const Assignment& a, const Assignment& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    if (it == b.end() || static_cast<double>(it->second) != static_cast<double>(v)) return false;
  }
  return true;
}

}  // namespace

bool TheoremRecord::operator==(const TheoremRecord& o) const {
  auto steps_equal = [](const DerivationStep& x, const DerivationStep& y) {
    return x.kind == y.kind && x.name == y.name && x.side == y.side && x.text == y.text;
  };
  return id == o.id && inequality == o.inequality && premise == o.premise && vars == o.vars &&
         chain.size() == o.chain.size() && std::equal(chain.begin(), chain.end(), o.chain.begin(), steps_equal) &&
         inference_depth == o.inference_depth && tree_depth == o.tree_depth && length == o.length &&
         same_point(equality_point, o.equality_point) && parent == o.parent && seed == o.seed;
}

std::vector<Expr> gen_premises(const GeneratorConfig& cfg) {
  std::vector<Expr> pool;
  std::unordered_set<std::uint64_t> in_pool;
  for (const auto& v : cfg.vars) {
    pool.push_back(symbol(v));
    in_pool.insert(pool.back().hash());
  }
  for (int loop = 0; loop < cfg.premise_loops; ++loop) {
    std::vector<Expr> fresh;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      for (std::size_t j = 0; j < pool.size(); ++j) {
        for (auto op : cfg.ops) {
          if (op == PremiseOp::Square && j != i) continue;
          if (op == PremiseOp::Div && i == j) continue;
          Expr e = apply_op(op, pool[i], pool[j], cfg.vars);
          if (e.is_const()) continue;
          if (in_pool.insert(e.hash()).second) fresh.push_back(e);
        }
      }
    }
    pool.insert(pool.end(), fresh.begin(), fresh.end());
  }
  std::vector<Expr> out;
  std::unordered_set<std::uint64_t> seen;
  for (const auto& e : pool) {
    Expr s = cyclic_sum(e, cfg.vars);
    if (s.is_const()) continue;
    if (seen.insert(s.hash()).second) out.push_back(s);
  }
  return out;
}

Assignment default_equality_point(const Inequality& g) {
  Assignment at;
  for (const auto& v : g.assumptions->variables()) at[v] = 1;
  for (const auto& cond : g.assumptions->conditions) {
    Expr c = cond.lhs;
    Expr k = cond.rhs;
    if (c.is_const()) std::swap(c, k);
    auto d = homogeneous_degree(c);
    if (!k.is_const() || !d || *d == 0) continue;
    Real v = evaluate(c, at);
    if (v <= 0) continue;
    Real t = std::pow(static_cast<Real>(k.value().get_d()) / v, 1.0L / static_cast<Real>(d->get_d()));
    for (auto& [name, x] : at) x *= t;
  }
  return at;
}

bool check_equality_condition(const Inequality& g, const Assignment& candidate) {
  try {
    Real l = evaluate(g.lhs, candidate);
    Real r = evaluate(g.rhs, candidate);
    return std::fabs(l - r) <= 1e-9L * std::max<Real>(1, std::fabs(l));
  } catch (const DomainError&) {
    return false;
  }
}

bool numerically_valid(const Inequality& g, int samples, std::uint64_t seed, double slack) {
  std::mt19937_64 rng(seed);
  int good = 0;
  for (int attempt = 0; attempt < samples * 20 && good < samples; ++attempt) {
    auto at = sample_point(*g.assumptions, rng);
    if (!at) continue;
    ++good;
    if (!holds_at(g, *at, slack)) return false;
  }
  return good == samples;
}

Inequality record_inequality(const TheoremRecord& r) {
  auto p = parse_relation(r.inequality);
  Inequality g;
  g.relation = p.relation;
  g.lhs = p.lhs;
  g.rhs = p.rhs;
  g.assumptions = positive_vars(r.vars);
  return g.oriented();
}

namespace {

class PremiseRun {
 public:
  PremiseRun(const Expr& premise, const GeneratorConfig& cfg, std::uint64_t stream)
      : premise_(premise), cfg_(cfg), stream_(stream), asm_(positive_vars(cfg.vars)) {}

  std::vector<TheoremRecord> run() {
    std::vector<std::size_t> r = seed_records();
    // One iteration is one pass of the generation loop over R.
    for (int loop = 0; loop < std::min(cfg_.loops, cfg_.max_iterations) && !r.empty(); ++loop) {
      std::vector<std::size_t> a1;
      std::vector<std::size_t> a3;
      for (auto idx : r) {
        apply_rules(idx, a1);
        link_theorems(idx, a3);
      }
      std::vector<std::size_t> pool = a3;
      pool.insert(pool.end(), a1.begin(), a1.end());
      std::sort(pool.begin(), pool.end(), [&](auto x, auto y) {
        return std::tie(records_[x].length, records_[x].inequality) < std::tie(records_[y].length, records_[y].inequality);
      });
      if (pool.size() > cfg_.select) pool.resize(cfg_.select);
      r = std::move(pool);
    }
    return std::move(records_);
  }

 private:
  std::vector<std::size_t> seed_records() {
    std::vector<std::size_t> out;
    std::vector<MatchResult> rs;
    try {
      rs = match_all(premise_, *asm_, cfg_.budget);
    } catch (const std::exception&) {
      return out;
    }
    for (const auto& m : rs) {
      Inequality g = m.direction == Direction::UpperBound ? make_le(premise_, m.produced, asm_)
                                                          : make_le(m.produced, premise_, asm_);
      if (auto i = add(g, {}, {"seed", m.theorem, "", ""}, "")) out.push_back(*i);
    }
    return out;
  }

  void apply_rules(std::size_t idx, std::vector<std::size_t>& out) {
    Inequality g = record_inequality(records_[idx]);
    for (const auto& tag : all_rules()) {
      if (tag.soundness != Soundness::Equivalence || tag.rule == Rule::TryHomo) continue;
      std::vector<Inequality> next;
      try {
        next = apply_rule(tag.rule, g, 4);
      } catch (const std::exception&) {
        continue;
      }
      for (const auto& n : next)
        if (auto i = add(n, records_[idx].chain, {"rule", tag.name, "", ""}, records_[idx].id)) out.push_back(*i);
    }
  }

  void link_theorems(std::size_t idx, std::vector<std::size_t>& out) {
    Inequality g = record_inequality(records_[idx]);
    for (int s = 0; s < 2; ++s) {
      bool rhs = s == 1;
      const Expr& side = rhs ? g.rhs : g.lhs;
      if (side.is_const() || side.is_symbol()) continue;
      std::vector<MatchResult> rs;
      try {
        rs = match_all(side, *asm_, cfg_.budget);
      } catch (const std::exception&) {
        continue;
      }
      for (const auto& m : rs) {
        // lhs <= rhs <= h, or s <= lhs <= rhs.
        if (rhs != (m.direction == Direction::UpperBound)) continue;
        Inequality n = rhs ? make_le(g.lhs, m.produced, asm_) : make_le(m.produced, g.rhs, asm_);
        if (auto i = add(n, records_[idx].chain, {"link", m.theorem, rhs ? "rhs" : "lhs", ""}, records_[idx].id))
          out.push_back(*i);
      }
    }
  }

  std::optional<std::size_t> add(const Inequality& raw, std::vector<DerivationStep> chain, DerivationStep step,
                                 const std::string& parent) {
    Inequality g = raw.oriented();
    if (g.lhs == g.rhs || (g.lhs.is_const() && g.rhs.is_const())) return std::nullopt;
    if (!seen_.insert(g.hash()).second) return std::nullopt;
    Assignment eq = default_equality_point(g);
    if (!check_equality_condition(g, eq)) return std::nullopt;
    if (!numerically_valid(g, 100, mix(cfg_.seed, g.hash()))) return std::nullopt;
    TheoremRecord r;
    r.id = "p" + std::to_string(stream_) + "-" + std::to_string(records_.size());
    r.inequality = g.text();
    r.premise = render(premise_);
    r.vars = cfg_.vars;
    step.text = r.inequality;
    chain.push_back(std::move(step));
    r.chain = std::move(chain);
    r.inference_depth = static_cast<int>(r.chain.size());
    r.tree_depth = std::max(tree_depth(g.lhs), tree_depth(g.rhs));
    r.length = r.inequality.size();
    for (const auto& [k, v] : eq) r.equality_point[k] = static_cast<double>(v);
    r.parent = parent;
    r.seed = cfg_.seed;
    records_.push_back(std::move(r));
    return records_.size() - 1;
  }

  Expr premise_;
  const GeneratorConfig& cfg_;
  std::uint64_t stream_;
  AssumptionsPtr asm_;
  std::vector<TheoremRecord> records_;
  std::unordered_set<std::uint64_t> seen_;
};

}  // namespace

std::vector<TheoremRecord> generate_theorems(const Expr& premise, const GeneratorConfig& cfg, std::uint64_t stream) {
  return PremiseRun(premise, cfg, stream).run();
}

std::vector<TheoremRecord> generate_dataset(const GeneratorConfig& cfg) {
  auto premises = gen_premises(cfg);
  std::mt19937_64 rng(cfg.seed);
  std::shuffle(premises.begin(), premises.end(), rng);
  if (premises.size() > cfg.premises) premises.resize(cfg.premises);
  std::vector<std::vector<TheoremRecord>> per(premises.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < premises.size();) per[i] = generate_theorems(premises[i], cfg, i);
  };
  std::size_t n = std::max<std::size_t>(1, std::min(cfg.workers, premises.size()));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::vector<TheoremRecord> all;
  for (auto& v : per) all.insert(all.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  return dedup(all);
}

bool replay_record(const TheoremRecord& r, const MatchBudget& budget) {
  if (r.chain.empty() || r.chain.back().text != r.inequality) return false;
  auto asm_ = positive_vars(r.vars);
  auto parse_goal = [&](const std::string& text) {
    auto p = parse_relation(text);
    return make_le(p.relation == Relation::Ge ? p.rhs : p.lhs, p.relation == Relation::Ge ? p.lhs : p.rhs, asm_);
  };
  Expr premise;
  try {
    premise = parse(r.premise);
  } catch (const ParseError&) {
    return false;
  }
  std::optional<Inequality> prev;
  for (const auto& step : r.chain) {
    Inequality want = parse_goal(step.text);
    std::uint64_t h = want.hash();
    bool found = false;
    if (step.kind == "seed") {
      for (const auto& m : match_all(premise, *asm_, budget)) {
        if (m.theorem != step.name) continue;
        Inequality g = m.direction == Direction::UpperBound ? make_le(premise, m.produced, asm_)
                                                            : make_le(m.produced, premise, asm_);
        if (g.hash() == h) found = true;
      }
    } else if (step.kind == "rule" && prev) {
      auto rule = rule_from_name(step.name);
      if (!rule) return false;
      for (const auto& n : apply_rule(*rule, *prev, 64))
        if (n.hash() == h) found = true;
    } else if (step.kind == "link" && prev) {
      bool rhs = step.side == "rhs";
      for (const auto& m : match_all(rhs ? prev->rhs : prev->lhs, *asm_, budget)) {
        if (m.theorem != step.name || rhs != (m.direction == Direction::UpperBound)) continue;
        Inequality n = rhs ? make_le(prev->lhs, m.produced, asm_) : make_le(m.produced, prev->rhs, asm_);
        if (n.hash() == h) found = true;
      }
    }
    if (!found) return false;
    prev = want;
  }
  return true;
}

std::vector<TheoremRecord> dedup(const std::vector<TheoremRecord>& records) {
  static const Real kVals[5] = {1, 2, 0.5L, 3, 1.0L / 3};
  std::vector<TheoremRecord> out;
  std::unordered_set<std::uint64_t> hashes;
  std::set<std::vector<long long>> prints;
  for (const auto& r : records) {
    Inequality g;
    try {
      g = record_inequality(r);
    } catch (const ParseError&) {
      continue;
    }
    if (!hashes.insert(g.hash()).second) continue;
    std::vector<long long> fp;
    bool ok = true;
    for (int k = 0; k < 5 && ok; ++k) {
      Assignment at;
      for (std::size_t i = 0; i < r.vars.size(); ++i) at[r.vars[i]] = kVals[(i + k) % 5];
      try {
        fp.push_back(std::llround(evaluate(g.lhs, at) * 1e6L));
        fp.push_back(std::llround(evaluate(g.rhs, at) * 1e6L));
      } catch (const DomainError&) {
        ok = false;
      }
    }
    if (ok && !prints.insert(fp).second) continue;
    out.push_back(r);
  }
  return out;
}

void persist(const std::vector<TheoremRecord>& records, std::ostream& os) {
  for (const auto& r : records) {
    json chain = json::array();
    for (const auto& s : r.chain) chain.push_back({{"kind", s.kind}, {"name", s.name}, {"side", s.side}, {"text", s.text}});
    json eq = json::object();
    for (const auto& [k, v] : r.equality_point) eq[k] = static_cast<double>(v);
    json j = {{"id", r.id},
              {"inequality", r.inequality},
              {"premise", r.premise},
              {"vars", r.vars},
              {"chain", chain},
              {"inference_depth", r.inference_depth},
              {"tree_depth", r.tree_depth},
              {"length", r.length},
              {"equality_point", eq},
              {"parent", r.parent},
              {"seed", r.seed}};
    os << j.dump() << "\n";
  }
}

std::vector<TheoremRecord> load(std::istream& is) {
  std::vector<TheoremRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json j = json::parse(line);
      TheoremRecord r;
      r.id = j.at("id").get<std::string>();
      r.inequality = j.at("inequality").get<std::string>();
      r.premise = j.at("premise").get<std::string>();
      r.vars = j.at("vars").get<std::vector<std::string>>();
      for (const auto& s : j.at("chain"))
        r.chain.push_back({s.at("kind").get<std::string>(), s.at("name").get<std::string>(),
                           s.at("side").get<std::string>(), s.at("text").get<std::string>()});
      r.inference_depth = j.at("inference_depth").get<int>();
      r.tree_depth = j.at("tree_depth").get<int>();
      r.length = j.at("length").get<std::size_t>();
      for (const auto& [k, v] : j.at("equality_point").items()) r.equality_point[k] = v.get<double>();
      r.parent = j.at("parent").get<std::string>();
      r.seed = j.at("seed").get<std::uint64_t>();
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw DatasetError(std::string("malformed record: ") + e.what(), n);
    }
  }
  return out;
}

DatasetStats stats(const std::vector<TheoremRecord>& records) {
  DatasetStats s;
  for (const auto& r : records) {
    ++s.inference_depth[r.inference_depth];
    ++s.tree_depth[r.tree_depth];
    ++s.length[static_cast<int>(r.length / 20 * 20)];
    ++s.total;
  }
  return s;
}

namespace {

void histogram(std::ostream& os, const char* title, const std::map<int, std::size_t>& h, std::size_t total) {
  os << title << "\n";
  for (const auto& [k, n] : h) {
    std::size_t bar = total ? (n * 40 + total - 1) / total : 0;
    os << "  " << k << "\t" << n << "\t" << std::string(bar, '#') << "\n";
  }
}

}  // namespace

std::string stats_text(const DatasetStats& s) {
  std::ostringstream os;
  os << "records: " << s.total << "\n";
  histogram(os, "inference depth", s.inference_depth, s.total);
  histogram(os, "tree depth", s.tree_depth, s.total);
  histogram(os, "length (bucket of 20)", s.length, s.total);
  return os.str();
}

std::string stats_table(const DatasetStats& s) {
  std::ostringstream os;
  os << "metric\tbucket\tcount\n";
  for (const auto& [k, n] : s.inference_depth) os << "inference_depth\t" << k << "\t" << n << "\n";
  for (const auto& [k, n] : s.tree_depth) os << "tree_depth\t" << k << "\t" << n << "\n";
  for (const auto& [k, n] : s.length) os << "length\t" << k << "\t" << n << "\n";
  return os.str();
}

}  // namespace ineq
