#include "ineq/prover.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "ineq/calculus.hpp"
#include "ineq/sign.hpp"
#include "ineq/univariate.hpp"

namespace ineq {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr std::size_t kLadderCap = 2000;

bool atoms_nonneg(const Poly& p, const AssumptionSet& asm_) {
  for (const auto& [m, c] : p) {
    for (const auto& [atom, q] : m) {
      if (atom.is_symbol()) {
        if (asm_.domain_of(atom.name()) == Domain::Real) return false;
        continue;
      }
      if (!is_nonneg(infer_sign(atom, asm_))) return false;
    }
  }
  return true;
}

bool all_symbol_atoms(const Poly& p) {
  for (const auto& [m, c] : p)
    for (const auto& [atom, q] : m)
      if (!atom.is_symbol()) return false;
  return true;
}

std::optional<Poly> difference_poly(const Inequality& o) {
  try {
    return to_poly(o.rhs - o.lhs, kLadderCap);
  } catch (const ExpansionLimit&) {
    return std::nullopt;
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

// Cases 1 and 2 of the ladder. Coefficient checks need the zero-side form
// 0 <= p unless `any_form`.
std::optional<Certificate> cheap_close(const Inequality& o, bool any_form = false) {
  if (o.strict()) {
    if (o.lhs.is_const() && o.rhs.is_const() && o.lhs.value() < o.rhs.value())
      return Certificate{"equal", "constants", {}};
    return std::nullopt;
  }
  if (o.lhs == o.rhs) return Certificate{"equal", "identical sides", {}};
  if (o.lhs.is_const() && o.rhs.is_const())
    return o.lhs.value() <= o.rhs.value() ? std::optional(Certificate{"equal", "constants", {}}) : std::nullopt;
  try {
    if (is_identically_zero(o.rhs - o.lhs, kLadderCap)) return Certificate{"together", "sides agree once fractions are combined", {}};
  } catch (const ExpansionLimit&) {
  } catch (const DomainError&) {
  }
  if (!any_form && !o.lhs.is_zero()) return std::nullopt;
  auto d = difference_poly(o);
  if (!d) return std::nullopt;
  if (d->empty()) return Certificate{"equal", "sides agree after expansion", {}};
  if (!atoms_nonneg(*d, *o.assumptions)) return std::nullopt;
  for (const auto& [m, c] : *d)
    if (c < 0) return std::nullopt;
  return Certificate{"nonneg_poly", "rhs - lhs has nonnegative coefficients", {}};
}

std::optional<Certificate> amgm_close(const Inequality& o, const MatchBudget& budget) {
  const AssumptionSet& asm_ = *o.assumptions;
  auto attempt = [&](const Expr& side, bool is_rhs) -> std::optional<Certificate> {
    if (side.is_const() || side.is_symbol()) return std::nullopt;
    auto labels = label_monotonicity(side, asm_);
    for (int weighted = 0; weighted < 2; ++weighted) {
      auto rs = weighted ? match_weighted_amgm(side, asm_, labels, budget) : match_amgm(side, asm_, labels, budget);
      for (const auto& r : rs) {
        if (is_rhs != (r.direction == Direction::LowerBound)) continue;
        Inequality rest = is_rhs ? make_le(o.lhs, r.produced, o.assumptions) : make_le(r.produced, o.rhs, o.assumptions);
        if (auto c = cheap_close(rest, true)) {
          std::string method = weighted ? "weighted_AM_GM" : "AM_GM";
          return Certificate{method, r.statement, {}};
        }
      }
    }
    return std::nullopt;
  };
  if (auto c = attempt(o.rhs, true)) return c;
  return attempt(o.lhs, false);
}

std::optional<Certificate> poly_close(const Inequality& o) {
  if (!o.lhs.is_zero()) return std::nullopt;
  auto d = difference_poly(o);
  if (!d || d->empty() || !all_symbol_atoms(*d)) return std::nullopt;
  const AssumptionSet& asm_ = *o.assumptions;
  if (!atoms_nonneg(*d, asm_)) return std::nullopt;
  try {
    if (auto steps = amgm_cover(*d, asm_)) return Certificate{"AM_GM_cover", "AM-GM on groups of terms", *steps};
    if (is_plain_polynomial(*d)) {
      Expr p = from_poly(*d);
      if (auto s = match_schur(p, asm_)) return Certificate{"schur", s->statement, {}};
      if (auto m = match_muirhead(o.lhs, o.rhs, asm_)) return Certificate{"Muirhead", m->statement, {}};
    }
  } catch (const ExpansionLimit&) {
  }
  return std::nullopt;
}

std::optional<Certificate> one_var_close(const Inequality& o) {
  const AssumptionSet& asm_ = *o.assumptions;
  if (!asm_.conditions.empty() || !asm_.facts.empty()) return std::nullopt;
  auto syms = free_symbols(o.lhs);
  for (const auto& s : free_symbols(o.rhs)) syms.insert(s);
  if (syms.size() != 1) return std::nullopt;
  const std::string x = *syms.begin();
  Interval dom;
  if (asm_.domain_of(x) != Domain::Real) dom.lo = Rational(0);
  if (one_var_check(o.lhs, o.rhs, x, dom) == Verdict::True) return Certificate{"one_var", "sign of rhs - lhs in " + x, {}};
  return std::nullopt;
}

}  // namespace

Goal make_goal(Inequality target, Derivation d, int parent, int depth) {
  Goal g;
  g.target = target.oriented();
  g.derivation = std::move(d);
  g.parent = parent;
  g.depth = depth;
  g.tree_depth = std::max(tree_depth(g.target.lhs), tree_depth(g.target.rhs));
  g.length = string_length(g.target.lhs) + string_length(g.target.rhs);
  g.hash = g.target.hash();
  return g;
}

std::optional<Certificate> is_trivially_true(const Inequality& g, const MatchBudget& budget) {
  Inequality o = g.oriented();
  if (auto c = cheap_close(o)) return c;
  if (o.strict()) return std::nullopt;
  if (auto c = amgm_close(o, budget)) return c;
  if (auto c = poly_close(o)) return c;
  return one_var_close(o);
}

std::optional<Assignment> sample_point(const AssumptionSet& asm_, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> expo(std::log(1e-2), std::log(1e2));
  std::bernoulli_distribution coin(0.5);
  Assignment at;
  for (const auto& [name, dom] : asm_.domains) {
    Real v = std::exp(static_cast<Real>(expo(rng)));
    if (dom == Domain::Real && coin(rng)) v = -v;
    at[name] = v;
  }
  if (asm_.conditions.size() > 1) return std::nullopt;
  if (asm_.conditions.size() == 1) {
    const Condition& cond = asm_.conditions.front();
    Expr f = cond.lhs - cond.rhs;
    auto scaled = [&](Real t) {
      Assignment s = at;
      for (auto& [k, v] : s) v *= t;
      return s;
    };
    bool done = false;
    Expr c = cond.lhs;
    Expr k = cond.rhs;
    if (c.is_const()) std::swap(c, k);
    if (k.is_const() && k.value() > 0) {
      auto deg = homogeneous_degree(c);
      if (deg && *deg != 0) {
        try {
          Real v = evaluate(c, at);
          if (v > 0) {
            Real t = std::pow(static_cast<Real>(k.value().get_d()) / v, 1.0L / static_cast<Real>(deg->get_d()));
            at = scaled(t);
            done = true;
          }
        } catch (const DomainError&) {
        }
      }
    }
    if (!done) {
      // One-dimensional solve along the ray through the drawn point.
      auto value = [&](Real logt) { return evaluate(f, scaled(std::exp(logt))); };
      try {
        Real lo = std::log(1e-4L);
        Real hi = std::log(1e4L);
        Real flo = value(lo);
        Real fhi = value(hi);
        if ((flo > 0) == (fhi > 0)) return std::nullopt;
        for (int i = 0; i < 200; ++i) {
          Real mid = (lo + hi) / 2;
          Real fm = value(mid);
          if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        at = scaled(std::exp((lo + hi) / 2));
      } catch (const DomainError&) {
        return std::nullopt;
      }
    }
  }
  for (const auto& fact : asm_.facts) {
    try {
      if (evaluate(fact, at) < 0) return std::nullopt;
    } catch (const DomainError&) {
      return std::nullopt;
    }
  }
  return at;
}

std::optional<Assignment> falsify(const Inequality& g, int samples, double margin, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ g.hash());
  for (int i = 0; i < samples; ++i) {
    auto at = sample_point(*g.assumptions, rng);
    if (!at) continue;
    if (!holds_at(g, *at, margin)) return at;
  }
  return std::nullopt;
}

std::vector<Goal> generate_subgoals(const Goal& g, const ExpansionOptions& opts) {
  const Inequality& o = g.target;
  const AssumptionSet& asm_ = *o.assumptions;
  std::vector<Goal> out;
  std::unordered_set<std::uint64_t> seen{g.hash};
  auto push = [&](const Inequality& t, Derivation d) {
    Goal c = make_goal(t, std::move(d), -1, g.depth + 1);
    if (!seen.insert(c.hash).second) return;
    out.push_back(std::move(c));
  };
  auto run_rule = [&](Rule r, std::size_t cap) {
    try {
      for (const auto& t : apply_rule(r, o, cap)) push(t, {Derivation::Kind::Rule, rule_tag(r).name, {}});
    } catch (const ExpansionLimit&) {
    } catch (const DomainError&) {
    }
  };
  const auto& entries = opts.rules.entries();
  for (const auto& [r, cap] : entries)
    if (r == Rule::TryHomo) run_rule(r, cap);
  if (opts.theorems) {
    auto side = [&](const Expr& e, bool is_rhs) {
      if (e.is_const() || e.is_symbol()) return;
      std::vector<MatchResult> rs;
      try {
        rs = match_all(e, asm_, opts.budget);
      } catch (const ExpansionLimit&) {
        return;
      } catch (const DomainError&) {
        return;
      }
      for (const auto& r : rs) {
        if (is_rhs != (r.direction == Direction::LowerBound)) continue;
        Inequality t = is_rhs ? make_le(o.lhs, r.produced, o.assumptions, o.strict())
                              : make_le(r.produced, o.rhs, o.assumptions, o.strict());
        push(t, {is_rhs ? Derivation::Kind::TheoremRhs : Derivation::Kind::TheoremLhs, r.theorem, r.statement});
      }
    };
    side(o.lhs, false);
    side(o.rhs, true);
  }
  for (const auto& [r, cap] : entries)
    if (r != Rule::TryHomo) run_rule(r, cap);
  return out;
}

double ucb_score(double value, double parent_visits, double visits, double c) {
  if (visits <= 0) return std::numeric_limits<double>::infinity();
  return value + c * std::sqrt(std::log(std::max(parent_visits, 1.0)) / visits);
}

namespace {

ProofTree extract(const std::vector<Goal>& arena, int terminal, Certificate cert, std::vector<int>& path) {
  path.clear();
  for (int i = terminal; i >= 0; i = arena[i].parent) path.push_back(i);
  std::reverse(path.begin(), path.end());
  ProofTree p;
  p.root = arena[path.front()].target;
  for (std::size_t i = 1; i < path.size(); ++i) p.steps.push_back({arena[path[i]].target, arena[path[i]].derivation});
  p.certificate = std::move(cert);
  return p;
}

// Shared bookkeeping for the three strategies: arena, global dedup,
// pruning and the closing check on every new goal.
class Search {
 public:
  Search(const Inequality& root, const SearchLimits& lim, const ExpansionOptions& opts)
      : lim_(lim), opts_(opts), t0_(Clock::now()) {
    res_.arena.push_back(make_goal(root));
    seen_.insert(res_.arena[0].hash);
    if (auto c = is_trivially_true(res_.arena[0].target, opts_.budget)) finish(0, std::move(*c));
  }

  bool solved() const { return res_.proof.has_value(); }
  bool out_of_budget() {
    if (seconds_since(t0_) > lim_.seconds) {
      res_.stats.timed_out = true;
      return true;
    }
    return res_.stats.expansions >= lim_.max_expansions;
  }

  /// Expands arena[idx]; returns indices of the surviving new goals. Stops
  /// early once a new goal is closed.
  std::vector<int> expand(int idx) {
    ++res_.stats.expansions;
    res_.stats.expanded_hashes.push_back(res_.arena[idx].hash);
    std::vector<Goal> kids;
    kids = generate_subgoals(res_.arena[idx], opts_);
    std::vector<int> out;
    for (auto& k : kids) {
      ++res_.stats.generated;
      if (!seen_.insert(k.hash).second) continue;
      if (seconds_since(t0_) > lim_.seconds) break;
      if (falsify(k.target, lim_.falsify_samples, 1e-6, lim_.seed)) {
        ++res_.stats.pruned;
        continue;
      }
      k.parent = idx;
      k.depth = res_.arena[idx].depth + 1;
      res_.arena.push_back(std::move(k));
      int ci = static_cast<int>(res_.arena.size()) - 1;
      if (auto c = is_trivially_true(res_.arena[ci].target, opts_.budget)) {
        finish(ci, std::move(*c));
        return {ci};
      }
      out.push_back(ci);
    }
    return out;
  }

  const Goal& goal(int i) const { return res_.arena[i]; }

  SearchResult done(std::size_t open_size) {
    res_.stats.open_size = open_size;
    res_.stats.elapsed = seconds_since(t0_);
    return std::move(res_);
  }

 private:
  void finish(int idx, Certificate c) { res_.proof = extract(res_.arena, idx, std::move(c), res_.proof_path); }

  SearchLimits lim_;
  const ExpansionOptions& opts_;
  Clock::time_point t0_;
  SearchResult res_;
  std::unordered_set<std::uint64_t> seen_;
};

struct OpenEntry {
  double score;
  int tree_depth;
  std::size_t length;
  std::uint64_t hash;
  int idx;
  bool operator>(const OpenEntry& o) const {
    return std::tie(score, tree_depth, length, hash) > std::tie(o.score, o.tree_depth, o.length, o.hash);
  }
};

double scored(const Goal& g, const Heuristic& h, const SearchLimits& lim) {
  double s = h(g.target);
  if (g.derivation.kind == Derivation::Kind::Rule && g.derivation.name == rule_tag(Rule::TryHomo).name)
    s -= lim.homo_bonus;
  return s;
}

}  // namespace

SearchResult best_first_search(const Inequality& root, const Heuristic& h, const SearchLimits& lim,
                               const ExpansionOptions& opts) {
  Search s(root, lim, opts);
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;
  auto push = [&](int i) {
    const Goal& g = s.goal(i);
    open.push({scored(g, h, lim), g.tree_depth, g.length, g.hash, i});
  };
  if (!s.solved()) push(0);
  while (!s.solved() && !open.empty() && !s.out_of_budget()) {
    int idx = open.top().idx;
    open.pop();
    for (int c : s.expand(idx)) {
      if (s.solved()) break;
      if (open.size() < lim.max_open) push(c);
    }
  }
  return s.done(open.size());
}

SearchResult bfs_search(const Inequality& root, const SearchLimits& lim, const ExpansionOptions& opts) {
  Search s(root, lim, opts);
  std::queue<int> open;
  if (!s.solved()) open.push(0);
  while (!s.solved() && !open.empty() && !s.out_of_budget()) {
    int idx = open.front();
    open.pop();
    for (int c : s.expand(idx)) {
      if (s.solved()) break;
      if (open.size() < lim.max_open) open.push(c);
    }
  }
  return s.done(open.size());
}

SearchResult mcts_search(const Inequality& root, const Heuristic& h, const MctsConfig& cfg, const SearchLimits& lim,
                         const ExpansionOptions& opts) {
  Search s(root, lim, opts);
  struct Node {
    std::vector<int> children;  // goal indices
    double w = 0;
    double n = 0;
    bool expanded = false;
    bool dead = false;
  };
  std::unordered_map<int, Node> nodes;
  std::unordered_map<int, double> value_cache;

  // Expands once, keeps the k best-scored survivors.
  auto expand_node = [&](int gi) -> Node& {
    Node& nd = nodes[gi];
    if (nd.expanded) return nd;
    nd.expanded = true;
    std::vector<int> kids = s.expand(gi);
    if (s.solved()) return nodes[gi];
    std::vector<std::pair<double, int>> ranked;
    for (int c : kids) ranked.push_back({scored(s.goal(c), h, lim), c});
    std::sort(ranked.begin(), ranked.end());
    Node& again = nodes[gi];
    for (std::size_t i = 0; i < ranked.size() && i < cfg.k; ++i) {
      again.children.push_back(ranked[i].second);
      value_cache[ranked[i].second] = 1.0 - ranked[i].first;
    }
    if (again.children.empty()) again.dead = true;
    return again;
  };

  // Value of a fresh child: 1 - h, or the best 1 - h seen on a greedy
  // descent of `lookahead` expansions.
  auto evaluate_child = [&](int gi) {
    double best = value_cache.count(gi) ? value_cache[gi] : 1.0 - scored(s.goal(gi), h, lim);
    int cur = gi;
    for (int d = 0; d < cfg.lookahead && !s.solved() && !s.out_of_budget(); ++d) {
      Node& nd = expand_node(cur);
      if (s.solved() || nd.children.empty()) break;
      cur = nd.children.front();
      best = std::max(best, value_cache[cur]);
    }
    return best;
  };

  std::size_t iterations = 0;
  while (!s.solved() && !s.out_of_budget()) {
    ++iterations;
    std::vector<int> path{0};
    int cur = 0;
    while (nodes[cur].expanded && !nodes[cur].dead) {
      Node& nd = nodes[cur];
      int pick = -1;
      double best = -std::numeric_limits<double>::infinity();
      for (int c : nd.children) {
        Node& cn = nodes[c];
        if (cn.dead) continue;
        double u = cn.n > 0 ? ucb_score(cn.w / cn.n, nd.n, cn.n, cfg.c) : std::numeric_limits<double>::infinity();
        if (u > best) {
          best = u;
          pick = c;
        }
      }
      if (pick < 0) {
        nd.dead = true;
        break;
      }
      cur = pick;
      path.push_back(cur);
    }
    if (nodes[0].dead) break;
    double v = 0;
    if (!nodes[cur].dead) {
      Node& nd = expand_node(cur);
      if (s.solved()) break;
      for (int c : std::vector<int>(nd.children)) {
        double cv = evaluate_child(c);
        if (s.solved()) break;
        Node& cn = nodes[c];
        cn.w += cv;
        cn.n += 1;
        v = std::max(v, cv);
      }
    }
    if (s.solved()) break;
    // A node whose children are all dead is dead too.
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      Node& nd = nodes[*it];
      nd.w += v;
      nd.n += 1;
      if (nd.expanded && !nd.dead &&
          std::all_of(nd.children.begin(), nd.children.end(), [&](int c) { return nodes[c].dead; }))
        nd.dead = true;
    }
  }
  return s.done(iterations);
}

namespace {

std::string function_name(const Derivation& d) {
  if (d.kind == Derivation::Kind::Rule) return d.name;
  if (d.name == "AM-GM") return "check_AM_GM";
  if (d.name == "weighted AM-GM") return "check_weighted_AM_GM";
  if (d.name == "Holder") return "check_Holder";
  if (d.name == "Jensen") return "check_Jensen";
  if (d.name == "Muirhead") return "check_SimpMuirhead";
  if (d.name == "tangent line") return "check_tangent_line";
  return "check_" + d.name;
}

std::string closing_name(const Certificate& c) {
  if (c.method == "nonneg_poly") return "check_nonneg";
  if (c.method == "AM_GM" || c.method == "AM_GM_cover") return "check_AM_GM";
  if (c.method == "weighted_AM_GM") return "check_weighted_AM_GM";
  if (c.method == "schur") return "check_schur";
  if (c.method == "Muirhead") return "check_Muirhead";
  if (c.method == "one_var") return "one_var_check";
  if (c.method == "together") return "try_together_l";
  return "check_" + c.method;
}

}  // namespace

std::string render_proof(const ProofTree& p) {
  std::ostringstream os;
  os << "To prove\n" << p.root.text() << "\n";
  bool merge = p.certificate.method == "equal" && !p.steps.empty();
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const auto& st = p.steps[i];
    const auto& d = st.derivation;
    if (!d.statement.empty() && (d.name == "Holder" || d.name == "Jensen" || d.name == "tangent line"))
      os << "we use " << (d.name == "Holder" ? "Hölder's inequality" : d.name == "Jensen" ? "Jensen's inequality"
                                                                                          : "the tangent line trick")
         << ":\n"
         << d.statement << "\n";
    os << "by <function " << function_name(d) << ">, ";
    if (merge && i + 1 == p.steps.size()) {
      os << "this is true!\n";
      return os.str();
    }
    os << "it remains to prove\n" << st.goal.text() << "\n";
  }
  os << "by <function " << (p.certificate.method == "equal" ? "check_equal" : closing_name(p.certificate))
     << ">, this is true!\n";
  return os.str();
}

bool replay(const ProofTree& p, const ExpansionOptions& opts) {
  Goal cur = make_goal(p.root);
  ExpansionOptions loose = opts;
  loose.budget.seconds = std::max(loose.budget.seconds, 10.0);
  for (const auto& st : p.steps) {
    std::uint64_t want = st.goal.hash();
    bool found = false;
    for (const auto& k : generate_subgoals(cur, loose)) {
      if (k.hash == want && k.derivation.name == st.derivation.name) {
        found = true;
        break;
      }
    }
    if (!found) return false;
    cur = make_goal(st.goal, st.derivation);
  }
  auto c = is_trivially_true(cur.target, loose.budget);
  return c.has_value();
}

}  // namespace ineq
