#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "ineq/calculus.hpp"
#include "ineq/io.hpp"
#include "ineq/poly.hpp"
#include "ineq/theorem.hpp"
#include "ineq/univariate.hpp"

namespace ineq {

namespace {

enum class Curvature { Convex, Concave, Unknown };

// Paths (common to all terms) below which the terms first disagree.
void collect_diffs(const ExprList& ts, Path& path, std::vector<Path>& out) {
  bool same = std::all_of(ts.begin() + 1, ts.end(), [&](const Expr& t) { return t == ts[0]; });
  if (same) return;
  const Expr& a = ts[0];
  bool aligned = !a.operands().empty() && std::all_of(ts.begin() + 1, ts.end(), [&](const Expr& t) {
    return t.kind() == a.kind() && t.operands().size() == a.operands().size();
  });
  if (!aligned) {
    out.push_back(path);
    return;
  }
  for (std::size_t i = 0; i < a.operands().size(); ++i) {
    ExprList kids;
    for (const auto& t : ts) kids.push_back(t.operands()[i]);
    path.push_back(i);
    collect_diffs(kids, path, out);
    path.pop_back();
  }
}

Path common_prefix(const std::vector<Path>& paths) {
  Path p = paths.front();
  for (const auto& q : paths) {
    std::size_t n = 0;
    while (n < p.size() && n < q.size() && p[n] == q[n]) ++n;
    p.resize(n);
  }
  return p;
}

// Sign of f'' on the domain; numeric sampling only when f'' involves no
// symbol other than the hole (and the sum symbol, if any).
Curvature curvature(const Expr& f, const std::string& x, const AssumptionSet& asm_, const std::string& s = "") {
  Expr f2;
  try {
    f2 = differentiate(differentiate(f, x), x);
  } catch (const std::exception&) {
    return Curvature::Unknown;
  }
  if (f2.is_const() && f2.value() == 0) return Curvature::Unknown;
  Sign sg = infer_sign(f2, asm_);
  if (is_nonneg(sg)) return Curvature::Convex;
  if (is_nonpos(sg)) return Curvature::Concave;
  auto syms = free_symbols(f2);
  for (const auto& v : syms) {
    if (v != x && v != s) return Curvature::Unknown;
  }
  bool positive_x = asm_.domain_of(x) != Domain::Real;
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> logu(std::log(1e-2), std::log(1e2));
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  std::uniform_real_distribution<double> wide(-100, 100);
  int pos = 0;
  int negs = 0;
  for (int i = 0; i < 200; ++i) {
    Assignment at;
    if (!s.empty()) {
      Real sv = std::exp(logu(rng));
      at[s] = sv;
      at[x] = sv * unit(rng);
    } else {
      at[x] = positive_x ? std::exp(logu(rng)) : wide(rng);
    }
    try {
      Real v = evaluate(f2, at);
      if (!std::isfinite(static_cast<double>(v))) continue;
      if (v > 1e-12) ++pos;
      if (v < -1e-12) ++negs;
    } catch (const std::exception&) {
    }
  }
  if (negs == 0 && pos > 0) return Curvature::Convex;
  if (pos == 0 && negs > 0) return Curvature::Concave;
  return Curvature::Unknown;
}

bool same_value(const Expr& a, const Expr& b) {
  if (a == b) return true;
  try {
    return is_identically_zero(a - b, 4000);
  } catch (const std::exception&) {
    return false;
  }
}

std::vector<std::pair<Path, Mono>> add_sites(const Expr& e, const AssumptionSet& asm_) {
  auto labels = label_monotonicity(e, asm_);
  std::vector<std::pair<Path, Mono>> out;
  for (const auto& [path, label] : labels.labels) {
    if (label != Mono::None && subexpr_at(e, path).is_add()) out.emplace_back(path, label);
  }
  return out;
}

Direction at_root(Direction site_dir, Mono label) {
  if (label == Mono::Inc) return site_dir;
  return site_dir == Direction::UpperBound ? Direction::LowerBound : Direction::UpperBound;
}

bool all_vars_nonneg(const AssumptionSet& asm_) {
  auto vars = asm_.variables();
  return !vars.empty() && std::all_of(vars.begin(), vars.end(), [&](const std::string& v) {
    return asm_.domain_of(v) != Domain::Real;
  });
}

void push_result(std::vector<MatchResult>& out, std::set<std::uint64_t>& seen, const Expr& root,
                 const std::string& theorem, const Path& path, Mono label, Direction site_dir, const Expr& repl,
                 std::vector<std::pair<Expr, Expr>> eq, std::string statement, double used) {
  MatchResult r;
  r.theorem = theorem;
  r.site = path;
  r.direction = at_root(site_dir, label);
  r.replacement = repl;
  try {
    r.produced = replace_at(root, path, repl);
  } catch (const DomainError&) {
    return;
  }
  if (r.produced == root || !seen.insert(r.produced.hash() * 2 + static_cast<int>(r.direction)).second) return;
  r.equality_condition = std::move(eq);
  r.statement = std::move(statement);
  r.budget_used = used;
  out.push_back(std::move(r));
}

}  // namespace

std::vector<MatchResult> match_jensen(const Expr& e, const AssumptionSet& asm_, const MatchBudget& budget) {
  auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  std::vector<MatchResult> out;
  std::set<std::uint64_t> seen;
  for (const auto& [path, label] : add_sites(e, asm_)) {
    if (out.size() >= budget.max_results || elapsed() > budget.seconds) break;
    const Expr& site = subexpr_at(e, path);
    const ExprList& terms = site.operands();
    long n = static_cast<long>(terms.size());
    std::string x = fresh_symbol(e, "x");

    // Template with one hole from anti-unification of the summands.
    std::vector<Path> diffs;
    Path p;
    collect_diffs(terms, p, diffs);
    Path lca = diffs.empty() ? Path{} : common_prefix(diffs);
    if (!diffs.empty() && !lca.empty()) {
      Expr f = replace_at(terms[0], lca, symbol(x));
      ExprList args;
      bool ok = true;
      for (const auto& t : terms) {
        const Expr& u = subexpr_at(t, lca);
        if (replace_at(terms[0], lca, u) != t) ok = false;
        args.push_back(u);
      }
      if (ok) {
        AssumptionSet ax = asm_;
        bool pos = std::all_of(args.begin(), args.end(), [&](const Expr& u) {
          return is_nonneg(infer_sign(u, asm_));
        });
        ax.domains[x] = pos ? Domain::Positive : Domain::Real;
        Curvature c = curvature(f, x, ax);
        if (c != Curvature::Unknown) {
          Expr mean = distribute(Rational(1, n), add(args));
          Expr bound = integer(n) * substitute(f, {{x, mean}});
          std::vector<std::pair<Expr, Expr>> eq;
          for (std::size_t j = 1; j < args.size(); ++j) eq.emplace_back(args[0], args[j]);
          std::string statement = "f(" + x + ") = " + render(f) + " is " +
                                  (c == Curvature::Convex ? "convex" : "concave") + ", so " + render(site) +
                                  (c == Curvature::Convex ? " >= " : " <= ") + render(bound);
          push_result(out, seen, e, "Jensen", path, label,
                      c == Curvature::Convex ? Direction::LowerBound : Direction::UpperBound, bound, std::move(eq),
                      statement, elapsed());
        }
      }
      continue;
    }

    // One-variable form: t_i = f(v_i) with the other variables entering
    // through s - v_i, where s is the sum of all variables.
    auto vars = asm_.variables();
    if (static_cast<long>(vars.size()) != n || n < 2 || !all_vars_nonneg(asm_)) continue;
    std::string s = fresh_symbol(e + symbol(x), "s");
    ExprList vs;
    for (const auto& v : vars) vs.push_back(symbol(v));
    Expr total = add(vs);
    for (const auto& v : vars) {
      std::map<std::string, Expr> sub{{v, symbol(x)}};
      Expr rest = (symbol(s) - symbol(x)) * constant(Rational(1, n - 1));
      for (const auto& w : vars) {
        if (w != v) sub[w] = rest;
      }
      Expr f;
      try {
        f = substitute(terms[0], sub);
      } catch (const std::exception&) {
        continue;
      }
      if (!contains_symbol(f, x)) continue;
      std::vector<bool> used(vars.size(), false);
      ExprList args;
      bool ok = true;
      for (const auto& t : terms) {
        bool found = false;
        for (std::size_t j = 0; j < vars.size() && !found; ++j) {
          if (used[j]) continue;
          Expr cand;
          try {
            cand = substitute(f, {{x, symbol(vars[j])}, {s, total}});
          } catch (const std::exception&) {
            continue;
          }
          if (same_value(cand, t)) {
            used[j] = true;
            args.push_back(symbol(vars[j]));
            found = true;
          }
        }
        if (!found) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      AssumptionSet ax;
      ax.domains[x] = Domain::Positive;
      ax.domains[s] = Domain::Positive;
      ax.facts.push_back(symbol(s) - symbol(x));
      Curvature c = curvature(f, x, ax, s);
      if (c == Curvature::Unknown) break;
      Expr mean = distribute(Rational(1, n), total);
      Expr bound = integer(n) * substitute(f, {{x, mean}, {s, total}});
      std::vector<std::pair<Expr, Expr>> eq;
      for (std::size_t j = 1; j < args.size(); ++j) eq.emplace_back(args[0], args[j]);
      std::string statement = "f(" + x + ") = " + render(f) + " is " +
                              (c == Curvature::Convex ? "convex" : "concave") + " for 0 < " + x + " < " + s +
                              ", so " + render(site) + (c == Curvature::Convex ? " >= " : " <= ") + render(bound);
      push_result(out, seen, e, "Jensen", path, label,
                  c == Curvature::Convex ? Direction::LowerBound : Direction::UpperBound, bound, std::move(eq),
                  statement, elapsed());
      break;
    }
  }
  for (auto& r : out) r.partial = elapsed() > budget.seconds;
  return out;
}

std::vector<MatchResult> match_tangent_line(const Expr& e, const AssumptionSet& asm_, const MatchBudget& budget) {
  auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  std::vector<MatchResult> out;
  std::set<std::uint64_t> seen;
  auto vars = asm_.variables();
  long n = static_cast<long>(vars.size());
  if (n < 2 || !all_vars_nonneg(asm_)) return out;
  ExprList vs;
  for (const auto& v : vars) vs.push_back(symbol(v));
  Expr total = add(vs);

  // A side condition fixing the sum of the variables.
  std::optional<Rational> fixed_sum;
  for (const auto& c : asm_.conditions) {
    if (c.lhs == total && c.rhs.is_const()) fixed_sum = c.rhs.value();
    if (c.rhs == total && c.lhs.is_const()) fixed_sum = c.lhs.value();
  }

  for (const auto& [path, label] : add_sites(e, asm_)) {
    if (out.size() >= budget.max_results || elapsed() > budget.seconds) break;
    const Expr& site = subexpr_at(e, path);
    const ExprList& terms = site.operands();
    if (static_cast<long>(terms.size()) != n) continue;
    std::string x = fresh_symbol(e, "x");
    Rational k = 1;
    bool homogeneous = false;
    if (fixed_sum && *fixed_sum > 0) {
      k = *fixed_sum;
      bool single = std::all_of(terms.begin(), terms.end(), [](const Expr& t) { return free_symbols(t).size() == 1; });
      if (!single) continue;
    } else {
      auto d = homogeneous_degree(site);
      if (!d || *d != 0) continue;
      homogeneous = true;
    }
    // f from the first term, distinguishing each variable in turn; every
    // term must then be f at a distinct variable.
    auto attempt = [&](const std::string& v) -> std::optional<std::pair<Expr, ExprList>> {
      std::map<std::string, Expr> sub{{v, symbol(x)}};
      Expr rest = (constant(k) - symbol(x)) * constant(Rational(1, n - 1));
      for (const auto& w : vars) {
        if (w != v) sub[w] = rest;
      }
      Expr f;
      try {
        f = substitute(terms[0], sub);
      } catch (const std::exception&) {
        return std::nullopt;
      }
      if (!contains_symbol(f, x)) return std::nullopt;
      std::vector<bool> used(vars.size(), false);
      ExprList args;
      for (const auto& t : terms) {
        bool found = false;
        for (std::size_t j = 0; j < vars.size() && !found; ++j) {
          if (used[j]) continue;
          Expr arg = homogeneous ? constant(k) * symbol(vars[j]) / total : symbol(vars[j]);
          Expr cand;
          try {
            cand = substitute(f, {{x, arg}});
          } catch (const std::exception&) {
            continue;
          }
          if (same_value(cand, t)) {
            used[j] = true;
            args.push_back(arg);
            found = true;
          }
        }
        if (!found) return std::nullopt;
      }
      return std::make_pair(f, args);
    };
    std::optional<std::pair<Expr, ExprList>> fit;
    for (const auto& v : vars) {
      if (contains_symbol(terms[0], v) && (fit = attempt(v))) break;
    }
    if (!fit) continue;
    const Expr& f = fit->first;
    const ExprList& args = fit->second;
    Interval dom{Rational(0), k};
    for (const Rational& x0 : std::vector<Rational>{Rational(k / n), Rational(0), k}) {
      auto tb = tangent_line_check(f, x, dom, x0);
      if (!tb) continue;
      ExprList lines;
      for (const auto& a : args) lines.push_back(substitute(tb->line, {{x, a}}));
      Expr bound = add(lines);
      std::vector<std::pair<Expr, Expr>> eq;
      for (const auto& a : args) eq.emplace_back(a, constant(x0));
      std::string statement = render(f) + (tb->upper ? " <= " : " >= ") + render(tb->line) + " for 0 < " + x +
                              " < " + render(constant(k));
      push_result(out, seen, e, "tangent line", path, label,
                  tb->upper ? Direction::UpperBound : Direction::LowerBound, bound, std::move(eq), statement,
                  elapsed());
      break;
    }
  }
  return out;
}

}  // namespace ineq
