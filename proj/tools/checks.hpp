#pragma once

// Property checks shared by the acceptance runner and the unit tests. Each
// returns counts so callers can pick their own scale.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "ineq/benchmark.hpp"
#include "ineq/calculus.hpp"
#include "ineq/heuristics.hpp"
#include "ineq/io.hpp"
#include "ineq/prover.hpp"
#include "ineq/sign.hpp"
#include "ineq/theorem.hpp"

namespace ineq::checks {

struct Tally {
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::string first_failure;

  void fail(const std::string& what) {
    if (failures++ == 0) first_failure = what;
  }
};

// --- reference solutions ----------------------------------------------------

struct TraceGoals {
  std::string name;
  std::vector<std::string> vars;
  std::vector<std::string> conditions;
  std::vector<std::string> goals;
};

/// Intermediate goals of the ten reference solutions (truncated ones
/// omitted). Every one of them is a true statement.
inline const std::vector<TraceGoals>& reference_traces() {
  static const std::vector<std::string> abcd{"a", "b", "c", "d"};
  static const std::vector<std::string> abc{"a", "b", "c"};
  static const std::vector<TraceGoals> t = {
      {"IMO 1990 Shortlist",
       abcd,
       {},
       {"a^3/(b + c + d) + b^3/(a + c + d) + c^3/(a + b + d) + d^3/(a + b + c) >= a*b/3 + a*d/3 + b*c/3 + c*d/3",
        "a^2/3 + b^2/3 + c^2/3 + d^2/3 <= a^3/(b + c + d) + b^3/(a + c + d) + c^3/(a + b + d) + d^3/(a + b + c)",
        "(a^2 + b^2 + c^2 + d^2)/3 <= (a^2 + b^2 + c^2 + d^2)^2/(a*(b + c + d) + b*(a + c + d) + c*(a + b + d) + "
        "d*(a + b + c))",
        "1/3 <= (a^2 + b^2 + c^2 + d^2)/(a*(b + c + d) + b*(a + c + d) + c*(a + b + d) + d*(a + b + c))",
        "1/3 <= 4*(a/4 + b/4 + c/4 + d/4)^2/(a*(b + c + d) + b*(a + c + d) + c*(a + b + d) + d*(a + b + c))",
        "1/3 <= (a/4 + b/4 + c/4 + d/4)/(3*a/4 + 3*b/4 + 3*c/4 + 3*d/4)"}},
      {"IMO 1993 Shortlist",
       abcd,
       {},
       {"a/(b + 2*c + 3*d) + b/(3*a + c + 2*d) + c/(2*a + 3*b + d) + d/(a + 2*b + 3*c) >= 2/3",
        "2/3 <= (a + b + c + d)^2/(4*a*b + 4*a*c + 4*a*d + 4*b*c + 4*b*d + 4*c*d)",
        "2/(3*(a + b + c + d)^2) <= 1/(4*a*b + 4*a*c + 4*a*d + 4*b*c + 4*b*d + 4*c*d)",
        "8*a*b + 8*a*c + 8*a*d + 8*b*c + 8*b*d + 8*c*d <= 3*a^2 + 6*a*b + 6*a*c + 6*a*d + 3*b^2 + 6*b*c + 6*b*d + "
        "3*c^2 + 6*c*d + 3*d^2",
        "0 <= 3*a^2 - 2*a*b - 2*a*c - 2*a*d + 3*b^2 - 2*b*c - 2*b*d + 3*c^2 - 2*c*d + 3*d^2",
        "0 <= 2*a^2 - 2*a*b - 2*a*d + 2*b^2 - 2*b*c + 2*c^2 - 2*c*d + 2*d^2"}},
      {"IMO 1995 P2",
       abc,
       {},
       {"a^2*b^2/(c*(a+b)) + b^2*c^2/(a*(b+c)) + a^2*c^2/(b*(a+c)) >= 3*(a*b*c)^(2/3)/2",
        "3*(a*b*c)^(2/3)/2 <= (a*b + b*c + c*a)/2"}},
      {"USAMO 1997 P5",
       abc,
       {},
       {"1/(a*b*c + b^3 + c^3) + 1/(a^3 + a*b*c + c^3) + 1/(a^3 + a*b*c + b^3) <= 1/(a*b*c)",
        "1/(a*b*c + b^2*c + b*c^2) + 1/(a^2*c + a*b*c + a*c^2) + 1/(a^2*b + a*b^2 + a*b*c) <= 1/(a*b*c)"}},
      {"IMO 2001 P2",
       abc,
       {},
       {"a/sqrt(a^2 + 8*b*c) + b/sqrt(8*a*c + b^2) + c/sqrt(8*a*b + c^2) >= 1",
        "1 <= (a + b + c)^(3/2)/sqrt(a^3 + 24*a*b*c + b^3 + c^3)",
        "sqrt(a^3 + 24*a*b*c + b^3 + c^3) <= (a + b + c)^(3/2)", "a^3 + 24*a*b*c + b^3 + c^3 <= (a + b + c)^3",
        "0 <= -a^3 - 24*a*b*c - b^3 - c^3 + (a + b + c)^3",
        "0 <= 3*a^2*b + 3*a^2*c + 3*a*b^2 - 18*a*b*c + 3*a*c^2 + 3*b^2*c + 3*b*c^2",
        "0 <= 3*a^2*b - 9*a*b*c + 3*a*c^2 + 3*b^2*c"}},
      {"USAMO 2003 P5",
       abc,
       {},
       {"(a + b + 2*c)^2/(2*c^2 + (a + b)^2) + (a + 2*b + c)^2/(2*b^2 + (a + c)^2) + (2*a + b + c)^2/(2*a^2 + (b + "
        "c)^2) <= 8",
        "(a + b + 2*c)^2/(2*c^2 + (a + b)^2) <= 4*c/(a + b + c) + 4/3",
        "4*a/(a + b + c) + 4*b/(a + b + c) + 4*c/(a + b + c) + 4 <= 8"}},
      {"Poland 2004",
       abcd,
       {},
       {"a/(a^3 + 63*b*c*d)^(1/3) + b/(63*a*c*d + b^3)^(1/3) + c/(63*a*b*d + c^3)^(1/3) + d/(63*a*b*c + d^3)^(1/3) "
        ">= 1",
        "1 <= (a + b + c + d)^(4/3)/(a^4 + 252*a*b*c*d + b^4 + c^4 + d^4)^(1/3)",
        "1 <= (a + b + c + d)^4/(a^4 + 252*a*b*c*d + b^4 + c^4 + d^4)",
        "a^4 + 252*a*b*c*d + b^4 + c^4 + d^4 <= (a + b + c + d)^4",
        "0 <= -a^4 - 252*a*b*c*d - b^4 - c^4 - d^4 + (a + b + c + d)^4",
        "216*a*b*c*d <= 4*a^3*b + 4*a^3*c + 184*a*b*c*d + 4*a*c^3 + 4*a*d^3 + 4*b^3*c + 4*b^3*d + 4*b*d^3 + 4*c^3*d",
        "0 <= 4*a^3*b + 4*a^3*c - 32*a*b*c*d + 4*a*c^3 + 4*a*d^3 + 4*b^3*c + 4*b^3*d + 4*b*d^3 + 4*c^3*d",
        "0 <= 4*a^3*b - 16*a*b*c*d + 4*a*d^3 + 4*b^3*c + 4*c^3*d"}},
      {"USA IMO Team Selection 2010 P2",
       abc,
       {},
       {"a^3*b^3/(c^2*(a + 2*b)^2) + a^3*c^3/(b^2*(2*a + c)^2) + b^3*c^3/(a^2*(b + 2*c)^2) >= (a*b*c)^(2/3)/3",
        "(a*b*c)^(2/3)/3 <= a*b/9 + a*c/9 + b*c/9"}},
      {"Korea 2011 P4",
       abc,
       {"a+b+c = 1"},
       {"1/(a^2 - 4*a + 9) + 1/(b^2 - 4*b + 9) + 1/(c^2 - 4*c + 9) <= 7/18",
        "(a + b + c)^2/(a^2 - 4*a*(a + b + c) + 9*(a + b + c)^2) <= (3*a + 2*b + 2*c)/(18*a + 18*b + 18*c)",
        "(3*a + 2*b + 2*c)/(18*a + 18*b + 18*c) + (2*a + 3*b + 2*c)/(18*a + 18*b + 18*c) + (2*a + 2*b + 3*c)/(18*a + "
        "18*b + 18*c) <= 7/18"}},
      {"Japan 2014 P5",
       abc,
       {},
       {"a*(a + b + c)/(9*b*c + 4*(b - c)^2 + (a + b + c)^2) + b*(a + b + c)/(9*a*c + 4*(-a + c)^2 + (a + b + c)^2) "
        "+ c*(a + b + c)/(9*a*b + 4*(a - b)^2 + (a + b + c)^2) >= 1/2",
        "1/2 <= (a + b + c)^3/(27*a*b*c + 4*a*(b - c)^2 + a*(a + b + c)^2 + 4*b*(a - c)^2 + b*(a + b + c)^2 + "
        "4*c*(a - b)^2 + c*(a + b + c)^2)",
        "27*a*b*c + 4*a*(b - c)^2 + a*(a + b + c)^2 + 4*b*(a - c)^2 + b*(a + b + c)^2 + 4*c*(a - b)^2 + c*(a + b + "
        "c)^2 <= 2*(a + b + c)^3",
        "0 <= a^3 - a^2*b - a^2*c - a*b^2 + 3*a*b*c - a*c^2 + b^3 - b^2*c - b*c^2 + c^3"}},
  };
  return t;
}

/// Runs falsify on every reference goal; a rejection is a failure.
inline Tally prune_safety(int samples = 200) {
  Tally t;
  for (const auto& trace : reference_traces()) {
    for (const auto& text : trace.goals) {
      Inequality g = *make_problem(text, trace.vars, Domain::Positive, trace.conditions).goal;
      ++t.checked;
      if (falsify(g, samples)) t.fail(trace.name + ": " + text);
    }
  }
  return t;
}

// --- relabeling ---------------------------------------------------------------

/// The relabeling rule restated from its definition.
inline std::vector<double> relabel_oracle(const std::vector<double>& path, const std::vector<double>& off, double eps,
                                          double eta) {
  std::vector<double> out;
  double m = 0;
  for (double v : path) {
    out.push_back(eps * v);
    if (eps * v > m) m = eps * v;
  }
  for (double v : off) out.push_back((v > m ? v : m) * eta + 1 - eta);
  return out;
}

inline Tally relabel_agreement(std::size_t cases, std::uint64_t seed) {
  Tally t;
  auto asm_ = make_assumptions({"a", "b"});
  Inequality g = make_le(symbol("a"), symbol("a") + symbol("b"), asm_);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> count(0, 6);
  auto round12 = [](double x) { return std::round(x * 1e12) / 1e12; };
  for (std::size_t c = 0; c < cases; ++c) {
    CurriculumConfig cfg;
    cfg.epsilon = u(rng);
    cfg.eta = u(rng);
    std::vector<std::pair<Inequality, double>> path, off;
    std::vector<double> pv, ov;
    for (int i = 1 + count(rng); i > 0; --i) pv.push_back(u(rng)), path.push_back({g, pv.back()});
    for (int i = count(rng); i > 0; --i) ov.push_back(u(rng)), off.push_back({g, ov.back()});
    auto got = curriculum_relabel(path, off, cfg);
    auto want = relabel_oracle(pv, ov, cfg.epsilon, cfg.eta);
    ++t.checked;
    bool same = got.size() == want.size();
    for (std::size_t i = 0; same && i < want.size(); ++i) same = round12(got[i].label) == round12(want[i]);
    if (!same) t.fail("case " + std::to_string(c));
  }
  return t;
}

// --- random expressions -----------------------------------------------------

/// Random expression over a, b, c: sums, products, quotients, differences,
/// square roots and small rational powers.
inline Expr random_expr(std::mt19937_64& rng, int depth) {
  static const char* vars[] = {"a", "b", "c"};
  std::uniform_int_distribution<int> pick(0, 9);
  int k = depth <= 0 ? pick(rng) % 3 : pick(rng);
  if (depth <= 0 || k < 2) {
    if (pick(rng) < 8) return symbol(vars[rng() % 3]);
    static const long nums[] = {1, 2, 3, 1, 2};
    return rng() % 2 ? integer(nums[rng() % 5]) : rational(1, 1 + static_cast<long>(rng() % 3));
  }
  Expr x = random_expr(rng, depth - 1);
  Expr y = random_expr(rng, depth - 1);
  switch (k) {
    case 2:
    case 3:
      return x + y;
    case 4:
      return x * y;
    case 5:
      return y.is_zero() ? x : x / y;
    case 6:
      return x - y;
    case 7:
      return sqrt(x + y);
    case 8: {
      static const Rational exps[] = {Rational(2), Rational(3), Rational(-1), Rational(1, 3), Rational(-2),
                                      Rational(3, 2)};
      const Rational& k = exps[rng() % 6];
      return x.is_zero() && k < 0 ? x : pow(x, k);
    }
    default:
      return x + y * random_expr(rng, depth - 1);
  }
}

inline Assignment random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> logu(std::log(1e-2), std::log(1e2));
  return {{"a", std::exp(logu(rng))}, {"b", std::exp(logu(rng))}, {"c", std::exp(logu(rng))}};
}

// --- monotonicity labels ----------------------------------------------------

/// For each tree and probe point, grows every labeled node a little with
/// its siblings fixed and checks the root moves the labeled way.
inline Tally labeling_contradictions(std::size_t trees, int probes, std::uint64_t seed) {
  Tally t;
  std::mt19937_64 rng(seed);
  auto asm_ = make_assumptions({"a", "b", "c"});
  const Expr hole = symbol("zprobe");
  for (std::size_t n = 0; n < trees; ++n) {
    Expr e = random_expr(rng, 1 + static_cast<int>(rng() % 4));
    MonotoneLabeling labels = label_monotonicity(e, *asm_);
    std::vector<std::pair<Path, Mono>> sites;
    Path path;
    for_each_node(e, path, [&](const Path& p, const Expr&) {
      Mono m = labels.at(p);
      if (!p.empty() && m != Mono::None) sites.push_back({p, m});
    });
    std::vector<Expr> holed;
    for (const auto& [p, m] : sites) holed.push_back(replace_at(e, p, hole));
    for (int k = 0; k < probes; ++k) {
      Assignment at = random_point(rng);
      for (std::size_t s = 0; s < sites.size(); ++s) {
        try {
          Real v = evaluate(subexpr_at(e, sites[s].first), at);
          Real delta = 1e-4L * std::max<Real>(std::fabs(v), 1e-3L);
          Assignment lo = at, hi = at;
          lo["zprobe"] = v;
          hi["zprobe"] = v + delta;
          Real f0 = evaluate(holed[s], lo);
          Real f1 = evaluate(holed[s], hi);
          if (!std::isfinite(static_cast<double>(f0)) || !std::isfinite(static_cast<double>(f1))) continue;
          Real tol = 1e-9L * (1 + std::fabs(f0));
          ++t.checked;
          bool bad = sites[s].second == Mono::Inc ? f1 < f0 - tol : f1 > f0 + tol;
          if (bad) t.fail(render(e) + " at node " + render(subexpr_at(e, sites[s].first)));
        } catch (const DomainError&) {
        }
      }
    }
  }
  return t;
}

// --- matchers -------------------------------------------------------------------

inline bool violates(const Expr& original, const MatchResult& r, const Assignment& at) {
  try {
    Real a = evaluate(original, at);
    Real b = evaluate(r.produced, at);
    Real slack = 1e-9L * (1 + std::fabs(a) + std::fabs(b));
    return r.direction == Direction::UpperBound ? a > b + slack : a < b - slack;
  } catch (const DomainError&) {
    return false;
  }
}

/// Collects `results` match results from random expressions and checks each
/// at `samples` random points.
inline Tally matcher_soundness(std::size_t results, int samples, std::uint64_t seed) {
  Tally t;
  std::mt19937_64 rng(seed);
  auto asm_ = make_assumptions({"a", "b", "c"});
  MatchBudget budget;
  budget.seconds = 0.5;
  budget.max_results = 16;
  const std::vector<std::string> pool = {"a+b", "a*b", "a^2", "1/(a+b)", "sqrt(a*b)", "c/(a+b)", "a^2/b", "b+c",
                                         "1/(b+c)", "c^3", "a*b*c", "sqrt(a+c)", "a/sqrt(a^2+8*b*c)", "b^3/(a+c)"};
  std::size_t guard = 0;
  while (t.checked < results && guard++ < results * 20) {
    Expr e;
    if (rng() % 2) {
      std::string text;
      int terms = 2 + static_cast<int>(rng() % 3);
      for (int i = 0; i < terms; ++i) text += (i ? "+" : "") + pool[rng() % pool.size()];
      if (rng() % 3 == 0) text = "1/(" + text + ")";
      e = parse(text);
    } else {
      e = random_expr(rng, 2 + static_cast<int>(rng() % 2));
    }
    if (e.is_const()) continue;
    std::vector<MatchResult> rs;
    try {
      rs = match_all(e, *asm_, budget);
    } catch (const std::exception&) {
      continue;
    }
    for (const auto& r : rs) {
      if (t.checked >= results) break;
      ++t.checked;
      for (int s = 0; s < samples; ++s) {
        if (violates(e, r, random_point(rng))) {
          t.fail(render(e) + " -> " + render(r.produced) + " by " + r.theorem);
          break;
        }
      }
    }
  }
  return t;
}

/// (sum x_i^(m+1)/y_i^m)(sum y_i)^m >= (sum x_i)^(m+1) through the matcher,
/// checked numerically, for m in 1..3 and n in 2..4.
inline Tally holder_identity(std::size_t instances, std::uint64_t seed) {
  Tally t;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(1, 9);
  std::uniform_real_distribution<double> logu(std::log(1e-2), std::log(1e2));
  std::size_t per = (instances + 8) / 9;
  for (int m = 1; m <= 3; ++m) {
    for (int n = 2; n <= 4; ++n) {
      for (std::size_t trial = 0; trial < per; ++trial) {
        std::vector<std::string> vars;
        ExprList terms;
        for (int i = 0; i < n; ++i) {
          std::string x = "x" + std::to_string(i);
          std::string y = "y" + std::to_string(i);
          vars.push_back(x);
          vars.push_back(y);
          terms.push_back(integer(coef(rng)) * pow(symbol(x), static_cast<long>(m + 1)) *
                          pow(symbol(y), static_cast<long>(-m)));
        }
        auto asm_ = make_assumptions(vars);
        Expr e = add(terms);
        auto rs = match_holder(e, *asm_, label_monotonicity(e, *asm_), {}, m);
        ++t.checked;
        if (rs.empty()) {
          t.fail("no match for " + render(e));
          continue;
        }
        for (const auto& r : rs) {
          for (int s = 0; s < 20; ++s) {
            Assignment at;
            for (const auto& v : vars) at[v] = std::exp(logu(rng));
            if (violates(e, r, at)) {
              t.fail(render(e) + " -> " + render(r.produced));
              break;
            }
          }
        }
      }
    }
  }
  return t;
}

}  // namespace ineq::checks
