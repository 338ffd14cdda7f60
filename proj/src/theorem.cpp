#include "ineq/theorem.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "ineq/calculus.hpp"
#include "ineq/io.hpp"

namespace ineq {

const char* direction_name(Direction d) { return d == Direction::UpperBound ? "UpperBound" : "LowerBound"; }

namespace {

using Clock = std::chrono::steady_clock;

class Stopwatch {
 public:
  explicit Stopwatch(double seconds) : start_(Clock::now()), seconds_(seconds) {}
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }
  bool expired() const { return elapsed() > seconds_; }

 private:
  Clock::time_point start_;
  double seconds_;
};

Direction flip(Direction d) { return d == Direction::UpperBound ? Direction::LowerBound : Direction::UpperBound; }

// Direction for the root given the direction for the site and its label.
Direction root_direction(Direction site_dir, Mono label) { return label == Mono::Inc ? site_dir : flip(site_dir); }

bool known_nonneg(const Expr& e, const AssumptionSet& asm_) {
  Sign s = syntactic_sign(e, asm_);
  if (is_nonneg(s)) return true;
  if (s != Sign::Unknown) return false;
  return is_nonneg(infer_sign(e, asm_));
}

bool known_positive(const Expr& e, const AssumptionSet& asm_) {
  Sign s = syntactic_sign(e, asm_);
  if (s == Sign::Positive) return true;
  if (s != Sign::Unknown && s != Sign::NonNegative) return false;
  return infer_sign(e, asm_) == Sign::Positive;
}

ExprList factors_of(const Expr& e) {
  if (e.is_mul()) return e.operands();
  return {e};
}

// Labeled sites of the requested kind, in path order.
std::vector<std::pair<Path, Mono>> labeled_sites(const Expr& e, const MonotoneLabeling& labels, Kind kind) {
  std::vector<std::pair<Path, Mono>> out;
  for (const auto& [path, label] : labels.labels) {
    if (label == Mono::None) continue;
    if (subexpr_at(e, path).kind() == kind) out.emplace_back(path, label);
  }
  return out;
}

// Restricted-growth enumeration of set partitions of {0..n-1} into at most
// max_blocks blocks; calls f(blocks) for partitions with >= 2 blocks.
void for_each_partition(std::size_t n, std::size_t max_blocks,
                        const std::function<bool(const std::vector<std::vector<std::size_t>>&)>& f) {
  std::vector<std::size_t> assign(n, 0);
  std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) -> bool {
    if (i == n) {
      if (used < 2) return true;
      std::vector<std::vector<std::size_t>> blocks(used);
      for (std::size_t j = 0; j < n; ++j) blocks[assign[j]].push_back(j);
      return f(blocks);
    }
    for (std::size_t b = 0; b <= used && b < max_blocks; ++b) {
      assign[i] = b;
      if (!rec(i + 1, std::max(used, b + 1))) return false;
    }
    return true;
  };
  rec(0, 0);
}

std::string stmt(const Expr& a, const char* rel, const Expr& b) { return render(a) + " " + rel + " " + render(b); }

struct Collector {
  const Expr& root;
  const MatchBudget& budget;
  Stopwatch watch;
  std::vector<MatchResult> out;
  std::set<std::pair<std::uint64_t, int>> seen;
  bool partial = false;

  Collector(const Expr& r, const MatchBudget& b) : root(r), budget(b), watch(b.seconds) {}

  bool full() {
    if (out.size() >= budget.max_results || watch.expired()) {
      partial = true;
      return true;
    }
    return false;
  }

  // Records a site replacement; `site_dir` says how the replacement bounds
  // the site itself.
  void add(const std::string& theorem, const Path& site, Mono label, Direction site_dir, const Expr& replacement,
           std::vector<std::pair<Expr, Expr>> eq, std::string statement) {
    const Expr& original = subexpr_at(root, site);
    if (replacement == original) return;
    MatchResult r;
    r.theorem = theorem;
    r.site = site;
    r.direction = root_direction(site_dir, label);
    r.replacement = replacement;
    try {
      r.produced = replace_at(root, site, replacement);
    } catch (const DomainError&) {
      return;
    }
    if (r.produced == root) return;
    auto key = std::make_pair(r.produced.hash(), static_cast<int>(r.direction));
    if (!seen.insert(key).second) return;
    r.equality_condition = std::move(eq);
    r.statement = std::move(statement);
    r.budget_used = watch.elapsed();
    out.push_back(std::move(r));
  }

  std::vector<MatchResult> finish() {
    for (auto& r : out) r.partial = partial;
    return std::move(out);
  }
};

}  // namespace

std::string fresh_symbol(const Expr& e, const std::string& hint) {
  auto used = free_symbols(e);
  if (!used.count(hint)) return hint;
  for (int i = 1;; ++i) {
    std::string name = hint + std::to_string(i);
    if (!used.count(name)) return name;
  }
}

Expr distribute_once(const Expr& term) {
  auto [c, rest] = split_coefficient(term);
  if (rest.is_add()) return distribute(c, rest);
  if (!rest.is_mul()) return term;
  const auto& fs = rest.operands();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (!fs[i].is_add()) continue;
    ExprList others{constant(c)};
    for (std::size_t j = 0; j < fs.size(); ++j) {
      if (j != i) others.push_back(fs[j]);
    }
    Expr k = mul(others);
    ExprList out;
    for (const auto& s : fs[i].operands()) out.push_back(k * s);
    return add(out);
  }
  return term;
}

// ---------------------------------------------------------------- AM-GM

std::vector<MatchResult> match_amgm(const Expr& e, const AssumptionSet& asm_, const MonotoneLabeling& labels,
                                    const MatchBudget& budget) {
  Collector col(e, budget);
  for (const auto& [path, label] : labeled_sites(e, labels, Kind::Add)) {
    if (col.full()) break;
    const ExprList& terms = subexpr_at(e, path).operands();
    std::vector<std::size_t> nonneg;
    std::vector<std::size_t> nonpos;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (known_nonneg(terms[i], asm_)) {
        nonneg.push_back(i);
      } else if (known_nonneg(neg(terms[i]), asm_)) {
        nonpos.push_back(i);
      }
    }
    for (bool negative : {false, true}) {
      const auto& set = negative ? nonpos : nonneg;
      std::size_t n = set.size();
      if (n < 2) continue;
      std::vector<std::vector<std::size_t>> subsets;
      if (n <= budget.max_subset_set) {
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
          if (__builtin_popcount(mask) < 2) continue;
          std::vector<std::size_t> s;
          for (std::size_t j = 0; j < n; ++j) {
            if (mask & (1u << j)) s.push_back(set[j]);
          }
          subsets.push_back(std::move(s));
        }
        // Larger subsets first: the full set is the most common use.
        std::stable_sort(subsets.begin(), subsets.end(),
                         [](const auto& a, const auto& b) { return a.size() > b.size(); });
      } else {
        subsets.push_back(set);
      }
      for (const auto& subset : subsets) {
        if (col.full()) break;
        auto emit = [&](const std::vector<std::vector<std::size_t>>& blocks) {
          ExprList vals;
          for (const auto& b : blocks) {
            ExprList parts;
            for (std::size_t j : b) parts.push_back(negative ? neg(terms[subset[j]]) : terms[subset[j]]);
            vals.push_back(add(parts));
          }
          long k = static_cast<long>(vals.size());
          Expr mean;
          try {
            mean = integer(k) * pow(mul(vals), Rational(1, k));
          } catch (const DomainError&) {
            return !col.full();
          }
          std::vector<bool> used(terms.size(), false);
          for (std::size_t j : subset) used[j] = true;
          ExprList rest;
          for (std::size_t j = 0; j < terms.size(); ++j) {
            if (!used[j]) rest.push_back(terms[j]);
          }
          rest.push_back(negative ? neg(mean) : mean);
          std::vector<std::pair<Expr, Expr>> eq;
          for (std::size_t j = 1; j < vals.size(); ++j) eq.emplace_back(vals[0], vals[j]);
          Expr sum = add(vals);
          col.add("AM-GM", path, label, negative ? Direction::UpperBound : Direction::LowerBound, add(rest),
                  std::move(eq), stmt(sum, ">=", mean));
          return !col.full();
        };
        if (subset.size() > budget.max_partition_set) {
          std::vector<std::vector<std::size_t>> singletons;
          for (std::size_t j = 0; j < subset.size(); ++j) singletons.push_back({j});
          emit(singletons);
        } else {
          for_each_partition(subset.size(), budget.max_blocks, emit);
        }
      }
    }
  }
  return col.finish();
}

// ------------------------------------------------------- weighted AM-GM

std::vector<MatchResult> match_weighted_amgm(const Expr& e, const AssumptionSet& asm_,
                                             const MonotoneLabeling& labels, const MatchBudget& budget) {
  Collector col(e, budget);
  for (const auto& [path, label] : labeled_sites(e, labels, Kind::Add)) {
    if (col.full()) break;
    const ExprList& terms = subexpr_at(e, path).operands();
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      auto [w, x] = split_coefficient(terms[i]);
      if (w > 0 && !x.is_const() && known_nonneg(x, asm_)) idx.push_back(i);
    }
    if (idx.size() < 2) continue;
    std::vector<std::vector<std::size_t>> subsets{idx};
    if (idx.size() <= budget.max_subset_set) {
      subsets.clear();
      std::size_t n = idx.size();
      for (unsigned mask = (1u << n) - 1; mask >= 1; --mask) {
        if (__builtin_popcount(mask) < 2) continue;
        std::vector<std::size_t> s;
        for (std::size_t j = 0; j < n; ++j) {
          if (mask & (1u << j)) s.push_back(idx[j]);
        }
        subsets.push_back(std::move(s));
      }
    }
    for (const auto& s : subsets) {
      if (col.full()) break;
      std::vector<Rational> w;
      ExprList xs;
      Rational total = 0;
      for (std::size_t i : s) {
        auto [wi, xi] = split_coefficient(terms[i]);
        w.push_back(wi);
        xs.push_back(xi);
        total += wi;
      }
      if (std::all_of(w.begin(), w.end(), [&](const Rational& v) { return v == w[0]; })) continue;
      ExprList prod;
      for (std::size_t j = 0; j < xs.size(); ++j) prod.push_back(pow(xs[j], Rational(w[j] / total)));
      Expr bound = constant(total) * mul(prod);
      std::vector<bool> used(terms.size(), false);
      for (std::size_t i : s) used[i] = true;
      ExprList rest;
      for (std::size_t j = 0; j < terms.size(); ++j) {
        if (!used[j]) rest.push_back(terms[j]);
      }
      rest.push_back(bound);
      std::vector<std::pair<Expr, Expr>> eq;
      for (std::size_t j = 1; j < xs.size(); ++j) eq.emplace_back(xs[0], xs[j]);
      ExprList picked;
      for (std::size_t i : s) picked.push_back(terms[i]);
      col.add("weighted AM-GM", path, label, Direction::LowerBound, add(rest), std::move(eq),
              stmt(add(picked), ">=", bound));
    }
  }
  for (const auto& [path, label] : labeled_sites(e, labels, Kind::Mul)) {
    if (col.full()) break;
    auto [c, rest] = split_coefficient(subexpr_at(e, path));
    if (c == 0) continue;
    std::vector<std::pair<Expr, Rational>> parts;
    bool ok = true;
    bool radical = false;
    for (const auto& f : factors_of(rest)) {
      auto [b, x] = as_base_exp(f);
      if (!x.is_const() || x.value() <= 0 || !known_nonneg(b, asm_)) {
        ok = false;
        break;
      }
      if (x.value().get_den() != 1) radical = true;
      parts.emplace_back(b, x.value());
    }
    if (!ok || !radical || parts.size() < 2) continue;
    Rational s = 0;
    for (const auto& p : parts) s += p.second;
    ExprList avg;
    for (const auto& [b, w] : parts) avg.push_back(constant(w / s) * b);
    Expr bound = pow(add(avg), s);
    std::vector<std::pair<Expr, Expr>> eq;
    for (std::size_t j = 1; j < parts.size(); ++j) eq.emplace_back(parts[0].first, parts[j].first);
    col.add("weighted AM-GM", path, label, c > 0 ? Direction::UpperBound : Direction::LowerBound,
            constant(c) * bound, std::move(eq), stmt(rest, "<=", bound));
  }
  return col.finish();
}

// --------------------------------------------------------------- Hölder

namespace {

struct TermParts {
  Rational coef;
  std::vector<std::pair<Expr, Rational>> num;  // positive exponents
  std::vector<std::pair<Expr, Rational>> den;  // exponents negated (> 0)
};

std::optional<TermParts> term_parts(const Expr& term) {
  TermParts p;
  auto [c, rest] = split_coefficient(term);
  p.coef = c;
  if (rest.is_one()) return p;
  for (const auto& f : factors_of(rest)) {
    auto [b, x] = as_base_exp(f);
    if (!x.is_const()) return std::nullopt;
    if (x.value() > 0) {
      p.num.emplace_back(b, x.value());
    } else {
      p.den.emplace_back(b, -x.value());
    }
  }
  return p;
}

Expr product(const std::vector<std::pair<Expr, Rational>>& fs, const Rational& scale = 1) {
  ExprList out;
  for (const auto& [b, x] : fs) out.push_back(pow(b, Rational(x * scale)));
  return mul(out);
}

// Sum of y_i in three shapes: as is, distributed one level, and (when the
// distributed sum is k times `ref`) the constant k.
struct SumVariants {
  Expr raw;
  Expr distributed;
  std::optional<Rational> ratio;
};

SumVariants sum_variants(const ExprList& ys, const Expr& ref) {
  SumVariants v;
  v.raw = add(ys);
  ExprList d;
  for (const auto& y : ys) d.push_back(distribute_once(y));
  v.distributed = add(d);
  try {
    Poly py = to_poly(v.distributed, 2000);
    Poly pr = to_poly(ref, 2000);
    if (!py.empty() && py.size() == pr.size()) {
      std::optional<Rational> k;
      bool ok = true;
      for (const auto& [m, c] : py) {
        auto it = pr.find(m);
        if (it == pr.end()) {
          ok = false;
          break;
        }
        Rational r = c / it->second;
        if (k && *k != r) {
          ok = false;
          break;
        }
        k = r;
      }
      if (ok && k && *k > 0) v.ratio = k;
    }
  } catch (const std::exception&) {
  }
  return v;
}

long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

}  // namespace

std::vector<MatchResult> match_holder(const Expr& e, const AssumptionSet& asm_, const MonotoneLabeling& labels,
                                      const MatchBudget& budget, std::optional<int> m_only) {
  Collector col(e, budget);
  for (const auto& [path, label] : labeled_sites(e, labels, Kind::Add)) {
    if (col.full()) break;
    const ExprList& terms = subexpr_at(e, path).operands();
    std::vector<TermParts> parts;
    bool ok = true;
    for (const auto& t : terms) {
      auto p = term_parts(t);
      if (!p || p->coef <= 0 || !known_nonneg(t, asm_)) {
        ok = false;
        break;
      }
      for (const auto& [b, x] : p->den) {
        if (!known_positive(b, asm_)) ok = false;
      }
      for (const auto& [b, x] : p->num) {
        if (!known_nonneg(b, asm_)) ok = false;
      }
      parts.push_back(std::move(*p));
    }
    if (!ok || parts.size() < 2) continue;
    if (std::none_of(parts.begin(), parts.end(), [](const TermParts& p) { return !p.den.empty(); })) continue;

    // Pull out numerator factors shared by every term.
    std::vector<std::pair<Expr, Rational>> common;
    for (const auto& f : parts[0].num) {
      bool everywhere = std::all_of(parts.begin() + 1, parts.end(), [&](const TermParts& p) {
        return std::find(p.num.begin(), p.num.end(), f) != p.num.end();
      });
      if (everywhere) common.push_back(f);
    }
    for (auto& p : parts) {
      for (const auto& f : common) p.num.erase(std::find(p.num.begin(), p.num.end(), f));
    }
    Expr g = product(common);
    Expr site = subexpr_at(e, path);

    auto emit = [&](const Expr& bound, std::vector<std::pair<Expr, Expr>> eq, const std::string& statement) {
      col.add("Holder", path, label, Direction::LowerBound, g * bound, std::move(eq), statement);
    };

    // Form A: c_i * d_i^(-1/m), m from the radical orders of the denominators.
    if (std::all_of(parts.begin(), parts.end(), [](const TermParts& p) { return !p.den.empty(); })) {
      long m = 1;
      for (const auto& p : parts) {
        for (const auto& [b, x] : p.den) m = lcm_long(m, x.get_den().get_si());
      }
      if (m <= 3 && (!m_only || *m_only == m)) {
        ExprList cs;
        ExprList cds;
        ExprList ds;
        for (const auto& p : parts) {
          Expr c = constant(p.coef) * product(p.num);
          Expr d = product(p.den, Rational(m));
          cs.push_back(c);
          ds.push_back(d);
          cds.push_back(c * d);
        }
        Expr sc = add(cs);
        std::vector<std::pair<Expr, Expr>> eq;
        for (std::size_t j = 1; j < ds.size(); ++j) eq.emplace_back(ds[0], ds[j]);
        auto v = sum_variants(cds, sc);
        std::string statement = stmt(pow(sc, m + 1), "<=", pow(site, m) * v.raw);
        Rational up(m + 1, m);
        Rational down(-1, m);
        emit(pow(sc, up) * pow(v.raw, down), eq, statement);
        emit(pow(sc, up) * pow(v.distributed, down), eq, statement);
        if (v.ratio) emit(pow(constant(*v.ratio), down) * sc, eq, statement);
      }
    }

    // Form B: x_i^(m+1) / y_i^m with the numerator completed to a power.
    bool integral_den = std::all_of(parts.begin(), parts.end(), [](const TermParts& p) {
      return std::all_of(p.den.begin(), p.den.end(), [](const auto& f) { return f.second.get_den() == 1; });
    });
    if (!integral_den) continue;
    for (int m = 1; m <= 3; ++m) {
      if (m_only && *m_only != m) continue;
      if (col.full()) break;
      ExprList xs;
      ExprList ys;
      for (const auto& p : parts) {
        std::vector<std::pair<Expr, Rational>> w;
        std::vector<std::pair<Expr, Rational>> xf;
        for (const auto& [b, x] : p.num) {
          Rational total = x;
          if (x.get_den() == 1) {
            Integer r = x.get_num() % (m + 1);
            if (r != 0) {
              Rational pad = Rational(Integer(m + 1) - r);
              w.emplace_back(b, pad);
              total += pad;
            }
          }
          xf.emplace_back(b, total / (m + 1));
        }
        if (p.num.empty()) {
          xs.push_back(integer(1));
        } else {
          xs.push_back(product(xf));
        }
        Expr yy = product(p.den) * product(w) * constant(Rational(1) / p.coef);
        ys.push_back(pow(yy, Rational(1, m)));
      }
      Expr sx = add(xs);
      std::vector<std::pair<Expr, Expr>> eq;
      for (std::size_t j = 1; j < xs.size(); ++j) eq.emplace_back(xs[0] / ys[0], xs[j] / ys[j]);
      auto v = sum_variants(ys, sx);
      std::string statement = stmt(pow(sx, m + 1), "<=", pow(v.raw, m) * site);
      emit(pow(sx, m + 1) * pow(v.raw, -m), eq, statement);
      emit(pow(sx, m + 1) * pow(v.distributed, -m), eq, statement);
      if (v.ratio) {
        Rational k = 1;
        for (int i = 0; i < m; ++i) k *= *v.ratio;
        emit(distribute(Rational(1) / k, sx), eq, statement);
      }
    }
  }
  return col.finish();
}

// ------------------------------------------------------- Muirhead rewrite

namespace {

using Exponents = std::vector<long>;

// Coefficient and exponent vector of a monomial term in `vars`.
std::optional<std::pair<Rational, Exponents>> monomial_of(const Expr& term, const std::vector<std::string>& vars) {
  auto [c, rest] = split_coefficient(term);
  Exponents ex(vars.size(), 0);
  if (rest.is_one()) return std::make_pair(c, ex);
  for (const auto& f : factors_of(rest)) {
    auto [b, x] = as_base_exp(f);
    if (!b.is_symbol() || !x.is_const() || x.value().get_den() != 1 || x.value() < 0) return std::nullopt;
    auto it = std::find(vars.begin(), vars.end(), b.name());
    if (it == vars.end()) return std::nullopt;
    ex[it - vars.begin()] = x.value().get_num().get_si();
  }
  return std::make_pair(c, ex);
}

Expr monomial_term(const Rational& c, const Exponents& ex, const std::vector<std::string>& vars) {
  ExprList fs{constant(c)};
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (ex[i] != 0) fs.push_back(pow(symbol(vars[i]), ex[i]));
  }
  return mul(fs);
}

// All distinct images of ex under permutations of the positions in `sub`.
std::set<Exponents> orbit(const Exponents& ex, const std::vector<std::size_t>& sub) {
  std::vector<long> vals;
  for (std::size_t i : sub) vals.push_back(ex[i]);
  std::sort(vals.begin(), vals.end());
  std::set<Exponents> out;
  do {
    Exponents img = ex;
    for (std::size_t j = 0; j < sub.size(); ++j) img[sub[j]] = vals[j];
    out.insert(img);
  } while (std::next_permutation(vals.begin(), vals.end()));
  return out;
}

void collect_paths(const Expr& root, const Expr& target, Path& path, std::vector<Path>& out) {
  if (root == target) {
    out.push_back(path);
    return;
  }
  if (root.size() < target.size()) return;
  for (std::size_t i = 0; i < root.operands().size(); ++i) {
    path.push_back(i);
    collect_paths(root.operands()[i], target, path, out);
    path.pop_back();
  }
}

Expr replace_all(const Expr& root, const Expr& target, const Expr& repl) {
  if (root == target) return repl;
  if (root.operands().empty() || root.size() < target.size()) return root;
  ExprList ops;
  bool changed = false;
  for (const auto& o : root.operands()) {
    ops.push_back(replace_all(o, target, repl));
    changed = changed || ops.back() != o;
  }
  return changed ? rebuild(root, std::move(ops)) : root;
}

}  // namespace

std::vector<MatchResult> match_simp_muirhead(const Expr& e, const AssumptionSet& asm_,
                                             const MonotoneLabeling& labels, const MatchBudget& budget) {
  Collector col(e, budget);
  std::vector<std::string> vars = asm_.variables();
  for (const auto& v : vars) {
    if (asm_.domain_of(v) == Domain::Real) return {};
  }
  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    for (std::size_t j = i + 1; j < vars.size(); ++j) subsets.push_back({i, j});
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    for (std::size_t j = i + 1; j < vars.size(); ++j) {
      for (std::size_t k = j + 1; k < vars.size(); ++k) subsets.push_back({i, j, k});
    }
  }
  for (const auto& [path, label] : labeled_sites(e, labels, Kind::Add)) {
    if (col.full()) break;
    const Expr& site = subexpr_at(e, path);
    std::map<Exponents, Rational> mono;
    ExprList other;
    for (const auto& t : site.operands()) {
      auto m = monomial_of(t, vars);
      if (m && m->first > 0) {
        mono[m->second] += m->first;
      } else {
        other.push_back(t);
      }
    }
    if (mono.size() < 2) continue;
    for (const auto& sub : subsets) {
      std::set<Exponents> done;
      for (const auto& [ex, c] : mono) {
        if (done.count(ex)) continue;
        auto orb = orbit(ex, sub);
        for (const auto& o : orb) done.insert(o);
        if (orb.size() < 2) continue;
        bool complete = std::all_of(orb.begin(), orb.end(), [&, c = c](const Exponents& o) {
          auto it = mono.find(o);
          return it != mono.end() && it->second == c;
        });
        if (!complete) continue;
        // One Robin-Hood transfer between the extreme positions.
        std::vector<std::size_t> order = sub;
        std::sort(order.begin(), order.end(), [&, &ex = ex](std::size_t a, std::size_t b) { return ex[a] > ex[b]; });
        if (ex[order.front()] - ex[order.back()] < 2) continue;
        Exponents moved = ex;
        --moved[order.front()];
        ++moved[order.back()];
        auto norb = orbit(moved, sub);
        Rational nc = c * Rational(static_cast<long>(orb.size()), static_cast<long>(norb.size()));
        ExprList terms = other;
        ExprList old_terms;
        ExprList new_terms;
        for (const auto& [ex2, c2] : mono) {
          if (orb.count(ex2)) {
            old_terms.push_back(monomial_term(c2, ex2, vars));
          } else {
            terms.push_back(monomial_term(c2, ex2, vars));
          }
        }
        for (const auto& o : norb) new_terms.push_back(monomial_term(nc, o, vars));
        for (const auto& t : new_terms) terms.push_back(t);
        Expr replacement = add(terms);

        // Apply at the site and its cyclic images when their labels agree.
        Expr produced = e;
        bool sound = true;
        std::set<std::uint64_t> applied;
        for (std::size_t shift = 0; shift < vars.size() && sound; ++shift) {
          Expr rs = shift == 0 ? site : rotate(site, vars, shift);
          Expr rr = shift == 0 ? replacement : rotate(replacement, vars, shift);
          if (!applied.insert(rs.hash()).second) continue;
          std::vector<Path> where;
          Path p;
          collect_paths(e, rs, p, where);
          if (where.empty()) continue;
          for (const auto& w : where) {
            if (labels.at(w) != label) sound = false;
          }
          if (sound) produced = replace_all(produced, rs, rr);
        }
        if (!sound || produced == e) continue;
        if (col.full()) break;
        MatchResult r;
        r.theorem = "Muirhead";
        r.site = path;
        r.direction = root_direction(Direction::LowerBound, label);
        r.replacement = replacement;
        r.produced = produced;
        r.equality_condition.emplace_back(symbol(vars[sub[0]]), symbol(vars[sub[1]]));
        if (sub.size() == 3) r.equality_condition.emplace_back(symbol(vars[sub[0]]), symbol(vars[sub[2]]));
        r.statement = stmt(add(new_terms), "<=", add(old_terms));
        r.budget_used = col.watch.elapsed();
        if (col.seen.insert({r.produced.hash(), static_cast<int>(r.direction)}).second) col.out.push_back(std::move(r));
      }
    }
  }
  return col.finish();
}

// ------------------------------------------------------------- closures

bool majorizes(std::vector<Rational> a, std::vector<Rational> b) {
  if (a.size() != b.size()) return false;
  std::sort(a.rbegin(), a.rend());
  std::sort(b.rbegin(), b.rend());
  Rational sa = 0;
  Rational sb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
    if (sa < sb) return false;
  }
  return sa == sb;
}

namespace {

bool vars_nonneg(const std::vector<std::string>& vars, const AssumptionSet& asm_) {
  return std::all_of(vars.begin(), vars.end(),
                     [&](const std::string& v) { return asm_.domain_of(v) != Domain::Real; });
}

// Plain polynomial in `vars` as exponent vectors.
std::optional<std::map<Exponents, Rational>> exponent_form(const Poly& p, const std::vector<std::string>& vars) {
  std::map<Exponents, Rational> out;
  for (const auto& [m, c] : p) {
    Exponents ex(vars.size(), 0);
    for (const auto& [atom, x] : m) {
      if (!atom.is_symbol() || x.get_den() != 1 || x < 0) return std::nullopt;
      auto it = std::find(vars.begin(), vars.end(), atom.name());
      if (it == vars.end()) return std::nullopt;
      ex[it - vars.begin()] = x.get_num().get_si();
    }
    out[ex] = c;
  }
  return out;
}

Poly from_exponent_form(const std::map<Exponents, Rational>& f, const std::vector<std::string>& vars) {
  Poly p;
  for (const auto& [ex, c] : f) {
    if (c == 0) continue;
    Monomial m;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (ex[i] != 0) m.emplace_back(symbol(vars[i]), Rational(ex[i]));
    }
    std::sort(m.begin(), m.end(), [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
    p[m] += c;
  }
  return p;
}

std::vector<std::string> poly_symbols(const Poly& p) {
  std::set<std::string> s;
  for (const auto& [m, c] : p) {
    for (const auto& [atom, x] : m) {
      if (atom.is_symbol()) s.insert(atom.name());
    }
  }
  return {s.begin(), s.end()};
}

bool all_nonneg(const std::map<Exponents, Rational>& f) {
  return std::all_of(f.begin(), f.end(), [](const auto& kv) { return kv.second >= 0; });
}

std::optional<std::vector<Poly>> cover_once(std::map<Exponents, Rational> f, const std::vector<std::string>& vars,
                                            bool reverse_targets, bool reverse_sources) {
  std::vector<Poly> steps;
  std::vector<Exponents> targets;
  for (const auto& [ex, c] : f) {
    if (c < 0) targets.push_back(ex);
  }
  if (reverse_targets) std::reverse(targets.begin(), targets.end());
  std::size_t n = vars.size();
  auto add_ex = [&](const Exponents& a, const Exponents& b, long sa) {
    Exponents r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = a[i] - sa * b[i];
    return r;
  };
  for (const auto& target : targets) {
    int guard = 0;
    while (f[target] < 0) {
      if (++guard > 64) return std::nullopt;
      std::vector<Exponents> pos;
      for (const auto& [ex, c] : f) {
        if (c > 0) pos.push_back(ex);
      }
      if (reverse_sources) std::reverse(pos.begin(), pos.end());
      auto available = [&](const Exponents& ex) {
        auto it = f.find(ex);
        return it != f.end() && it->second > 0;
      };
      auto valid = [](const Exponents& ex) { return std::all_of(ex.begin(), ex.end(), [](long v) { return v >= 0; }); };
      std::vector<Exponents> group;
      // Sizes 2..4, looking the last member up by exponent arithmetic.
      for (std::size_t k = 2; k <= 4 && group.empty(); ++k) {
        Exponents goal(n);
        for (std::size_t i = 0; i < n; ++i) goal[i] = target[i] * static_cast<long>(k);
        std::function<bool(std::size_t, std::size_t, Exponents, std::vector<Exponents>&)> rec =
            [&](std::size_t depth, std::size_t from, Exponents remaining, std::vector<Exponents>& chosen) -> bool {
          if (depth + 1 == k) {
            if (!valid(remaining) || !available(remaining)) return false;
            // Avoid degenerate groups made of the target itself.
            if (remaining == target) return false;
            auto it = std::find(pos.begin(), pos.end(), remaining);
            if (static_cast<std::size_t>(it - pos.begin()) < from) return false;
            chosen.push_back(remaining);
            return true;
          }
          for (std::size_t i = from; i < pos.size(); ++i) {
            if (pos[i] == target) continue;
            Exponents rem = add_ex(remaining, pos[i], 1);
            if (!valid(rem)) continue;
            chosen.push_back(pos[i]);
            if (rec(depth + 1, i, rem, chosen)) return true;
            chosen.pop_back();
          }
          return false;
        };
        std::vector<Exponents> chosen;
        if (rec(0, 0, goal, chosen)) group = chosen;
      }
      if (group.empty()) return std::nullopt;
      std::map<Exponents, long> mult;
      for (const auto& g : group) ++mult[g];
      Rational k(static_cast<long>(group.size()));
      Rational t = -f[target] / k;
      for (const auto& [g, mcount] : mult) t = std::min(t, Rational(f[g] / Rational(mcount)));
      for (const auto& [g, mcount] : mult) f[g] -= t * Rational(mcount);
      f[target] += t * k;
      for (auto it = f.begin(); it != f.end();) {
        it = it->second == 0 ? f.erase(it) : std::next(it);
      }
      steps.push_back(from_exponent_form(f, vars));
    }
  }
  if (!all_nonneg(f)) return std::nullopt;
  return steps;
}

}  // namespace

std::optional<std::vector<Poly>> amgm_cover(const Poly& p, const AssumptionSet& asm_) {
  auto vars = poly_symbols(p);
  if (!vars_nonneg(vars, asm_)) return std::nullopt;
  auto f = exponent_form(p, vars);
  if (!f) return std::nullopt;
  if (all_nonneg(*f)) return std::vector<Poly>{};
  for (int variant = 0; variant < 4; ++variant) {
    auto r = cover_once(*f, vars, variant & 1, variant & 2);
    if (r) return r;
  }
  return std::nullopt;
}

Poly schur_poly(int t, const std::vector<std::string>& vars) {
  Expr a = symbol(vars[0]);
  Expr b = symbol(vars[1]);
  Expr c = symbol(vars[2]);
  Expr s = pow(a, t) * (a - b) * (a - c) + pow(b, t) * (b - a) * (b - c) + pow(c, t) * (c - a) * (c - b);
  return to_poly(s);
}

std::optional<MatchResult> match_schur(const Expr& pe, const AssumptionSet& asm_) {
  Poly p;
  try {
    p = to_poly(pe, 2000);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  auto vars = poly_symbols(p);
  if (vars.size() != 3 || !vars_nonneg(vars, asm_) || !is_plain_polynomial(p)) return std::nullopt;
  for (int t : {1, 2}) {
    Poly s = schur_poly(t, vars);
    Monomial lead{{symbol(vars[0]), Rational(t + 2)}};
    auto it = p.find(lead);
    if (it == p.end() || it->second <= 0) continue;
    for (const Rational& f : {Rational(1), Rational(1, 2), Rational(1, 3), Rational(2), Rational(3)}) {
      Rational lambda = it->second * f;
      Poly r = poly_add(p, s, -lambda);
      bool ok = std::all_of(r.begin(), r.end(), [](const auto& kv) { return kv.second >= 0; });
      if (!ok) ok = amgm_cover(r, asm_).has_value();
      if (!ok) continue;
      MatchResult m;
      m.theorem = "Schur";
      m.direction = Direction::LowerBound;
      m.replacement = integer(0);
      m.produced = integer(0);
      for (std::size_t i = 1; i < 3; ++i) m.equality_condition.emplace_back(symbol(vars[0]), symbol(vars[i]));
      m.statement = "0 <= " + render(constant(lambda) * from_poly(s)) + " (t = " + std::to_string(t) + ")";
      return m;
    }
  }
  return std::nullopt;
}

std::optional<MatchResult> match_muirhead(const Expr& lhs, const Expr& rhs, const AssumptionSet& asm_) {
  Poly d;
  try {
    d = to_poly(rhs - lhs, 2000);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  auto vars = poly_symbols(d);
  if (vars.size() < 2 || vars.size() > 3 || !vars_nonneg(vars, asm_)) return std::nullopt;
  auto f = exponent_form(d, vars);
  if (!f) return std::nullopt;
  std::map<Exponents, Rational> pos;
  std::map<Exponents, Rational> negs;
  for (const auto& [ex, c] : *f) (c > 0 ? pos : negs)[ex] = c > 0 ? c : -c;
  std::vector<std::size_t> all(vars.size());
  std::iota(all.begin(), all.end(), 0);
  auto single_orbit = [&](const std::map<Exponents, Rational>& part) -> std::optional<Exponents> {
    if (part.empty()) return std::nullopt;
    const auto& [ex, c] = *part.begin();
    auto orb = orbit(ex, all);
    if (orb.size() != part.size()) return std::nullopt;
    for (const auto& o : orb) {
      auto it = part.find(o);
      if (it == part.end() || it->second != c) return std::nullopt;
    }
    return ex;
  };
  auto p = single_orbit(pos);
  auto q = single_orbit(negs);
  if (!p || !q) return std::nullopt;
  Rational tp = 0;
  Rational tq = 0;
  for (const auto& kv : pos) tp += kv.second;
  for (const auto& kv : negs) tq += kv.second;
  if (tp != tq) return std::nullopt;
  std::vector<Rational> a(p->begin(), p->end());
  std::vector<Rational> b(q->begin(), q->end());
  if (!majorizes(a, b)) return std::nullopt;
  MatchResult m;
  m.theorem = "Muirhead";
  m.direction = Direction::UpperBound;
  m.replacement = rhs;
  m.produced = rhs;
  for (std::size_t i = 1; i < vars.size(); ++i) m.equality_condition.emplace_back(symbol(vars[0]), symbol(vars[i]));
  m.statement = stmt(lhs, "<=", rhs);
  return m;
}

// -------------------------------------------------------------- dispatch

std::vector<MatchResult> match_all(const Expr& e, const AssumptionSet& asm_, const MatchBudget& budget) {
  auto labels = label_monotonicity(e, asm_);
  std::vector<MatchResult> all;
  auto take = [&](std::vector<MatchResult> rs) {
    for (auto& r : rs) all.push_back(std::move(r));
  };
  take(match_amgm(e, asm_, labels, budget));
  take(match_weighted_amgm(e, asm_, labels, budget));
  take(match_holder(e, asm_, labels, budget));
  take(match_jensen(e, asm_, budget));
  take(match_simp_muirhead(e, asm_, labels, budget));
  take(match_tangent_line(e, asm_, budget));
  std::stable_sort(all.begin(), all.end(), [](const MatchResult& a, const MatchResult& b) {
    if (a.theorem != b.theorem) return a.theorem < b.theorem;
    if (a.site != b.site) return a.site < b.site;
    return a.produced.hash() < b.produced.hash();
  });
  std::set<std::pair<std::uint64_t, int>> seen;
  std::vector<MatchResult> out;
  for (auto& r : all) {
    if (seen.insert({r.produced.hash(), static_cast<int>(r.direction)}).second) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace ineq
