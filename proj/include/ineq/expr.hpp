#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ineq {

using Integer = mpz_class;
using Rational = mpq_class;

// Node kinds, listed in canonical rank order.
enum class Kind : std::uint8_t { Const = 0, Symbol = 1, Pow = 2, Mul = 3, Add = 4 };

// Raised when a construction or evaluation leaves the real domain
// (zero denominator, even root of a negative number).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Expr;
using ExprList = std::vector<Expr>;

namespace detail {
struct Node {
  Kind kind;
  Rational value;        // Const
  std::string name;      // Symbol
  ExprList ops;          // Add/Mul operands, Pow {base, exponent}
  std::uint64_t hash = 0;
  int depth = 1;
  std::size_t size = 1;
};
}  // namespace detail

/// Immutable, canonical algebraic expression. All factories below return
/// canonical forms, so structural equality is semantic identity for the
/// rewriting engine.
class Expr {
 public:
  Expr();  // the constant 0

  Kind kind() const noexcept { return node_->kind; }
  bool is_const() const noexcept { return kind() == Kind::Const; }
  bool is_symbol() const noexcept { return kind() == Kind::Symbol; }
  bool is_add() const noexcept { return kind() == Kind::Add; }
  bool is_mul() const noexcept { return kind() == Kind::Mul; }
  bool is_pow() const noexcept { return kind() == Kind::Pow; }
  bool is_integer() const;
  bool is_zero() const;
  bool is_one() const;

  const Rational& value() const;
  const std::string& name() const;
  const ExprList& operands() const noexcept { return node_->ops; }
  const Expr& base() const;
  const Expr& exponent() const;

  std::uint64_t hash() const noexcept { return node_->hash; }
  int depth() const noexcept { return node_->depth; }
  std::size_t size() const noexcept { return node_->size; }
  const detail::Node* get() const noexcept { return node_.get(); }

  static Expr from_node(std::shared_ptr<const detail::Node> n) { return Expr(std::move(n)); }

 private:
  explicit Expr(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::Node> node_;
};

// Canonical total order: kind rank, then operands, then constant value.
int compare(const Expr& a, const Expr& b);
bool operator==(const Expr& a, const Expr& b);
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};
struct ExprHash {
  std::size_t operator()(const Expr& e) const noexcept { return static_cast<std::size_t>(e.hash()); }
};

// Factories.
Expr integer(long v);
Expr rational(long num, long den);
Expr constant(const Rational& v);
Expr symbol(const std::string& name);
Expr add(ExprList terms);
Expr mul(ExprList factors);
Expr pow(const Expr& base, const Expr& exponent);
Expr pow(const Expr& base, const Rational& exponent);
Expr pow(const Expr& base, long exponent);
Expr sqrt(const Expr& e);
Expr neg(const Expr& e);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);

/// Rebuilds `e` bottom-up through the factories.
Expr canonicalize(const Expr& e);

/// Splits a term into its rational coefficient and the remaining factor
/// (`1` when the term is a constant).
std::pair<Rational, Expr> split_coefficient(const Expr& term);

/// Splits a factor into (base, exponent); non-powers have exponent 1.
std::pair<Expr, Expr> as_base_exp(const Expr& factor);

/// True when `e` is nonnegative under the engine-wide convention that
/// symbols range over nonnegative reals.
bool syntactically_nonneg(const Expr& e);

std::set<std::string> free_symbols(const Expr& e);
bool contains_symbol(const Expr& e, const std::string& name);

/// Maximum depth of the canonical tree; leaves have depth 1.
inline int tree_depth(const Expr& e) { return e.depth(); }

/// 64-bit structural digest; equal canonical forms hash equal.
inline std::uint64_t canonical_hash(const Expr& e) { return e.hash(); }

/// Replaces the subtree at `path` (child indices from the root).
Expr replace_at(const Expr& root, const std::vector<std::size_t>& path, const Expr& replacement);
const Expr& subexpr_at(const Expr& root, const std::vector<std::size_t>& path);

/// Rebuilds a node of the same kind from new operands.
Expr rebuild(const Expr& e, ExprList ops);

std::uint64_t hash_seed();
std::uint64_t hash_rational(const Rational& r);

}  // namespace ineq
