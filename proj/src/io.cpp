#include "ineq/io.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>

namespace ineq {

const char* relation_text(Relation r) {
  switch (r) {
    case Relation::Le:
      return "<=";
    case Relation::Lt:
      return "<";
    case Relation::Ge:
      return ">=";
    case Relation::Gt:
      return ">";
    case Relation::Eq:
      return "=";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_full() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

  ParsedRelation parse_relation_full() {
    Expr lhs = parse_sum();
    skip_ws();
    Relation rel;
    if (accept("<=")) {
      rel = Relation::Le;
    } else if (accept(">=")) {
      rel = Relation::Ge;
    } else if (accept("<")) {
      rel = Relation::Lt;
    } else if (accept(">")) {
      rel = Relation::Gt;
    } else if (accept("==") || accept("=")) {
      rel = Relation::Eq;
    } else {
      fail("expected a relation (<=, >=, <, >, =)");
    }
    Expr rhs = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return {lhs, rel, rhs};
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Expr parse_sum() {
    ExprList terms{parse_product()};
    for (;;) {
      if (peek('+')) {
        ++pos_;
        terms.push_back(parse_product());
      } else if (peek('-')) {
        ++pos_;
        terms.push_back(neg(parse_product()));
      } else {
        break;
      }
    }
    return terms.size() == 1 ? terms.front() : add(std::move(terms));
  }

  Expr parse_product() {
    Expr acc = parse_unary();
    for (;;) {
      if (peek('*')) {
        ++pos_;
        acc = acc * parse_unary();
      } else if (peek('/')) {
        ++pos_;
        std::size_t at = pos_;
        Expr d = parse_unary();
        if (d.is_zero()) throw ParseError("division by zero", at);
        acc = acc / d;
      } else {
        break;
      }
    }
    return acc;
  }

  Expr parse_unary() {
    if (peek('-')) {
      ++pos_;
      return neg(parse_unary());
    }
    if (peek('+')) {
      ++pos_;
      return parse_unary();
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (peek('^')) {
      ++pos_;
      std::size_t at = pos_;
      Expr exponent = parse_unary();  // right associative, unary allowed
      try {
        return pow(base, exponent);
      } catch (const DomainError& e) {
        throw ParseError(e.what(), at);
      }
    }
    return base;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return constant(Rational(Integer(std::string(text_.substr(start, pos_ - start)))));
    }
    if (c >= 'a' && c <= 'z') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::islower(static_cast<unsigned char>(text_[pos_])) ||
              std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string name(text_.substr(start, pos_ - start));
      if (peek('(')) {
        if (name != "sqrt") {
          pos_ = start;
          fail("unknown function '" + name + "'");
        }
        ++pos_;
        Expr arg = parse_sum();
        expect(')');
        return sqrt(arg);
      }
      return symbol(name);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_full(); }

ParsedRelation parse_relation(std::string_view text) { return Parser(text).parse_relation_full(); }

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string rational_text(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

// Exponents of the symbol-only part of a term, used for display ordering.
std::map<std::string, Rational> symbol_exponents(const Expr& rest, bool& pure_monomial) {
  std::map<std::string, Rational> out;
  pure_monomial = true;
  auto visit = [&](const Expr& f) {
    if (f.is_symbol()) {
      out[f.name()] += 1;
    } else if (f.is_pow() && f.base().is_symbol() && f.exponent().is_const()) {
      if (f.exponent().value() > 0) {
        out[f.base().name()] += f.exponent().value();
      } else {
        pure_monomial = false;
      }
    } else {
      pure_monomial = false;
    }
  };
  if (rest.is_mul()) {
    for (const auto& f : rest.operands()) visit(f);
  } else if (!rest.is_const()) {
    visit(rest);
  }
  return out;
}

// Lexicographic monomial order (larger first), alphabetical variable order.
int lex_compare(const std::map<std::string, Rational>& x, const std::map<std::string, Rational>& y) {
  auto ix = x.begin();
  auto iy = y.begin();
  while (ix != x.end() || iy != y.end()) {
    if (iy == y.end() || (ix != x.end() && ix->first < iy->first)) return 1;  // x has an earlier variable
    if (ix == x.end() || iy->first < ix->first) return -1;
    if (ix->second != iy->second) return ix->second > iy->second ? 1 : -1;
    ++ix;
    ++iy;
  }
  return 0;
}

ExprList display_order(const ExprList& terms) {
  struct Item {
    Expr term;
    bool is_const;
    bool pure;
    std::map<std::string, Rational> key;
  };
  std::vector<Item> items;
  items.reserve(terms.size());
  for (const auto& t : terms) {
    auto [c, rest] = split_coefficient(t);
    Item it{t, t.is_const(), true, {}};
    it.key = symbol_exponents(rest, it.pure);
    items.push_back(std::move(it));
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.is_const != b.is_const) return !a.is_const;
    int c = lex_compare(a.key, b.key);
    if (c != 0) return c > 0;
    if (a.pure != b.pure) return a.pure;
    return compare(a.term, b.term) < 0;
  });
  ExprList out;
  for (auto& it : items) out.push_back(std::move(it.term));
  return out;
}

struct Fraction {
  Rational coeff{1};
  ExprList num;
  ExprList den;  // factors with positive exponents
};

Fraction as_fraction(const Expr& e) {
  Fraction f;
  ExprList factors;
  if (e.is_mul()) {
    auto [c, rest] = split_coefficient(e);
    f.coeff = c;
    if (rest.is_mul()) {
      factors = rest.operands();
    } else if (!rest.is_one()) {
      factors.push_back(rest);
    }
  } else {
    factors.push_back(e);
  }
  for (const auto& x : factors) {
    if (x.is_pow() && x.exponent().is_const() && x.exponent().value() < 0) {
      f.den.push_back(pow(x.base(), constant(-x.exponent().value())));
    } else {
      f.num.push_back(x);
    }
  }
  return f;
}

std::string render_plain(const Expr& e);

std::string base_text(const Expr& b) {
  if (b.is_symbol()) return b.name();
  if (b.is_const() && b.value() > 0 && b.value().get_den() == 1) return rational_text(b.value());
  return "(" + render_plain(b) + ")";
}

std::string exponent_text(const Expr& x) {
  if (x.is_symbol()) return x.name();
  if (x.is_const() && x.value() > 0 && x.value().get_den() == 1) return rational_text(x.value());
  return "(" + render_plain(x) + ")";
}

std::string power_text(const std::string& base_inner, bool base_is_atom, const Expr& exponent) {
  if (exponent.is_const() && exponent.value() == Rational(1, 2)) return "sqrt(" + base_inner + ")";
  std::string b = base_is_atom ? base_inner : "(" + base_inner + ")";
  return b + "^" + exponent_text(exponent);
}

std::string factor_text(const Expr& f) {
  if (f.is_add()) return "(" + render_plain(f) + ")";
  if (f.is_pow()) {
    const Expr& b = f.base();
    if (f.exponent().is_const() && f.exponent().value() == Rational(1, 2)) return "sqrt(" + render_plain(b) + ")";
    return base_text(b) + "^" + exponent_text(f.exponent());
  }
  if (f.is_const()) {
    if (f.value() >= 0 && f.value().get_den() == 1) return rational_text(f.value());
    return "(" + rational_text(f.value()) + ")";
  }
  return render_plain(f);
}

// Orders factors for display: symbol powers alphabetically, then the rest.
ExprList display_factors(ExprList fs) {
  auto key = [](const Expr& f) -> std::optional<std::string> {
    if (f.is_symbol()) return f.name();
    if (f.is_pow() && f.base().is_symbol()) return f.base().name();
    return std::nullopt;
  };
  std::stable_sort(fs.begin(), fs.end(), [&](const Expr& a, const Expr& b) {
    auto ka = key(a);
    auto kb = key(b);
    if (ka && kb) return *ka < *kb;
    if (ka || kb) return static_cast<bool>(ka);
    if (a.is_const() != b.is_const()) return a.is_const();
    return compare(a, b) < 0;
  });
  return fs;
}

std::string product_text(const ExprList& factors) {
  // Symbol powers sharing the same fractional exponent are printed grouped,
  // e.g. (x*y*z)^(2/3) or sqrt(a*b).
  std::vector<std::string> parts;
  std::vector<bool> used(factors.size(), false);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (used[i]) continue;
    const Expr& f = factors[i];
    if (f.is_pow() && f.base().is_symbol() && f.exponent().is_const() && f.exponent().value().get_den() != 1) {
      std::vector<std::string> group{f.base().name()};
      for (std::size_t j = i + 1; j < factors.size(); ++j) {
        const Expr& g = factors[j];
        if (!used[j] && g.is_pow() && g.base().is_symbol() && g.exponent() == f.exponent()) {
          group.push_back(g.base().name());
          used[j] = true;
        }
      }
      if (group.size() > 1) {
        std::string inner;
        for (std::size_t k = 0; k < group.size(); ++k) inner += (k ? "*" : "") + group[k];
        parts.push_back(power_text(inner, false, f.exponent()));
        continue;
      }
    }
    parts.push_back(factor_text(f));
  }
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? "*" : "") + parts[k];
  return out;
}

std::string render_fraction(const Expr& e) {
  Fraction f = as_fraction(e);
  const bool negative = f.coeff < 0;
  Rational mag = negative ? Rational(-f.coeff) : f.coeff;
  ExprList num = display_factors(f.num);
  ExprList den = display_factors(f.den);
  std::string num_text;
  if (mag.get_num() != 1 || num.empty()) num_text = mag.get_num().get_str();
  if (!num.empty()) num_text += (num_text.empty() ? "" : "*") + product_text(num);
  std::string out = negative ? "-" + num_text : num_text;
  if (mag.get_den() == 1 && den.empty()) return out;
  std::vector<std::string> den_parts;
  if (mag.get_den() != 1) den_parts.push_back(mag.get_den().get_str());
  std::string den_prod = product_text(den);
  if (!den_prod.empty()) den_parts.push_back(den_prod);
  std::string den_text;
  for (std::size_t k = 0; k < den_parts.size(); ++k) den_text += (k ? "*" : "") + den_parts[k];
  bool single = true;
  int depth = 0;
  for (char ch : den_text) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth == 0 && (ch == '*' || ch == '/')) single = false;
  }
  return out + "/" + (single ? den_text : "(" + den_text + ")");
}

std::string render_plain(const Expr& e) {
  switch (e.kind()) {
    case Kind::Const:
      return rational_text(e.value());
    case Kind::Symbol:
      return e.name();
    case Kind::Add: {
      std::string out;
      bool first = true;
      for (const auto& t : display_order(e.operands())) {
        auto [c, rest] = split_coefficient(t);
        if (first) {
          out = render_plain(t);
          first = false;
        } else if (c < 0) {
          Expr m = mul({constant(-c), rest});
          out += " - " + (m.is_add() ? "(" + render_plain(m) + ")" : render_plain(m));
        } else {
          out += " + " + render_plain(t);
        }
      }
      return out;
    }
    case Kind::Mul:
    case Kind::Pow:
      return render_fraction(e);
  }
  return "?";
}

// ---------------------------------------------------------------------------
// LaTeX

std::string render_latex_impl(const Expr& e);

std::string latex_factor(const Expr& f) {
  if (f.is_add()) return "\\left(" + render_latex_impl(f) + "\\right)";
  if (f.is_pow()) {
    const Expr& b = f.base();
    const Expr& x = f.exponent();
    if (x.is_const() && x.value().get_num() == 1 && x.value().get_den() != 1) {
      if (x.value().get_den() == 2) return "\\sqrt{" + render_latex_impl(b) + "}";
      return "\\sqrt[" + x.value().get_den().get_str() + "]{" + render_latex_impl(b) + "}";
    }
    std::string bt = (b.is_symbol() || (b.is_const() && b.value() > 0 && b.value().get_den() == 1))
                         ? render_latex_impl(b)
                         : "\\left(" + render_latex_impl(b) + "\\right)";
    std::string xt = x.is_const() && x.value().get_den() != 1
                         ? "\\frac{" + x.value().get_num().get_str() + "}{" + x.value().get_den().get_str() + "}"
                         : render_latex_impl(x);
    return bt + "^{" + xt + "}";
  }
  return render_latex_impl(f);
}

std::string latex_product(const ExprList& fs) {
  std::string out;
  for (std::size_t i = 0; i < fs.size(); ++i) out += (i ? " " : "") + latex_factor(fs[i]);
  return out;
}

std::string render_latex_impl(const Expr& e) {
  switch (e.kind()) {
    case Kind::Const: {
      const Rational& v = e.value();
      if (v.get_den() == 1) return v.get_num().get_str();
      std::string s = v < 0 ? "-" : "";
      Integer n = abs(v.get_num());
      return s + "\\frac{" + n.get_str() + "}{" + v.get_den().get_str() + "}";
    }
    case Kind::Symbol:
      return e.name();
    case Kind::Add: {
      std::string out;
      bool first = true;
      for (const auto& t : display_order(e.operands())) {
        auto [c, rest] = split_coefficient(t);
        if (first) {
          out = render_latex_impl(t);
          first = false;
        } else if (c < 0) {
          Expr m = mul({constant(-c), rest});
          out += " - " + (m.is_add() ? "\\left(" + render_latex_impl(m) + "\\right)" : render_latex_impl(m));
        } else {
          out += " + " + render_latex_impl(t);
        }
      }
      return out;
    }
    case Kind::Mul:
    case Kind::Pow: {
      Fraction f = as_fraction(e);
      const bool negative = f.coeff < 0;
      Rational mag = negative ? Rational(-f.coeff) : f.coeff;
      ExprList num = display_factors(f.num);
      ExprList den = display_factors(f.den);
      std::string nt;
      if (mag.get_num() != 1 || num.empty()) nt = mag.get_num().get_str();
      if (!num.empty()) nt += (nt.empty() ? "" : " ") + latex_product(num);
      std::string dt;
      if (mag.get_den() != 1) dt = mag.get_den().get_str();
      if (!den.empty()) dt += (dt.empty() ? "" : " ") + latex_product(den);
      std::string body = dt.empty() ? nt : "\\frac{" + nt + "}{" + dt + "}";
      return negative ? "-" + body : body;
    }
  }
  return "?";
}

}  // namespace

std::string render(const Expr& e, Style style) {
  return style == Style::Plain ? render_plain(e) : render_latex_impl(e);
}

std::size_t string_length(const Expr& e) { return render_plain(e).size(); }

}  // namespace ineq
