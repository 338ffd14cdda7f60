#include "ineq/benchmark.hpp"

#include <cstdlib>

namespace ineq {

namespace {

struct Spec {
  const char* source;
  std::vector<std::string> vars;
  Domain domain;
  std::vector<std::string> conditions;
  const char* statement;
  const char* note;  // non-empty marks the problem unsupported
};

const std::vector<Spec>& specs() {
  static const std::vector<Spec> s = {
      {"IMO 1990 Shortlist", {"a", "b", "c", "d"}, Domain::Positive, {"a*b+b*c+c*d+d*a = 1"},
       "a^3/(b+c+d) + b^3/(c+d+a) + c^3/(d+a+b) + d^3/(a+b+c) >= 1/3", ""},
      {"IMO 1993 Shortlist", {"a", "b", "c", "d"}, Domain::Positive, {},
       "a/(b+2*c+3*d) + b/(3*a+c+2*d) + c/(2*a+3*b+d) + d/(a+2*b+3*c) >= 2/3", ""},
      {"IMO 1995 P2", {"a", "b", "c"}, Domain::Positive, {"a*b*c = 1"},
       "1/(c^3*(a+b)) + 1/(b^3*(a+c)) + 1/(a^3*(b+c)) >= 3/2", ""},
      {"IMO 1996 Shortlist", {"a", "b", "c"}, Domain::Positive, {"a*b*c = 1"},
       "a*b/(a^5+a*b+b^5) + a*c/(a^5+a*c+c^5) + b*c/(b^5+b*c+c^5) <= 1", ""},
      {"USAMO 1997 P5", {"a", "b", "c"}, Domain::Positive, {},
       "1/(a^3+b^3+a*b*c) + 1/(b^3+c^3+a*b*c) + 1/(c^3+a^3+a*b*c) <= 1/(a*b*c)", ""},
      {"IMO 1998 Shortlist A3", {"a", "b", "c"}, Domain::Positive, {"a*b*c = 1"},
       "a^3/((1+b)*(1+c)) + b^3/((1+c)*(1+a)) + c^3/((1+a)*(1+b)) >= 3/4", ""},
      {"IMO 2000 P2", {"a", "b", "c"}, Domain::Positive, {"a*b*c = 1"},
       "(a-1+1/b)*(b-1+1/c)*(c-1+1/a) <= 1", ""},
      {"IMO 2001 P2", {"a", "b", "c"}, Domain::Positive, {},
       "a/sqrt(a^2+8*b*c) + b/sqrt(8*a*c+b^2) + c/sqrt(8*a*b+c^2) >= 1", ""},
      {"USAMO 2003 P5", {"a", "b", "c"}, Domain::Positive, {},
       "(a+b+2*c)^2/(2*c^2+(a+b)^2) + (a+2*b+c)^2/(2*b^2+(a+c)^2) + (2*a+b+c)^2/(2*a^2+(b+c)^2) <= 8", ""},
      {"Poland 2004", {"a", "b", "c", "d"}, Domain::Positive, {},
       "a/(a^3+63*b*c*d)^(1/3) + b/(63*a*c*d+b^3)^(1/3) + c/(63*a*b*d+c^3)^(1/3) + d/(63*a*b*c+d^3)^(1/3) >= 1", ""},
      {"IMO 2004 Shortlist A5", {"a", "b", "c"}, Domain::Positive, {"a*b+b*c+c*a = 1"},
       "(1/a+6*b)^(1/3) + (1/b+6*c)^(1/3) + (1/c+6*a)^(1/3) <= 1/(a*b*c)", ""},
      {"IMO 2006 P3", {"a", "b", "c"}, Domain::Real, {},
       "|a*b*(a^2-b^2)+b*c*(b^2-c^2)+c*a*(c^2-a^2)| <= 9/(16*sqrt(2))*(a^2+b^2+c^2)^2",
       "absolute value is outside the expression grammar"},
      {"IMO 2009 Shortlist", {"a", "b", "c"}, Domain::Positive, {"1/a+1/b+1/c = a+b+c"},
       "(2*a+b+c)^(-2) + (a+2*b+c)^(-2) + (a+b+2*c)^(-2) <= 3/16", ""},
      {"USA IMO Team Selection 2010 P2", {"a", "b", "c"}, Domain::Positive, {"a*b*c = 1"},
       "1/(c^5*(a+2*b)^2) + 1/(b^5*(2*a+c)^2) + 1/(a^5*(b+2*c)^2) >= 1/3", ""},
      {"USAMO 2011 P1", {"a", "b", "c"}, Domain::Positive, {"a^2+b^2+c^2+(a+b+c)^2 <= 4"},
       "(a*b+1)/(a+b)^2 + (b*c+1)/(b+c)^2 + (c*a+1)/(c+a)^2 >= 3", ""},
      {"Korea 2011 P4", {"a", "b", "c"}, Domain::NonNegative, {"a+b+c = 1"},
       "1/(a^2-4*a+9) + 1/(b^2-4*b+9) + 1/(c^2-4*c+9) <= 7/18", ""},
      {"USAMO 2012", {"a", "b", "c"}, Domain::Positive, {},
       "(b^3+3*c^3)/(5*b+c) + (a^3+3*b^3)/(5*a+b) + (3*a^3+c^3)/(a+5*c) >= 2/3*(a^2+b^2+c^2)", ""},
      {"Japan 2014 P5", {"a", "b", "c"}, Domain::NonNegative, {"a+b+c = 1"},
       "a/(9*b*c+4*(b-c)^2+1) + b/(9*a*c+4*(-a+c)^2+1) + c/(9*a*b+4*(a-b)^2+1) >= 1/2", ""},
      {"USAMO 2017 P6", {"a", "b", "c", "d"}, Domain::NonNegative, {"a+b+c+d = 4"},
       "a/(b^3+4) + b/(c^3+4) + c/(d^3+4) + d/(a^3+4) >= 2/3", ""},
      {"IMO 2020 P2", {"a", "b", "c", "d"}, Domain::Positive, {"a >= b", "b >= c", "c >= d", "a+b+c+d = 1"},
       "(a+2*b+3*c+4*d)*a^a*b^b*c^c*d^d < 1", "variable exponents are outside the theorem library"},
  };
  return s;
}

std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

std::string two_digits(std::size_t i) { return (i < 10 ? "0" : "") + std::to_string(i); }

}  // namespace

Problem make_problem(const std::string& statement, const std::vector<std::string>& vars, Domain d,
                     const std::vector<std::string>& conditions) {
  std::vector<Condition> conds;
  std::vector<Expr> facts;
  for (const auto& c : conditions) {
    auto r = parse_relation(c);
    switch (r.relation) {
      case Relation::Eq:
        conds.push_back({r.lhs, r.rhs});
        break;
      case Relation::Le:
      case Relation::Lt:
        facts.push_back(r.rhs - r.lhs);
        break;
      case Relation::Ge:
      case Relation::Gt:
        facts.push_back(r.lhs - r.rhs);
        break;
    }
  }
  Problem p;
  p.vars = vars;
  p.statement = statement;
  std::string dom = d == Domain::Positive ? " > 0" : d == Domain::NonNegative ? " >= 0" : " real";
  p.hypotheses = join(vars, ", ") + dom;
  if (!conditions.empty()) p.hypotheses += "; " + join(conditions, "; ");
  auto r = parse_relation(statement);
  Inequality g;
  g.relation = r.relation;
  g.lhs = r.lhs;
  g.rhs = r.rhs;
  g.assumptions = make_assumptions(vars, d, std::move(conds), std::move(facts));
  p.goal = g;
  return p;
}

const std::vector<Problem>& load_benchmark() {
  static const std::vector<Problem> problems = [] {
    std::vector<Problem> out;
    std::size_t i = 0;
    for (const auto& s : specs()) {
      ++i;
      Problem p;
      try {
        p = make_problem(s.statement, s.vars, s.domain, s.conditions);
      } catch (const ParseError&) {
        p.vars = s.vars;
        p.statement = s.statement;
        p.hypotheses = join(s.vars, ", ") + " real";
      }
      p.id = "MO-INT-20/" + two_digits(i);
      p.source = s.source;
      p.note = s.note;
      p.supported = p.note.empty() && p.goal.has_value();
      out.push_back(std::move(p));
    }
    return out;
  }();
  return problems;
}

std::optional<Problem> find_problem(const std::string& ref) {
  std::string key = ref;
  if (auto slash = key.rfind('/'); slash != std::string::npos) key = key.substr(slash + 1);
  if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
  long n = std::strtol(key.c_str(), nullptr, 10);
  const auto& all = load_benchmark();
  if (n < 1 || n > static_cast<long>(all.size())) return std::nullopt;
  return all[static_cast<std::size_t>(n - 1)];
}

}  // namespace ineq
