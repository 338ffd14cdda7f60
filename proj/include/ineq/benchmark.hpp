#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ineq/inequality.hpp"

namespace ineq {

/// One olympiad problem of the embedded MO-INT-20 set.
struct Problem {
  std::string id;      // "MO-INT-20/05"
  std::string source;  // "USAMO 1997 P5"
  std::vector<std::string> vars;
  std::string hypotheses;  // human-readable conditions
  std::string statement;   // goal in the problem grammar
  std::optional<Inequality> goal;  // absent when the statement is outside the grammar
  bool supported = true;
  std::string note;  // why a problem is unsupported
};

/// The 20 problems, ids 01..20, in order.
const std::vector<Problem>& load_benchmark();

/// Accepts "MO-INT-20/05", "05" or "5".
std::optional<Problem> find_problem(const std::string& ref);

/// Ad-hoc problem from a relation text; every variable gets domain `d`.
/// Throws ParseError.
Problem make_problem(const std::string& statement, const std::vector<std::string>& vars, Domain d,
                     const std::vector<std::string>& conditions = {});

}  // namespace ineq
