#pragma once

#include <vector>

#include "tollbooth/rational.hpp"

namespace tollbooth::lp {

enum class Sense { LE, GE, EQ };

struct Row {
  std::vector<Rat> coeff;  // one per variable
  Sense sense = Sense::LE;
  Rat rhs;
};

// maximize c.x subject to rows, x >= 0.
struct Problem {
  int num_vars = 0;
  std::vector<Rat> objective;
  std::vector<Row> rows;

  int add_var(Rat obj_coeff = Rat(0)) {
    objective.push_back(std::move(obj_coeff));
    return num_vars++;
  }
  void add_row(std::vector<Rat> coeff, Sense s, Rat rhs) {
    rows.push_back({std::move(coeff), s, std::move(rhs)});
  }
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
  Status status = Status::Infeasible;
  Rat objective;
  std::vector<Rat> x;
  // Dual multiplier per row (sign convention of a maximization problem:
  // y >= 0 for LE rows, y <= 0 for GE rows, free for EQ rows).
  std::vector<Rat> dual;
  std::vector<int> basis;  // basic variable per row, structural vars < num_vars
};

// Dense exact simplex, two phases, Bland's rule for anti-cycling. Intended
// for the small systems this library solves; entries are exact rationals.
Solution solve(const Problem& p);

}  // namespace tollbooth::lp
