#include "tollbooth/lp.hpp"

#include <stdexcept>

namespace tollbooth::lp {

namespace {

// Tableau layout: columns 0..n-1 structural, then one slack/surplus column
// per inequality row, then one artificial column per GE/EQ row. The final
// column is the rhs. Row 0..m-1 are constraints; costs are handled outside
// the tableau so both phases can reuse the same pivoting core.
struct Tableau {
  std::vector<std::vector<Rat>> a;  // m rows, width cols+1 (rhs last)
  std::vector<int> basis;
  int cols = 0;

  Rat& at(int r, int c) { return a[r][c]; }
  Rat& rhs(int r) { return a[r][cols]; }

  void pivot(int r, int c) {
    Rat inv = Rat(1) / a[r][c];
    for (int j = 0; j <= cols; ++j) a[r][j] *= inv;
    for (size_t i = 0; i < a.size(); ++i) {
      if (static_cast<int>(i) == r || a[i][c].is_zero()) continue;
      Rat f = a[i][c];
      for (int j = 0; j <= cols; ++j) a[i][j] -= f * a[r][j];
    }
    basis[r] = c;
  }
};

// One simplex phase: maximize cost.x with Bland's rule. `cost` has one entry
// per tableau column. Returns false when unbounded.
bool run_phase(Tableau& t, const std::vector<Rat>& cost, const std::vector<bool>& allowed) {
  int m = static_cast<int>(t.a.size());
  while (true) {
    // Reduced costs z_j - c_j via the current basis.
    int enter = -1;
    for (int j = 0; j < t.cols; ++j) {
      if (!allowed[j]) continue;
      bool basic = false;
      for (int r = 0; r < m; ++r)
        if (t.basis[r] == j) basic = true;
      if (basic) continue;
      Rat red = -cost[j];
      for (int r = 0; r < m; ++r)
        if (!t.a[r][j].is_zero()) red += cost[t.basis[r]] * t.a[r][j];
      if (red < Rat(0)) {  // improving column; Bland: first index
        enter = j;
        break;
      }
    }
    if (enter < 0) return true;
    int leave = -1;
    Rat best;
    for (int r = 0; r < m; ++r) {
      if (!(t.a[r][enter] > Rat(0))) continue;
      Rat ratio = t.rhs(r) / t.a[r][enter];
      if (leave < 0 || ratio < best || (ratio == best && t.basis[r] < t.basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave < 0) return false;  // unbounded
    t.pivot(leave, enter);
  }
}

}  // namespace

Solution solve(const Problem& p) {
  int n = p.num_vars;
  int m = static_cast<int>(p.rows.size());
  for (const auto& r : p.rows)
    if (static_cast<int>(r.coeff.size()) != n)
      throw std::invalid_argument("lp::solve: row width mismatch");

  // Column plan: structural | slack/surplus per inequality | artificial.
  int n_slack = 0;
  for (const auto& r : p.rows)
    if (r.sense != Sense::EQ) n_slack++;
  std::vector<int> slack_col(m, -1), art_col(m, -1);
  int next = n;
  for (int i = 0; i < m; ++i)
    if (p.rows[i].sense != Sense::EQ) slack_col[i] = next++;
  int first_art = next;
  for (int i = 0; i < m; ++i) {
    // GE and EQ rows need an artificial; LE rows with negative rhs are
    // normalized below and then need one as well.
    art_col[i] = next++;
  }
  Tableau t;
  t.cols = next;
  t.a.assign(m, std::vector<Rat>(t.cols + 1, Rat(0)));
  t.basis.assign(m, -1);

  for (int i = 0; i < m; ++i) {
    const Row& row = p.rows[i];
    Rat sign(1);
    Rat rhs = row.rhs;
    // Normalize to nonnegative rhs.
    std::vector<Rat> coeff = row.coeff;
    Sense sense = row.sense;
    if (rhs < Rat(0)) {
      for (auto& c : coeff) c = -c;
      rhs = -rhs;
      if (sense == Sense::LE) sense = Sense::GE;
      else if (sense == Sense::GE) sense = Sense::LE;
      sign = Rat(-1);
    }
    for (int j = 0; j < n; ++j) t.a[i][j] = coeff[j];
    t.rhs(i) = rhs;
    if (slack_col[i] >= 0) t.a[i][slack_col[i]] = sense == Sense::LE ? Rat(1) : Rat(-1);
    // Every row carries its artificial unit column so the final tableau holds
    // B^{-1} there; artificials of LE rows start nonbasic and never enter.
    t.a[i][art_col[i]] = Rat(1);
    t.basis[i] = sense == Sense::LE ? slack_col[i] : art_col[i];
    (void)sign;
  }

  // Artificial columns may leave the basis but never enter it.
  std::vector<bool> enterable(t.cols, true);
  for (int c = first_art; c < t.cols; ++c) enterable[c] = false;

  // Phase 1: drive artificials out (maximize -sum of artificials).
  bool need_phase1 = false;
  for (int i = 0; i < m; ++i)
    if (t.basis[i] >= first_art) need_phase1 = true;
  if (need_phase1) {
    std::vector<Rat> cost1(t.cols, Rat(0));
    for (int c = first_art; c < t.cols; ++c) cost1[c] = Rat(-1);
    if (!run_phase(t, cost1, enterable))
      throw std::logic_error("lp::solve: phase 1 unbounded");
    Rat p1(0);
    for (int r = 0; r < m; ++r)
      if (t.basis[r] >= first_art) p1 += t.rhs(r);
    if (!p1.is_zero()) {
      Solution s;
      s.status = Status::Infeasible;
      return s;
    }
    // Pivot any degenerate artificial out of the basis.
    for (int r = 0; r < m; ++r) {
      if (t.basis[r] < first_art) continue;
      int c;
      for (c = 0; c < first_art; ++c)
        if (!t.a[r][c].is_zero()) break;
      if (c < first_art) t.pivot(r, c);
      // Otherwise the row is all-zero and harmless.
    }
  }

  // Phase 2 on structural + slack columns only.
  std::vector<Rat> cost2(t.cols, Rat(0));
  for (int j = 0; j < n; ++j) cost2[j] = p.objective[j];
  if (!run_phase(t, cost2, enterable)) {
    Solution s;
    s.status = Status::Unbounded;
    return s;
  }

  Solution s;
  s.status = Status::Optimal;
  s.x.assign(n, Rat(0));
  for (int r = 0; r < m; ++r)
    if (t.basis[r] < n) s.x[t.basis[r]] = t.rhs(r);
  s.objective = Rat(0);
  for (int j = 0; j < n; ++j) s.objective += p.objective[j] * s.x[j];
  s.basis = t.basis;

  // Duals: y = c_B B^{-1}, read off the artificial columns (their tableau
  // entries are B^{-1} since each started as a unit column). Rows whose rhs
  // was flipped flip the sign back.
  s.dual.assign(m, Rat(0));
  for (int i = 0; i < m; ++i) {
    Rat y(0);
    for (int r = 0; r < m; ++r) {
      int b = t.basis[r];
      if (b < n && !t.a[r][art_col[i]].is_zero()) y += p.objective[b] * t.a[r][art_col[i]];
    }
    if (p.rows[i].rhs < Rat(0)) y = -y;
    s.dual[i] = y;
  }
  return s;
}

}  // namespace tollbooth::lp
