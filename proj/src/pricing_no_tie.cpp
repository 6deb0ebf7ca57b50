#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>

#include "tollbooth/no_tie.hpp"

namespace tollbooth::notie {

namespace {

using pricing::SubInstance;
using pricing::make_sub_instance;

struct Line {
  std::vector<int> order;  // position (1-based) -> edge id
  std::vector<int> pos;    // edge id -> position
};

Line line_of(const Graph& g) {
  Line l;
  l.pos.assign(g.edge_count() + 1, 0);
  if (g.edge_count() == 0) return l;
  int start = -1;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) == 1) { start = v; break; }
  if (start < 0) throw KindError("line_of: not a path");
  int cur = start, prev = -1;
  while (true) {
    int nxt = -1;
    for (int e : g.incident(cur))
      if (e != prev) nxt = e;
    if (nxt < 0) break;
    l.order.push_back(nxt);
    l.pos[nxt] = static_cast<int>(l.order.size());
    cur = g.other_end(nxt, cur);
    prev = nxt;
  }
  return l;
}

struct Span {
  int lo = 0, hi = -1;
};

Span span_of(const Instance& inst, const Line& line, int j) {
  Span s{1 << 30, -1};
  for (int e : inst.buyer(j).demand.edge_ids) {
    s.lo = std::min(s.lo, line.pos[e]);
    s.hi = std::max(s.hi, line.pos[e]);
  }
  return s;
}

// Representative per identical demand edge-set: the maximum value, lowest
// index. Equal-value duplicates are interchangeable for the welfare
// guarantee; lower-valued ones carry a positive margin and get priced out.
std::vector<int> dedup_reps(const Instance& inst) {
  std::map<std::set<int>, int> rep;
  for (int j = 0; j < inst.buyer_count(); ++j) {
    auto key = inst.buyer(j).demand.edge_set();
    auto it = rep.find(key);
    if (it == rep.end()) {
      rep[key] = j;
    } else if (inst.buyer(j).value > inst.buyer(it->second).value) {
      it->second = j;
    }
  }
  std::vector<int> out;
  for (auto& [k, j] : rep) out.push_back(j);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

DualCertificate dual_with_margin(const Instance& inst) {
  if (inst.graph().kind() != GraphKind::Path)
    throw KindError("dual_with_margin: requires a path");
  Line line = line_of(inst.graph());
  int m = inst.edge_count();

  // Integral optimum preferring minimal covered length, then many winners:
  // maximal free capacity is what admits a strictly positive tight dual, and
  // maximal winner count drives the replacement arguments downstream.
  auto [opt, alloc] = engine::optimal_allocation_lex(inst, engine::LexRefine::CoverThenCount);

  DualCertificate cert;
  cert.winners = {alloc.winners.begin(), alloc.winners.end()};
  for (int j : alloc.winners)
    for (int e : inst.buyer(j).demand.edge_ids) cert.covered.insert(e);

  Rat big(1);
  for (const auto& b : inst.buyers()) big += b.value;
  cert.p_star.assign(m, big);

  std::vector<int> reps = dedup_reps(inst);

  // Contiguous runs of covered positions.
  std::vector<std::pair<int, int>> runs;
  {
    std::vector<bool> cov(m + 2, false);
    for (int e : cert.covered) cov[line.pos[e]] = true;
    int x = 1;
    while (x <= m) {
      if (!cov[x]) { x++; continue; }
      int y = x;
      while (y + 1 <= m && cov[y + 1]) y++;
      runs.push_back({x, y});
      x = y + 1;
    }
  }

  Rat epsilon(0);
  bool first = true;
  for (auto [lo, hi] : runs) {
    // max t: p tight on winners inside, p(Q) >= v for reps inside, p >= t.
    lp::Problem prob;
    std::map<int, int> var_of;
    for (int x = lo; x <= hi; ++x) var_of[x] = prob.add_var(Rat(0));
    int t_var = prob.add_var(Rat(1));
    auto row_for = [&](int j) {
      std::vector<Rat> row(prob.num_vars, Rat(0));
      for (int e : inst.buyer(j).demand.edge_ids) row[var_of.at(line.pos[e])] = Rat(1);
      return row;
    };
    for (int j : cert.winners) {
      Span s = span_of(inst, line, j);
      if (s.lo < lo || s.hi > hi) continue;
      prob.add_row(row_for(j), lp::Sense::EQ, inst.buyer(j).value);
    }
    for (int j : reps) {
      Span s = span_of(inst, line, j);
      if (s.lo < lo || s.hi > hi) continue;
      prob.add_row(row_for(j), lp::Sense::GE, inst.buyer(j).value);
    }
    for (int x = lo; x <= hi; ++x) {
      std::vector<Rat> row(prob.num_vars, Rat(0));
      row[var_of[x]] = Rat(1);
      row[t_var] = Rat(-1);
      prob.add_row(std::move(row), lp::Sense::GE, Rat(0));
    }
    lp::Solution sol = lp::solve(prob);
    if (sol.status != lp::Status::Optimal || !(sol.x[t_var] > Rat(0)))
      throw RepairLoopDiverged("dual_with_margin: no strictly positive tight dual");
    for (int x = lo; x <= hi; ++x) cert.p_star[line.order[x - 1] - 1] = sol.x[var_of[x]];
    epsilon = first ? sol.x[t_var] : min(epsilon, sol.x[t_var]);
    first = false;
  }
  if (first) epsilon = Rat(1);

  Rat min_gap(0);
  bool has_gap = false;
  for (int j = 0; j < inst.buyer_count(); ++j) {
    Rat pq(0);
    for (int e : inst.buyer(j).demand.edge_ids) pq += cert.p_star[e - 1];
    if (pq == inst.buyer(j).value) {
      cert.tight.insert(j);
    } else {
      Rat gap = pq - inst.buyer(j).value;
      if (gap < Rat(0)) throw std::logic_error("dual_with_margin: infeasible dual");
      if (!has_gap || gap < min_gap) min_gap = gap;
      has_gap = true;
    }
  }
  if (has_gap) epsilon = min(epsilon, min_gap / Rat(2 * (m + 1)));
  cert.epsilon = epsilon;
  {
    std::set<int> reps_set(reps.begin(), reps.end());
    std::set<int> tight2;
    for (int j : cert.tight)
      if (reps_set.count(j)) tight2.insert(j);
    cert.tight = tight2;
  }
  cert.margin_ok = true;
  return cert;
}

namespace {

// Over one contiguous position interval: the smallest piece count (capped at
// two) of an exact tiling by tight reps outside `exclude`, or -1.
int min_tiling(const Instance& inst, const Line& line, const DualCertificate& cert,
               const std::set<int>& exclude, int lo, int hi) {
  int width = hi - lo + 2;
  std::vector<std::array<bool, 3>> reach(width, {false, false, false});
  reach[0][0] = true;
  std::vector<std::pair<Span, int>> cands;
  for (int j : cert.tight) {
    if (exclude.count(j)) continue;
    Span s = span_of(inst, line, j);
    if (s.lo >= lo && s.hi <= hi) cands.push_back({s, j});
  }
  for (int x = 0; x < width - 1; ++x)
    for (int c = 0; c <= 2; ++c) {
      if (!reach[x][c]) continue;
      for (auto& [s, j] : cands) {
        if (s.lo != lo + x) continue;
        reach[s.hi - lo + 1][std::min(2, c + 1)] = true;
      }
    }
  for (int c = 1; c <= 2; ++c)
    if (reach[width - 1][c]) return c;
  return -1;
}

}  // namespace

bool is_good_set(const Instance& inst, const std::vector<int>& kept,
                 const DualCertificate& cert) {
  Line line = line_of(inst.graph());
  std::set<int> kept_pos;
  for (int j : kept)
    for (int e : inst.buyer(j).demand.edge_ids)
      if (!kept_pos.insert(line.pos[e]).second)
        throw std::invalid_argument("is_good_set: kept paths share an edge");
  if (kept_pos.empty()) return true;
  std::vector<std::pair<int, int>> intervals;
  int prev = -10, start = -1;
  for (int x : kept_pos) {
    if (x != prev + 1) {
      if (start >= 0) intervals.push_back({start, prev});
      start = x;
    }
    prev = x;
  }
  intervals.push_back({start, prev});

  std::set<int> exclude(kept.begin(), kept.end());
  int total = 0;
  for (auto [lo, hi] : intervals) {
    int got = min_tiling(inst, line, cert, exclude, lo, hi);
    if (got < 0) return true;  // an interval cannot be re-covered at all
    total += got;
  }
  return total < 2;
}

PriceVector good_set_prices(const Instance& inst, const std::vector<int>& kept,
                            const DualCertificate& cert) {
  if (!is_good_set(inst, kept, cert))
    throw SystemInfeasible("good_set_prices: the kept set is not good");
  int m = inst.edge_count();
  std::set<int> span_edges;
  for (int j : kept)
    for (int e : inst.buyer(j).demand.edge_ids) span_edges.insert(e);

  std::set<int> kept_set(kept.begin(), kept.end());
  std::vector<int> rivals;
  for (int j : cert.tight) {
    if (kept_set.count(j)) continue;
    bool inside = true;
    for (int e : inst.buyer(j).demand.edge_ids)
      if (!span_edges.count(e)) inside = false;
    if (inside) rivals.push_back(j);
  }

  // max eps': kept path sums shift down by at least eps', rival sums up by
  // at least eps', total perturbation at most epsilon/2.
  lp::Problem prob;
  std::map<int, std::pair<int, int>> var_of;
  for (int e : span_edges) var_of[e] = {prob.add_var(Rat(0)), prob.add_var(Rat(0))};
  int eps_var = prob.add_var(Rat(1));
  auto add_sum_row = [&](int j, lp::Sense sense) {
    std::vector<Rat> row(prob.num_vars, Rat(0));
    for (int e : inst.buyer(j).demand.edge_ids) {
      row[var_of[e].first] = Rat(1);
      row[var_of[e].second] = Rat(-1);
    }
    row[eps_var] = sense == lp::Sense::LE ? Rat(1) : Rat(-1);
    prob.add_row(std::move(row), sense, Rat(0));
  };
  for (int j : kept) add_sum_row(j, lp::Sense::LE);
  for (int j : rivals) add_sum_row(j, lp::Sense::GE);
  {
    std::vector<Rat> row(prob.num_vars, Rat(0));
    for (auto& [e, pm] : var_of) {
      row[pm.first] = Rat(1);
      row[pm.second] = Rat(1);
    }
    prob.add_row(std::move(row), lp::Sense::LE, cert.epsilon / Rat(2));
  }
  lp::Solution sol = lp::solve(prob);
  if (sol.status != lp::Status::Optimal || !(sol.x[eps_var] > Rat(0)))
    throw SystemInfeasible("good_set_prices: separating system is infeasible");

  PriceVector prices = PriceVector::all_blocked(m);
  for (int e : span_edges) {
    Rat alpha = sol.x[var_of[e].first] - sol.x[var_of[e].second];
    Rat p = cert.p_star[e - 1] + alpha;
    if (!(p > Rat(0))) throw std::logic_error("good_set_prices: nonpositive price");
    prices.set(e, ExtPrice(p));
  }
  for (int j = 0; j < inst.buyer_count(); ++j) {
    ExtPrice pq = prices.path_price(inst.buyer(j).demand);
    if (kept_set.count(j)) {
      if (pq.is_blocked() || !(pq.finite() < inst.buyer(j).value))
        throw std::logic_error("good_set_prices: kept buyer cannot strictly afford");
    } else if (!pq.is_blocked()) {
      const Buyer& b = inst.buyer(j);
      bool twin_of_kept = false;
      for (int kj : kept)
        if (inst.buyer(kj).demand.edge_set() == b.demand.edge_set() &&
            inst.buyer(kj).value == b.value)
          twin_of_kept = true;
      if (twin_of_kept) continue;  // same span, same value: interchangeable
      if (!(pq.finite() > b.value))
        throw std::logic_error("good_set_prices: rival buyer not strictly priced out");
    }
  }
  return prices;
}

// ---------------------------------------------------------------------------
// Double cover of the kept optimum and the path algorithm.

namespace {

struct CopyPiece {
  int buyer;
  Span span;
};

struct Partition {
  std::array<std::vector<CopyPiece>, 3> cls;
};

std::vector<std::vector<CopyPiece>> chain_components(std::vector<CopyPiece> pieces) {
  std::sort(pieces.begin(), pieces.end(),
            [](const CopyPiece& a, const CopyPiece& b) { return a.span.lo < b.span.lo; });
  std::vector<std::vector<CopyPiece>> out;
  for (const auto& p : pieces) {
    if (!out.empty() && out.back().back().span.hi + 1 >= p.span.lo)
      out.back().push_back(p);
    else
      out.push_back({p});
  }
  return out;
}

struct SplitWitness {
  int left_buyer, right_buyer;
  int split;  // left covers [lo, split], right [split+1, hi]
};

std::optional<SplitWitness> find_pair_split(const Instance& inst, const Line& line,
                                            const DualCertificate& cert, int lo, int hi,
                                            const std::set<int>& exclude) {
  std::vector<std::pair<Span, int>> cands;
  for (int j : cert.tight) {
    if (exclude.count(j)) continue;
    Span s = span_of(inst, line, j);
    if (s.lo >= lo && s.hi <= hi) cands.push_back({s, j});
  }
  for (auto& [sa, ja] : cands) {
    if (sa.lo != lo || sa.hi >= hi) continue;
    for (auto& [sb, jb] : cands)
      if (sb.lo == sa.hi + 1 && sb.hi == hi) return SplitWitness{ja, jb, sa.hi};
  }
  return std::nullopt;
}

// Machinery for one path instance: certificate, the three-way double cover
// of the kept optimum, and strictly separating prices for the chosen class.
class PathCore {
 public:
  explicit PathCore(const Instance& inst)
      : inst_(inst), line_(line_of(inst.graph())), cert_(dual_with_margin(inst)) {}

  const DualCertificate& cert() const { return cert_; }

  std::vector<std::vector<CopyPiece>> covered_runs() const {
    std::vector<CopyPiece> all;
    for (int j : cert_.winners) all.push_back({j, span_of(inst_, line_, j)});
    return chain_components(all);
  }

  std::optional<Partition> partition_run(const std::vector<CopyPiece>& run) {
    Partition part;
    int k = static_cast<int>(run.size());
    for (int j = 0; j < k; ++j)
      for (int copy = 0; copy < 2; ++copy) {
        int g = (j + 3 * copy) % 6;
        part.cls[g / 2].push_back(run[j]);
      }
    repair(part);
    if (!verify(part, run)) return std::nullopt;
    return part;
  }

  // The kept chains of the heaviest good class for each covered run, found
  // through the double cover or, failing that, by direct search.
  std::vector<std::vector<int>> kept_chains() {
    std::vector<std::vector<int>> out;
    for (auto& run : covered_runs()) {
      std::optional<Partition> part = partition_run(run);
      std::vector<std::vector<int>> chains;
      if (part) {
        int best = -1;
        Rat best_val(-1);
        for (int c = 0; c < 3; ++c) {
          Rat v(0);
          for (const auto& p : part->cls[c]) v += inst_.buyer(p.buyer).value;
          if (v > best_val) {
            best_val = v;
            best = c;
          }
        }
        for (auto& chain : chain_components(part->cls[best])) {
          std::vector<int> kept;
          for (const auto& p : chain) kept.push_back(p.buyer);
          chains.push_back(kept);
        }
      } else {
        chains = fallback_chains(run);
      }
      for (auto& c : chains) out.push_back(std::move(c));
    }
    return out;
  }

  pricing::PricedOutcome run() {
    pricing::PricedOutcome out;
    out.prices = PriceVector::all_blocked(inst_.edge_count());
    out.guaranteed_welfare = Rat(0);
    out.ratio_bound = Rat(3, 2);
    for (auto& kept : kept_chains()) {
      PriceVector pv = good_set_prices(inst_, kept, cert_);
      for (int e = 1; e <= inst_.edge_count(); ++e)
        if (!pv.at(e).is_blocked()) out.prices.set(e, pv.at(e));
      for (int j : kept) {
        out.intended_winners.insert(j);
        out.guaranteed_welfare += inst_.buyer(j).value;
      }
    }
    return out;
  }

 private:
  bool component_good(const std::vector<CopyPiece>& chain) const {
    std::vector<int> kept;
    for (const auto& p : chain) kept.push_back(p.buyer);
    return is_good_set(inst_, kept, cert_);
  }

  void repair(Partition& part) {
    int guard = 8 * static_cast<int>(cert_.winners.size()) + 8;
    while (guard-- > 0) {
      bool changed = false;
      for (int c = 0; c < 3 && !changed; ++c) {
        for (auto& chain : chain_components(part.cls[c])) {
          if (chain.size() != 2) continue;
          if (component_good(chain)) continue;
          std::set<int> exclude = {chain[0].buyer, chain[1].buyer};
          auto split = find_pair_split(inst_, line_, cert_, chain[0].span.lo,
                                       chain[1].span.hi, exclude);
          if (!split) return;
          if (!apply_pair_repair(part, c, chain, *split)) return;
          changed = true;
          break;
        }
      }
      if (!changed) return;
    }
  }

  bool apply_pair_repair(Partition& part, int c, const std::vector<CopyPiece>& chain,
                         const SplitWitness& split) {
    const CopyPiece& left = chain[0];
    const CopyPiece& right = chain[1];
    CopyPiece xp{split.left_buyer, span_of(inst_, line_, split.left_buyer)};
    CopyPiece yp{split.right_buyer, span_of(inst_, line_, split.right_buyer)};

    auto remove_piece = [&](int cls, const CopyPiece& p) {
      auto& v = part.cls[cls];
      for (size_t i = 0; i < v.size(); ++i)
        if (v[i].buyer == p.buyer && v[i].span.lo == p.span.lo && v[i].span.hi == p.span.hi) {
          v.erase(v.begin() + i);
          return true;
        }
      return false;
    };
    auto class_of_other_copy = [&](const CopyPiece& p) {
      for (int t = 0; t < 3; ++t) {
        if (t == c) continue;
        for (const auto& q : part.cls[t])
          if (q.buyer == p.buyer && q.span.lo == p.span.lo && q.span.hi == p.span.hi) return t;
      }
      return -1;
    };

    if (split.split < left.span.hi) {
      // The new left piece stays inside the first buyer's span: it goes to
      // the class holding neither this pair nor that buyer's other copy.
      int t_other = class_of_other_copy(left);
      if (t_other < 0) return false;
      int t3 = 3 - c - t_other;
      remove_piece(c, left);
      remove_piece(c, right);
      part.cls[c].push_back(yp);
      part.cls[t3].push_back(xp);
      return true;
    }
    // The new left piece swallows the first buyer's span: swap it with that
    // buyer's other copy, which must still be intact.
    int t_other = class_of_other_copy(left);
    if (t_other < 0) return false;
    if (!remove_piece(t_other, left)) return false;
    remove_piece(c, left);
    remove_piece(c, right);
    part.cls[c].push_back(yp);
    part.cls[c].push_back(left);
    part.cls[t_other].push_back(xp);
    return true;
  }

  bool verify(const Partition& part, const std::vector<CopyPiece>& run) const {
    std::map<int, int> cover;
    for (int c = 0; c < 3; ++c) {
      std::set<int> used;
      for (const auto& p : part.cls[c])
        for (int e : inst_.buyer(p.buyer).demand.edge_ids) {
          if (!used.insert(e).second) return false;
          cover[e]++;
        }
    }
    for (const auto& p : run)
      for (int e : inst_.buyer(p.buyer).demand.edge_ids)
        if (cover[e] != 2) return false;
    for (int c = 0; c < 3; ++c)
      for (auto& chain : chain_components(part.cls[c]))
        if (!component_good(chain)) return false;
    return true;
  }

  // Direct search for a good edge-disjoint subset of the tight reps worth at
  // least two thirds of the run.
  std::vector<std::vector<int>> fallback_chains(const std::vector<CopyPiece>& run) const {
    int lo = run.front().span.lo, hi = run.back().span.hi;
    std::vector<int> cands;
    for (int j : cert_.tight) {
      Span s = span_of(inst_, line_, j);
      if (s.lo >= lo && s.hi <= hi) cands.push_back(j);
    }
    if (cands.size() > 16)
      throw RepairLoopDiverged("double cover: repair failed on a large run");
    Rat opt_run(0);
    for (const auto& p : run) opt_run += inst_.buyer(p.buyer).value;

    std::vector<int> best;
    Rat best_val(-1);
    int n = static_cast<int>(cands.size());
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> chosen;
      Rat val(0);
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) {
          chosen.push_back(cands[i]);
          val += inst_.buyer(cands[i]).value;
        }
      if (val <= best_val || !edge_disjoint(inst_, chosen)) continue;
      std::vector<CopyPiece> pieces;
      for (int j : chosen) pieces.push_back({j, span_of(inst_, line_, j)});
      bool all_good = true;
      for (auto& chain : chain_components(pieces))
        if (!component_good(chain)) all_good = false;
      if (all_good) {
        best = chosen;
        best_val = val;
      }
    }
    if (best.empty() || Rat(3) * best_val < Rat(2) * opt_run)
      throw RepairLoopDiverged("double cover: no good two-thirds subset exists");
    std::vector<CopyPiece> pieces;
    for (int j : best) pieces.push_back({j, span_of(inst_, line_, j)});
    std::vector<std::vector<int>> chains;
    for (auto& chain : chain_components(pieces)) {
      std::vector<int> kept;
      for (const auto& p : chain) kept.push_back(p.buyer);
      chains.push_back(kept);
    }
    return chains;
  }

  const Instance& inst_;
  Line line_;
  DualCertificate cert_;
};

}  // namespace

std::array<std::vector<int>, 3> double_cover_partition(const Instance& inst,
                                                       const DualCertificate& cert) {
  (void)cert;  // the partition re-derives the certificate it binds to
  PathCore core(inst);
  std::array<std::vector<int>, 3> out;
  for (auto& run : core.covered_runs()) {
    std::optional<Partition> part = core.partition_run(run);
    if (!part) throw RepairLoopDiverged("double_cover_partition: repair loop failed");
    for (int c = 0; c < 3; ++c)
      for (const auto& p : part->cls[c]) out[c].push_back(p.buyer);
  }
  return out;
}

PricedOutcome price_path_no_tie(const Instance& inst) {
  if (inst.graph().kind() != GraphKind::Path)
    throw KindError("price_path_no_tie: requires a path");
  PathCore core(inst);
  PricedOutcome out = core.run();
  out.ratio_bound = Rat(3, 2);
  out.note("path-no-tie");
  return out;
}

// ---------------------------------------------------------------------------
// No-tie pricing for the remaining families.

namespace {

struct PartialPrices {
  std::map<int, ExtPrice> prices;
  std::set<int> winners;
  Rat certified;
};

std::vector<std::set<int>> edge_components_of(const Graph& g, const std::set<int>& edges) {
  std::map<int, std::vector<int>> at;
  for (int e : edges) {
    at[g.edge(e).first].push_back(e);
    at[g.edge(e).second].push_back(e);
  }
  std::set<int> done;
  std::vector<std::set<int>> comps;
  for (int e0 : edges) {
    if (done.count(e0)) continue;
    std::set<int> comp;
    std::vector<int> stack = {e0};
    done.insert(e0);
    while (!stack.empty()) {
      int e = stack.back();
      stack.pop_back();
      comp.insert(e);
      for (int v : {g.edge(e).first, g.edge(e).second})
        for (int e2 : at[v])
          if (!done.count(e2)) {
            done.insert(e2);
            stack.push_back(e2);
          }
    }
    comps.push_back(std::move(comp));
  }
  return comps;
}

// The two-thirds path machinery over disjoint path segments of the host.
PartialPrices path_core_on_edges(const Instance& inst, const std::set<int>& edges) {
  PartialPrices out;
  out.certified = Rat(0);
  for (const auto& comp : edge_components_of(inst.graph(), edges)) {
    SubInstance sub = make_sub_instance(inst, comp, GraphKind::Path);
    if (sub.inst.buyer_count() == 0) continue;
    PricedOutcome piece = price_path_no_tie(sub.inst);
    for (int e = 1; e <= sub.inst.edge_count(); ++e)
      if (!piece.prices.at(e).is_blocked())
        out.prices[sub.edge_to_orig[e - 1]] = piece.prices.at(e);
    for (int j : piece.intended_winners) out.winners.insert(sub.buyer_to_orig[j]);
    out.certified += piece.guaranteed_welfare;
  }
  return out;
}

}  // namespace

PricedOutcome price_star_no_tie(const Instance& inst, const Rat& eps) {
  if (inst.graph().kind() != GraphKind::Star)
    throw KindError("price_star_no_tie: requires a star");
  if (!(eps > Rat(0))) throw std::invalid_argument("price_star_no_tie: eps must be positive");
  Rat eps5 = eps / Rat(5);
  auto [opt, alloc] = engine::optimal_allocation(inst);

  PricedOutcome out;
  out.prices = PriceVector::all_blocked(inst.edge_count());
  out.ratio_bound = Rat(2) + eps;
  out.guaranteed_welfare = Rat(0);
  for (int j : alloc.winners) {
    const auto& ids = inst.buyer(j).demand.edge_ids;
    const Rat& v = inst.buyer(j).value;
    if (ids.size() == 1) {
      out.prices.set(ids[0], ExtPrice((Rat(1) - eps5) * v));
      out.guaranteed_welfare += (Rat(1) - eps5) * v;
    } else {
      for (int e : ids) out.prices.set(e, ExtPrice((Rat(1, 2) - eps5) * v));
      out.guaranteed_welfare += (Rat(1, 2) - eps5) * v;
    }
    out.intended_winners.insert(j);
  }
  out.note("star-no-tie");
  return out;
}

PricedOutcome price_spider_no_tie(const Instance& inst, const Rat& eps) {
  GraphKind k = inst.graph().kind();
  if (k != GraphKind::Spider && k != GraphKind::Star && k != GraphKind::Path)
    throw KindError("price_spider_no_tie: requires a spider");
  if (!(eps > Rat(0))) throw std::invalid_argument("price_spider_no_tie: eps must be positive");
  const Graph& g = inst.graph();
  auto [opt, alloc] = engine::optimal_allocation(inst);

  PricedOutcome out;
  out.prices = PriceVector::all_blocked(inst.edge_count());
  out.ratio_bound = Rat(7, 2) + eps;
  out.guaranteed_welfare = Rat(0);
  if (alloc.winners.empty()) return out;

  int center = 0;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) > g.degree(center)) center = v;

  std::map<int, int> leg_of;
  std::vector<std::set<int>> legs;
  for (int e0 : g.incident(center)) {
    std::set<int> leg = {e0};
    int cur = g.other_end(e0, center), last = e0;
    while (g.degree(cur) == 2) {
      int nxt = -1;
      for (int e : g.incident(cur))
        if (e != last) nxt = e;
      leg.insert(nxt);
      cur = g.other_end(nxt, cur);
      last = nxt;
    }
    for (int e : leg) leg_of[e] = static_cast<int>(legs.size());
    legs.push_back(leg);
  }

  Rat eps_prime = eps * opt / Rat(10 * std::max(1, inst.buyer_count()));

  std::set<int> touched_legs;
  for (int j : alloc.winners) {
    bool through = false;
    for (int e : inst.buyer(j).demand.edge_ids) {
      auto [a, b] = g.edge(e);
      if (a == center || b == center) through = true;
    }
    if (!through) continue;

    std::set<int> path_edges = inst.buyer(j).demand.edge_set();
    std::set<int> center_edges, interior, rest;
    std::set<int> leg_ids;
    for (int e : path_edges) leg_ids.insert(leg_of[e]);
    for (int e : path_edges) {
      auto [a, b] = g.edge(e);
      if (a == center || b == center) center_edges.insert(e);
      else interior.insert(e);
    }
    for (int leg : leg_ids) {
      touched_legs.insert(leg);
      for (int e : legs[leg])
        if (!path_edges.count(e)) rest.insert(e);
    }

    const Rat& v = inst.buyer(j).value;
    Rat interior_opt(0);
    if (!interior.empty()) {
      SubInstance sub = make_sub_instance(inst, interior, GraphKind::General);
      interior_opt = engine::optimal_allocation(sub.inst, 1 << 20).first;
    }
    Rat p1_center = (v - interior_opt) / Rat(2) - eps_prime;

    std::set<int> p2_edges = rest;
    for (int e : interior) p2_edges.insert(e);
    PartialPrices p2 = path_core_on_edges(inst, p2_edges);

    if (p1_center > p2.certified && p1_center > Rat(0)) {
      // Sell one of the center edges at the slack of the kept path; the
      // interior carries its dual prices plus a bump, the rest is blocked.
      Rat bump = eps_prime / Rat(static_cast<long>(interior.size()) + 1);
      if (!interior.empty()) {
        SubInstance sub = make_sub_instance(inst, interior, GraphKind::General);
        engine::LPSolution lp = engine::solve_primal_dual(sub.inst);
        for (int e = 1; e <= sub.inst.edge_count(); ++e)
          out.prices.set(sub.edge_to_orig[e - 1], ExtPrice(lp.dual_p[e - 1] + bump));
      }
      for (int e : center_edges) out.prices.set(e, ExtPrice(p1_center));
      out.intended_winners.insert(j);
      out.guaranteed_welfare += p1_center;
      out.note("spider-no-tie:center-slack");
    } else {
      for (auto& [e, p] : p2.prices) out.prices.set(e, p);
      for (int w : p2.winners) out.intended_winners.insert(w);
      out.guaranteed_welfare += p2.certified;
      out.note("spider-no-tie:legs-recursed");
    }
  }

  // Legs no optimal path enters through the center: their center edges stay
  // blocked (the optimum never uses them), the remainders are plain paths.
  std::set<int> untouched;
  for (size_t leg = 0; leg < legs.size(); ++leg) {
    if (touched_legs.count(static_cast<int>(leg))) continue;
    for (int e : legs[leg]) {
      auto [a, b] = g.edge(e);
      if (a != center && b != center) untouched.insert(e);
    }
  }
  if (!untouched.empty()) {
    PartialPrices free_legs = path_core_on_edges(inst, untouched);
    for (auto& [e, p] : free_legs.prices) out.prices.set(e, p);
    for (int w : free_legs.winners) out.intended_winners.insert(w);
    out.guaranteed_welfare += free_legs.certified;
  }
  return out;
}

PricedOutcome price_tree_no_tie(const Instance& inst, const Rat& eps) {
  GraphKind k = inst.graph().kind();
  if (k == GraphKind::Path || k == GraphKind::Star || k == GraphKind::Spider)
    return price_spider_no_tie(inst, eps);
  if (k != GraphKind::Tree) throw KindError("price_tree_no_tie: requires a tree");
  auto [opt, alloc] = engine::optimal_allocation(inst);

  PricedOutcome out;
  out.prices = PriceVector::all_blocked(inst.edge_count());
  out.ratio_bound = Rat(7) + eps;
  out.guaranteed_welfare = Rat(0);
  if (alloc.winners.empty()) return out;

  const Graph& g = inst.graph();
  std::set<int> opt_edges;
  for (int j : alloc.winners)
    for (int e : inst.buyer(j).demand.edge_ids) opt_edges.insert(e);

  for (const auto& comp : edge_components_of(g, opt_edges)) {
    std::vector<int> comp_buyers;
    std::vector<std::vector<int>> comp_paths;
    for (int j : alloc.winners)
      if (comp.count(inst.buyer(j).demand.edge_ids[0])) {
        comp_buyers.push_back(j);
        comp_paths.push_back(inst.buyer(j).demand.edge_ids);
      }
    auto [side_a, side_b] = pricing::tree_to_spiders(g, comp_paths);
    Rat va(0), vb(0);
    for (int i : side_a) va += inst.buyer(comp_buyers[i]).value;
    for (int i : side_b) vb += inst.buyer(comp_buyers[i]).value;
    const auto& keep = va >= vb ? side_a : side_b;
    std::set<int> kept_edges;
    for (int i : keep)
      for (int e : comp_paths[i]) kept_edges.insert(e);
    for (const auto& spider : edge_components_of(g, kept_edges)) {
      SubInstance sub = make_sub_instance(inst, spider, GraphKind::Spider);
      if (sub.inst.buyer_count() == 0) continue;
      PricedOutcome piece = price_spider_no_tie(sub.inst, eps);
      for (int e = 1; e <= sub.inst.edge_count(); ++e)
        if (!piece.prices.at(e).is_blocked())
          out.prices.set(sub.edge_to_orig[e - 1], piece.prices.at(e));
      for (int j : piece.intended_winners) out.intended_winners.insert(sub.buyer_to_orig[j]);
      out.guaranteed_welfare += piece.guaranteed_welfare;
    }
  }
  out.note("tree-no-tie:spider-halves");
  return out;
}

PricedOutcome price_cycle_no_tie(const Instance& inst) {
  if (inst.graph().kind() != GraphKind::Cycle)
    throw KindError("price_cycle_no_tie: requires a cycle");
  int m = inst.edge_count();
  auto [opt, alloc] = engine::optimal_allocation_lex(inst, engine::LexRefine::CountThenCover);

  PricedOutcome out;
  out.prices = PriceVector::all_blocked(m);
  out.ratio_bound = Rat(2);
  out.guaranteed_welfare = Rat(0);
  if (alloc.winners.empty()) {
    out.note("cycle-no-tie:empty");
    return out;
  }

  std::set<int> covered;
  for (int j : alloc.winners)
    for (int e : inst.buyer(j).demand.edge_ids) covered.insert(e);

  auto apply_partial = [&](const PartialPrices& p) {
    for (auto& [e, pe] : p.prices) out.prices.set(e, pe);
    for (int j : p.winners) out.intended_winners.insert(j);
    out.guaranteed_welfare += p.certified;
  };

  if (static_cast<int>(covered.size()) < m) {
    out.note("cycle-no-tie:case1-uncovered");
    apply_partial(path_core_on_edges(inst, covered));
    return out;
  }

  std::vector<int> winners(alloc.winners.begin(), alloc.winners.end());
  if (winners.size() >= 4) {
    int min_j = winners[0];
    for (int j : winners)
      if (inst.buyer(j).value < inst.buyer(min_j).value) min_j = j;
    std::set<int> arc;
    for (int e = 1; e <= m; ++e) arc.insert(e);
    for (int e : inst.buyer(min_j).demand.edge_ids) arc.erase(e);
    out.note("cycle-no-tie:case2-drop-min");
    apply_partial(path_core_on_edges(inst, arc));
    return out;
  }

  // Full-value extraction from an arc: the arc's own kept optimum priced by
  // strict separation, valid when every chain of it is good.
  auto try_full_arc = [&](const std::set<int>& arc_edges) -> std::optional<PartialPrices> {
    SubInstance sub = make_sub_instance(inst, arc_edges, GraphKind::Path);
    if (sub.inst.buyer_count() == 0) return std::nullopt;
    try {
      PathCore core(sub.inst);
      Line line = line_of(sub.inst.graph());
      PartialPrices result;
      result.certified = Rat(0);
      std::vector<CopyPiece> pieces;
      for (int j : core.cert().winners) pieces.push_back({j, span_of(sub.inst, line, j)});
      for (auto& chain : chain_components(pieces)) {
        std::vector<int> kept;
        for (const auto& p : chain) kept.push_back(p.buyer);
        if (!is_good_set(sub.inst, kept, core.cert())) return std::nullopt;
        PriceVector pv = good_set_prices(sub.inst, kept, core.cert());
        for (int e = 1; e <= sub.inst.edge_count(); ++e)
          if (!pv.at(e).is_blocked()) result.prices[sub.edge_to_orig[e - 1]] = pv.at(e);
        for (int j : kept) {
          result.winners.insert(sub.buyer_to_orig[j]);
          result.certified += sub.inst.buyer(j).value;
        }
      }
      return result;
    } catch (const RepairLoopDiverged&) {
      return std::nullopt;
    } catch (const SystemInfeasible&) {
      return std::nullopt;
    }
  };

  if (winners.size() == 2) {
    int big = winners[0], small = winners[1];
    if (inst.buyer(big).value < inst.buyer(small).value) std::swap(big, small);
    for (int keep : {big, small}) {
      auto full = try_full_arc(inst.buyer(keep).demand.edge_set());
      if (full && Rat(2) * full->certified >= opt) {
        out.note("cycle-no-tie:case3-keep-one");
        apply_partial(*full);
        return out;
      }
    }
    std::set<int> arc;
    for (int e = 1; e <= m; ++e) arc.insert(e);
    for (int e : inst.buyer(small).demand.edge_ids) arc.erase(e);
    out.note("cycle-no-tie:case3-fallback");
    apply_partial(path_core_on_edges(inst, arc));
    return out;
  }

  // Exactly three paths covering the cycle.
  Rat quarter = opt / Rat(4);
  int min_j = winners[0];
  for (int j : winners)
    if (inst.buyer(j).value < inst.buyer(min_j).value) min_j = j;
  if (inst.buyer(min_j).value < quarter) {
    std::set<int> arc;
    for (int e = 1; e <= m; ++e) arc.insert(e);
    for (int e : inst.buyer(min_j).demand.edge_ids) arc.erase(e);
    out.note("cycle-no-tie:case4-drop-small");
    apply_partial(path_core_on_edges(inst, arc));
    return out;
  }
  std::vector<int> order = winners;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return inst.buyer(a).value < inst.buyer(b).value; });
  for (int dropped : order) {
    std::set<int> arc;
    for (int e = 1; e <= m; ++e) arc.insert(e);
    for (int e : inst.buyer(dropped).demand.edge_ids) arc.erase(e);
    auto full = try_full_arc(arc);
    if (full && Rat(2) * full->certified >= opt) {
      out.note("cycle-no-tie:case4-keep-pair");
      apply_partial(*full);
      return out;
    }
  }
  {
    std::set<int> arc;
    for (int e = 1; e <= m; ++e) arc.insert(e);
    for (int e : inst.buyer(min_j).demand.edge_ids) arc.erase(e);
    out.note("cycle-no-tie:case4-two-thirds");
    apply_partial(path_core_on_edges(inst, arc));
  }
  return out;
}

}  // namespace tollbooth::notie
