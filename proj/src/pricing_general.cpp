#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "tollbooth/pricing.hpp"
#include "tollbooth/rng.hpp"

namespace tollbooth::pricing {

namespace {

Rat value_of(const Instance& inst, const std::vector<int>& js) {
  Rat v(0);
  for (int j : js) v += inst.buyer(j).value;
  return v;
}

// Max-value pairwise edge-disjoint subset of the listed buyers.
std::vector<int> best_independent(const Instance& inst, const std::vector<int>& candidates) {
  std::vector<int> order = candidates;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return inst.buyer(a).value > inst.buyer(b).value; });
  std::vector<std::set<int>> edge_sets;
  for (int j : order) edge_sets.push_back(inst.buyer(j).demand.edge_set());
  auto conflict = [&](size_t a, size_t b) {
    for (int e : edge_sets[a])
      if (edge_sets[b].count(e)) return true;
    return false;
  };
  std::vector<int> best, cur;
  Rat best_val(0);
  std::function<void(size_t, Rat)> rec = [&](size_t idx, Rat val) {
    if (val > best_val) {
      best_val = val;
      best.clear();
      for (int i : cur) best.push_back(order[i]);
    }
    if (idx >= order.size()) return;
    Rat rest(0);
    for (size_t t = idx; t < order.size(); ++t) rest += inst.buyer(order[t]).value;
    if (val + rest <= best_val) return;
    bool free = true;
    for (int i : cur)
      if (conflict(i, idx)) free = false;
    if (free) {
      cur.push_back(static_cast<int>(idx));
      rec(idx + 1, val + inst.buyer(order[idx]).value);
      cur.pop_back();
    }
    rec(idx + 1, val);
  };
  rec(0, Rat(0));
  return best;
}

}  // namespace

PricedOutcome price_general(const Instance& inst, uint64_t seed) {
  GraphKind kind = inst.graph().kind();
  if (kind != GraphKind::General && kind != GraphKind::MultiPath)
    throw KindError("price_general: requires a general or multipath graph");
  int m = inst.edge_count();
  int n = std::max(2, inst.buyer_count());

  PricedOutcome out;
  out.prices = PriceVector::all_blocked(m);
  out.guaranteed_welfare = Rat(0);
  // alpha = 1/10: short/sparse threshold m^{2/5}, survivor length m^{1/5}.
  mpz_class t_sparse = ceil_root(mpz_class(m) * m, 5);
  mpz_class t_len = ceil_root(mpz_class(m), 5);
  long log_m = ceil_log2(mpz_class(std::max(2, m)));
  long log_n = ceil_log2(mpz_class(n));
  out.ratio_bound = Rat(t_sparse) * Rat(mpz_class((1 + log_m) * (1 + log_m) * (1 + log_n)));

  auto [opt, alloc] = engine::optimal_allocation(inst);
  if (alloc.winners.empty()) {
    out.note("general:empty");
    return out;
  }

  // Length buckets [2^{k-1}, 2^k); keep the heaviest bucket.
  std::map<long, std::vector<int>> by_len;
  for (int j : alloc.winners) {
    long len = static_cast<long>(inst.buyer(j).demand.edge_ids.size());
    long k = 1;
    while ((1L << k) <= len) k++;
    by_len[k].push_back(j);
  }
  std::vector<int> q_star;
  Rat q_star_val(-1);
  long k_star = 1;
  for (auto& [k, js] : by_len) {
    Rat v = value_of(inst, js);
    if (v > q_star_val) {
      q_star_val = v;
      q_star = js;
      k_star = k;
    }
  }
  long big_l = 1L << (k_star - 1);  // path lengths in [big_l, 2*big_l)

  // Value buckets (v*/2^t, v*/2^{t-1}]; keep the heaviest.
  Rat v_max(0);
  for (int j : q_star) v_max = max(v_max, inst.buyer(j).value);
  std::vector<int> q_prime;
  Rat q_prime_val(-1);
  long t_buckets = 2 * std::max(1L, log_n);
  for (long t = 1; t <= t_buckets; ++t) {
    mpz_class hi_den = mpz_class(1) << static_cast<unsigned>(t - 1);
    mpz_class lo_den = mpz_class(1) << static_cast<unsigned>(t);
    Rat hi = v_max / Rat(hi_den);
    Rat lo = v_max / Rat(lo_den);
    std::vector<int> js;
    for (int j : q_star)
      if (inst.buyer(j).value > lo && inst.buyer(j).value <= hi) js.push_back(j);
    Rat v = value_of(inst, js);
    if (v > q_prime_val) {
      q_prime_val = v;
      q_prime = js;
    }
  }
  if (q_prime.empty()) q_prime = {q_star[0]}, q_prime_val = inst.buyer(q_star[0]).value;

  auto price_single_path = [&](int j) {
    std::set<int> edges = inst.buyer(j).demand.edge_set();
    SubInstance sub = make_sub_instance(inst, edges, GraphKind::Path);
    PricedOutcome piece = price_path(sub.inst);
    for (int e = 1; e <= sub.inst.edge_count(); ++e)
      out.prices.set(sub.edge_to_orig[e - 1], piece.prices.at(e));
    for (int w : piece.intended_winners) out.intended_winners.insert(sub.buyer_to_orig[w]);
    out.guaranteed_welfare = piece.guaranteed_welfare;
  };

  // Shortcut: few candidate paths; sell the single best one at full value.
  mpz_class q_size(static_cast<long>(q_prime.size()));
  mpz_class m2 = mpz_class(m) * m;
  auto pow5 = [](const mpz_class& x) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), 5);
    return r;
  };
  if (pow5(q_size) < m2) {
    int best = q_prime[0];
    for (int j : q_prime)
      if (inst.buyer(j).value > inst.buyer(best).value) best = j;
    price_single_path(best);
    out.note("general:few_paths");
    return out;
  }

  // Shortcut: short paths; per-edge prices v(Q)/2L sell at least one edge of
  // every candidate.
  if (pow5(mpz_class(big_l)) < m2) {
    Rat certified(0);
    for (int j : q_prime) {
      Rat per_edge = inst.buyer(j).value / Rat(2 * big_l);
      for (int e : inst.buyer(j).demand.edge_ids) out.prices.set(e, ExtPrice(per_edge));
      certified += per_edge;
      out.intended_winners.insert(j);
    }
    out.guaranteed_welfare = certified;
    out.note("general:small_lengths");
    return out;
  }

  // Seeded half-sampling of the candidates until both concentration events
  // hold: enough value survives, and no buyer path trades with too many of
  // the sampled paths.
  Rng rng(seed);
  std::vector<int> sample;
  bool sampled_ok = false;
  long touch_cap = 2 * std::max(1L, log_n);
  for (int attempt = 0; attempt < 32 && !sampled_ok; ++attempt) {
    sample.clear();
    for (int j : q_prime)
      if (rng.coin()) sample.push_back(j);
    if (Rat(3) * value_of(inst, sample) < q_prime_val) continue;
    std::set<int> sample_edges;
    for (int j : sample)
      for (int e : inst.buyer(j).demand.edge_ids) sample_edges.insert(e);
    sampled_ok = true;
    for (int j = 0; j < inst.buyer_count() && sampled_ok; ++j) {
      bool inside = true;
      for (int e : inst.buyer(j).demand.edge_ids)
        if (!sample_edges.count(e)) inside = false;
      if (!inside) continue;
      long touches = 0;
      std::set<int> je = inst.buyer(j).demand.edge_set();
      for (int s : sample) {
        for (int e : inst.buyer(s).demand.edge_ids)
          if (je.count(e)) {
            touches++;
            break;
          }
      }
      if (touches > touch_cap) sampled_ok = false;
    }
  }
  if (!sampled_ok) {
    // Degraded run: certify only the best single candidate.
    int best = q_prime[0];
    for (int j : q_prime)
      if (inst.buyer(j).value > inst.buyer(best).value) best = j;
    price_single_path(best);
    out.note("general:sample-degraded");
    return out;
  }

  std::set<int> sample_edges;
  for (int j : sample)
    for (int e : inst.buyer(j).demand.edge_ids) sample_edges.insert(e);

  // Short paths that survive the zero prices inside the sampled union.
  std::vector<int> short_inside;
  for (int j = 0; j < inst.buyer_count(); ++j) {
    const auto& ids = inst.buyer(j).demand.edge_ids;
    if (mpz_class(static_cast<long>(ids.size())) >= t_len) continue;
    bool inside = true;
    for (int e : ids)
      if (!sample_edges.count(e)) inside = false;
    if (inside) short_inside.push_back(j);
  }
  std::vector<int> hat = best_independent(inst, short_inside);
  Rat hat_val = value_of(inst, hat);
  Rat sample_val = value_of(inst, sample);

  if (hat_val * Rat(100) * Rat(t_len) >= sample_val) {
    // Case 1: the short survivors carry enough value on their own.
    Rat certified(0);
    for (int e : sample_edges) out.prices.set(e, ExtPrice(Rat(0)));
    for (int j : hat) {
      Rat per_edge = inst.buyer(j).value / Rat(t_len);
      for (int e : inst.buyer(j).demand.edge_ids) out.prices.set(e, ExtPrice(per_edge));
      certified += per_edge;
      out.intended_winners.insert(j);
    }
    // Edges of the sample not under a short survivor stay blocked: only the
    // chosen short paths can sell.
    for (int e : sample_edges) {
      bool under_hat = false;
      for (int j : hat)
        for (int e2 : inst.buyer(j).demand.edge_ids)
          if (e2 == e) under_hat = true;
      if (!under_hat) out.prices.set(e, ExtPrice::blocked());
    }
    out.guaranteed_welfare = certified;
    out.note("general:case1-short-survivors");
    return out;
  }

  // Case 2: two-stage prices. Stage one puts v(Q) on the edges of every
  // chosen short path and zero elsewhere inside the sample; stage two adds
  // v(Q)/4L along every sampled path.
  std::vector<Rat> price(m + 1, Rat(0));
  std::vector<bool> inside(m + 1, false);
  for (int e : sample_edges) inside[e] = true;
  for (int j : hat)
    for (int e : inst.buyer(j).demand.edge_ids) price[e] += inst.buyer(j).value;
  for (int j : sample) {
    Rat inc = inst.buyer(j).value / Rat(4 * big_l);
    for (int e : inst.buyer(j).demand.edge_ids) price[e] += inc;
  }
  for (int e = 1; e <= m; ++e)
    if (inside[e]) out.prices.set(e, ExtPrice(price[e]));

  // Verify the survivors and the short-path lockout exactly.
  std::vector<int> survivors;
  for (int j : sample) {
    ExtPrice pq = out.prices.path_price(inst.buyer(j).demand);
    if (!pq.is_blocked() && pq.finite() < inst.buyer(j).value) survivors.push_back(j);
    if (!pq.is_blocked() && pq.finite() == inst.buyer(j).value) out.note("general:tie-event");
  }
  for (int j : short_inside) {
    ExtPrice pq = out.prices.path_price(inst.buyer(j).demand);
    if (!pq.is_blocked() && pq.finite() < inst.buyer(j).value)
      throw std::logic_error("price_general: a short path survived the two-stage prices");
    if (!pq.is_blocked() && pq.finite() == inst.buyer(j).value) out.note("general:tie-event");
  }
  if (survivors.empty())
    throw std::logic_error("price_general: no sampled path survived the two-stage prices");

  Rat min_inc = inst.buyer(sample[0]).value / Rat(4 * big_l);
  for (int j : sample) min_inc = min(min_inc, inst.buyer(j).value / Rat(4 * big_l));
  // Every survivor forces a sale intersecting it, and each sold path meets at
  // most touch_cap sampled paths (verified above), so the number of sold
  // paths is at least |survivors| / touch_cap; each has >= t_len edges.
  mpz_class taken_lb =
      (mpz_class(static_cast<long>(survivors.size())) + touch_cap - 1) / touch_cap;
  out.guaranteed_welfare = Rat(taken_lb) * Rat(t_len) * min_inc;
  for (int j : survivors) out.intended_winners.insert(j);
  out.note("general:case2-two-stage");
  return out;
}

PricedOutcome price_setpacking_sqrt(const Instance& inst, int hitting_budget) {
  int m = inst.edge_count();
  auto [opt, alloc] = engine::optimal_allocation(inst);

  PricedOutcome out;
  out.prices = PriceVector::all_blocked(m);
  out.guaranteed_welfare = Rat(0);
  out.ratio_bound = Rat(100) * Rat(ceil_root(mpz_class(std::max(1, m)), 2));
  if (alloc.winners.empty()) {
    out.note("setpacking:empty");
    return out;
  }

  std::set<int> s_hat;
  for (int j : alloc.winners)
    for (int e : inst.buyer(j).demand.edge_ids) s_hat.insert(e);
  Rat base = opt / (Rat(100) * Rat(static_cast<long>(s_hat.size())));
  for (int e : s_hat) out.prices.set(e, ExtPrice(base));

  // Demand sets surviving the uniform stage-one prices.
  std::vector<int> survivors;
  std::vector<std::set<int>> survivor_sets;
  for (int j = 0; j < inst.buyer_count(); ++j) {
    ExtPrice pq = out.prices.path_price(inst.buyer(j).demand);
    if (!pq.is_blocked() && pq.finite() < inst.buyer(j).value) {
      survivors.push_back(j);
      survivor_sets.push_back(inst.buyer(j).demand.edge_set());
    }
  }
  if (survivors.empty())
    throw std::logic_error("price_setpacking_sqrt: no demand set survived the base prices");
  std::set<int> hitting = min_hitting_set(survivor_sets, hitting_budget);

  mpz_class h(static_cast<long>(hitting.size()));
  bool large_hitting = h * h > mpz_class(m);
  if (large_hitting) {
    // Every run must sell a hitting set's worth of items at the base price.
    out.guaranteed_welfare = Rat(h) * base;
    out.note("setpacking:case1-large-hitting-set");
  } else {
    Rat bump = opt / (Rat(100) * Rat(h));
    for (int e : hitting) out.prices.set(e, ExtPrice(base + bump));
    out.guaranteed_welfare = bump;
    out.note("setpacking:case2-raised-hitting-set");
    bool someone = false;
    for (int j = 0; j < inst.buyer_count(); ++j) {
      ExtPrice pq = out.prices.path_price(inst.buyer(j).demand);
      if (!pq.is_blocked() && pq.finite() < inst.buyer(j).value) someone = true;
    }
    if (!someone)
      throw std::logic_error("price_setpacking_sqrt: raised prices priced everyone out");
  }
  for (int j : survivors) {
    ExtPrice pq = out.prices.path_price(inst.buyer(j).demand);
    if (!pq.is_blocked() && pq.finite() <= inst.buyer(j).value) out.intended_winners.insert(j);
  }
  return out;
}

}  // namespace tollbooth::pricing
