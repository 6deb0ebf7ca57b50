#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tollbooth/augmentation.hpp"
#include "tollbooth/instances.hpp"
#include "tollbooth/no_tie.hpp"
#include "tollbooth/pricing.hpp"
#include "tollbooth/serialization.hpp"
#include "tollbooth/simulator.hpp"

namespace py = pybind11;
namespace tb = tollbooth;

namespace {

tb::Instance instance_from_str(const std::string& text) {
  return tb::io::instance_from_json(nlohmann::json::parse(text));
}

std::string instance_to_str(const tb::Instance& inst) {
  return tb::io::instance_to_json(inst).dump();
}

std::vector<std::string> prices_to_strs(const tb::PriceVector& p) {
  std::vector<std::string> out;
  for (const auto& x : p.raw()) out.push_back(x.str());
  return out;
}

tb::PriceVector prices_from_strs(const std::vector<std::string>& strs) {
  std::vector<tb::ExtPrice> v;
  for (const auto& s : strs) {
    if (s == "inf") v.push_back(tb::ExtPrice::blocked());
    else v.push_back(tb::ExtPrice(tb::Rat::parse(s)));
  }
  return tb::PriceVector(std::move(v));
}

py::dict outcome_to_dict(const tb::pricing::PricedOutcome& out) {
  py::dict d;
  d["prices"] = prices_to_strs(out.prices);
  d["intended_winners"] = std::vector<int>(out.intended_winners.begin(),
                                           out.intended_winners.end());
  d["guaranteed_welfare"] = out.guaranteed_welfare.str();
  d["ratio_bound"] = out.ratio_bound.str();
  d["trace"] = out.trace;
  return d;
}

tb::TieMode mode_of(const std::string& s) {
  if (s == "seller") return tb::TieMode::SellerBreaks;
  if (s == "buyer") return tb::TieMode::BuyerBreaks;
  throw std::invalid_argument("tie mode must be 'seller' or 'buyer'");
}

}  // namespace

PYBIND11_MODULE(_tollbooth, m) {
  m.doc() = "item pricing on graphs: exact solvers, pricers, and the adversarial simulator";

  m.def("validate_instance", [](const std::string& inst) {
    return instance_from_str(inst).validate();
  });

  m.def("solve_primal_dual", [](const std::string& inst_s) {
    auto inst = instance_from_str(inst_s);
    auto sol = tb::engine::solve_primal_dual(inst);
    py::dict d;
    std::vector<std::string> y, p;
    for (const auto& v : sol.primal_y) y.push_back(v.str());
    for (const auto& v : sol.dual_p) p.push_back(v.str());
    d["objective"] = sol.objective.str();
    d["primal_y"] = y;
    d["dual_p"] = p;
    return d;
  });

  m.def("optimal_allocation", [](const std::string& inst_s) {
    auto inst = instance_from_str(inst_s);
    auto [opt, alloc] = tb::engine::optimal_allocation(inst);
    py::dict d;
    d["value"] = opt.str();
    d["winners"] = std::vector<int>(alloc.winners.begin(), alloc.winners.end());
    return d;
  });

  m.def("price", [](const std::string& algorithm, const std::string& inst_s,
                    const std::string& eps, uint64_t seed) {
    auto inst = instance_from_str(inst_s);
    tb::Rat e = tb::Rat::parse(eps);
    tb::pricing::PricedOutcome out;
    if (algorithm == "path") out = tb::pricing::price_path(inst);
    else if (algorithm == "star") out = tb::pricing::price_star(inst);
    else if (algorithm == "spider") out = tb::pricing::price_spider(inst);
    else if (algorithm == "tree") out = tb::pricing::price_tree(inst);
    else if (algorithm == "cycle") out = tb::pricing::price_cycle(inst);
    else if (algorithm == "outerplanar") out = tb::pricing::price_outerplanar(inst);
    else if (algorithm == "general") out = tb::pricing::price_general(inst, seed);
    else if (algorithm == "setpacking") out = tb::pricing::price_setpacking_sqrt(inst);
    else if (algorithm == "path-no-tie") out = tb::notie::price_path_no_tie(inst);
    else if (algorithm == "star-no-tie") out = tb::notie::price_star_no_tie(inst, e);
    else if (algorithm == "spider-no-tie") out = tb::notie::price_spider_no_tie(inst, e);
    else if (algorithm == "tree-no-tie") out = tb::notie::price_tree_no_tie(inst, e);
    else if (algorithm == "cycle-no-tie") out = tb::notie::price_cycle_no_tie(inst);
    else throw std::invalid_argument("unknown algorithm " + algorithm);
    return outcome_to_dict(out);
  }, py::arg("algorithm"), py::arg("instance"), py::arg("eps") = "1/10", py::arg("seed") = 0);

  m.def("simulate", [](const std::string& inst_s, const std::vector<std::string>& prices,
                       const std::vector<int>& order, const std::string& tie,
                       const std::vector<int>& seller_winners,
                       const std::map<int, bool>& buyer_decisions) {
    auto inst = instance_from_str(inst_s);
    auto p = prices_from_strs(prices);
    std::set<int> winners(seller_winners.begin(), seller_winners.end());
    auto res = tb::sim::simulate(inst, p, order, mode_of(tie),
                                 tie == "seller" ? &winners : nullptr,
                                 tie == "buyer" ? &buyer_decisions : nullptr);
    py::dict d;
    d["welfare"] = res.welfare.str();
    d["revenue"] = res.revenue.str();
    d["winners"] = std::vector<int>(res.winners.begin(), res.winners.end());
    return d;
  }, py::arg("instance"), py::arg("prices"), py::arg("order"), py::arg("tie") = "seller",
     py::arg("seller_winners") = std::vector<int>{},
     py::arg("buyer_decisions") = std::map<int, bool>{});

  m.def("worst_case_welfare", [](const std::string& inst_s,
                                 const std::vector<std::string>& prices,
                                 const std::string& tie, int cap) {
    auto inst = instance_from_str(inst_s);
    auto rep = tb::sim::worst_case_welfare(inst, prices_from_strs(prices), mode_of(tie), cap);
    py::dict d;
    d["worst_welfare"] = rep.worst_welfare.str();
    d["witness_order"] = rep.witness_order;
    d["revenue"] = rep.revenue.str();
    d["states_explored"] = rep.states_explored;
    return d;
  }, py::arg("instance"), py::arg("prices"), py::arg("tie") = "seller", py::arg("cap") = 12);

  m.def("competitive_ratio", [](const std::string& inst_s,
                                const std::vector<std::string>& prices, const std::string& tie) {
    auto inst = instance_from_str(inst_s);
    auto rep = tb::sim::competitive_ratio(inst, prices_from_strs(prices), mode_of(tie));
    py::dict d;
    d["infinite"] = rep.infinite;
    d["opt"] = rep.opt.str();
    d["worst_welfare"] = rep.worst_welfare.str();
    if (!rep.infinite) d["ratio"] = rep.ratio.str();
    return d;
  }, py::arg("instance"), py::arg("prices"), py::arg("tie") = "seller");

  m.def("gen_random", [](const std::string& kind, int m, int n, uint64_t seed) {
    return instance_to_str(tb::gen::gen_random(tb::kind_from_name(kind), m, n, 1, 10, seed));
  });
  m.def("gen_random_sets", [](int m, int n, uint64_t seed) {
    return instance_to_str(tb::gen::gen_random_sets(m, n, 1, 10, seed));
  });
  m.def("gen_star_lb", [](const std::string& eps) {
    return instance_to_str(tb::gen::gen_star_lb(tb::Rat::parse(eps)));
  });
  m.def("gen_path_no_tie_lb", [] { return instance_to_str(tb::gen::gen_path_no_tie_lb()); });
  m.def("gen_cycle_lb", [](const std::string& eps) {
    return instance_to_str(tb::gen::gen_cycle_lb(tb::Rat::parse(eps)));
  });
  m.def("gen_tree_d_integral", [](int d) {
    return instance_to_str(tb::gen::gen_tree_d_integral(d));
  });
  m.def("gen_setpacking_hardness", [](int r) {
    return instance_to_str(tb::gen::gen_setpacking_hardness(r));
  });

  m.def("min_hitting_set", [](const std::vector<std::set<int>>& sets, int budget) {
    auto h = tb::pricing::min_hitting_set(sets, budget);
    return std::vector<int>(h.begin(), h.end());
  }, py::arg("sets"), py::arg("budget") = 24);

  m.def("adversary_for", [](const std::string& tag, const std::string& inst_s,
                            const std::vector<std::string>& prices) {
    auto inst = instance_from_str(inst_s);
    auto adv = tb::gen::adversary_for(tag, inst, prices_from_strs(prices));
    py::dict d;
    d["order"] = adv.order;
    d["tie_decisions"] = adv.tie_decisions;
    return d;
  });
}
