// Command-line front end: instance generators, pricing algorithms, the
// adversarial-order simulator, and the bundled verification suites.

#include <iostream>

#include "CLI11.hpp"
#include "tollbooth/augmentation.hpp"
#include "tollbooth/instances.hpp"
#include "tollbooth/no_tie.hpp"
#include "tollbooth/pricing.hpp"
#include "tollbooth/serialization.hpp"
#include "tollbooth/rng.hpp"
#include "tollbooth/simulator.hpp"

namespace tb = tollbooth;
using tb::Rat;
using json = nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitGuarantee = 4;

Rat parse_rat(const std::string& s) { return Rat::parse(s); }

json outcome_to_json(const tb::pricing::PricedOutcome& out) {
  json j;
  j["prices"] = tb::io::prices_to_json(out.prices);
  j["intendedWinners"] = std::vector<int>(out.intended_winners.begin(),
                                          out.intended_winners.end());
  j["guaranteedWelfare"] = out.guaranteed_welfare.str();
  j["ratioBound"] = out.ratio_bound.str();
  j["trace"] = out.trace;
  return j;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << j.dump(2) << "\n";
  else
    tb::io::write_file(out_path, j);
}

std::string row(const std::string& name, bool pass, const std::string& detail) {
  return (pass ? "pass  " : "FAIL  ") + name + "  " + detail;
}

int run_gen(const std::string& family, const std::string& kind, int m, int n,
            const std::string& eps_s, int a, int d, int r, int c, uint64_t seed,
            const std::string& out_path) {
  json meta;
  meta["family"] = family;
  meta["seed"] = seed;
  tb::Instance inst(tb::Graph(tb::GraphKind::General, 1, {}), {});
  if (family == "random") {
    inst = tb::gen::gen_random(tb::kind_from_name(kind), m, n, 1, 10, seed);
    meta["kind"] = kind;
  } else if (family == "random-sets") {
    inst = tb::gen::gen_random_sets(m, n, 1, 10, seed);
  } else if (family == "star-lb") {
    inst = tb::gen::gen_star_lb(parse_rat(eps_s));
    meta["cap"] = "2+eps";
  } else if (family == "path-no-tie-lb") {
    inst = tb::gen::gen_path_no_tie_lb();
    meta["cap"] = "2";
  } else if (family == "cycle-lb") {
    inst = tb::gen::gen_cycle_lb(parse_rat(eps_s));
    meta["cap"] = "k+1";
  } else if (family == "tree-d") {
    inst = tb::gen::gen_tree_d_integral(d);
  } else if (family == "lab") {
    auto [li, fam] = tb::gen::gen_lab(a, seed);
    inst = li;
    meta["a"] = fam.a;
    meta["b"] = fam.b;
    meta["cap"] = "(2+eps)*sqrt(a)";
  } else if (family == "grid") {
    auto gi = tb::gen::gen_grid_instance(a, seed);
    inst = gi.inst;
    meta["a"] = gi.a;
  } else if (family == "outerplanar-lb") {
    auto ol = tb::gen::gen_outerplanar_lb(a, seed);
    inst = ol.inst;
    meta["a"] = ol.a;
  } else if (family == "setpacking-hardness") {
    inst = tb::gen::gen_setpacking_hardness(r);
    meta["r"] = r;
    meta["cap"] = "3/r";
  } else if (family == "congestion-lb") {
    inst = tb::aug::gen_congestion_lb(c, r);
    meta["c"] = c;
    meta["r"] = r;
    meta["cap"] = "c*binom(r-1,c)";
  } else if (family == "multicopy-lab") {
    auto ml = tb::aug::gen_multicopy_lab(c, a, seed);
    inst = ml.inst;
    meta["c"] = c;
    meta["a"] = a;
    meta["b"] = ml.b;
  } else {
    std::cerr << "unknown family " << family << "\n";
    return kExitUsage;
  }
  auto violations = inst.validate();
  if (!violations.empty()) {
    for (auto& v : violations) std::cerr << v << "\n";
    return kExitGuarantee;
  }
  json j = tb::io::instance_to_json(inst);
  j["meta"] = meta;
  emit(j, out_path);
  if (!out_path.empty()) {
    // Sidecar with the family tag, parameters, and cap formula.
    std::string side = out_path + ".meta.json";
    tb::io::write_file(side, meta);
  }
  return 0;
}

int run_price(const std::string& algorithm, const std::string& inst_path,
              const std::string& eps_s, uint64_t seed, const std::string& out_path) {
  tb::Instance inst = tb::io::instance_from_json(tb::io::read_file(inst_path));
  Rat eps = parse_rat(eps_s);
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
  else if (algorithm == "star-no-tie") out = tb::notie::price_star_no_tie(inst, eps);
  else if (algorithm == "spider-no-tie") out = tb::notie::price_spider_no_tie(inst, eps);
  else if (algorithm == "tree-no-tie") out = tb::notie::price_tree_no_tie(inst, eps);
  else if (algorithm == "cycle-no-tie") out = tb::notie::price_cycle_no_tie(inst);
  else {
    std::cerr << "unknown algorithm " << algorithm << "\n";
    return kExitUsage;
  }
  emit(outcome_to_json(out), out_path);
  return 0;
}

int run_ratio(const std::string& inst_path, const std::string& prices_path,
              const std::string& tie, int cap_n, const std::string& out_path) {
  tb::Instance inst = tb::io::instance_from_json(tb::io::read_file(inst_path));
  json pj = tb::io::read_file(prices_path);
  tb::PriceVector prices =
      tb::io::prices_from_json(pj.contains("prices") ? pj.at("prices") : pj);
  tb::TieMode mode = tie == "buyer" ? tb::TieMode::BuyerBreaks : tb::TieMode::SellerBreaks;
  auto report = tb::sim::competitive_ratio(inst, prices, mode, cap_n);
  auto worst = tb::sim::worst_case_welfare(inst, prices, mode, cap_n);
  json j;
  j["opt"] = report.opt.str();
  j["worstWelfare"] = report.worst_welfare.str();
  j["ratio"] = report.infinite ? "inf" : report.ratio.str();
  j["witnessOrder"] = worst.witness_order;
  j["revenue"] = worst.revenue.str();
  std::cout << "OPT = " << report.opt.str() << " (" << report.opt.approx() << ")\n";
  std::cout << "worst welfare = " << report.worst_welfare.str() << " ("
            << report.worst_welfare.approx() << ")\n";
  std::cout << "ratio = " << (report.infinite ? std::string("inf") : report.ratio.str()) << "\n";
  std::cout << "witness order:";
  for (int j2 : worst.witness_order) std::cout << " " << j2;
  std::cout << "\n";
  if (!out_path.empty()) tb::io::write_file(out_path, j);
  return 0;
}

// Compact verification sweeps; the full acceptance suite lives in the tests.
int run_suite(const std::string& name, uint64_t seed, const std::string& out_path) {
  std::vector<std::string> rows;
  bool all_pass = true;
  auto check = [&](const std::string& label, bool pass, const std::string& detail) {
    rows.push_back(row(label, pass, detail));
    all_pass = all_pass && pass;
  };

  if (name == "graph-classes") {
    for (int i = 0; i < 10; ++i) {
      auto inst = tb::gen::gen_random(tb::GraphKind::Path, 6, 5, 1, 10, seed + i);
      auto out = tb::pricing::price_path(inst);
      auto worst = tb::sim::worst_case_welfare(inst, out.prices, tb::TieMode::SellerBreaks);
      auto opt = tb::engine::optimal_allocation(inst).first;
      check("path#" + std::to_string(i), worst.worst_welfare == opt,
            "worst=" + worst.worst_welfare.str() + " opt=" + opt.str());
    }
    for (int i = 0; i < 10; ++i) {
      auto inst = tb::gen::gen_random(tb::GraphKind::Star, 5, 6, 1, 10, seed + 100 + i);
      auto out = tb::pricing::price_star(inst);
      auto worst = tb::sim::worst_case_welfare(inst, out.prices, tb::TieMode::SellerBreaks);
      auto lp = tb::engine::solve_primal_dual(inst);
      check("star#" + std::to_string(i), Rat(3) * worst.worst_welfare >= Rat(2) * lp.objective,
            "worst=" + worst.worst_welfare.str() + " lp=" + lp.objective.str());
    }
    for (int i = 0; i < 10; ++i) {
      auto inst = tb::gen::gen_random(tb::GraphKind::Tree, 7, 6, 1, 10, seed + 200 + i);
      auto out = tb::pricing::price_tree(inst);
      auto worst = tb::sim::worst_case_welfare(inst, out.prices, tb::TieMode::SellerBreaks);
      auto opt = tb::engine::optimal_allocation(inst).first;
      check("tree#" + std::to_string(i), Rat(3) * worst.worst_welfare >= opt,
            "worst=" + worst.worst_welfare.str() + " opt=" + opt.str());
    }
    for (int i = 0; i < 10; ++i) {
      auto inst = tb::gen::gen_random(tb::GraphKind::Cycle, 6, 6, 1, 10, seed + 300 + i);
      auto out = tb::pricing::price_cycle(inst);
      auto worst = tb::sim::worst_case_welfare(inst, out.prices, tb::TieMode::SellerBreaks);
      auto opt = tb::engine::optimal_allocation(inst).first;
      check("cycle#" + std::to_string(i), Rat(2) * worst.worst_welfare >= opt,
            "worst=" + worst.worst_welfare.str() + " opt=" + opt.str());
    }
  } else if (name == "no-tie") {
    for (int i = 0; i < 10; ++i) {
      auto inst = tb::gen::gen_random(tb::GraphKind::Path, 6, 5, 1, 10, seed + i);
      auto out = tb::notie::price_path_no_tie(inst);
      auto worst = tb::sim::worst_case_welfare(inst, out.prices, tb::TieMode::BuyerBreaks);
      auto opt = tb::engine::optimal_allocation(inst).first;
      check("path-nt#" + std::to_string(i), Rat(3) * worst.worst_welfare >= Rat(2) * opt,
            "worst=" + worst.worst_welfare.str() + " opt=" + opt.str());
    }
    for (int i = 0; i < 10; ++i) {
      auto inst = tb::gen::gen_random(tb::GraphKind::Cycle, 6, 6, 1, 10, seed + 100 + i);
      auto out = tb::notie::price_cycle_no_tie(inst);
      auto worst = tb::sim::worst_case_welfare(inst, out.prices, tb::TieMode::BuyerBreaks);
      auto opt = tb::engine::optimal_allocation(inst).first;
      check("cycle-nt#" + std::to_string(i), Rat(2) * worst.worst_welfare >= opt,
            "worst=" + worst.worst_welfare.str() + " opt=" + opt.str());
    }
  } else if (name == "hardness") {
    {
      auto inst = tb::gen::gen_star_lb(Rat(1, 10));
      tb::Rng rng(seed);
      bool capped = true;
      std::set<int> sell_all = {0, 1, 2, 3};
      for (int t = 0; t < 50; ++t) {
        tb::PriceVector p(inst.edge_count());
        for (int e = 1; e <= inst.edge_count(); ++e)
          p.set(e, tb::ExtPrice(Rat(rng.range(0, 12), 4)));
        auto adv = tb::gen::adversary_star_lb(inst, p);
        auto sim =
            tb::sim::simulate(inst, p, adv.order, tb::TieMode::SellerBreaks, &sell_all, nullptr);
        if (!(sim.welfare <= Rat(21, 10))) capped = false;
      }
      check("star-lb-cap", capped, "50 random price vectors");
    }
    {
      auto inst = tb::gen::gen_path_no_tie_lb();
      tb::Rng rng(seed + 1);
      bool capped = true;
      for (int t = 0; t < 50; ++t) {
        tb::PriceVector p(inst.edge_count());
        for (int e = 1; e <= inst.edge_count(); ++e)
          p.set(e, tb::ExtPrice(Rat(rng.range(0, 12), 4)));
        auto adv = tb::gen::adversary_path_no_tie_lb(inst, p);
        auto sim = tb::sim::simulate(inst, p, adv.order, tb::TieMode::BuyerBreaks, nullptr,
                                     &adv.tie_decisions);
        if (!(sim.welfare <= Rat(2))) capped = false;
      }
      check("path-no-tie-lb-cap", capped, "50 random price vectors");
    }
  } else if (name == "augmentation") {
    for (int c = 1; c <= 2; ++c) {
      bool ok = true;
      for (int i = 0; i < 5; ++i) {
        auto inst = tb::gen::gen_random_sets(8, 5, 1, 10, seed + 10 * c + i);
        auto priced = tb::aug::price_augmented(inst, c);
        auto worst =
            tb::sim::worst_case_welfare(inst, priced.prices.to_supply(), tb::TieMode::SellerBreaks);
        if (!(worst.worst_welfare >= priced.certified_welfare)) ok = false;
      }
      check("augmented-c" + std::to_string(c), ok, "5 random set instances");
    }
  } else {
    std::cerr << "unknown suite " << name << "\n";
    return kExitUsage;
  }

  for (auto& r : rows) std::cout << r << "\n";
  if (!out_path.empty()) {
    json j;
    j["rows"] = rows;
    j["pass"] = all_pass;
    tb::io::write_file(out_path, j);
  }
  return all_pass ? 0 : kExitGuarantee;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"item pricing on graphs: generators, pricers, simulator"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance");
  std::string family, kind = "path", eps = "1/10", out_path;
  int m = 6, n = 5, a = 4, d = 3, r = 6, c = 1;
  uint64_t seed = 0;
  gen->add_option("family", family, "family tag")->required();
  gen->add_option("--kind", kind);
  gen->add_option("--m", m);
  gen->add_option("--n", n);
  gen->add_option("--eps", eps);
  gen->add_option("--a", a);
  gen->add_option("--d", d);
  gen->add_option("--r", r);
  gen->add_option("--c", c);
  gen->add_option("--seed", seed);
  gen->add_option("--out", out_path);

  // price
  auto* price = app.add_subcommand("price", "price an instance file");
  std::string algorithm, inst_path, tie = "seller";
  price->add_option("algorithm", algorithm)->required();
  price->add_option("instance", inst_path)->required();
  price->add_option("--eps", eps);
  price->add_option("--seed", seed);
  price->add_option("--out", out_path);

  // ratio
  auto* ratio = app.add_subcommand("ratio", "worst-case welfare and ratio");
  std::string prices_path;
  int cap_n = 12, threads = 1;
  ratio->add_option("instance", inst_path)->required();
  ratio->add_option("prices", prices_path)->required();
  ratio->add_option("--tie", tie);
  ratio->add_option("--cap-n", cap_n);
  ratio->add_option("--threads", threads, "upper bound on simulator worker threads");
  ratio->add_option("--out", out_path);

  // suite
  auto* suite = app.add_subcommand("suite", "run a verification sweep");
  std::string suite_name;
  suite->add_option("name", suite_name)->required();
  suite->add_option("--seed", seed);
  suite->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen(family, kind, m, n, eps, a, d, r, c, seed, out_path);
    if (price->parsed()) return run_price(algorithm, inst_path, eps, seed, out_path);
    if (ratio->parsed()) return run_ratio(inst_path, prices_path, tie, cap_n, out_path);
    if (suite->parsed()) return run_suite(suite_name, seed, out_path);
  } catch (const tb::KindError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const tb::sim::TooManyBuyers& e) {
    std::cerr << e.what() << "\n";
    return kExitBudget;
  } catch (const tb::gen::BudgetExceeded& e) {
    std::cerr << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
