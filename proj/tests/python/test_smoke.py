import fractions
import json

import tollbooth as tb


def frac(s):
    return fractions.Fraction(s)


def test_path_pricing_reaches_the_optimum():
    inst = tb.gen_random("path", 6, 5, 3)
    assert tb.validate_instance(inst) == []
    out = tb.price("path", inst)
    opt = tb.optimal_allocation(inst)
    assert frac(out["guaranteed_welfare"]) == frac(opt["value"])
    worst = tb.worst_case_welfare(inst, out["prices"], tie="seller")
    assert frac(worst["worst_welfare"]) == frac(opt["value"])


def test_star_lower_bound_instance():
    inst = tb.gen_star_lb("1/10")
    opt = tb.optimal_allocation(inst)
    assert frac(opt["value"]) == 3
    out = tb.price("star", inst)
    assert frac(out["guaranteed_welfare"]) >= 2
    ratio = tb.competitive_ratio(inst, out["prices"], tie="seller")
    assert not ratio["infinite"]
    assert frac(ratio["ratio"]) <= frac("3/2")


def test_duality_is_exact():
    inst = tb.gen_random("star", 5, 6, 9)
    sol = tb.solve_primal_dual(inst)
    primal = sum(
        frac(y) * frac(b["value"])
        for y, b in zip(sol["primal_y"], json.loads(inst)["buyers"])
    )
    dual = sum(frac(p) for p in sol["dual_p"])
    assert primal == dual == frac(sol["objective"])


def test_buyer_tie_path_keeps_two_thirds():
    inst = tb.gen_path_no_tie_lb()
    out = tb.price("path-no-tie", inst)
    assert frac(out["guaranteed_welfare"]) == 2
    worst = tb.worst_case_welfare(inst, out["prices"], tie="buyer")
    assert frac(worst["worst_welfare"]) >= 2


def test_simulate_replay_and_adversary():
    inst = tb.gen_path_no_tie_lb()
    prices = ["1", "1", "1"]
    adv = tb.adversary_for("path-no-tie-lb", inst, prices)
    res = tb.simulate(
        inst,
        prices,
        adv["order"],
        tie="buyer",
        buyer_decisions=adv["tie_decisions"],
    )
    assert frac(res["welfare"]) <= 2


def test_min_hitting_set():
    assert sorted(tb.min_hitting_set([{1}, {2}])) == [1, 2]
    assert len(tb.min_hitting_set([{1, 2}, {2, 3}, {3, 1}])) == 2
