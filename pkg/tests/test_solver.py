import pytest

from stitkit import kripke, solver, syntax
from stitkit.kripke import mc
from stitkit.solver import (InconclusiveError, SolverConfig, general_frames,
                            moment_frames, oracle, product_sat, sat,
                            sat_single_agent, valid)
from stitkit.syntax import length, parse, pretty

from helpers import random_corpus

CFG2 = SolverConfig(agent_universe=2)
CFG3 = SolverConfig(agent_universe=3)


def test_known_sat():
    for text in ["p", "([0]p & ~[]p)", "{0}p", "(<>p & <>~p)",
                 "(<0>p & <1>~p)", "({0}p & {1}q)"]:
        res = sat(parse(text), CFG2)
        assert res.verdict == "SAT", text
        model, world = res.witness
        assert mc(model, world, parse(text))


def test_known_unsat():
    for text in ["(p & ~p)", "({0}p & []p)", "([]p & ~[0]p)",
                 "{0}(p | ~p)", "(<>[0]p & <>[1]~p & [](~[0]p | ~[1]~p))"]:
        assert sat(parse(text), CFG2).verdict == "UNSAT", text


def test_independence_is_enforced():
    # without independence of agents this would be satisfiable
    f = parse("(<>[0]p & <>[1]q & ~<>([0]p & [1]q))")
    assert sat(f, CFG2).verdict == "UNSAT"


def test_valid():
    assert valid(parse("([]p -> [0]p)"), CFG2)
    assert valid(parse("([0]p -> p)"), CFG2)
    assert valid(parse("({0}p -> ~[]p)"), CFG2)
    assert not valid(parse("([0]p -> []p)"), CFG2)
    assert not valid(parse("p"), CFG2)


def test_witnesses_verify_and_fit_bound():
    for f in random_corpus(31, 150, 10):
        res = sat(f, CFG2)
        if res.verdict == "SAT":
            model, world = res.witness
            assert mc(model, world, f), pretty(f)
            assert len(model.worlds) <= 2 ** length(f)


def test_engine_matches_oracle_random():
    for f in random_corpus(32, 150, 9):
        want = oracle(f, 3, CFG2).verdict
        assert sat(f, CFG2).verdict == want, pretty(f)


def test_oracle_moment_and_general_agree():
    for f in random_corpus(33, 80, 8):
        a = oracle(f, 3, CFG2, model_class="moment").verdict
        b = oracle(f, 3, CFG2, model_class="general").verdict
        assert a == b, pretty(f)


def test_frame_counts():
    assert [len(moment_frames(n, 3)) for n in range(1, 5)] == [1, 4, 7, 16]
    assert [len(general_frames(n, 3)) for n in range(1, 5)] == [1, 5, 12, 38]


def test_oracle_guards():
    with pytest.raises(ValueError):
        oracle(parse("p"), solver.ORACLE_MAX_WORLDS + 1, CFG2)


def test_agent_universe_guard():
    with pytest.raises(ValueError):
        sat(parse("[5]p"), CFG2)


def test_single_agent():
    cfg1 = SolverConfig(agent_universe=1)
    f = parse("({0}p & <>~[0]p)")
    res = sat_single_agent(f, cfg1)
    assert res.verdict == "SAT"
    model, world = res.witness
    assert mc(model, world, f)
    assert len(model.worlds) <= length(f) ** 2
    assert sat_single_agent(parse("([0]p & ~[0]p)"), cfg1).verdict == "UNSAT"
    # within one choice cell, [0]p leaves no room for a ~p history
    assert sat_single_agent(parse("({0}p & <0>~p)"), cfg1).verdict == "UNSAT"
    with pytest.raises(ValueError):
        sat_single_agent(parse("[1]p"), cfg1)


def test_single_agent_matches_oracle():
    cfg1 = SolverConfig(agent_universe=1)
    for f in random_corpus(36, 80, 9, agents=(0,)):
        want = oracle(f, 3, cfg1, model_class="moment").verdict
        assert sat_single_agent(f, cfg1).verdict == want, pretty(f)


def test_product_sat_agrees():
    for f in random_corpus(34, 120, 9):
        assert product_sat(f, 3).verdict == sat(f, CFG2).verdict, pretty(f)


def test_product_sat_agent_guard():
    with pytest.raises(ValueError):
        product_sat(parse("[2]p"), 3)


def test_conservative_over_universe():
    for f in random_corpus(35, 60, 9):
        v2 = sat(f, CFG2).verdict
        v3 = sat(f, CFG3).verdict
        v4 = sat(f, SolverConfig(agent_universe=4)).verdict
        assert v2 == v3 == v4, pretty(f)


def test_inconclusive_on_giant_formula():
    f = syntax.conjoin([parse(f"[0]a{i}") for i in range(30)])
    with pytest.raises(InconclusiveError):
        sat(f, CFG2)


def test_stats_reported():
    res = sat(parse("p"), CFG2)
    assert "engine" in res.stats
    res = oracle(parse("p"), 2, CFG2)
    assert res.stats["frames"] >= 1
