import pytest

from stitkit import solver, syntax, translate
from stitkit.solver import SolverConfig
from stitkit.syntax import LanguageTag, language_tag, length, parse, pretty
from stitkit.translate import (Direction, biimp, blowup, build_table, tr,
                               tr_prime)

from helpers import random_corpus

CFG2 = SolverConfig(agent_universe=2)


def test_tr_output_language():
    for f in random_corpus(41, 60, 10, cstit=False):
        out = tr(f)
        assert language_tag(out) is not LanguageTag.DSTIT
        assert language_tag(out) is not LanguageTag.MIXED


def test_tr_prime_output_language():
    for f in random_corpus(42, 60, 10, dstit=False):
        out = tr_prime(f)
        assert language_tag(out) is not LanguageTag.CSTIT or \
            not syntax.agents(out)
        assert not any(isinstance(g, syntax.Cstit)
                       for g in syntax.subformulas(out))


def test_language_guards():
    with pytest.raises(ValueError):
        tr(parse("[0]p"))
    with pytest.raises(ValueError):
        tr_prime(parse("{0}p"))


def test_fresh_atoms_cannot_collide():
    f = parse("(_b0 & {0}p)")
    out = tr(f)
    # the surrogate namespace is disjoint from the input atoms by the
    # post-order index, so the table stays a bijection
    t = build_table(f, Direction.TO_CSTIT)
    assert len(set(t.fresh.values())) == len(t.order)


def test_biimp_shapes():
    f = parse("{0}p")
    t = build_table(f, Direction.TO_CSTIT)
    b = biimp(f, t)
    p_f, p_p = t.surrogate(f), t.surrogate(parse("p"))
    assert b == syntax.Iff(p_f, syntax.And(syntax.Cstit(0, p_p),
                                           syntax.Not(syntax.Box(p_p))))
    g = parse("[1]q")
    t2 = build_table(g, Direction.TO_DSTIT)
    b2 = biimp(g, t2)
    p_g, p_q = t2.surrogate(g), t2.surrogate(parse("q"))
    assert b2 == syntax.Iff(p_g, syntax.Or(syntax.Dstit(1, p_q),
                                           syntax.Box(p_q)))


def test_translation_linear_in_subformulas():
    # each subformula contributes one settled biimplication of bounded size
    for f in random_corpus(43, 60, 12, cstit=False):
        out = tr(f)
        assert length(out) <= 40 * length(f) + 1


def test_sat_preserved_dstit_to_cstit():
    for f in random_corpus(44, 25, 8, cstit=False):
        a = solver.oracle(f, 2, CFG2).verdict
        b = solver.oracle(tr(f), 2, CFG2).verdict
        assert a == b, pretty(f)


def test_sat_preserved_cstit_to_dstit():
    for f in random_corpus(45, 25, 8, dstit=False):
        a = solver.oracle(f, 2, CFG2).verdict
        b = solver.oracle(tr_prime(f), 2, CFG2).verdict
        assert a == b, pretty(f)


def test_blowup_measured():
    f = parse("q")
    out = tr(f)
    assert blowup(f, out) == length(out) - 1
    # the measured constant exceeds 14 already on atoms
    assert length(out) > 1 + 14 * length(f)
