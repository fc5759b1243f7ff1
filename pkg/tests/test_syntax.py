import pytest

from stitkit import syntax
from stitkit.syntax import (And, Atom, Box, Cstit, Diamond, Dstit, Iff,
                            Implies, Not, Or, PosCstit, SyntaxError_,
                            agents, atoms, conjoin, expand_dstit,
                            language_tag, length, parse, pretty,
                            subformulas, LanguageTag)

from helpers import random_corpus


def test_parse_primitives():
    assert parse("p") == Atom("p")
    assert parse("~p") == Not(Atom("p"))
    assert parse("(p & q)") == And(Atom("p"), Atom("q"))
    assert parse("[0]p") == Cstit(0, Atom("p"))
    assert parse("{3}p") == Dstit(3, Atom("p"))
    assert parse("[]p") == Box(Atom("p"))


def test_sugar_desugars():
    assert parse("(p | q)") == Not(And(Not(Atom("p")), Not(Atom("q"))))
    assert parse("(p -> q)") == Not(And(Atom("p"), Not(Atom("q"))))
    assert parse("(p <-> q)") == Iff(Atom("p"), Atom("q"))
    assert parse("<>p") == Not(Box(Not(Atom("p"))))
    assert parse("<2>p") == Not(Cstit(2, Not(Atom("p"))))
    assert parse("<>p") == Diamond(Atom("p"))
    assert parse("<0>p") == PosCstit(0, Atom("p"))


def test_outer_parens_optional():
    assert parse("p & q") == parse("(p & q)")
    assert parse("p -> q") == parse("(p -> q)")


def test_chained_same_op_nests_right():
    assert parse("(p & q & r)") == And(Atom("p"), And(Atom("q"), Atom("r")))
    assert parse("(p | q | r)") == Or(Atom("p"), Or(Atom("q"), Atom("r")))
    assert parse("(p & q & r)") == conjoin([Atom("p"), Atom("q"), Atom("r")])


def test_mixed_ops_need_parens():
    with pytest.raises(SyntaxError_):
        parse("(p & q | r)")
    with pytest.raises(SyntaxError_):
        parse("(p -> q -> r)")


def test_parse_errors():
    for bad in ["", "(p", "p)", "p q", "[p", "{0)p", "P", "p &", "&"]:
        with pytest.raises(SyntaxError_):
            parse(bad)


def test_atom_names():
    assert parse("_x9Y") == Atom("_x9Y")
    with pytest.raises(SyntaxError_):
        parse("9x")


def test_pretty_roundtrip_random():
    for f in random_corpus(11, 300, 14):
        assert parse(pretty(f)) == f


def test_pretty_examples():
    assert pretty(parse("{1}(p & ~[]q)")) == "{1}(p & ~[]q)"
    assert pretty(parse("<>p")) == "~[]~p"


def test_length_clauses():
    assert length(parse("p")) == 1
    assert length(parse("~p")) == 2
    assert length(parse("(p & q)")) == 5
    assert length(parse("[7]p")) == 4
    assert length(parse("{7}p")) == 6
    assert length(parse("[]p")) == 2
    assert length(parse("{0}(p & ~[]q)")) == 12


def test_subformulas_postorder_dedup():
    f = parse("(p & (p & q))")
    sf = subformulas(f)
    assert sf == (Atom("p"), Atom("q"), And(Atom("p"), Atom("q")), f)
    assert len(sf) == len(set(sf))


def test_subformula_card_bounded_by_length():
    for f in random_corpus(13, 200, 20):
        assert len(subformulas(f)) <= length(f)


def test_agents_and_atoms():
    f = parse("([2]p & {5}~q)")
    assert agents(f) == {2, 5}
    assert atoms(f) == {"p", "q"}
    assert agents(parse("[]p")) == set()


def test_language_tag():
    assert language_tag(parse("[0]p")) is LanguageTag.CSTIT
    assert language_tag(parse("{0}p")) is LanguageTag.DSTIT
    assert language_tag(parse("([0]p & {1}q)")) is LanguageTag.MIXED
    assert language_tag(parse("[]p")) is LanguageTag.CSTIT


def test_expand_dstit():
    f = parse("{0}p")
    assert expand_dstit(f) == parse("([0]p & ~[]p)")
    g = parse("{1}{0}p")
    inner = parse("([0]p & ~[]p)")
    assert expand_dstit(g) == And(Cstit(1, inner), Not(Box(inner)))


def test_str_matches_pretty():
    f = parse("([0]p & q)")
    assert str(f) == pretty(f)
