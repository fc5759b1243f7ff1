"""Polynomial satisfiability-preserving translations between the two
agentive languages.

Each subformula psi of the input gets a fresh surrogate atom p_psi, and
the output conjoins the surrogate of the whole formula with settled
biimplications tying each surrogate to the surrogates of its parts:

    tr(f)  = p_f & /\ []B_psi     (deliberative to agentive)
    tr'(f) = p_f & /\ []B'_psi    (agentive to deliberative)

B and B' agree except on the modal-of-agency case: B rewrites {i}g as
([i]p_g & ~[]p_g), B' rewrites [i]g as ({i}p_g | []p_g).

Fresh atoms are named _b0, _b1, ... by the position of psi in the
post-order subformula list; user atoms cannot start with an underscore,
so surrogates never collide.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from . import syntax
from .syntax import (And, Atom, Box, Cstit, Dstit, Iff, Not, Or, conjoin,
                     subformulas)


class Direction(Enum):
    TO_CSTIT = "cstit"
    TO_DSTIT = "dstit"


@dataclass(frozen=True)
class TranslationTable:
    direction: Direction
    order: tuple  # subformulas in post-order
    fresh: dict  # subformula -> surrogate Atom

    def surrogate(self, psi):
        if psi not in self.fresh:
            raise KeyError(f"{syntax.pretty(psi)} not in table")
        return self.fresh[psi]


def build_table(f, direction):
    order = subformulas(f)
    fresh = {psi: Atom(f"_b{k}") for k, psi in enumerate(order)}
    return TranslationTable(direction, order, fresh)


def biimp(psi, t):
    """The biimplication B_psi (or B'_psi for TO_DSTIT)."""
    p = t.surrogate(psi)
    if isinstance(psi, Atom):
        return Iff(p, psi)
    if isinstance(psi, Not):
        return Iff(p, Not(t.surrogate(psi.sub)))
    if isinstance(psi, And):
        return Iff(p, And(t.surrogate(psi.left), t.surrogate(psi.right)))
    if isinstance(psi, Box):
        return Iff(p, Box(t.surrogate(psi.sub)))
    q = t.surrogate(psi.sub)
    if isinstance(psi, Dstit):
        if t.direction is not Direction.TO_CSTIT:
            raise ValueError("dstit node in a TO_DSTIT table")
        return Iff(p, And(Cstit(psi.agent, q), Not(Box(q))))
    if isinstance(psi, Cstit):
        if t.direction is not Direction.TO_DSTIT:
            raise ValueError("cstit node in a TO_CSTIT table")
        return Iff(p, Or(Dstit(psi.agent, q), Box(q)))
    raise TypeError(f"not a formula: {psi!r}")


def _assemble(f, direction):
    t = build_table(f, direction)
    clauses = [Box(biimp(psi, t)) for psi in t.order]
    return And(t.surrogate(f), conjoin(clauses))


def tr(f):
    """Deliberative-language formula to an agentive-language one,
    satisfiable iff the input is."""
    if any(isinstance(g, Cstit) for g in subformulas(f)):
        raise ValueError("tr input must not contain [i] operators")
    out = _assemble(f, Direction.TO_CSTIT)
    assert not any(isinstance(g, Dstit) for g in subformulas(out))
    return out


def tr_prime(f):
    """Agentive-language formula to a deliberative-language one,
    satisfiable iff the input is."""
    if any(isinstance(g, Dstit) for g in subformulas(f)):
        raise ValueError("tr_prime input must not contain {i} operators")
    out = _assemble(f, Direction.TO_DSTIT)
    assert not any(isinstance(g, Cstit) for g in subformulas(out))
    return out


def blowup(f, out):
    """Measured length ratio (length(out) - 1) / length(f)."""
    return (syntax.length(out) - 1) / syntax.length(f)
