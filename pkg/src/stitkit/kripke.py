"""Kripke models with per-agent equivalence relations and the general
permutation property (GPP), plus the single-moment specialization the
solver searches.

Settledness is derived, not stored.  With at least two stored agents the
settledness classes are the connected components of the union of the
agent relations, which under GPP coincide with travel along R_1 after
R_0.  With at most one stored agent the settledness relation is taken to
be universal over the whole world set; this single-agent convention is
documented in the README.  Agents within the declared universe that carry
no stored relation are *padded*: they act universally inside each
settledness class.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import syntax
from .syntax import And, Atom, Box, Cstit, Dstit, Not


@dataclass
class KripkeModel:
    """Worlds with one equivalence relation per stored agent.

    ``relations`` maps an agent index to a partition, given as a tuple of
    frozensets of worlds.  ``agent_universe`` is the size of the agent
    set; it must exceed every stored agent index.
    """

    worlds: tuple
    relations: dict
    valuation: dict
    agent_universe: int

    def __post_init__(self):
        self.worlds = tuple(self.worlds)
        self.relations = {a: tuple(frozenset(c) for c in cells)
                          for a, cells in self.relations.items()}
        self.valuation = {p: frozenset(ws)
                          for p, ws in self.valuation.items()}
        if self.agent_universe < 1:
            raise ValueError("agent_universe must be at least 1")
        for a in self.relations:
            if not 0 <= a < self.agent_universe:
                raise ValueError(f"agent {a} outside universe "
                                 f"{self.agent_universe}")
        for p, ws in self.valuation.items():
            bad = ws - set(self.worlds)
            if bad:
                raise ValueError(f"valuation of {p} uses unknown worlds "
                                 f"{sorted(bad)}")

    def cell(self, agent, w):
        """Equivalence class of w under the stored agent's relation."""
        for c in self.relations[agent]:
            if w in c:
                return c
        raise KeyError(w)


@dataclass
class MomentModel:
    """Single settledness class: worlds with per-agent choice partitions.

    Settledness is universal over the worlds.  ``agent_universe`` defaults
    to one past the largest stored agent (at least 1).
    """

    worlds: tuple
    partitions: dict
    valuation: dict
    agent_universe: int = None

    def __post_init__(self):
        self.worlds = tuple(self.worlds)
        self.partitions = {a: tuple(frozenset(c) for c in cells)
                           for a, cells in self.partitions.items()}
        self.valuation = {p: frozenset(ws)
                          for p, ws in self.valuation.items()}
        if self.agent_universe is None:
            self.agent_universe = max(self.partitions, default=0) + 1

    def cell(self, agent, w):
        for c in self.partitions[agent]:
            if w in c:
                return c
        raise KeyError(w)


def _check_partition(worlds, cells, label):
    """Violations of ``cells`` being a partition of ``worlds``."""
    out = []
    seen = set()
    for c in cells:
        if not c:
            out.append(f"{label}: empty cell")
        overlap = seen & c
        if overlap:
            out.append(f"{label}: worlds {sorted(overlap)} in two cells")
        stray = c - set(worlds)
        if stray:
            out.append(f"{label}: unknown worlds {sorted(stray)}")
        seen |= c
    missing = set(worlds) - seen
    if missing:
        out.append(f"{label}: worlds {sorted(missing)} in no cell")
    return out


def check_equivalence(m):
    """Violations of each stored relation being an equivalence relation.

    Relations are stored as partitions, so this amounts to checking the
    partition shape.
    """
    out = []
    for a in sorted(m.relations):
        out.extend(_check_partition(m.worlds, m.relations[a], f"agent {a}"))
    return out


def relation_pairs(cells):
    """Explicit pair set of a partition, for relation-algebra checks."""
    return {(w, v) for c in cells for w in c for v in c}


def compose(pairs_a, pairs_b):
    """Relational composition: first travel pairs_a, then pairs_b."""
    by_src = {}
    for u, v in pairs_b:
        by_src.setdefault(u, set()).add(v)
    return {(w, v) for w, u in pairs_a for v in by_src.get(u, ())}


def box_classes(m):
    """Settledness classes of a model, as a list of frozensets.

    Components of the union of the stored relations when two or more
    agents are stored; the whole world set otherwise.
    """
    if isinstance(m, MomentModel):
        return [frozenset(m.worlds)]
    if len(m.relations) < 2:
        return [frozenset(m.worlds)]
    parent = {w: w for w in m.worlds}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for cells in m.relations.values():
        for c in cells:
            ws = sorted(c)
            for other in ws[1:]:
                parent[find(other)] = find(ws[0])
    groups = {}
    for w in m.worlds:
        groups.setdefault(find(w), set()).add(w)
    return [frozenset(g) for g in groups.values()]


def box_class_of(m, w):
    for c in box_classes(m):
        if w in c:
            return c
    raise KeyError(w)


def _agent_cell(m, agent, w):
    """Class of w for any agent in the universe; padded agents act
    universally inside the settledness class."""
    stored = m.partitions if isinstance(m, MomentModel) else m.relations
    if agent in stored:
        return m.cell(agent, w)
    if not 0 <= agent < m.agent_universe:
        raise ValueError(f"agent {agent} outside universe "
                         f"{m.agent_universe}")
    return box_class_of(m, w)


def check_gpp(m):
    """General permutation property violations, as (w, v, l, m, n) tuples.

    Quantifies l, m, n over the stored agents plus, when the universe is
    larger, a single representative padded agent (padded agents all act
    alike).  Relations must already be equivalence relations.
    """
    eq = check_equivalence(m) if isinstance(m, KripkeModel) else []
    if eq:
        raise ValueError("not equivalence relations: " + "; ".join(eq))
    stored = sorted(m.partitions if isinstance(m, MomentModel)
                    else m.relations)
    agents = list(stored)
    if m.agent_universe > len(stored):
        padded = next(a for a in range(m.agent_universe)
                      if a not in set(stored))
        agents.append(padded)
    out = []
    for l in agents:
        for mm in agents:
            for w in m.worlds:
                for u in _agent_cell(m, l, w):
                    for v in _agent_cell(m, mm, u):
                        for n in agents:
                            need = set(_agent_cell(m, n, w))
                            for i in agents:
                                if i != n:
                                    need &= _agent_cell(m, i, v)
                            if not need:
                                out.append((w, v, l, mm, n))
    return sorted(set(out))


def mc(m, w, f):
    """Model checking at a world; dstit goes through interdefinability."""
    if w not in m.worlds:
        raise KeyError(f"unknown world {w!r}")
    memo = {}

    def ev(g, u):
        key = (g, u)
        if key not in memo:
            memo[key] = _ev(g, u)
        return memo[key]

    def _ev(g, u):
        if isinstance(g, Atom):
            return u in m.valuation.get(g.name, ())
        if isinstance(g, Not):
            return not ev(g.sub, u)
        if isinstance(g, And):
            return ev(g.left, u) and ev(g.right, u)
        if isinstance(g, Cstit):
            return all(ev(g.sub, v) for v in _agent_cell(m, g.agent, u))
        if isinstance(g, Box):
            return all(ev(g.sub, v) for v in box_class_of(m, u))
        if isinstance(g, Dstit):
            return (all(ev(g.sub, v) for v in _agent_cell(m, g.agent, u))
                    and not all(ev(g.sub, v) for v in box_class_of(m, u)))
        raise TypeError(f"not a formula: {g!r}")

    return ev(f, w)


def generated_submodel(m, w):
    """Restriction of a KripkeModel to the settledness class of w."""
    cls = box_class_of(m, w)
    keep = [u for u in m.worlds if u in cls]
    relations = {a: tuple(c & cls for c in cells if c & cls)
                 for a, cells in m.relations.items()}
    valuation = {p: ws & cls for p, ws in m.valuation.items()}
    return KripkeModel(tuple(keep), relations, valuation, m.agent_universe)


def filtrate(m, f):
    """Filtration through the subformulas of f.

    Requires a generated model (single settledness class) satisfying the
    permutation property.  Worlds of the result are named q0, q1, ... in
    order of first appearance; use filtrate_with_map to recover which
    original worlds collapsed where.
    """
    return filtrate_with_map(m, f)[0]


def filtrate_with_map(m, f):
    if len(box_classes(m)) != 1:
        raise ValueError("filtrate requires a generated model")
    if check_gpp(m):
        raise ValueError("filtrate requires the permutation property")
    # Work over the dstit-expanded formula so the relations see the
    # [i]- and []-components hidden inside {i}-subformulas.  A {i} node
    # costs 5 in the length measure but expands to at most 4 distinct
    # subformulas, so card(sf) <= length(f) survives the expansion.
    sf = syntax.subformulas(syntax.expand_dstit(f))
    truth = {w: tuple(mc(m, w, g) for g in sf) for w in m.worlds}
    class_names = {}
    world_map = {}
    for w in m.worlds:
        sig = truth[w]
        if sig not in class_names:
            class_names[sig] = f"q{len(class_names)}"
        world_map[w] = class_names[sig]
    new_worlds = tuple(class_names.values())
    assert len(new_worlds) <= 2 ** syntax.length(f), \
        "filtration exceeded the 2^length bound"

    # R'_i: classes related iff they agree on every [i]-subformula
    sf_idx = {g: k for k, g in enumerate(sf)}
    relations = {}
    for a in sorted(m.relations):
        box_positions = [sf_idx[g] for g in sf
                         if isinstance(g, Cstit) and g.agent == a]
        groups = {}
        for sig, name in class_names.items():
            key = tuple(sig[k] for k in box_positions)
            groups.setdefault(key, set()).add(name)
        relations[a] = tuple(frozenset(g) for g in groups.values())

    atom_names = syntax.atoms(f)
    valuation = {}
    for sig, name in class_names.items():
        for g in sf:
            if isinstance(g, Atom) and g.name in atom_names and sig[sf_idx[g]]:
                valuation.setdefault(g.name, set()).add(name)
    out = KripkeModel(new_worlds, relations,
                      {p: frozenset(ws) for p, ws in valuation.items()},
                      m.agent_universe)
    return out, world_map


def check_rectangular(m):
    """Rectangularity violations of a MomentModel, as tuples of cells
    (one per stored agent) with empty intersection."""
    agents = sorted(m.partitions)
    out = []

    def walk(k, chosen, inter):
        if not inter:
            out.append(tuple(chosen))
            return
        if k == len(agents):
            return
        for c in m.partitions[agents[k]]:
            walk(k + 1, chosen + [c], inter & c)

    walk(0, [], set(m.worlds))
    return out


def moment_to_kripke(m):
    """View a MomentModel as a KripkeModel over the same worlds."""
    bad = check_rectangular(m)
    if bad:
        raise ValueError(f"partitions not rectangular, witness {bad[0]}")
    return KripkeModel(m.worlds, dict(m.partitions), dict(m.valuation),
                       m.agent_universe)


# -- text format ---------------------------------------------------------

def parse_model(text):
    """Parse the line-oriented kripke/moment model format."""
    lines = [ln.strip() for ln in text.strip().splitlines()
             if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise ValueError("empty model text")
    head = lines[0].split()
    if head[0] not in ("kripke", "moment") or len(head) != 2 \
            or not head[1].startswith("agents="):
        raise ValueError(f"bad header {lines[0]!r}")
    universe = int(head[1].removeprefix("agents="))
    kind = head[0]
    relkey = "rel" if kind == "kripke" else "part"
    worlds = None
    relations = {}
    valuation = {}
    for ln in lines[1:]:
        if ln.startswith("worlds:"):
            worlds = tuple(ln.removeprefix("worlds:").split())
        elif ln.startswith(relkey + " "):
            key, _, body = ln.partition(":")
            agent = int(key.split()[1])
            cells = []
            for chunk in re.findall(r"\{([^{}]*)\}", body):
                cells.append(frozenset(chunk.split()))
            relations[agent] = tuple(cells)
        elif ln.startswith("val "):
            key, _, body = ln.partition(":")
            valuation[key.split()[1]] = frozenset(body.split())
        else:
            raise ValueError(f"unrecognized line {ln!r}")
    if worlds is None:
        raise ValueError("missing worlds: line")
    known = set(worlds)
    for a, cells in relations.items():
        for c in cells:
            if c - known:
                raise ValueError(f"{relkey} {a} uses unknown worlds "
                                 f"{sorted(c - known)}")
    if kind == "kripke":
        m = KripkeModel(worlds, relations, valuation, universe)
        eq = check_equivalence(m)
        if eq:
            raise ValueError("; ".join(eq))
        return m
    return MomentModel(worlds, relations, valuation, universe)


def format_model(m):
    kind = "moment" if isinstance(m, MomentModel) else "kripke"
    relkey = "part" if kind == "moment" else "rel"
    stored = m.partitions if isinstance(m, MomentModel) else m.relations
    lines = [f"{kind} agents={m.agent_universe}",
             "worlds: " + " ".join(m.worlds)]
    for a in sorted(stored):
        cells = sorted(stored[a], key=lambda c: sorted(c))
        body = " ".join("{" + " ".join(sorted(c)) + "}" for c in cells)
        lines.append(f"{relkey} {a}: {body}")
    for p in sorted(m.valuation):
        lines.append(f"val {p}: " + " ".join(sorted(m.valuation[p])))
    return "\n".join(lines) + "\n"
