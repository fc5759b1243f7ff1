"""Satisfiability and validity over Kripke models with the permutation
property.

Satisfaction in such models reduces to satisfaction in a single
settledness class (truth only depends on the generated submodel), so the
search space is MomentModels: a world set with one choice partition per
occurring agent whose cells intersect rectangularly.

The search engine is type-based and complete without size restrictions.
A *type* is a truth assignment to the subformulas of the (dstit-expanded)
input that respects the boolean connectives and the T axiom for every
modal operator.  Worlds of any satisfying model induce types, and a
satisfying model can be rebuilt from the right collection of types; the
engine enumerates candidate collections grouped by settledness profile
and checks the closure conditions directly.  Every SAT answer carries a
witness that is re-checked by the independent model checker before being
returned, and every witness stays within the 2**length(f) world bound.

The oracle is an unrelated brute force: it enumerates whole frames up to
a world cap (single-moment frames, and separately general multi-class
frames) and sweeps all valuations through the compiled kernel.
"""

from __future__ import annotations

import itertools
import os
import time
from dataclasses import dataclass, field
from functools import lru_cache

from . import kernel, kripke, syntax
from .btac import set_partitions
from .kripke import KripkeModel, MomentModel, mc
from .syntax import And, Atom, Box, Cstit, Not

ORACLE_MAX_WORLDS = int(os.environ.get("STITKIT_MAX_ORACLE", "5"))
ENGINE_MAX_LEAVES = 22
ENGINE_MAX_COMBOS = 1 << 22


class InconclusiveError(Exception):
    """Search gave up before exhausting the space it promised to cover."""

    def __init__(self, reason, stats=None):
        super().__init__(reason)
        self.stats = stats or {}


@dataclass
class SolverConfig:
    agent_universe: int = 2
    world_bound_override: int = None
    engine: str = "SEARCH"
    timeout: float = None

    def __post_init__(self):
        if self.agent_universe < 1:
            raise ValueError("agent_universe must be at least 1")


@dataclass
class SatResult:
    verdict: str  # "SAT" or "UNSAT"
    witness: tuple = None  # (model, world) when SAT
    stats: dict = field(default_factory=dict)


def _check_agents(f, cfg):
    bad = [a for a in syntax.agents(f) if a >= cfg.agent_universe]
    if bad:
        raise ValueError(f"agents {sorted(bad)} outside universe "
                         f"{cfg.agent_universe}")


class _Deadline:
    def __init__(self, timeout):
        self.t = None if timeout is None else time.monotonic() + timeout

    def check(self):
        if self.t is not None and time.monotonic() > self.t:
            raise TimeoutError("solver timeout exceeded")


# -- type-based search engine ---------------------------------------------

def _types(g):
    """All locally coherent truth assignments over the subformulas of g.

    Returns (sf, leaf positions, list of value tuples).  Coherence means
    boolean clauses hold exactly and every true modal formula has a true
    body (the T constraint).
    """
    sf = syntax.subformulas(g)
    idx = {s: i for i, s in enumerate(sf)}
    leaves = [i for i, s in enumerate(sf)
              if isinstance(s, (Atom, Cstit, Box))]
    if len(leaves) > ENGINE_MAX_LEAVES:
        raise InconclusiveError(
            f"{len(leaves)} independent subformulas exceed the engine cap")
    out = []
    for bits in range(1 << len(leaves)):
        val = [False] * len(sf)
        for k, i in enumerate(leaves):
            val[i] = bool((bits >> k) & 1)
        ok = True
        for i, s in enumerate(sf):
            if isinstance(s, Not):
                val[i] = not val[idx[s.sub]]
            elif isinstance(s, And):
                val[i] = val[idx[s.left]] and val[idx[s.right]]
            elif isinstance(s, (Cstit, Box)) and val[i] \
                    and not val[idx[s.sub]]:
                ok = False
                break
        if ok:
            out.append(tuple(val))
    return sf, idx, out


def _subsets_desc(items):
    """Nonempty subsets, largest first."""
    items = list(items)
    for k in range(len(items), 0, -1):
        yield from itertools.combinations(items, k)


def sat(f, cfg=None):
    """Decide satisfiability over the configured agent universe."""
    cfg = cfg or SolverConfig()
    _check_agents(f, cfg)
    deadline = _Deadline(cfg.timeout)
    g = syntax.expand_dstit(f)
    sf, idx, types = _types(g)
    root = idx[g]
    box_nodes = [i for i, s in enumerate(sf) if isinstance(s, Box)]
    agents = sorted(syntax.agents(g))
    cstit_nodes = {a: [i for i, s in enumerate(sf)
                       if isinstance(s, Cstit) and s.agent == a]
                   for a in agents}
    sub_of = {i: idx[sf[i].sub] for i, s in enumerate(sf)
              if isinstance(sf[i], (Cstit, Box))}

    stats = {"engine": "types", "types": len(types), "groups": 0,
             "combos": 0, "bound": 2 ** syntax.length(f),
             "override": cfg.world_bound_override}

    def boxprof(t):
        return tuple(t[i] for i in box_nodes)

    def iprof(t, a):
        return tuple(t[i] for i in cstit_nodes[a])

    groups = {}
    for t in types:
        groups.setdefault(boxprof(t), []).append(t)

    for bp, group in sorted(groups.items(), reverse=True):
        deadline.check()
        stats["groups"] += 1
        # settledness positives: every member must verify the body
        cand = [t for t in group
                if all(t[sub_of[i]] for i, v in zip(box_nodes, bp) if v)]
        if not any(t[root] for t in cand):
            continue
        box_negs = [sub_of[i] for i, v in zip(box_nodes, bp) if not v]
        profiles = {a: sorted({iprof(t, a) for t in cand}) for a in agents}
        subset_space = 1
        for a in agents:
            subset_space *= 2 ** len(profiles[a])
        if subset_space > ENGINE_MAX_COMBOS:
            raise InconclusiveError(
                "profile subset space exceeds the engine cap", stats)
        hit = _search_group(cand, agents, profiles, iprof, cstit_nodes,
                            sub_of, box_negs, root, stats, deadline)
        if hit is not None:
            u_set, t_sat = hit
            model, world = _build_witness(u_set, t_sat, sf, idx, agents,
                                          iprof, cfg)
            assert mc(model, world, f) is True, "witness failed re-check"
            assert len(model.worlds) <= 2 ** syntax.length(f)
            stats["witness_worlds"] = len(model.worlds)
            return SatResult("SAT", (model, world), stats)
    return SatResult("UNSAT", None, stats)


def _search_group(cand, agents, profiles, iprof, cstit_nodes, sub_of,
                  box_negs, root, stats, deadline):
    for combo in itertools.product(
            *(_subsets_desc(profiles[a]) for a in agents)):
        deadline.check()
        stats["combos"] += 1
        allowed = {a: set(r) for a, r in zip(agents, combo)}
        u_set = [t for t in cand
                 if all(iprof(t, a) in allowed[a] for a in agents)]
        if not u_set:
            continue
        realized = {tuple(iprof(t, a) for a in agents) for t in u_set}
        if any(tup not in realized for tup in itertools.product(*combo)):
            continue
        if any(all(t[n] for t in u_set) for n in box_negs):
            continue
        ok = True
        for a, rs in zip(agents, combo):
            for r in rs:
                cell = [t for t in u_set if iprof(t, a) == r]
                for pos, v in zip(cstit_nodes[a], r):
                    if not v and all(t[sub_of[pos]] for t in cell):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            continue
        t_sat = next((t for t in u_set if t[root]), None)
        if t_sat is None:
            continue
        return u_set, t_sat
    return None


def _build_witness(u_set, t_sat, sf, idx, agents, iprof, cfg):
    names = [f"w{k}" for k in range(len(u_set))]
    world_of = dict(zip(map(tuple, u_set), names))
    partitions = {}
    for a in agents:
        cells = {}
        for t, w in zip(u_set, names):
            cells.setdefault(iprof(t, a), set()).add(w)
        partitions[a] = tuple(frozenset(c) for c in cells.values())
    valuation = {}
    for i, s in enumerate(sf):
        if isinstance(s, Atom):
            valuation[s.name] = frozenset(
                w for t, w in zip(u_set, names) if t[i])
    model = MomentModel(tuple(names), partitions, valuation,
                        cfg.agent_universe)
    return model, world_of[tuple(t_sat)]


def valid(f, cfg=None):
    """True iff the negation is unsatisfiable."""
    cfg = cfg or SolverConfig()
    return sat(Not(f), cfg).verdict == "UNSAT"


def sat_single_agent(f, cfg=None):
    """Single-agent decision with a quadratic witness bound.

    The engine result is pruned down to the witnesses the closure
    conditions actually need: one world making f true, one refuting world
    per false settledness formula, and per surviving choice cell one
    refuting world for each false agentive formula.  That keeps the
    witness within length(f)**2 worlds.
    """
    cfg = cfg or SolverConfig(agent_universe=1)
    if cfg.agent_universe != 1:
        raise ValueError("sat_single_agent requires agent_universe=1")
    if len(syntax.agents(f)) > 1:
        raise ValueError("formula uses more than one agent")
    res = sat(f, cfg)
    if res.verdict != "SAT":
        return res
    model, world = res.witness
    model, world = _prune_single_agent(model, world, f)
    assert mc(model, world, f) is True
    bound = syntax.length(f) ** 2
    res.stats["witness_worlds"] = len(model.worlds)
    res.stats["quadratic_bound"] = bound
    res.stats["quadratic_ok"] = len(model.worlds) <= bound
    return SatResult("SAT", (model, world), res.stats)


def _prune_single_agent(model, world, f):
    g = syntax.expand_dstit(f)
    sf = syntax.subformulas(g)
    agents = sorted(syntax.agents(g))
    keep = {world}
    # refute every settledness formula that is false somewhere
    for s in sf:
        if isinstance(s, Box) and not mc(model, world, s):
            keep.add(next(w for w in model.worlds
                          if not mc(model, w, s.sub)))
    # within each touched cell, refute every false agentive formula
    for a in agents:
        for w in list(keep):
            cell = model.cell(a, w)
            for s in sf:
                if isinstance(s, Cstit) and s.agent == a \
                        and not mc(model, w, s):
                    keep.add(next(u for u in sorted(cell)
                                  if not mc(model, u, s.sub)))
    order = [w for w in model.worlds if w in keep]
    partitions = {a: tuple(c & keep for c in model.partitions[a]
                           if c & keep)
                  for a in model.partitions}
    valuation = {p: ws & keep for p, ws in model.valuation.items()}
    return MomentModel(tuple(order), partitions, valuation,
                       model.agent_universe), world


# -- frame enumeration for the oracle --------------------------------------

@lru_cache(maxsize=None)
def _mask_partitions(n):
    out = []
    for cells in set_partitions(range(n)):
        out.append(tuple(sum(1 << i for i in c) for c in cells))
    return tuple(out)


def _rectangular(parts):
    """Every choice of one cell per agent intersects."""
    for combo in itertools.product(*parts):
        inter = ~0
        for c in combo:
            inter &= c
        if not inter:
            return False
    return True


def _components(parts, n):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for cells in parts:
        for c in cells:
            bits = [i for i in range(n) if (c >> i) & 1]
            for other in bits[1:]:
                parent[find(other)] = find(bits[0])
    comp = {}
    for i in range(n):
        comp.setdefault(find(i), 0)
        comp[find(i)] |= 1 << i
    return tuple(sorted(comp.values()))


def _cell_of(cells, i):
    for c in cells:
        if (c >> i) & 1:
            return c
    raise ValueError


def _frame_gpp(parts, n):
    """Direct permutation-property check on bitmask partitions."""
    a = len(parts)
    for l in range(a):
        for m in range(a):
            for w in range(n):
                cw = _cell_of(parts[l], w)
                reach = 0
                for u in range(n):
                    if (cw >> u) & 1:
                        reach |= _cell_of(parts[m], u)
                for v in range(n):
                    if not (reach >> v) & 1:
                        continue
                    for nn in range(a):
                        need = _cell_of(parts[nn], w)
                        for i in range(a):
                            if i != nn:
                                need &= _cell_of(parts[i], v)
                        if not need:
                            return False
    return True


def _canonical(parts, n):
    best = None
    for perm in itertools.permutations(range(n)):
        remapped = tuple(
            tuple(sorted(sum(1 << perm[i] for i in range(n) if (c >> i) & 1)
                         for c in cells))
            for cells in parts)
        if best is None or remapped < best:
            best = remapped
    return best


@lru_cache(maxsize=None)
def moment_frames(n, n_agents):
    """Single-class frames: rectangular partition tuples, deduplicated up
    to world renaming.  Settledness is the full cell."""
    full = (1 << n) - 1
    seen = set()
    out = []
    for parts in itertools.product(*(
            _mask_partitions(n) for _ in range(n_agents))):
        if n_agents >= 2 and not _rectangular(parts):
            continue
        key = _canonical(parts, n)
        if key in seen:
            continue
        seen.add(key)
        out.append(kernel.Frame(n, parts + ((full,),)))
    return tuple(out)


@lru_cache(maxsize=None)
def general_frames(n, n_agents):
    """Multi-class frames with the permutation property, deduplicated.

    With fewer than two agents the settledness relation is universal by
    convention, so this coincides with moment_frames."""
    if n_agents < 2:
        return moment_frames(n, max(n_agents, 0))
    seen = set()
    out = []
    for parts in itertools.product(*(
            _mask_partitions(n) for _ in range(n_agents))):
        if not _frame_gpp(parts, n):
            continue
        key = _canonical(parts, n)
        if key in seen:
            continue
        seen.add(key)
        out.append(kernel.Frame(n, parts + (_components(parts, n),)))
    return tuple(out)


def _frame_model(frame, v, atom_names, agents, cfg, moment):
    n = frame.n_points
    names = tuple(f"w{i}" for i in range(n))

    def unmask(mask):
        return frozenset(names[i] for i in range(n) if (mask >> i) & 1)

    rels = {a: tuple(unmask(c) for c in frame.blocks[k])
            for k, a in enumerate(agents)}
    val_masks = kernel.decode_valuation(v, n, atom_names)
    valuation = {p: unmask(m) for p, m in val_masks.items()}
    if moment:
        return MomentModel(names, rels, valuation, cfg.agent_universe)
    return KripkeModel(names, rels, valuation, cfg.agent_universe)


def oracle(f, max_worlds, cfg=None, model_class="both"):
    """Independent brute force: every frame up to max_worlds, every
    valuation of the formula's atoms, streamed through the kernel."""
    cfg = cfg or SolverConfig()
    _check_agents(f, cfg)
    if max_worlds > ORACLE_MAX_WORLDS:
        raise ValueError(f"max_worlds {max_worlds} exceeds oracle cap "
                         f"{ORACLE_MAX_WORLDS}")
    agents = sorted(syntax.agents(f))
    atom_names = sorted(syntax.atoms(f))
    if max_worlds * len(atom_names) > kernel.MAX_VALUATION_BITS:
        raise ValueError(
            f"{len(atom_names)} atoms at {max_worlds} worlds exceeds the "
            f"oracle valuation budget of {kernel.MAX_VALUATION_BITS} bits")
    ops, args = kernel.compile_formula(
        f, {p: k for k, p in enumerate(atom_names)},
        {a: k for k, a in enumerate(agents)})
    classes = []
    if model_class in ("both", "moment"):
        classes.append(("moment", moment_frames))
    if model_class in ("both", "general"):
        classes.append(("general", general_frames))
    stats = {"engine": "oracle", "frames": 0, "max_worlds": max_worlds}
    for n in range(1, max_worlds + 1):
        for label, frames_of in classes:
            for frame in frames_of(n, len(agents)):
                stats["frames"] += 1
                hit = kernel.scan_sat(ops, args, frame, len(atom_names))
                if hit is None:
                    continue
                v, point = hit
                model = _frame_model(frame, v, atom_names, agents, cfg,
                                     label == "moment")
                world = model.worlds[point]
                assert mc(model, world, f) is True, "oracle witness failed"
                return SatResult("SAT", (model, world), stats)
    return SatResult("UNSAT", None, stats)


def product_sat(f, max_cells, cfg=None):
    """Two-agent cross-check over full product frames.

    Worlds are pairs (row, column); agent 0 chooses the row, agent 1 the
    column.  Returns SAT iff some product frame with at most max_cells
    cells per agent satisfies f under some valuation.
    """
    cfg = cfg or SolverConfig()
    if not syntax.agents(f) <= {0, 1}:
        raise ValueError("product check needs agents within {0, 1}")
    atom_names = sorted(syntax.atoms(f))
    ops, args = kernel.compile_formula(
        f, {p: k for k, p in enumerate(atom_names)}, {0: 0, 1: 1})
    for rows in range(1, max_cells + 1):
        for cols in range(1, max_cells + 1):
            n = rows * cols
            if n * len(atom_names) > kernel.MAX_VALUATION_BITS:
                continue
            row_cells = tuple(
                sum(1 << (r * cols + c) for c in range(cols))
                for r in range(rows))
            col_cells = tuple(
                sum(1 << (r * cols + c) for r in range(rows))
                for c in range(cols))
            frame = kernel.Frame(
                n, (row_cells, col_cells, ((1 << n) - 1,)))
            if kernel.scan_sat(ops, args, frame, len(atom_names)):
                return SatResult("SAT", None,
                                 {"engine": "product", "rows": rows,
                                  "cols": cols})
    return SatResult("UNSAT", None, {"engine": "product"})
