"""Pure-Python kernel backend.

Valuations are packed into one big integer per atom: each valuation
occupies a slot of ``n_points + 1`` bits (the top bit of a slot is a guard
kept at zero), and the whole program runs on all slots at once.  The
containment test inside ALLBLOCK uses the usual SWAR zero-detect,
``guard & ~((t | guard) - low_bits)``, which flags every slot whose cell
residue is empty without borrowing across slot boundaries.

Very large valuation spaces are processed in chunks of at most 2**16
slots so intermediate integers stay modest.
"""

from __future__ import annotations

from functools import lru_cache

_CHUNK_BITS = 16


@lru_cache(maxsize=None)
def _slot_lsb(n_slots, w):
    """Bit 0 of every slot, built by doubling."""
    out, have = 1, 1
    while have < n_slots:
        out |= out << (have * w)
        have *= 2
    return out


@lru_cache(maxsize=None)
def _atom_low(n_points, s, a):
    """Packed mask of atom ``a`` over the low ``s`` valuation bits.

    Slot k (for k in [0, 2**s)) holds ((k >> (a * n_points)) & ones),
    restricted to the bits of k below s.
    """
    w = n_points + 1
    lo, hi = a * n_points, (a + 1) * n_points
    x = 0
    for b in range(s):
        size = 1 << b
        d = (_slot_lsb(size, w) << (b - lo)) if lo <= b < hi else 0
        x = x | ((x | d) << (size * w))
    return x


def scan(ops, args, n_points, blocks, n_atoms, want_sat):
    """First hit over all valuations of the frame.

    With ``want_sat`` true, returns the first (valuation index, point)
    where the program holds; otherwise the first pair where it fails.
    Returns None when no such pair exists.
    """
    n = n_points
    w = n + 1
    ones = (1 << n) - 1
    total_bits = n_atoms * n
    s = min(total_bits, _CHUNK_BITS)
    n_slots = 1 << s
    low = _slot_lsb(n_slots, w)
    guard = low << n
    full = low * ones
    atom_low = [_atom_low(n, s, a) for a in range(n_atoms)]

    for base in range(0, 1 << total_bits, n_slots):
        atom_masks = []
        for a in range(n_atoms):
            hi = (base >> (a * n)) & ones
            atom_masks.append(atom_low[a] | (low * hi))
        res = _run(ops, args, blocks, atom_masks, low, guard, full, n)
        probe = res if want_sat else (full & ~res)
        if probe:
            bit = (probe & -probe).bit_length() - 1
            return base + bit // w, bit % w
    return None


def _run(ops, args, blocks, atom_masks, low, guard, full, n):
    stack = []
    for op, arg in zip(ops, args):
        if op == 0:  # ATOM
            stack.append(atom_masks[arg] if arg >= 0 else 0)
        elif op == 1:  # NOT
            stack[-1] = full & ~stack[-1]
        elif op == 2:  # AND
            b = stack.pop()
            stack[-1] &= b
        elif op == 3:  # ALLBLOCK
            m = stack[-1]
            acc = 0
            for cell in blocks[arg]:
                t = (low * cell) & ~m
                z = guard & ~((t | guard) - low)
                acc |= cell * (z >> n)
            stack[-1] = acc
        elif op == 4:  # DUP
            stack.append(stack[-1])
        else:  # SWAP
            stack[-1], stack[-2] = stack[-2], stack[-1]
    return stack[-1]
