# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend: one tight loop over all valuations of a frame.

Same contract as stitkit._pykernel.scan, see there for the semantics.
"""

from libc.stdlib cimport free, malloc


def scan(ops, args, int n_points, blocks, int n_atoms, bint want_sat):
    cdef int prog_len = len(ops)
    cdef int n_rels = len(blocks)
    cdef int n_cells = 0
    cdef int i, j, k
    for i in range(n_rels):
        n_cells += len(blocks[i])

    cdef int *cops = <int *> malloc(prog_len * sizeof(int))
    cdef int *cargs = <int *> malloc(prog_len * sizeof(int))
    cdef int *off = <int *> malloc((n_rels + 1) * sizeof(int))
    cdef unsigned int *cells = <unsigned int *> malloc(
        n_cells * sizeof(unsigned int))
    cdef unsigned int *stack = <unsigned int *> malloc(
        (prog_len + 2) * sizeof(unsigned int))
    if not (cops and cargs and off and cells and stack):
        free(cops); free(cargs); free(off); free(cells); free(stack)
        raise MemoryError()

    for i in range(prog_len):
        cops[i] = ops[i]
        cargs[i] = args[i]
    k = 0
    for i in range(n_rels):
        off[i] = k
        for cell in blocks[i]:
            cells[k] = cell
            k += 1
    off[n_rels] = k

    cdef unsigned long long nv = 1ULL << (n_atoms * n_points)
    cdef unsigned int full = (1u << n_points) - 1
    cdef unsigned long long v
    cdef unsigned int res, m, acc, c, tmp, probe
    cdef int sp, op, arg, point
    cdef long long hit_v = -1
    cdef int hit_point = 0

    try:
        for v in range(nv):
            sp = 0
            for i in range(prog_len):
                op = cops[i]
                arg = cargs[i]
                if op == 0:  # ATOM
                    if arg < 0:
                        stack[sp] = 0
                    else:
                        stack[sp] = <unsigned int> (
                            (v >> (arg * n_points)) & full)
                    sp += 1
                elif op == 1:  # NOT
                    stack[sp - 1] = full & ~stack[sp - 1]
                elif op == 2:  # AND
                    sp -= 1
                    stack[sp - 1] &= stack[sp]
                elif op == 3:  # ALLBLOCK
                    m = stack[sp - 1]
                    acc = 0
                    for j in range(off[arg], off[arg + 1]):
                        c = cells[j]
                        if (m & c) == c:
                            acc |= c
                    stack[sp - 1] = acc
                elif op == 4:  # DUP
                    stack[sp] = stack[sp - 1]
                    sp += 1
                else:  # SWAP
                    tmp = stack[sp - 1]
                    stack[sp - 1] = stack[sp - 2]
                    stack[sp - 2] = tmp
            res = stack[0]
            probe = res if want_sat else (full & ~res)
            if probe:
                point = 0
                while not (probe >> point) & 1u:
                    point += 1
                hit_v = <long long> v
                hit_point = point
                break
    finally:
        free(cops)
        free(cargs)
        free(off)
        free(cells)
        free(stack)

    if hit_v < 0:
        return None
    return hit_v, hit_point
