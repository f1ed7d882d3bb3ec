# cython: language_level=3
"""Compiled kernels: (2,3)-pebble game, exhaustive sparsity scan, wall scan.

Behaviour is identical to ``cmvar._pykernels``; see that module for the
contracts.
"""

from libc.math cimport fabs, INFINITY
from libc.stdlib cimport malloc, free as cfree


cdef inline int _free(int[:, ::1] out, int v) nogil:
    return (out[v, 0] < 0) + (out[v, 1] < 0)


cdef bint _search(int[:, ::1] out, int root, int blocked,
                  int[::1] par, int[::1] pslot, int[::1] seen,
                  int[::1] stack, int stamp):
    cdef int top = 0, x, w, slot, cur, px, ps, fs
    seen[root] = stamp
    seen[blocked] = stamp
    stack[top] = root
    top += 1
    while top > 0:
        top -= 1
        x = stack[top]
        for slot in range(2):
            w = out[x, slot]
            if w < 0 or seen[w] == stamp:
                continue
            seen[w] = stamp
            par[w] = x
            pslot[w] = slot
            if _free(out, w):
                cur = w
                while cur != root:
                    px = par[cur]
                    ps = pslot[cur]
                    fs = 0 if out[cur, 0] < 0 else 1
                    out[cur, fs] = px
                    out[px, ps] = -1
                    cur = px
                return True
            stack[top] = w
            top += 1
    return False


def pebble_game(int n, edges):
    cdef int m = len(edges)
    cdef int[:, ::1] out
    cdef int[::1] par, pslot, seen, stack
    cdef int idx, u, v, slot, stamp = 0, x, w, top
    import array
    out_buf = array.array("i", [-1] * (2 * max(n, 1)))
    out = memoryview(out_buf).cast("B").cast("i", (max(n, 1), 2))
    par = array.array("i", [0] * max(n, 1))
    pslot = array.array("i", [0] * max(n, 1))
    seen = array.array("i", [0] * max(n, 1))
    stack = array.array("i", [0] * (2 * max(n, 1) + 2))
    for idx in range(m):
        u = edges[idx][0]
        v = edges[idx][1]
        while _free(out, u) < 2:
            stamp += 1
            if not _search(out, u, v, par, pslot, seen, stack, stamp):
                break
        while _free(out, v) < 2:
            stamp += 1
            if not _search(out, v, u, par, pslot, seen, stack, stamp):
                break
        if _free(out, u) + _free(out, v) < 4:
            stamp += 1
            seen[u] = stamp
            seen[v] = stamp
            reach = [u, v]
            top = 0
            stack[top] = u
            stack[top + 1] = v
            top = 2
            while top > 0:
                top -= 1
                x = stack[top]
                for slot in range(2):
                    w = out[x, slot]
                    if w >= 0 and seen[w] != stamp:
                        seen[w] = stamp
                        reach.append(w)
                        stack[top] = w
                        top += 1
            return False, idx, sorted(reach)
        slot = 0 if out[u, 0] < 0 else 1
        out[u, slot] = v
    return True, -1, []


def sparsity_violation(int n, edges):
    cdef int m = len(edges)
    cdef long long *masks = <long long *> malloc(max(m, 1) * sizeof(long long))
    cdef long long mask, em, top = (<long long> 1) << n
    cdef int k, inside, e
    if masks == NULL:
        raise MemoryError()
    try:
        for e in range(m):
            masks[e] = ((<long long> 1) << edges[e][0]) | ((<long long> 1) << edges[e][1])
        mask = 1
        while mask < top:
            k = 0
            em = mask
            while em:
                em &= em - 1
                k += 1
            if k >= 2:
                inside = 0
                for e in range(m):
                    if (mask & masks[e]) == masks[e]:
                        inside += 1
                if inside > 2 * k - 3:
                    return mask
            mask += 1
        return -1
    finally:
        cfree(masks)


cdef struct WallState:
    int n
    double *q
    double *rem
    double tol
    double best
    long long count
    long long max_witnesses
    long long nwit
    long long *wit


cdef void _wall(WallState *st, int depth, double s, long long mask) nogil:
    cdef double val, bound
    if depth == st.n:
        val = fabs(s)
        if val < st.best:
            st.best = val
        if val <= st.tol:
            st.count += 1
            if st.nwit < st.max_witnesses:
                st.wit[st.nwit] = mask
                st.nwit += 1
        return
    bound = st.best if st.best > st.tol else st.tol
    if fabs(s) - st.rem[depth] > bound:
        return
    _wall(st, depth + 1, s + st.q[depth], mask)
    _wall(st, depth + 1, s - st.q[depth], mask | ((<long long> 1) << depth))


def wall_scan(q, double tol, long long max_witnesses):
    cdef int n = len(q), i
    cdef WallState st
    st.n = n
    st.tol = tol
    st.best = INFINITY
    st.count = 0
    st.nwit = 0
    st.max_witnesses = max_witnesses
    st.q = <double *> malloc((n + 1) * sizeof(double))
    st.rem = <double *> malloc((n + 1) * sizeof(double))
    st.wit = <long long *> malloc((max_witnesses + 1) * sizeof(long long))
    if st.q == NULL or st.rem == NULL or st.wit == NULL:
        cfree(st.q)
        cfree(st.rem)
        cfree(st.wit)
        raise MemoryError()
    try:
        for i in range(n):
            st.q[i] = q[i]
        st.rem[n] = 0.0
        for i in range(n - 1, -1, -1):
            st.rem[i] = st.rem[i + 1] + st.q[i]
        with nogil:
            _wall(&st, 1, st.q[0], 0)
        return st.best, st.count, [st.wit[i] for i in range(st.nwit)]
    finally:
        cfree(st.q)
        cfree(st.rem)
        cfree(st.wit)
