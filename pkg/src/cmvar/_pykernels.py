"""Pure-Python implementations of the hot kernels.

These mirror ``_ckernels.pyx`` line for line and are used whenever the
compiled extension is unavailable (or ``CMVAR_PURE_PYTHON=1``).
"""


def pebble_game(n, edges):
    """Run the (2,3)-pebble game on ``edges`` (0-based vertex pairs).

    Returns ``(independent, failed_edge, reach)``. ``failed_edge`` is the
    index of the first rejected edge (-1 if all edges were accepted) and
    ``reach`` is the sorted vertex set reachable from its endpoints at the
    moment of rejection. That set, together with the rejected edge, spans
    more than ``2k - 3`` edges.
    """
    out = [[-1, -1] for _ in range(n)]

    def free(v):
        return (out[v][0] < 0) + (out[v][1] < 0)

    def search(root, blocked):
        # DFS along out-edges for a vertex holding a free pebble.
        parent = {root: None}
        stack = [root]
        parent[blocked] = None
        while stack:
            x = stack.pop()
            for slot in (0, 1):
                w = out[x][slot]
                if w < 0 or w in parent:
                    continue
                parent[w] = (x, slot)
                if free(w):
                    cur = w
                    while cur != root:
                        px, pslot = parent[cur]
                        fs = 0 if out[cur][0] < 0 else 1
                        out[cur][fs] = px
                        out[px][pslot] = -1
                        cur = px
                    return True
                stack.append(w)
        return False

    for idx, (u, v) in enumerate(edges):
        while free(u) < 2 and search(u, v):
            pass
        while free(v) < 2 and search(v, u):
            pass
        if free(u) + free(v) < 4:
            seen = {u, v}
            stack = [u, v]
            while stack:
                x = stack.pop()
                for w in out[x]:
                    if w >= 0 and w not in seen:
                        seen.add(w)
                        stack.append(w)
            return False, idx, sorted(seen)
        slot = 0 if out[u][0] < 0 else 1
        out[u][slot] = v
    return True, -1, []


def sparsity_violation(n, edges):
    """Exhaustive scan: first vertex subset (bitmask, k >= 2) spanning > 2k-3 edges.

    Returns -1 when no subset violates the count.
    """
    masks = [(1 << u) | (1 << v) for u, v in edges]
    for mask in range(1, 1 << n):
        k = bin(mask).count("1")
        if k < 2:
            continue
        inside = 0
        for em in masks:
            if mask & em == em:
                inside += 1
        if inside > 2 * k - 3:
            return mask
    return -1


def wall_scan(q, tol, max_witnesses):
    """Branch-and-bound scan of sign vectors with the first sign fixed to +1.

    ``q`` must be sorted in decreasing order. Returns ``(best, count,
    witnesses)`` where ``best`` is min |sum eps_i q_i|, ``count`` the number
    of sign classes within ``tol`` and ``witnesses`` up to ``max_witnesses``
    bitmasks (bit i set means eps_i = -1).
    """
    n = len(q)
    rem = [0.0] * (n + 1)
    for i in range(n - 1, -1, -1):
        rem[i] = rem[i + 1] + q[i]
    best = float("inf")
    count = 0
    witnesses = []

    # explicit stack of (depth, partial, mask)
    stack = [(1, q[0], 0)]
    while stack:
        depth, s, mask = stack.pop()
        if depth == n:
            val = abs(s)
            if val < best:
                best = val
            if val <= tol:
                count += 1
                if len(witnesses) < max_witnesses:
                    witnesses.append(mask)
            continue
        bound = best if best > tol else tol
        if abs(s) - rem[depth] > bound:
            continue
        stack.append((depth + 1, s - q[depth], mask | (1 << depth)))
        stack.append((depth + 1, s + q[depth], mask))
    return best, count, witnesses
