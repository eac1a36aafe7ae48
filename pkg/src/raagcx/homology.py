"""Integer cellular homology of cube subcomplexes via Smith normal form."""
from __future__ import annotations

from collections import deque


def smith_diagonal(rows: list[list[int]]) -> list[int]:
    """Nonzero invariant factors of an integer matrix (each divides the next)."""
    A = [list(r) for r in rows if any(r)]
    if not A:
        return []
    m, n = len(A), len(A[0])
    diag = []
    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                if A[i][t]:
                    dirty = True
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    dirty = True
            if not dirty:
                # enforce divisibility of the remaining block
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
                if bad is None:
                    break
                A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
                continue
            # move the smallest remainder into the pivot position
            best = None
            for i in range(t, m):
                if A[i][t] and (best is None or abs(A[i][t]) < abs(A[best][t])):
                    best = i
            A[t], A[best] = A[best], A[t]
            bestj = None
            for j in range(t, n):
                if A[t][j] and (bestj is None or abs(A[t][j]) < abs(A[t][bestj])):
                    bestj = j
            for row in A:
                row[t], row[bestj] = row[bestj], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def boundary_matrices(B, cells) -> list[list[list[int]]]:
    """Boundary matrices d_k: C_k -> C_{k-1} of a face-closed cell set of B."""
    by_dim: dict[int, list] = {}
    for c in cells:
        by_dim.setdefault(len(c[0]), []).append(c)
    top = max(by_dim) if by_dim else -1
    for k in by_dim:
        by_dim[k].sort()
    index = {k: {c: i for i, c in enumerate(cs)} for k, cs in by_dim.items()}
    mats = []
    for k in range(1, top + 1):
        rows = len(by_dim.get(k - 1, []))
        cols = by_dim.get(k, [])
        M = [[0] * len(cols) for _ in range(rows)]
        for j, c in enumerate(cols):
            for s, f in B.boundary(c):
                if f not in index.get(k - 1, {}):
                    raise ValueError(f"cell set is not closed under faces at {f}")
                M[index[k - 1][f]][j] += s
        mats.append(M)
    return mats


def homology(B, cells) -> list[tuple[int, list[int]]]:
    """(rank, torsion coefficients) of H_k for k = 0..dim."""
    cells = list(cells)
    counts: dict[int, int] = {}
    for c in cells:
        counts[len(c[0])] = counts.get(len(c[0]), 0) + 1
    if not counts:
        return []
    top = max(counts)
    mats = boundary_matrices(B, cells)
    ranks, torsion = [], []
    for M in mats:
        d = smith_diagonal(M)
        ranks.append(len(d))
        torsion.append([x for x in d if x > 1])
    out = []
    for k in range(top + 1):
        rk_out = ranks[k - 1] if k >= 1 else 0
        rk_in = ranks[k] if k < len(ranks) else 0
        tors = torsion[k] if k < len(torsion) else []
        out.append((counts.get(k, 0) - rk_out - rk_in, tors))
    return out


def is_connected(B, cells) -> bool:
    verts = {c[1] for c in cells if not c[0]}
    if not verts:
        return False
    nb: dict[int, list[int]] = {r: [] for r in verts}
    for c in cells:
        if len(c[0]) == 1:
            h = B.head(c)
            nb[c[1]].append(h)
            nb[h].append(c[1])
    start = next(iter(verts))
    seen = {start}
    q = deque([start])
    while q:
        x = q.popleft()
        for y in nb[x]:
            if y not in seen:
                seen.add(y)
                q.append(y)
    return seen == verts


def acyclic_certificate(B, cells) -> bool:
    """Connected with vanishing reduced integer homology."""
    cells = list(cells)
    if not is_connected(B, cells):
        return False
    if all(len(c[0]) <= 1 for c in cells):
        nv = sum(1 for c in cells if not c[0])
        return nv - (len(cells) - nv) == 1
    H = homology(B, cells)
    return H[0] == (1, []) and all(h == (0, []) for h in H[1:])
