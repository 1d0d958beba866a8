"""Pure-Python versions of the compiled collision loops (same signatures)."""
from __future__ import annotations

import math


def first_collision(lo_tab, hi_tab, nlo, total, inv_h, L, guard, exact_key):
    m = lo_tab.shape[1]
    lo_rows = lo_tab.tolist()
    hi_rows = hi_tab.tolist()
    lo_mask = (1 << nlo) - 1
    seen: dict[int, int] = {}
    floor = math.floor
    for t in range(total):
        lo_row = lo_rows[t & lo_mask]
        hi_row = hi_rows[t >> nlo]
        key = 0
        mult = 1
        for j in range(m):
            q = (lo_row[j] + hi_row[j]) * inv_h
            fq = floor(q)
            r = q - fq
            tol = guard * (1.0 + q)
            if r < tol or 1.0 - r < tol:
                key = exact_key(t)
                break
            c = min(max(fq, 0), L - 1)
            key += c * mult
            mult *= L
        prev = seen.get(key)
        if prev is not None:
            return prev, t, t + 1, len(seen)
        seen[key] = t
    return -1, -1, total, len(seen)


def window_sweep(A, B, h, slack, skip_a, skip_b, budget, verify):
    if budget <= 0:
        return -1, -1, 0
    nA, m = A.shape
    nB = B.shape[0]
    lim = h + slack
    Ar = A.tolist()
    Br = B.tolist()
    lo = 0
    checks = 0
    for i in range(nA):
        arow = Ar[i]
        a0 = arow[0]
        while lo < nB and Br[lo][0] <= a0 - lim:
            lo += 1
        j = lo
        while j < nB and Br[j][0] < a0 + lim:
            checks += 1
            if not (i == skip_a and j == skip_b):
                brow = Br[j]
                if all(abs(arow[c] - brow[c]) < lim for c in range(1, m)) and verify(i, j):
                    return i, j, checks
            if checks >= budget:
                return -1, -1, checks
            j += 1
    return -1, -1, checks
