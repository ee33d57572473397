"""Pure-Python walk kernel: fallback twin of the compiled extension.

Both kernels must consume one uniform draw per step and perform the score
accumulation in the same order, so a walk is bit-identical whichever
backend happens to be importable.
"""

from __future__ import annotations


def _adjacent(indices, lo: int, hi: int, x: int) -> bool:
    """Binary search for x in the sorted slice indices[lo:hi]."""
    end = hi
    while lo < hi:
        mid = (lo + hi) // 2
        if indices[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo < end and indices[lo] == x


def walk(indptr, indices, weights, start, prev0, p, q, uniforms, out):
    """Fill `out` with a biased second-order walk of len(uniforms) steps.

    Neighbor x of the current node scores weight * alpha, with alpha = 1/p
    when x is the previous node, 1 when x neighbors the previous node, and
    1/q otherwise; the first step (prev0 < 0) is a plain weighted step.
    uniforms[i] selects step i by inverse CDF over the running score sum.
    """
    inv_p = 1.0 / p
    inv_q = 1.0 / q
    steps = len(uniforms)
    out[0] = start
    prev = int(prev0)
    curr = int(start)
    for i in range(steps):
        lo = int(indptr[curr])
        hi = int(indptr[curr + 1])
        deg = hi - lo
        scores = [0.0] * deg
        total = 0.0
        if prev < 0:
            for j in range(deg):
                s = float(weights[lo + j])
                scores[j] = s
                total += s
        else:
            plo = int(indptr[prev])
            phi = int(indptr[prev + 1])
            for j in range(deg):
                x = int(indices[lo + j])
                if x == prev:
                    alpha = inv_p
                elif _adjacent(indices, plo, phi, x):
                    alpha = 1.0
                else:
                    alpha = inv_q
                s = float(weights[lo + j]) * alpha
                scores[j] = s
                total += s
        target = float(uniforms[i]) * total
        cum = 0.0
        nxt = int(indices[hi - 1])  # fallback against rounding at the far edge
        for j in range(deg):
            cum += scores[j]
            if cum > target:
                nxt = int(indices[lo + j])
                break
        out[i + 1] = nxt
        prev = curr
        curr = nxt
