"""Independent oracles the solvers are checked against.

Everything here sticks to first principles (closed forms, exact polynomial
arithmetic, finite differences, unpruned enumeration) and never calls the
code paths under test.
"""

from fractions import Fraction

import numpy as np

from plap import rayleigh_quotient


def p2_path_eigenvalues(n):
    """Closed form 2 - 2 cos(pi (k-1)/n) for the unit path, k = 1..n."""
    return [2.0 - 2.0 * np.cos(np.pi * k / n) for k in range(n)]


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def _poly_sub(a, b):
    out = list(a) + [Fraction(0)] * max(0, len(b) - len(a))
    for j, bj in enumerate(b):
        out[j] -= bj
    return out


def path_p2_charpoly(n):
    """Characteristic polynomial of the unit-path p=2 operator, exactly.

    Uses the tridiagonal determinant recurrence d_k = (a_k - x) d_{k-1} -
    d_{k-2} with integer diagonal (1, 2, ..., 2, 1); coefficients ascending.
    """
    diag = [1] + [2] * (n - 2) + [1]
    d_prev = [Fraction(1)]
    d = [Fraction(diag[0]), Fraction(-1)]  # a_1 - x
    for k in range(1, n):
        term = _poly_mul([Fraction(diag[k]), Fraction(-1)], d)
        d, d_prev = _poly_sub(term, d_prev), d
    return d


def charpoly_roots(coeffs):
    """Real roots of an exact polynomial via numpy on descending floats."""
    desc = [float(c) for c in reversed(coeffs)]
    roots = np.roots(desc)
    return sorted(float(r.real) for r in roots)


def cut_ratio_direct(g, members):
    """Boundary-over-measure from a plain edge loop (no subset tables)."""
    boundary = 0.0
    for u, v, w in zip(g.edges_u, g.edges_v, g.edges_w):
        if members[u] != members[v]:
            boundary += w
    return boundary / float(np.sum(g.mu[members]))


def naive_multiway(g, kmax):
    """Unpruned enumeration of families of disjoint nonempty subsets.

    Families are walked in canonical order (increasing minimum element per
    subset), so each family of each size appears exactly once.  Returns
    best[k] for k = 1..kmax.
    """
    n = g.n
    full = (1 << n) - 1
    ratio = {}
    for mask in range(1, full + 1):
        members = np.array([(mask >> i) & 1 for i in range(n)], dtype=bool)
        ratio[mask] = cut_ratio_direct(g, members)
    best = [np.inf] * (kmax + 1)

    def rec(avail, depth, cur_max, min_v):
        if depth >= 1:
            best[depth] = min(best[depth], cur_max)
        if depth == kmax:
            return
        for v in range(min_v, n):
            if not (avail >> v) & 1:
                continue
            higher = avail & ~((1 << (v + 1)) - 1)
            sub = higher
            while True:
                s = (1 << v) | sub
                rec(avail & ~s, depth + 1, max(cur_max, ratio[s]), v + 1)
                if sub == 0:
                    break
                sub = (sub - 1) & higher

    rec(full, 0, 0.0, 0)
    return best[1:]


def fd_gradient(g, f, p, h=1e-6):
    """Central finite differences of the Rayleigh quotient."""
    f = np.asarray(f, dtype=np.float64)
    out = np.empty(len(f))
    for u in range(len(f)):
        fp = f.copy()
        fp[u] += h
        fm = f.copy()
        fm[u] -= h
        out[u] = (rayleigh_quotient(g, fp, p) - rayleigh_quotient(g, fm, p)) / (2 * h)
    return out
