"""Cut ratios, exact multiway isoperimetric constants, and sweep-cut rounding.

h_k is the smallest achievable value, over families of k pairwise-disjoint
nonempty vertex subsets, of the largest cut ratio c(A) = w(boundary)/mu(A)
in the family.  Subsets are not required to cover the vertex set.  Exact
values are computed by enumeration over subset masks (a 2^n cut table plus a
3^n min-max packing recursion), capped at n <= 14; beyond the cap a greedy
spectral heuristic is available and clearly labeled non-exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from . import kernels, nodal, plaplacian
from .graph import Graph, subset_indices, tau

if TYPE_CHECKING:
    from .eigensolver import Spectrum

EXACT_HK_CAP = 14


class ExactCapExceeded(ValueError):
    """Graph too large for exact multiway enumeration."""


def cut_ratio(g: Graph, subset: Iterable[int]) -> float:
    """Boundary weight of A over its measure; c(V) = 0."""
    idx = subset_indices(g, subset)
    member = np.zeros(g.n, dtype=bool)
    member[idx] = True
    crossing = member[g.edges_u] != member[g.edges_v]
    return float(np.sum(g.edges_w[crossing]) / np.sum(g.mu[idx]))


def validate_family(g: Graph, subsets: Sequence[Iterable[int]]) -> list[frozenset[int]]:
    """Check a family of k nonempty pairwise-disjoint vertex subsets."""
    fam = [frozenset(int(v) for v in s) for s in subsets]
    if not fam:
        raise ValueError("family must contain at least one subset")
    seen: set[int] = set()
    for s in fam:
        if not s:
            raise ValueError("family subsets must be nonempty")
        if any(v < 1 or v > g.n for v in s):
            raise ValueError(f"subset vertex out of range 1..{g.n}")
        if seen & s:
            raise ValueError("family subsets must be pairwise disjoint")
        seen |= s
    return fam


def _ratio_table(g: Graph) -> np.ndarray:
    cut, mass = kernels.subset_tables(g.n, g.edges_u, g.edges_v, g.edges_w, g.mu)
    ratio = np.empty(1 << g.n)
    ratio[0] = np.inf  # the empty subset is not a valid family member
    ratio[1:] = cut[1:] / mass[1:]
    return ratio


def _mask_to_subset(mask: int) -> frozenset[int]:
    return frozenset(i + 1 for i in range(mask.bit_length()) if (mask >> i) & 1)


def _subset_key(mask: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(mask.bit_length()) if (mask >> i) & 1)


def _reconstruct_family(ratio: np.ndarray, dp: np.ndarray, k: int, n: int) -> list[int]:
    """Lexicographically smallest optimal family (masks), given the dp table."""
    target = dp[k, (1 << n) - 1]
    mask = (1 << n) - 1
    chosen: list[int] = []
    for j in range(k, 0, -1):
        subs = []
        s = mask
        while s:
            if ratio[s] <= target and dp[j - 1, mask ^ s] <= target:
                subs.append(s)
            s = (s - 1) & mask
        pick = min(subs, key=_subset_key)
        chosen.append(pick)
        mask ^= pick
    chosen.sort(key=_subset_key)
    return chosen


def multiway_cheeger_all(g: Graph, kmax: int | None = None):
    """Exact (h_k, optimal family) for k = 1..kmax in one enumeration pass.

    Ties are broken by the lexicographically smallest family of sorted
    vertex tuples, so reports are reproducible.
    """
    kmax = g.n if kmax is None else kmax
    if not 1 <= kmax <= g.n:
        raise ValueError(f"k must satisfy 1 <= k <= {g.n}, got {kmax}")
    if g.n > EXACT_HK_CAP:
        raise ExactCapExceeded(
            f"exact enumeration capped at n <= {EXACT_HK_CAP}, got n = {g.n}")
    ratio = _ratio_table(g)
    dp = kernels.family_minmax_dp(ratio, kmax)
    out = []
    for k in range(1, kmax + 1):
        masks = _reconstruct_family(ratio, dp, k, g.n)
        out.append((float(dp[k, (1 << g.n) - 1]),
                    tuple(_mask_to_subset(m) for m in masks)))
    return out


def multiway_cheeger(g: Graph, k: int):
    """Exact k-way isoperimetric constant and an optimal family."""
    return multiway_cheeger_all(g, k)[k - 1]


def multiway_cheeger_greedy(g: Graph, k: int):
    """Heuristic upper bound for n beyond the exact cap.  NOT exact.

    Orders vertices by the second eigenvector of the p=2 pair and splits the
    order into k contiguous blocks.
    """
    if not 1 <= k <= g.n:
        raise ValueError(f"k must satisfy 1 <= k <= {g.n}, got {k}")
    from .eigensolver import solve_p2_spectrum
    if k == 1:
        fam = (frozenset(range(1, g.n + 1)),)
        return max(cut_ratio(g, s) for s in fam), fam
    fiedler = solve_p2_spectrum(g).pairs[1].f
    order = np.argsort(fiedler, kind="stable")
    blocks = np.array_split(order, k)
    fam = tuple(frozenset(int(v) + 1 for v in b) for b in blocks)
    return max(cut_ratio(g, s) for s in fam), fam


def sweep_cut(g: Graph, f, p: float):
    """Best threshold set A = {u : |f(u)|^p > t} over all distinct thresholds.

    Only the n distinct values of |f(u)|^p (plus 0) matter since the
    threshold set is piecewise constant in t.  The returned cut always
    satisfies c(A) <= p * R_p(f)^(1/p) * (tau/2)^(1/q).
    """
    arr = plaplacian._as_vertex_function(g, f)
    levels = np.abs(arr) ** p
    if np.max(levels) == 0.0:
        raise ValueError("sweep cut undefined for the zero function")
    member = np.zeros(g.n, dtype=bool)
    order = sorted(range(g.n), key=lambda u: (-levels[u], u))
    adj_w = [{} for _ in range(g.n)]
    for u, v, w in zip(g.edges_u, g.edges_v, g.edges_w):
        adj_w[u][int(v)] = w
        adj_w[v][int(u)] = w
    best_c = np.inf
    best_prefix = 0
    cut = 0.0
    mass = 0.0
    for i, u in enumerate(order):
        if levels[u] == 0.0:
            break
        for v, w in adj_w[u].items():
            cut += -w if member[v] else w
        member[u] = True
        mass += g.mu[u]
        last_of_level = i + 1 == g.n or levels[order[i + 1]] < levels[u]
        if last_of_level:
            c = cut / mass
            if c < best_c:
                best_c = c
                best_prefix = i + 1
    subset = frozenset(int(u) + 1 for u in order[:best_prefix])
    return subset, float(best_c)


def sweep_bound(g: Graph, f, p: float) -> float:
    """p * R_p(f)^(1/p) * (tau/2)^(1/q) with q the Holder conjugate of p."""
    if p <= 1:
        raise ValueError(f"sweep bound requires p > 1, got {p}")
    q = p / (p - 1.0)
    r = plaplacian.rayleigh_quotient(g, f, p)
    return p * r ** (1.0 / p) * (tau(g) / 2.0) ** (1.0 / q)


@dataclass(frozen=True)
class CheegerCertificate:
    """One instance of the two-sided bound linking lambda_k to h_k and h_m."""
    p: float
    k: int
    lam: float
    m: int          # strong nodal domain count of the k-th eigenfunction
    h_k: float
    h_m: float
    tau: float
    lower: float    # (2/tau)^(p-1) (h_m/p)^p
    upper: float    # 2^(p-1) h_k
    lower_ok: bool
    upper_ok: bool

    @property
    def passed(self) -> bool:
        return self.lower_ok and self.upper_ok


def certify_cheeger(
    g: Graph,
    spectrum: "Spectrum",
    zero_tol: float | None = None,
    hk_values: Sequence[float] | None = None,
    tol_base: float = 1e-9,
) -> list[CheegerCertificate]:
    """Evaluate the two-sided isoperimetric bound for every pair in a spectrum.

    Pass tolerance is tol_base + 1e-6 * lambda_k on each side.  hk_values
    may carry precomputed exact constants h_1..h_n to avoid re-enumeration.
    """
    if spectrum.graph is not g and spectrum.graph != g:
        raise ValueError("spectrum was computed on a different graph")
    p = spectrum.p
    if p <= 1:
        raise ValueError("the two-sided bound is certified for p > 1 only")
    for pair in spectrum.pairs:
        if pair.residual > 1e-8:
            raise ValueError(f"pair residual {pair.residual:.3g} exceeds 1e-8")
    if hk_values is None:
        hk_values = [h for h, _ in multiway_cheeger_all(g, g.n)]
    t = tau(g)
    certs = []
    for i, pair in enumerate(spectrum.pairs):
        k = i + 1
        m = nodal.strong_nodal_domains(g, pair.f, zero_tol).count
        h_k = float(hk_values[k - 1])
        h_m = float(hk_values[m - 1])
        lower = (2.0 / t) ** (p - 1.0) * (h_m / p) ** p
        upper = 2.0 ** (p - 1.0) * h_k
        tol = tol_base + 1e-6 * abs(pair.lam)
        certs.append(CheegerCertificate(
            p=p, k=k, lam=float(pair.lam), m=m, h_k=h_k, h_m=h_m, tau=t,
            lower=lower, upper=upper,
            lower_ok=bool(lower - tol <= pair.lam),
            upper_ok=bool(pair.lam <= upper + tol),
        ))
    return certs
