"""Strong/weak nodal domains, generalized zeros, and nodal-count certification.

A strong nodal domain is a maximal connected component of {f > 0} or
{f < 0}; a weak nodal domain is a maximal connected component of {f >= 0}
or {f <= 0}.  Numeric eigenfunctions carry solver noise, so membership is
decided against a zero tolerance (default 1e-9 * max|f|).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable

import numpy as np

from . import plaplacian
from .graph import Graph, is_canonical_path, is_connected

if TYPE_CHECKING:
    from .eigensolver import Spectrum

DEFAULT_MULTIPLICITY_TOL = 1e-7
MAX_SIGN_PATTERN_DOMAINS = 12


@dataclass(frozen=True)
class NodalDecomposition:
    kind: str                                # "strong" or "weak"
    domains: tuple[frozenset[int], ...]      # 1-based vertex sets
    signs: tuple[str, ...]                   # "+" or "-" per domain
    zero_set: frozenset[int]

    @property
    def count(self) -> int:
        return len(self.domains)


def default_zero_tol(f: np.ndarray) -> float:
    m = float(np.max(np.abs(f))) if len(f) else 0.0
    return 1e-9 * m


def _components(g: Graph, member: np.ndarray) -> list[list[int]]:
    """Connected components (sorted 0-based lists) of the induced subgraph."""
    comps = []
    seen = np.zeros(g.n, dtype=bool)
    adj = g.adjacency
    for s in range(g.n):
        if member[s] and not seen[s]:
            seen[s] = True
            stack = [s]
            comp = []
            while stack:
                u = stack.pop()
                comp.append(u)
                for v in adj[u]:
                    if member[v] and not seen[v]:
                        seen[v] = True
                        stack.append(v)
            comps.append(sorted(comp))
    comps.sort(key=lambda c: c[0])
    return comps


def _decompose(g: Graph, f, zero_tol, strict: bool) -> NodalDecomposition:
    arr = plaplacian._as_vertex_function(g, f)
    tol = default_zero_tol(arr) if zero_tol is None else float(zero_tol)
    pos = arr > tol
    neg = arr < -tol
    zero = ~(pos | neg)
    if strict:
        domains = [(c, "+") for c in _components(g, pos)]
        domains += [(c, "-") for c in _components(g, neg)]
    else:
        domains = [(c, "+") for c in _components(g, pos | zero)]
        # a component that is zero throughout shows up for both closed sign
        # sets; report it once
        seen = {tuple(c) for c, _ in domains}
        for c in _components(g, neg | zero):
            if tuple(c) not in seen:
                domains.append((c, "-"))
    domains.sort(key=lambda t: t[0][0])
    return NodalDecomposition(
        kind="strong" if strict else "weak",
        domains=tuple(frozenset(v + 1 for v in c) for c, _ in domains),
        signs=tuple(s for _, s in domains),
        zero_set=frozenset(int(v) + 1 for v in np.nonzero(zero)[0]),
    )


def strong_nodal_domains(g: Graph, f, zero_tol: float | None = None) -> NodalDecomposition:
    return _decompose(g, f, zero_tol, strict=True)


def weak_nodal_domains(g: Graph, f, zero_tol: float | None = None) -> NodalDecomposition:
    return _decompose(g, f, zero_tol, strict=False)


def generalized_zeros(g: Graph, f, zero_tol: float | None = None) -> list[tuple[int, int]]:
    """Intervals (a, a+1] with f(a) != 0 and f(a) f(a+1) <= 0 on a path.

    Only defined when g is the canonically labeled path 1-2-...-n.
    """
    if not is_canonical_path(g):
        raise ValueError("generalized zeros are defined on path graphs only")
    arr = plaplacian._as_vertex_function(g, f)
    tol = default_zero_tol(arr) if zero_tol is None else float(zero_tol)
    s = np.where(arr > tol, 1, np.where(arr < -tol, -1, 0))
    return [(a + 1, a + 2) for a in range(g.n - 1) if s[a] != 0 and s[a] * s[a + 1] <= 0]


def nodal_space_max_rq(
    g: Graph,
    pair: plaplacian.EigenPair,
    kind: str = "strong",
    sample_count: int = 1000,
    seed: int = 0,
    zero_tol: float | None = None,
) -> float:
    """Largest Rayleigh quotient found over the nodal space of an eigenpair.

    The nodal space is spanned by the restrictions of f to its nodal domains.
    Samples random coefficient vectors plus, for up to 12 domains, every +-1
    sign pattern; the result never exceeds the eigenvalue (up to solver
    noise), which is what the certification harness asserts.
    """
    if kind not in ("strong", "weak"):
        raise ValueError(f"kind must be 'strong' or 'weak', got {kind!r}")
    if pair.residual > 1e-8 and pair.p > 1:
        raise ValueError(f"eigenpair residual {pair.residual:.3g} exceeds 1e-8")
    dec = _decompose(g, pair.f, zero_tol, strict=(kind == "strong"))
    m = dec.count
    if m == 0:
        raise ValueError("empty nodal decomposition")
    basis = np.zeros((g.n, m))
    for i, dom in enumerate(dec.domains):
        idx = np.fromiter((v - 1 for v in dom), dtype=np.int64)
        basis[idx, i] = pair.f[idx]
    coeffs = []
    if m <= MAX_SIGN_PATTERN_DOMAINS:
        patterns = ((np.arange(1 << m)[:, None] >> np.arange(m)[None, :]) & 1)
        coeffs.append((2.0 * patterns - 1.0).T)
    rng = np.random.default_rng(seed)
    if sample_count > 0:
        coeffs.append(rng.standard_normal((m, sample_count)))
    alphas = np.concatenate(coeffs, axis=1)
    gmat = basis @ alphas  # (n, samples)
    p = pair.p
    num = (g.edges_w[:, None]
           * np.abs(gmat[g.edges_u, :] - gmat[g.edges_v, :]) ** p).sum(axis=0)
    den = (g.mu[:, None] * np.abs(gmat) ** p).sum(axis=0)
    ok = den > 1e-300
    if not np.any(ok):
        raise ValueError("all sampled combinations were zero")
    return float(np.max(num[ok] / den[ok]))


@dataclass(frozen=True)
class NodalCheck:
    k: int
    lam: float
    multiplicity: int
    strong_count: int
    weak_count: int
    strong_bound: int
    weak_bound: int
    weak_must_equal_two: bool
    passed: bool


@dataclass(frozen=True)
class NodalReport:
    p: float
    checks: tuple[NodalCheck, ...]
    all_pass: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "all_pass", all(c.passed for c in self.checks))


def multiplicity_groups(values, tol: float = DEFAULT_MULTIPLICITY_TOL) -> list[list[int]]:
    """Group ascending eigenvalue indices whose relative gaps are below tol."""
    groups: list[list[int]] = []
    for i, v in enumerate(values):
        if groups and v - values[groups[-1][-1]] <= tol * max(1.0, abs(v)):
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def certify_nodal_bounds(
    spectrum: "Spectrum",
    multiplicity_tol: float = DEFAULT_MULTIPLICITY_TOL,
    zero_tol: float | None = None,
) -> NodalReport:
    """Check every pair's nodal counts against the variational-index bounds.

    For the k-th pair with multiplicity r: at most k + r - 1 strong domains;
    at most k weak domains for p > 1 (k + r - 1 when p = 1); and any pair in
    the second eigenvalue's group must have exactly 2 weak domains when p > 1
    on a connected graph.  Failures are report entries, not exceptions.
    """
    g = spectrum.graph
    p = spectrum.p
    lams = [pair.lam for pair in spectrum.pairs]
    groups = multiplicity_groups(lams, multiplicity_tol)
    group_of = {}
    for gr in groups:
        for i in gr:
            group_of[i] = gr
    lambda2_group = group_of.get(1, [])
    connected = is_connected(g)
    checks = []
    for i, pair in enumerate(spectrum.pairs):
        k = i + 1
        r = len(group_of[i])
        strong = strong_nodal_domains(g, pair.f, zero_tol).count
        weak = weak_nodal_domains(g, pair.f, zero_tol).count
        strong_bound = k + r - 1
        weak_bound = k if p > 1 else k + r - 1
        exact2 = p > 1 and connected and i in lambda2_group
        ok = strong <= strong_bound and weak <= weak_bound
        if exact2:
            ok = ok and weak == 2
        checks.append(NodalCheck(
            k=k, lam=float(pair.lam), multiplicity=r,
            strong_count=strong, weak_count=weak,
            strong_bound=strong_bound, weak_bound=weak_bound,
            weak_must_equal_two=exact2, passed=ok,
        ))
    return NodalReport(p=p, checks=tuple(checks))
