"""Variational eigenvalue sequences of the graph p-Laplacian.

Three routes:

* dense generalized symmetric solve at p = 2 (every eigenpair, machine
  precision);
* damped-Newton continuation in p from the p = 2 seeds for general graphs,
  certified post hoc against indicator-span upper bounds;
* a shooting solver on unit-weight paths that indexes eigenvalues by the
  generalized-zero count of the shot solution, which is nondecreasing in
  lambda, and bisects the boundary defect inside each count level set.
"""

from __future__ import annotations

import functools
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import cheeger, kernels, nodal, plaplacian
from .graph import Graph, is_connected, path_graph, tau
from .plaplacian import EigenPair

MIN_CONTINUATION_P = 1.05
DENSE_RESIDUAL_TOL = 1e-10
CONTINUATION_RESIDUAL_TOL = 1e-9
PATH_RESIDUAL_TOL = 1e-10
PATH_BISECTION_TOL = 1e-12
PATH_BISECTION_MAX_ITER = 200


class ContinuationError(RuntimeError):
    """Newton path following failed; carries the last iterate."""

    def __init__(self, message, p_failed=None, lam=None, f=None):
        super().__init__(message)
        self.p_failed = p_failed
        self.lam = lam
        self.f = f


class BracketError(RuntimeError):
    """Eigenvalue bracketing on the path failed; message holds diagnostics."""


class _NewtonFailure(Exception):
    pass


def _quiet(fn):
    """Silence numpy warnings from diverged trial points in line searches."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            return fn(*args, **kwargs)
    return wrapper


@dataclass(frozen=True)
class Spectrum:
    graph: Graph
    p: float
    pairs: tuple[EigenPair, ...]
    method: str  # dense_p2 | continuation | path_shooting
    diagnostics: tuple[dict, ...] = ()
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        lams = [pair.lam for pair in self.pairs]
        if any(b < a - 1e-12 for a, b in zip(lams, lams[1:])):
            raise ValueError("spectrum eigenvalues must be ascending")

    @property
    def lams(self) -> list[float]:
        return [pair.lam for pair in self.pairs]


@dataclass(frozen=True)
class ShootingTrace:
    """One shot of the path recurrence at a trial eigenvalue."""
    lam: float
    f: np.ndarray
    zero_count: int
    boundary_defect: float  # signed defect of the final equation

    def __post_init__(self):
        self.f.setflags(write=False)


def _canonical_sign(f: np.ndarray) -> np.ndarray:
    scale = np.max(np.abs(f))
    if scale == 0.0:
        return f
    for x in f:
        if abs(x) > 1e-12 * scale:
            return -f if x < 0 else f
    return f


def _component_lists(g: Graph) -> list[list[int]]:
    seen = np.zeros(g.n, dtype=bool)
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], [s]
        while stack:
            u = stack.pop()
            for v in g.adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    stack.append(v)
        comps.append(comp)
    return comps


# ---------------------------------------------------------------------------
# Dense p = 2

def solve_p2_spectrum(g: Graph) -> Spectrum:
    """All n generalized eigenpairs of L f = lambda M f, M = diag(mu).

    Solved as a symmetric dense problem for M^(-1/2) L M^(-1/2) and
    back-transformed; eigenvectors carry unit weighted 2-norm.
    """
    if not is_connected(g):
        warnings.warn("graph is disconnected: lambda_2 = 0 and nodal/cut "
                      "certificates are vacuous", stacklevel=2)
    n = g.n
    lap = np.zeros((n, n))
    eu, ev, ew = g.edges_u, g.edges_v, g.edges_w
    lap[eu, ev] -= ew
    lap[ev, eu] -= ew
    np.fill_diagonal(lap, g.degrees)
    inv_sqrt = 1.0 / np.sqrt(g.mu)
    sym = inv_sqrt[:, None] * lap * inv_sqrt[None, :]
    sym = 0.5 * (sym + sym.T)
    vals, vecs = np.linalg.eigh(sym)
    vals = np.where((vals < 0) & (vals > -1e-10), 0.0, vals)
    pairs = []
    for k in range(n):
        f = _canonical_sign(inv_sqrt * vecs[:, k])
        res = plaplacian.eigen_residual(g, f, float(vals[k]), 2.0)
        pairs.append(EigenPair(p=2.0, lam=float(vals[k]), f=f,
                               residual=res, normalized=True))
    return Spectrum(graph=g, p=2.0, pairs=tuple(pairs), method="dense_p2",
                    diagnostics=tuple({} for _ in pairs))


# ---------------------------------------------------------------------------
# Continuation in p

def _aug_residual(g: Graph, f: np.ndarray, lam: float, p: float) -> np.ndarray:
    out = np.empty(g.n + 1)
    out[:g.n] = (kernels.plap_apply(g.edges_u, g.edges_v, g.edges_w, f, p, g.n)
                 - lam * g.mu * plaplacian.phi(p, f))
    out[g.n] = kernels.weighted_pnorm_pow(g.mu, f, p) - 1.0
    return out


def _dphi(x: np.ndarray, p: float) -> np.ndarray:
    # derivative (p-1)|x|^(p-2); clamped near 0 for p < 2 where it blows up
    ax = np.abs(x)
    if p < 2.0:
        ax = np.maximum(ax, 1e-13)
    return (p - 1.0) * ax ** (p - 2.0)


def _aug_jacobian(g: Graph, f: np.ndarray, lam: float, p: float) -> np.ndarray:
    n = g.n
    eu, ev, ew = g.edges_u, g.edges_v, g.edges_w
    jac = np.zeros((n + 1, n + 1))
    wd = ew * _dphi(f[eu] - f[ev], p)
    jac[eu, ev] = -wd
    jac[ev, eu] = -wd
    diag = np.zeros(n)
    np.add.at(diag, eu, wd)
    np.add.at(diag, ev, wd)
    diag -= lam * g.mu * _dphi(f, p)
    jac[np.arange(n), np.arange(n)] = diag
    mphi = g.mu * plaplacian.phi(p, f)
    jac[:n, n] = -mphi
    jac[n, :n] = p * mphi
    return jac


def _snap_tiny(f: np.ndarray) -> np.ndarray:
    # entries below resolvable size sit on the kernel's cusp; the exact zero
    # is the only representable fixed point there
    scale = np.max(np.abs(f))
    if scale == 0.0:
        return f
    out = f.copy()
    out[np.abs(out) < 1e-15 * scale] = 0.0
    return out


@_quiet
def _newton_eigen(g, f0, lam0, p, tol=1e-12, max_iter=200):
    f = f0.copy()
    lam = lam0
    res = _aug_residual(g, f, lam, p)
    nrm2 = float(np.linalg.norm(res))
    iters = 0
    for _ in range(max_iter):
        if np.max(np.abs(res)) <= tol:
            return f, lam, iters
        jac = _aug_jacobian(g, f, lam, p)
        try:
            step = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(jac, -res, rcond=None)[0]
        if not np.all(np.isfinite(step)):
            step = np.linalg.lstsq(jac, -res, rcond=None)[0]
            if not np.all(np.isfinite(step)):
                raise _NewtonFailure("non-finite Newton step")
        # Armijo backtracking on the residual norm; each trial also gets a
        # snapped twin because cusp coordinates converge to exact zeros
        alpha = 1.0
        while True:
            f_try = f + alpha * step[:g.n]
            lam_try = lam + alpha * step[g.n]
            best = None
            for cand in (f_try, _snap_tiny(f_try)):
                res_try = _aug_residual(g, cand, lam_try, p)
                nrm_try = float(np.linalg.norm(res_try))
                if np.isfinite(nrm_try) and (best is None or nrm_try < best[2]):
                    best = (cand, res_try, nrm_try)
            if best is not None and best[2] <= (1.0 - 1e-4 * alpha) * nrm2:
                f, res, nrm2 = best
                lam = lam_try
                break
            alpha *= 0.5
            if alpha < 2.0 ** -40:
                # stiff instances bottom out above tol; accept the floor
                # when it is already far below the solver contract
                if np.max(np.abs(res)) <= 100 * tol:
                    return f, lam, iters
                raise _NewtonFailure("backtracking stalled")
        iters += 1
    if np.max(np.abs(res)) <= 100 * tol:
        return f, lam, iters
    raise _NewtonFailure("Newton did not converge")


# ---------------------------------------------------------------------------
# Flux-form Newton for 1 < p < 2.
#
# Near p = 1, eigenfunctions develop plateaus whose internal value
# differences scale like c^(1/(p-1)) and can drop below the float spacing of
# the entries themselves, while the fluxes phi_p(f(u)-f(v)) stay order one.
# Solving in the variables s(u) = phi_p(f(u)) and t(e) = phi_p(f(u)-f(v))
# keeps every quantity representable and turns all kernels into q-powers
# with q = p/(p-1) >= 2, which are smooth:
#
#   edge rows:    phi_q(t_e) - phi_q(s_u) + phi_q(s_v) = 0
#   vertex rows:  sum_e orient(u, e) w_e t_e - lam mu(u) s_u = 0
#   norm row:     sum_u mu(u) |s_u|^q - 1 = 0   (equals the f p-norm)

def _mixed_residual(g, s, t, lam, q):
    n, m = g.n, g.m
    eu, ev, ew = g.edges_u, g.edges_v, g.edges_w
    out = np.empty(n + m + 1)
    phis = plaplacian.phi(q, s)
    out[:m] = plaplacian.phi(q, t) - phis[eu] + phis[ev]
    wt = ew * t
    out[m:m + n] = (np.bincount(eu, weights=wt, minlength=n)
                    - np.bincount(ev, weights=wt, minlength=n)
                    - lam * g.mu * s)
    out[m + n] = float(np.sum(g.mu * np.abs(s) ** q)) - 1.0
    return out


def _mixed_jacobian(g, s, t, lam, q):
    n, m = g.n, g.m
    eu, ev, ew = g.edges_u, g.edges_v, g.edges_w
    size = n + m + 1
    jac = np.zeros((size, size))
    rows = np.arange(m)
    dq_t = (q - 1.0) * np.abs(t) ** (q - 2.0)
    dq_s = (q - 1.0) * np.abs(s) ** (q - 2.0)
    jac[rows, n + rows] = dq_t
    jac[rows, eu] = -dq_s[eu]
    jac[rows, ev] = dq_s[ev]
    np.add.at(jac, (m + eu, n + rows), ew)
    np.add.at(jac, (m + ev, n + rows), -ew)
    vrows = np.arange(n)
    jac[m + vrows, vrows] = -lam * g.mu
    jac[m + vrows, n + m] = -g.mu * s
    jac[m + n, :n] = q * g.mu * plaplacian.phi(q, s)
    return jac


@_quiet
def _newton_mixed(g, s0, t0, lam0, q, tol=1e-12, max_iter=200):
    s, t, lam = s0.copy(), t0.copy(), lam0
    n, m = g.n, g.m
    res = _mixed_residual(g, s, t, lam, q)
    nrm2 = float(np.linalg.norm(res))
    iters = 0
    for _ in range(max_iter):
        if np.max(np.abs(res)) <= tol:
            return s, t, lam, iters
        jac = _mixed_jacobian(g, s, t, lam, q)
        try:
            step = np.linalg.solve(jac, -res)
            if not np.all(np.isfinite(step)):
                raise np.linalg.LinAlgError
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(jac, -res, rcond=None)[0]
            if not np.all(np.isfinite(step)):
                raise _NewtonFailure("non-finite flux-form step")
        alpha = 1.0
        while True:
            s_try = s + alpha * step[:n]
            t_try = t + alpha * step[n:n + m]
            lam_try = lam + alpha * step[n + m]
            res_try = _mixed_residual(g, s_try, t_try, lam_try, q)
            nrm_try = float(np.linalg.norm(res_try))
            if np.isfinite(nrm_try) and nrm_try <= (1.0 - 1e-4 * alpha) * nrm2:
                s, t, lam, res, nrm2 = s_try, t_try, lam_try, res_try, nrm_try
                break
            alpha *= 0.5
            if alpha < 2.0 ** -40:
                if np.max(np.abs(res)) <= 100 * tol:
                    return s, t, lam, iters
                raise _NewtonFailure("flux-form backtracking stalled")
        iters += 1
    if np.max(np.abs(res)) <= 100 * tol:
        return s, t, lam, iters
    raise _NewtonFailure("flux-form Newton did not converge")


def _fold_restarts(g: Graph, f: np.ndarray):
    """Trial iterates for crossing a power-kernel corner.

    For p < 2 an eigenfunction entry can pass through zero (or two adjacent
    values can merge) as p decreases; the branch continues on the other side
    of the kink where plain line search cannot follow.  Candidate restarts
    flip the smallest entries and swap near-equal neighbor values.
    """
    scale = float(np.max(np.abs(f)))
    trials = []
    small = [u for u in np.argsort(np.abs(f)) if abs(f[u]) <= 0.2 * scale][:4]
    for u in small:
        t = f.copy()
        t[u] = -t[u]
        trials.append(t)
    if len(small) > 1:
        t = f.copy()
        t[small] = -t[small]
        trials.append(t)
    diffs = np.abs(f[g.edges_u] - f[g.edges_v])
    close = [i for i in np.argsort(diffs) if diffs[i] <= 0.2 * scale][:4]
    for i in close:
        u, v = g.edges_u[i], g.edges_v[i]
        t = f.copy()
        t[u], t[v] = t[v], t[u]
        trials.append(t)
    return trials


def _continue_with_diag(g, seed, p_target, steps=16):
    if seed.residual > 1e-8:
        raise ValueError(f"seed residual {seed.residual:.3g} exceeds 1e-8")
    if p_target <= 1.0:
        raise ValueError(f"continuation target must satisfy p > 1, got {p_target}")
    if p_target < MIN_CONTINUATION_P:
        warnings.warn(f"continuation to p = {p_target} below the default "
                      f"minimum {MIN_CONTINUATION_P}: curvature degenerates "
                      f"as p -> 1", stacklevel=3)
    if steps < 1:
        raise ValueError("steps must be >= 1")
    diag = {"newton_iterations": 0, "p_steps": 0, "halvings": 0}
    if seed.p == p_target:
        return seed, diag
    if seed.lam <= 1e-10:
        # the zero eigenvalue is p-independent and its eigenfunctions are
        # constant per connected component; snap the seed's rounding noise,
        # which the p < 2 kernel would otherwise amplify
        f = seed.f.astype(np.float64).copy()
        for comp in _component_lists(g):
            f[comp] = float(np.mean(f[comp]))
        f = plaplacian.normalized(g, f, p_target)
        res = plaplacian.eigen_residual(g, f, 0.0, p_target)
        pair = EigenPair(p=p_target, lam=0.0, f=_canonical_sign(f),
                         residual=res, normalized=True)
        return pair, diag

    def advance_direct(f, lam, p_from, p_to, depth):
        f = plaplacian.normalized(g, f, p_to)
        try:
            f_new, lam_new, iters = _newton_eigen(g, f, lam, p_to)
        except _NewtonFailure as exc:
            # a stall usually means the branch crossed a kink of the power
            # kernel; try restarting on the far side before shrinking steps
            for trial in _fold_restarts(g, f):
                try:
                    t = plaplacian.normalized(g, trial, p_to)
                    f_new, lam_new, iters = _newton_eigen(g, t, lam, p_to)
                except _NewtonFailure:
                    continue
                if abs(lam_new - lam) <= 0.1 * (1.0 + abs(lam)):
                    diag["fold_restarts"] = diag.get("fold_restarts", 0) + 1
                    diag["newton_iterations"] += iters
                    diag["p_steps"] += 1
                    return f_new, lam_new
            if depth >= 12:
                raise ContinuationError(
                    f"continuation stalled at p = {p_to:.6g}: {exc}",
                    p_failed=p_to, lam=lam, f=f) from None
            diag["halvings"] += 1
            mid = float(np.sqrt(p_from * p_to))
            f, lam = advance_direct(f, lam, p_from, mid, depth + 1)
            return advance_direct(f, lam, mid, p_to, depth + 1)
        diag["newton_iterations"] += iters
        diag["p_steps"] += 1
        return f_new, lam_new

    def advance_mixed(s, t, lam, p_from, p_to, depth):
        q = p_to / (p_to - 1.0)
        try:
            s_new, t_new, lam_new, iters = _newton_mixed(g, s, t, lam, q)
        except _NewtonFailure as exc:
            # fold restarts, expressed on the reconstructed vertex function
            q_from = p_from / (p_from - 1.0)
            f_cur = plaplacian.phi(q_from, s)
            for trial in _fold_restarts(g, f_cur):
                try:
                    ft = plaplacian.normalized(g, trial, p_to)
                    st = plaplacian.phi(p_to, ft)
                    tt = plaplacian.phi(p_to, ft[g.edges_u] - ft[g.edges_v])
                    s_new, t_new, lam_new, iters = _newton_mixed(g, st, tt, lam, q)
                except (_NewtonFailure, ValueError):
                    continue
                if abs(lam_new - lam) <= 0.1 * (1.0 + abs(lam)):
                    diag["fold_restarts"] = diag.get("fold_restarts", 0) + 1
                    diag["newton_iterations"] += iters
                    diag["p_steps"] += 1
                    return s_new, t_new, lam_new
            if depth >= 12:
                raise ContinuationError(
                    f"continuation stalled at p = {p_to:.6g}: {exc}",
                    p_failed=p_to, lam=lam,
                    f=plaplacian.phi(q, s)) from None
            diag["halvings"] += 1
            mid = float(np.sqrt(p_from * p_to))
            s, t, lam = advance_mixed(s, t, lam, p_from, mid, depth + 1)
            return advance_mixed(s, t, lam, mid, p_to, depth + 1)
        diag["newton_iterations"] += iters
        diag["p_steps"] += 1
        return s_new, t_new, lam_new

    ratio = p_target / seed.p
    grid = [seed.p * ratio ** (i / steps) for i in range(steps + 1)]
    grid[-1] = p_target
    f, lam = seed.f.astype(np.float64), seed.lam
    s = t = None
    for p_from, p_to in zip(grid, grid[1:]):
        if p_to >= 2.0:
            if s is not None:
                # leaving the flux-form regime
                q_prev = p_from / (p_from - 1.0)
                f = plaplacian.phi(q_prev, s)
                s = t = None
            f, lam = advance_direct(f, lam, p_from, p_to, 0)
        else:
            if s is None:
                # entering the flux-form regime: change of variables
                f = plaplacian.normalized(g, f, p_from)
                s = plaplacian.phi(p_from, f)
                t = plaplacian.phi(p_from, f[g.edges_u] - f[g.edges_v])
            s, t, lam = advance_mixed(s, t, lam, p_from, p_to, 0)
    lam = max(float(lam), 0.0)
    if s is not None:
        diag["coordinates"] = "flux"
        q = p_target / (p_target - 1.0)
        f = plaplacian.phi(q, s)
        nrm = plaplacian.pnorm(g, f, p_target)
        # the norm row already pins this to 1; rescale s and t consistently
        s = s / plaplacian.phi(p_target, nrm)
        t = t / plaplacian.phi(p_target, nrm)
        f = plaplacian.phi(q, s)
        flipped = _canonical_sign(f)
        if flipped is not f:
            f, s, t = flipped, -s, -t
        res = float(np.max(np.abs(_mixed_residual(g, s, t, lam, q))))
        # entry differences can quantize below float resolution near p = 1,
        # making the direct defect evaluation pessimistic; record it anyway
        diag["direct_defect"] = plaplacian.eigen_residual(g, f, lam, p_target)
    else:
        f = _canonical_sign(plaplacian.normalized(g, f, p_target))
        res = plaplacian.eigen_residual(g, f, lam, p_target)
    if res > CONTINUATION_RESIDUAL_TOL:
        raise ContinuationError(
            f"continued pair residual {res:.3g} exceeds "
            f"{CONTINUATION_RESIDUAL_TOL}", p_failed=p_target, lam=lam, f=f)
    return EigenPair(p=p_target, lam=lam, f=f, residual=res,
                     normalized=True), diag


def continue_in_p(g: Graph, seed: EigenPair, p_target: float, steps: int = 16) -> EigenPair:
    """Follow one eigenpair along a geometric p-grid by damped Newton.

    Each step solves the augmented system (eigen-equation plus unit-norm
    constraint); failing steps are halved geometrically up to 12 levels.
    """
    pair, _ = _continue_with_diag(g, seed, p_target, steps)
    return pair


@_quiet
def solve_from_guess(g: Graph, f0: np.ndarray, p: float) -> EigenPair | None:
    """Solve the eigen-system at fixed p from an explicit starting function.

    Uses the flux form below p = 2 and the direct form otherwise; returns
    None when Newton fails.  Used to seed eigenpairs from indicator spans.
    """
    try:
        f0 = plaplacian.normalized(g, f0, p)
    except ValueError:
        return None
    lam0 = plaplacian.rayleigh_quotient(g, f0, p)
    try:
        if p < 2.0:
            q = p / (p - 1.0)
            s = plaplacian.phi(p, f0)
            t = plaplacian.phi(p, f0[g.edges_u] - f0[g.edges_v])
            s, t, lam, _ = _newton_mixed(g, s, t, lam0, q)
            f = plaplacian.phi(q, s)
            nrm = plaplacian.pnorm(g, f, p)
            s = s / plaplacian.phi(p, nrm)
            t = t / plaplacian.phi(p, nrm)
            f = plaplacian.phi(q, s)
            flipped = _canonical_sign(f)
            if flipped is not f:
                f, s, t = flipped, -s, -t
            res = float(np.max(np.abs(_mixed_residual(g, s, t, lam, q))))
        else:
            f, lam, _ = _newton_eigen(g, f0, lam0, p)
            f = _canonical_sign(plaplacian.normalized(g, f, p))
            res = plaplacian.eigen_residual(g, f, lam, p)
    except _NewtonFailure:
        return None
    if res > CONTINUATION_RESIDUAL_TOL or not np.isfinite(lam) or lam < -1e-12:
        return None
    return EigenPair(p=p, lam=max(float(lam), 0.0), f=f, residual=res,
                     normalized=True)


def _same_pair(a: EigenPair, b: EigenPair) -> bool:
    if abs(a.lam - b.lam) > 1e-7 * (1.0 + abs(a.lam)):
        return False
    d = min(float(np.max(np.abs(a.f - b.f))), float(np.max(np.abs(a.f + b.f))))
    return d <= 1e-5


def _indicator_seeds(g: Graph, families, rng) -> list[np.ndarray]:
    """Candidate start functions built on optimal disjoint-subset families."""
    seeds = []
    for fam in families:
        idx = [np.fromiter((v - 1 for v in a), dtype=np.int64) for a in fam]
        k = len(idx)
        if k > 6:
            patterns = [tuple(rng.choice([-1.0, 1.0], k)) for _ in range(32)]
        else:
            patterns = [
                tuple(1.0 if (m >> j) & 1 else -1.0 for j in range(k))
                for m in range(1 << k)
            ]
        for pat in patterns:
            f0 = np.zeros(g.n)
            for c, ii in zip(pat, idx):
                f0[ii] = c
            seeds.append(f0)
        for _ in range(12):
            f0 = np.zeros(g.n)
            coef = rng.uniform(0.3, 1.7, k) * rng.choice([-1.0, 1.0], k)
            for c, ii in zip(coef, idx):
                f0[ii] = c
            seeds.append(f0)
    return seeds


def _best_selection(g: Graph, p: float, pool, hk_values):
    """Pick the ascending n-subset of candidate pairs that best satisfies
    the two-sided isoperimetric certificates; returns (pairs, score, total)."""
    import itertools

    n = g.n
    t = tau(g)
    zero_pairs = [pr for pr in pool if pr.lam <= 1e-10]
    rest = sorted((pr for pr in pool if pr.lam > 1e-10), key=lambda pr: pr.lam)
    rest = rest[:n - 1 + 8]  # cap the enumeration
    m_cache = {id(pr): nodal.strong_nodal_domains(g, pr.f).count for pr in rest}

    def score(selection):
        good = 0
        for k, pr in enumerate(selection, 1):
            tol = 1e-9 + 1e-6 * abs(pr.lam)
            upper = 2.0 ** (p - 1.0) * hk_values[k - 1]
            if pr.lam <= upper + tol:
                good += 1
            if k == 1:
                good += 1
                continue
            m = m_cache[id(pr)]
            lower = (2.0 / t) ** (p - 1.0) * (hk_values[m - 1] / p) ** p
            if lower - tol <= pr.lam:
                good += 1
        return good

    first = zero_pairs[0]
    best = None
    for combo in itertools.combinations(rest, n - 1):
        sel = (first,) + combo
        sc = score(sel)
        key = (-sc, tuple(pr.lam for pr in sel))
        if best is None or key < best[0]:
            best = (key, sel, sc)
    return list(best[1]), best[2], 2 * n


def variational_spectrum(
    g: Graph,
    p: float,
    steps: int = 16,
    hk_values: Sequence[float] | None = None,
) -> Spectrum:
    """The variational eigenvalue sequence at the target p.

    The p = 2 spectrum is continued pairwise along a geometric grid and
    re-sorted.  When exact multiway constants are available (n within the
    enumeration cap, or supplied via hk_values), every value is checked
    against the certified upper bound 2^(p-1) h_k; a violation or a dead
    branch triggers a repair pass that seeds additional eigenpairs from the
    optimal-cut indicator spans directly at the target p, after which the
    best certified ascending selection is reported and anything still
    violating the bound stays flagged in the diagnostics.
    """
    if p <= 1:
        raise ValueError(f"variational spectrum requires p > 1, got {p}")
    base = solve_p2_spectrum(g)
    if p == 2.0:
        return base
    groups = nodal.multiplicity_groups(base.lams)
    mult = {}
    for grp in groups:
        for i in grp:
            mult[i] = len(grp)
    notes = []
    pool: list[tuple[EigenPair, dict]] = []
    for i, seed in enumerate(base.pairs):
        try:
            pair, diag = _continue_with_diag(g, seed, p, steps)
        except ContinuationError as exc:
            notes.append(f"branch from p=2 pair {i + 1} terminated: {exc}")
            continue
        diag["seed_k"] = i + 1
        diag["seed_multiplicity"] = mult[i]
        if mult[i] > 1:
            diag["branch_ambiguity"] = ("seed eigenvalue is degenerate; "
                                        "the continued branch is basis-dependent")
        pool.append((pair, diag))

    if hk_values is None and g.n <= cheeger.EXACT_HK_CAP:
        hk_values = [h for h, _ in cheeger.multiway_cheeger_all(g, g.n)]

    if hk_values is not None and g.n > 1:
        def violations(pairs_sorted):
            bad = []
            for k, pr in enumerate(pairs_sorted[:g.n], 1):
                upper = 2.0 ** (p - 1.0) * hk_values[k - 1]
                if pr.lam > upper + 1e-9 + 1e-6 * abs(pr.lam):
                    bad.append(k)
            return bad

        rng = np.random.default_rng(12961)
        families = None
        for _ in range(3):
            pairs_sorted = sorted((pr for pr, _ in pool), key=lambda x: x.lam)
            bad = violations(pairs_sorted)
            deficit = len(pool) < g.n
            if not bad and not deficit:
                break
            if families is None:
                families = [fam for _, fam in
                            cheeger.multiway_cheeger_all(g, g.n)]
            # seed from every family size: inserting one low eigenvalue
            # shifts all later indices, so the useful seeds are not confined
            # to the violated k
            added = 0
            for f0 in _indicator_seeds(g, families[1:], rng):
                cand = solve_from_guess(g, f0, p)
                if cand is None or cand.lam <= 1e-10:
                    continue
                if any(_same_pair(cand, pr) for pr, _ in pool):
                    continue
                pool.append((cand, {"seeded_from": "indicator span"}))
                added += 1
            if added == 0:
                break
        if len(pool) < g.n:
            raise ContinuationError(
                f"only {len(pool)} of {g.n} eigenpairs could be computed at "
                f"p = {p}; " + "; ".join(notes), p_failed=p)
        diag_of = {id(pr): dg for pr, dg in pool}
        selection, _, _ = _best_selection(g, p, [pr for pr, _ in pool],
                                          hk_values)
        if len(pool) > g.n:
            notes.append(f"{len(pool) - g.n} extra eigenpairs found during "
                         f"repair; kept the best certified selection")
        results = [(pr, diag_of[id(pr)]) for pr in selection]
        results.sort(key=lambda tp: tp[0].lam)
        for k, (pair, diag) in enumerate(results, 1):
            upper = 2.0 ** (p - 1.0) * hk_values[k - 1]
            tol = 1e-9 + 1e-6 * abs(pair.lam)
            if pair.lam > upper + tol:
                diag["branch_warning"] = (
                    f"lambda_{k} = {pair.lam:.12g} exceeds the certified "
                    f"upper bound {upper:.12g}: continuation left the "
                    f"variational branch")
                notes.append(diag["branch_warning"])
    else:
        if len(pool) < g.n:
            raise ContinuationError(
                f"only {len(pool)} of {g.n} eigenpairs could be computed at "
                f"p = {p}; " + "; ".join(notes), p_failed=p)
        notes.append("indicator-span certification skipped: exact multiway "
                     "constants unavailable at this size")
        results = sorted(pool, key=lambda tp: tp[0].lam)

    return Spectrum(graph=g, p=p,
                    pairs=tuple(pair for pair, _ in results),
                    method="continuation",
                    diagnostics=tuple(diag for _, diag in results),
                    notes=tuple(notes))


def indicator_span_upper_bound(g: Graph, p: float, subsets) -> float:
    """Certified upper bound 2^(p-1) max_i c(A_i) on lambda_k, k = len(subsets).

    Valid because the span of the k disjoint indicator functions meets the
    unit sphere in a set of index k, and the Rayleigh quotient on that span
    is at most 2^(p-1) times the largest cut ratio.
    """
    if p < 1:
        raise ValueError(f"exponent must satisfy p >= 1, got {p}")
    family = cheeger.validate_family(g, subsets)
    return 2.0 ** (p - 1.0) * max(cheeger.cut_ratio(g, s) for s in family)


# ---------------------------------------------------------------------------
# Shooting on unit paths

def path_shoot(n: int, p: float, lam: float) -> ShootingTrace:
    """Shoot the half-linear recurrence across the unit path at trial lam.

    Starts from f(1) = 1 with a reflected left boundary and returns the
    trace, its generalized-zero count, and the signed defect of the final
    (right-boundary) equation, which vanishes exactly at eigenvalues.
    """
    if n < 2:
        raise ValueError(f"path shooting needs n >= 2, got {n}")
    if p <= 1:
        raise ValueError(f"path shooting requires p > 1, got {p}")
    if lam < 0:
        raise ValueError(f"trial eigenvalue must be nonnegative, got {lam}")
    f, defect, zeros = kernels.path_shoot_core(n, float(p), float(lam))
    return ShootingTrace(lam=float(lam), f=f, zero_count=int(zeros),
                         boundary_defect=float(defect))


def _shoot_count(n, p, lam):
    return kernels.path_shoot_core(n, p, lam)[2]


def _shoot_defect(n, p, lam):
    return kernels.path_shoot_core(n, p, lam)[1]


def path_spectrum(n: int, p: float) -> Spectrum:
    """All n eigenpairs on the unit path, indexed by generalized-zero count.

    The zero count of the shot solution is a nondecreasing step function of
    lambda whose jumps happen strictly between eigenvalues, so the k-th
    eigenvalue is the unique defect root inside the count = k-1 level set.
    A violation of that monotonicity aborts with a diagnostic rather than
    silently mis-indexing.
    """
    if n < 2:
        raise ValueError(f"path spectrum needs n >= 2, got {n}")
    if p <= 1:
        raise ValueError(f"path spectrum requires p > 1, got {p}")
    g = path_graph(n, "unit")

    lam_hi = 2.0 ** p * (1.0 + 1e-7) + 1e-6
    for _ in range(6):
        if _shoot_count(n, p, lam_hi) >= n - 1:
            break
        lam_hi *= 2.0
    top = _shoot_count(n, p, lam_hi)
    if top != n - 1:
        raise BracketError(
            f"zero count at lambda = {lam_hi:.6g} is {top}, expected {n - 1}; "
            f"count monotonicity assumption violated")

    # locate the count jump locations by integer bisection
    jumps = []
    for j in range(1, n):
        lo, hi = 0.0, lam_hi
        it = 0
        while hi - lo > 1e-13 * max(1.0, hi) and it < 200:
            mid = 0.5 * (lo + hi)
            c = _shoot_count(n, p, mid)
            if c < 0 or c > n - 1:
                raise BracketError(f"zero count {c} out of range at lambda = {mid!r}")
            if c >= j:
                hi = mid
            else:
                lo = mid
            it += 1
        jumps.append(hi)
    if any(b < a for a, b in zip(jumps, jumps[1:])):
        raise BracketError(f"count jump locations not sorted: {jumps}; "
                           f"monotonicity assumption violated")

    mu_total = float(np.sum(g.mu))
    pairs = [EigenPair(p=p, lam=0.0,
                       f=np.full(n, mu_total ** (-1.0 / p)),
                       residual=0.0, normalized=True)]
    diags = [{"zero_count": 0, "defect": 0.0}]
    bounds = jumps + [lam_hi]
    for k in range(2, n + 1):
        lo_edge, hi_edge = bounds[k - 2], bounds[k - 1]
        width = hi_edge - lo_edge
        a = lo_edge + 1e-7 * width
        b = hi_edge - 1e-7 * width
        for _ in range(40):
            if _shoot_count(n, p, a) == k - 1:
                break
            a += 1e-6 * width
        for _ in range(40):
            if _shoot_count(n, p, b) == k - 1:
                break
            b -= 1e-6 * width
        da, db = _shoot_defect(n, p, a), _shoot_defect(n, p, b)
        if da == 0.0:
            a_root = a
        elif db == 0.0:
            a_root = b
        else:
            if np.sign(da) == np.sign(db):
                # scan the level set for a sign change
                grid = np.linspace(a, b, 257)
                vals = [_shoot_defect(n, p, x) for x in grid]
                found = None
                for x0, x1, v0, v1 in zip(grid, grid[1:], vals, vals[1:]):
                    if np.sign(v0) != np.sign(v1):
                        a, b, da, db = x0, x1, v0, v1
                        found = True
                        break
                if not found:
                    raise BracketError(
                        f"no defect sign change for k = {k} in "
                        f"[{a!r}, {b!r}] (defects {da!r}, {db!r})")
            # the contract asks |interval| <= 1e-12; push to the float floor
            # so the secant polish starts as close as possible
            gap_floor = min(PATH_BISECTION_TOL, 1e-15 * max(1.0, hi_edge))
            it = 0
            while b - a > gap_floor and it < PATH_BISECTION_MAX_ITER:
                mid = 0.5 * (a + b)
                dm = _shoot_defect(n, p, mid)
                if dm == 0.0:
                    a = b = mid
                    break
                if np.sign(dm) == np.sign(da):
                    a, da = mid, dm
                else:
                    b, db = mid, dm
                it += 1
            a_root = 0.5 * (a + b)
            # secant polish: steep defects leave a residual worth of slack
            # in the bisected bracket
            x0, f0 = a, da
            x1, f1 = b, db
            best_x, best_f = a_root, abs(_shoot_defect(n, p, a_root))
            for _ in range(8):
                if f1 == f0:
                    break
                x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
                if not lo_edge <= x2 <= hi_edge:
                    break
                f2 = _shoot_defect(n, p, x2)
                if abs(f2) < best_f:
                    best_x, best_f = x2, abs(f2)
                if f2 == 0.0:
                    break
                x0, f0, x1, f1 = x1, f1, x2, f2
            a_root = best_x
        trace = path_shoot(n, p, a_root)
        if trace.zero_count != k - 1:
            raise BracketError(
                f"eigenfunction for k = {k} has {trace.zero_count} generalized "
                f"zeros; monotonic indexing failed (lambda = {a_root!r})")
        if trace.f[0] == 0.0 or trace.f[-1] == 0.0:
            raise BracketError(f"boundary entries vanish for k = {k}")
        # the recurrence satisfies every interior equation by construction,
        # so the honest defect is the boundary one, rescaled to the unit
        # p-norm representative; re-evaluating through the stored entries
        # is quantization-limited near p = 1 and goes to the diagnostics
        nrm = plaplacian.pnorm(g, trace.f, p)
        f = trace.f / nrm
        res = abs(trace.boundary_defect) / nrm ** (p - 1.0)
        # steep defects near p = 1 can jump above tolerance between two
        # adjacent representable lambdas; the conditioning floor is the
        # defect change per ulp and no float64 lambda can beat it
        d_lo = _shoot_defect(n, p, np.nextafter(a_root, -np.inf))
        d_hi = _shoot_defect(n, p, np.nextafter(a_root, np.inf))
        floor = min(abs(d_lo), abs(d_hi), abs(trace.boundary_defect))
        accept = max(PATH_RESIDUAL_TOL, 4.0 * floor / nrm ** (p - 1.0))
        if res > accept:
            raise BracketError(
                f"path pair k = {k} residual {res:.3g} exceeds "
                f"{accept:.3g}; defect = {trace.boundary_defect!r}")
        pairs.append(EigenPair(p=p, lam=a_root, f=f, residual=res,
                               normalized=True))
        diags.append({"zero_count": trace.zero_count,
                      "defect": trace.boundary_defect,
                      "direct_defect": plaplacian.eigen_residual(g, f, a_root, p)})
    lams = [pair.lam for pair in pairs]
    if any(b <= a for a, b in zip(lams, lams[1:])):
        raise BracketError(f"path eigenvalues not strictly increasing: {lams}")
    return Spectrum(graph=g, p=p, pairs=tuple(pairs), method="path_shooting",
                    diagnostics=tuple(diags))
