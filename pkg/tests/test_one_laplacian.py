from fractions import Fraction

import numpy as np
import pytest

from plap import (
    build_graph,
    enumerate_1lap_eigenvalues,
    merged_eigenvalues,
    multiway_cheeger,
    path_graph,
    verify_1lap_eigenpair,
)
from plap.one_laplacian import (
    SignSet,
    check_certificate,
    to_fraction,
)
from plap.simplex import lp_solve

F = Fraction


# ---------------------------------------------------------------------------
# exact simplex

def test_lp_feasible_min():
    # min x1 s.t. x1 + x2 = 2
    res = lp_solve([[F(1), F(1)]], [F(2)], [F(1), F(0)])
    assert res.status == "optimal"
    assert res.value == 0 and res.x == (F(0), F(2))


def test_lp_infeasible():
    res = lp_solve([[F(1)], [F(1)]], [F(1), F(2)], [F(0)])
    assert res.status == "infeasible"


def test_lp_unbounded():
    res = lp_solve([[F(1), F(-1)]], [F(1)], [F(0), F(-1)])
    assert res.status == "unbounded"


def test_lp_degenerate_and_redundant_rows():
    res = lp_solve([[F(1), F(1)], [F(2), F(2)]], [F(1), F(2)], [F(-1), F(0)])
    assert res.status == "optimal"
    assert res.value == -1


def test_lp_exactness():
    res = lp_solve([[F(1, 3), F(1)]], [F(1, 7)], [F(1), F(3)])
    assert res.status == "optimal"
    assert res.value == F(3, 7)  # all-slack... x2 = 1/7 costs exactly 3/7


# ---------------------------------------------------------------------------
# sign sets and input handling

def test_sign_set():
    assert SignSet.of(F(3)) == SignSet(F(1), F(1))
    assert SignSet.of(F(-2)) == SignSet(F(-1), F(-1))
    full = SignSet.of(F(0))
    assert full.contains(F(1, 2)) and full.contains(F(-1))
    assert not SignSet.of(F(3)).contains(F(1, 2))


def test_to_fraction_exactness_contract():
    assert to_fraction(0.5) == F(1, 2)
    assert to_fraction("2/3") == F(2, 3)
    assert to_fraction(7) == F(7)
    with pytest.raises(ValueError):
        to_fraction(float("nan"))
    with pytest.raises(ValueError):
        to_fraction(float("inf"))


# ---------------------------------------------------------------------------
# verification

def test_verify_p3_lambda_one_feasible():
    g = path_graph(3, "degree")
    cert = verify_1lap_eigenpair(g, [1, -1, 1], 1)
    assert cert.feasible
    assert cert.z == {(1, 2): F(1), (2, 3): F(-1)}
    assert cert.s == {1: F(1), 2: F(-1), 3: F(1)}
    assert check_certificate(g, [1, -1, 1], 1, cert)


def test_verify_p3_half_infeasible():
    g = path_graph(3, "degree")
    assert not verify_1lap_eigenpair(g, [1, -1, 1], F(1, 2)).feasible


def test_verify_constant_zero():
    rng = np.random.default_rng(2)
    from .util import random_connected_graph
    g = random_connected_graph(rng, 5)
    cert = verify_1lap_eigenpair(g, [1] * 5, 0)
    assert cert.feasible
    assert check_certificate(g, [1] * 5, 0, cert)


def test_verify_rejects_zero_function_and_disconnected():
    g = path_graph(3)
    with pytest.raises(ValueError, match="zero function"):
        verify_1lap_eigenpair(g, [0, 0, 0], 1)
    disconnected = build_graph(4, [(1, 2, 1.0), (3, 4, 1.0)])
    with pytest.raises(ValueError, match="connected"):
        verify_1lap_eigenpair(disconnected, [1, -1, 1, -1], 1)


def test_verify_interior_zero_eigenfunction():
    g = path_graph(3, "degree")
    cert = verify_1lap_eigenpair(g, [1, 0, -1], 1)
    assert cert.feasible
    assert check_certificate(g, [1, 0, -1], 1, cert)


# ---------------------------------------------------------------------------
# enumeration

def test_enumerate_p3_degree_reproduces_case_analysis():
    g = path_graph(3, "degree")
    records = enumerate_1lap_eigenvalues(g)
    assert merged_eigenvalues(records) == [(F(0), F(0)), (F(1), F(1))]
    assert merged_eigenvalues(records, nonconstant_only=True) == [(F(1), F(1))]


def test_enumerate_p2_single_edge():
    g = path_graph(2, "degree")
    records = enumerate_1lap_eigenvalues(g)
    noncon = merged_eigenvalues(records, nonconstant_only=True)
    assert noncon == [(F(1), F(1))]
    h2 = multiway_cheeger(g, 2)[0]
    assert float(noncon[0][0]) == pytest.approx(h2)


def test_enumerate_constant_pattern_gives_zero():
    g = path_graph(4, "unit")
    records = enumerate_1lap_eigenvalues(g)
    assert any(r.lo == 0 == r.hi and r.pattern.constant for r in records)


def test_enumerate_includes_h2():
    for g in (path_graph(3, "degree"), path_graph(4, "unit"),
              build_graph(4, [(1, 2, 1.0), (1, 3, 1.0), (1, 4, 1.0)],
                          mu_mode="degree")):
        records = enumerate_1lap_eigenvalues(g)
        h2 = multiway_cheeger(g, 2)[0]
        merged = merged_eigenvalues(records)
        assert any(float(lo) - 1e-12 <= h2 <= float(hi) + 1e-12
                   for lo, hi in merged)


def test_enumerate_certificates_reverify():
    g = path_graph(3, "degree")
    for rec in enumerate_1lap_eigenvalues(g):
        if rec.pattern.constant:
            continue
        f = rec.pattern.example_function()
        cert = verify_1lap_eigenpair(g, f, rec.lo)
        assert cert.feasible
        assert check_certificate(g, f, rec.lo, cert)


def test_enumerate_cap():
    g = path_graph(7)
    with pytest.raises(ValueError, match="capped"):
        enumerate_1lap_eigenvalues(g)
