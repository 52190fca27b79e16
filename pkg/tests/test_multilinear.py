"""Numeric tests for dense multilinear maps and expansion evaluation."""

import math

import numpy as np
import pytest
import sympy as sp

from bilipjet import (MultilinearMap, compose, composition_context,
                      evaluate_expansion, identity_map, inverse_context,
                      inverse_jets, operator_norm, product_context,
                      symmetrize, tensor_product)
from bilipjet import symbolic as sy
from bilipjet import _mlkernels_py as pyk
from bilipjet.backend import BACKEND
from bilipjet.errors import DimensionMismatchError, MissingJetError


def _rand_map(rng, arity, n, d):
    return MultilinearMap(arity, n, d, rng.standard_normal((d,) + (n,) * arity))


def _scalar_jets(values):
    """1-D jets from plain floats: order k -> arity-k map with single entry."""
    return {k: MultilinearMap(k, 1, 1, np.full((1,) * (k + 1), v))
            for k, v in values.items()}


# ---------------------------------------------------------------------------
# kernel backends
# ---------------------------------------------------------------------------

def test_backend_reported():
    assert BACKEND in ("compiled", "python")


def test_kernel_parity_compiled_vs_python():
    ck = pytest.importorskip("bilipjet._mlkernels")
    rng = np.random.default_rng(7)
    for n, k, d in [(1, 1, 1), (2, 3, 5), (3, 2, 2), (5, 4, 1)]:
        T2 = np.ascontiguousarray(rng.standard_normal((d, n**k)))
        args = np.ascontiguousarray(rng.standard_normal((6, k, n)))
        np.testing.assert_allclose(ck.contract_batch(T2, n, k, args),
                                   pyk.contract_batch(T2, n, k, args),
                                   rtol=1e-12, atol=1e-13)
        for j in range(k):
            np.testing.assert_allclose(ck.slot_matrix_batch(T2, n, k, args, j),
                                       pyk.slot_matrix_batch(T2, n, k, args, j),
                                       rtol=1e-12, atol=1e-13)
        starts = rng.standard_normal((5, k, n))
        starts /= np.linalg.norm(starts, axis=2, keepdims=True)
        starts = np.ascontiguousarray(starts)
        a = ck.ascent_norm(T2, n, k, starts, 2, 8)
        b = pyk.ascent_norm(T2, n, k, starts, 2, 8)
        assert a == pytest.approx(b, rel=1e-9)


# ---------------------------------------------------------------------------
# tensor algebra
# ---------------------------------------------------------------------------

def test_apply_matches_einsum():
    rng = np.random.default_rng(0)
    a = _rand_map(rng, 3, 4, 2)
    h = rng.standard_normal((3, 4))
    want = np.einsum("zabc,a,b,c->z", a.entries, h[0], h[1], h[2])
    np.testing.assert_allclose(a.apply(h), want, rtol=1e-12)
    with pytest.raises(DimensionMismatchError):
        a.apply(h[:2])


def test_tensor_product_values_and_shapes():
    rng = np.random.default_rng(1)
    b = _rand_map(rng, 2, 3, 2)
    c = _rand_map(rng, 1, 3, 4)
    tp = tensor_product(b, c)
    assert (tp.arity, tp.in_dim, tp.out_dim) == (3, 3, 8)
    h = rng.standard_normal((3, 3))
    want = np.kron(b.apply(h[:2]), c.apply(h[2:]))
    np.testing.assert_allclose(tp.apply(h), want, rtol=1e-12)
    with pytest.raises(DimensionMismatchError):
        tensor_product(b, _rand_map(rng, 1, 2, 1))


def test_compose_matches_pointwise():
    rng = np.random.default_rng(2)
    a = _rand_map(rng, 2, 3, 2)
    p = _rand_map(rng, 2, 4, 3)
    q = _rand_map(rng, 1, 4, 3)
    comp = compose(a, [p, q])
    assert (comp.arity, comp.in_dim, comp.out_dim) == (3, 4, 2)
    h = rng.standard_normal((3, 4))
    want = a.apply([p.apply(h[:2]), q.apply(h[2:])])
    np.testing.assert_allclose(comp.apply(h), want, rtol=1e-12)
    eye = identity_map(3)
    thru = compose(a, [eye, eye])
    np.testing.assert_allclose(thru.entries, a.entries)
    with pytest.raises(DimensionMismatchError):
        compose(a, [p])
    with pytest.raises(DimensionMismatchError):
        compose(a, [p, _rand_map(rng, 1, 4, 2)])


def test_symmetrize_properties():
    rng = np.random.default_rng(3)
    a = _rand_map(rng, 3, 3, 2)
    s = symmetrize(a)
    for perm in [(0, 2, 1, 3), (0, 3, 2, 1)]:
        np.testing.assert_allclose(s.entries, np.transpose(s.entries, perm),
                                   rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(symmetrize(s).entries, s.entries, rtol=1e-12)
    h = rng.standard_normal(3)
    np.testing.assert_allclose(s.apply([h, h, h]), a.apply([h, h, h]), rtol=1e-12)


# ---------------------------------------------------------------------------
# operator norms
# ---------------------------------------------------------------------------

def test_operator_norm_rank_one_exact():
    u = np.array([0.6, 0.8])            # norm 1
    v = np.array([2.0, 0.0, 0.0])       # norm 2
    w = np.array([1.5, 2.0, 0.0])       # norm 2.5
    a = MultilinearMap(2, 3, 2, np.einsum("z,a,b->zab", u, v, w))
    assert operator_norm(a, mode="upper") == pytest.approx(5.0, rel=1e-12)
    assert operator_norm(a) == pytest.approx(5.0, rel=1e-9)


def test_operator_norm_matrix_case():
    rng = np.random.default_rng(4)
    m = rng.standard_normal((4, 5))
    a = MultilinearMap(1, 5, 4, m)
    sig = np.linalg.svd(m, compute_uv=False)[0]
    assert operator_norm(a) == pytest.approx(sig, rel=1e-8)
    assert operator_norm(a, mode="upper") >= sig - 1e-12


def test_operator_norm_bracket_random():
    rng = np.random.default_rng(5)
    for arity, n, d in [(2, 3, 2), (3, 2, 2), (4, 2, 1)]:
        a = _rand_map(rng, arity, n, d)
        lo = operator_norm(a)
        hi = operator_norm(a, mode="upper")
        assert 0 < lo <= hi * (1 + 1e-12)
    with pytest.raises(ValueError):
        operator_norm(a, mode="exact")


def test_operator_norm_arity_zero():
    a = MultilinearMap(0, 1, 3, np.array([3.0, 0.0, 4.0]))
    assert operator_norm(a) == pytest.approx(5.0)
    assert operator_norm(a, mode="upper") == pytest.approx(5.0)


# ---------------------------------------------------------------------------
# expansion evaluation against independent calculus
# ---------------------------------------------------------------------------

def test_composition_sin_exp_against_sympy():
    # D^m(sin∘exp)(0); m = 2 value frozen as cos(1) - sin(1)
    x = sp.Symbol("x")
    g_jets = _scalar_jets({k: 1.0 for k in range(1, 5)})          # exp at 0
    f_jets = _scalar_jets({k: float(sp.diff(sp.sin(x), x, k).subs(x, 1))
                           for k in range(1, 5)})                 # sin at e^0
    for m in range(1, 5):
        e = sy.canonicalize(sy.expand_composition(m))
        got = evaluate_expansion(e, composition_context(1, f_jets, g_jets))
        want = float(sp.diff(sp.sin(sp.exp(x)), x, m).subs(x, 0))
        assert float(got.entries.ravel()[0]) == pytest.approx(want, rel=1e-13)
    m2 = evaluate_expansion(sy.canonicalize(sy.expand_composition(2)),
                            composition_context(1, f_jets, g_jets))
    assert float(m2.entries.ravel()[0]) == pytest.approx(
        math.cos(1.0) - math.sin(1.0), rel=1e-14)


def test_product_leibniz_against_sympy():
    x = sp.Symbol("x")
    x0 = 0.3
    f_jets = _scalar_jets({k: float(sp.diff(sp.sin(x), x, k).subs(x, x0))
                           for k in range(0, 4)})
    g_jets = _scalar_jets({k: float(sp.diff(sp.exp(x), x, k).subs(x, x0))
                           for k in range(0, 4)})
    for m in range(1, 4):
        e = sy.canonicalize(sy.expand_product(m))
        got = evaluate_expansion(e, product_context(1, f_jets, g_jets))
        want = float(sp.diff(sp.sin(x) * sp.exp(x), x, m).subs(x, x0))
        assert float(got.entries.ravel()[0]) == pytest.approx(want, rel=1e-13)


def test_inverse_jets_match_classical_1d():
    rng = np.random.default_rng(11)
    for _ in range(20):
        a = float(rng.uniform(0.5, 2.0)) * float(rng.choice([-1.0, 1.0]))
        b, c, d = (float(v) for v in rng.standard_normal(3))
        jets = inverse_jets(_scalar_jets({1: a, 2: b, 3: c, 4: d}), 4)
        want = {1: 1 / a,
                2: -b / a**3,
                3: (3 * b**2 - a * c) / a**5,
                4: -(15 * b**3 - 10 * a * b * c + a**2 * d) / a**7}
        for k, w in want.items():
            got = float(jets[k].entries.ravel()[0])
            assert got == pytest.approx(w, rel=1e-12), k


def test_substituted_matches_recursive_2d():
    rng = np.random.default_rng(12)
    n = 2
    f_jets = {1: MultilinearMap(1, n, n, np.eye(n) + 0.3 * rng.standard_normal((n, n)))}
    for k in (2, 3):
        f_jets[k] = symmetrize(MultilinearMap(k, n, n,
                                              rng.standard_normal((n,) + (n,) * k)))
    finv = inverse_jets(f_jets, 3)
    dfinv = {1: finv[1]}
    for m in (2, 3):
        e = sy.canonicalize(sy.expand_inverse(m, substituted=True))
        got = symmetrize(evaluate_expansion(e, inverse_context(n, f_jets, dfinv)))
        np.testing.assert_allclose(got.entries, finv[m].entries,
                                   rtol=1e-11, atol=1e-13)


def test_inverse_jets_round_trip_identity():
    # jets of f⁻¹∘f agree with the identity map's jets: first order I, rest 0
    rng = np.random.default_rng(13)
    n = 3
    f_jets = {1: MultilinearMap(1, n, n, np.eye(n) + 0.2 * rng.standard_normal((n, n)))}
    for k in (2, 3):
        f_jets[k] = symmetrize(MultilinearMap(k, n, n,
                                              rng.standard_normal((n,) + (n,) * k)))
    finv = inverse_jets(f_jets, 3)
    for m in (1, 2, 3):
        e = sy.canonicalize(sy.expand_composition(m))
        ctx = composition_context(n, finv, f_jets)   # outer f⁻¹ at f(x), inner f
        got = symmetrize(evaluate_expansion(e, ctx)).entries
        want = np.eye(n) if m == 1 else np.zeros((n,) + (n,) * m)
        np.testing.assert_allclose(got, want, atol=1e-12)


def test_missing_jet_and_shape_errors():
    jets = _scalar_jets({1: 2.0})
    e = sy.canonicalize(sy.expand_inverse(2))
    with pytest.raises(MissingJetError):
        evaluate_expansion(e, inverse_context(1, jets, inverse_jets(jets, 1)))
    with pytest.raises(DimensionMismatchError):
        MultilinearMap(2, 3, 1, np.zeros((1, 3, 2)))
    with pytest.raises(DimensionMismatchError):
        _rand_map(np.random.default_rng(0), 1, 2, 2) + _rand_map(
            np.random.default_rng(0), 1, 3, 2)
