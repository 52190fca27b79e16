"""Dense multilinear maps and numeric evaluation of symbolic expansions.

A :class:`MultilinearMap` is a k-linear map R^n × ... × R^n → R^d stored as a
dense coefficient array of shape (d, n, ..., n) in row-major order; axis 0 is
the output component, axis i ≥ 1 is argument slot i.  Arity 0 degenerates to a
plain vector.  Everything is float64.

Composition conventions mirror the symbolic grammar: ``compose(A, parts)``
feeds part i into slot i of A (each part outputs a vector of A's input
dimension), and term evaluation assigns a term's argument slots sequentially —
leading direct slots first, then each inner factor's slots left to right.
Merged symbolic terms identify argument assignments up to permutation, so the
evaluated sum equals the true derivative tensor after :func:`symmetrize`; the
verification layer always compares symmetrized tensors, and
:func:`inverse_jets` symmetrizes each order before reuse.

Operator norms are bracketed rather than computed exactly: ``upper`` is the
Frobenius bound and ``sampled`` is a lower bound from deterministic axis
starts plus seeded random starts refined by alternating per-slot power
iteration (see the kernel modules).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import symbolic as sym
from .backend import kernels
from .errors import DimensionMismatchError, MissingJetError

_SS_LETTERS = "abcdefghijklmnopqrstuvwxy"

NORM_UPPER = "upper"
NORM_SAMPLED = "sampled"


@dataclass(frozen=True)
class MultilinearMap:
    """Dense k-linear map with entries of shape (out_dim,) + (in_dim,)*arity."""

    arity: int
    in_dim: int
    out_dim: int
    entries: np.ndarray

    def __post_init__(self):
        expected = (self.out_dim,) + (self.in_dim,) * self.arity
        arr = np.ascontiguousarray(self.entries, dtype=np.float64)
        if arr.shape != expected:
            raise DimensionMismatchError(
                f"entries shape {arr.shape} does not match {expected}")
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_entries(cls, entries, in_dim=None):
        arr = np.ascontiguousarray(entries, dtype=np.float64)
        if arr.ndim == 0:
            raise DimensionMismatchError("entries need at least the output axis")
        k = arr.ndim - 1
        n = arr.shape[1] if k else (in_dim if in_dim is not None else 1)
        return cls(k, n, arr.shape[0], arr)

    @classmethod
    def zero(cls, arity, in_dim, out_dim):
        return cls(arity, in_dim, out_dim, np.zeros((out_dim,) + (in_dim,) * arity))

    @property
    def flat(self):
        """Entries flattened to (out_dim, in_dim**arity), C order."""
        return self.entries.reshape(self.out_dim, -1)

    def apply(self, args):
        """Evaluate on one argument tuple (sequence of arity vectors)."""
        if len(args) != self.arity:
            raise DimensionMismatchError(f"expected {self.arity} arguments, got {len(args)}")
        if self.arity == 0:
            return self.entries.copy()
        batch = np.asarray(args, dtype=np.float64).reshape(1, self.arity, self.in_dim)
        return kernels.contract_batch(self.flat, self.in_dim, self.arity, batch)[0]

    def scaled(self, c):
        return MultilinearMap(self.arity, self.in_dim, self.out_dim, c * self.entries)

    def __add__(self, other):
        if (self.arity, self.in_dim, self.out_dim) != (other.arity, other.in_dim, other.out_dim):
            raise DimensionMismatchError("cannot add maps of different shapes")
        return MultilinearMap(self.arity, self.in_dim, self.out_dim,
                              self.entries + other.entries)


def identity_map(n) -> MultilinearMap:
    return MultilinearMap(1, n, n, np.eye(n))


def tensor_product(b: MultilinearMap, c: MultilinearMap) -> MultilinearMap:
    """(b⊗c)(h_1..h_{kb+kc}) = b(h_1..h_kb) ⊗ c(rest), Kronecker output layout.

    Output component (i, j) lands at flat index i*c.out_dim + j, so for scalar
    maps (out_dim 1) the outputs simply multiply.
    """
    if b.arity and c.arity and b.in_dim != c.in_dim:
        raise DimensionMismatchError("tensor factors disagree on input dimension")
    n = b.in_dim if b.arity else c.in_dim
    raw = np.multiply.outer(b.entries, c.entries)
    # axes: (db, nb.., dc, nc..) -> (db, dc, nb.., nc..)
    raw = np.moveaxis(raw, 1 + b.arity, 1)
    out = raw.reshape((b.out_dim * c.out_dim,) + (n,) * (b.arity + c.arity))
    return MultilinearMap(b.arity + c.arity, n, b.out_dim * c.out_dim, out)


def compose(a: MultilinearMap, parts) -> MultilinearMap:
    """a·(p_1 ⊗ ... ⊗ p_j): feed part i into argument slot i of ``a``.

    Every part must output a vector of dimension ``a.in_dim``; the result has
    arity Σ part arities.  Identity parts pass slots through unchanged.
    """
    parts = list(parts)
    if len(parts) != a.arity:
        raise DimensionMismatchError(f"map of arity {a.arity} needs {a.arity} parts, got {len(parts)}")
    for p in parts:
        if p.out_dim != a.in_dim:
            raise DimensionMismatchError(
                f"part outputs dim {p.out_dim}, slot expects {a.in_dim}")
    dims = {p.in_dim for p in parts if p.arity}
    if len(dims) > 1:
        raise DimensionMismatchError("parts disagree on input dimension")
    n = dims.pop() if dims else a.in_dim
    total = sum(p.arity for p in parts)
    pos = 0
    a_sub = "z"
    out_sub = "z"
    part_subs = []
    for i, p in enumerate(parts):
        slot = _SS_LETTERS[total + i]
        block = _SS_LETTERS[pos:pos + p.arity]
        pos += p.arity
        a_sub += slot
        out_sub += block
        part_subs.append(slot + block)
    ss = a_sub + "," + ",".join(part_subs) + "->" + out_sub
    raw = np.einsum(ss, a.entries, *(p.entries for p in parts))
    return MultilinearMap(total, n, a.out_dim, raw.reshape((a.out_dim,) + (n,) * total))


def symmetrize(a: MultilinearMap) -> MultilinearMap:
    """Average over all permutations of the argument slots (arity! transposes)."""
    if a.arity <= 1:
        return a
    acc = np.zeros_like(a.entries)
    count = 0
    for perm in itertools.permutations(range(1, a.arity + 1)):
        acc += np.transpose(a.entries, (0,) + perm)
        count += 1
    return MultilinearMap(a.arity, a.in_dim, a.out_dim, acc / count)


def _axis_starts(n, k, cap=128):
    combos = itertools.islice(itertools.product(range(n), repeat=k), cap)
    out = []
    for combo in combos:
        v = np.zeros((k, n))
        for slot, i in enumerate(combo):
            v[slot, i] = 1.0
        out.append(v)
    return np.array(out)


def operator_norm(a: MultilinearMap, mode: str = NORM_SAMPLED, samples: int = 32,
                  rounds: int = 3, power_iters: int = 15, rng=None) -> float:
    """Injective operator norm bracket.

    ``upper``: the Frobenius bound ‖a‖_F (|a(h)| ≤ ‖a‖_F on unit tuples by
    Cauchy-Schwarz).  ``sampled``: a lower bound, the best value over all
    axis-aligned unit tuples (capped at 128) plus ``samples`` seeded random
    unit tuples, each refined by alternating per-slot ascent.  Deterministic
    for a fixed rng seed; the default is a fresh seed-0 generator.
    """
    if mode == NORM_UPPER:
        return float(np.linalg.norm(a.entries))
    if mode != NORM_SAMPLED:
        raise ValueError(f"unknown operator norm mode {mode!r}")
    if a.arity == 0:
        return float(np.linalg.norm(a.entries))
    if rng is None:
        rng = np.random.default_rng(0)
    starts = [_axis_starts(a.in_dim, a.arity)]
    if samples > 0:
        raw = rng.standard_normal((samples, a.arity, a.in_dim))
        norms = np.linalg.norm(raw, axis=2, keepdims=True)
        norms[norms == 0] = 1.0
        starts.append(raw / norms)
    starts = np.ascontiguousarray(np.concatenate(starts, axis=0))
    return float(kernels.ascent_norm(a.flat, a.in_dim, a.arity, starts,
                                     rounds, power_iters))


# ---------------------------------------------------------------------------
# jet contexts and expansion evaluation
# ---------------------------------------------------------------------------

@dataclass
class JetContext:
    """Factor values for expansion evaluation, keyed by FactorSymbol."""

    in_dim: int
    entries: dict = field(default_factory=dict)

    def add(self, factor: sym.FactorSymbol, value: MultilinearMap):
        if value.arity != factor.order:
            raise DimensionMismatchError(
                f"jet of order {factor.order} needs arity {factor.order}, got {value.arity}")
        self.entries[factor] = value

    def get(self, factor: sym.FactorSymbol) -> MultilinearMap:
        try:
            return self.entries[factor]
        except KeyError:
            raise MissingJetError(f"no jet for {factor}") from None


def composition_context(n, f_jets, g_jets) -> JetContext:
    """f_jets: {order: D^k f at g(y)}; g_jets: {order: D^k g at y}."""
    ctx = JetContext(n)
    for k, v in f_jets.items():
        ctx.add(sym.FactorSymbol(sym.TAG_F, k, sym.AT_COMPOSED), v)
    for k, v in g_jets.items():
        ctx.add(sym.FactorSymbol(sym.TAG_G, k), v)
    return ctx


def inverse_context(n, f_jets, finv_jets) -> JetContext:
    """f_jets: {order: D^k f at f⁻¹(y)}; finv_jets: {order: D^k f⁻¹ at y}."""
    ctx = JetContext(n)
    for k, v in f_jets.items():
        ctx.add(sym.FactorSymbol(sym.TAG_F, k, sym.AT_COMPOSED), v)
    for k, v in finv_jets.items():
        ctx.add(sym.FactorSymbol(sym.TAG_FINV, k), v)
    return ctx


def product_context(n, f_jets, g_jets) -> JetContext:
    """Jets at a common point, order 0 (the bare value) included."""
    ctx = JetContext(n)
    for k, v in f_jets.items():
        ctx.add(sym.FactorSymbol(sym.TAG_F, k), v)
    for k, v in g_jets.items():
        ctx.add(sym.FactorSymbol(sym.TAG_G, k), v)
    return ctx


def _factor_value(f, ctx: JetContext) -> MultilinearMap:
    if isinstance(f, sym.FactorSymbol):
        return ctx.get(f)
    # composite factor: outer applied to inner, then optional leading
    chain = compose(_factor_value(f.outer, ctx), [_factor_value(x, ctx) for x in f.inner])
    if f.leading is None:
        return chain
    lead = _factor_value(f.leading, ctx)
    eyes = [identity_map(ctx.in_dim)] * (lead.arity - 1)
    return compose(lead, eyes + [chain])


def evaluate_term(t: sym.TensorTerm, ctx: JetContext) -> MultilinearMap:
    """Numeric value of one term, arguments assigned sequentially.

    Product terms (outer at the identity point) evaluate as coefficient ·
    outer ⊗ inner; composition/inverse terms as coefficient · [leading ·]
    outer ∘ (⊗ inner).
    """
    if t.outer.evaluation_point == sym.AT_IDENTITY:
        out = tensor_product(ctx.get(t.outer), ctx.get(t.inner_factors[0]))
        return out.scaled(float(t.coefficient))
    inner = [_factor_value(x, ctx) for x in t.inner_factors]
    chain = compose(_factor_value(t.outer, ctx), inner)
    if t.leading is not None:
        lead = _factor_value(t.leading, ctx)
        eyes = [identity_map(ctx.in_dim)] * (lead.arity - 1)
        chain = compose(lead, eyes + [chain])
    return chain.scaled(float(t.coefficient))


def evaluate_expansion(e: sym.DerivativeExpansion, ctx: JetContext) -> MultilinearMap:
    """Sum of evaluated terms (not symmetrized; see module docstring)."""
    if not e.terms:
        raise MissingJetError("cannot evaluate an empty expansion without dimensions")
    acc = None
    for t in e.terms:
        v = evaluate_term(t, ctx)
        acc = v if acc is None else acc + v
    return acc


def inverse_jets(f_jets, max_order, symmetrized=True):
    """Jets of f⁻¹ at y = f(x) from jets of f at x, built order by order.

    ``f_jets`` maps order → D^k f at x (order 1 must be invertible).  Each
    D^k f⁻¹ is obtained by evaluating the order-k inverse expansion with the
    lower-order results and is symmetrized before reuse, which makes the
    returned tensors the true (symmetric) derivatives.
    """
    df = f_jets[1]
    n = df.in_dim
    out = {1: MultilinearMap(1, n, n, np.linalg.inv(df.entries))}
    for k in range(2, max_order + 1):
        e = sym.expand_inverse(k, max_order=max(k, sym.DEFAULT_MAX_ORDER))
        val = evaluate_expansion(e, inverse_context(n, f_jets, out))
        out[k] = symmetrize(val) if symmetrized else val
    return out
