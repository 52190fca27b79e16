"""Closed-form bilipschitz test maps, numeric inversion, and derivative jets.

Every map in the gallery has the sinusoidal-affine form

    f_d(x) = (A x)_d + c_d + amp_d · sin(x[src_d]),

which keeps all derivative tensors closed-form at every order: the order-k
jet has the linear part at k = 1 and a single ``amp·sin(x + kπ/2)`` entry on
the pure ``src_d`` multi-index for k ≥ 2.  The module also provides damped
Newton pointwise inversion, iterated central-difference jets with one
Richardson extrapolation step (the independent oracle for the expansion
identities), and grid sampling of |D^k f| / |D^k f⁻¹| into step profiles.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InversionError, ProfileError
from .multilinear import MultilinearMap, inverse_jets, operator_norm
from .spaces import StepProfile

# ---------------------------------------------------------------------------
# test maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TestMap:
    """Bilipschitz map of sinusoidal-affine form on a box domain.

    ``lipschitz`` is the documented bilipschitz constant L: both the forward
    differential norm and the inverse differential norm are bounded by L, so
    L⁻¹|x−y| ≤ |f(x)−f(y)| ≤ L|x−y| on the (convex) domain.
    """

    name: str
    dim: int
    domain: tuple
    lipschitz: float
    matrix: np.ndarray = field(repr=False)
    offset: np.ndarray = field(repr=False)
    amps: np.ndarray = field(repr=False)
    srcs: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=np.float64))
        object.__setattr__(self, "offset", np.asarray(self.offset, dtype=np.float64))
        object.__setattr__(self, "amps", np.asarray(self.amps, dtype=np.float64))
        object.__setattr__(self, "srcs", np.asarray(self.srcs, dtype=np.intp))

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        return self.matrix @ x + self.offset + self.amps * np.sin(x[self.srcs])

    def jet(self, x, order: int) -> MultilinearMap:
        """Exact order-``order`` derivative tensor at x (order ≥ 1)."""
        if order < 1:
            raise DomainError(f"jet order must be >= 1, got {order}")
        x = np.asarray(x, dtype=np.float64)
        n = self.dim
        if order == 1:
            entries = self.matrix.copy()
            entries[np.arange(n), self.srcs] += self.amps * np.cos(x[self.srcs])
            return MultilinearMap(1, n, n, entries)
        entries = np.zeros((n,) + (n,) * order)
        phase = x[self.srcs] + order * (math.pi / 2.0)
        diag_vals = self.amps * np.sin(phase)
        for d in range(n):
            if self.amps[d] != 0.0:
                entries[(d,) + (int(self.srcs[d]),) * order] = diag_vals[d]
        return MultilinearMap(order, n, n, entries)

    def jacobian(self, x) -> np.ndarray:
        return self.jet(x, 1).entries

    def jacobian_det(self, x) -> float:
        return float(np.linalg.det(self.jacobian(x)))

    def contains(self, x, margin: float = 0.0) -> bool:
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        return all(lo + margin <= xi <= hi - margin
                   for xi, (lo, hi) in zip(x, self.domain))

    def image_box(self) -> tuple:
        """Conservative box containing f(domain): interval arithmetic on the
        affine part plus the full ±amp swing of the sinusoid."""
        los, his = [], []
        for d in range(self.dim):
            lo = self.offset[d] - abs(self.amps[d])
            hi = self.offset[d] + abs(self.amps[d])
            for j, (a, b) in enumerate(self.domain):
                w = self.matrix[d, j]
                lo += min(w * a, w * b)
                hi += max(w * a, w * b)
            los.append(lo)
            his.append(hi)
        return tuple(zip(los, his))

    def interior_grid(self, counts, margin: float = 0.0) -> np.ndarray:
        """Cell-center points of a uniform grid, shape (∏counts, dim)."""
        counts = (counts,) * self.dim if isinstance(counts, int) else tuple(counts)
        if len(counts) != self.dim or any(c < 1 for c in counts):
            raise DomainError(f"need {self.dim} positive counts, got {counts}")
        axes = []
        for (lo, hi), c in zip(self.domain, counts):
            if hi - lo <= 2 * margin:
                raise DomainError("margin swallows the domain")
            w = (hi - lo) / c
            axes.append(lo + w * (np.arange(c) + 0.5))
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def cell_measure(self, counts) -> float:
        counts = (counts,) * self.dim if isinstance(counts, int) else tuple(counts)
        vol = math.prod(hi - lo for lo, hi in self.domain)
        return vol / math.prod(counts)

    @property
    def domain_measure(self) -> float:
        return math.prod(hi - lo for lo, hi in self.domain)


def gallery() -> dict:
    """The standard test maps, keyed by name.

    ======================  ===========================================  =====
    name                    formula / domain                             L
    ======================  ===========================================  =====
    affine_1d               2x + 1 on (0, 1)                             2
    sine_1d                 x + sin(x)/2 on (0, 2π); f' ∈ [1/2, 3/2]     2
    shear_2d                (x + sin(y)/4, y + sin(x)/4) on (0, π)²;
                            σ(Df) ∈ [3/4, 5/4]                           4/3
    affine_2d               (x/2 + 0.8, y/2 + 0.9) on (0, π)²            2
    shear_2d_soft           (x/2 + 1 + sin(y)/8, y/2 + 1 + sin(x)/8)
                            on (0, π)²; σ(Df) ∈ [3/8, 5/8]               8/3
    ======================  ===========================================  =====

    The images of ``affine_2d`` and ``shear_2d_soft`` sit inside (0, π)², so
    either can serve as the inner factor of a composition with any 2-D map.
    """
    two_pi = 2 * math.pi
    maps = [
        TestMap("affine_1d", 1, ((0.0, 1.0),), 2.0,
                matrix=[[2.0]], offset=[1.0], amps=[0.0], srcs=[0]),
        TestMap("sine_1d", 1, ((0.0, two_pi),), 2.0,
                matrix=[[1.0]], offset=[0.0], amps=[0.5], srcs=[0]),
        TestMap("shear_2d", 2, ((0.0, math.pi),) * 2, 4.0 / 3.0,
                matrix=np.eye(2), offset=[0.0, 0.0], amps=[0.25, 0.25], srcs=[1, 0]),
        TestMap("affine_2d", 2, ((0.0, math.pi),) * 2, 2.0,
                matrix=0.5 * np.eye(2), offset=[0.8, 0.9], amps=[0.0, 0.0], srcs=[0, 1]),
        TestMap("shear_2d_soft", 2, ((0.0, math.pi),) * 2, 8.0 / 3.0,
                matrix=0.5 * np.eye(2), offset=[1.0, 1.0], amps=[0.125, 0.125], srcs=[1, 0]),
    ]
    return {m.name: m for m in maps}


# ---------------------------------------------------------------------------
# pointwise inversion
# ---------------------------------------------------------------------------

def invert_pointwise(tm: TestMap, y, x0=None, tol: float = 1e-13, max_iter: int = 100):
    """Solve f(x) = y by damped Newton iteration started at x0 (default y)."""
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    x = np.array(y if x0 is None else np.atleast_1d(x0), dtype=np.float64)
    scale = max(1.0, float(np.abs(y).max()))
    res = np.atleast_1d(tm(x)) - y
    err = float(np.abs(res).max())
    for _ in range(max_iter):
        if err <= tol * scale:
            return x
        step = np.linalg.solve(tm.jacobian(x), res)
        lam = 1.0
        for _ in range(30):
            trial = x - lam * step
            trial_res = np.atleast_1d(tm(trial)) - y
            trial_err = float(np.abs(trial_res).max())
            if trial_err < err:
                break
            lam *= 0.5
        else:
            raise InversionError(f"{tm.name}: line search stalled at residual {err:.3e}")
        x, res, err = trial, trial_res, trial_err
    if err <= tol * scale:
        return x
    raise InversionError(f"{tm.name}: Newton failed to reach {tol:.1e}, residual {err:.3e}")


# ---------------------------------------------------------------------------
# finite-difference jets (independent derivative oracle)
# ---------------------------------------------------------------------------

def _central_stencil(fun, x, dirs, h):
    k = len(dirs)
    total = None
    for signs in itertools.product((1.0, -1.0), repeat=k):
        pt = np.array(x, dtype=np.float64)
        for s, i in zip(signs, dirs):
            pt[i] += s * h
        val = np.atleast_1d(np.asarray(fun(pt), dtype=np.float64))
        coeff = math.prod(signs)
        total = coeff * val if total is None else total + coeff * val
    return total / (2.0 * h) ** k


def default_fd_step(order: int) -> float:
    """1e-3 through order 2, 1e-2 beyond: balances truncation against the
    2^k-fold cancellation noise of the iterated stencil."""
    return 1e-3 if order <= 2 else 1e-2


def finite_difference_jet(fun, x, order: int, in_dim: int, h: float = None,
                          richardson: bool = True) -> np.ndarray:
    """Iterated central differences for the full order-k derivative tensor.

    Computes one stencil per direction multiset (the stencil is symmetric in
    its directions) and scatters it over all index permutations; with
    ``richardson`` the O(h²) error is cancelled via (4·D_{h/2} − D_h)/3.
    Returns entries of shape (out_dim,) + (in_dim,)*order.
    """
    if order < 1:
        raise DomainError(f"fd order must be >= 1, got {order}")
    if h is None:
        h = default_fd_step(order)
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    probe = np.atleast_1d(np.asarray(fun(x), dtype=np.float64))
    out_dim = probe.shape[0]
    entries = np.zeros((out_dim,) + (in_dim,) * order)
    for dirs in itertools.combinations_with_replacement(range(in_dim), order):
        block = _central_stencil(fun, x, dirs, h)
        if richardson:
            block = (4.0 * _central_stencil(fun, x, dirs, h / 2.0) - block) / 3.0
        for perm in set(itertools.permutations(dirs)):
            entries[(slice(None),) + perm] = block
    return entries


def fd_jet_map(fun, x, order: int, in_dim: int, out_dim: int, h: float = None,
               richardson: bool = True) -> MultilinearMap:
    entries = finite_difference_jet(fun, x, order, in_dim, h=h, richardson=richardson)
    return MultilinearMap(order, in_dim, out_dim, entries)


# ---------------------------------------------------------------------------
# scalar fields for product-rule and interpolation checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarField:
    """Scalar function with closed-form jets of every order."""

    name: str
    dim: int
    domain: tuple
    fun: callable = field(repr=False)
    jet_entries: callable = field(repr=False)  # (x, order) -> ndarray (1,)+(dim,)*order

    def __call__(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        return self.fun(x)

    def jet(self, x, order: int) -> MultilinearMap:
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        if order == 0:
            return MultilinearMap(0, self.dim, 1, np.atleast_1d(self.fun(x)))
        return MultilinearMap(order, self.dim, 1, self.jet_entries(x, order))


def _sine_field():
    def f(x):
        return np.array([math.sin(x[0])])

    def jets(x, k):
        return np.full((1,) + (1,) * k, math.sin(x[0] + k * math.pi / 2.0))

    return ScalarField("sin", 1, ((0.0, 2 * math.pi),), f, jets)


def _exp_field():
    def f(x):
        return np.array([math.exp(x[0])])

    def jets(x, k):
        return np.full((1,) + (1,) * k, math.exp(x[0]))

    return ScalarField("exp", 1, ((0.0, 2.0),), f, jets)


def _const_field(c=1.5):
    def f(x):
        return np.array([c])

    def jets(x, k):
        return np.zeros((1,) + (1,) * k)

    return ScalarField("const", 1, ((0.0, 2 * math.pi),), f, jets)


def _poly_xxy_field():
    # u(x, y) = x²y: derivative tensors vanish from order 4 on
    def f(x):
        return np.array([x[0] * x[0] * x[1]])

    def jets(x, k):
        e = np.zeros((1,) + (2,) * k)
        if k == 1:
            e[0, 0] = 2.0 * x[0] * x[1]
            e[0, 1] = x[0] * x[0]
        elif k == 2:
            e[0, 0, 0] = 2.0 * x[1]
            e[0, 0, 1] = e[0, 1, 0] = 2.0 * x[0]
        elif k == 3:
            for idx in set(itertools.permutations((0, 0, 1))):
                e[(0,) + idx] = 2.0
        return e

    return ScalarField("poly_xxy", 2, ((0.0, math.pi),) * 2, f, jets)


def _poly_sum_field():
    # v(x, y) = x + y
    def f(x):
        return np.array([x[0] + x[1]])

    def jets(x, k):
        e = np.zeros((1,) + (2,) * k)
        if k == 1:
            e[0, 0] = e[0, 1] = 1.0
        return e

    return ScalarField("poly_sum", 2, ((0.0, math.pi),) * 2, f, jets)


def scalar_gallery() -> dict:
    fields = [_sine_field(), _exp_field(), _const_field(),
              _poly_xxy_field(), _poly_sum_field()]
    return {f.name: f for f in fields}


# ---------------------------------------------------------------------------
# derivative magnitude profiles
# ---------------------------------------------------------------------------

def _magnitude(tensor: MultilinearMap, pointwise: str, rng) -> float:
    if pointwise == "frobenius":
        return operator_norm(tensor, mode="upper")
    if pointwise == "sampled":
        return operator_norm(tensor, mode="sampled", samples=8, rounds=2,
                             power_iters=10, rng=rng)
    raise ProfileError(f"pointwise must be 'sampled' or 'frobenius', got {pointwise!r}")


def sample_derivative_profile(tm: TestMap, order: int, counts, use_inverse: bool = False,
                              pointwise: str = "sampled", seed: int = 0):
    """Step profile of |D^order f| (or |D^order f⁻¹|) over a uniform grid.

    Forward mode samples the closed-form jet at each cell center with the
    cell volume as measure.  Inverse mode pushes the grid forward: the value
    is |D^order f⁻¹| at f(center), produced from the closed-form f-jets at
    the center (no numeric inversion), and the measure is |det Df|·cell, so
    the profile lives on the image domain and its total reports the measured
    image measure.  Returns (profile, info) where info carries the totals and
    the measured measure ratio ``eta``.
    """
    if order < 1:
        raise ProfileError(f"profile order must be >= 1, got {order}")
    rng = np.random.default_rng(seed)
    centers = tm.interior_grid(counts)
    cell = tm.cell_measure(counts)
    values = np.empty(centers.shape[0])
    measures = np.full(centers.shape[0], cell)
    for i, x in enumerate(centers):
        if use_inverse:
            f_jets = {k: tm.jet(x, k) for k in range(1, order + 1)}
            finv = inverse_jets(f_jets, order)
            values[i] = _magnitude(finv[order], pointwise, rng)
            measures[i] = abs(np.linalg.det(f_jets[1].entries)) * cell
        else:
            values[i] = _magnitude(tm.jet(x, order), pointwise, rng)
    profile = StepProfile(values, measures)
    info = {
        "map": tm.name,
        "order": order,
        "mode": "inverse" if use_inverse else "forward",
        "domain_measure": tm.domain_measure,
        "profile_measure": profile.total_measure,
        "eta": profile.total_measure / tm.domain_measure,
    }
    return profile, info
