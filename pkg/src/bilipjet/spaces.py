"""Rearrangement-invariant function-space machinery on step profiles.

A :class:`StepProfile` is the finite representation of |u| on a measure space:
an ordered list of (value, measure) pieces whose measures sum to the domain
measure.  All norm computations are closed-form piecewise arithmetic except
the Orlicz (Luxemburg) norm, which brackets the gauge by bisection, and the
Young-condition integral, which uses adaptive Simpson quadrature.

Supported space specifications:

* ``Lp:p``           Lebesgue, (Σ v^p μ)^{1/p}
* ``Linf``           essential supremum
* ``Lorentz:p,q``    (∫₀^∞ (t^{1/p} u*(t))^q dt/t)^{1/q}, p > 1, 1 ≤ q < ∞
* ``Orlicz:name``    Luxemburg norm inf{λ > 0 : Σ A(v/λ) μ ≤ 1}
* ``Conv(X)^a``      convexification, ‖u‖ = ‖ |u|^a ‖_X^{1/a}; a = ∞ is Linf

The dilation operator is E_s f(x) = f(sx) where sx stays inside the source
domain and 0 otherwise.  Domains of different measure are compared with the
similar-spaces scaling convention used by the Hardy-Littlewood-Pólya transfer
lemma: a function g on a domain of measure η·a gets the image-side norm
η⁻¹‖E_η(g*)‖ computed on the reference domain (0, a) (see
:func:`similar_norm`), which makes the transfer conclusion an equality when
g* is exactly the 1/η-dilate of f*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (NormDivergenceError, ProfileError, SpaceSpecError,
                     SpecParseError)

# ---------------------------------------------------------------------------
# step profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StepProfile:
    """Nonnegative step function given by consecutive (value, measure) pieces."""

    values: np.ndarray
    measures: np.ndarray
    rearranged: bool = False

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.values, dtype=np.float64))
        m = np.atleast_1d(np.asarray(self.measures, dtype=np.float64))
        if v.ndim != 1 or m.shape != v.shape or v.size == 0:
            raise ProfileError("values and measures must be matching nonempty 1-D arrays")
        if not np.all(np.isfinite(v)) or not np.all(np.isfinite(m)):
            raise ProfileError("profile entries must be finite")
        if np.any(v < 0):
            raise ProfileError("profile values must be nonnegative")
        if np.any(m <= 0):
            raise ProfileError("piece measures must be positive")
        if self.rearranged and np.any(np.diff(v) > 0):
            raise ProfileError("a rearranged profile must have non-increasing values")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "measures", m)

    @property
    def total_measure(self) -> float:
        return float(self.measures.sum())

    @classmethod
    def from_pairs(cls, pairs, total=None, rearranged=False):
        vals = [p[0] for p in pairs]
        meas = [p[1] for p in pairs]
        u = cls(np.array(vals), np.array(meas), rearranged=rearranged)
        if total is not None:
            got = u.total_measure
            if abs(got - total) > 1e-12 * max(1.0, abs(total)):
                raise ProfileError(f"measures sum to {got}, declared total {total}")
        return u

    def pairs(self):
        return list(zip(self.values.tolist(), self.measures.tolist()))


def decreasing_rearrangement(u: StepProfile) -> StepProfile:
    """u*: the same values sorted non-increasing, equal values merged."""
    order = np.argsort(-u.values, kind="stable")
    v = u.values[order]
    m = u.measures[order]
    keep_v, keep_m = [v[0]], [m[0]]
    for x, w in zip(v[1:], m[1:]):
        if x == keep_v[-1]:
            keep_m[-1] += w
        else:
            keep_v.append(x)
            keep_m.append(w)
    return StepProfile(np.array(keep_v), np.array(keep_m), rearranged=True)


def _require_rearranged(u: StepProfile, what: str):
    if not u.rearranged:
        raise ProfileError(f"{what} requires a rearranged profile")


def dilate(u: StepProfile, s: float, a: float) -> StepProfile:
    """E_s u on (0, a): x ↦ u(sx) while sx stays below u's total, 0 beyond."""
    _require_rearranged(u, "dilate")
    if not (s > 0 and math.isfinite(s)):
        raise ProfileError(f"dilation parameter must be positive, got {s}")
    if not (a > 0 and math.isfinite(a)):
        raise ProfileError(f"target measure must be positive, got {a}")
    breaks = np.cumsum(u.measures) / s
    clipped = np.minimum(breaks, a)
    widths = np.diff(np.concatenate(([0.0], clipped)))
    keep = widths > 0
    vals = u.values[keep]
    meas = widths[keep]
    covered = clipped[-1]
    pad = a - covered
    if pad > 1e-15 * a:
        vals = np.concatenate((vals, [0.0]))
        meas = np.concatenate((meas, [pad]))
    if vals.size == 0:
        vals, meas = np.array([0.0]), np.array([a])
    return StepProfile(vals, meas, rearranged=True)


def partial_integral(u: StepProfile, t: float) -> float:
    """∫₀^t u*(s) ds for a rearranged profile; t=0 gives 0."""
    _require_rearranged(u, "partial_integral")
    total = u.total_measure
    if t < 0 or t > total * (1 + 1e-12):
        raise ProfileError(f"t={t} outside [0, {total}]")
    t = min(t, total)
    cum = np.cumsum(u.measures)
    idx = int(np.searchsorted(cum, t, side="left"))
    full = float(np.dot(u.values[:idx], u.measures[:idx]))
    if idx < u.values.size:
        prev = cum[idx - 1] if idx else 0.0
        full += u.values[idx] * (t - prev)
    return full


def corefine(profiles):
    """Split profiles on a common domain at the union of their breakpoints.

    Returns (measures, [values per profile]).  Totals must agree to 1e-12
    relative; float dust below that threshold is merged away.
    """
    totals = [u.total_measure for u in profiles]
    ref = totals[0]
    for t in totals[1:]:
        if abs(t - ref) > 1e-12 * max(1.0, ref):
            raise ProfileError(f"profiles live on different totals: {totals}")
    cuts = np.unique(np.concatenate([np.cumsum(u.measures) for u in profiles]))
    cuts = cuts[cuts <= ref]
    merged = [cuts[0]]
    for c in cuts[1:]:
        if c - merged[-1] > 1e-12 * max(1.0, ref):
            merged.append(c)
    if ref - merged[-1] > 1e-12 * max(1.0, ref):
        merged.append(ref)
    else:
        merged[-1] = ref
    cuts = np.array(merged)
    mids = (np.concatenate(([0.0], cuts[:-1])) + cuts) / 2.0
    measures = np.diff(np.concatenate(([0.0], cuts)))
    out_values = []
    for u in profiles:
        cum = np.cumsum(u.measures)
        idx = np.minimum(np.searchsorted(cum, mids, side="right"), u.values.size - 1)
        out_values.append(u.values[idx])
    return measures, out_values


# ---------------------------------------------------------------------------
# profile CSV format: '#total_measure=' header, then 'value,measure' rows
# ---------------------------------------------------------------------------

def write_profile_csv(u: StepProfile, path):
    lines = [f"#total_measure={u.total_measure!r}\n"]
    lines += [f"{v!r},{m!r}\n" for v, m in u.pairs()]
    with open(path, "w", encoding="utf-8") as fh:
        fh.writelines(lines)


def read_profile_csv(path) -> StepProfile:
    total = None
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if line.startswith("#total_measure="):
                    total = float(line.split("=", 1)[1])
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ProfileError(f"{path}:{lineno}: expected 'value,measure', got {line!r}")
            try:
                pairs.append((float(parts[0]), float(parts[1])))
            except ValueError as exc:
                raise ProfileError(f"{path}:{lineno}: {exc}") from exc
    if not pairs:
        raise ProfileError(f"{path}: no profile rows")
    return StepProfile.from_pairs(pairs, total=total)


# ---------------------------------------------------------------------------
# Young functions
# ---------------------------------------------------------------------------


class YoungFunction:
    """Convex A: [0,∞) → [0,∞) with A(0) = 0, vectorized over arrays."""

    name = "young"

    def __call__(self, t):
        raise NotImplementedError


@dataclass(frozen=True)
class PowerYoung(YoungFunction):
    p: float

    def __post_init__(self):
        if not self.p >= 1:
            raise SpaceSpecError(f"power Young function needs p >= 1, got {self.p}")

    @property
    def name(self):
        return f"pow{self.p:g}"

    def __call__(self, t):
        return np.power(t, self.p)


@dataclass(frozen=True)
class ExpM1Young(YoungFunction):
    name = "expm1"

    def __call__(self, t):
        return np.expm1(t)


@dataclass(frozen=True)
class TabulatedYoung(YoungFunction):
    """Piecewise-linear Young function through (t_i, A_i); extended linearly.

    Nodes must start at (0, 0) with nondecreasing, convex values (slopes
    checked on construction).
    """

    ts: tuple
    As: tuple

    @property
    def name(self):
        return f"table[{len(self.ts)}]"

    def __post_init__(self):
        ts = np.asarray(self.ts, dtype=np.float64)
        As = np.asarray(self.As, dtype=np.float64)
        if ts.size < 2 or ts.shape != As.shape:
            raise SpaceSpecError("tabulated Young function needs matching nodes")
        if ts[0] != 0.0 or As[0] != 0.0:
            raise SpaceSpecError("tabulated Young function must start at (0, 0)")
        if np.any(np.diff(ts) <= 0) or np.any(As < 0):
            raise SpaceSpecError("nodes must be increasing with nonnegative values")
        slopes = np.diff(As) / np.diff(ts)
        if np.any(np.diff(slopes) < -1e-12 * max(1.0, float(np.abs(slopes).max()))):
            raise SpaceSpecError("tabulated Young function is not convex")
        object.__setattr__(self, "ts", tuple(ts.tolist()))
        object.__setattr__(self, "As", tuple(As.tolist()))

    def __call__(self, t):
        ts = np.asarray(self.ts)
        As = np.asarray(self.As)
        t = np.asarray(t, dtype=np.float64)
        inside = np.interp(t, ts, As)
        last_slope = (As[-1] - As[-2]) / (ts[-1] - ts[-2])
        beyond = As[-1] + last_slope * (t - ts[-1])
        return np.where(t <= ts[-1], inside, beyond)


def young_from_name(name: str) -> YoungFunction:
    """Registry lookup: ``pow<p>`` or ``expm1``."""
    if name == "expm1":
        return ExpM1Young()
    if name.startswith("pow"):
        try:
            return PowerYoung(float(name[3:]))
        except ValueError:
            pass
    raise SpaceSpecError(f"unknown Young function {name!r} (expected powP or expm1)")


# ---------------------------------------------------------------------------
# space specifications
# ---------------------------------------------------------------------------

LEBESGUE = "lebesgue"
LORENTZ = "lorentz"
ORLICZ = "orlicz"
CONVEXIFIED = "convexified"
LINF = "linf"


@dataclass(frozen=True)
class SpaceSpec:
    kind: str
    p: float = None
    q: float = None
    young: YoungFunction = None
    base: "SpaceSpec" = None
    alpha: float = None

    def __str__(self):
        return format_space(self)


def lebesgue(p) -> SpaceSpec:
    if p == math.inf:
        return linf()
    if not p >= 1:
        raise SpaceSpecError(f"Lebesgue exponent must satisfy p >= 1, got {p}")
    return SpaceSpec(LEBESGUE, p=float(p))


def linf() -> SpaceSpec:
    return SpaceSpec(LINF)


def lorentz(p, q) -> SpaceSpec:
    if not p > 1:
        raise SpaceSpecError(
            f"Lorentz needs p > 1 (p=1 with q > 1 is not a Banach function space), got p={p}")
    if not (q >= 1 and math.isfinite(q)):
        raise SpaceSpecError(f"Lorentz needs finite q >= 1, got q={q}")
    return SpaceSpec(LORENTZ, p=float(p), q=float(q))


def orlicz(young: YoungFunction) -> SpaceSpec:
    if not isinstance(young, YoungFunction):
        raise SpaceSpecError(f"expected a YoungFunction, got {young!r}")
    return SpaceSpec(ORLICZ, young=young)


def convexified(base: SpaceSpec, alpha) -> SpaceSpec:
    if alpha == math.inf:
        return linf()
    if not alpha >= 1:
        raise SpaceSpecError(f"convexification exponent must be >= 1 or inf, got {alpha}")
    if alpha == 1:
        return base
    if base.kind == LEBESGUE:
        return lebesgue(base.p * alpha)
    if base.kind == LINF:
        return linf()
    return SpaceSpec(CONVEXIFIED, base=base, alpha=float(alpha))


def format_space(x: SpaceSpec) -> str:
    if x.kind == LEBESGUE:
        return f"Lp:{x.p:g}"
    if x.kind == LINF:
        return "Linf"
    if x.kind == LORENTZ:
        return f"Lorentz:{x.p:g},{x.q:g}"
    if x.kind == ORLICZ:
        return f"Orlicz:{x.young.name}"
    return f"Conv({format_space(x.base)})^{x.alpha:g}"


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def error(self, msg):
        raise SpecParseError(msg, self.text, self.pos)

    def expect(self, token):
        if not self.text.startswith(token, self.pos):
            self.error(f"expected {token!r}")
        self.pos += len(token)

    def number(self):
        start = self.pos
        if self.text.startswith("inf", self.pos):
            self.pos += 3
            return math.inf
        while self.pos < len(self.text) and (self.text[self.pos].isdigit() or self.text[self.pos] in ".eE+-"):
            # only allow +- after an exponent marker
            if self.text[self.pos] in "+-" and (self.pos == start or self.text[self.pos - 1] not in "eE"):
                break
            self.pos += 1
        if self.pos == start:
            self.error("expected a number")
        try:
            return float(self.text[start:self.pos])
        except ValueError:
            self.pos = start
            self.error(f"bad number {self.text[start:self.pos]!r}")

    def name(self):
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] in "._"):
            self.pos += 1
        if self.pos == start:
            self.error("expected a name")
        return self.text[start:self.pos]

    def space(self) -> SpaceSpec:
        if self.text.startswith("Linf", self.pos):
            self.pos += 4
            return linf()
        if self.text.startswith("Lp:", self.pos):
            self.pos += 3
            return lebesgue(self.number())
        if self.text.startswith("Lorentz:", self.pos):
            self.pos += 8
            p = self.number()
            self.expect(",")
            return lorentz(p, self.number())
        if self.text.startswith("Orlicz:", self.pos):
            self.pos += 7
            return orlicz(young_from_name(self.name()))
        if self.text.startswith("Conv(", self.pos):
            self.pos += 5
            base = self.space()
            self.expect(")^")
            return convexified(base, self.number())
        self.error("expected Lp:/Lorentz:/Orlicz:/Conv(/Linf")


def parse_space(text: str) -> SpaceSpec:
    """Parse the space grammar, e.g. ``Lp:2``, ``Lorentz:2,1``, ``Conv(Lp:2)^1.5``."""
    parser = _Parser(text.strip())
    try:
        out = parser.space()
    except SpaceSpecError as exc:
        if isinstance(exc, SpecParseError):
            raise
        raise SpecParseError(str(exc), parser.text, parser.pos) from exc
    if parser.pos != len(parser.text):
        parser.error("unexpected trailing input")
    return out


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------

def _orlicz_gauge(values, measures, young):
    def phi(lam):
        return float(np.dot(young(values / lam), measures))

    vmax = float(values.max())
    if vmax == 0.0:
        return 0.0
    hi = vmax
    for _ in range(200):
        if phi(hi) <= 1.0:
            break
        hi *= 2.0
    else:
        raise NormDivergenceError("Luxemburg bracket did not close from above")
    lo = hi / 2.0
    for _ in range(200):
        if phi(lo) > 1.0 or lo < 1e-300:
            break
        hi = lo
        lo /= 2.0
    if phi(lo) <= 1.0:
        return hi  # degenerate: gauge below representable range
    for _ in range(200):
        if hi - lo <= 1e-13 * hi:
            break
        mid = 0.5 * (lo + hi)
        if phi(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
    return hi


def norm(u: StepProfile, x: SpaceSpec) -> float:
    """Rearrangement-invariant norm of the profile in the given space."""
    if x.kind == LINF:
        return float(u.values.max())
    if x.kind == LEBESGUE:
        return float(np.dot(u.values ** x.p, u.measures) ** (1.0 / x.p))
    if x.kind == LORENTZ:
        star = u if u.rearranged else decreasing_rearrangement(u)
        cum = np.cumsum(star.measures)
        prev = np.concatenate(([0.0], cum[:-1]))
        qp = x.q / x.p
        chunks = (x.p / x.q) * (cum ** qp - prev ** qp)
        return float(np.dot(star.values ** x.q, chunks) ** (1.0 / x.q))
    if x.kind == ORLICZ:
        return _orlicz_gauge(u.values, u.measures, x.young)
    if x.kind == CONVEXIFIED:
        powered = StepProfile(u.values ** x.alpha, u.measures, rearranged=u.rearranged)
        return norm(powered, x.base) ** (1.0 / x.alpha)
    raise SpaceSpecError(f"unknown space kind {x.kind!r}")


def similar_norm(g: StepProfile, x: SpaceSpec, base_total: float) -> float:
    """Image-side norm of g under the similar-spaces scaling convention.

    η = |dom g| / base_total; the value is η⁻¹ · ‖E_η(g*)‖ computed on the
    reference domain (0, base_total).  For η = 1 this is the plain norm.
    """
    eta = g.total_measure / base_total
    star = g if g.rearranged else decreasing_rearrangement(g)
    return norm(dilate(star, eta, base_total), x) / eta


# ---------------------------------------------------------------------------
# dilation operator norm and the lower Boyd index
# ---------------------------------------------------------------------------

def _extremal_family(a: float, s: float):
    """Candidate maximizers of ‖E_s u‖/‖u‖ on (0, a): indicators sized to
    survive the dilation untruncated, plus geometric/power decay profiles."""
    out = []
    top = min(a, a * s)  # indicator (0,b) maps to (0, b/s) clipped at a
    for frac in (1.0, 0.5, 0.125, 1 / 64):
        b = top * frac
        if b > 0:
            out.append(StepProfile.from_pairs([(1.0, b), (0.0, a - b)] if b < a else [(1.0, a)],
                                              rearranged=True))
    pieces = 16
    widths = np.full(pieces, a / pieces)
    ramps = [np.power(2.0, -np.arange(pieces, dtype=float))]
    for beta in (0.25, 0.5, 1.0):
        ramps.append((1.0 + np.arange(pieces, dtype=float)) ** (-beta))
    for vals in ramps:
        out.append(StepProfile(vals, widths, rearranged=True))
    return out


def dilation_operator_norm(x: SpaceSpec, s: float, a: float = 1.0):
    """Bracket for ‖E_s‖ on X(0, a): (lower bound, upper bound or None).

    The lower bound maximizes ‖E_s u‖/‖u‖ over the extremal family; the upper
    bound is the closed form s^{-1/p} for Lebesgue/Lorentz (exact for the
    stretching regime s ≤ 1), 1 for L∞, and the α-th root of the base bound
    for convexifications.  Orlicz spaces get no closed-form upper bound.
    """
    if not (s > 0 and math.isfinite(s)):
        raise SpaceSpecError(f"dilation parameter must be positive, got {s}")
    lower = 0.0
    for u in _extremal_family(a, s):
        denom = norm(u, x)
        if denom > 0:
            lower = max(lower, norm(dilate(u, s, a), x) / denom)
    upper = None
    if x.kind == LINF:
        upper = 1.0
    elif x.kind == LEBESGUE:
        upper = s ** (-1.0 / x.p)
    elif x.kind == LORENTZ and s <= 1.0:
        upper = s ** (-1.0 / x.p)
    elif x.kind == CONVEXIFIED:
        base_upper = dilation_operator_norm(x.base, s, a)[1]
        if base_upper is not None:
            upper = base_upper ** (1.0 / x.alpha)
    return lower, upper


def boyd_lower_index(x: SpaceSpec, t_grid=None):
    """Least-squares slope of log‖E_{1/t}‖ against log t (lower Boyd index).

    Dilation norms are replaced by their extremal-family lower bounds, so the
    estimate is exact  for power-scaling spaces and a lower-bound fit
    otherwise.  Returns (estimate, max_residual).
    """
    if t_grid is None:
        t_grid = np.geomspace(2.0, 256.0, 8)
    t = np.asarray(t_grid, dtype=np.float64)
    if t.size < 4 or np.any(np.diff(t) <= 0) or t[0] <= 1.0:
        raise SpaceSpecError("t_grid must be increasing with at least 4 points above 1")
    logs_t = np.log(t)
    logs_n = np.array([math.log(dilation_operator_norm(x, 1.0 / ti, 1.0)[0]) for ti in t])
    slope, intercept = np.polyfit(logs_t, logs_n, 1)
    resid = float(np.abs(slope * logs_t + intercept - logs_n).max())
    return float(slope), resid


# ---------------------------------------------------------------------------
# inequality checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HolderReport:
    lhs: float
    rhs: float
    ratio: float
    holds: bool
    slack: float
    factor_norms: tuple


def _exact_fraction(p):
    if p is math.inf or p == math.inf:
        return None
    if isinstance(p, Fraction):
        return p
    if isinstance(p, int):
        return Fraction(p)
    if isinstance(p, float):
        return Fraction(p)  # exact binary value
    raise SpaceSpecError(f"exponent {p!r} is not a number")


def check_holder(factors, exponents, x: SpaceSpec, slack=None) -> HolderReport:
    """‖∏ f_i‖_X ≤ ∏ ‖f_i‖_{X^{p_i}} with Σ 1/p_i = 1 (checked exactly).

    Factors live on a common domain (equal totals) and multiply pointwise on
    the co-refined partition.  Exponent ∞ sends a factor to L∞.  ``slack``
    defaults to 1+1e-9, widened ×4 for Lorentz with q > p (quasi-norm regime).
    """
    if len(factors) != len(exponents) or not factors:
        raise SpaceSpecError("need one exponent per factor")
    fracs = [_exact_fraction(p) for p in exponents]
    total = sum((1 / f for f in fracs if f is not None), Fraction(0))
    if total != 1:
        raise SpaceSpecError(f"exponent reciprocals sum to {total}, expected exactly 1")
    for f in fracs:
        if f is not None and f < 1:
            raise SpaceSpecError("Hölder exponents must be >= 1")
    if slack is None:
        slack = 1 + 1e-9
        if x.kind == LORENTZ and x.q > x.p:
            slack *= 4.0
    measures, value_rows = corefine(factors)
    product = StepProfile(np.prod(np.vstack(value_rows), axis=0), measures)
    lhs = norm(product, x)
    factor_norms = []
    rhs = 1.0
    for u, p in zip(factors, exponents):
        space_i = linf() if p is math.inf or p == math.inf else convexified(x, float(p))
        ni = norm(u, space_i)
        factor_norms.append(ni)
        rhs *= ni
    ratio = lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else math.inf)
    return HolderReport(lhs, rhs, ratio, bool(lhs <= rhs * slack), float(slack),
                        tuple(factor_norms))


@dataclass(frozen=True)
class HlpReport:
    eta: float
    premise_holds: bool
    lhs: float
    rhs: float
    ratio: float
    holds: bool


def check_hlp(f: StepProfile, g: StepProfile, x: SpaceSpec, tol: float = 1e-9) -> HlpReport:
    """Hardy-Littlewood-Pólya transfer between domains of different measure.

    Premise: ∫₀^t E_η(g*) ≤ ∫₀^t f* for all t in (0, |dom f|), η = |dom g| /
    |dom f|, checked at every breakpoint (both sides are piecewise linear).
    Conclusion: ‖g‖ ≤ η⁻¹‖f‖ with the image side computed by
    :func:`similar_norm`.  When the premise fails the conclusion is not
    asserted (``holds`` stays True vacuously only in the report consumer).
    """
    base_total = f.total_measure
    eta = g.total_measure / base_total
    fstar = f if f.rearranged else decreasing_rearrangement(f)
    gstar = g if g.rearranged else decreasing_rearrangement(g)
    eg = dilate(gstar, eta, base_total)
    cuts = np.unique(np.concatenate((np.cumsum(eg.measures), np.cumsum(fstar.measures))))
    cuts = np.clip(cuts, 0.0, base_total)
    premise = True
    for t in cuts:
        left = partial_integral(eg, float(t))
        right = partial_integral(fstar, float(t))
        if left > right + tol * max(1.0, abs(right)):
            premise = False
            break
    lhs = similar_norm(gstar, x, base_total)
    rhs = norm(fstar, x) / eta
    ratio = lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else math.inf)
    holds = bool(lhs <= rhs * (1 + tol))
    return HlpReport(float(eta), premise, lhs, rhs, ratio, holds)


@dataclass(frozen=True)
class YoungReport:
    holds_on_grid: bool
    worst_ratio: float
    warnings: tuple
    lhs: tuple
    rhs: tuple


def _adaptive_simpson(fun, a, b, rel_tol=1e-10, max_depth=30):
    def simpson(x0, x2, f0, f1, f2):
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    def recurse(x0, x2, f0, f1, f2, whole, depth):
        xm = 0.5 * (x0 + x2)
        xl = 0.5 * (x0 + xm)
        xr = 0.5 * (xm + x2)
        fl, fr = fun(xl), fun(xr)
        left = simpson(x0, xm, f0, fl, f1)
        right = simpson(xm, x2, f1, fr, f2)
        if depth >= max_depth or abs(left + right - whole) <= 15.0 * rel_tol * (abs(left) + abs(right) + 1e-300):
            return left + right + (left + right - whole) / 15.0
        return (recurse(x0, xm, f0, fl, f1, left, depth + 1)
                + recurse(xm, x2, f1, fr, f2, right, depth + 1))

    mid = 0.5 * (a + b)
    fa, fm, fb = fun(a), fun(mid), fun(b)
    return recurse(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), 0)


def _young_lhs(young: YoungFunction, t: float, warnings: list) -> float:
    """∫₀^t A(s)/s² ds: power-law head estimate on [0, δ] + Simpson on [δ, t]."""
    delta = 1e-8 * t
    a_d = float(young(delta))
    a_h = float(young(0.5 * delta))
    if a_d <= 0.0:
        head = 0.0
    else:
        if a_h <= 0.0:
            rho = math.inf
        else:
            rho = math.log(a_d / a_h) / math.log(2.0)
        if rho <= 1.0 + 1e-6:
            warnings.append(
                f"A(s)/s^2 ~ s^{rho - 2:.3f} near 0 is not integrable; left side diverges")
            return math.inf
        head = a_d / (delta * (rho - 1.0))
    body = _adaptive_simpson(lambda s: float(young(s)) / (s * s), delta, t)
    return head + body


def check_young_condition(young: YoungFunction, c: float, t_grid) -> YoungReport:
    """Grid check of ∫₀^t A(s)/s² ds ≤ A(ct)/t."""
    t = np.asarray(t_grid, dtype=np.float64)
    if t.size == 0 or np.any(t <= 0):
        raise SpaceSpecError("t_grid must contain positive points")
    if not (c > 0 and math.isfinite(c)):
        raise SpaceSpecError(f"scale c must be positive, got {c}")
    warnings: list = []
    lhs = []
    rhs = []
    worst = 0.0
    holds = True
    for ti in t:
        left = _young_lhs(young, float(ti), warnings)
        right = float(young(c * ti)) / float(ti)
        lhs.append(left)
        rhs.append(right)
        ratio = left / right if right > 0 else (0.0 if left == 0 else math.inf)
        worst = max(worst, ratio)
        if not left <= right * (1 + 1e-6):
            holds = False
    return YoungReport(holds, worst, tuple(dict.fromkeys(warnings)), tuple(lhs), tuple(rhs))
