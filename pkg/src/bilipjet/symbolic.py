"""Exact symbolic expansions of high-order derivatives.

Implements the ordered tensor-term grammar for three expansion kinds:

* ``composition``: D^m(f∘g) as a sum of terms
  c · (D^{k0}f ∘ g) · (D^{k1}g ⊗ ... ⊗ D^{k_{k0}}g) with Σ k_i = m,
* ``inverse``: D^m(f⁻¹) as a sum of terms
  c · D^{k-1}f⁻¹ · (D^{k0}f ∘ f⁻¹) · (D^{k1}f⁻¹ ⊗ ... ⊗ D^{k_{k0}}f⁻¹)
  with k_{-1} ≥ 1, k0 ≥ 2 and k_{-1} + Σ k_i = m + 1,
* ``product``: D^m(fg) as the Leibniz sum binom(m,j) · D^j f ⊗ D^{m-j} g.

Coefficients are exact integers obtained by repeated formal differentiation of
the order-1 (composition) and order-2 (inverse) seeds; nothing is ever
evaluated in floating point here.  Tensor factor order is significant and no
symmetrization is performed: a new differentiation direction always enters as
the *first* argument, so differentiating the outer factor prepends an order-1
inner factor.  Terms whose (leading, outer, inner) signatures coincide are
merged, which identifies argument assignments differing by a permutation; the
numeric layer accounts for this by comparing symmetrized tensors.

The inverse expansion has two modes.  The default (unsubstituted) mode keeps
factors D^k f⁻¹ of every order and matches the flat grammar above term for
term.  The substituted mode recursively replaces each D^k f⁻¹ factor (k ≥ 2)
by its own expansion until only first derivatives of f⁻¹ and derivatives of f
at the composed point remain; in dimension ≥ 2 this forces composite factors
(:class:`SubTerm`) because a substituted factor occupies a slot as a whole
multilinear map.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import InvalidOrderError, InvalidTermError, SerializationError

DEFAULT_MAX_ORDER = 8

# function tags
TAG_F = "F"
TAG_G = "G"
TAG_FINV = "FINV"
_TAGS = (TAG_F, TAG_G, TAG_FINV)

# evaluation points
AT_IDENTITY = "identity"
AT_COMPOSED = "composed"
_ATS = (AT_IDENTITY, AT_COMPOSED)

# expansion kinds
COMPOSITION = "composition"
INVERSE = "inverse"
PRODUCT = "product"
_KINDS = (COMPOSITION, INVERSE, PRODUCT)

# inverse modes
UNSUBSTITUTED = "unsubstituted"
SUBSTITUTED = "substituted"


@dataclass(frozen=True)
class FactorSymbol:
    """One derivative factor: D^order of the tagged function.

    ``evaluation_point`` is ``"composed"`` when the factor is evaluated at the
    inner map's image (f at g(y), or f at f⁻¹(y)); order 0 (the undifferentiated
    function) is legal only inside product expansions.
    """

    function_tag: str
    order: int
    evaluation_point: str = AT_IDENTITY

    def __post_init__(self):
        if self.function_tag not in _TAGS:
            raise InvalidTermError(f"unknown function tag {self.function_tag!r}")
        if self.evaluation_point not in _ATS:
            raise InvalidTermError(f"unknown evaluation point {self.evaluation_point!r}")
        if not isinstance(self.order, int) or self.order < 0:
            raise InvalidTermError(f"factor order must be a nonnegative int, got {self.order!r}")
        if self.evaluation_point == AT_COMPOSED and self.function_tag != TAG_F:
            raise InvalidTermError("only F factors may sit at the composed point")


@dataclass(frozen=True)
class SubTerm:
    """Composite factor produced by substitution: outer·(⊗ inner), optionally
    post-composed with a leading factor whose last slot consumes the output.

    Carries no coefficient; signs and multiplicities are hoisted into the
    enclosing :class:`TensorTerm`.
    """

    outer: FactorSymbol
    inner: tuple
    leading: object = None  # FactorSymbol | SubTerm | None

    def __post_init__(self):
        if len(self.inner) != self.outer.order:
            raise InvalidTermError("composite factor needs one inner factor per outer slot")


def factor_arity(f) -> int:
    """Number of direct argument slots a factor consumes."""
    if isinstance(f, FactorSymbol):
        return f.order
    lead = 0 if f.leading is None else factor_arity(f.leading) - 1
    return lead + sum(factor_arity(x) for x in f.inner)


@dataclass(frozen=True)
class TensorTerm:
    """One expansion term: coefficient · [leading ·] outer · (⊗ inner_factors).

    For composition/inverse kinds the outer factor is applied to the inner
    tensor product and the optional leading factor consumes the result in its
    last slot.  For the product kind the semantics are coefficient · outer ⊗
    inner_factors[0].
    """

    coefficient: int
    outer: FactorSymbol
    inner_factors: tuple
    leading: object = None  # FactorSymbol | SubTerm | None

    def __post_init__(self):
        if not isinstance(self.coefficient, int):
            raise InvalidTermError("coefficients are exact integers")

    @property
    def signature(self):
        return (self.leading, self.outer, self.inner_factors)

    def order_tuple(self):
        """Inner factor arities, in display order."""
        return tuple(factor_arity(x) for x in self.inner_factors)


@dataclass(frozen=True)
class DerivativeExpansion:
    """A full expansion of one derivative order, as an ordered term sum."""

    kind: str
    order: int
    terms: tuple
    mode: str = None  # inverse kind only

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidTermError(f"unknown expansion kind {self.kind!r}")
        for t in self.terms:
            _validate_term(self.kind, self.order, t)

    def total_arity(self) -> int:
        return self.order


def _validate_term(kind, m, t: TensorTerm):
    if kind == COMPOSITION:
        if t.leading is not None:
            raise InvalidTermError("composition terms have no leading factor")
        if t.outer.function_tag != TAG_F or t.outer.evaluation_point != AT_COMPOSED:
            raise InvalidTermError("composition outer factor must be F at the composed point")
        if t.outer.order < 1 or len(t.inner_factors) != t.outer.order:
            raise InvalidTermError("composition term needs one inner factor per outer slot")
        for x in t.inner_factors:
            if not isinstance(x, FactorSymbol) or x.function_tag != TAG_G or x.order < 1:
                raise InvalidTermError("composition inner factors are positive-order G symbols")
        if sum(x.order for x in t.inner_factors) != m:
            raise InvalidTermError(f"composition inner orders must sum to {m}")
    elif kind == INVERSE:
        if t.leading is None:
            raise InvalidTermError("inverse terms carry a leading f⁻¹ factor")
        if t.outer.function_tag != TAG_F or t.outer.evaluation_point != AT_COMPOSED:
            raise InvalidTermError("inverse outer factor must be F at the composed point")
        if t.outer.order < 2:
            raise InvalidTermError("inverse outer order is at least 2")
        if len(t.inner_factors) != t.outer.order:
            raise InvalidTermError("inverse term needs one inner factor per outer slot")
        for x in (t.leading, *t.inner_factors):
            if isinstance(x, FactorSymbol):
                if x.function_tag != TAG_FINV or x.order < 1:
                    raise InvalidTermError("inverse leading/inner factors are positive-order FINV symbols")
            elif not isinstance(x, SubTerm):
                raise InvalidTermError(f"unexpected factor {x!r}")
        ksum = factor_arity(t.leading) + sum(t.order_tuple())
        if ksum != m + 1:
            raise InvalidTermError(f"inverse term k-sum {ksum} != {m + 1}")
    else:  # PRODUCT
        if t.leading is not None:
            raise InvalidTermError("product terms have no leading factor")
        if t.outer.function_tag != TAG_F or t.outer.evaluation_point != AT_IDENTITY:
            raise InvalidTermError("product outer factor is F at the identity point")
        if len(t.inner_factors) != 1:
            raise InvalidTermError("product terms have exactly one G factor")
        g = t.inner_factors[0]
        if not isinstance(g, FactorSymbol) or g.function_tag != TAG_G:
            raise InvalidTermError("product inner factor is a G symbol")
        if t.outer.order + g.order != m:
            raise InvalidTermError(f"product orders must sum to {m}")


# ---------------------------------------------------------------------------
# construction by formal differentiation
# ---------------------------------------------------------------------------

def _bump(sym: FactorSymbol) -> FactorSymbol:
    return replace(sym, order=sym.order + 1)


def _differentiate_term(kind, t: TensorTerm):
    """Formal d/dy of one flat term; the new direction is the first argument."""
    out = []
    if t.leading is not None:
        if not isinstance(t.leading, FactorSymbol):
            raise InvalidTermError("cannot differentiate composite (substituted) factors")
        out.append(replace(t, leading=_bump(t.leading)))
    if kind == PRODUCT:
        out.append(replace(t, outer=_bump(t.outer)))
        out.append(replace(t, inner_factors=(_bump(t.inner_factors[0]),)))
        return out
    # differentiating the outer factor prepends a first-order inner factor
    inner_tag = TAG_G if kind == COMPOSITION else TAG_FINV
    fresh = FactorSymbol(inner_tag, 1, AT_IDENTITY)
    out.append(replace(t, outer=_bump(t.outer), inner_factors=(fresh,) + t.inner_factors))
    for i, x in enumerate(t.inner_factors):
        if not isinstance(x, FactorSymbol):
            raise InvalidTermError("cannot differentiate composite (substituted) factors")
        bumped = t.inner_factors[:i] + (_bump(x),) + t.inner_factors[i + 1:]
        out.append(replace(t, inner_factors=bumped))
    return out


def _check_order(m, lo, max_order):
    if not isinstance(m, int) or not lo <= m <= max_order:
        raise InvalidOrderError(f"order must be an int in [{lo}, {max_order}], got {m!r}")


def differentiate_expansion(e: DerivativeExpansion, max_order: int = DEFAULT_MAX_ORDER) -> DerivativeExpansion:
    """One formal differentiation step, canonicalized.

    Only flat expansions are supported; substituted inverse expansions contain
    composite factors and are terminal objects.
    """
    if e.order + 1 > max_order:
        raise InvalidOrderError(f"differentiating past max_order={max_order}")
    if e.mode == SUBSTITUTED:
        raise InvalidTermError("substituted expansions cannot be differentiated")
    children = []
    for t in e.terms:
        children.extend(_differentiate_term(e.kind, t))
    return canonicalize(DerivativeExpansion(e.kind, e.order + 1, tuple(children), mode=e.mode))


def expand_composition(m: int, max_order: int = DEFAULT_MAX_ORDER) -> DerivativeExpansion:
    """Exact expansion of D^m(f∘g), built from the m=1 seed."""
    _check_order(m, 1, max_order)
    seed = TensorTerm(1, FactorSymbol(TAG_F, 1, AT_COMPOSED), (FactorSymbol(TAG_G, 1),))
    e = DerivativeExpansion(COMPOSITION, 1, (seed,))
    for _ in range(m - 1):
        e = differentiate_expansion(e, max_order)
    return canonicalize(e)


def _inverse_seed() -> DerivativeExpansion:
    finv1 = FactorSymbol(TAG_FINV, 1)
    t = TensorTerm(-1, FactorSymbol(TAG_F, 2, AT_COMPOSED), (finv1, finv1), leading=finv1)
    return DerivativeExpansion(INVERSE, 2, (t,), mode=UNSUBSTITUTED)


def expand_inverse(m: int, substituted: bool = False, max_order: int = DEFAULT_MAX_ORDER) -> DerivativeExpansion:
    """Exact expansion of D^m(f⁻¹), built from the m=2 seed.

    With ``substituted=True`` every D^k f⁻¹ factor of order k ≥ 2 is replaced
    recursively by its own substituted expansion, so the leaves are only
    first-order f⁻¹ factors and derivatives of f at the composed point.
    """
    _check_order(m, 2, max_order)
    e = _inverse_seed()
    for _ in range(m - 2):
        e = differentiate_expansion(e, max_order)
    e = canonicalize(e)
    if not substituted:
        return e
    memo = {}
    return _substitute_inverse(e, memo, max_order)


def _substitute_inverse(e: DerivativeExpansion, memo, max_order) -> DerivativeExpansion:
    if e.order in memo:
        return memo[e.order]

    def factor_options(sym):
        if isinstance(sym, FactorSymbol) and sym.function_tag == TAG_FINV and sym.order >= 2:
            sub = _substitute_inverse(
                canonicalize(expand_inverse(sym.order, substituted=False, max_order=max_order)),
                memo, max_order)
            return [(t.coefficient, SubTerm(t.outer, t.inner_factors, t.leading)) for t in sub.terms]
        return [(1, sym)]

    new_terms = []
    for t in e.terms:
        slots = [factor_options(t.leading)] + [factor_options(x) for x in t.inner_factors]
        for choice in itertools.product(*slots):
            coeff = t.coefficient
            for c, _ in choice:
                coeff *= c
            new_terms.append(TensorTerm(coeff, t.outer,
                                        tuple(f for _, f in choice[1:]),
                                        leading=choice[0][1]))
    out = canonicalize(DerivativeExpansion(INVERSE, e.order, tuple(new_terms), mode=SUBSTITUTED))
    memo[e.order] = out
    return out


def expand_product(m: int, max_order: int = DEFAULT_MAX_ORDER) -> DerivativeExpansion:
    """Leibniz expansion of D^m(fg): m+1 terms with binomial coefficients."""
    _check_order(m, 1, max_order)
    terms = tuple(
        TensorTerm(math.comb(m, j), FactorSymbol(TAG_F, j), (FactorSymbol(TAG_G, m - j),))
        for j in range(m, -1, -1))
    return DerivativeExpansion(PRODUCT, m, terms)


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------

def _factor_key(f):
    if isinstance(f, FactorSymbol):
        return (0, -f.order, _TAGS.index(f.function_tag), _ATS.index(f.evaluation_point))
    lead = () if f.leading is None else _factor_key(f.leading)
    return (1, -factor_arity(f), _factor_key(f.outer), tuple(_factor_key(x) for x in f.inner), lead)


def _term_key(t: TensorTerm):
    lead = 0 if t.leading is None else -factor_arity(t.leading)
    lead_struct = () if t.leading is None else _factor_key(t.leading)
    return (-t.outer.order,
            tuple(-k for k in t.order_tuple()),
            lead,
            tuple(_factor_key(x) for x in t.inner_factors),
            lead_struct)


def canonicalize(e: DerivativeExpansion) -> DerivativeExpansion:
    """Merge terms with identical (leading, outer, inner) signatures, drop
    zero coefficients, and sort by (outer order desc, inner order tuple)."""
    merged = {}
    for t in e.terms:
        merged[t.signature] = merged.get(t.signature, 0) + t.coefficient
    terms = [TensorTerm(c, sig[1], sig[2], leading=sig[0])
             for sig, c in merged.items() if c != 0]
    terms.sort(key=_term_key)
    return DerivativeExpansion(e.kind, e.order, tuple(terms), mode=e.mode)


# ---------------------------------------------------------------------------
# Hölder exponent bookkeeping
# ---------------------------------------------------------------------------

def holder_exponents(t: TensorTerm, m: int):
    """Exponents assigning factor D^k· to the convexification X^{(m-1)/(k-1)}.

    Order-1 factors get exponent ∞.  The reciprocals sum to exactly 1, which is
    verified in exact rational arithmetic before returning.  Factor order in
    the result is (leading, outer, inner...).  Only flat inverse-expansion
    terms of order m ≥ 3 are accepted.
    """
    if m < 3:
        raise InvalidOrderError(f"Hölder split needs order ≥ 3, got {m}")
    if t.leading is None or not isinstance(t.leading, FactorSymbol):
        raise InvalidTermError("Hölder split applies to flat inverse-expansion terms")
    _validate_term(INVERSE, m, t)
    orders = [t.leading.order, t.outer.order] + [x.order for x in t.inner_factors]
    exps = [math.inf if k == 1 else Fraction(m - 1, k - 1) for k in orders]
    total = sum((Fraction(1, 1) / p for p in exps if p is not math.inf), Fraction(0))
    if total != 1:
        raise InvalidTermError(f"exponent reciprocals sum to {total}, expected 1")
    return exps


# ---------------------------------------------------------------------------
# serialization and display
# ---------------------------------------------------------------------------

def _factor_to_json(f):
    if isinstance(f, FactorSymbol):
        return {"fn": f.function_tag, "order": f.order, "at": f.evaluation_point}
    d = {"outer": _factor_to_json(f.outer), "inner": [_factor_to_json(x) for x in f.inner]}
    if f.leading is not None:
        d["leading"] = _factor_to_json(f.leading)
    return d


def _factor_from_json(d):
    if not isinstance(d, dict):
        raise SerializationError(f"factor payload must be an object, got {d!r}")
    if "fn" in d:
        try:
            return FactorSymbol(d["fn"], d["order"], d.get("at", AT_IDENTITY))
        except (KeyError, InvalidTermError) as exc:
            raise SerializationError(str(exc)) from exc
    try:
        leading = _factor_from_json(d["leading"]) if "leading" in d else None
        return SubTerm(_factor_from_json(d["outer"]),
                       tuple(_factor_from_json(x) for x in d["inner"]),
                       leading=leading)
    except (KeyError, InvalidTermError) as exc:
        raise SerializationError(f"bad composite factor: {exc}") from exc


def to_json(e: DerivativeExpansion) -> dict:
    """Stable JSON shape: {kind, order, terms: [{coeff, leading?, outer, inner}]}."""
    terms = []
    for t in e.terms:
        d = {"coeff": t.coefficient}
        if t.leading is not None:
            d["leading"] = _factor_to_json(t.leading)
        d["outer"] = _factor_to_json(t.outer)
        d["inner"] = [_factor_to_json(x) for x in t.inner_factors]
        terms.append(d)
    out = {"kind": e.kind, "order": e.order, "terms": terms}
    if e.mode is not None:
        out["mode"] = e.mode
    return out


def from_json(payload) -> DerivativeExpansion:
    if isinstance(payload, str):
        try:
            payload = json.loads(payload)
        except json.JSONDecodeError as exc:
            raise SerializationError(f"invalid JSON: {exc}") from exc
    try:
        terms = tuple(
            TensorTerm(int(t["coeff"]),
                       _factor_from_json(t["outer"]),
                       tuple(_factor_from_json(x) for x in t["inner"]),
                       leading=_factor_from_json(t["leading"]) if "leading" in t else None)
            for t in payload["terms"])
        return DerivativeExpansion(payload["kind"], int(payload["order"]), terms,
                                   mode=payload.get("mode"))
    except (KeyError, TypeError, InvalidTermError) as exc:
        raise SerializationError(f"bad expansion payload: {exc}") from exc


def _factor_str(f):
    if isinstance(f, FactorSymbol):
        name = {TAG_F: "f", TAG_G: "g", TAG_FINV: "f^-1"}[f.function_tag]
        core = name if f.order == 0 else (f"D{name}" if f.order == 1 else f"D^{f.order}{name}")
        if f.evaluation_point == AT_COMPOSED:
            return f"({core}∘·)"
        return core
    inner = "⊗".join(_factor_str(x) for x in f.inner)
    body = f"{_factor_str(f.outer)}·({inner})"
    if f.leading is not None:
        body = f"{_factor_str(f.leading)}·[{body}]"
    return f"[{body}]"


def format_term(t: TensorTerm, kind: str) -> str:
    coeff = "" if t.coefficient == 1 else ("-" if t.coefficient == -1 else f"{t.coefficient}·")
    if kind == PRODUCT:
        return f"{coeff}{_factor_str(t.outer)}⊗{_factor_str(t.inner_factors[0])}"
    inner = "⊗".join(_factor_str(x) for x in t.inner_factors)
    body = f"{_factor_str(t.outer)}·({inner})"
    if t.leading is not None:
        body = f"{_factor_str(t.leading)}·[{body}]"
    return f"{coeff}{body}"


def format_expansion(e: DerivativeExpansion) -> str:
    lhs = {COMPOSITION: f"D^{e.order}(f∘g)", INVERSE: f"D^{e.order}(f^-1)",
           PRODUCT: f"D^{e.order}(f·g)"}[e.kind]
    if not e.terms:
        return f"{lhs} = 0"
    parts = [format_term(t, e.kind) for t in e.terms]
    joined = " + ".join(parts).replace("+ -", "- ")
    return f"{lhs} = {joined}"
