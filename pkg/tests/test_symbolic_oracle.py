"""Independent symbolic oracles for the expansion coefficients.

Everything here is derived with sympy from first principles (repeated
differentiation, implicit differentiation of f(g(y)) = y) and compared against
the package's formal expansions in exact arithmetic.  The frozen signature
lists in test_symbolic.py were generated from these oracles.
"""

import sympy as sp
import pytest

from bilipjet import symbolic as sy

f = sp.Function("f")
g = sp.Function("g")

# classical closed forms for the derivatives of a 1-D inverse function, in
# terms of a, b, c, d = f', f'', f''', f'''' evaluated at the inverse point
A, B, C, D = sp.symbols("a b c d", positive=True)
CLASSICAL = {
    1: 1 / A,
    2: -B / A**3,
    3: (3 * B**2 - A * C) / A**5,
    4: -(15 * B**3 - 10 * A * B * C + A**2 * D) / A**7,
}


def _deriv_order(atom):
    return sum(cnt for _, cnt in atom.variable_count)


def _replace_derivatives(expr, y, fsyms, gsyms):
    """Swap Derivative atoms for plain symbols so sp.solve can target them."""
    rep = {}
    for atom in expr.atoms(sp.Derivative):
        k = _deriv_order(atom)
        if atom.expr == g(y):
            rep[atom] = gsyms[k - 1]
        elif atom.expr == f(g(y)):
            rep[atom] = fsyms[k - 1]
        else:
            raise AssertionError(f"unexpected derivative atom {atom}")
    return expr.xreplace(rep)


@pytest.fixture(scope="module")
def implicit_oracle():
    """Solve f(g(y)) = y for g', g'', g''', g'''' by implicit differentiation."""
    y = sp.Symbol("y")
    fsyms = [A, B, C, D]
    gsyms = list(sp.symbols("g1 g2 g3 g4"))
    sols = {}
    for m in range(1, 5):
        eq = sp.diff(f(g(y)), y, m) - sp.diff(y, y, m)
        eq = _replace_derivatives(sp.expand(eq.doit()), y, fsyms, gsyms)
        roots = sp.solve(eq.subs(sols), gsyms[m - 1])
        assert len(roots) == 1
        sols[gsyms[m - 1]] = sp.cancel(roots[0].subs(sols))
    return {m: sols[gsyms[m - 1]] for m in range(1, 5)}


def test_implicit_oracle_matches_classical(implicit_oracle):
    for m, want in CLASSICAL.items():
        assert sp.simplify(implicit_oracle[m] - want) == 0, m


def test_inverse_expansion_reconstructs_oracle(implicit_oracle):
    # evaluate the package's flat expansion symbolically in one dimension,
    # feeding lower-order results back in recursively
    fsyms = [A, B, C, D]
    gm = {1: 1 / A}
    for m in range(2, 5):
        total = sp.Integer(0)
        for t in sy.canonicalize(sy.expand_inverse(m)).terms:
            prod = sp.Integer(t.coefficient) * gm[t.leading.order]
            prod *= fsyms[t.outer.order - 1]
            for fac in t.inner_factors:
                prod *= gm[fac.order]
            total += prod
        gm[m] = sp.cancel(total)
        assert sp.simplify(gm[m] - implicit_oracle[m]) == 0, m


def _leaf_value(factor):
    """1-D symbolic value of a (possibly composite) factor."""
    if isinstance(factor, sy.FactorSymbol):
        if factor.function_tag == sy.TAG_FINV:
            assert factor.order == 1
            return 1 / A
        return [A, B, C, D][factor.order - 1]
    val = _leaf_value(factor.outer)
    for x in factor.inner:
        val *= _leaf_value(x)
    if factor.leading is not None:
        val *= _leaf_value(factor.leading)
    return val


def test_substituted_expansion_reconstructs_oracle(implicit_oracle):
    # the substituted form contains only Df⁻¹ and f-derivative leaves, so it
    # evaluates directly without recursion
    for m in range(2, 5):
        total = sp.Integer(0)
        for t in sy.canonicalize(sy.expand_inverse(m, substituted=True)).terms:
            prod = sp.Integer(t.coefficient) * _leaf_value(t.leading)
            prod *= _leaf_value(t.outer)
            for fac in t.inner_factors:
                prod *= _leaf_value(fac)
            total += prod
        assert sp.simplify(sp.cancel(total) - implicit_oracle[m]) == 0, m


def _sympy_composition_multisets(m):
    x = sp.Symbol("x")
    expr = sp.expand(sp.diff(f(g(x)), x, m).doit())
    out = {}
    for term in sp.Add.make_args(expr):
        coeff, factors = term.as_coeff_mul()
        outer, inner = None, []
        for fac in factors:
            base, power = fac.as_base_exp()
            assert isinstance(base, sp.Derivative), fac
            k = _deriv_order(base)
            if base.expr == g(x):
                inner.extend([k] * int(power))
            else:
                assert int(power) == 1
                outer = k
        out[(outer, tuple(sorted(inner)))] = out.get(
            (outer, tuple(sorted(inner))), 0) + int(coeff)
    return out


def test_composition_coefficients_match_sympy():
    for m in range(1, 6):
        got = {}
        for t in sy.canonicalize(sy.expand_composition(m)).terms:
            key = (t.outer.order, tuple(sorted(fc.order for fc in t.inner_factors)))
            got[key] = got.get(key, 0) + t.coefficient
        assert got == _sympy_composition_multisets(m), m


def _sympy_product_coefficients(m):
    x = sp.Symbol("x")
    expr = sp.expand(sp.diff(f(x) * g(x), x, m).doit())
    out = {}
    for term in sp.Add.make_args(expr):
        coeff, factors = term.as_coeff_mul()
        jf = jg = 0
        for fac in factors:
            base, power = fac.as_base_exp()
            assert int(power) == 1
            if isinstance(base, sp.Derivative):
                k = _deriv_order(base)
                if base.expr == f(x):
                    jf = k
                else:
                    jg = k
            # undifferentiated f(x) or g(x) contributes order 0
        out[(jf, jg)] = out.get((jf, jg), 0) + int(coeff)
    return out


def test_product_coefficients_match_sympy():
    for m in range(1, 7):
        got = {(t.outer.order, t.inner_factors[0].order): t.coefficient
               for t in sy.canonicalize(sy.expand_product(m)).terms}
        assert got == _sympy_product_coefficients(m), m
