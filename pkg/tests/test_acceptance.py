"""Acceptance gate: the package's top-level correctness criteria.

One test per criterion, each at its stated tolerance, each ending in a single
``[acceptance] criterion-N ...: PASS/FAIL`` line (pytest -v adds one line per
test as well).  Tolerances here are contractual — do not loosen them to make
a regression pass; investigate the regression.
"""

import itertools
import math

import numpy as np

from bilipjet import (ExpM1Young, PowerYoung, StepProfile, VerifyConfig,
                      boyd_lower_index, check_hlp, check_holder,
                      check_young_condition, convexified,
                      decreasing_rearrangement, dilate, gallery, lebesgue,
                      linf, lorentz, norm, orlicz, run_suite, scalar_gallery)
from bilipjet import multilinear as ml
from bilipjet import symbolic as sy
from bilipjet import verify as vf
from bilipjet.spaces import CONVEXIFIED, SpaceSpec

MAPS = gallery()
FIELDS = scalar_gallery()

STIRLING_ROWS = {
    1: [1], 2: [1, 1], 3: [1, 3, 1], 4: [1, 7, 6, 1],
    5: [1, 15, 25, 10, 1], 6: [1, 31, 90, 65, 15, 1],
}


def _conclude(criterion, ok, detail=""):
    line = f"[acceptance] {criterion}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


# ---------------------------------------------------------------------------
# criterion 1: symbolic coefficients, exact
# ---------------------------------------------------------------------------

def _oracle_composition_multisets(m):
    """Brute-force 1-D formal differentiation, independent data structure:
    term = (outer order, sorted inner orders); chain + Leibniz rules only."""
    terms = {(1, (1,)): 1}
    for _ in range(m - 1):
        new = {}
        for (ko, inner), c in terms.items():
            key = (ko + 1, tuple(sorted(inner + (1,))))
            new[key] = new.get(key, 0) + c
            for i, k in enumerate(inner):
                bumped = list(inner)
                bumped[i] = k + 1
                key = (ko, tuple(sorted(bumped)))
                new[key] = new.get(key, 0) + c
        terms = new
    return terms


def test_criterion_1_symbolic_coefficients_exact():
    failures = []
    for m in range(1, 7):
        oracle = _oracle_composition_multisets(m)
        got = {}
        for t in sy.canonicalize(sy.expand_composition(m)).terms:
            key = (t.outer.order, tuple(sorted(f.order for f in t.inner_factors)))
            got[key] = got.get(key, 0) + t.coefficient
        if got != oracle:
            failures.append(f"m={m} coefficients differ from oracle")
        row = [sum(c for (ko, _), c in oracle.items() if ko == k)
               for k in range(1, m + 1)]
        if row != STIRLING_ROWS[m]:
            failures.append(f"m={m} oracle Stirling row {row}")
        pkg_row = [sum(t.coefficient
                       for t in sy.canonicalize(sy.expand_composition(m)).terms
                       if t.outer.order == k) for k in range(1, m + 1)]
        if pkg_row != STIRLING_ROWS[m]:
            failures.append(f"m={m} package Stirling row {pkg_row}")
    # the classical low-order displays, ordered terms, exact coefficients
    sig2 = [(t.coefficient, t.outer.order, tuple(f.order for f in t.inner_factors))
            for t in sy.canonicalize(sy.expand_composition(2)).terms]
    if sorted(sig2) != [(1, 1, (2,)), (1, 2, (1, 1))]:
        failures.append(f"order-2 display {sig2}")
    sig3 = [(t.coefficient, t.outer.order, tuple(f.order for f in t.inner_factors))
            for t in sy.canonicalize(sy.expand_composition(3)).terms]
    if ((2, 2, (1, 2)) not in sig3 or (1, 2, (2, 1)) not in sig3
            or (1, 3, (1, 1, 1)) not in sig3 or (1, 1, (3,)) not in sig3
            or len(sig3) != 4):
        failures.append(f"order-3 display {sig3}")
    _conclude("criterion-1 symbolic coefficients (exact, m<=6)",
              not failures, "; ".join(failures) or "coefficients identical")


# ---------------------------------------------------------------------------
# criterion 2: inverse-derivative identity on the full gallery
# ---------------------------------------------------------------------------

def test_criterion_2_inverse_identity_full_gallery():
    failures = []
    worst_1d = worst_2d = 0.0
    for tm in MAPS.values():
        for m in (2, 3, 4):
            rep = vf.verify_inverse_identity(tm, m)
            limit = 1e-6 if tm.dim == 1 else 1e-3
            if tm.dim == 1:
                worst_1d = max(worst_1d, rep.lhs)
            else:
                worst_2d = max(worst_2d, rep.lhs)
            if rep.verdict != "PASS" or rep.lhs > limit:
                failures.append(f"{rep.check_id} err={rep.lhs:.2e}")
    # substituted mode agrees as well
    for name in ("sine_1d", "shear_2d"):
        rep = vf.verify_inverse_identity(MAPS[name], 3, substituted=True)
        if rep.verdict != "PASS":
            failures.append(rep.check_id)
    _conclude("criterion-2 inverse identity (1e-6 closed-form / 1e-3 fd)",
              not failures,
              "; ".join(failures) or
              f"worst rel err 1-D {worst_1d:.2e}, 2-D {worst_2d:.2e}")


# ---------------------------------------------------------------------------
# criterion 3: composition and product identities
# ---------------------------------------------------------------------------

def test_criterion_3_composition_and_product_identities():
    failures = []
    comp_cases = [("sine_1d", "affine_1d", 3), ("sine_1d", "affine_1d", 4),
                  ("shear_2d", "affine_2d", 2), ("shear_2d", "affine_2d", 3),
                  ("shear_2d", "affine_2d", 4),
                  ("shear_2d", "shear_2d_soft", 3)]
    for outer, inner, m in comp_cases:
        rep = vf.verify_composition_identity(MAPS[outer], MAPS[inner], m)
        if rep.verdict != "PASS" or rep.lhs > 1e-3:
            failures.append(f"{rep.check_id} err={rep.lhs:.2e}")
    # polynomial product (x²y)(x+y) = x³y + x²y²: compare the Leibniz
    # expansion against hand-differentiated tensors, no finite differences
    def _poly_product_jet(x, m):
        want = np.zeros((2,) * m)
        for idx in itertools.product((0, 1), repeat=m):
            j = sum(idx)  # number of y-derivatives
            if m == 3:
                want[idx] = (6 * x[1], 6 * x[0] + 4 * x[1], 4 * x[0], 0.0)[j]
            else:
                want[idx] = 6.0 if j == 1 else 4.0 if j == 2 else 0.0
        return want

    fld_f, fld_g = FIELDS["poly_xxy"], FIELDS["poly_sum"]
    for m in (3, 4):
        expansion = sy.canonicalize(sy.expand_product(m))
        for x in (np.array([0.7, 1.3]), np.array([2.0, 0.4])):
            f_jets = {k: fld_f.jet(x, k) for k in range(m + 1)}
            g_jets = {k: fld_g.jet(x, k) for k in range(m + 1)}
            ctx = ml.product_context(2, f_jets, g_jets)
            got = ml.symmetrize(ml.evaluate_expansion(expansion, ctx)).entries[0]
            err = float(np.max(np.abs(got - _poly_product_jet(x, m))))
            if err > 1e-10:
                failures.append(f"poly product m={m} abs err={err:.2e}")
    for f, g, m, step in [("poly_xxy", "poly_sum", 4, 0.05),
                          ("sin", "exp", 2, None), ("sin", "const", 3, None)]:
        rep = vf.verify_product_identity(FIELDS[f], FIELDS[g], m, fd_step=step)
        if rep.verdict != "PASS":
            failures.append(f"{rep.check_id} err={rep.lhs:.2e}")
    _conclude("criterion-3 composition/product identities (1e-3 fd, "
              "1e-10 exact polynomial)", not failures,
              "; ".join(failures) or "all identities hold")


# ---------------------------------------------------------------------------
# criterion 4: function-space engine invariants
# ---------------------------------------------------------------------------

def test_criterion_4_function_space_engine():
    failures = []
    rng = np.random.default_rng(2024)
    battery = [lebesgue(1), lebesgue(2), linf(), lorentz(2, 1), lorentz(3, 2),
               orlicz(PowerYoung(2)), orlicz(ExpM1Young()),
               convexified(lorentz(2, 1), 2)]
    for trial in range(20):
        u = StepProfile(rng.uniform(0.05, 3.0, 8), rng.uniform(0.1, 1.0, 8))
        star = decreasing_rearrangement(u)
        c = float(rng.uniform(0.3, 3.0))
        cu = StepProfile(c * u.values, u.measures)
        for x in battery:
            nu = norm(u, x)
            if abs(nu - norm(star, x)) > 1e-12 * max(nu, 1e-12):
                failures.append(f"equimeasurability {x} trial {trial}")
            if abs(norm(cu, x) - c * nu) > 1e-9 * max(c * nu, 1e-12):
                failures.append(f"homogeneity {x} trial {trial}")
    # convexification consistency through the numeric code path
    for p, alpha in [(1.0, 2.0), (2.0, 1.5), (2.0, 3.0)]:
        explicit = SpaceSpec(CONVEXIFIED, base=lebesgue(p), alpha=alpha)
        for trial in range(5):
            u = StepProfile(rng.uniform(0.05, 2.0, 6), rng.uniform(0.1, 1.0, 6))
            a = norm(u, explicit)
            b = norm(u, lebesgue(p * alpha))
            if abs(a - b) > 1e-12 * max(b, 1e-12):
                failures.append(f"convexification p={p} alpha={alpha}: {a} vs {b}")
    # indicator closed forms
    for a in (0.3, 1.0, 2.5):
        ind = StepProfile(np.array([1.0]), np.array([a]), rearranged=True)
        closed = [(lorentz(2, 1), 2.0 * a ** 0.5),
                  (lorentz(3, 2), (3 / 2) ** 0.5 * a ** (1 / 3)),
                  (orlicz(PowerYoung(2)), a ** 0.5),
                  (orlicz(ExpM1Young()), 1.0 / math.log1p(1.0 / a))]
        for x, want in closed:
            got = norm(ind, x)
            if abs(got - want) > 1e-9 * max(want, 1e-12):
                failures.append(f"indicator {x} a={a}: {got} vs {want}")
    # Boyd indices
    for p in (1.5, 2.0, 4.0):
        est, _ = boyd_lower_index(lebesgue(p))
        if abs(est - 1.0 / p) > 0.02:
            failures.append(f"Boyd Lp:{p} estimate {est:.4f}")
    est_inf, _ = boyd_lower_index(linf())
    if abs(est_inf) > 0.02:
        failures.append(f"Boyd Linf estimate {est_inf:.4f}")
    _conclude("criterion-4 space engine (1e-12/1e-9 norms, Boyd +-0.02)",
              not failures, "; ".join(failures[:4]) or "all invariants hold")


# ---------------------------------------------------------------------------
# criterion 5: inequality checks at scale
# ---------------------------------------------------------------------------

def test_criterion_5_inequality_suite():
    failures = []
    rng = np.random.default_rng(5150)
    patterns = [(2.0, 2.0), (math.inf, 1.0), (3.0, 3.0, 3.0), (4.0, 2.0, 4.0)]
    spaces = [lebesgue(2), lebesgue(1), lorentz(2, 2), orlicz(PowerYoung(2))]
    total = 2.0
    violations = 0
    for exps in patterns:
        for trial in range(1000):
            x = spaces[trial % len(spaces)]
            factors = []
            for _ in exps:
                m = rng.uniform(0.1, 1.0, 5)
                m *= total / m.sum()
                factors.append(StepProfile(rng.uniform(0.01, 2.0, 5), m))
            rep = check_holder(factors, exps, x, slack=1 + 1e-9)
            if not rep.holds:
                violations += 1
    if violations:
        failures.append(f"{violations} Hölder violations beyond 1e-9 slack")

    # transfer-lemma equality case to 1e-9, then randomized dominated cases
    f0 = decreasing_rearrangement(
        StepProfile(rng.uniform(0.1, 2.0, 9), rng.uniform(0.1, 1.0, 9)))
    for eta in (0.5, 2.0):
        g0 = dilate(f0, 1.0 / eta, eta * f0.total_measure)
        rep = check_hlp(f0, g0, lorentz(2, 1))
        if not (rep.premise_holds and abs(rep.lhs - rep.rhs)
                <= 1e-9 * max(1.0, rep.rhs)):
            failures.append(f"equality case eta={eta}: lhs={rep.lhs} rhs={rep.rhs}")
    hlp_spaces = [lebesgue(1), lebesgue(2), linf(), lorentz(2, 1),
                  lorentz(2, 2), orlicz(PowerYoung(2))]
    hlp_bad = 0
    for trial in range(1000):
        f = decreasing_rearrangement(
            StepProfile(rng.uniform(0.05, 2.0, 7), rng.uniform(0.1, 1.0, 7)))
        eta = float(rng.uniform(0.25, 4.0))
        g0 = dilate(f, 1.0 / eta, eta * f.total_measure)
        damp = np.minimum.accumulate(rng.uniform(0.2, 1.0, g0.values.size))
        g = decreasing_rearrangement(StepProfile(damp * g0.values, g0.measures))
        rep = check_hlp(f, g, hlp_spaces[trial % len(hlp_spaces)])
        if not (rep.premise_holds and rep.holds):
            hlp_bad += 1
    if hlp_bad:
        failures.append(f"{hlp_bad} transfer-lemma failures")

    # integral growth condition: quadratic and cubic closed forms
    grid = np.geomspace(0.25, 4.0, 7)
    quad = check_young_condition(PowerYoung(2), 1.0, grid)
    cube = check_young_condition(PowerYoung(3), 1.0, grid)
    if not quad.holds_on_grid or abs(quad.worst_ratio - 1.0) > 1e-6:
        failures.append(f"pow2 worst ratio {quad.worst_ratio}")
    if not cube.holds_on_grid or abs(cube.worst_ratio - 0.5) > 1e-6:
        failures.append(f"pow3 worst ratio {cube.worst_ratio}")
    for t, got in zip(grid, quad.lhs):
        if abs(got - t) > 1e-7 * t:
            failures.append(f"pow2 lhs({t}) = {got}")
    for t, got in zip(grid, cube.lhs):
        if abs(got - t * t / 2) > 1e-7 * t * t:
            failures.append(f"pow3 lhs({t}) = {got}")
    _conclude("criterion-5 inequality suite (4x1000 Hölder, 1000 transfer, "
              "Young closed forms)", not failures,
              "; ".join(failures[:4]) or "zero violations")


# ---------------------------------------------------------------------------
# criterion 6: inverse-map norm bound, desk scale
# ---------------------------------------------------------------------------

def test_criterion_6_inverse_norm_bound_pipeline():
    failures = []
    baselines = vf.load_baselines()
    spaces = [lebesgue(2), lorentz(2, 2), orlicz(PowerYoung(3))]
    for name, grid in (("sine_1d", 256), ("shear_2d", 16)):
        for space in spaces:
            rep = vf.verify_inverse_bound_m2(MAPS[name], space, grid=grid)
            if rep.verdict != "PASS" or rep.ratio > 1.0:
                failures.append(f"{rep.check_id} ratio={rep.ratio:.3f}")
    for name, grid in (("sine_1d", 256), ("shear_2d", 16)):
        for space in (lebesgue(2), lorentz(2, 2)):
            rep = vf.verify_inverse_bound_m3(MAPS[name], space, grid=grid,
                                             baselines=baselines)
            if rep.verdict != "PASS":
                failures.append(f"{rep.check_id} verdict={rep.verdict}")
            if rep.inputs.get("baseline_ratio_cap") is None:
                failures.append(f"{rep.check_id} missing regression baseline")
            ratio_1 = rep.inputs["measured_ratio"]
            seed = vf.check_seed(rep.check_id, 0)
            lhs2, rhs2, _ = vf.holder_decomposed_bound(MAPS[name], 3, space,
                                                       2 * grid, seed=seed)
            ratio_2 = lhs2 / rhs2
            drift = abs(ratio_2 - ratio_1) / ratio_1
            if drift > 0.05:
                failures.append(f"{rep.check_id} grid-doubling drift {drift:.3%}")
    _conclude("criterion-6 inverse-map norm bound (m=2 direct, m=3 decomposed, "
              "5% grid stability)", not failures,
              "; ".join(failures[:4]) or "bounds hold with stable ratios")


# ---------------------------------------------------------------------------
# criterion 7: determinism of the reporting pipeline
# ---------------------------------------------------------------------------

def test_criterion_7_deterministic_reports(tmp_path):
    failures = []
    blobs = []
    for run in ("a", "b"):
        out = tmp_path / run
        reports = run_suite(VerifyConfig(grid=16, seed=0, out_dir=str(out)))
        bad = [r.check_id for r in reports if r.verdict == "FAIL"]
        if bad:
            failures.append(f"run {run} FAIL verdicts: {bad[:3]}")
        blobs.append((out / "verify.csv").read_bytes())
    if blobs[0] != blobs[1]:
        failures.append("verify.csv differs between equal-seed runs")
    _conclude("criterion-7 determinism (bit-identical CSV reports)",
              not failures, "; ".join(failures) or
              f"{len(blobs[0])} identical bytes")
