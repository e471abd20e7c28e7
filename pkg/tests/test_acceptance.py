"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with  pytest tests/test_acceptance.py -v -s  to see the lines live.
All tolerances are pinned here; nothing is calibrated at run time.
"""

import json
from contextlib import contextmanager

import numpy as np
import pytest

from radext import dsl
from radext.bounds import inverse_bounds, star_bounds
from radext.cli import run
from radext.curves import builtin, compose, mollify
from radext.errors import DegenerateDifferential
from radext.extension import differential_data, field_grid, jacobian_identity_check, radial_map
from radext.lipschitz import (
    lip_L_polar,
    lip_Lambda,
    max_abs_mu,
    max_dilatation,
    pairwise_sup,
    pairwise_sup_refined,
)
from radext.periodic import TWO_PI, PeriodicFunction
from radext.verify import limit_lemma_check, verify_circle

from conftest import make_psi
from test_periodic import triangle_lift

SQRT = np.sqrt


@contextmanager
def criterion(num, name):
    ok = False
    try:
        yield
        ok = True
    finally:
        print(f"\nACCEPTANCE {num:02d} {name}: {'PASS' if ok else 'FAIL'}")


def cli_json(args, tmp_path, name="acc.json"):
    out = tmp_path / name
    code = run(args + ["--out", str(out)])
    assert code == 0, f"exit code {code} for {args}"
    return json.loads(out.read_text())


def test_criterion_01_square_example(tmp_path):
    with criterion(1, "square example"):
        doc = cli_json(["analyze", "--builtin", "square"], tmp_path)
        assert doc["l"] == pytest.approx(2.0, abs=1e-6)
        assert doc["L"] == pytest.approx(2.0, abs=1e-6)
        assert doc["Lambda"] == pytest.approx((SQRT(2) + SQRT(10)) / 2, abs=1e-6)
        assert doc["K_qc"] == pytest.approx((3 + SQRT(5)) / 2, abs=1e-6)
        assert doc["alpha_gamma"] == pytest.approx(np.pi / 4, abs=1e-9)


def test_criterion_02_shear_example(shear):
    with criterion(2, "shear example"):
        p1 = pairwise_sup_refined(shear, "d1", 4096)
        p2 = pairwise_sup(shear, "d2", 4096)
        assert p1.sup == pytest.approx(SQRT(101) / 10, abs=1e-3)
        assert p2.sup == pytest.approx(np.pi / 2, abs=1e-3)
        t, s = sorted(p2.sup_pair)
        assert abs(t - 0.0) <= 1e-2 and abs(s - np.pi) <= 1e-2


def test_criterion_03_ellipse_example(ellipse21, tmp_path):
    with criterion(3, "ellipse example"):
        K_target = (41 + 3 * SQRT(73)) / 32
        K = max_dilatation(ellipse21)
        assert K == pytest.approx(K_target, abs=1e-4)
        assert K_target + 1 / K_target == pytest.approx(41 / 16, rel=1e-12)
        L = lip_L_polar(ellipse21)
        assert L == pytest.approx(2.151657, abs=1e-4)
        assert L ** 2 == pytest.approx(500 / 108, abs=1e-3)
        doc = cli_json(["analyze", "--builtin", "ellipse", "--param", "a=2",
                        "--param", "b=1"], tmp_path)
        assert "ellipse-lip-printed-is-square" in doc["flags"]
        assert "eqK-radicand-discrepancy-check" in doc["flags"]


def test_criterion_04_theorem_cir(psi05):
    with criterion(4, "circle-map theorem"):
        rep = verify_circle(psi05)
        values = {c.name: c for c in rep.checks}
        for name in ("cir-l-eq-lip-psi", "cir-L-eq-lip-psi",
                     "cir-Lambda-eq-lip-psi"):
            assert values[name].status == "pass"
            assert values[name].measured[0] == pytest.approx(1.5, abs=1e-6)
        k = values["cir-K-claim"]
        assert k.status == "flagged"
        assert k.measured[0] == pytest.approx(2.0, abs=1e-6)
        assert any("printed claim" in n for n in rep.notes)


def test_criterion_05_theorem_ara_family(trig_family):
    with criterion(5, "diagonal-limit theorem on random curves"):
        for curve in trig_family:
            base1 = pairwise_sup(curve, "d1", 4096)
            base2 = pairwise_sup(curve, "d2", 4096)
            gap0 = abs(base2.sup - base1.sup)
            assert gap0 <= 1e-3 * base2.sup
            ref1 = pairwise_sup_refined(curve, "d1", 4096, rounds=1, base=base1)
            ref2 = pairwise_sup_refined(curve, "d2", 4096, rounds=1, base=base2)
            gap1 = abs(ref2.sup - ref1.sup)
            assert gap1 <= gap0, curve.curve_id
            assert base1.sup <= base2.sup + 1e-15


def test_criterion_06_theorem_rrr(square, ellipse21, trig_family):
    with criterion(6, "strict extension gap"):
        rv_tol = 1e-9
        for curve in (ellipse21, square, *trig_family):
            ts = TWO_PI * np.arange(512) / 512
            rv = curve.r.value(ts)
            if rv.max() - rv.min() <= rv_tol * rv.max():
                continue  # constant curves handled below
            gap = lip_Lambda(curve) - lip_L_polar(curve)
            assert gap > 1e-3, curve.curve_id
        for s in (0.5, 1.0, 3.0):
            c = builtin("circle", s=s)
            assert lip_Lambda(c) - lip_L_polar(c) <= 1e-9


def test_criterion_07_theorem_star_soundness(square, psi02, psi05):
    with criterion(7, "explicit bounds soundness"):
        maps = [square.to_boundary_map(), psi02.as_boundary_map(),
                psi05.as_boundary_map()]
        for bmap in maps:
            sb = star_bounds(bmap)
            lam = lip_Lambda(bmap)
            assert lam <= sb.bigL + 1e-9
            lower = pairwise_sup(bmap, "disk", 256).inf
            assert lower >= sb.ell - 1e-9
            k_meas = max_abs_mu(bmap)
            assert k_meas <= sb.k_bound + 1e-9
            lo, hi, sin_lo = inverse_bounds(k_meas)
            psi = bmap.psi.psi
            ts = TWO_PI * np.arange(4096) / 4096
            dpsi = psi.derivative(ts)
            assert dpsi.min() >= lo - 1e-9
            assert dpsi.max() <= hi + 1e-9
            assert sb.sin_ag >= sin_lo - 1e-9
        sb = star_bounds(square)
        assert sb.bigL - lip_Lambda(square) <= 1e-9  # bound attained


def test_criterion_08_limit_lemma():
    with criterion(8, "triangle limit lemma"):
        for p, q, t in ((1.0, 1.0, np.pi / 2), (1.0, 2.0, np.pi / 6),
                        (2.0, 1.0, 2.0)):
            limit = q ** 2 * np.sin(t) ** 2 / p ** 2
            res = limit_lemma_check(p, q, t, eps_seq=(1e-2, 1e-3, 1e-4))
            assert res[0] > res[1] > res[2]
            assert res[2] <= 1e-2 * limit


def test_criterion_09_radius_independence(circle1, ellipse21, square):
    with criterion(9, "radius independence of the dilatation field"):
        trig = builtin("trigpoly", c0=1, a2=0.25, b1=-0.2)
        for curve in (circle1, ellipse21, square, trig):
            g = field_grid(curve, 3, 512)
            for key in ("abs_wz", "abs_wzbar", "op_norm", "jacobian",
                        "dilatation", "mu_abs"):
                rows = g[key].reshape(3, 512)
                assert np.array_equal(rows[0], rows[1])
                assert np.array_equal(rows[0], rows[2])
        # the shear winds clockwise: it has no dilatation field at all
        with pytest.raises(DegenerateDifferential):
            field_grid(builtin("shear"), 1, 512)


def test_criterion_10_identity_oracle(square, ellipse21, circle1, trig_family,
                                      psi02, psi05):
    with criterion(10, "jacobian identity and finite-difference oracle"):
        ts = TWO_PI * np.arange(512) / 512
        family = [circle1, ellipse21, square, *trig_family[:5]]
        maps = [c.to_boundary_map() for c in family]
        maps += [compose(trig_family[5], psi02), compose(ellipse21, psi05)]
        for bmap in maps:
            res = jacobian_identity_check(bmap, ts)
            rho = bmap.rho.value(ts)
            dpsi = bmap.psi.psi.derivative(ts)
            scale = np.maximum(1.0, rho ** 2 * dpsi)
            assert np.max(res / scale) <= 1e-9, bmap.curve_id
        h = 1e-6
        for bmap in maps[:6]:
            for t in (0.37, 1.9, 5.0):
                d = differential_data(bmap, t)
                z = 0.6 * np.exp(1j * t)
                wx = (radial_map(bmap, z + h) - radial_map(bmap, z - h)) / (2 * h)
                wy = (radial_map(bmap, z + 1j * h) - radial_map(bmap, z - 1j * h)) / (2 * h)
                wz = 0.5 * abs(wx - 1j * wy)
                wzbar = 0.5 * abs(wx + 1j * wy)
                assert wz == pytest.approx(d.abs_wz, rel=1e-4)
                assert wzbar == pytest.approx(d.abs_wzbar, rel=1e-4, abs=1e-4)


def test_criterion_11_mollifier():
    with criterion(11, "mollifier contract"):
        phi = triangle_lift()  # Lipschitz constant exactly 2
        grid = np.linspace(0.0, TWO_PI, 4097)
        sups = []
        for width in (0.1, 0.05, 0.025):
            out = mollify(phi, width)
            slopes = np.abs(np.diff(out.value(grid)) / np.diff(grid))
            assert slopes.max() <= 2.0 + 1e-9
            assert out.period_offset == phi.period_offset
            probes = np.array([0.4, 2.2, 5.0])
            assert np.max(np.abs(out.value(probes + TWO_PI)
                                 - out.value(probes) - TWO_PI)) <= 1e-12
            sups.append(float(np.max(np.abs(out.value(grid) - phi.value(grid)))))
        assert sups[0] > sups[1] > sups[2] > 0
        assert sups[2] <= 2.0 * 0.025


def test_criterion_12_dsl(tmp_path):
    with criterion(12, "expression language"):
        from test_dsl import random_smooth_expr
        rng = np.random.default_rng(2024)
        checked = 0
        while checked < 100:
            expr = random_smooth_expr(rng)
            d = dsl.diff(expr)
            t = float(rng.uniform(0.1, 6.0))
            try:
                sym = dsl.evaluate(d, t)
                fd = (dsl.evaluate(expr, t + 1e-6)
                      - dsl.evaluate(expr, t - 1e-6)) / 2e-6
            except Exception:
                continue
            assert abs(sym - fd) <= 1e-6 * max(1.0, abs(sym))
            assert dsl.parse(dsl.to_text(expr)) == expr
            checked += 1
        # the worked formulas, entered as text, reproduce criteria 1 and 3
        doc = cli_json(["analyze", "--r", "min(1/abs(sin(t)), 1/abs(cos(t)))"],
                       tmp_path, "sq.json")
        assert doc["l"] == pytest.approx(2.0, abs=1e-6)
        assert doc["Lambda"] == pytest.approx((SQRT(2) + SQRT(10)) / 2, abs=1e-6)
        assert doc["K_qc"] == pytest.approx((3 + SQRT(5)) / 2, abs=1e-6)
        doc = cli_json(["analyze", "--r", "(cos(t)^2/a^2 + sin(t)^2/b^2)^(-1/2)",
                        "--param", "a=2", "--param", "b=1"], tmp_path, "el.json")
        assert doc["K_qc"] == pytest.approx((41 + 3 * SQRT(73)) / 32, abs=1e-4)
        assert doc["L"] == pytest.approx(2.151657, abs=1e-4)
