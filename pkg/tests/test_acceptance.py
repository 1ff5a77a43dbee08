"""The eight acceptance criteria at their stated tolerances.

Each test prints one pass/fail line; the lines are repeated in the terminal
summary under "acceptance criteria".
"""

import math
import time

import numpy as np
import pytest

from quasigns import catalog, cli, dynamics, gns, linalg, models
from quasigns.cstar import Grid, cnorm
from quasigns.suites import DEFAULTS, RUNNERS, schwarz_check, triangle_check


@pytest.fixture(scope="module")
def entries():
    return catalog.standard_catalog(points=41)


def test_criterion_1_schwarz(entries, acceptance):
    t0 = time.perf_counter()
    forms = catalog.standard_catalog(points=41)
    res = schwarz_check(forms, 10_000, np.random.default_rng(101), 1e-9)
    elapsed = time.perf_counter() - t0
    commutative = [f["form"] for f in res["forms"] if f["commutative"]]
    ok = (res["pairs"] >= 10_000 and res["fail_general"] == 0 and res["min_slack_general"] >= -1e-9
          and res["fail_commutative"] == 0 and res["min_slack_commutative"] >= -1e-9 and elapsed < 5)
    acceptance(1, "Schwarz", ok,
               f"pairs={res['pairs']} forms={len(forms)} commutative={len(commutative)} "
               f"min_slack_2={res['min_slack_general']:.3g} min_slack_1={res['min_slack_commutative']:.3g} "
               f"time={elapsed:.2f}s")
    assert ok


def test_criterion_2_quasi_norm(entries, acceptance):
    res = triangle_check(entries, 10_000, 1_000, np.random.default_rng(102), 1e-9)
    ok = (res["fail_quasi"] == 0 and res["max_ratio"] <= math.sqrt(2) * (1 + 1e-9)
          and res["max_homogeneity_defect"] <= 1e-12)
    acceptance(2, "quasi-norm", ok,
               f"pairs/form=10000 forms={len(entries)} max ||a+b||/(||a||+||b||)={res['max_ratio']:.4f} "
               f"homogeneity={res['max_homogeneity_defect']:.2e}")
    assert ok


def gns_fixture_checks(g, panel, rng):
    rep = gns.verify_representation(g, 20, rng, 1e-8)
    eps = gns.verify_epsilon_relations(g, panel[0], 1e-10)
    recon = max(gns.reconstruct_form(g, a, b).top_error
                for a, b in zip(panel, panel[1:] + panel[:1]))
    return rep, eps, recon


def test_criterion_3_gns(acceptance):
    rng = np.random.default_rng(103)
    m2 = models.make_cstar_matrix_model(2)
    g2 = gns.build_gns(m2, catalog.trace_map(np.diag([1.0, 0.0]), m2).induced_form(), rng)
    p2 = [m2.sample(rng) for _ in range(5)]
    n = 6
    sm = models.make_schatten_model(n, 4.0)
    grid = Grid(0.0, 1.0, 21)
    st = catalog.schatten_trace_map(2.0 ** -np.arange(1, n + 1),
                                    np.array([np.exp(-j * grid.x) for j in range(1, n + 1)]), grid, sm)
    g6 = gns.build_gns(sm, st.induced_form(), rng)
    p6 = [sm.sample(rng) for _ in range(5)]
    r2, e2, c2 = gns_fixture_checks(g2, p2, rng)
    r6, e6, c6 = gns_fixture_checks(g6, p6, rng)
    dims = (g2.dim, g6.dim) == (2, 36)
    rep_ok = all(max(r.multiplicativity_defect, r.core_multiplicativity_defect, r.adjoint_defect) <= 1e-8
                 for r in (r2, r6))
    eps_ok = max(e2.max_eps_defect, e6.max_eps_defect) <= 1e-10
    rec_ok = max(c2, c6) <= 1e-8
    # on M2 the identity I - P_1 is null, so that tail is identically 0 from the start
    tail_ok = e6.tail_strictly_decreasing and e2.tail_decreasing_to_zero
    ok = dims and rep_ok and eps_ok and rec_ok and tail_ok
    acceptance(3, "GNS", ok,
               f"dims=({g2.dim},{g6.dim}) rep={max(r2.multiplicativity_defect, r6.multiplicativity_defect, r2.adjoint_defect, r6.adjoint_defect):.1e} "
               f"eps={max(e2.max_eps_defect, e6.max_eps_defect):.1e} recon={max(c2, c6):.1e} "
               f"schatten tail strict={e6.tail_strictly_decreasing} m2 tail={e2.diagonal_tail.tolist()}")
    assert ok


def test_criterion_4_norm_inequality(acceptance):
    rng = np.random.default_rng(104)
    n = 4
    W = linalg.random_psd(rng, n)
    parts = []
    ok = True
    for model in (models.make_cstar_matrix_model(n), models.make_schatten_model(n, 4.0)):
        om = catalog.trace_map(W, model)
        norm = gns.map_norm(om)
        expected = np.trace(W).real if model.norm_name == "operator" else linalg.schatten_norm(W, 4 / 3)
        panel = [model.sample(rng) for _ in range(10_000)]
        rep = gns.check_norm_inequality(om, norm, True, panel, 1e-9)
        good = (norm.kind == "exact" and abs(norm.value - expected) <= 1e-12 * expected
                and rep.violations_4 == 0 and rep.violations_1 == 0 and rep.max_star_defect <= 1e-12)
        ok &= good
        parts.append(f"{model.norm_name}: ||w||={norm.value:.4f} slack4={rep.min_slack_4:.3g} "
                     f"slack1={rep.min_slack_1:.3g} star={rep.max_star_defect:.1e}")
    acceptance(4, "norm inequality", ok, "samples=10000; " + "; ".join(parts))
    assert ok


def test_criterion_5_projectors(acceptance):
    rng = np.random.default_rng(105)
    n, p = 20, 2.0
    mono = bound = final = True
    worst = 0.0
    for _ in range(100):
        W = linalg.random_psd(rng, n)
        W /= linalg.op_norm(W)
        seq = models.projector_sequence(W, p)
        mono &= seq.monotone
        bound &= seq.bound_ok
        ratio = seq.residuals[-1] / (n * seq.cutoffs[-1])
        worst = max(worst, ratio)
        final &= ratio <= 1
    seq = models.projector_sequence(np.diag([1.0, 0.4, 0.05]), p, [0.5, 1 / 3, 0.01])
    hand_res = [math.hypot(0.4, 0.05), 0.05, 0.0]
    hand_proj = [np.diag([1.0, 0, 0]), np.diag([1.0, 1, 0]), np.eye(3)]
    err = max(max(abs(a - b) for a, b in zip(seq.residuals, hand_res)),
              max(np.max(np.abs(P - Q)) for P, Q in zip(seq.projections, hand_proj)))
    ok = mono and bound and final and err <= 1e-12
    acceptance(5, "projectors", ok,
               f"trials=100 n=20 monotone={mono} count_bound={bound} "
               f"max final/(n*cutoff)={worst:.3g} diagonal fixture error={err:.1e}")
    assert ok


def test_criterion_6_kernel(acceptance):
    g = Grid(0.0, 1.0, 2001)
    ks = catalog.KernelSpec.sample(lambda x, t: x * t, g, g)
    vals = catalog.kernel_form(ks)(np.ones(2001), np.ones(2001)).data
    fixture_err = float(np.max(np.abs(vals - g.x / 2)))
    d = 2
    A = np.array([[1.0, 0.3], [0.3, 0.5]])
    study = catalog.richardson_slope(
        lambda x, t: np.exp(-(x - t) ** 2)[..., None, None] * A,
        lambda x, t: (-2 * (x - t) * np.exp(-(x - t) ** 2))[..., None, None] * A,
        Grid(-1.0, 1.0, 21), Grid(-1.0, 1.0, 41),
        lambda t: np.stack([np.diag([1 + s, 1 - s / 2]) for s in t]),
        lambda t: np.stack([np.array([[1, s], [0, 1]]) for s in t]), levels=3)
    ok = fixture_err <= 1e-6 and abs(study.slope - 2) <= 0.2
    acceptance(6, "kernel", ok,
               f"x/2 fixture error={fixture_err:.1e} (2001 points) Richardson slope={study.slope:.3f} "
               f"defects={[f'{v:.2e}' for v in study.defects]}")
    assert ok


def test_criterion_7_dynamics(acceptance):
    t0 = time.perf_counter()
    sp = dynamics.BlockSpace(12, 2)
    sh = dynamics.build_shift(sp)
    W = dynamics.build_W(sp)
    err = 0.0
    for j in sp.indices:
        Pj = sp.projection(j)
        for n in range(sp.J - abs(j) + 1):
            err = max(err, abs(linalg.op_norm(sh.power(n) @ Pj) - dynamics.closed_form_power(n, j)))
    table = dynamics.power_decay(sh, 2)
    rng = np.random.default_rng(7)
    F1, F2 = (dynamics.random_supported(sp, 2, rng, 0.1) for _ in range(2))
    tr = dynamics.transitivity_witness(W, sh, F1, F2, 2, 1e-3)
    C1, C2 = (dynamics.random_supported(sp, 2, rng, 1e-3) for _ in range(2))
    co = dynamics.cosine_witness(W, sh, C1, C2, 2, 1e-3)
    checks, _ = RUNNERS["dynamics"](DEFAULTS["dynamics"], cli.suite_rng(7, "dynamics"),
                                    DEFAULTS["tolerances"])
    suite_ok = all(c["passed"] for c in checks)
    elapsed = time.perf_counter() - t0
    ok = (suite_ok and err <= 1e-12 and table.within_bound and tr.passed and tr.N <= 10
          and abs(tr.decay_slope + 1) <= 0.01 and co.passed and 2 * co.N + 2 <= sp.J
          and elapsed < 10)
    acceptance(7, "dynamics", ok,
               f"closed-form error={err:.1e} decay within bound={table.within_bound} "
               f"transitivity N={tr.N} slope={tr.decay_slope:.4f} cosine N={co.N} "
               f"suite checks passed={suite_ok} time={elapsed:.2f}s")
    assert ok


def test_criterion_8_full_run(tmp_path, acceptance):
    outs = [tmp_path / "a", tmp_path / "b"]
    times, codes = [], []
    for out in outs:
        t0 = time.perf_counter()
        codes.append(cli.main(["run", "--seed", "0", "--out", str(out)]))
        times.append(time.perf_counter() - t0)
    same = all((outs[0] / f).read_bytes() == (outs[1] / f).read_bytes()
               for f in ("report.json", "decay.csv", "residuals.csv"))
    ok = codes == [0, 0] and max(times) < 60 and same
    acceptance(8, "full run", ok,
               f"exit codes={codes} times={[round(t, 2) for t in times]}s byte-identical={same}")
    assert ok
