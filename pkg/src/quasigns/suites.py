"""Verification suites run by the command line tool.

Each suite takes its config section, a seeded generator and a tolerance
table, and returns a list of check records plus optional CSV tables.
Records carry only deterministic values so reports are byte-reproducible.
"""

from __future__ import annotations

import hashlib
import json
import math

import numpy as np

from . import catalog, dynamics, gns, linalg, models
from .cstar import Grid, check_bound, check_schwarz, check_triangle, cnorm, quasi_norm
from .errors import WindowError

RNG_ALGORITHM = "numpy.random.PCG64"
SUITE_ORDER = ("inequalities", "gns", "catalog", "dynamics")

DEFAULTS = {
    "suites": ["all"],
    "seed": 7,
    "tolerances": {"rtol": 1e-9, "homogeneity": 1e-12, "rep": 1e-8, "eps": 1e-10,
                   "reconstruction": 1e-8, "quadrature": 1e-6, "power": 1e-12,
                   "slope": 0.01, "richardson": 0.2},
    "inequalities": {"schwarz_pairs": 10000, "triangle_pairs": 10000, "homogeneity_pairs": 1000,
                     "norm_samples": 10000, "matrix_n": 4, "schatten_p": 4.0,
                     "projector_trials": 100, "projector_n": 20, "projector_p": 2.0,
                     "catalog_points": 41},
    "gns": {"samples": 20, "schatten_n": 6, "schatten_p": 4.0, "grid_points": 21},
    "catalog": {"points": 41, "invariance_samples": 100, "bound_samples": 1000,
                "kernel_points": 2001, "kernel": None},
    "dynamics": {"J": 12, "d": 2, "k": 2, "delta": 1e-3, "f_norm": 0.1, "cosine_f_norm": 0.001,
                 "lambda": None, "weights": [2.0, 0.5], "subadditivity_pairs": 1000},
}


def _clean(v):
    """JSON-safe, deterministic representation of measured values."""
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    if isinstance(v, (complex, np.complexfloating)):
        return [_clean(v.real), _clean(v.imag)]
    if isinstance(v, np.ndarray):
        return _clean(v.tolist())
    return v


def digest(inputs) -> str:
    blob = json.dumps(_clean(inputs), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def record(name: str, anchor: str, inputs, measured, passed: bool, tolerance) -> dict:
    return {"name": name, "anchor": anchor, "inputs_digest": digest(inputs),
            "measured": _clean(measured), "passed": bool(passed), "tolerance": _clean(tolerance)}


# ------------------------------------------------------------ inequalities

def schwarz_check(entries, pairs: int, rng, rtol: float) -> dict:
    per = math.ceil(pairs / len(entries))
    out = {"pairs": 0, "min_slack_general": math.inf, "min_slack_commutative": math.inf,
           "fail_general": 0, "fail_commutative": 0, "forms": []}
    for e in entries:
        sg = sc = math.inf
        for _ in range(per):
            r = check_schwarz(e.form, e.sampler(rng), e.sampler(rng), rtol)
            sg = min(sg, r.slack_general)
            out["fail_general"] += not r.pass_general
            if r.pass_cs is not None:
                sc = min(sc, r.slack_cs)
                out["fail_commutative"] += not r.pass_cs
        out["pairs"] += per
        out["forms"].append({"form": e.name, "commutative": e.form.commutative_codomain,
                             "min_slack_general": sg,
                             "min_slack_commutative": sc if e.form.commutative_codomain else None})
        out["min_slack_general"] = min(out["min_slack_general"], sg)
        if e.form.commutative_codomain:
            out["min_slack_commutative"] = min(out["min_slack_commutative"], sc)
    return out


def triangle_check(entries, pairs: int, homog_pairs: int, rng, rtol: float) -> dict:
    out = {"pairs_per_form": pairs, "fail_quasi": 0, "fail_plain": 0, "max_ratio": 0.0,
           "max_homogeneity_defect": 0.0}
    for e in entries:
        for _ in range(pairs):
            r = check_triangle(e.form, e.sampler(rng), e.sampler(rng), rtol)
            out["fail_quasi"] += not r.pass_quasi
            out["fail_plain"] += r.pass_plain is False
            if r.rhs_plain > 0:
                out["max_ratio"] = max(out["max_ratio"], r.lhs / r.rhs_plain)
        for _ in range(homog_pairs):
            a = e.sampler(rng)
            al = complex(*rng.standard_normal(2))
            lhs = quasi_norm(e.form, al * a)
            rhs = abs(al) * quasi_norm(e.form, a)
            out["max_homogeneity_defect"] = max(out["max_homogeneity_defect"],
                                                abs(lhs - rhs) / max(rhs, 1e-300))
    return out


def run_inequalities(cfg: dict, rng, tol: dict):
    checks = []
    rtol = tol["rtol"]
    entries = catalog.standard_catalog(points=cfg["catalog_points"])
    sch = schwarz_check(entries, cfg["schwarz_pairs"], rng, rtol)
    checks.append(record("schwarz", "Schwarz inequality, constant 2 (constant 1 for commutative C)",
                         {"pairs": cfg["schwarz_pairs"], "forms": [e.name for e in entries]}, sch,
                         sch["fail_general"] == 0 and sch["fail_commutative"] == 0
                         and sch["min_slack_general"] >= -rtol, {"relative_slack": -rtol}))
    tri = triangle_check(entries, cfg["triangle_pairs"], cfg["homogeneity_pairs"], rng, rtol)
    checks.append(record("quasi_norm_triangle", "sqrt(2)-weakened triangle inequality",
                         {"pairs": cfg["triangle_pairs"]}, tri,
                         tri["fail_quasi"] == 0 and tri["max_ratio"] <= math.sqrt(2) * (1 + rtol),
                         {"rtol": rtol}))
    checks.append(record("quasi_norm_homogeneity", "||alpha a||_S = |alpha| ||a||_S",
                         {"pairs": cfg["homogeneity_pairs"]},
                         {"max_defect": tri["max_homogeneity_defect"]},
                         tri["max_homogeneity_defect"] <= tol["homogeneity"], tol["homogeneity"]))

    n, p = cfg["matrix_n"], cfg["schatten_p"]
    W = linalg.random_psd(rng, n)
    W /= np.trace(W).real
    for model in (models.make_cstar_matrix_model(n), models.make_schatten_model(n, p)):
        om = catalog.trace_map(W, model)
        norm = gns.map_norm(om, "exact-formula", model.norm_name)
        panel = [model.sample(rng) for _ in range(cfg["norm_samples"])]
        rep = gns.check_norm_inequality(om, norm, True, panel, rtol)
        checks.append(record(f"norm_inequality[{model.norm_name}]",
                             "4||omega|| ||omega(a*a)|| >= ||omega(a)||^2 = ||omega(a*)|| ||omega(a)||",
                             {"W": W, "samples": len(panel), "domain": model.norm_name},
                             rep.to_dict(), rep.passed, {"rtol": rtol, "star": 1e-8}))

    trials, pn, pp = cfg["projector_trials"], cfg["projector_n"], cfg["projector_p"]
    mono = bound = final = True
    worst_final = 0.0
    for _ in range(trials):
        Wr = linalg.random_psd(rng, pn)
        Wr /= linalg.op_norm(Wr)
        seq = models.projector_sequence(Wr, pp)
        mono &= seq.monotone
        bound &= seq.bound_ok
        last = seq.cutoffs[-1]
        ratio = seq.residuals[-1] / (pn * last)
        worst_final = max(worst_final, ratio)
        final &= ratio <= 1 + 1e-12
    checks.append(record("projector_residuals", "lim ||W(I - P_n)||_p = 0 for spectral cutoffs",
                         {"trials": trials, "n": pn, "p": pp},
                         {"monotone": mono, "count_bound": bound,
                          "max_final_over_n_cutoff": worst_final},
                         mono and bound and final, {"monotone_slack": 1e-12}))
    Wd = np.diag([1.0, 0.4, 0.05])
    seq = models.projector_sequence(Wd, pp, cutoffs=[0.5, 1 / 3, 0.01])
    expected = [linalg.schatten_norm(np.diag([0, 0.4, 0.05]), pp),
                linalg.schatten_norm(np.diag([0, 0, 0.05]), pp), 0.0]
    proj = [np.diag([1, 0, 0]), np.diag([1, 1, 0]), np.eye(3)]
    err = max(max(abs(a - b) for a, b in zip(seq.residuals, expected)),
              max(float(np.max(np.abs(P - Q))) for P, Q in zip(seq.projections, proj)))
    checks.append(record("projector_diagonal_fixture", "spectral cutoff projections of diag(1, 0.4, 0.05)",
                         {"W": [1.0, 0.4, 0.05], "cutoffs": [0.5, 1 / 3, 0.01]},
                         {"residuals": seq.residuals, "expected": expected, "max_error": err},
                         err <= 1e-12, 1e-12))
    return checks, {}


# ------------------------------------------------------------------- gns

def _gns_common(name: str, g, model, a_panel, rng, tol, samples: int, expect_dim: int,
                strict_tail: bool = True):
    checks = []
    checks.append(record(f"{name}.quotient_dim", "dimension of A / N_S",
                         {"model": model.name}, g.summary(), g.dim == expect_dim, expect_dim))
    rep = gns.verify_representation(g, samples, rng, tol["rep"])
    checks.append(record(f"{name}.representation", "pi(ax) = pi(a) pi(x); <pi(a) xi, eta> = <xi, pi(a*) eta>",
                         {"model": model.name, "samples": samples}, rep.to_dict(), rep.passed, tol["rep"]))
    a = a_panel[0]
    eps = gns.verify_epsilon_relations(g, a, tol["eps"])
    checks.append(record(f"{name}.epsilon", "pi(e_m) eps_k = eps_m; double limit diagonal tail",
                         {"model": model.name, "a": a}, eps.to_dict(),
                         eps.passed and (eps.tail_strictly_decreasing if strict_tail
                                         else eps.tail_decreasing_to_zero), tol["eps"]))
    worst = 0.0
    traces = []
    for i in range(len(a_panel)):
        tr = gns.reconstruct_form(g, a_panel[i], a_panel[(i + 1) % len(a_panel)], tol["reconstruction"])
        worst = max(worst, tr.top_error / max(1.0, cnorm(tr.target)))
        traces.append(tr.to_dict())
    checks.append(record(f"{name}.reconstruct_form", "S(a, b) = lim <pi(a) eps, pi(b) eps>",
                         {"model": model.name, "panel": len(a_panel)},
                         {"max_top_error": worst, "traces": traces}, worst <= tol["reconstruction"],
                         tol["reconstruction"]))
    return checks


def _residual_rows(label: str, rep) -> list:
    rows = []
    for i, r in enumerate(rep.residuals):
        for m, v in enumerate(r):
            rows.append((label, rep.mode, i, m + 1, float(v)))
    return rows


def run_gns(cfg: dict, rng, tol: dict):
    checks = []
    samples = cfg["samples"]

    m2 = models.make_cstar_matrix_model(2)
    om = catalog.trace_map(np.diag([1.0, 0.0]), m2)
    g = gns.build_gns(m2, om.induced_form(), rng)
    panel = [m2.sample(rng) for _ in range(4)] + [np.array([[1, 1], [0, 0]], dtype=complex)]
    # I - P_1 lies in N_S here, so eps_1 = eps_2 and the tail is identically 0
    checks += _gns_common("m2_trace", g, m2, panel, rng, tol, samples, 2, strict_tail=False)
    lin = gns.reconstruct_linear(g, om, panel, "double", rng, tol["reconstruction"])
    checks.append(record("m2_trace.reconstruct_linear", "omega(a) = lim <pi(a) eps, eps>",
                         {"panel": len(panel)}, lin.to_dict(), lin.passed, tol["reconstruction"]))
    worst = max(gns.rep_operator_norm(g, a)[0] - m2.norm(a) for a in panel)
    checks.append(record("m2_trace.pi_bounded", "||pi(a)|| <= ||a|| on a C*-domain",
                         {"panel": len(panel)}, {"max_excess": worst}, worst <= 1e-8, 1e-8))

    n, p = cfg["schatten_n"], cfg["schatten_p"]
    sm = models.make_schatten_model(n, p)
    grid = Grid(0.0, 1.0, cfg["grid_points"])
    lam = 2.0 ** -np.arange(1, n + 1)
    gf = np.array([np.exp(-j * grid.x) for j in range(1, n + 1)])
    st = catalog.schatten_trace_map(lam, gf, grid, sm)
    g = gns.build_gns(sm, st.induced_form(), rng)
    panel = [sm.sample(rng) for _ in range(4)]
    checks += _gns_common("schatten", g, sm, panel, rng, tol, samples, n * n)
    lin = gns.reconstruct_linear(g, st, panel, "single", rng, tol["reconstruction"])
    checks.append(record("schatten.reconstruct_linear", "omega(a) = lim <pi(a) eps, eps>",
                         {"panel": len(panel)}, lin.to_dict(), lin.passed, tol["reconstruction"]))

    W1, W2 = linalg.random_psd(rng, n), linalg.random_psd(rng, n)
    o1, o2 = catalog.trace_map(W1, sm), catalog.trace_map(W2, sm)
    pairs = [(sm.sample(rng), sm.sample(rng)) for _ in range(200)]
    b1 = check_bound(o1, rng, 0, pairs=pairs)
    b2 = check_bound(o2, rng, 0, pairs=pairs)
    b12 = check_bound(o1 + o2, rng, 0, pairs=pairs)
    checks.append(record("additivity_closure", "omega_1 + omega_2 bounded with M_1 + M_2",
                         {"pairs": len(pairs)}, {"bound_1": b1, "bound_2": b2, "bound_sum": b12},
                         b1["passed"] and b2["passed"] and b12["passed"], tol["rtol"]))

    rows = []
    gl = models.make_grid_l2_model(2.0, 41)
    v = (np.abs(gl.params["grid"].x) <= 1.0).astype(float)
    wf = catalog.weighted_form(v, gl)
    g = gns.build_gns(gl, wf, rng)
    expect = int(np.sum((v > 0)[1:-1]))
    checks.append(record("grid_weighted.quotient_dim", "dimension of A / N_S",
                         {"model": gl.name}, g.summary(), g.dim == expect, expect))

    x = gl.params["grid"].x
    gauss = np.exp(-x**2 / 2).astype(complex)
    rep = models.check_approximate_identity(gl, [gauss], tol=1.0)
    w = gl.params["grid"].weights
    oracle = np.array([np.sqrt(np.sum(w * np.abs(gauss) ** 2 * (1 - e.real))) for e in gl.identity])
    err = float(np.max(np.abs(rep.residuals[0] - oracle) / np.maximum(oracle, 1e-300)))
    rows += _residual_rows("grid_l2/gaussian", rep)
    checks.append(record("grid_l2.identity_residuals", "a - a e_n -> 0 for indicator cutoffs",
                         {"model": gl.name}, {"max_relative_error": err, "residuals": rep.residuals[0],
                                              "idempotent": rep.idempotent},
                         err <= 1e-8 and rep.idempotent, 1e-8))
    repf = models.check_approximate_identity(gl, [gauss], form=wf, tol=1.0)
    rows += _residual_rows("grid_l2/gaussian", repf)
    ok = bool(np.all(repf.residuals <= np.sqrt(v.max()) * rep.residuals + 1e-12))
    checks.append(record("grid_l2.form_residuals", "S(a - a e, a - a e) -> 0",
                         {"model": gl.name}, {"residuals": repf.residuals[0]}, ok, 1e-12))
    for model in (sm, models.make_seqfun_model(grid, 5), models.make_ncl2_model(n)):
        panel = [model.sample(rng) for _ in range(3)]
        rep = models.check_approximate_identity(model, panel, tol=tol["eps"])
        ax = models.check_model_axioms(model, rng, samples)
        rows += _residual_rows(model.name, rep)
        checks.append(record(f"{model.name}.identity", "strongly idempotent right approximate identity",
                             {"model": model.name}, {**rep.to_dict(), "axioms_passed": ax.passed},
                             rep.passed and ax.passed, tol["eps"]))
    return checks, {"residuals.csv": (("model", "mode", "element", "m", "residual"), rows)}


# --------------------------------------------------------------- catalog

def kernel_from_config(spec: dict) -> catalog.KernelSpec:
    xg = Grid(*spec["x_grid"])
    tg = Grid(*spec["t_grid"])
    return catalog.KernelSpec(spec.get("kind", "scalar"), xg, tg, np.asarray(spec["samples"]),
                              None if spec.get("dx_samples") is None else np.asarray(spec["dx_samples"]))


def run_catalog(cfg: dict, rng, tol: dict):
    checks = []
    for e in catalog.standard_catalog(points=cfg["points"]):
        if e.model is None:
            continue
        res = catalog.check_catalog_map(e, rng, cfg["invariance_samples"], cfg["bound_samples"])
        ok = res["invariance_passed"] and res.get("bound", {"passed": True})["passed"]
        checks.append(record(f"{e.name}.invariance_and_bound",
                             "S(ax, y) = S(x, a*y); ||omega(d* c)|| <= M ||c|| ||d||",
                             {"form": e.name}, res, ok, {"invariance": 1e-8, "bound_rtol": 1e-9}))

    kp = cfg["kernel_points"]
    g = Grid(0.0, 1.0, kp)
    ks = catalog.KernelSpec.sample(lambda x, t: x * t, g, g)
    one = np.ones(kp)
    err = float(np.max(np.abs(catalog.kernel_form(ks)(one, one).data - g.x / 2)))
    checks.append(record("kernel.linear_fixture", "S_k(1, 1)(x) = x/2 for k = x t",
                         {"points": kp}, {"max_error": err}, err <= tol["quadrature"], tol["quadrature"]))

    if cfg["kernel"] is not None:
        spec = kernel_from_config(cfg["kernel"])
        if spec.kind == "scalar":
            f = linalg.random_complex(rng, spec.t_grid.points)
            val = catalog.kernel_form(spec)(f, f)
            ok = val.is_positive() if spec.nonnegative else True
            checks.append(record("kernel.config_positivity", "S_k(f, f) >= 0 for k >= 0",
                                 {"kernel": cfg["kernel"]}, {"min": float(val.data.real.min()),
                                                             "nonnegative_kernel": spec.nonnegative},
                                 ok, 1e-10))

    B = np.array([[1.0, 0.5], [0.5, 2.0]])
    study = catalog.richardson_slope(
        lambda x, t: np.exp(-(x - t) ** 2)[..., None, None] * B,
        lambda x, t: (-2 * (x - t) * np.exp(-(x - t) ** 2))[..., None, None] * B,
        Grid(0.0, 1.0, 11), Grid(0.0, 1.0, 51),
        lambda t: np.stack([np.cos(s) * np.eye(2) for s in t]),
        lambda t: np.stack([np.eye(2) + s * B for s in t]))
    checks.append(record("operator_kernel.derivative_slope", "x -> S_K(f, g)(x) differentiable under the integral",
                         {"levels": 3}, study.to_dict(), abs(study.slope - 2) <= tol["richardson"],
                         {"slope": 2, "tol": tol["richardson"]}))

    gx = Grid(-6.0, 6.0, 61)
    gt = Grid(0.0, 1.0, 41)
    okern = catalog.KernelSpec.sample(lambda x, t: np.exp(-x**2 - t)[..., None, None] * np.eye(2), gx, gt,
                                      kind="operator")
    c = linalg.random_complex(rng, (gt.points, 2, 2))
    rep = catalog.omega_K(okern, c)
    checks.append(record("operator_kernel.omega_K", "omega_K positive, bounded, C_0 range",
                         {"kernel": "exp(-x^2 - t) I"}, rep.to_dict(),
                         rep.positive is True and rep.bound_ratio <= 1 + 1e-12 and rep.c0_range,
                         {"bound_ratio": 1.0}))

    W = np.diag([0.9, 0.5, 0.1])
    kg = Grid(0.0, 0.9, cfg["points"])
    kk = catalog.KernelSpec.sample(lambda x, t: x + t, kg, kg)
    nc = catalog.ncl2_map(W, 0.3, kk)
    e1 = float(np.max(np.abs(nc(np.diag([1, 0, 0])).data - (kg.x + 0.9))))
    e2 = float(np.max(np.abs(nc(np.eye(3)).data - (3 * kg.x + 1.5))))
    checks.append(record("ncl2.diagonal_fixture", "omega(A)(x) = tr(A((I-P)W + W_x))",
                         {"W": [0.9, 0.5, 0.1], "cutoff": 0.3}, {"e11_error": e1, "identity_error": e2},
                         max(e1, e2) <= 1e-12, 1e-12))
    X = linalg.random_complex(rng, (3, 3))
    f = linalg.random_complex(rng, (4, kg.points))
    h = linalg.random_complex(rng, (4, kg.points))
    adj = catalog.adjointability_defect(nc, X, f, h)
    A_t = np.stack([linalg.random_psd(rng, 2) for _ in range(kg.points)])
    Y = linalg.random_complex(rng, (3, 3))
    pos = catalog.Ncl2Map.theta_GP(nc, Y @ linalg.adjoint(Y), A_t).is_positive()
    checks.append(record("ncl2.theta", "theta positive; tilde theta adjointable",
                         {"panel": kg.points}, {"adjoint_defect": adj, "theta_positive": pos},
                         adj <= 1e-10 and pos, 1e-10))
    gg = Grid(0.0, 1.0, cfg["points"])
    kgen = catalog.KernelSpec.sample(lambda x, t: np.exp(-(x - t) ** 2), gg, gg)
    gen = catalog.genint_check(kgen, linalg.random_complex(rng, gg.points),
                               linalg.random_complex(rng, gg.points))
    checks.append(record("ncl2.generalized_integral", "diagonal W reproduces the scalar kernel form",
                         {"points": gg.points}, {"max_error": gen}, gen <= tol["quadrature"],
                         tol["quadrature"]))

    sm = models.make_schatten_model(4, 4.0)
    lam = 2.0 ** -np.arange(1, 5)
    st = catalog.schatten_trace_map(lam, np.ones((4, gg.points)), gg, sm)
    e = float(np.max(np.abs(st(np.diag([1, 0, 0, 0])).data - 0.5)))
    checks.append(record("schatten_trace.fixture", "omega(diag(1, 0, ...))(t) = lambda_1",
                         {"lambda": lam}, {"max_error": e}, e <= 1e-15, 1e-15))

    seq = models.make_seqfun_model(gg, 6)
    w = np.array([np.full(gg.points, 2.0 ** -(m + 1)) for m in range(6)])
    e = float(np.max(np.abs(catalog.weighted_sum_map(w, seq)(np.ones((6, gg.points))).data - (1 - 2.0**-6))))
    checks.append(record("weighted_sum.geometric", "sum_n 2^-n = 1 - 2^-N", {"N": 6},
                         {"max_error": e}, e <= 1e-15, 1e-15))
    return checks, {}


# -------------------------------------------------------------- dynamics

def run_dynamics(cfg: dict, rng, tol: dict):
    checks = []
    sp = dynamics.BlockSpace(cfg["J"], cfg["d"])
    down, up = cfg["weights"]
    sh = dynamics.build_shift(sp, down, up)
    W = dynamics.build_W(sp, cfg["lambda"])
    k, delta = cfg["k"], cfg["delta"]
    default_pair = (down, up) == (2.0, 0.5)

    checks.append(record("shift_inverse", "V is invertible", {"J": sp.J, "d": sp.d},
                         {"defect": sh.inverse_defect}, sh.inverse_defect <= 1e-12, 1e-12))
    checks.append(record("weight_tails", "||W(I - sum_{|j|<=n} P_j)|| <= sup_{|j|>n} lambda_j M",
                         {"lambda": W.lam}, {"tails": W.tails, "bounds": W.tail_bounds}, W.tail_ok, 1e-12))
    if default_pair:
        err = 0.0
        for j in sp.indices:
            for n in range(sp.J - abs(j) + 1):
                Pj = sp.projection(j)
                err = max(err, abs(linalg.op_norm(sh.power(n) @ Pj) - dynamics.closed_form_power(n, j)),
                          abs(linalg.op_norm(sh.power(-n) @ Pj) - dynamics.closed_form_power(n, -j)))
        checks.append(record("power_closed_forms", "V^n P_j = 2^-n (j >= 0), 2^(2j-n) (j < 0, n > -j)",
                             {"J": sp.J}, {"max_error": err}, err <= tol["power"], tol["power"]))
    table = dynamics.power_decay(sh, k)
    ok = table.within_bound if default_pair else True
    checks.append(record("power_decay", "||V^n sum_{|j|<=k} P_j|| <= 2k 2^(2k-n)",
                         {"k": k, "J": sp.J}, table.to_dict(),
                         ok and (not default_pair or abs(table.slope + 1) <= tol["slope"]),
                         {"bound_slack": 1e-12, "slope": -1, "slope_tol": tol["slope"]}))

    F1 = dynamics.random_supported(sp, k, rng, cfg["f_norm"])
    F2 = dynamics.random_supported(sp, k, rng, cfg["f_norm"])
    anchor = "X_N = F_1 + R^-N(F_2) witnesses transitivity"
    inputs = {"k": k, "delta": delta, "f_norm": cfg["f_norm"]}
    try:
        tr = dynamics.transitivity_witness(W, sh, F1, F2, k, delta)
        slope_ok = not default_pair or abs(tr.decay_slope + 1) <= tol["slope"]
        checks.append(record("transitivity_witness", anchor, inputs, tr.to_dict(),
                             tr.passed and slope_ok, {"delta": delta, "slope_tol": tol["slope"]}))
    except WindowError as exc:
        checks.append(record("transitivity_witness", anchor, inputs, {"error": str(exc)}, False, delta))
    C1 = dynamics.random_supported(sp, k, rng, cfg["cosine_f_norm"])
    C2 = dynamics.random_supported(sp, k, rng, cfg["cosine_f_norm"])
    anchor = "X_N = F_1 + R^N F_2 + R^-N F_2 for the cosine sequence"
    inputs = {"k": k, "delta": delta, "f_norm": cfg["cosine_f_norm"]}
    try:
        co = dynamics.cosine_witness(W, sh, C1, C2, k, delta)
        checks.append(record("cosine_witness", anchor, inputs, co.to_dict(),
                             co.passed and co.expansion_defect <= 1e-12 and 2 * co.N + k <= sp.J,
                             {"delta": delta, "expansion": 1e-12}))
    except WindowError as exc:
        checks.append(record("cosine_witness", anchor, inputs, {"error": str(exc)}, False, delta))

    Wm = W.matrix
    sub = hom = 0.0
    ratio = 0.0
    for _ in range(cfg["subadditivity_pairs"]):
        X = linalg.random_complex(rng, (sp.size, sp.size))
        Y = linalg.random_complex(rng, (sp.size, sp.size))
        nx, ny = dynamics.seminorm_W(Wm, X), dynamics.seminorm_W(Wm, Y)
        sub = max(sub, (dynamics.seminorm_W(Wm, X + Y) - nx - ny) / (nx + ny))
        al = complex(*rng.standard_normal(2))
        hom = max(hom, abs(dynamics.seminorm_W(Wm, al * X) - abs(al) * nx) / max(abs(al) * nx, 1e-300))
    n = int(rng.integers(-(sp.J - k), sp.J - k + 1))
    X = linalg.random_complex(rng, (sp.size, sp.size))
    ratio = dynamics.right_bound_ratio(sh, n, X)
    checks.append(record("seminorm_W", "||.||_W is a seminorm; ||R^n X||_2 <= ||X||_2 ||V^n||",
                         {"pairs": cfg["subadditivity_pairs"]},
                         {"max_subadditivity_excess": sub, "max_homogeneity_defect": hom,
                          "right_bound_ratio": ratio},
                         sub <= 1e-12 and hom <= 1e-12 and ratio <= 1 + 1e-12, 1e-12))
    rows = [(n, f, b, bd) for n, f, b, bd in table.rows()]
    return checks, {"decay.csv": (("n", "forward_norm", "backward_norm", "bound"), rows)}


RUNNERS = {"inequalities": run_inequalities, "gns": run_gns, "catalog": run_catalog,
           "dynamics": run_dynamics}
