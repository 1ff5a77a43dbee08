"""Property-based checks of the structural invariants."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from quasigns import catalog, dynamics, gns, linalg
from quasigns.cstar import check_schwarz, check_triangle, cnorm, quasi_norm
from quasigns.models import make_cstar_matrix_model, make_schatten_model

seeds = st.integers(0, 2**32 - 1)
ENTRIES = catalog.standard_catalog(points=11)
FAST = settings(max_examples=40, deadline=None)


def sample_pair(entry, seed):
    rng = np.random.default_rng(seed)
    return entry.sampler(rng), entry.sampler(rng)


@FAST
@given(seed=seeds, idx=st.integers(0, len(ENTRIES) - 1))
def test_schwarz_and_triangle_every_catalog_form(seed, idx):
    e = ENTRIES[idx]
    a, b = sample_pair(e, seed)
    s = check_schwarz(e.form, a, b)
    assert s.pass_general
    if e.form.codomain.commutative:
        assert s.pass_cs
    assert check_triangle(e.form, a, b).pass_quasi


@FAST
@given(seed=seeds, idx=st.integers(0, len(ENTRIES) - 1),
       re=st.floats(-5, 5), im=st.floats(-5, 5))
def test_quasi_norm_homogeneous(seed, idx, re, im):
    e = ENTRIES[idx]
    a, _ = sample_pair(e, seed)
    lam = complex(re, im)
    lhs = quasi_norm(e.form, lam * a)
    assert abs(lhs - abs(lam) * quasi_norm(e.form, a)) <= 1e-12 * max(1.0, lhs)


@FAST
@given(seed=seeds, idx=st.integers(0, len(ENTRIES) - 1))
def test_forms_positive_and_hermitian(seed, idx):
    e = ENTRIES[idx]
    a, b = sample_pair(e, seed)
    assert e.form(a, a).is_positive()
    assert cnorm(e.form(a, b) - e.form(b, a).star()) <= 1e-12 * max(1.0, cnorm(e.form(a, b)))


@FAST
@given(seed=seeds, n=st.integers(1, 6), p=st.sampled_from([1.0, 2.0, 3.0, np.inf]))
def test_schatten_norm_facts(seed, n, p):
    rng = np.random.default_rng(seed)
    A, B = linalg.random_complex(rng, (2, n, n))
    assert linalg.schatten_norm(A + B, p) <= linalg.schatten_norm(A, p) + linalg.schatten_norm(B, p) + 1e-10
    assert linalg.schatten_norm(A, p) >= linalg.op_norm(A) - 1e-12
    assert abs(linalg.schatten_norm(linalg.adjoint(A), p) - linalg.schatten_norm(A, p)) <= 1e-10


@FAST
@given(seed=seeds, n=st.integers(2, 5))
def test_trace_map_norm_inequality(seed, n):
    rng = np.random.default_rng(seed)
    W = linalg.random_psd(rng, n)
    for model in (make_cstar_matrix_model(n), make_schatten_model(n, 4.0)):
        om = catalog.trace_map(W, model)
        panel = [model.sample(rng) for _ in range(5)]
        rep = gns.check_norm_inequality(om, gns.map_norm(om), True, panel)
        if model.norm_name == "operator":
            assert rep.passed
        assert rep.max_star_defect <= 1e-12


@FAST
@given(seed=seeds, n=st.integers(2, 4))
def test_gns_reconstructs_trace_form(seed, n):
    rng = np.random.default_rng(seed)
    model = make_cstar_matrix_model(n)
    W = linalg.random_psd(rng, n, rank=int(rng.integers(1, n + 1)))
    g = gns.build_gns(model, catalog.trace_map(W, model).induced_form(), rng)
    assert g.dim == n * np.linalg.matrix_rank(W, tol=1e-10)
    a, b = linalg.random_complex(rng, (2, n, n))
    assert cnorm(g.inner(g.quotient(a), g.quotient(b)) - g.form(a, b)) <= 1e-8 * max(1.0, cnorm(g.form(a, b)))
    assert gns.verify_representation(g, 3, rng).passed


SPACE = dynamics.BlockSpace(8, 2)
SHIFT = dynamics.build_shift(SPACE)


@FAST
@given(seed=seeds, n=st.integers(-6, 6), m=st.integers(-6, 6))
def test_right_multiplier_semigroup(seed, n, m):
    X = dynamics.random_supported(SPACE, 1, np.random.default_rng(seed))
    lhs = dynamics.right_multiplier(SHIFT, n, dynamics.right_multiplier(SHIFT, m, X))
    assert np.max(np.abs(lhs - dynamics.right_multiplier(SHIFT, n + m, X))) <= 1e-12 * 4.0 ** (abs(n) + abs(m))


@FAST
@given(k=st.integers(0, 4), data=st.data())
def test_power_decay_within_bound(k, data):
    n = data.draw(st.integers(0, SPACE.J - k))
    t = dynamics.power_decay(SHIFT, k, [n])
    assert t.within_bound


@FAST
@given(seed=seeds)
def test_witness_defects_below_delta(seed):
    rng = np.random.default_rng(seed)
    W = dynamics.build_W(SPACE)
    F1 = dynamics.random_supported(SPACE, 1, rng, 0.05)
    F2 = dynamics.random_supported(SPACE, 1, rng, 0.05)
    rep = dynamics.transitivity_witness(W, SHIFT, F1, F2, 1, 1e-2)
    assert rep.passed and rep.N <= SPACE.J - 1
    assert all(v >= 0 for v in rep.first_trace + rep.second_trace)
