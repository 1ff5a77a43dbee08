import numpy as np
import pytest

from quasigns import linalg
from quasigns.catalog import weighted_form
from quasigns.cstar import Grid
from quasigns.errors import DomainError, InvalidIdentityError, InvalidParameterError
from quasigns.models import (
    check_approximate_identity,
    check_model_axioms,
    check_nested,
    make_cstar_matrix_model,
    make_grid_l2_model,
    make_ncl2_model,
    make_schatten_model,
    make_seqfun_model,
    projector_sequence,
    seq_norm,
)


def all_models():
    g = Grid(0.0, 1.0, 9)
    return [make_schatten_model(4, 3.0), make_grid_l2_model(2.0, 21), make_seqfun_model(g, 3),
            make_ncl2_model(4), make_cstar_matrix_model(3)]


@pytest.mark.parametrize("model", all_models(), ids=lambda m: m.name)
def test_model_axioms(model, rng):
    rep = check_model_axioms(model, rng, 10)
    assert rep.passed, rep


def test_schatten_identity_residuals():
    for p in (1.0, 2.0, 3.0):
        m = make_schatten_model(4, p)
        rep = check_approximate_identity(m, [np.eye(4, dtype=complex)])
        np.testing.assert_allclose(rep.residuals[0], [(4 - k) ** (1 / p) for k in range(1, 5)])
        assert rep.final_residuals[0] == 0
        assert rep.passed


def test_schatten_model_rejects_bad_params():
    with pytest.raises(InvalidParameterError):
        make_schatten_model(0)
    with pytest.raises(InvalidParameterError):
        make_schatten_model(3, np.inf)


def test_grid_l2_identity_in_core():
    m = make_grid_l2_model(2.0, 41)
    assert all(m.in_core(e) for e in m.identity)
    assert m.params["levels"] == 19
    rep = check_approximate_identity(m, [m.identity[0]])
    assert np.all(rep.residuals == 0)
    assert rep.idempotent


def test_grid_l2_gaussian_tail_mass():
    m = make_grid_l2_model(4.0, 81)
    x = np.linspace(-4, 4, 81)
    f = np.exp(-x**2 / 2)
    rep = check_approximate_identity(m, [f.astype(complex)], tol=1.0)
    w = np.full(81, 0.1)
    w[0] = w[-1] = 0.05
    step = 4.0 / 40
    oracle = [np.sqrt(np.sum(w * f**2 * (np.abs(x) > n * step + 1e-9))) for n in range(1, 40)]
    np.testing.assert_allclose(rep.residuals[0], oracle, rtol=1e-8)
    assert np.all(np.diff(rep.residuals[0]) < 0)
    # frozen: trapezoid tail mass over |x| > 1 (m = 10), from a plain loop over the nodes
    assert rep.residuals[0][9] ** 2 == pytest.approx(0.2432442857123609, rel=1e-12)


def test_grid_l2_form_mode_bound():
    m = make_grid_l2_model(2.0, 41)
    x = m.params["grid"].x
    v = 0.5 + 0.25 * np.cos(x)
    S = weighted_form(v, m)
    f = np.exp(-x**2).astype(complex)
    plain = check_approximate_identity(m, [f], tol=1.0)
    form = check_approximate_identity(m, [f], form=S, tol=1.0)
    assert np.all(form.residuals <= np.sqrt(v.max()) * plain.residuals + 1e-14)


def test_seqfun_constant_tail():
    g = Grid(0.0, 1.0, 5)
    m = make_seqfun_model(g, 4)
    c = np.array([1.0, 2.0, -1.0, 0.5])
    f = np.repeat(c[:, None], 5, axis=1).astype(complex)
    rep = check_approximate_identity(m, [f])
    np.testing.assert_allclose(rep.residuals[0] ** 2, [5.25, 1.25, 0.25, 0.0])
    e1 = np.zeros((4, 5), dtype=complex)
    e1[0] = 1
    assert np.all(check_approximate_identity(m, [e1]).residuals == 0)


def test_seq_norm_takes_sup_outside():
    f = np.array([[1.0, 0.0], [0.0, 1.0]])
    assert seq_norm(f) == pytest.approx(1.0)


def test_ncl2_residuals_and_monotone(rng):
    m = make_ncl2_model(5)
    P3 = linalg.diagonal_projection(5, 3)
    rep = check_approximate_identity(m, [P3])
    assert np.all(rep.residuals[0][2:] == 0)
    T = linalg.random_complex(rng, (5, 5))
    r = check_approximate_identity(m, [T]).residuals[0]
    assert np.all(np.diff(r) <= 1e-12)
    assert r[-1] == 0


def test_ncl2_rejects_non_nested():
    P = np.diag([1.0, 0.0])
    Q = np.diag([0.0, 1.0])
    with pytest.raises(InvalidIdentityError):
        make_ncl2_model(2, [P, Q])
    assert check_nested([P, np.eye(2)]) == 0


def test_projector_sequence_diagonal_fixture():
    W = np.diag([1.0, 0.4, 0.05])
    for p in (1.0, 2.0, 4.0):
        seq = projector_sequence(W, p, cutoffs=[0.5, 1 / 3, 0.01])
        np.testing.assert_allclose(seq.projections[0], np.diag([1, 0, 0]), atol=1e-15)
        np.testing.assert_allclose(seq.projections[1], np.diag([1, 1, 0]), atol=1e-15)
        np.testing.assert_allclose(seq.projections[2], np.eye(3), atol=1e-15)
        expected = [(0.4**p + 0.05**p) ** (1 / p), 0.05, 0.0]
        np.testing.assert_allclose(seq.residuals, expected, atol=1e-12)
        assert seq.monotone and seq.bound_ok


def test_projector_sequence_trivial_cases():
    seq = projector_sequence(np.zeros((3, 3)), 2.0, levels=5)
    assert seq.residuals == [0.0] * 5
    Q = np.diag([1.0, 1.0, 0.0])
    seq = projector_sequence(Q, 2.0, cutoffs=[0.5])
    np.testing.assert_allclose(seq.projections[0], Q)
    assert seq.residuals[0] == 0


def test_projector_sequence_random(rng):
    for _ in range(5):
        W = linalg.random_psd(rng, 20)
        W /= linalg.op_norm(W)
        seq = projector_sequence(W, 2.0)
        assert seq.monotone and seq.bound_ok
        assert seq.residuals[-1] <= 20 * seq.cutoffs[-1]


def test_projector_sequence_errors():
    with pytest.raises(DomainError):
        projector_sequence(np.diag([1.0, -1.0]))
    with pytest.raises(InvalidParameterError):
        projector_sequence(np.eye(2), cutoffs=[0.1, 0.5])


def test_right_multiplication_contracts(rng):
    for model in all_models():
        assert check_model_axioms(model, rng, 5).right_mult_ratio <= 1 + 1e-10
