import numpy as np
import pytest

from quasigns import linalg
from quasigns.catalog import trace_map
from quasigns.cstar import (
    FUNC,
    MAT,
    SCALAR,
    Codomain,
    CStarValue,
    Grid,
    PositiveMap,
    PosSesqForm,
    check_bound,
    check_form_axioms,
    check_invariance,
    check_schwarz,
    check_triangle,
    cnorm,
    null_space,
    quasi_norm,
    scalar_gram,
)
from quasigns.errors import FormNotPositiveError, InvalidParameterError
from quasigns.models import make_cstar_matrix_model, make_schatten_model


def inner_form():
    return PosSesqForm("inner", lambda a, b: CStarValue.scalar(np.vdot(b, a)), Codomain(SCALAR))


def matrix_units():
    out = []
    for i in range(2):
        for j in range(2):
            E = np.zeros((2, 2), dtype=complex)
            E[i, j] = 1
            out.append(E)
    return out


def first_column_form():
    D = np.diag([1.0, 0.0])
    return PosSesqForm("tr(b*a D)", lambda a, b: CStarValue.scalar(np.trace(b.conj().T @ a @ D)),
                       Codomain(SCALAR))


def test_grid_basics():
    g = Grid(0.0, 1.0, 11)
    assert g.h == pytest.approx(0.1)
    assert g.integrate(g.x) == pytest.approx(0.5)
    assert g.refine(2).points == 21
    with pytest.raises(InvalidParameterError):
        Grid(1.0, 0.0, 5)
    with pytest.raises(InvalidParameterError):
        Grid(0.0, 1.0, 1)


def test_cnorm_examples():
    g = Grid(0.0, 1.0, 5)
    assert cnorm(CStarValue.scalar(3 + 4j)) == pytest.approx(5)
    assert cnorm(CStarValue.func(np.full(5, 2.0), g)) == pytest.approx(2)
    assert cnorm(CStarValue.mat(np.diag([1.0, -2.0]))) == pytest.approx(2)


def test_cnorm_star_and_cstar_identity(rng):
    g = Grid(0.0, 1.0, 7)
    vals = [CStarValue.scalar(1 - 2j), CStarValue.func(linalg.random_complex(rng, 7), g),
            CStarValue.mat(linalg.random_complex(rng, (3, 3))),
            CStarValue.func(linalg.random_complex(rng, (7, 2, 2)), g)]
    for v in vals:
        assert cnorm(v.star()) == pytest.approx(cnorm(v))
    M = vals[2].data
    assert cnorm(CStarValue.mat(M.conj().T @ M)) == pytest.approx(cnorm(vals[2]) ** 2)


def test_positivity_predicate():
    g = Grid(0.0, 1.0, 3)
    assert CStarValue.scalar(2.0).is_positive()
    assert not CStarValue.scalar(1j).is_positive()
    assert CStarValue.func(np.array([0.0, 1.0, 2.0]), g).is_positive()
    assert not CStarValue.func(np.array([0.0, -1.0, 2.0]), g).is_positive()
    assert CStarValue.mat(np.diag([1.0, 0.0])).is_positive()
    assert not CStarValue.mat(np.array([[1.0, 1.0], [0.0, 1.0]])).is_positive()
    assert not CStarValue.mat(np.diag([1.0, -0.5])).is_positive()


def test_value_shapes_validated():
    g = Grid(0.0, 1.0, 3)
    with pytest.raises(InvalidParameterError):
        CStarValue.func(np.zeros(4), g)
    with pytest.raises(InvalidParameterError):
        CStarValue.mat(np.zeros((2, 3)))
    with pytest.raises(InvalidParameterError):
        CStarValue.scalar(1) + CStarValue.mat(np.eye(2))


def test_tau_per_codomain():
    g = Grid(0.0, 1.0, 3)
    assert CStarValue.scalar(2).tau() == 2
    assert CStarValue.func(np.array([1.0, 2.0, 3.0]), g).tau() == 6
    assert CStarValue.mat(np.diag([1.0, 4.0])).tau() == 5
    assert CStarValue.func(np.stack([np.eye(2)] * 3), g).tau() == 6


def test_codomain_commutativity():
    g = Grid(0.0, 1.0, 3)
    assert Codomain(SCALAR).commutative
    assert Codomain(FUNC, g).commutative
    assert not Codomain(FUNC, g, 2).commutative
    assert not Codomain(MAT, dim=2).commutative
    assert Codomain(FUNC, g, 2).zero().data.shape == (3, 2, 2)


def test_quasi_norm_examples(rng):
    S = inner_form()
    assert quasi_norm(S, np.zeros(2)) == 0
    assert quasi_norm(S, np.array([3.0, 4.0])) == pytest.approx(5)
    a = linalg.random_complex(rng, 2)
    assert quasi_norm(S, (2 - 1j) * a) == pytest.approx(abs(2 - 1j) * quasi_norm(S, a))


def test_quasi_norm_rejects_nonpositive():
    S = PosSesqForm("neg", lambda a, b: CStarValue.scalar(-np.vdot(b, a)), Codomain(SCALAR))
    with pytest.raises(FormNotPositiveError):
        quasi_norm(S, np.ones(2))


def test_schwarz_equality_and_orthogonal():
    S = inner_form()
    r = check_schwarz(S, np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    assert r.lhs == 0 and r.pass_general and r.pass_cs
    a = np.array([1.0, 2.0])
    r = check_schwarz(S, a, a)
    assert r.lhs == pytest.approx(r.rhs_cs)
    assert r.slack_cs == pytest.approx(0, abs=1e-15)
    assert r.slack_general == pytest.approx(0.5)


def test_schwarz_matrix_valued_constant_one_not_asserted(rng):
    S = PosSesqForm("outer", lambda a, b: CStarValue.mat(np.outer(a, b.conj())),
                    Codomain(MAT, dim=3))
    r = check_schwarz(S, linalg.random_complex(rng, 3), linalg.random_complex(rng, 3))
    assert r.pass_cs is None
    assert r.pass_general


def test_triangle_examples(rng):
    S = inner_form()
    a = linalg.random_complex(rng, 2)
    r = check_triangle(S, a, np.zeros(2))
    assert r.lhs == pytest.approx(r.rhs_plain)
    assert r.pass_plain and r.pass_quasi
    assert check_triangle(S, a, -a).lhs == 0


def test_invariance_of_trace_form(rng):
    model = make_schatten_model(3, 2.0)
    W = linalg.random_psd(rng, 3)
    S = trace_map(W, model).induced_form()
    rep = check_invariance(S, model, 50, rng)
    assert rep.passed
    assert rep.max_defect < 1e-12 * max(1, rep.max_scale)


def test_invariance_detects_failure(rng):
    model = make_schatten_model(2, 2.0)
    W = np.diag([1.0, 2.0])
    # a weight between y* and x breaks S(ax, y) = S(x, a* y)
    S = PosSesqForm("bad", lambda a, b: CStarValue.scalar(np.trace(b.conj().T @ W @ a)),
                    Codomain(SCALAR))
    assert not check_invariance(S, model, 20, rng).passed


def test_form_axioms(rng):
    rep = check_form_axioms(inner_form(), lambda r: linalg.random_complex(r, 3), rng, 20)
    assert rep.passed


def test_null_space_examples():
    basis = matrix_units()
    ns = null_space(first_column_form(), basis)
    assert ns.shape == (2, 4)
    # span{E12, E22}: coordinates 1 and 3 in row-major order
    span = np.abs(ns).sum(axis=0)
    assert span[0] < 1e-12 and span[2] < 1e-12
    S0 = PosSesqForm("zero", lambda a, b: CStarValue.scalar(0), Codomain(SCALAR))
    assert null_space(S0, basis).shape == (4, 4)
    assert null_space(inner_form(), list(np.eye(3))).shape == (0, 3)


def test_null_space_vectors_are_null():
    S = first_column_form()
    basis = matrix_units()
    for v in null_space(S, basis):
        a = np.tensordot(v, np.array(basis), axes=(0, 0))
        assert cnorm(S(a, a)) <= 1e-8


def test_null_space_rejects_indefinite():
    S = PosSesqForm("indef", lambda a, b: CStarValue.scalar(a[0] * np.conj(b[0]) - a[1] * np.conj(b[1])),
                    Codomain(SCALAR))
    with pytest.raises(FormNotPositiveError):
        null_space(S, list(np.eye(2)))


def test_scalar_gram_convention(rng):
    S = inner_form()
    basis = list(np.eye(3))
    G = scalar_gram(S, basis)
    x, y = linalg.random_complex(rng, 3), linalg.random_complex(rng, 3)
    assert S(x, y).tau() == pytest.approx(y.conj() @ G @ x)


def test_positive_map_sum_bound(rng):
    model = make_cstar_matrix_model(2)
    o1 = trace_map(np.diag([1.0, 0.0]), model)
    o2 = trace_map(np.diag([0.5, 2.0]), model)
    s = o1 + o2
    assert s.declared_bound == pytest.approx(o1.declared_bound + o2.declared_bound)
    a = linalg.random_complex(rng, (2, 2))
    assert cnorm(s(a) - (o1(a) + o2(a))) < 1e-14
    assert check_bound(s, rng, 100)["passed"]


def test_check_bound_detects_too_small(rng):
    model = make_cstar_matrix_model(2)
    om = trace_map(np.eye(2), model)
    assert not check_bound(om, rng, 50, bound=0.1)["passed"]


def test_induced_form_needs_model():
    om = PositiveMap("bare", lambda a: CStarValue.scalar(0), Codomain(SCALAR))
    with pytest.raises(InvalidParameterError):
        om.induced_form()
