"""Finite-truncation models of non-unital (quasi) *-algebras.

Every finite matrix or grid algebra is unital, so non-unitality is represented
by truncation: the approximate identity is a nested family e_1 <= e_2 <= ...
whose top element is the truncation horizon, and what is measured is how the
residuals ||a - a e_m|| behave across levels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import linalg
from .cstar import Grid, PosSesqForm, quasi_norm
from .errors import DomainError, InvalidIdentityError, InvalidParameterError


@dataclass(frozen=True)
class AlgebraModel:
    """A truncated quasi *-algebra (A, A_0) with norm and approximate identity.

    Elements are numpy arrays of ``shape``.  ``mul`` is the module product
    a . x (also used for x . a and, where A = A_0, for the full product).
    """

    name: str
    kind: str
    shape: tuple
    norm_fn: Callable[[np.ndarray], float]
    norm_name: str
    mul_fn: Callable[[np.ndarray, np.ndarray], np.ndarray]
    adjoint_fn: Callable[[np.ndarray], np.ndarray]
    core_fn: Callable[[np.ndarray], bool]
    identity: tuple
    sampler: Callable[[np.random.Generator, bool], np.ndarray]
    params: dict = field(default_factory=dict)

    def norm(self, a) -> float:
        return float(self.norm_fn(np.asarray(a)))

    def mul(self, a, x) -> np.ndarray:
        return self.mul_fn(np.asarray(a), np.asarray(x))

    def adjoint(self, a) -> np.ndarray:
        return self.adjoint_fn(np.asarray(a))

    def in_core(self, a) -> bool:
        return bool(self.core_fn(np.asarray(a)))

    def sample(self, rng: np.random.Generator, core: bool = False) -> np.ndarray:
        return self.sampler(rng, core)

    @property
    def dim(self) -> int:
        return int(np.prod(self.shape))

    def basis(self) -> list:
        """Standard basis of the truncated carrier (matrix units, grid deltas...)."""
        eye = np.eye(self.dim, dtype=complex)
        return [eye[i].reshape(self.shape) for i in range(self.dim)]

    def coords(self, a) -> np.ndarray:
        return np.asarray(a, dtype=complex).reshape(-1)

    def from_coords(self, c) -> np.ndarray:
        return np.asarray(c, dtype=complex).reshape(self.shape)

    def describe(self) -> dict:
        return {"name": self.name, "kind": self.kind, "norm": self.norm_name,
                "identity_levels": len(self.identity),
                "params": {k: v for k, v in self.params.items() if np.isscalar(v)}}


def _matrix_sampler(n: int):
    def sample(rng, core=False):
        return linalg.random_complex(rng, (n, n))
    return sample


def make_schatten_model(n: int, p: float = 2.0) -> AlgebraModel:
    """B_p truncated to n x n matrices with the diagonal projections P_1..P_n."""
    if n < 1:
        raise InvalidParameterError("n must be >= 1")
    if not (1 <= p < np.inf):
        raise InvalidParameterError("p must lie in [1, inf)")
    ident = tuple(linalg.diagonal_projection(n, m) for m in range(1, n + 1))
    return AlgebraModel(
        name=f"schatten(n={n}, p={p:g})", kind="matrix", shape=(n, n),
        norm_fn=lambda a: linalg.schatten_norm(a, p), norm_name=f"schatten-{p:g}",
        mul_fn=np.matmul, adjoint_fn=linalg.adjoint, core_fn=lambda a: True,
        identity=ident, sampler=_matrix_sampler(n), params={"n": n, "p": p},
    )


def make_grid_l2_model(x_max: float, points: int, levels: int | None = None,
                       center: float = 0.0) -> AlgebraModel:
    """(L^2, L^inf_c) on a grid over [center - x_max, center + x_max].

    The core consists of grid functions vanishing at both endpoints (support in
    a strict subinterval).  With M = (points-1)//2 the identity is
    e_n = indicator of [-n c, n c], c = x_max/(levels+1), n = 1..levels,
    so every e_n lies in the core.
    """
    if x_max <= 0:
        raise InvalidParameterError("x_max must be positive")
    if points < 3:
        raise InvalidParameterError("need at least 3 grid points")
    grid = Grid(center - x_max, center + x_max, points)
    x = grid.x - center
    half = (points - 1) // 2
    if levels is None:
        levels = max(half - 1, 1)
    step = x_max / (levels + 1)
    slack = 1e-9 * grid.h
    ident = tuple((np.abs(x) <= n * step + slack).astype(complex) for n in range(1, levels + 1))
    w = grid.weights

    def norm(f):
        return float(np.sqrt(np.sum(w * np.abs(f) ** 2)))

    def sample(rng, core=False):
        f = linalg.random_complex(rng, points)
        if core:
            f[0] = f[-1] = 0
        return f

    return AlgebraModel(
        name=f"grid_l2(x_max={x_max:g}, points={points})", kind="grid-function", shape=(points,),
        norm_fn=norm, norm_name="L2 (trapezoid)", mul_fn=np.multiply, adjoint_fn=np.conj,
        core_fn=lambda f: f[0] == 0 and f[-1] == 0, identity=ident, sampler=sample,
        params={"x_max": x_max, "points": points, "levels": levels, "grid": grid,
                "cutoff_step": step, "center": center},
    )


def seq_norm(f) -> float:
    """Hilbert-module norm of l^2(C(Omega)): sup over the grid of (sum_n |f_n|^2)^(1/2)."""
    f = np.asarray(f)
    return float(np.sqrt(np.max(np.sum(np.abs(f) ** 2, axis=0))))


def make_seqfun_model(grid: Grid, N: int) -> AlgebraModel:
    """l^2(C(Omega)) truncated to length-N sequences of grid functions."""
    if N < 1:
        raise InvalidParameterError("N must be >= 1")
    shape = (N, grid.points)
    ident = []
    for m in range(1, N + 1):
        e = np.zeros(shape, dtype=complex)
        e[:m] = 1.0
        ident.append(e)

    def sample(rng, core=False):
        return linalg.random_complex(rng, shape)

    return AlgebraModel(
        name=f"seqfun(N={N}, points={grid.points})", kind="sequence-of-grid-functions", shape=shape,
        norm_fn=seq_norm, norm_name="sup_x l2 (Hilbert module)", mul_fn=np.multiply,
        adjoint_fn=np.conj, core_fn=lambda f: True, identity=tuple(ident), sampler=sample,
        params={"N": N, "grid": grid},
    )


def check_nested(projections, tol: float = 1e-12) -> float:
    """Largest ||P_m P_k - P_m|| (m <= k) plus projection defects; raises if not nested."""
    worst = 0.0
    for m, P in enumerate(projections):
        worst = max(worst, linalg.op_norm(P @ P - P), linalg.op_norm(P - linalg.adjoint(P)))
        for Q in projections[m:]:
            worst = max(worst, linalg.op_norm(P @ Q - P))
    if worst > tol:
        raise InvalidIdentityError(f"projection family is not nested (defect {worst:.3g})")
    return worst


def make_cstar_matrix_model(n: int) -> AlgebraModel:
    """The C*-algebra M_n with the operator norm and the diagonal projections."""
    if n < 1:
        raise InvalidParameterError("n must be >= 1")
    ident = tuple(linalg.diagonal_projection(n, m) for m in range(1, n + 1))
    return AlgebraModel(
        name=f"matrix(n={n}, operator norm)", kind="matrix", shape=(n, n),
        norm_fn=linalg.op_norm, norm_name="operator", mul_fn=np.matmul,
        adjoint_fn=linalg.adjoint, core_fn=lambda a: True, identity=ident,
        sampler=_matrix_sampler(n), params={"n": n},
    )


def make_ncl2_model(n: int, projections=None, nest_tol: float = 1e-10) -> AlgebraModel:
    """(L^2(rho), L^2 cap L^inf) for rho = trace on n x n matrices (Frobenius norm)."""
    if n < 1:
        raise InvalidParameterError("n must be >= 1")
    if projections is None:
        projections = [linalg.diagonal_projection(n, m) for m in range(1, n + 1)]
    projections = [np.asarray(P, dtype=complex) for P in projections]
    check_nested(projections, nest_tol)
    return AlgebraModel(
        name=f"ncl2(n={n})", kind="matrix", shape=(n, n),
        norm_fn=lambda a: linalg.schatten_norm(a, 2), norm_name="L2(trace) = Frobenius",
        mul_fn=np.matmul, adjoint_fn=linalg.adjoint, core_fn=lambda a: True,
        identity=tuple(projections), sampler=_matrix_sampler(n), params={"n": n},
    )


@dataclass
class ProjectorSequence:
    cutoffs: list
    projections: list
    residuals: list
    bounds: list
    monotone: bool
    bound_ok: bool


def projector_sequence(W, p: float = 2.0, cutoffs=None, levels: int = 20,
                       tol: float = 1e-10) -> ProjectorSequence:
    """Spectral-cutoff projections P_n = E_W((c_n, inf)) and residuals ||W(I - P_n)||_p.

    Default cutoffs are c_n = 1/n, n = 1..levels.  The bound attached to each
    residual is c_n * (number of eigenvalues <= c_n)^(1/p).
    """
    W = linalg.as_matrix(W)
    if not linalg.is_psd(W, tol):
        raise DomainError("projector_sequence requires W >= 0")
    if cutoffs is None:
        cutoffs = [1.0 / k for k in range(1, levels + 1)]
    cutoffs = [float(c) for c in cutoffs]
    if any(c <= 0 for c in cutoffs) or any(b >= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise InvalidParameterError("cutoffs must be positive and strictly decreasing")
    n = W.shape[0]
    lam = np.linalg.eigvalsh(linalg.hermitian_part(W))
    I = np.eye(n)
    projections, residuals, bounds = [], [], []
    for c in cutoffs:
        P = linalg.spectral_cut(W, c).projection
        projections.append(P)
        residuals.append(linalg.schatten_norm(W @ (I - P), p))
        below = int(np.sum(lam <= c + linalg.TIE_TOL))
        bounds.append(c * below ** (1.0 / p) if not np.isinf(p) else (c if below else 0.0))
    slack = 1e-12 * max(1.0, residuals[0] if residuals else 0.0)
    monotone = all(b <= a + slack for a, b in zip(residuals, residuals[1:]))
    bound_ok = all(r <= bd + slack for r, bd in zip(residuals, bounds))
    return ProjectorSequence(cutoffs, projections, residuals, bounds, monotone, bound_ok)


@dataclass
class ApproximateIdentityReport:
    mode: str
    residuals: np.ndarray
    idempotency_defects: np.ndarray
    monotone_from: list
    final_residuals: np.ndarray
    tol: float

    @property
    def idempotent(self) -> bool:
        return bool(np.max(self.idempotency_defects, initial=0.0) <= 1e-12)

    @property
    def converged(self) -> bool:
        return bool(np.all(self.final_residuals <= self.tol))

    @property
    def passed(self) -> bool:
        return self.idempotent and self.converged

    def to_dict(self) -> dict:
        return {"mode": self.mode, "residuals": self.residuals.tolist(),
                "max_idempotency_defect": float(np.max(self.idempotency_defects, initial=0.0)),
                "monotone_from": self.monotone_from,
                "final_residuals": self.final_residuals.tolist(), "tol": self.tol,
                "passed": self.passed}


def _monotone_from(r: np.ndarray, rtol: float = 1e-12) -> int:
    """Smallest index after which r is non-increasing."""
    slack = rtol * max(1.0, float(np.max(r, initial=0.0)))
    i = len(r) - 1
    while i > 0 and r[i] <= r[i - 1] + slack:
        i -= 1
    return i


def check_approximate_identity(model: AlgebraModel, panel, form: PosSesqForm | None = None,
                               tol: float = 1e-10) -> ApproximateIdentityReport:
    """Residuals r_m(a) = ||a - a e_m|| (or the S-quasi-norm variant) for each panel element."""
    ident = model.identity
    res = np.zeros((len(panel), len(ident)))
    for i, a in enumerate(panel):
        for m, e in enumerate(ident):
            d = a - model.mul(a, e)
            res[i, m] = model.norm(d) if form is None else quasi_norm(form, d)
    k = len(ident)
    idem = np.zeros((k, k))
    for m in range(k):
        for n in range(m, k):
            idem[m, n] = model.norm(model.mul(ident[m], ident[n]) - ident[m])
    return ApproximateIdentityReport(
        mode="norm" if form is None else f"form:{form.name}", residuals=res,
        idempotency_defects=idem, monotone_from=[_monotone_from(r) for r in res],
        final_residuals=res[:, -1] if k else np.zeros(len(panel)), tol=tol)


@dataclass
class ModelAxiomReport:
    adjoint_norm_defect: float
    involution_defect: float
    associativity_defect: float
    nesting_defect: float
    right_mult_ratio: float

    @property
    def passed(self) -> bool:
        return (self.adjoint_norm_defect <= 1e-10 and self.involution_defect <= 1e-10
                and self.associativity_defect <= 1e-10 and self.nesting_defect <= 1e-12
                and self.right_mult_ratio <= 1 + 1e-10)


def check_model_axioms(model: AlgebraModel, rng: np.random.Generator,
                       samples: int = 20) -> ModelAxiomReport:
    """Quasi *-algebra axioms on random samples, nesting, and ||a e_m|| <= ||a||."""
    adj = inv = assoc = ratio = 0.0
    for _ in range(samples):
        a = model.sample(rng)
        x, y = model.sample(rng, core=True), model.sample(rng, core=True)
        na = model.norm(a)
        adj = max(adj, abs(model.norm(model.adjoint(a)) - na) / max(1.0, na))
        lhs = model.adjoint(model.mul(a, x))
        rhs = model.mul(model.adjoint(x), model.adjoint(a))
        inv = max(inv, float(np.max(np.abs(lhs - rhs))) / max(1.0, model.norm(lhs)))
        xa_y = model.mul(model.mul(x, a), y)
        x_ay = model.mul(x, model.mul(a, y))
        assoc = max(assoc, float(np.max(np.abs(xa_y - x_ay))) / max(1.0, model.norm(xa_y)))
        for e in model.identity:
            if na > 0:
                ratio = max(ratio, model.norm(model.mul(a, e)) / na)
    nest = 0.0
    ident = model.identity
    for m in range(len(ident)):
        for n in range(m, len(ident)):
            nest = max(nest, float(np.max(np.abs(model.mul(ident[m], ident[n]) - ident[m]))))
    return ModelAxiomReport(adj, inv, assoc, nest, ratio)
