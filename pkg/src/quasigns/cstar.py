"""Values in the codomain C*-algebra and positive sesquilinear C-valued maps.

Three codomains are modelled:

* ``scalar``  -- the complex numbers,
* ``func``    -- continuous functions sampled on a uniform :class:`Grid`
  (samples are complex numbers, or d x d matrices for C(Omega; M_d)),
* ``mat``     -- the full matrix algebra M_d.

Norms are the C*-norms (modulus, grid supremum, operator norm) and the cone
test is pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import linalg
from .errors import FormNotPositiveError, InvalidParameterError, SamplingError

SCALAR, FUNC, MAT = "scalar", "func", "mat"


@dataclass(frozen=True)
class Grid:
    start: float
    end: float
    points: int

    def __post_init__(self):
        if self.points < 2:
            raise InvalidParameterError("a grid needs at least 2 points")
        if not self.start < self.end:
            raise InvalidParameterError("grid start must be below grid end")

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.start, self.end, self.points)

    @property
    def h(self) -> float:
        return (self.end - self.start) / (self.points - 1)

    @property
    def weights(self) -> np.ndarray:
        w = np.full(self.points, self.h)
        w[0] = w[-1] = self.h / 2
        return w

    def integrate(self, samples, axis: int = 0) -> np.ndarray:
        """Trapezoidal integral of ``samples`` along ``axis``."""
        return np.tensordot(self.weights, np.asarray(samples), axes=([0], [axis]))

    def refine(self, factor: int = 2) -> "Grid":
        return Grid(self.start, self.end, factor * (self.points - 1) + 1)

    def to_dict(self) -> dict:
        return {"start": self.start, "end": self.end, "points": self.points}


class CStarValue:
    """An element of the codomain C*-algebra."""

    __slots__ = ("kind", "data", "grid")

    def __init__(self, kind: str, data, grid: Grid | None = None):
        data = np.asarray(data, dtype=complex)
        if kind == SCALAR:
            data = data.reshape(())
        elif kind == FUNC:
            if grid is None:
                raise InvalidParameterError("function values need a grid")
            if data.ndim not in (1, 3) or data.shape[0] != grid.points:
                raise InvalidParameterError(f"samples of shape {data.shape} do not fit {grid}")
            if data.ndim == 3 and data.shape[1] != data.shape[2]:
                raise InvalidParameterError("matrix samples must be square")
        elif kind == MAT:
            if data.ndim != 2 or data.shape[0] != data.shape[1]:
                raise InvalidParameterError("matrix values must be square")
        else:
            raise InvalidParameterError(f"unknown codomain kind {kind!r}")
        self.kind = kind
        self.data = data
        self.grid = grid

    @classmethod
    def scalar(cls, z) -> "CStarValue":
        return cls(SCALAR, z)

    @classmethod
    def func(cls, samples, grid: Grid) -> "CStarValue":
        return cls(FUNC, samples, grid)

    @classmethod
    def mat(cls, M) -> "CStarValue":
        return cls(MAT, M)

    @property
    def matrix_samples(self) -> bool:
        return self.kind == FUNC and self.data.ndim == 3

    def _like(self, data) -> "CStarValue":
        return CStarValue(self.kind, data, self.grid)

    def star(self) -> "CStarValue":
        if self.kind == MAT:
            return self._like(self.data.conj().T)
        if self.matrix_samples:
            return self._like(np.conj(np.swapaxes(self.data, 1, 2)))
        return self._like(np.conj(self.data))

    def _check(self, other: "CStarValue"):
        if other.kind != self.kind or other.data.shape != self.data.shape:
            raise InvalidParameterError("C*-values from different codomains")

    def __add__(self, other):
        self._check(other)
        return self._like(self.data + other.data)

    def __sub__(self, other):
        self._check(other)
        return self._like(self.data - other.data)

    def __neg__(self):
        return self._like(-self.data)

    def __mul__(self, alpha):
        return self._like(self.data * alpha)

    __rmul__ = __mul__

    def norm(self) -> float:
        return cnorm(self)

    def tau(self) -> complex:
        """Faithful positive functional used to scalarise Gram matrices."""
        if self.kind == SCALAR:
            return complex(self.data)
        if self.kind == MAT:
            return complex(np.trace(self.data))
        if self.matrix_samples:
            return complex(np.trace(self.data, axis1=1, axis2=2).sum())
        return complex(self.data.sum())

    def is_positive(self, tol: float = 1e-10) -> bool:
        """Membership in the positive cone, with ``tol`` scaled by max(1, norm)."""
        return self.positive_norm(tol)[0]

    def positive_norm(self, tol: float = 1e-10) -> tuple[bool, float]:
        """(in the positive cone, C*-norm), sharing one eigen-decomposition for matrices."""
        d = self.data
        if self.kind == SCALAR or (self.kind == FUNC and d.ndim == 1):
            n = float(np.max(np.abs(d)))
            t = tol * max(1.0, n)
            return bool(np.all(d.real >= -t) and np.all(np.abs(d.imag) <= t)), n
        mats = d[None] if self.kind == MAT else d
        herm = (mats + np.conj(np.swapaxes(mats, 1, 2))) / 2
        lam = np.linalg.eigvalsh(herm)
        hn = float(np.max(np.abs(lam)))
        t = tol * max(1.0, hn)
        if np.max(np.abs(mats - herm), initial=0.0) > t:
            return False, cnorm(self)
        return bool(lam[:, 0].min() >= -t), hn

    def to_json(self) -> Any:
        if self.kind == SCALAR:
            z = complex(self.data)
            return [z.real, z.imag]
        return {"kind": self.kind, "norm": cnorm(self)}

    def __repr__(self) -> str:
        return f"CStarValue({self.kind}, shape={self.data.shape}, norm={cnorm(self):.6g})"


def cnorm(v: CStarValue) -> float:
    """C*-norm: modulus, grid supremum, or operator norm."""
    d = v.data
    if v.kind == SCALAR:
        return float(abs(d))
    if v.kind == MAT:
        return linalg.op_norm(d)
    if d.ndim == 1:
        return float(np.max(np.abs(d)))
    return float(np.max(np.linalg.svd(d, compute_uv=False)[:, 0]))


@dataclass(frozen=True)
class Codomain:
    kind: str
    grid: Grid | None = None
    dim: int | None = None

    @property
    def commutative(self) -> bool:
        if self.kind == SCALAR:
            return True
        if self.kind == FUNC:
            return not self.dim or self.dim == 1
        return self.dim == 1

    def zero(self) -> CStarValue:
        if self.kind == SCALAR:
            return CStarValue.scalar(0)
        if self.kind == MAT:
            return CStarValue.mat(np.zeros((self.dim, self.dim)))
        shape = (self.grid.points,) if not self.dim else (self.grid.points, self.dim, self.dim)
        return CStarValue.func(np.zeros(shape), self.grid)

    def describe(self) -> dict:
        out = {"kind": self.kind, "commutative": self.commutative}
        if self.grid is not None:
            out["grid"] = self.grid.to_dict()
        if self.dim:
            out["dim"] = self.dim
        return out


@dataclass
class PosSesqForm:
    """A positive sesquilinear C-valued map, linear in the first slot.

    ``declared_bound`` is the constant M with ||S(c, d)|| <= M ||c|| ||d||
    (or ||omega(d* c)|| <= M ||c|| ||d|| for forms induced by a map), measured
    in the norm named by ``norm_name``.
    """

    name: str
    evaluator: Callable[[Any, Any], CStarValue]
    codomain: Codomain
    declared_bound: float | None = None
    norm_name: str = ""
    meta: dict = field(default_factory=dict)

    def __call__(self, a, b) -> CStarValue:
        return self.evaluator(a, b)

    @property
    def commutative_codomain(self) -> bool:
        return self.codomain.commutative


def quasi_norm(S: PosSesqForm, a, tol: float = 1e-10) -> float:
    """||a||_S = sqrt(||S(a, a)||_C)."""
    ok, n = S(a, a).positive_norm(tol)
    if not ok:
        raise FormNotPositiveError(f"{S.name}: S(a, a) is not in the positive cone")
    return float(np.sqrt(n))


@dataclass
class SchwarzReport:
    lhs: float
    rhs_general: float
    rhs_cs: float
    pass_general: bool
    pass_cs: bool | None

    @property
    def slack_general(self) -> float:
        """Relative slack (rhs - lhs) / rhs of the constant-2 bound."""
        return _relative_slack(self.lhs, self.rhs_general)

    @property
    def slack_cs(self) -> float:
        return _relative_slack(self.lhs, self.rhs_cs)


def _relative_slack(lhs: float, rhs: float) -> float:
    if rhs == 0:
        return 0.0 if lhs == 0 else -np.inf
    return (rhs - lhs) / rhs


def _leq(lhs: float, rhs: float, rtol: float, atol: float) -> bool:
    return lhs <= rhs + rtol * max(abs(rhs), abs(lhs)) + atol


def check_schwarz(S: PosSesqForm, a, b, rtol: float = 1e-9, atol: float = 1e-12) -> SchwarzReport:
    """||S(a,b)|| <= 2 ||a||_S ||b||_S, and the constant-1 version for commutative C."""
    lhs = cnorm(S(a, b))
    rhs_cs = quasi_norm(S, a) * quasi_norm(S, b)
    rhs = 2 * rhs_cs
    cs = _leq(lhs, rhs_cs, rtol, atol) if S.commutative_codomain else None
    return SchwarzReport(lhs, rhs, rhs_cs, _leq(lhs, rhs, rtol, atol), cs)


@dataclass
class TriangleReport:
    lhs: float
    rhs_quasi: float
    rhs_plain: float
    pass_quasi: bool
    pass_plain: bool | None


def check_triangle(S: PosSesqForm, a, b, rtol: float = 1e-9, atol: float = 1e-12) -> TriangleReport:
    """||a+b||_S <= sqrt(2)(||a||_S + ||b||_S); plain triangle when C is commutative."""
    lhs = quasi_norm(S, a + b)
    plain = quasi_norm(S, a) + quasi_norm(S, b)
    rhs = np.sqrt(2) * plain
    ok_plain = _leq(lhs, plain, rtol, atol) if S.commutative_codomain else None
    return TriangleReport(lhs, rhs, plain, _leq(lhs, rhs, rtol, atol), ok_plain)


@dataclass
class InvarianceReport:
    max_defect: float
    max_scale: float
    samples: int
    passed: bool


def check_invariance(S: PosSesqForm, model, samples: int, rng: np.random.Generator,
                     tol: float = 1e-8) -> InvarianceReport:
    """max ||S(a x, y) - S(x, a* y)|| over random a in A and x, y in the core."""
    worst, scale = 0.0, 0.0
    for _ in range(samples):
        a = model.sample(rng)
        x = model.sample(rng, core=True)
        y = model.sample(rng, core=True)
        try:
            left = S(model.mul(a, x), y)
            right = S(x, model.mul(model.adjoint(a), y))
        except (ValueError, TypeError) as exc:
            raise SamplingError(f"module product undefined for sampled triple: {exc}") from exc
        worst = max(worst, cnorm(left - right))
        scale = max(scale, cnorm(left))
    return InvarianceReport(worst, scale, samples, worst <= tol * max(1.0, scale))


@dataclass
class FormAxiomReport:
    sesquilinear_defect: float
    hermitian_defect: float
    min_positive: bool
    passed: bool


def check_form_axioms(S: PosSesqForm, sample: Callable[[np.random.Generator], Any],
                      rng: np.random.Generator, samples: int = 50,
                      tol: float = 1e-9) -> FormAxiomReport:
    """Sampled check of sesquilinearity, Hermitian symmetry and positivity."""
    ses, herm, pos = 0.0, 0.0, True
    for _ in range(samples):
        a, b, c = sample(rng), sample(rng), sample(rng)
        al, be, ga = linalg.random_complex(rng, 3)
        scale = max(1.0, cnorm(S(a, a)), cnorm(S(b, b)), cnorm(S(c, c)))
        lin = S(al * a + be * b, c) - (al * S(a, c) + be * S(b, c))
        anti = S(a, ga * c) - np.conj(ga) * S(a, c)
        ses = max(ses, cnorm(lin) / scale, cnorm(anti) / scale)
        herm = max(herm, cnorm(S(b, a) - S(a, b).star()) / scale)
        pos = pos and S(a, a).is_positive()
    return FormAxiomReport(ses, herm, pos, ses <= tol and herm <= tol and pos)


def combine(basis, coeffs):
    """sum_i coeffs[i] * basis[i] for array-valued elements."""
    return np.tensordot(np.asarray(coeffs), np.asarray(basis), axes=(0, 0))


def scalar_gram(S: PosSesqForm, basis) -> np.ndarray:
    """Hermitian matrix G with tau(S(x, y)) = y^H G x in basis coordinates."""
    n = len(basis)
    G = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            v = S(basis[j], basis[i]).tau()
            G[i, j] = v
            G[j, i] = np.conj(v)
    return G


def null_space(S: PosSesqForm, basis, rel_tol: float = 1e-10, psd_tol: float = 1e-9) -> np.ndarray:
    """Coordinates (rows) of a basis of N_S = {a : S(a, a) = 0}.

    The kernel of the tau-scalarised Gram matrix; tau is faithful on the cone
    so this coincides with the pointwise null space.
    """
    G = scalar_gram(S, basis)
    lam, Q = np.linalg.eigh(G)
    top = max(abs(lam[-1]), abs(lam[0])) if lam.size else 0.0
    if lam.size and lam[0] < -psd_tol * max(1.0, top):
        raise FormNotPositiveError(f"{S.name}: scalarised Gram matrix is not PSD")
    if top == 0:
        return np.eye(len(basis), dtype=complex)
    kernel = lam <= rel_tol * top
    return Q[:, kernel].T.copy()


@dataclass
class PositiveMap:
    """A positive linear C-valued map on a model.

    ``exact_norms`` maps a domain-norm name to the exact operator norm of the
    map for that domain norm, when a closed formula is known.
    """

    name: str
    evaluator: Callable[[Any], CStarValue]
    codomain: Codomain
    model: Any = None
    declared_bound: float | None = None
    norm_name: str = ""
    exact_norms: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __call__(self, a) -> CStarValue:
        return self.evaluator(a)

    @property
    def commutative_codomain(self) -> bool:
        return self.codomain.commutative

    def induced_form(self) -> PosSesqForm:
        """S(a, b) = omega(b* a)."""
        model = self.model
        if model is None:
            raise InvalidParameterError(f"{self.name}: no domain model attached")

        def S(a, b):
            return self.evaluator(model.mul(model.adjoint(b), a))

        return PosSesqForm(f"S[{self.name}]", S, self.codomain, self.declared_bound,
                           self.norm_name, {"induced_by": self.name})

    def __add__(self, other: "PositiveMap") -> "PositiveMap":
        bound = None
        if self.declared_bound is not None and other.declared_bound is not None:
            bound = self.declared_bound + other.declared_bound
        return PositiveMap(f"{self.name}+{other.name}", lambda a: self(a) + other(a),
                           self.codomain, self.model, bound, self.norm_name)


def check_bound(omega: PositiveMap, rng: np.random.Generator, samples: int,
                bound: float | None = None, pairs=None, rtol: float = 1e-9) -> dict:
    """||omega(d* c)|| <= M ||c|| ||d|| on random core pairs (c, d)."""
    model = omega.model
    M = omega.declared_bound if bound is None else bound
    if M is None:
        raise InvalidParameterError(f"{omega.name}: no declared bound")
    if pairs is None:
        pairs = [(model.sample(rng, core=True), model.sample(rng, core=True)) for _ in range(samples)]
    worst = -np.inf
    for c, d in pairs:
        lhs = cnorm(omega(model.mul(model.adjoint(d), c)))
        rhs = M * model.norm(c) * model.norm(d)
        worst = max(worst, (lhs - rhs) / max(rhs, 1e-300))
    return {"bound": M, "samples": len(pairs), "worst_relative_excess": float(worst),
            "passed": bool(worst <= rtol)}
