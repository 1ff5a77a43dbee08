"""Ready-made positive maps and forms: weighted sums, weighted integrals,
kernel integrals (scalar and operator valued), trace maps on Schatten classes
and the L^2-of-a-trace example with its functional-calculus weights.

Each constructor returns a :class:`PositiveMap` or :class:`PosSesqForm`
wired to a model and carrying its boundedness constant M, so that
``||omega(d* c)|| <= M ||c|| ||d||`` can be checked on random pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .cstar import (
    FUNC,
    MAT,
    SCALAR,
    Codomain,
    CStarValue,
    Grid,
    PositiveMap,
    PosSesqForm,
    check_bound,
    check_invariance,
    cnorm,
)
from .errors import (
    DomainError,
    InconsistentInputError,
    InvalidKernelError,
    InvalidParameterError,
    InvalidWeightError,
    ShapeError,
)
from .models import (
    AlgebraModel,
    make_cstar_matrix_model,
    make_grid_l2_model,
    make_ncl2_model,
    make_schatten_model,
    make_seqfun_model,
    seq_norm,
)

NEG_TOL = 1e-12


def _finite(a, what: str) -> np.ndarray:
    a = np.asarray(a)
    if not np.all(np.isfinite(a)):
        raise InvalidParameterError(f"{what} has non-finite samples")
    return a


# ---------------------------------------------------------------- trace maps

def trace_map(W, model: AlgebraModel) -> PositiveMap:
    """omega(A) = tr(A W) on a matrix model, scalar valued.

    Exact norms: tr W on the operator-norm domain and ||W||_q (1/p + 1/q = 1)
    on the Schatten-p domain.  The bound M for ||omega(d* c)|| is tr W, resp.
    ||W||_r with r the conjugate exponent of p/2 (||W||_inf when p <= 2).
    """
    W = linalg.as_matrix(W)
    if not linalg.is_psd(W):
        raise DomainError("trace_map needs W >= 0")
    trW = float(np.trace(W).real)
    exact = {"operator": trW}
    p = model.params.get("p")
    if model.norm_name == "operator":
        bound = trW
    elif p is not None:
        exact[model.norm_name] = linalg.schatten_norm(W, linalg.conjugate_exponent(p))
        bound = linalg.schatten_norm(W, linalg.conjugate_exponent(p / 2) if p > 2 else np.inf)
    else:
        exact[model.norm_name] = linalg.schatten_norm(W, 2)
        bound = linalg.op_norm(W)

    def omega(A):
        return CStarValue.scalar(np.sum(np.asarray(A) * W.T))

    return PositiveMap("trace(. W)", omega, Codomain(SCALAR), model, bound, model.norm_name,
                       exact, {"trace_W": trW})


# ------------------------------------------------------------- weighted sums

def weighted_sum_map(w, model: AlgebraModel) -> PositiveMap:
    """omega(f_1, f_2, ...) = sum_n w_n f_n on l^2(C(Omega)); M = ||{w_n}||_2.

    The bound is also the exact norm: pointwise Cauchy-Schwarz is attained.
    """
    w = _finite(np.asarray(w, dtype=float), "weight")
    if w.shape != model.shape:
        raise ShapeError(f"weights of shape {w.shape} do not match {model.shape}")
    if np.any(w < -NEG_TOL):
        raise InvalidWeightError("weight functions must be nonnegative")
    grid = model.params["grid"]
    M = seq_norm(w)

    def omega(f):
        return CStarValue.func(np.sum(w * np.asarray(f), axis=0), grid)

    return PositiveMap("weighted sum", omega, Codomain(FUNC, grid), model, M, model.norm_name,
                       {model.norm_name: M})


def weighted_form(v, model: AlgebraModel) -> PosSesqForm:
    """S(f, g) = int f conj(g) v dt by the trapezoid rule; M = sup v."""
    v = _finite(np.asarray(v, dtype=float), "weight")
    if v.shape != model.shape:
        raise ShapeError(f"weight of shape {v.shape} does not match {model.shape}")
    if np.any(v < -NEG_TOL):
        raise InvalidWeightError("weight must be nonnegative")
    wv = model.params["grid"].weights * v

    def S(f, g):
        return CStarValue.scalar(np.sum(wv * np.asarray(f) * np.conj(g)))

    return PosSesqForm("weighted L2", S, Codomain(SCALAR), float(np.max(v)), model.norm_name)


def weighted_form_map(v, model: AlgebraModel) -> PositiveMap:
    """The linear map behind :func:`weighted_form`: omega(h) = int h v dt."""
    S = weighted_form(v, model)
    wv = model.params["grid"].weights * np.asarray(v, dtype=float)

    def omega(h):
        return CStarValue.scalar(np.sum(wv * np.asarray(h)))

    return PositiveMap("weighted integral", omega, S.codomain, model, S.declared_bound,
                       model.norm_name)


# ----------------------------------------------------------------- kernels

@dataclass
class KernelSpec:
    """Kernel samples k[x_i, t_j] (scalar) or K[x_i, t_j] (d x d matrices)."""

    kind: str
    x_grid: Grid
    t_grid: Grid
    samples: np.ndarray
    dx_samples: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.samples = _finite(np.asarray(self.samples, dtype=complex), "kernel")
        lead = (self.x_grid.points, self.t_grid.points)
        if self.samples.shape[:2] != lead:
            raise ShapeError(f"kernel samples {self.samples.shape} do not fit grids {lead}")
        if self.kind == "scalar":
            if self.samples.ndim != 2:
                raise ShapeError("scalar kernel samples must be 2-d")
        elif self.kind == "operator":
            s = self.samples.shape
            if self.samples.ndim != 4 or s[2] != s[3]:
                raise ShapeError("operator kernel values must be square matrices")
        else:
            raise InvalidParameterError(f"unknown kernel kind {self.kind!r}")
        if self.dx_samples is not None:
            self.dx_samples = _finite(np.asarray(self.dx_samples, dtype=complex), "kernel derivative")
            if self.dx_samples.shape != self.samples.shape:
                raise ShapeError("derivative samples must match kernel samples")

    @classmethod
    def sample(cls, k, x_grid: Grid, t_grid: Grid, dk=None, kind: str = "scalar") -> "KernelSpec":
        """Sample callables k(x, t) (and dk = d/dx k) on the grid product."""
        X, T = np.meshgrid(x_grid.x, t_grid.x, indexing="ij")
        ks = np.asarray(k(X, T))
        dks = None if dk is None else np.asarray(dk(X, T))
        return cls(kind, x_grid, t_grid, ks, dks)

    @property
    def dim(self) -> int:
        return 1 if self.kind == "scalar" else self.samples.shape[2]

    @property
    def nonnegative(self) -> bool:
        """Scalar kernel: real and >= 0 at every sample."""
        if self.kind != "scalar":
            return False
        k = self.samples
        return bool(np.all(np.abs(k.imag) <= NEG_TOL) and np.all(k.real >= -NEG_TOL))

    @property
    def positive_action(self) -> bool:
        """K(x, t) f f* >= 0 for every f: holds iff each K(x, t) = c I with c >= 0."""
        if self.kind == "scalar":
            return self.nonnegative
        K = self.samples
        d = K.shape[2]
        c = np.trace(K, axis1=2, axis2=3) / d
        off = K - c[..., None, None] * np.eye(d)
        scale = max(1.0, float(np.max(np.abs(K), initial=0.0)))
        return bool(np.max(np.abs(off), initial=0.0) <= 1e-12 * scale
                    and np.all(np.abs(c.imag) <= 1e-12 * scale) and np.all(c.real >= -NEG_TOL))

    def sup_norms(self) -> np.ndarray:
        """sup_t ||K(x, t)|| for each x sample."""
        if self.kind == "scalar":
            return np.max(np.abs(self.samples), axis=1)
        return np.max(np.linalg.svd(self.samples, compute_uv=False)[..., 0], axis=1)


def _kernel_model(spec: KernelSpec) -> AlgebraModel:
    g = spec.t_grid
    half = (g.end - g.start) / 2
    return make_grid_l2_model(half, g.points, center=g.start + half)


def kernel_form(spec: KernelSpec, model: AlgebraModel | None = None) -> PosSesqForm:
    """S_k(f, g)(x) = int k(x, t) f(t) conj(g(t)) dt, a function of x."""
    if spec.kind != "scalar":
        raise InvalidParameterError("kernel_form needs a scalar kernel")
    model = model or _kernel_model(spec)
    kw = spec.samples * spec.t_grid.weights
    xg = spec.x_grid

    def S(f, g):
        return CStarValue.func(kw @ (np.asarray(f) * np.conj(g)), xg)

    bound = float(np.max(spec.sup_norms()))
    return PosSesqForm("kernel integral", S, Codomain(FUNC, xg), bound, model.norm_name,
                       {"model": model, "nonnegative_kernel": spec.nonnegative})


def theta_map(spec: KernelSpec, w, model: AlgebraModel | None = None) -> PositiveMap:
    """theta(f)(x) = int k(x, t) w(t) f(t) dt; M = sup|k| sup w on the L^2 domain."""
    if spec.kind != "scalar":
        raise InvalidParameterError("theta_map needs a scalar kernel")
    if not spec.nonnegative:
        raise InvalidKernelError("theta needs a nonnegative kernel")
    w = _finite(np.asarray(w, dtype=float), "weight")
    if w.shape != (spec.t_grid.points,):
        raise ShapeError("weight must be sampled on the t-grid")
    if np.any(w < -NEG_TOL):
        raise InvalidWeightError("weight must be nonnegative")
    model = model or _kernel_model(spec)
    kw = spec.samples * (spec.t_grid.weights * w)
    xg = spec.x_grid

    def theta(f):
        return CStarValue.func(kw @ np.asarray(f), xg)

    bound = float(np.max(spec.sup_norms()) * np.max(w, initial=0.0))
    return PositiveMap("theta", theta, Codomain(FUNC, xg), model, bound, model.norm_name)


def operator_kernel_form(spec: KernelSpec) -> PosSesqForm:
    """S_K(f, g)(x) = int K(x, t) f(t) g(t)* dt for matrix-valued f, g."""
    if spec.kind != "operator":
        raise InvalidParameterError("operator_kernel_form needs an operator kernel")
    xg, d = spec.x_grid, spec.dim

    def S(f, g):
        f, g = _matrix_function(f, spec), _matrix_function(g, spec)
        return CStarValue.func(_kernel_apply(spec, f @ np.conj(np.swapaxes(g, 1, 2))), xg)

    return PosSesqForm("operator kernel integral", S, Codomain(FUNC, xg, d),
                       float(np.max(spec.sup_norms())), "L2 (Bochner, operator norm)",
                       {"positive_action": spec.positive_action})


def _kernel_apply(spec: KernelSpec, h) -> np.ndarray:
    """x -> sum_t w_t K(x, t) h(t) as one matrix product."""
    nx, nt, d, _ = spec.samples.shape
    if "flat" not in spec.meta:
        Kw = spec.samples * spec.t_grid.weights[None, :, None, None]
        spec.meta["flat"] = np.ascontiguousarray(Kw.transpose(0, 2, 1, 3)).reshape(nx * d, nt * d)
    return (spec.meta["flat"] @ h.reshape(nt * d, -1)).reshape(nx, d, -1)


def _matrix_function(f, spec: KernelSpec) -> np.ndarray:
    f = np.asarray(f, dtype=complex)
    d = spec.dim
    if f.shape != (spec.t_grid.points, d, d):
        raise ShapeError(f"expected samples of shape {(spec.t_grid.points, d, d)}, got {f.shape}")
    return f


def bochner_l2(f, grid: Grid) -> float:
    """(int ||f(t)||^2 dt)^(1/2) with the operator norm pointwise."""
    s = np.linalg.svd(np.asarray(f), compute_uv=False)[:, 0]
    return float(np.sqrt(grid.integrate(s**2)))


@dataclass
class DerivativeCheck:
    max_defect: float
    h: float
    scale: float

    def to_dict(self) -> dict:
        return {"max_defect": self.max_defect, "h": self.h, "scale": self.scale}


def derivative_check(spec: KernelSpec, f, g) -> DerivativeCheck:
    """Central differences of x -> S_K(f, g)(x) against the quadrature of dK/dx f g*."""
    if spec.dx_samples is None:
        raise InvalidParameterError("derivative_check needs dx samples")
    S = operator_kernel_form(spec) if spec.kind == "operator" else kernel_form(spec)
    vals = S(f, g).data
    h = spec.x_grid.h
    fd = (vals[2:] - vals[:-2]) / (2 * h)
    dspec = KernelSpec(spec.kind, spec.x_grid, spec.t_grid, spec.dx_samples)
    dS = operator_kernel_form(dspec) if spec.kind == "operator" else kernel_form(dspec)
    exact = dS(f, g).data[1:-1]
    diff = (fd - exact).reshape(len(fd), -1)
    scale = float(np.max(np.abs(exact), initial=0.0))
    return DerivativeCheck(float(np.max(np.abs(diff), initial=0.0)), h, scale)


@dataclass
class RefinementStudy:
    hs: list
    defects: list
    slope: float

    def to_dict(self) -> dict:
        return {"h": self.hs, "defects": self.defects, "slope": self.slope}


def richardson_slope(k, dk, x_grid: Grid, t_grid: Grid, f, g, levels: int = 3,
                     kind: str = "operator") -> RefinementStudy:
    """Derivative defect under repeated 2x refinement of the x-grid.

    ``f`` and ``g`` are callables of t; the slope is the least-squares fit of
    log2(defect) against log2(h).
    """
    hs, defects = [], []
    xg = x_grid
    fs, gs = np.asarray(f(t_grid.x)), np.asarray(g(t_grid.x))
    for _ in range(levels):
        spec = KernelSpec.sample(k, xg, t_grid, dk, kind)
        chk = derivative_check(spec, fs, gs)
        hs.append(chk.h)
        defects.append(chk.max_defect)
        xg = xg.refine(2)
    slope = float(np.polyfit(np.log2(hs), np.log2(defects), 1)[0])
    return RefinementStudy(hs, defects, slope)


@dataclass
class OmegaKReport:
    values: CStarValue
    bound_ratio: float
    positive: bool | None
    c0_range: bool

    def to_dict(self) -> dict:
        return {"bound_ratio": self.bound_ratio, "positive": self.positive,
                "c0_range": self.c0_range}


def omega_K(spec: KernelSpec, c, d=None, tol: float = 1e-8) -> OmegaKReport:
    """omega_K(c d)(x) = int K(x, t) c(t) d(t) dt.

    With d omitted, d = c* and the bound ||omega_K(c c*)(x)|| <=
    sup_t ||K(x, t)|| ||c||_2^2 is measured (ratio <= 1 expected); positivity
    is tested when the kernel's positive-action flag is set.
    """
    if spec.kind != "operator":
        raise InvalidParameterError("omega_K needs an operator kernel")
    c = _matrix_function(c, spec)
    square = d is None
    d = np.conj(np.swapaxes(c, 1, 2)) if square else _matrix_function(d, spec)
    vals = CStarValue.func(_kernel_apply(spec, c @ d), spec.x_grid)
    sup = spec.sup_norms()
    ratio = 0.0
    positive = None
    if square:
        norms = np.linalg.svd(vals.data, compute_uv=False)[:, 0]
        bound = sup * bochner_l2(c, spec.t_grid) ** 2
        ratio = float(np.max(norms / np.maximum(bound, 1e-300)))
        if spec.positive_action:
            positive = vals.is_positive()
    top = float(np.max(sup, initial=0.0))
    c0 = bool(max(sup[0], sup[-1]) <= tol * max(1.0, top))
    return OmegaKReport(vals, ratio, positive, c0)


# --------------------------------------------------------- Schatten trace map

def schatten_trace_map(lam, g, grid: Grid, model: AlgebraModel) -> PositiveMap:
    """omega(A)(t) = tr(A W_t), W_t = sum_j lam_j g_j(t) <., e_j> e_j.

    M = max_t ||lam g(t)||_{p/(p-2)} (Hoelder twice); the exact norm on the
    Schatten-p domain is max_t ||lam g(t)||_{p/(p-1)}.
    """
    p = model.params.get("p")
    if p is None or not p > 2:
        raise InvalidParameterError("schatten_trace_map needs a Schatten model with p > 2")
    lam = _finite(np.asarray(lam, dtype=float), "lambda")
    n = model.shape[0]
    if lam.shape != (n,):
        raise ShapeError(f"need {n} eigenvalue weights")
    if np.any(lam <= 0) or np.any(np.diff(lam) >= 0):
        raise InvalidParameterError("lambda must be positive and strictly decreasing")
    g = _finite(np.asarray(g, dtype=float), "g")
    if g.shape != (n, grid.points):
        raise ShapeError(f"g must have shape {(n, grid.points)}")
    if np.any(g < -NEG_TOL) or np.any(np.diff(g, axis=0) > NEG_TOL):
        raise InvalidParameterError("g must be nonnegative and pointwise non-increasing in j")
    weights = lam[:, None] * g  # (n, points): eigenvalues of W_t

    def omega(A):
        return CStarValue.func(np.diagonal(np.asarray(A)) @ weights, grid)

    def lp(q):
        if np.isinf(q):
            return float(np.max(weights))
        return float(np.max(np.sum(weights**q, axis=0) ** (1 / q)))

    M = lp(p / (p - 2))
    exact = {model.norm_name: lp(p / (p - 1))}
    return PositiveMap("schatten trace", omega, Codomain(FUNC, grid), model, M, model.norm_name,
                       exact, {"lambda_family": "finite truncation of a sequence in l_{p/(p-1)} "
                               "and l_{p/(p-2)}"})


# ----------------------------------------------------- L^2(trace) example

@dataclass
class Ncl2Map:
    """omega(A)(x) = tr(A((I-P)W + W_x)), W_x = f_x(WP), f_x(t) = k(x, t)."""

    omega: PositiveMap
    P: np.ndarray
    WP: np.ndarray
    B: np.ndarray  # (nx, n, n): (I-P)W + W_x
    tie_warning: str | None

    def __call__(self, A) -> CStarValue:
        return self.omega(A)

    def theta_GP(self, X, A_t) -> CStarValue:
        """int_0^{||WP||} omega(X)(t) A_t dt by the trapezoid rule (matrix valued)."""
        A_t = np.asarray(A_t, dtype=complex)
        grid = self.omega.codomain.grid
        if A_t.ndim != 3 or A_t.shape[0] != grid.points or A_t.shape[1] != A_t.shape[2]:
            raise ShapeError("A_t must be a (points, d, d) panel on the x-grid")
        w = self.omega(X).data
        return CStarValue.mat(np.tensordot(grid.weights * w, A_t, axes=(0, 0)))

    def theta_GP_map(self, A_t) -> PositiveMap:
        A_t = np.asarray(A_t, dtype=complex)
        grid = self.omega.codomain.grid
        wmax = float(np.max(np.linalg.svd(A_t, compute_uv=False)[:, 0]))
        length = grid.end - grid.start
        bound = None if self.omega.declared_bound is None else self.omega.declared_bound * length * wmax
        return PositiveMap("theta (matrix valued)", lambda X: self.theta_GP(X, A_t),
                           Codomain(MAT, dim=A_t.shape[1]), self.omega.model, bound,
                           self.omega.norm_name)

    def tilde_theta(self, X) -> "DiagonalMultiplier":
        return DiagonalMultiplier(self.omega(X))


@dataclass
class DiagonalMultiplier:
    """(f_1, f_2, ...) -> (s f_1, s f_2, ...) on truncated l^2(C(Omega))."""

    symbol: CStarValue

    def apply(self, f) -> np.ndarray:
        return self.symbol.data[None, :] * np.asarray(f)

    def norm(self) -> float:
        return cnorm(self.symbol)

    def adjoint(self) -> "DiagonalMultiplier":
        return DiagonalMultiplier(self.symbol.star())


def module_inner(f, g, grid: Grid) -> CStarValue:
    """<f, g> = sum_n f_n conj(g_n), a function on the grid."""
    return CStarValue.func(np.sum(np.asarray(f) * np.conj(g), axis=0), grid)


def adjointability_defect(ncl2: Ncl2Map, X, f, g) -> float:
    """||<tt(X) f, g> - <f, tt(X*) g>|| for the sequence multiplier tt."""
    grid = ncl2.omega.codomain.grid
    T, Ts = ncl2.tilde_theta(X), ncl2.tilde_theta(linalg.adjoint(X))
    return cnorm(module_inner(T.apply(f), g, grid) - module_inner(f, Ts.apply(g), grid))


def ncl2_map(W, cutoff: float, kernel: KernelSpec, model: AlgebraModel | None = None,
             rtol: float = 1e-9) -> Ncl2Map:
    """Build omega with x-grid = kernel.x_grid = [0, ||WP||].

    Exact norm on the Frobenius domain is max_x ||B_x||_2 and the bound for
    omega(d* c) is M = max_x ||B_x||_inf.
    """
    W = linalg.as_matrix(W)
    if not linalg.is_psd(W):
        raise DomainError("W must be PSD")
    if kernel.kind != "scalar":
        raise InvalidParameterError("ncl2_map needs a scalar kernel")
    if not kernel.nonnegative:
        raise InvalidKernelError("kernel has negative samples")
    n = W.shape[0]
    cut = linalg.spectral_cut(W, cutoff)
    P = cut.projection
    if linalg.op_norm(P @ W - W @ P) > 1e-10 * max(1.0, linalg.op_norm(W)):
        raise InconsistentInputError("P does not commute with W")
    WP = linalg.hermitian_part(W @ P)
    top = linalg.op_norm(WP)
    for g in (kernel.x_grid, kernel.t_grid):
        if abs(g.start) > rtol * max(1.0, top) or abs(g.end - top) > rtol * max(1.0, top):
            raise InvalidParameterError(f"kernel grids must span [0, ||WP||] = [0, {top:.12g}]")
    lam, Q = linalg.eigh(WP)
    lam = np.clip(lam, 0.0, None)
    t = kernel.t_grid.x
    k = kernel.samples.real
    fx = np.array([np.interp(lam, t, k[i]) for i in range(kernel.x_grid.points)])  # (nx, n)
    Wx = np.einsum("ij,xj,kj->xik", Q, fx, np.conj(Q))
    rest = linalg.hermitian_part((np.eye(n) - P) @ W)
    B = rest[None] + Wx
    B = (B + np.conj(np.swapaxes(B, 1, 2))) / 2
    model = model or make_ncl2_model(n)
    xg = kernel.x_grid

    def omega(A):
        return CStarValue.func(np.einsum("ij,xji->x", np.asarray(A), B), xg)

    M = float(np.max(np.linalg.svd(B, compute_uv=False)[:, 0]))
    exact = {model.norm_name: float(np.max(np.sqrt(np.sum(np.abs(B) ** 2, axis=(1, 2)))))}
    om = PositiveMap("ncl2 trace", omega, Codomain(FUNC, xg), model, M, model.norm_name, exact,
                     {"cutoff": cutoff, "rank_P": cut.rank})
    return Ncl2Map(om, P, WP, B, cut.warning)


def genint_check(kernel: KernelSpec, f, g) -> float:
    """Diagonal W with the t-nodes as eigenvalues reproduces S_k(f, g).

    W = diag(t_j), cutoff below the first positive node, A = diag(w_j f_j conj g_j);
    returns max_x |omega(A)(x) - S_k(f, g)(x)|.
    """
    t = kernel.t_grid.x
    W = np.diag(t).astype(complex)
    pos = t[t > 0]
    cutoff = pos.min() / 2 if pos.size else 0.0
    ncl2 = ncl2_map(W, cutoff, kernel)
    A = np.diag(kernel.t_grid.weights * np.asarray(f) * np.conj(g))
    direct = kernel_form(kernel)(f, g)
    return cnorm(ncl2(A) - direct)


# ------------------------------------------------------------ standard set

@dataclass
class CatalogEntry:
    name: str
    form: PosSesqForm
    sampler: object  # rng -> element
    model: AlgebraModel | None = None
    map: PositiveMap | None = None


def standard_catalog(points: int = 41, n: int = 4, N: int = 4, p: float = 4.0) -> list:
    """One representative of each catalog form, with element samplers."""
    grid01 = Grid(0.0, 1.0, points)
    t = grid01.x
    entries = []

    seq = make_seqfun_model(grid01, N)
    w = np.array([2.0 ** -(m + 1) * (1 + np.cos(np.pi * m * t) ** 2) for m in range(N)])
    ws = weighted_sum_map(w, seq)
    entries.append(CatalogEntry("weighted_sum", ws.induced_form(), lambda r: seq.sample(r), seq, ws))

    l2 = make_grid_l2_model(2.0, points)
    v = (np.abs(l2.params["grid"].x) <= 1.0).astype(float)
    wf = weighted_form_map(v, l2)
    entries.append(CatalogEntry("weighted_l2", weighted_form(v, l2), lambda r: l2.sample(r), l2, wf))

    ks = KernelSpec.sample(lambda x, s: np.exp(-(x - s) ** 2), grid01, grid01)
    kf = kernel_form(ks)
    km = kf.meta["model"]
    th = theta_map(ks, 1 + t, km)
    entries.append(CatalogEntry("kernel", kf, lambda r: km.sample(r), km, th))

    d = 2
    ok = KernelSpec.sample(lambda x, s: np.exp(-(x - s) ** 2)[..., None, None] * np.eye(d),
                           grid01, grid01, kind="operator")
    of = operator_kernel_form(ok)
    entries.append(CatalogEntry("operator_kernel", of,
                                lambda r: linalg.random_complex(r, (points, d, d)), None, None))

    sm = make_schatten_model(n, p)
    lam = 2.0 ** -np.arange(1, n + 1)
    gs = np.array([np.exp(-j * t) for j in range(1, n + 1)])
    st = schatten_trace_map(lam, gs, grid01, sm)
    entries.append(CatalogEntry("schatten_trace", st.induced_form(), lambda r: sm.sample(r), sm, st))

    W = np.diag(np.linspace(0.9, 0.1, n)).astype(complex)
    top = float(np.max(np.diag(W).real[np.diag(W).real > 0.3]))
    kg = Grid(0.0, top, points)
    kk = KernelSpec.sample(lambda x, s: x + s, kg, kg)
    nc = ncl2_map(W, 0.3, kk)
    entries.append(CatalogEntry("ncl2", nc.omega.induced_form(), lambda r: nc.omega.model.sample(r),
                                nc.omega.model, nc.omega))

    cm = make_cstar_matrix_model(n)
    tm = trace_map(np.diag(np.linspace(1.0, 0.25, n)), cm)
    entries.append(CatalogEntry("matrix_trace", tm.induced_form(), lambda r: cm.sample(r), cm, tm))
    return entries


def check_catalog_map(entry: CatalogEntry, rng: np.random.Generator, invariance_samples: int = 100,
                      bound_samples: int = 1000) -> dict:
    """Invariance of the induced form and the omega(d* c) bound for one entry."""
    out = {"name": entry.name}
    if entry.model is None:
        return out
    inv = check_invariance(entry.form, entry.model, invariance_samples, rng)
    out["invariance_defect"] = inv.max_defect
    out["invariance_passed"] = inv.passed
    if entry.map is not None and entry.map.declared_bound is not None:
        out["bound"] = check_bound(entry.map, rng, bound_samples)
    return out
