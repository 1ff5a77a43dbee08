"""GNS-type construction for invariant positive C-valued forms on truncated
quasi *-algebras.

Given a model (A, A_0) with a nested approximate identity {e_m} and an
invariant positive form S, :func:`build_gns` produces the quotient A / N_S in
coordinates relative to pivot coset representatives, the C-valued inner
product table, the representation a -> pi(a) (left module action on cosets)
and the vectors eps_m = e_m + N_S.  The verifiers check the identities the
construction is supposed to satisfy at every truncation level.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import linalg
from .cstar import CStarValue, PositiveMap, PosSesqForm, check_invariance, cnorm, scalar_gram
from .errors import (
    DegenerateFormError,
    InconsistentInputError,
    InvalidIdentityError,
    NotInvariantError,
    UnsupportedError,
)
from .models import AlgebraModel


@dataclass
class GnsData:
    model: AlgebraModel
    form: PosSesqForm
    basis: list
    core_mask: np.ndarray
    gram: np.ndarray
    null_dim: int
    pivots: np.ndarray
    table: np.ndarray
    eps: list
    invariance_defect: float
    _pp_factor: tuple = field(repr=False, default=None)
    _reps: dict = field(repr=False, default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def value_template(self) -> CStarValue:
        return self.form(self.basis[0], self.basis[0])

    def quotient(self, a) -> np.ndarray:
        """Coordinates of a + N_S relative to the pivot representatives."""
        c = self.model.coords(a)
        rhs = self.gram[self.pivots] @ c
        return scipy.linalg.cho_solve(self._pp_factor, rhs)

    def lift(self, xi) -> np.ndarray:
        """A coset representative sum_i xi_i b_{p_i}."""
        c = np.zeros(len(self.basis), dtype=complex)
        c[self.pivots] = xi
        return self.model.from_coords(c)

    def inner(self, xi, eta) -> CStarValue:
        """<xi, eta>_S from the table (linear in xi, conjugate-linear in eta)."""
        tpl = self.value_template
        data = np.tensordot(np.outer(xi, np.conj(eta)), self.table, axes=([0, 1], [0, 1]))
        return CStarValue(tpl.kind, data, tpl.grid)

    def qnorm(self, xi) -> float:
        return float(np.sqrt(cnorm(self.inner(xi, xi))))

    def rep(self, a) -> np.ndarray:
        """Matrix of pi(a) on quotient coordinates: x + N_S -> a x + N_S."""
        key = np.asarray(a).tobytes()
        if key not in self._reps:
            cols = [self.quotient(self.model.mul(a, self.basis[p])) for p in self.pivots]
            self._reps[key] = np.column_stack(cols)
        return self._reps[key]

    def summary(self) -> dict:
        return {"model": self.model.name, "form": self.form.name,
                "algebra_dim": len(self.basis), "null_dim": self.null_dim,
                "quotient_dim": self.dim, "identity_levels": len(self.eps),
                "invariance_defect": self.invariance_defect,
                "core_representatives": bool(np.all(self.core_mask[self.pivots]))}


def _pivots(G: np.ndarray, core: np.ndarray, rank: int, tol: float) -> np.ndarray:
    """Column-pivoted QR on the core columns first; if the core does not span
    the quotient (finite truncations of a dense core need not), complete the
    set from the remaining columns after projecting out the core span."""
    core_idx, rest_idx = np.flatnonzero(core), np.flatnonzero(~core)
    chosen = np.array([], dtype=int)
    if core_idx.size:
        _, R, piv = scipy.linalg.qr(G[:, core_idx], mode="economic", pivoting=True)
        r_core = int(np.sum(np.abs(np.diag(R)) > tol))
        chosen = core_idx[piv[:min(r_core, rank)]]
    if len(chosen) < rank and rest_idx.size:
        Q, _ = np.linalg.qr(G[:, chosen]) if len(chosen) else (np.zeros((len(G), 0)), None)
        resid = G[:, rest_idx] - Q @ (Q.conj().T @ G[:, rest_idx])
        _, _, piv = scipy.linalg.qr(resid, mode="economic", pivoting=True)
        chosen = np.concatenate([chosen, rest_idx[piv[:rank - len(chosen)]]])
    return np.sort(chosen)


def build_gns(model: AlgebraModel, S: PosSesqForm, rng: np.random.Generator | None = None,
              invariance_samples: int = 20, rel_tol: float = 1e-10) -> GnsData:
    """Quotient by N_S, choose pivot coset representatives in A_0, assemble the table."""
    rng = rng if rng is not None else np.random.default_rng(0)
    inv = check_invariance(S, model, invariance_samples, rng)
    if inv.max_defect > 1e-6 * max(1.0, inv.max_scale):
        raise NotInvariantError(f"{S.name} fails S(ax, y) = S(x, a*y) by {inv.max_defect:.3g}")
    basis = model.basis()
    G = scalar_gram(S, basis)
    lam = np.linalg.eigvalsh(G)
    top = float(np.max(np.abs(lam), initial=0.0))
    if top == 0:
        raise DegenerateFormError(f"{S.name} vanishes identically; the quotient is trivial")
    rank = int(np.sum(lam > rel_tol * top))
    core = np.array([model.in_core(b) for b in basis])
    pivots = _pivots(G, core, rank, rel_tol * top)
    Gpp = G[np.ix_(pivots, pivots)]
    if np.linalg.eigvalsh(Gpp)[0] <= rel_tol * top:
        raise DegenerateFormError("core representatives do not span the quotient")
    factor = scipy.linalg.cho_factor(Gpp)
    vals = [[S(basis[i], basis[j]).data for j in pivots] for i in pivots]
    table = np.array(vals)
    g = GnsData(model, S, basis, core, G, len(basis) - rank, pivots, table, [],
                inv.max_defect, factor)
    g.eps = [g.quotient(e) for e in model.identity]
    return g


@dataclass
class RepresentationReport:
    multiplicativity_defect: float
    core_multiplicativity_defect: float
    adjoint_defect: float
    inner_product_defect: float
    samples: int
    tol: float = 1e-8

    @property
    def passed(self) -> bool:
        return max(self.multiplicativity_defect, self.core_multiplicativity_defect,
                   self.adjoint_defect, self.inner_product_defect) <= self.tol

    def to_dict(self) -> dict:
        return {"multiplicativity_defect": self.multiplicativity_defect,
                "core_multiplicativity_defect": self.core_multiplicativity_defect,
                "adjoint_defect": self.adjoint_defect,
                "inner_product_defect": self.inner_product_defect,
                "samples": self.samples, "passed": self.passed}


def adjoint_defect(g: GnsData, a) -> float:
    """max_{i,j} ||<pi(a) e_i, e_j> - <e_i, pi(a*) e_j>|| relative to the table scale."""
    A = g.rep(a)
    Ad = g.rep(g.model.adjoint(a))
    T = g.table
    # <pi(a) e_i, e_j> = sum_k A[k, i] T[k, j];  <e_i, pi(a*) e_j> = sum_k conj(Ad[k, j]) T[i, k]
    left = np.tensordot(A, T, axes=([0], [0]))
    right = np.moveaxis(np.tensordot(np.conj(Ad), T, axes=([0], [1])), 0, 1)
    scale = max(1.0, float(np.max(np.abs(T))) * max(1.0, linalg.op_norm(A)))
    return float(np.max(np.abs(left - right))) / scale


def verify_representation(g: GnsData, samples: int, rng: np.random.Generator,
                          tol: float = 1e-8) -> RepresentationReport:
    """pi(a x) = pi(a) pi(x), pi(a*) = pi(a)^dagger, and <x+N, y+N> = S(x, y)."""
    model = g.model
    mult = core_mult = adj = ip = 0.0
    for _ in range(samples):
        a = model.sample(rng)
        x = model.sample(rng, core=True)
        y = model.sample(rng, core=True)
        lhs = g.rep(model.mul(a, x))
        rhs = g.rep(a) @ g.rep(x)
        mult = max(mult, linalg.op_norm(lhs - rhs) / max(1.0, linalg.op_norm(lhs)))
        lhs = g.rep(model.mul(x, y))
        rhs = g.rep(x) @ g.rep(y)
        core_mult = max(core_mult, linalg.op_norm(lhs - rhs) / max(1.0, linalg.op_norm(lhs)))
        adj = max(adj, adjoint_defect(g, a))
        direct = g.form(x, y)
        via = g.inner(g.quotient(x), g.quotient(y))
        ip = max(ip, cnorm(direct - via) / max(1.0, cnorm(direct)))
    return RepresentationReport(mult, core_mult, adj, ip, samples, tol)


@dataclass
class EpsilonReport:
    eps_defects: np.ndarray
    table: np.ndarray
    diagonal_tail: np.ndarray
    stabilization_gaps: np.ndarray
    tol: float = 1e-10

    @property
    def max_eps_defect(self) -> float:
        return float(np.max(self.eps_defects, initial=0.0))

    @property
    def tail_strictly_decreasing(self) -> bool:
        t = self.diagonal_tail
        return bool(np.all(np.diff(t) < 0))

    @property
    def tail_decreasing_to_zero(self) -> bool:
        """Strictly decreasing while above tol, then zero (a tail already at 0 qualifies)."""
        t = self.diagonal_tail
        floor = self.tol * max(1.0, float(np.max(self.table, initial=0.0)))
        live = t > floor
        if np.any(live[1:] & ~live[:-1]):
            return False
        return bool(np.all(np.diff(t[:int(live.sum()) + 1]) < 0)) if live.any() else True

    @property
    def passed(self) -> bool:
        return self.max_eps_defect <= self.tol and self.diagonal_tail[-1] <= self.tol * max(
            1.0, float(np.max(self.table, initial=0.0)))

    def to_dict(self) -> dict:
        return {"max_eps_defect": self.max_eps_defect, "diagonal_tail": self.diagonal_tail.tolist(),
                "tail_strictly_decreasing": self.tail_strictly_decreasing,
                "tail_decreasing_to_zero": self.tail_decreasing_to_zero,
                "stabilization_gaps": self.stabilization_gaps.tolist(), "passed": self.passed}


def verify_epsilon_relations(g: GnsData, a=None, tol: float = 1e-10) -> EpsilonReport:
    """pi(e_m) eps_k = eps_m for m <= k, and the double-limit table for ``a``.

    T(m, k) = ||<pi(a)(eps_k - eps_m), pi(a)(eps_k - eps_m)>||.  At finite
    truncation lim_k is the top column value; the diagonal tail is T(m, top).
    """
    model = g.model
    ident = model.identity
    n = len(ident)
    if n < 2:
        raise InvalidIdentityError("need at least two identity elements")
    for m in range(n):
        for k in range(m, n):
            if np.max(np.abs(model.mul(ident[m], ident[k]) - ident[m])) > 1e-12:
                raise InvalidIdentityError(f"e_{m + 1} e_{k + 1} != e_{m + 1}")
    defects = np.zeros((n, n))
    for m in range(n):
        Pm = g.rep(ident[m])
        for k in range(m, n):
            defects[m, k] = g.qnorm(Pm @ g.eps[k] - g.eps[m])
    if a is None:
        a = model.identity[-1]
    A = g.rep(a)
    T = np.zeros((n, n))
    for m in range(n):
        for k in range(n):
            v = A @ (g.eps[k] - g.eps[m])
            T[m, k] = cnorm(g.inner(v, v))
    tail = T[:, -1].copy()
    gaps = np.abs(T[:, -1] - T[:, -2])
    return EpsilonReport(defects, T, tail, gaps, tol)


@dataclass
class ReconstructionTrace:
    values: list
    target: CStarValue
    errors: np.ndarray
    tol: float

    @property
    def top(self) -> CStarValue:
        return self.values[-1]

    @property
    def top_error(self) -> float:
        return float(self.errors[-1])

    @property
    def monotone_trend(self) -> bool:
        return bool(np.all(np.diff(self.errors) <= 1e-12 * max(1.0, self.errors[0])))

    @property
    def passed(self) -> bool:
        return self.top_error <= self.tol * max(1.0, cnorm(self.target))

    def to_dict(self) -> dict:
        return {"errors": self.errors.tolist(), "top_error": self.top_error,
                "monotone_trend": self.monotone_trend, "passed": self.passed}


def reconstruct_form(g: GnsData, a, b, tol: float = 1e-8) -> ReconstructionTrace:
    """v_m = <pi(a) eps_m, pi(b) eps_m> against the directly evaluated S(a, b)."""
    A, B = g.rep(a), g.rep(b)
    values = [g.inner(A @ e, B @ e) for e in g.eps]
    target = g.form(a, b)
    errors = np.array([cnorm(v - target) for v in values])
    return ReconstructionTrace(values, target, errors, tol)


def positive_decomposition(model: AlgebraModel, a):
    """a = p1 - p2 + i(p3 - p4) with p_k >= 0; returns [(coef, p_k, sqrt(p_k))]."""
    a = np.asarray(a, dtype=complex)
    h = (a + model.adjoint(a)) / 2
    s = (a - model.adjoint(a)) / 2j
    out = []
    for coef_sign, part in ((1, h), (1j, s)):
        if model.kind == "matrix":
            lam, Q = np.linalg.eigh(linalg.hermitian_part(part))
            for sgn, vals in ((1, np.clip(lam, 0, None)), (-1, np.clip(-lam, 0, None))):
                p = (Q * vals) @ linalg.adjoint(Q)
                r = (Q * np.sqrt(vals)) @ linalg.adjoint(Q)
                out.append((coef_sign * sgn, p, r))
        elif model.kind in ("grid-function", "sequence-of-grid-functions"):
            re = part.real
            for sgn, vals in ((1, np.clip(re, 0, None)), (-1, np.clip(-re, 0, None))):
                out.append((coef_sign * sgn, vals.astype(complex), np.sqrt(vals).astype(complex)))
        else:
            raise UnsupportedError(f"no positive decomposition for {model.kind}")
    return out


@dataclass
class LinearReconstructionReport:
    mode: str
    single_error: float
    decomposition_error: float
    sqrt_oracle_error: float
    product_error: float
    double_table: list
    form_mismatch: float
    tol: float

    @property
    def passed(self) -> bool:
        return max(self.single_error, self.decomposition_error, self.sqrt_oracle_error,
                   self.product_error) <= self.tol

    def to_dict(self) -> dict:
        return {"mode": self.mode, "single_error": self.single_error,
                "decomposition_error": self.decomposition_error,
                "sqrt_oracle_error": self.sqrt_oracle_error,
                "product_error": self.product_error, "form_mismatch": self.form_mismatch,
                "passed": self.passed}


def form_mismatch(g: GnsData, omega: PositiveMap, pairs) -> float:
    model = g.model
    worst = 0.0
    for a, b in pairs:
        lhs = omega(model.mul(model.adjoint(b), a))
        rhs = g.form(a, b)
        worst = max(worst, cnorm(lhs - rhs) / max(1.0, cnorm(rhs)))
    return worst


def reconstruct_linear(g: GnsData, omega: PositiveMap, panel, mode: str = "single",
                       rng: np.random.Generator | None = None,
                       tol: float = 1e-8) -> LinearReconstructionReport:
    """omega(a) = <pi(a) eps, eps> at the top level; in ``double`` mode also the
    full table <pi(a) eps_m, eps_k>.  omega(b* a) = <pi(a) eps, pi(b) eps>
    is checked on consecutive panel pairs."""
    model = g.model
    rng = rng if rng is not None else np.random.default_rng(0)
    check_pairs = [(model.sample(rng, core=True), model.sample(rng, core=True)) for _ in range(5)]
    mismatch = form_mismatch(g, omega, check_pairs)
    if mismatch > 1e-6:
        raise InconsistentInputError(f"omega(b* a) differs from the GNS form by {mismatch:.3g}")
    top = g.eps[-1]
    single = decomp = sqrt_err = prod = 0.0
    double_tables = []
    for i, a in enumerate(panel):
        target = omega(a)
        scale = max(1.0, cnorm(target))
        single = max(single, cnorm(target - g.inner(g.rep(a) @ top, top)) / scale)
        total = None
        for coef, p, r in positive_decomposition(model, a):
            R = g.rep(r)
            via_sqrt = g.inner(R @ top, R @ top)
            direct = omega(p)
            sqrt_err = max(sqrt_err, cnorm(via_sqrt - direct) / max(1.0, cnorm(direct)))
            term = coef * g.inner(g.rep(p) @ top, top)
            total = term if total is None else total + term
        decomp = max(decomp, cnorm(total - target) / scale)
        b = panel[(i + 1) % len(panel)]
        lhs = omega(model.mul(model.adjoint(b), a))
        rhs = g.inner(g.rep(a) @ top, g.rep(b) @ top)
        prod = max(prod, cnorm(lhs - rhs) / max(1.0, cnorm(lhs)))
        if mode == "double":
            A = g.rep(a)
            table = [[cnorm(g.inner(A @ em, ek) - target) for ek in g.eps] for em in g.eps]
            double_tables.append(table)
            single = max(single, table[-1][-1] / scale)
    return LinearReconstructionReport(mode, single, decomp, sqrt_err, prod, double_tables,
                                      mismatch, tol)


@dataclass
class MapNorm:
    value: float
    kind: str  # "exact" | "upper-bound" | "estimate"
    method: str
    domain_norm: str

    def to_dict(self) -> dict:
        return {"value": self.value, "kind": self.kind, "method": self.method,
                "domain_norm": self.domain_norm}


def map_norm(omega: PositiveMap, method: str = "exact-formula", domain_norm: str | None = None,
             rng: np.random.Generator | None = None, samples: int = 200) -> MapNorm:
    """Operator norm of omega for a named domain norm.

    ``exact-formula`` uses ``omega.exact_norms``; the sampling methods return
    lower estimates (tagged ``estimate``).
    """
    domain_norm = domain_norm or omega.norm_name
    if method == "exact-formula":
        if domain_norm not in omega.exact_norms:
            raise UnsupportedError(f"no exact formula for {omega.name} on {domain_norm}")
        return MapNorm(float(omega.exact_norms[domain_norm]), "exact", method, domain_norm)
    rng = rng if rng is not None else np.random.default_rng(0)
    model = omega.model
    best = 0.0
    if method == "unitary-sampling":
        if model is None or model.kind != "matrix":
            raise UnsupportedError("unitary sampling needs a matrix model")
        n = model.shape[0]
        for _ in range(samples):
            Q, _ = np.linalg.qr(linalg.random_complex(rng, (n, n)))
            best = max(best, cnorm(omega(Q)) / model.norm(Q))
    elif method == "random-ball":
        for _ in range(samples):
            a = model.sample(rng)
            best = max(best, cnorm(omega(a)) / model.norm(a))
    else:
        raise UnsupportedError(f"unknown method {method!r}")
    return MapNorm(best, "estimate", method, domain_norm)


@dataclass
class NormInequalityReport:
    samples: int
    norm: MapNorm
    min_slack_4: float
    min_slack_1: float | None
    max_star_defect: float
    violations_4: int
    violations_1: int
    conclusive: bool

    @property
    def passed(self) -> bool:
        return (self.violations_4 == 0 and self.violations_1 == 0
                and self.max_star_defect <= 1e-8)

    def to_dict(self) -> dict:
        return {"samples": self.samples, "norm": self.norm.to_dict(),
                "min_slack_4": self.min_slack_4, "min_slack_1": self.min_slack_1,
                "max_star_defect": self.max_star_defect, "violations_4": self.violations_4,
                "violations_1": self.violations_1, "conclusive": self.conclusive,
                "passed": self.passed}


def check_norm_inequality(omega: PositiveMap, norm: MapNorm, commutative: bool | None,
                          panel, rtol: float = 1e-9) -> NormInequalityReport:
    """4||omega|| ||omega(a*a)|| >= ||omega(a)||^2 = ||omega(a*)|| ||omega(a)||,
    with constant 1 when the codomain is commutative.

    A failing sample only counts as a violation when ``norm`` is exact.
    """
    model = omega.model
    if commutative is None:
        commutative = omega.commutative_codomain
    slack4, slack1, star = np.inf, np.inf, 0.0
    v4 = v1 = 0
    conclusive = norm.kind == "exact"
    for a in panel:
        wa = cnorm(omega(a))
        was = cnorm(omega(model.adjoint(a)))
        waa = cnorm(omega(model.mul(model.adjoint(a), a)))
        rhs = wa * wa
        star = max(star, abs(was - wa) / max(1.0, wa))
        lhs4 = 4 * norm.value * waa
        s4 = (lhs4 - rhs) / max(lhs4, rhs, 1e-300)
        slack4 = min(slack4, s4)
        if s4 < -rtol and conclusive:
            v4 += 1
        if commutative:
            lhs1 = norm.value * waa
            s1 = (lhs1 - rhs) / max(lhs1, rhs, 1e-300)
            slack1 = min(slack1, s1)
            if s1 < -rtol and conclusive:
                v1 += 1
    return NormInequalityReport(len(panel), norm, float(slack4),
                                float(slack1) if commutative else None, star, v4, v1, conclusive)


def rep_operator_norm(g: GnsData, a) -> tuple[float, str]:
    """Norm of pi(a) w.r.t. the quotient quasi-norm.

    Exact (generalised eigenvalue) for scalar codomains; otherwise a sampled
    lower estimate over the quotient basis and random vectors.
    """
    A = g.rep(a)
    if g.table.ndim == 2:
        T = linalg.hermitian_part(g.table.T)
        M = linalg.hermitian_part(linalg.adjoint(A) @ T @ A)
        lam = scipy.linalg.eigh(M, T, eigvals_only=True)
        return float(np.sqrt(max(lam[-1], 0.0))), "exact"
    rng = np.random.default_rng(0)
    best = 0.0
    vecs = list(np.eye(g.dim, dtype=complex)) + [linalg.random_complex(rng, g.dim) for _ in range(64)]
    for xi in vecs:
        d = g.qnorm(xi)
        if d > 0:
            best = max(best, g.qnorm(A @ xi) / d)
    return best, "estimate"
