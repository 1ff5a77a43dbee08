"""Weighted shifts on a cyclically truncated block space.

H = H_{-J} + ... + H_J with blocks of dimension d.  The shift V moves block j
to block j+1 with weight 1/2 for j >= 0 and weight 2 for j <= -1; the wrap
edge J -> -J has weight 1 so that V is exactly invertible.  Decay statements
are only asserted inside the window where supports never cross the wrap.

Operators are stored as dense (L d) x (L d) matrices; L = 2J + 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import InvalidParameterError, NumericalError, WindowError


@dataclass(frozen=True)
class BlockSpace:
    J: int
    d: int = 1

    def __post_init__(self):
        if self.J < 1 or self.d < 1:
            raise InvalidParameterError("need J >= 1 and d >= 1")

    @property
    def L(self) -> int:
        return 2 * self.J + 1

    @property
    def size(self) -> int:
        return self.L * self.d

    @property
    def indices(self) -> range:
        return range(-self.J, self.J + 1)

    def wrap(self, j: int) -> int:
        """Cyclic index in -J..J."""
        return (j + self.J) % self.L - self.J

    def slice(self, j: int) -> slice:
        s = (self.wrap(j) + self.J) * self.d
        return slice(s, s + self.d)

    def projection(self, j: int) -> np.ndarray:
        P = np.zeros((self.size, self.size))
        s = self.slice(j)
        P[s, s] = np.eye(self.d)
        return P

    def band(self, k: int) -> np.ndarray:
        """sum_{|j| <= k} P_j."""
        P = np.zeros((self.size, self.size))
        for j in range(-k, k + 1):
            s = self.slice(j)
            P[s, s] = np.eye(self.d)
        return P


@dataclass
class BlockOperator:
    """Operator with at most one target block per source block.

    ``blocks[j] = (target, matrix)`` sends H_j into H_target.
    """

    space: BlockSpace
    blocks: dict = field(default_factory=dict)

    def full(self) -> np.ndarray:
        sp = self.space
        M = np.zeros((sp.size, sp.size), dtype=complex)
        for j, (t, B) in self.blocks.items():
            M[sp.slice(t), sp.slice(j)] = B
        return M

    def apply_right_adjoint(self, X) -> np.ndarray:
        """X T* by block application."""
        sp = self.space
        X = np.asarray(X, dtype=complex)
        out = np.zeros_like(X)
        for j, (t, B) in self.blocks.items():
            out[:, sp.slice(t)] += X[:, sp.slice(j)] @ np.conj(B).T
        return out


def check_lambda(space: BlockSpace, lam) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (space.L,):
        raise InvalidParameterError(f"need {space.L} block weights")
    if np.any(lam < 0) or not np.all(np.isfinite(lam)):
        raise InvalidParameterError("block weights must be finite and >= 0")
    return lam


def default_lambda(space: BlockSpace) -> np.ndarray:
    return np.array([1.0 / (1 + abs(j)) for j in space.indices])


@dataclass
class WeightOperator:
    op: BlockOperator
    lam: np.ndarray
    M: float
    tails: list
    tail_bounds: list

    @property
    def matrix(self) -> np.ndarray:
        return self.op.full()

    @property
    def tail_ok(self) -> bool:
        return all(t <= b + 1e-12 for t, b in zip(self.tails, self.tail_bounds))


def build_W(space: BlockSpace, lam=None, Wj=None) -> WeightOperator:
    """W = sum_j lam_j P_j W_j P_j and the tails ||W(I - sum_{|j|<=n} P_j)||, n < J."""
    lam = default_lambda(space) if lam is None else check_lambda(space, lam)
    if Wj is None:
        Wj = [np.eye(space.d)] * space.L
    Wj = [np.asarray(B, dtype=complex) for B in Wj]
    if len(Wj) != space.L or any(B.shape != (space.d, space.d) for B in Wj):
        raise InvalidParameterError("need one d x d block per index")
    if any(not linalg.is_psd(B) for B in Wj):
        raise InvalidParameterError("blocks W_j must be PSD")
    M = max(linalg.op_norm(B) for B in Wj)
    op = BlockOperator(space, {j: (j, lam[i] * Wj[i]) for i, j in enumerate(space.indices)})
    Wm = op.full()
    I = np.eye(space.size)
    tails, bounds = [], []
    for n in range(space.J):
        tails.append(linalg.op_norm(Wm @ (I - space.band(n))))
        outside = [lam[i] for i, j in enumerate(space.indices) if abs(j) > n]
        bounds.append(max(outside) * M)
    return WeightOperator(op, lam, M, tails, bounds)


@dataclass
class Shift:
    """V, V^{-1} and cached powers V^n, n in Z."""

    space: BlockSpace
    V: BlockOperator
    V_inv: BlockOperator
    weights: tuple
    _powers: dict = field(default_factory=dict, repr=False)

    @property
    def inverse_defect(self) -> float:
        I = np.eye(self.space.size)
        a, b = self.V.full(), self.V_inv.full()
        return max(linalg.op_norm(a @ b - I), linalg.op_norm(b @ a - I))

    def power(self, n: int) -> np.ndarray:
        if n not in self._powers:
            base = self.V.full() if n >= 0 else self.V_inv.full()
            self._powers[n] = np.linalg.matrix_power(base, abs(n))
        return self._powers[n]


def build_shift(space: BlockSpace, down: float = 2.0, up: float = 0.5) -> Shift:
    """Weight ``up`` on j -> j+1 for j >= 0, ``down`` for j <= -1, 1 on the wrap."""
    if down <= 0 or up <= 0:
        raise InvalidParameterError("shift weights must be positive")
    J, d = space.J, space.d
    I = np.eye(d)
    fwd, bwd = {}, {}
    for j in space.indices:
        w = 1.0 if j == J else (up if j >= 0 else down)
        t = space.wrap(j + 1)
        fwd[j] = (t, w * I)
        bwd[t] = (j, I / w)
    return Shift(space, BlockOperator(space, fwd), BlockOperator(space, bwd), (down, up))


def closed_form_power(n: int, j: int) -> float:
    """||V^n P_j|| inside the window for the (2, 1/2) pair, n >= 0."""
    if j >= 0:
        return 2.0 ** -n
    m = -j
    return 2.0 ** (2 * m - n) if n > m else 2.0**n


@dataclass
class DecayTable:
    k: int
    n: list
    forward: list
    backward: list
    bound: list
    slope: float

    @property
    def within_bound(self) -> bool:
        return all(f <= b + 1e-12 and g <= b + 1e-12
                   for f, g, b in zip(self.forward, self.backward, self.bound))

    def rows(self) -> list:
        return list(zip(self.n, self.forward, self.backward, self.bound))

    def to_dict(self) -> dict:
        return {"k": self.k, "n": self.n, "forward": self.forward, "backward": self.backward,
                "bound": self.bound, "slope": self.slope, "within_bound": self.within_bound}


def decay_bound(k: int, n: int) -> float:
    return 2.0**-n if k == 0 else 2 * k * 2.0 ** (2 * k - n)


def _log2_slope(ns, values) -> float:
    ns, values = np.asarray(ns, dtype=float), np.asarray(values, dtype=float)
    keep = values > 0
    if keep.sum() < 2:
        return float("nan")
    return float(np.polyfit(ns[keep], np.log2(values[keep]), 1)[0])


def power_decay(shift: Shift, k: int, n_range=None) -> DecayTable:
    """||V^{+-n} (sum_{|j|<=k} P_j)|| for n in the window n <= J - k.

    The slope is fitted over n > k, where the closed forms are pure powers of 2.
    """
    sp = shift.space
    if not 0 <= k <= sp.J:
        raise InvalidParameterError("support radius must lie in 0..J")
    top = sp.J - k
    ns = list(range(top + 1)) if n_range is None else [int(n) for n in n_range]
    if any(n < 0 or n > top for n in ns):
        raise WindowError(f"n must lie in 0..{top} (n + k <= J); use a larger J")
    Pk = sp.band(k)
    fwd = [linalg.op_norm(shift.power(n) @ Pk) for n in ns]
    bwd = [linalg.op_norm(shift.power(-n) @ Pk) for n in ns]
    bound = [decay_bound(k, n) for n in ns]
    tail = [(n, max(f, b)) for n, f, b in zip(ns, fwd, bwd) if n > k]
    slope = _log2_slope([t[0] for t in tail], [t[1] for t in tail])
    return DecayTable(k, ns, fwd, bwd, bound, slope)


def seminorm_W(W, X) -> float:
    """||X||_W = sqrt(tr(X W X*))."""
    Wm = W.matrix if isinstance(W, WeightOperator) else np.asarray(W)
    X = np.asarray(X)
    v = np.trace(X @ Wm @ np.conj(X).T).real
    if v < -1e-10 * max(1.0, linalg.schatten_norm(X, 2) ** 2 * linalg.op_norm(Wm)):
        raise NumericalError(f"tr(X W X*) = {v:.3g} is negative")
    return float(np.sqrt(max(v, 0.0)))


def right_multiplier(shift: Shift, n: int, X) -> np.ndarray:
    """R^n(X) = X (V^n)*, by n block applications of V (or V^{-1})."""
    op = shift.V if n >= 0 else shift.V_inv
    out = np.asarray(X, dtype=complex)
    for _ in range(abs(n)):
        out = op.apply_right_adjoint(out)
    return out


def right_bound_ratio(shift: Shift, n: int, X) -> float:
    """||R^n X||_2 / (||X||_2 ||V^n||); at most 1."""
    num = linalg.schatten_norm(right_multiplier(shift, n, X), 2)
    den = linalg.schatten_norm(X, 2) * linalg.op_norm(shift.power(n))
    return num / den if den > 0 else 0.0


def support_on(space: BlockSpace, F, k: int):
    """F (sum_{|j|<=k} P_j) and the size of what was cut off."""
    F = np.asarray(F, dtype=complex)
    G = F @ space.band(k)
    return G, linalg.schatten_norm(F - G, 2)


@dataclass
class TransitivityReport:
    kind: str
    N: int
    k: int
    delta: float
    window: int
    trace_n: list
    first_trace: list  # ||R^n F1||_W (transitivity) or ||R^n F2 + R^-n F2||_W (cosine)
    second_trace: list  # ||R^-n F2||_W, or ||C^(n)(X_n) - F2||_W
    defect_x: float
    defect_image: float
    projection_defect: float
    decay_slope: float
    seminorm_slope: float
    expansion_defect: float = 0.0

    @property
    def passed(self) -> bool:
        return self.defect_x < self.delta and self.defect_image < self.delta

    def to_dict(self) -> dict:
        return {"kind": self.kind, "N": self.N, "k": self.k, "delta": self.delta,
                "window": self.window, "defect_x": self.defect_x,
                "defect_image": self.defect_image, "projection_defect": self.projection_defect,
                "decay_slope": self.decay_slope, "seminorm_slope": self.seminorm_slope,
                "expansion_defect": self.expansion_defect, "passed": self.passed,
                "traces": {"n": self.trace_n, "first": self.first_trace,
                           "second": self.second_trace}}


def transitivity_witness(W: WeightOperator, shift: Shift, F1, F2, k: int,
                         delta: float) -> TransitivityReport:
    """Smallest N <= J - k with ||R^{-N} F2||_W < delta and ||R^N F1||_W < delta.

    X_N = F1 + R^{-N}(F2) is then within delta of F1 and R^N(X_N) within
    delta of F2; both defects are re-evaluated from X_N.
    """
    sp = shift.space
    F1, c1 = support_on(sp, F1, k)
    F2, c2 = support_on(sp, F2, k)
    window = sp.J - k
    if window < 0:
        raise WindowError("support radius exceeds J")
    ns, fwd, bwd = [], [], []
    found = None
    for n in range(window + 1):
        a = seminorm_W(W, right_multiplier(shift, n, F1))
        b = seminorm_W(W, right_multiplier(shift, -n, F2))
        ns.append(n)
        fwd.append(a)
        bwd.append(b)
        if found is None and a < delta and b < delta:
            found = n
    if found is None:
        raise WindowError(f"no N <= {window} reaches delta = {delta:g}; use a larger J")
    X = F1 + right_multiplier(shift, -found, F2)
    dx = seminorm_W(W, X - F1)
    dimg = seminorm_W(W, right_multiplier(shift, found, X) - F2)
    decay = power_decay(shift, k)
    both = [max(a, b) for a, b in zip(fwd, bwd)]
    sl = _log2_slope([n for n in ns if n > k], [v for n, v in zip(ns, both) if n > k])
    return TransitivityReport("transitivity", found, k, delta, window, ns, fwd, bwd, dx, dimg,
                              max(c1, c2), decay.slope, sl)


def cosine(shift: Shift, n: int, X) -> np.ndarray:
    """C^(n)(X) = (R^n X + R^{-n} X) / 2."""
    return (right_multiplier(shift, n, X) + right_multiplier(shift, -n, X)) / 2


def cosine_witness(W: WeightOperator, shift: Shift, F1, F2, k: int,
                   delta: float) -> TransitivityReport:
    """Smallest N with 2N + k <= J and X_N = F1 + R^N F2 + R^{-N} F2 satisfying
    ||X_N - F1||_W < delta and ||C^(N)(X_N) - F2||_W < delta."""
    sp = shift.space
    F1, c1 = support_on(sp, F1, k)
    F2, c2 = support_on(sp, F2, k)
    window = (sp.J - k) // 2
    if window < 0:
        raise WindowError("support radius exceeds J")
    ns, first, second = [], [], []
    found, expansion = None, 0.0
    for n in range(window + 1):
        X = F1 + right_multiplier(shift, n, F2) + right_multiplier(shift, -n, F2)
        a = seminorm_W(W, X - F1)
        diff = cosine(shift, n, X) - F2
        b = seminorm_W(W, diff)
        expected = (right_multiplier(shift, n, F1) + right_multiplier(shift, -n, F1)
                    + right_multiplier(shift, 2 * n, F2) + right_multiplier(shift, -2 * n, F2)) / 2
        if n > 0:
            expansion = max(expansion, float(np.max(np.abs(diff - expected))))
        ns.append(n)
        first.append(a)
        second.append(b)
        if found is None and a < delta and b < delta:
            found = n
    if found is None:
        raise WindowError(f"no N <= {window} reaches delta = {delta:g}; use a larger J")
    X = F1 + right_multiplier(shift, found, F2) + right_multiplier(shift, -found, F2)
    dx = seminorm_W(W, X - F1)
    dimg = seminorm_W(W, cosine(shift, found, X) - F2)
    decay = power_decay(shift, k)
    sl = _log2_slope([n for n in ns if n > k], [v for n, v in zip(ns, second) if n > k])
    return TransitivityReport("cosine", found, k, delta, window, ns, first, second, dx, dimg,
                              max(c1, c2), decay.slope, sl, expansion)


def random_supported(space: BlockSpace, k: int, rng: np.random.Generator,
                     scale: float = 1.0) -> np.ndarray:
    """Random operator right-supported on sum_{|j|<=k} P_j with ||F||_2 = scale."""
    F = linalg.random_complex(rng, (space.size, space.size)) @ space.band(k)
    return scale * F / linalg.schatten_norm(F, 2)
