"""Relative heat traces, Duhamel residuals, and kernel diagnostics.

theta(t) = tr exp(-t A) - tr exp(-t B) for a pair in one generalized
component.  The individual traces diverge with the grid size; only the
difference stabilizes, so everything here is phrased in terms of pairs.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .errors import DomainError, ShapeError
from .operators import PaddedPair, SelfAdjointOperator


@dataclass(frozen=True)
class HeatTraceSamples:
    """Sampled relative trace theta(t) (optionally a supertrace column)."""

    t: np.ndarray
    trace: np.ndarray
    supertrace: np.ndarray | None = None

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        tr = np.asarray(self.trace, dtype=float)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "trace", tr)
        if t.shape != tr.shape:
            raise ShapeError("t and trace lengths differ")
        if np.any(t <= 0) or np.any(np.diff(t) <= 0):
            raise DomainError("t samples must be positive and strictly increasing")
        if self.supertrace is not None:
            st = np.asarray(self.supertrace, dtype=float)
            object.__setattr__(self, "supertrace", st)
            if st.shape != t.shape:
                raise ShapeError("supertrace length differs from t")

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["t", "trace"] + (["supertrace"] if self.supertrace is not None else [])
        print(",".join(cols), file=buf)
        for i in range(self.t.size):
            row = [f"{self.t[i]:.17g}", f"{self.trace[i]:.17g}"]
            if self.supertrace is not None:
                row.append(f"{self.supertrace[i]:.17g}")
            print(",".join(row), file=buf)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "HeatTraceSamples":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        header = lines[0].split(",")
        if header[:2] != ["t", "trace"]:
            raise DomainError("heat-trace CSV must start with columns t,trace")
        data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
        st = data[:, 2] if len(header) > 2 else None
        return cls(data[:, 0], data[:, 1], st)


@dataclass(frozen=True)
class DuhamelReport:
    t: float
    residual: float
    quadrature_nodes: int

    def __post_init__(self):
        if self.residual < 0:
            raise DomainError("residual must be nonnegative")


def relative_heat_trace(spec_a, spec_b, ts: np.ndarray) -> HeatTraceSamples:
    """theta(t) = heat sum of A minus heat sum of B on the given t grid.

    Accepts anything exposing heat_sum(t): matrix Spectrum objects or
    closed-form ExplicitSpectrum laws.
    """
    ts = np.asarray(ts, dtype=float)
    theta = np.array([spec_a.heat_sum(t) - spec_b.heat_sum(t) for t in ts])
    return HeatTraceSamples(ts, theta)


# ---------------------------------------------------------------------------
# semigroups and kernels


def _weighted_eig(op: SelfAdjointOperator):
    g = np.sqrt(op.space.full_weight())
    s = g[:, None] * op.matrix / g[None, :]
    ev, u = linalg.eigh(0.5 * (s + s.T))
    return g, ev, u


class Semigroup:
    """exp(-t M) for one operator, reusing a single eigendecomposition."""

    def __init__(self, op: SelfAdjointOperator):
        self.op = op
        self._g, self._ev, self._u = _weighted_eig(op)

    def matrix(self, t: float) -> np.ndarray:
        """exp(-t M) as a matrix in the nodal basis."""
        if t < 0:
            raise DomainError(f"semigroup time must be >= 0, got {t}")
        core = self._u * np.exp(-t * self._ev)[None, :] @ self._u.T
        return (core * self._g[None, :]) / self._g[:, None]

    def kernel(self, t: float) -> np.ndarray:
        """Heat kernel values K_t(x, y) = (exp(-tM) G^{-1})_{xy}."""
        return self.matrix(t) / self.op.space.full_weight()[None, :]

    def trace(self, t: float) -> float:
        return self.op.spectral_weight * float(np.sum(np.exp(-t * self._ev)))


def heat_kernel_matrix(op: SelfAdjointOperator, t: float) -> np.ndarray:
    """exp(-t M): symmetric w.r.t. the space weight, approaching the
    identity as t -> 0+."""
    return Semigroup(op).matrix(t)


def _duhamel_quadrature(sg_a: Semigroup, sg_b: Semigroup, t: float, nodes: int) -> np.ndarray:
    """Gauss-Legendre value of int_0^t exp(-sA)(A - B) exp(-(t-s)B) ds."""
    diff = sg_a.op.matrix - sg_b.op.matrix
    x, w = np.polynomial.legendre.leggauss(nodes)
    s = 0.5 * t * (x + 1.0)
    ws = 0.5 * t * w
    integral = np.zeros_like(diff)
    for si, wi in zip(s, ws):
        integral += wi * (sg_a.matrix(si) @ diff @ sg_b.matrix(t - si))
    return integral


def duhamel_residual(
    op_a: SelfAdjointOperator,
    op_b: SelfAdjointOperator,
    t: float,
    nodes: int = 32,
) -> DuhamelReport:
    """Max-norm defect of the Duhamel identity

        exp(-tA) - exp(-tB) = - int_0^t exp(-sA)(A - B) exp(-(t-s)B) ds

    with the integral evaluated by `nodes`-point Gauss-Legendre quadrature.
    """
    if not op_a.space.compatible(op_b.space):
        raise ShapeError("Duhamel residual needs operators on one space")
    if t <= 0:
        raise DomainError(f"time must be positive, got {t}")
    if nodes < 8:
        raise DomainError("quadrature needs at least 8 nodes")
    sg_a, sg_b = Semigroup(op_a), Semigroup(op_b)
    defect = sg_a.matrix(t) - sg_b.matrix(t) + _duhamel_quadrature(sg_a, sg_b, t, nodes)
    return DuhamelReport(t, float(np.max(np.abs(defect))), nodes)


def weighted_duhamel_residual(
    op_a: SelfAdjointOperator,
    op_b: SelfAdjointOperator,
    alpha: np.ndarray,
    t: float,
    nodes: int = 48,
) -> DuhamelReport:
    """Defect of the weighted comparison identity

        exp(-tA) alpha - exp(-tB)
            = exp(-tA)(alpha - 1) - int_0^t exp(-sA)(A - B) exp(-(t-s)B) ds

    for a diagonal density ratio alpha (source weight / target weight),
    with the bracket replaced by its Duhamel quadrature.
    """
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (op_a.dimension,):
        raise ShapeError("alpha must be a diagonal over the operator dimension")
    sg_a, sg_b = Semigroup(op_a), Semigroup(op_b)
    integral = _duhamel_quadrature(sg_a, sg_b, t, nodes)
    ea = sg_a.matrix(t)
    lhs = ea * alpha[None, :] - sg_b.matrix(t)
    rhs = ea * (alpha - 1.0)[None, :] - integral
    return DuhamelReport(t, float(np.max(np.abs(lhs - rhs))), nodes)


def projected_relative_trace(pair: PaddedPair, ts: np.ndarray) -> HeatTraceSamples:
    """Relative trace of the zero-extended pair on the padded ambient
    space, with each semigroup compressed to its operator's subspace."""
    ts = np.asarray(ts, dtype=float)
    total = np.zeros(ts.size)
    for which, sign in (("a", 1.0), ("b", -1.0)):
        mat, weight, proj = pair.ambient(which)
        g = np.sqrt(weight)
        s = g[:, None] * mat / g[None, :]
        ev, u = linalg.eigh(0.5 * (s + s.T))
        op = pair.op_a if which == "a" else pair.op_b
        diag_basis = proj @ (u ** 2)  # sum_j proj_j u_jk^2 per eigenindex k
        for i, t in enumerate(ts):
            total[i] += sign * op.spectral_weight * float(np.sum(diag_basis * np.exp(-t * ev)))
    return HeatTraceSamples(ts, total)


# ---------------------------------------------------------------------------
# diagnostics


@dataclass(frozen=True)
class GaussianDecayReport:
    """Off-diagonal kernel decay fit |K_t(x,y)| <= C exp(-d^2 / ((4+delta) t)).

    slope_ratio is the fitted coefficient of -d^2/(4t) in log|K|; delta is
    the equivalent widening of the Gaussian denominator, and the
    certificate asserts a Gaussian-type bound holds with delta <= 1.
    """

    t: float
    r: float
    c: float
    delta: float
    slope_ratio: float
    r_squared: float

    @property
    def certified(self) -> bool:
        return 0.0 <= self.delta <= 1.0 and self.r_squared > 0.9


def decay_diagnostics(op: SelfAdjointOperator, t: float, r: float = 0.0,
                      floor: float = 1e-14) -> GaussianDecayReport:
    """Regress log |K_t(x, y)| against -d(x,y)^2 / 4t over kernel entries
    with d(x, y) > r and magnitude above the floor."""
    if t <= 0 or r < 0:
        raise DomainError("decay diagnostics need t > 0 and r >= 0")
    sg = Semigroup(op)
    k = sg.kernel(t)
    pos_full = np.tile(op.space.positions, op.space.blocks)
    d2 = (pos_full[:, None] - pos_full[None, :]) ** 2
    mask = (d2 > max(r, 0.0) ** 2) & (d2 > 0) & (np.abs(k) > floor)
    if np.sum(mask) < 8:
        raise DomainError("not enough off-diagonal kernel mass for a decay fit")
    x = -d2[mask] / (4.0 * t)
    y = np.log(np.abs(k[mask]))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 0.0
    delta = 4.0 * (1.0 / slope - 1.0) if slope > 0 else np.inf
    return GaussianDecayReport(t, r, float(np.exp(intercept)), float(delta),
                               float(slope), r2)


def plateau_decay_rate(ts: np.ndarray, theta: np.ndarray, h: float,
                       floor: float = 1e-13) -> float:
    """Exponential rate of theta(t) -> h: slope of -log|theta - h| vs t
    over samples with residual above the floor."""
    ts = np.asarray(ts, dtype=float)
    resid = np.abs(np.asarray(theta, dtype=float) - h)
    mask = resid > floor
    if np.sum(mask) < 3:
        raise DomainError("residuals too small to resolve a decay rate")
    slope, _ = np.polyfit(ts[mask], np.log(resid[mask]), 1)
    return float(-slope)


def trace_norm_curve(
    op_a: SelfAdjointOperator,
    op_b: SelfAdjointOperator,
    ts: np.ndarray,
    weight_by: SelfAdjointOperator | None = None,
) -> np.ndarray:
    """Trace norms |W (exp(-tA) - exp(-tB))|_1 on the weighted space,
    optionally left-multiplied by another operator W (e.g. the first-order
    operator whose squares A and B are)."""
    if not op_a.space.compatible(op_b.space):
        raise ShapeError("trace norm curve needs operators on one space")
    sg_a, sg_b = Semigroup(op_a), Semigroup(op_b)
    g = np.sqrt(op_a.space.full_weight())
    out = np.empty(len(ts))
    for i, t in enumerate(np.asarray(ts, dtype=float)):
        diff = sg_a.matrix(t) - sg_b.matrix(t)
        if weight_by is not None:
            diff = weight_by.matrix @ diff
        sym = g[:, None] * diff / g[None, :]
        out[i] = op_a.spectral_weight * float(np.sum(linalg.svdvals(sym)))
    return out
