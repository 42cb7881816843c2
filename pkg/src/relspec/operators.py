"""Discrete self-adjoint operators and operator pairs.

All operators are real square matrices that are self-adjoint with respect
to a diagonal positive weight G (the discrete volume element times fibre
metric): G @ M is symmetric.  Graded (Dirac-type) operators carry a +-1
diagonal grading tau with tau M tau = -M.

Conventions:
  * Dirichlet problems act on the interior nodes of their interval grid.
  * Second-derivative blocks use the 5-point 4th-order stencil; near
    interval ends the out-of-range couplings are dropped and the matrix is
    resymmetrized (the affected eigenfunctions of every model built here
    are exponentially small at the truncation boundary).
  * First-order blocks use antisymmetric central differences so discrete
    adjoint relations hold exactly.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .errors import ComponentViolationError, DomainError, GradingError, ShapeError
from .geometry import Boundary, Grid1D, GridKind, MetricData, ScalarField

SELF_ADJOINT_TOL = 1e-12
GRADING_TOL = 1e-12
OP_FORMAT_MAGIC = "RELSPEC-OP v1"


@dataclass(frozen=True)
class WeightedSpace:
    """Finite-dimensional weighted L2 space over the active nodes of a grid.

    weight holds the positive diagonal mass per node; blocks > 1 means
    `blocks` internal degrees of freedom per node, laid out block-major.
    """

    grid: Grid1D
    positions: np.ndarray
    weight: np.ndarray
    blocks: int = 1

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        w = np.asarray(self.weight, dtype=float)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "weight", w)
        if pos.shape != w.shape:
            raise ShapeError("positions and weight differ in length")
        if np.any(w <= 0):
            raise DomainError("weight must be strictly positive")
        if self.blocks < 1:
            raise DomainError("blocks must be >= 1")

    @property
    def n_nodes(self) -> int:
        return self.positions.size

    @property
    def dimension(self) -> int:
        return self.n_nodes * self.blocks

    def full_weight(self) -> np.ndarray:
        """Weight vector over the full dimension (nodes repeated per block)."""
        return np.tile(self.weight, self.blocks)

    def compatible(self, other: "WeightedSpace") -> bool:
        return (
            self.blocks == other.blocks
            and self.n_nodes == other.n_nodes
            and np.allclose(self.positions, other.positions)
        )


def active_positions(grid: Grid1D) -> np.ndarray:
    """Active nodes: all of them on periodic grids, the interior on
    Dirichlet intervals."""
    nodes = grid.nodes()
    if grid.periodic:
        return nodes
    return nodes[1:-1]


def uniform_space(grid: Grid1D, blocks: int = 1) -> WeightedSpace:
    pos = active_positions(grid)
    return WeightedSpace(grid, pos, np.full(pos.size, grid.spacing), blocks)


@dataclass(frozen=True)
class SelfAdjointOperator:
    """Real matrix self-adjoint w.r.t. the weighted inner product of its
    space; optionally graded.

    spectral_weight scales trace sums: 0.5 for the realified complex
    first-order circle operator whose real spectrum doubles every complex
    eigenvalue.
    """

    space: WeightedSpace
    matrix: np.ndarray
    grading: np.ndarray | None = None
    storage: str = "dense"
    spectral_weight: float = 1.0
    label: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", m)
        d = self.space.dimension
        if m.shape != (d, d):
            raise ShapeError(f"matrix shape {m.shape} does not match space dimension {d}")
        g = self.space.full_weight()
        gm = g[:, None] * m
        resid = np.max(np.abs(gm - gm.T))
        scale = max(1.0, np.max(np.abs(gm)))
        if resid > SELF_ADJOINT_TOL * scale:
            raise DomainError(
                f"operator '{self.label}' not self-adjoint: residual {resid:.3e} (scale {scale:.3e})"
            )
        if self.grading is not None:
            tau = np.asarray(self.grading, dtype=float)
            object.__setattr__(self, "grading", tau)
            if tau.shape != (d,):
                raise ShapeError("grading length does not match dimension")
            if np.max(np.abs(tau * tau - 1.0)) > GRADING_TOL:
                raise GradingError("grading is not a +-1 sequence")

    @property
    def dimension(self) -> int:
        return self.space.dimension

    def is_odd(self, tol: float = GRADING_TOL) -> bool:
        """True if the grading anticommutes with the operator."""
        if self.grading is None:
            return False
        anti = self.grading[:, None] * self.matrix + self.matrix * self.grading[None, :]
        scale = max(1.0, np.max(np.abs(self.matrix)))
        return bool(np.max(np.abs(anti)) <= tol * scale)

    def require_odd(self) -> None:
        if not self.is_odd():
            raise GradingError(f"operator '{self.label}' is not odd w.r.t. its grading")


# ---------------------------------------------------------------------------
# difference stencils


def laplacian_matrix(grid: Grid1D, order: int = 4) -> np.ndarray:
    """Discrete -d^2/dx^2 on the active nodes; order 2 (3-point) or 4
    (5-point).  Dirichlet couplings past the boundary are dropped."""
    if order not in (2, 4):
        raise DomainError(f"laplacian order must be 2 or 4, got {order}")
    m = active_positions(grid).size
    h2 = grid.spacing ** 2
    if order == 2:
        diag, off = 2.0 / h2, {1: -1.0 / h2}
    else:
        diag, off = 30.0 / (12 * h2), {1: -16.0 / (12 * h2), 2: 1.0 / (12 * h2)}
    a = np.diag(np.full(m, diag))
    for k, val in off.items():
        for i in range(m):
            if grid.periodic:
                a[i, (i + k) % m] += val
                a[i, (i - k) % m] += val
            else:
                if i + k < m:
                    a[i, i + k] += val
                if i - k >= 0:
                    a[i, i - k] += val
    return a


def derivative_matrix(grid: Grid1D) -> np.ndarray:
    """Antisymmetric central first-derivative matrix on active nodes
    (Dirichlet: couplings to the zero boundary values are dropped)."""
    m = active_positions(grid).size
    h = grid.spacing
    d = np.zeros((m, m))
    for i in range(m):
        if grid.periodic:
            d[i, (i + 1) % m] += 1.0 / (2 * h)
            d[i, (i - 1) % m] += -1.0 / (2 * h)
        else:
            if i + 1 < m:
                d[i, i + 1] = 1.0 / (2 * h)
            if i - 1 >= 0:
                d[i, i - 1] = -1.0 / (2 * h)
    return d


def sampled_derivative(grid: Grid1D, values: np.ndarray) -> np.ndarray:
    """4th-order finite-difference derivative of node samples (used when no
    analytic derivative is supplied)."""
    v = np.asarray(values, dtype=float)
    h = grid.spacing
    n = v.size
    out = np.empty(n)
    if grid.periodic:
        ip1, im1 = np.roll(v, -1), np.roll(v, 1)
        ip2, im2 = np.roll(v, -2), np.roll(v, 2)
        return (8 * (ip1 - im1) - (ip2 - im2)) / (12 * h)
    for i in range(n):
        if 2 <= i <= n - 3:
            out[i] = (8 * (v[i + 1] - v[i - 1]) - (v[i + 2] - v[i - 2])) / (12 * h)
        elif i == 0:
            out[i] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h)
        elif i == 1:
            out[i] = (v[2] - v[0]) / (2 * h)
        elif i == n - 2:
            out[i] = (v[n - 1] - v[n - 3]) / (2 * h)
        else:
            out[i] = (3 * v[n - 1] - 4 * v[n - 2] + v[n - 3]) / (2 * h)
    return out


# ---------------------------------------------------------------------------
# model builders


def build_schrodinger(grid: Grid1D, v: ScalarField, order: int = 2) -> SelfAdjointOperator:
    """-d^2/dx^2 + V with the grid's boundary condition, uniform weight."""
    if v.grid != grid:
        raise ShapeError("potential sampled on a different grid")
    space = uniform_space(grid)
    vals = v.values if grid.periodic else v.values[1:-1]
    mat = laplacian_matrix(grid, order=order) + np.diag(vals)
    return SelfAdjointOperator(space, mat, storage="banded", label=f"schrodinger[{v.label}]")


@dataclass(frozen=True)
class GradedPair:
    """Two odd graded operators on one 2-block space.

    Block layout (block-major): the first node-block carries the + parity,
    the second the - parity; tau = (+1, ..., +1, -1, ..., -1).
    D = [[0, Qminus], [Qplus, 0]] with Qminus the weighted adjoint of
    Qplus.  The squares are assembled independently from the Weitzenboeck
    potentials W^2 -+ W' so their spectra carry the supersymmetric pairing
    of the continuum model.
    """

    d: SelfAdjointOperator
    d_prime: SelfAdjointOperator
    q_plus: np.ndarray
    q_plus_prime: np.ndarray
    h_plus: SelfAdjointOperator
    h_minus: SelfAdjointOperator
    h_plus_prime: SelfAdjointOperator
    h_minus_prime: SelfAdjointOperator

    def __post_init__(self):
        if not self.d.space.compatible(self.d_prime.space):
            raise ShapeError("graded pair operators on incompatible spaces")
        if self.d.grading is None or self.d_prime.grading is None:
            raise GradingError("graded pair requires graded operators")
        if np.any(self.d.grading != self.d_prime.grading):
            raise GradingError("graded pair with mismatched gradings")
        self.d.require_odd()
        self.d_prime.require_odd()

    @property
    def space(self) -> WeightedSpace:
        return self.d.space

    @property
    def grading(self) -> np.ndarray:
        return self.d.grading

    def squares(self, primed: bool) -> tuple[SelfAdjointOperator, SelfAdjointOperator]:
        if primed:
            return self.h_plus_prime, self.h_minus_prime
        return self.h_plus, self.h_minus


def _dirac_from_supercharge(space2: WeightedSpace, q_plus: np.ndarray, label: str) -> SelfAdjointOperator:
    m = q_plus.shape[0]
    d = np.zeros((2 * m, 2 * m))
    d[:m, m:] = q_plus.T  # Qminus = weighted adjoint of Qplus (uniform weight)
    d[m:, :m] = q_plus
    tau = np.concatenate([np.ones(m), -np.ones(m)])
    return SelfAdjointOperator(space2, d, grading=tau, label=label)


def build_susy_pair(
    grid: Grid1D,
    w: ScalarField,
    w2: ScalarField,
    w_prime: ScalarField | None = None,
    w2_prime: ScalarField | None = None,
    decay_tol: float = 1e-8,
) -> GradedPair:
    """Supersymmetric pair for superpotentials W, W2 on a truncated line.

    Qplus = d/dx + W, Qminus = -d/dx + W (central differences, exact
    adjoints); the squares are the Schroedinger operators with potentials
    W^2 -+ W'.  W - W2 must decay at the truncation ends, otherwise the
    pair does not lie in one generalized component.
    """
    if w.grid != grid or w2.grid != grid:
        raise ShapeError("superpotential sampled on a different grid")
    if grid.periodic:
        raise DomainError("SUSY pair expects a truncated-line (interval) grid")
    edge = max(1, grid.n // 10)
    diff = np.abs(w.values - w2.values)
    if max(diff[:edge].max(), diff[-edge:].max()) > decay_tol:
        raise ComponentViolationError(
            "W - W2 does not decay at the truncation ends; the pair would "
            "leave the generalized component"
        )
    wp = w_prime.values if w_prime is not None else sampled_derivative(grid, w.values)
    w2p = w2_prime.values if w2_prime is not None else sampled_derivative(grid, w2.values)

    space2 = uniform_space(grid, blocks=2)
    space1 = uniform_space(grid, blocks=1)
    der = derivative_matrix(grid)

    def interior(vals):
        return vals[1:-1]

    ops = {}
    for tag, wv, wpv in (("", w.values, wp), ("'", w2.values, w2p)):
        q_plus = der + np.diag(interior(wv))
        lap = laplacian_matrix(grid, order=4)
        v_plus = interior(wv) ** 2 - interior(wpv)
        v_minus = interior(wv) ** 2 + interior(wpv)
        ops[tag] = (
            q_plus,
            SelfAdjointOperator(space1, lap + np.diag(v_plus), storage="banded",
                                label=f"H+{tag}"),
            SelfAdjointOperator(space1, lap + np.diag(v_minus), storage="banded",
                                label=f"H-{tag}"),
        )
    d = _dirac_from_supercharge(space2, ops[""][0], f"susy[{w.label}]")
    d2 = _dirac_from_supercharge(space2, ops["'"][0], f"susy[{w2.label}]")
    return GradedPair(
        d, d2, ops[""][0], ops["'"][0],
        ops[""][1], ops[""][2], ops["'"][1], ops["'"][2],
    )


def _staggered_derivative(n: int, h: float) -> np.ndarray:
    """4th-order node-to-edge derivative on a periodic grid; edge i sits
    between nodes i and i+1."""
    d = np.zeros((n, n))
    for i in range(n):
        d[i, (i + 1) % n] += 27.0
        d[i, i] += -27.0
        d[i, (i + 2) % n] += -1.0
        d[i, (i - 1) % n] += 1.0
    return d / (24.0 * h)


def build_derham_circle(grid: Grid1D, metric: MetricData) -> tuple[SelfAdjointOperator, SelfAdjointOperator]:
    """(Delta_0 on functions, Delta_1 on 1-forms) for a circle metric.

    Delta_0 = d* d and Delta_1 = d d* with d the periodic staggered
    difference and adjoints taken in the metric-weighted inner products;
    the nonzero spectra coincide as multisets by construction.
    """
    if grid.kind is not GridKind.CIRCLE:
        raise DomainError("de Rham complex requires a circle grid")
    if metric.grid != grid:
        raise ShapeError("metric on a different grid")
    n, h = grid.n, grid.spacing
    rho = metric.density.values
    rho_edge = 0.5 * (rho + np.roll(rho, -1))
    w0 = rho * h                      # function inner product: dvol
    w1 = h / rho_edge                 # 1-form inner product: rho^-2 dvol
    d = _staggered_derivative(n, h)
    dstar = np.diag(1.0 / w0) @ d.T @ np.diag(w1)
    delta0 = dstar @ d
    delta1 = d @ dstar
    pos = grid.nodes()
    space0 = WeightedSpace(grid, pos, w0)
    space1 = WeightedSpace(grid, pos + 0.5 * h, w1)
    return (
        SelfAdjointOperator(space0, delta0, label="derham-Delta0"),
        SelfAdjointOperator(space1, delta1, label="derham-Delta1"),
    )


def build_eta_model(grid: Grid1D, a: ScalarField) -> SelfAdjointOperator:
    """First-order circle operator -i d/dtheta + a(theta), realified.

    The derivative uses the exact periodic Fourier symbol (central
    differences would introduce spectral doublers that destroy the
    spectral asymmetry this model exists to measure).  The real 2-block
    rotation form doubles every complex eigenvalue, so the operator
    carries spectral_weight = 1/2.
    """
    if grid.kind is not GridKind.CIRCLE:
        raise DomainError("eta model requires a circle grid")
    if a.grid != grid:
        raise ShapeError("coefficient field on a different grid")
    n = grid.n
    length = grid.length
    # Fourier modes; for even n the Nyquist mode is assigned +n/2.
    k = np.fft.fftfreq(n, d=1.0 / n)
    if n % 2 == 0:
        k[n // 2] = n // 2
    freqs = (2.0 * np.pi / length) * k
    phase = np.exp(2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n)
    f = phase.conj() / np.sqrt(n)
    hc = f.conj().T @ np.diag(freqs.astype(complex)) @ f + np.diag(a.values.astype(complex))
    hc = 0.5 * (hc + hc.conj().T)
    real = np.block([[hc.real, -hc.imag], [hc.imag, hc.real]])
    space = WeightedSpace(grid, grid.nodes(), np.full(n, grid.spacing), blocks=2)
    return SelfAdjointOperator(
        space, real, spectral_weight=0.5, label=f"eta-circle[{a.label}]"
    )


def transport_operator(op: SelfAdjointOperator, target: WeightedSpace) -> SelfAdjointOperator:
    """Transport op to the target weighted space by the diagonal unitary
    comparison map; self-adjoint w.r.t. the target weight, spectrum
    preserved exactly."""
    if not op.space.compatible(target):
        raise ShapeError("transport requires same grid positions and block count")
    gs = op.space.full_weight()
    gt = target.full_weight()
    scale = np.sqrt(gs / gt)
    mat = scale[:, None] * op.matrix * (1.0 / scale)[None, :]
    return SelfAdjointOperator(
        target, mat, grading=op.grading, storage=op.storage,
        spectral_weight=op.spectral_weight, label=f"transport[{op.label}]",
    )


@dataclass(frozen=True)
class PaddedPair:
    """Two operators agreeing outside their cores, carried on the padded
    ambient space L2(K) + L2(K') + L2(exterior).

    The ambient realization extends each operator by zero on the foreign
    core; projP / projP2 select each operator's natural subspace.
    """

    op_a: SelfAdjointOperator
    op_b: SelfAdjointOperator
    core_a: tuple[int, int]
    core_b: tuple[int, int]

    @property
    def ambient_dimension(self) -> int:
        return self.op_a.dimension + (self.core_b[1] - self.core_b[0])

    def ambient(self, which: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(matrix, weight, projection diagonal) of the zero-extended
        operator on the ambient space.

        Ambient index order: [own indices..., foreign core indices...].
        """
        if which == "a":
            op, foreign = self.op_a, self.core_b
            other = self.op_b
        elif which == "b":
            op, foreign = self.op_b, self.core_a
            other = self.op_a
        else:
            raise DomainError("which must be 'a' or 'b'")
        k = foreign[1] - foreign[0]
        n = op.dimension
        mat = np.zeros((n + k, n + k))
        mat[:n, :n] = op.matrix
        weight = np.concatenate([
            op.space.full_weight(),
            other.space.full_weight()[foreign[0]:foreign[1]],
        ])
        proj = np.concatenate([np.ones(n), np.zeros(k)])
        return mat, weight, proj


def build_padded_pair(
    op_a: SelfAdjointOperator,
    op_b: SelfAdjointOperator,
    core_a: tuple[int, int],
    core_b: tuple[int, int],
    tol: float = 1e-10,
) -> PaddedPair:
    """Pair two operators that agree outside contiguous cores.

    The exteriors (entries and weights outside the cores, with the index
    shift induced by differing core sizes) must match within tol.
    """
    na, nb = op_a.dimension, op_b.dimension
    la, ha = core_a
    lb, hb = core_b
    if not (0 <= la <= ha <= na and 0 <= lb <= hb <= nb):
        raise DomainError("core ranges out of bounds")
    if la != lb or (na - ha) != (nb - hb):
        raise ShapeError("exterior parts have different lengths")

    ext_a = np.r_[np.arange(la), np.arange(ha, na)]
    ext_b = np.r_[np.arange(lb), np.arange(hb, nb)]
    wa = op_a.space.full_weight()[ext_a]
    wb = op_b.space.full_weight()[ext_b]
    ma = op_a.matrix[np.ix_(ext_a, ext_a)]
    mb = op_b.matrix[np.ix_(ext_b, ext_b)]
    scale = max(1.0, float(np.max(np.abs(ma))) if ma.size else 1.0)
    if ma.size and (np.max(np.abs(ma - mb)) > tol * scale or np.max(np.abs(wa - wb)) > tol):
        raise ComponentViolationError(
            "operators disagree outside their cores beyond tolerance"
        )
    return PaddedPair(op_a, op_b, (la, ha), (lb, hb))


# ---------------------------------------------------------------------------
# text serialization


def serialize_operator(op: SelfAdjointOperator) -> str:
    """Versioned text format: magic line, header fields, weight samples,
    dense matrix rows (17 significant digits)."""
    buf = io.StringIO()
    g = op.space.grid
    print(OP_FORMAT_MAGIC, file=buf)
    print(f"kind {g.kind.value}", file=buf)
    print(f"n {g.n}", file=buf)
    print(f"endpoints {g.endpoints[0]!r} {g.endpoints[1]!r}", file=buf)
    print(f"boundary {g.boundary.value}", file=buf)
    print(f"blocks {op.space.blocks}", file=buf)
    print(f"storage {op.storage}", file=buf)
    print(f"spectral_weight {op.spectral_weight!r}", file=buf)
    print(f"label {op.label}", file=buf)
    print("weight " + " ".join(f"{w:.17g}" for w in op.space.weight), file=buf)
    if op.grading is not None:
        print("grading " + " ".join(str(int(t)) for t in op.grading), file=buf)
    print("matrix", file=buf)
    for row in op.matrix:
        print(" ".join(f"{v:.17g}" for v in row), file=buf)
    return buf.getvalue()


def deserialize_operator(text: str) -> SelfAdjointOperator:
    lines = text.splitlines()
    if not lines or lines[0].strip() != OP_FORMAT_MAGIC:
        raise DomainError(f"not a {OP_FORMAT_MAGIC} document")
    fields: dict[str, str] = {}
    i = 1
    while i < len(lines) and not lines[i].startswith("matrix"):
        key, _, rest = lines[i].partition(" ")
        fields[key] = rest
        i += 1
    rows = [np.array(ln.split(), dtype=float) for ln in lines[i + 1:] if ln.strip()]
    mat = np.vstack(rows)
    e0, e1 = fields["endpoints"].split()
    grid = Grid1D(
        GridKind(fields["kind"]), int(fields["n"]), (float(e0), float(e1)),
        Boundary(fields["boundary"]),
    )
    blocks = int(fields["blocks"])
    weight = np.array(fields["weight"].split(), dtype=float)
    space = WeightedSpace(grid, active_positions(grid), weight, blocks)
    grading = None
    if "grading" in fields:
        grading = np.array(fields["grading"].split(), dtype=float)
    return SelfAdjointOperator(
        space, mat, grading=grading, storage=fields.get("storage", "dense"),
        spectral_weight=float(fields.get("spectral_weight", "1.0")),
        label=fields.get("label", ""),
    )
