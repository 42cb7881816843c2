"""1D model geometries and discrete Sobolev distances.

A metric on a 1D model is a strictly positive density sampled on a grid.
Two metrics are compared through the relative difference u = (g' - g)/g,
its finite-difference derivatives up to order r, and the extremal ratios
c1 = min(g'/g), c2 = max(g'/g).  The membership predicate for a common
generalized component thresholds c1 > 0 and flags norm overflow; a finite
grid cannot witness divergence of the norm itself.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError, ShapeError


class GridKind(str, Enum):
    INTERVAL = "interval"
    LINE_TRUNCATED = "line-truncated"
    CIRCLE = "circle"


class Boundary(str, Enum):
    DIRICHLET = "dirichlet"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class Grid1D:
    """Uniform 1D grid: an interval (with its endpoints as nodes), a
    truncated line, or a circle of given circumference.

    For interval kinds the nodes include both endpoints and the spacing is
    length/(n-1); for the circle the nodes are length/n apart and the
    boundary is periodic.
    """

    kind: GridKind
    n: int
    endpoints: tuple[float, float]
    boundary: Boundary = Boundary.DIRICHLET

    def __post_init__(self):
        if self.n < 3:
            raise DomainError(f"grid needs n >= 3 nodes, got {self.n}")
        a, b = self.endpoints
        if self.kind is GridKind.CIRCLE:
            if b <= 0:
                raise DomainError("circle circumference must be positive")
            if self.boundary is not Boundary.PERIODIC:
                object.__setattr__(self, "boundary", Boundary.PERIODIC)
        else:
            if not b > a:
                raise DomainError(f"endpoints must be ordered, got {self.endpoints}")

    @classmethod
    def interval(cls, a: float, b: float, n: int, kind: GridKind = GridKind.INTERVAL) -> "Grid1D":
        return cls(kind, n, (float(a), float(b)), Boundary.DIRICHLET)

    @classmethod
    def circle(cls, circumference: float, n: int) -> "Grid1D":
        return cls(GridKind.CIRCLE, n, (0.0, float(circumference)), Boundary.PERIODIC)

    @property
    def length(self) -> float:
        if self.kind is GridKind.CIRCLE:
            return self.endpoints[1]
        return self.endpoints[1] - self.endpoints[0]

    @property
    def spacing(self) -> float:
        if self.kind is GridKind.CIRCLE:
            return self.length / self.n
        return self.length / (self.n - 1)

    @property
    def periodic(self) -> bool:
        return self.boundary is Boundary.PERIODIC

    def nodes(self) -> np.ndarray:
        a, b = self.endpoints
        if self.kind is GridKind.CIRCLE:
            return a + self.spacing * np.arange(self.n)
        return np.linspace(a, b, self.n)

    def quadrature_weights(self) -> np.ndarray:
        """Node weights for integrating samples over the grid
        (trapezoidal on intervals, uniform on the circle)."""
        w = np.full(self.n, self.spacing)
        if not self.periodic:
            w[0] *= 0.5
            w[-1] *= 0.5
        return w


@dataclass(frozen=True)
class ScalarField:
    """Real samples on the nodes of a grid."""

    grid: Grid1D
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.shape != (self.grid.n,):
            raise ShapeError(
                f"field '{self.label}' has {vals.shape} values for a {self.grid.n}-node grid"
            )
        if not np.all(np.isfinite(vals)):
            raise DomainError(f"field '{self.label}' contains non-finite values")

    @classmethod
    def from_function(cls, grid: Grid1D, f, label: str = "") -> "ScalarField":
        return cls(grid, np.asarray([f(x) for x in grid.nodes()], dtype=float), label)

    @classmethod
    def from_expression(cls, grid: Grid1D, expr: str, label: str = "") -> "ScalarField":
        fn = parse_expression(expr)
        return cls(grid, fn(grid.nodes()), label or expr)

    @classmethod
    def constant(cls, grid: Grid1D, value: float, label: str = "") -> "ScalarField":
        return cls(grid, np.full(grid.n, float(value)), label)


@dataclass(frozen=True)
class MetricData:
    """A 1D metric sampled on a grid.

    density is the length density ds/dx (> 0): arclength element
    ds = density * dx, volume weight at a node = density * node quadrature
    weight, 1-form norm |omega|^2 = density**-2 * omega**2.
    """

    grid: Grid1D
    density: ScalarField

    def __post_init__(self):
        if self.density.grid is not self.grid and self.density.grid != self.grid:
            raise ShapeError("metric density sampled on a different grid")
        if np.any(self.density.values <= 0):
            raise DomainError("metric density must be strictly positive")

    def volume_weights(self) -> np.ndarray:
        return self.density.values * self.grid.quadrature_weights()

    def total_volume(self) -> float:
        return float(np.sum(self.volume_weights()))


# ---------------------------------------------------------------------------
# finite differences


def difference_matrix(grid: Grid1D) -> np.ndarray:
    """First-derivative matrix: central differences in the interior,
    one-sided at interval ends, periodic wrap on the circle."""
    n, h = grid.n, grid.spacing
    d = np.zeros((n, n))
    if grid.periodic:
        for i in range(n):
            d[i, (i + 1) % n] = 1.0 / (2 * h)
            d[i, (i - 1) % n] = -1.0 / (2 * h)
    else:
        for i in range(1, n - 1):
            d[i, i + 1] = 1.0 / (2 * h)
            d[i, i - 1] = -1.0 / (2 * h)
        d[0, 0], d[0, 1] = -1.0 / h, 1.0 / h
        d[-1, -1], d[-1, -2] = 1.0 / h, -1.0 / h
    return d


def finite_differences(grid: Grid1D, values: np.ndarray, order: int) -> list[np.ndarray]:
    """values and its difference quotients of orders 1..order."""
    out = [np.asarray(values, dtype=float)]
    d = difference_matrix(grid)
    for _ in range(order):
        out.append(d @ out[-1])
    return out


# ---------------------------------------------------------------------------
# Sobolev distance


@dataclass(frozen=True)
class SobolevDistanceReport:
    p: int
    r: int
    norm: float
    quasi_isometry_constants: tuple[float, float]
    in_component: bool

    @property
    def c1(self) -> float:
        return self.quasi_isometry_constants[0]

    @property
    def c2(self) -> float:
        return self.quasi_isometry_constants[1]


def _check_sobolev_args(g: MetricData, g2: MetricData, p: int, r: int) -> None:
    if g.grid != g2.grid:
        raise ShapeError("metrics live on different grids")
    if p not in (1, 2):
        raise DomainError(f"p must be 1 or 2, got {p}")
    if not 0 <= r <= 4:
        raise DomainError(f"derivative order r must be in 0..4, got {r}")


def _sobolev_norm(base: MetricData, other: MetricData, p: int, r: int) -> float:
    """Discrete |g' - g|_{g,p,r}: the relative difference (g'-g)/g and its
    difference quotients up to order r, p-integrated against dvol(g)."""
    u = (other.density.values - base.density.values) / base.density.values
    w = base.volume_weights()
    total = 0.0
    for deriv in finite_differences(base.grid, u, r):
        total += float(np.sum(np.abs(deriv) ** p * w))
    return total ** (1.0 / p)


def discrete_sobolev_distance(g: MetricData, g2: MetricData, p: int, r: int) -> SobolevDistanceReport:
    """Sobolev distance of two metrics on a shared grid, plus the extremal
    ratios c1 = min(g'/g), c2 = max(g'/g) and the component-membership flag."""
    _check_sobolev_args(g, g2, p, r)
    ratio = g2.density.values / g.density.values
    c1, c2 = float(np.min(ratio)), float(np.max(ratio))
    norm = _sobolev_norm(g, g2, p, r)
    in_component = bool(np.isfinite(norm) and c1 > 0)
    return SobolevDistanceReport(p, r, norm, (c1, c2), in_component)


def symmetry_defect(g: MetricData, g2: MetricData, p: int, r: int) -> float:
    """max of |g-g'|_{g,p,r} / |g-g'|_{g',p,r} and its inverse.

    Both norms vanish together; two vanishing norms are a degenerate input.
    """
    _check_sobolev_args(g, g2, p, r)
    if not discrete_sobolev_distance(g, g2, p, r).in_component:
        raise DomainError("symmetry defect requires metrics in one component")
    n_fwd = _sobolev_norm(g, g2, p, r)
    n_bwd = _sobolev_norm(g2, g, p, r)
    if n_fwd == 0.0 and n_bwd == 0.0:
        raise DomainError("symmetry defect undefined for identical metrics")
    return max(n_fwd / n_bwd, n_bwd / n_fwd)


# ---------------------------------------------------------------------------
# closed-form field expressions

_ALLOWED_CALLS = {"tanh", "exp", "gauss"}
_ALLOWED_NODES = (
    ast.Expression, ast.BinOp, ast.UnaryOp, ast.Add, ast.Sub, ast.Mult,
    ast.Div, ast.Pow, ast.USub, ast.UAdd, ast.Constant, ast.Name,
    ast.Call, ast.Load,
)
_CONSTANTS = {"pi": math.pi, "e": math.e}


def parse_expression(expr: str):
    """Compile a closed-form field expression into a vectorized callable.

    Grammar: the variable x, numeric constants (plus pi, e), the operators
    + - * / and ** (powers), and the functions tanh, exp, gauss(mu, sigma)
    with gauss(mu, sigma)(x) = exp(-((x - mu)/sigma)**2).
    """
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise DomainError(f"cannot parse expression {expr!r}: {exc}") from exc
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED_NODES):
            raise DomainError(
                f"expression {expr!r} uses unsupported syntax: {type(node).__name__}"
            )
        if isinstance(node, ast.Name) and node.id not in ({"x"} | _ALLOWED_CALLS | set(_CONSTANTS)):
            raise DomainError(f"unknown name {node.id!r} in expression {expr!r}")
        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in _ALLOWED_CALLS:
                raise DomainError(f"unsupported function call in expression {expr!r}")

    code = compile(tree, "<field-expression>", "eval")

    def fn(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)

        def gauss(mu, sigma):
            return np.exp(-(((x - mu) / sigma) ** 2))

        env = {"x": x, "tanh": np.tanh, "exp": np.exp, "gauss": gauss, **_CONSTANTS}
        out = eval(code, {"__builtins__": {}}, env)  # noqa: S307 (whitelisted AST)
        return np.broadcast_to(np.asarray(out, dtype=float), x.shape).copy()

    fn.expression = expr
    return fn
