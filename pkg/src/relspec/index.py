"""Graded supertraces, relative/Witten indices, Krein spectral shift, n^c.

Sign convention for the spectral shift, pinned by the trace identity
tr(f(A) - f(B)) = int f'(lambda) xi(lambda) dlambda on diagonal cases:

    xi(lambda) = N_B(lambda) - N_A(lambda)

with N the inclusive (<=) eigenvalue counting function.  Equivalently
tr(e^{-tA}) - tr(e^{-tB}) = -t int e^{-t lambda} xi(lambda) dlambda.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .errors import DomainError, HypothesisError
from .heat import HeatTraceSamples, Semigroup, trace_norm_curve
from .operators import GradedPair, SelfAdjointOperator
from .spectra import Spectrum, eigensolve

NEAR_INTEGER_TOL = 1e-6


# ---------------------------------------------------------------------------
# Krein spectral shift


@dataclass(frozen=True)
class SpectralShift:
    """xi sampled on a grid, plus the exact staircase representation."""

    lambda_grid: np.ndarray
    xi: np.ndarray
    breakpoints: np.ndarray
    step_values: np.ndarray  # xi on [breakpoints[i], breakpoints[i+1]); last = tail
    gap_window: tuple[float, float] | None = None

    def to_csv(self) -> str:
        lines = ["lambda,xi"]
        for lam, x in zip(self.lambda_grid, self.xi):
            lines.append(f"{lam:.17g},{x:.17g}")
        return "\n".join(lines) + "\n"


def _staircase(a: Spectrum, b: Spectrum) -> tuple[np.ndarray, np.ndarray]:
    """Breakpoints (union of eigenvalues) and xi value on each interval
    [break_i, break_{i+1}), plus the constant tail value appended last."""
    points = np.unique(np.concatenate([a.eigenvalues, b.eigenvalues]))
    values = np.array([b.counting(p) - a.counting(p) for p in points])
    return points, values


def spectral_shift(a: Spectrum, b: Spectrum, lambda_grid: np.ndarray) -> SpectralShift:
    """xi(lambda) = N_B - N_A on the grid, with the exact staircase and
    the widest interior eigenvalue-free window (where xi is constant)."""
    lambda_grid = np.asarray(lambda_grid, dtype=float)
    points, values = _staircase(a, b)
    xi = np.array([b.counting(l) - a.counting(l) for l in lambda_grid])
    gap_window = None
    if points.size >= 2:
        widths = np.diff(points)
        i = int(np.argmax(widths))
        gap_window = (float(points[i]), float(points[i + 1]))
    return SpectralShift(lambda_grid, xi, points, values, gap_window)


def krein_heat_defect(a: Spectrum, b: Spectrum, t: float) -> float:
    """|[tr e^{-tA} - tr e^{-tB}] + t int e^{-t lambda} xi dlambda| with
    the integral taken exactly over the staircase."""
    if t <= 0:
        raise DomainError(f"t must be positive, got {t}")
    points, values = _staircase(a, b)
    integral = 0.0
    for i in range(points.size - 1):
        integral += values[i] * (np.exp(-t * points[i]) - np.exp(-t * points[i + 1])) / t
    integral += values[-1] * np.exp(-t * points[-1]) / t  # constant tail
    lhs = a.heat_sum(t) - b.heat_sum(t)
    return abs(lhs + t * integral)


def krein_test_defect(a: Spectrum, b: Spectrum, f) -> float:
    """|tr(f(A) - f(B)) - int f' xi| for a test function f vanishing at
    +infinity, with the integral taken exactly over the staircase."""
    points, values = _staircase(a, b)
    integral = 0.0
    for i in range(points.size - 1):
        integral += values[i] * (f(points[i + 1]) - f(points[i]))
    integral += values[-1] * (0.0 - f(points[-1]))  # tail up to f(+inf) = 0
    lhs = (a.weight * float(np.sum(f(a.eigenvalues)))
           - b.weight * float(np.sum(f(b.eigenvalues))))
    return abs(lhs - integral)


# ---------------------------------------------------------------------------
# graded traces and indices


def _side_spectra(pair: GradedPair, primed: bool) -> tuple[Spectrum, Spectrum]:
    h_plus, h_minus = pair.squares(primed)
    return eigensolve(h_plus), eigensolve(h_minus)


def relative_supertrace(pair: GradedPair, t_grid: np.ndarray) -> HeatTraceSamples:
    """Relative trace and supertrace of the squared pair over t_grid."""
    sp, sm = _side_spectra(pair, primed=False)
    sp2, sm2 = _side_spectra(pair, primed=True)
    t_grid = np.asarray(t_grid, dtype=float)
    trace = np.array([
        (sp.heat_sum(t) + sm.heat_sum(t)) - (sp2.heat_sum(t) + sm2.heat_sum(t))
        for t in t_grid
    ])
    st = np.array([
        (sp.heat_sum(t) - sm.heat_sum(t)) - (sp2.heat_sum(t) - sm2.heat_sum(t))
        for t in t_grid
    ])
    return HeatTraceSamples(t_grid, trace, st)


@dataclass(frozen=True)
class WittenIndexResult:
    kernel_route: float
    supertrace_route: float
    gap_mu: float

    @property
    def value(self) -> float:
        return self.kernel_route

    @property
    def consistent(self) -> bool:
        return abs(self.kernel_route - self.supertrace_route) < 1e-8

    @property
    def near_integer(self) -> bool:
        return abs(self.value - round(self.value)) < NEAR_INTEGER_TOL


def witten_index(h_plus, h_minus) -> WittenIndexResult:
    """dim ker H+ - dim ker H-, cross-computed as the graded heat trace
    str(tau e^{-tD^2}) at t = 10/gapMu.

    Accepts per-parity operators or their spectra.
    """
    sp = h_plus if isinstance(h_plus, Spectrum) else eigensolve(h_plus)
    sm = h_minus if isinstance(h_minus, Spectrum) else eigensolve(h_minus)
    gap = min(sp.require_gap(), sm.require_gap())
    if gap <= 0:
        raise HypothesisError("Witten index needs a positive gap above the kernel")
    kernel_route = sp.kernel_dim - sm.kernel_dim
    t_star = 10.0 / gap
    st_route = sp.heat_sum(t_star) - sm.heat_sum(t_star)
    return WittenIndexResult(float(kernel_route), float(st_route), float(gap))


@dataclass(frozen=True)
class IndexReport:
    relative_index: float
    t_constancy_drift: float
    ind_a: float
    ind_b: float
    nc_scattering: float

    @property
    def near_integer(self) -> bool:
        return abs(self.relative_index - round(self.relative_index)) < NEAR_INTEGER_TOL


def scattering_index(pair: GradedPair, t_grid: np.ndarray) -> IndexReport:
    """ind(D, D') from the relative supertrace, the per-side graded
    indices from kernel counts, and n^c = ind(D,D') - (indA - indB).

    For a gap-positive pair n^c vanishes (the trace-class scattering
    argument has no room in a purely discrete spectrum).
    """
    sp, sm = _side_spectra(pair, primed=False)
    sp2, sm2 = _side_spectra(pair, primed=True)
    t_grid = np.asarray(t_grid, dtype=float)
    st = np.array([
        (sp.heat_sum(t) - sm.heat_sum(t)) - (sp2.heat_sum(t) - sm2.heat_sum(t))
        for t in t_grid
    ])
    drift = float(np.max(st) - np.min(st))
    relative_index = float(np.median(st))
    ind_a = sp.kernel_dim - sm.kernel_dim
    ind_b = sp2.kernel_dim - sm2.kernel_dim
    nc = relative_index - (ind_a - ind_b)
    return IndexReport(relative_index, drift, float(ind_a), float(ind_b), float(nc))


# ---------------------------------------------------------------------------
# scattering certificate


@dataclass(frozen=True)
class ScatteringCertificate:
    t_samples: np.ndarray
    even_curve: np.ndarray      # |e^{-tH} - e^{-tH'}|_1
    odd_curve: np.ndarray       # |D e^{-tH} - D' e^{-tH'}|_1
    granted: bool


def _block_square(pair: GradedPair, primed: bool) -> SelfAdjointOperator:
    h_plus, h_minus = pair.squares(primed)
    m = h_plus.dimension
    mat = np.zeros((2 * m, 2 * m))
    mat[:m, :m] = h_plus.matrix
    mat[m:, m:] = h_minus.matrix
    return SelfAdjointOperator(pair.space, mat, grading=pair.grading,
                               label=f"H[{'prime' if primed else 'base'}]")


def susy_scattering_certificate(pair: GradedPair, t_samples: np.ndarray) -> ScatteringCertificate:
    """Check the two trace-class premises of the supersymmetric scattering
    setup numerically: both trace-norm curves finite and bounded on the
    sampled window (wave operators themselves are out of scope)."""
    t_samples = np.asarray(t_samples, dtype=float)
    if np.any(t_samples <= 0):
        raise DomainError("certificate window must avoid t = 0")
    ha = _block_square(pair, primed=False)
    hb = _block_square(pair, primed=True)
    even = trace_norm_curve(ha, hb, t_samples)
    # D-weighted difference: use each side's own first-order operator
    odd = np.empty_like(even)
    sg_a, sg_b = Semigroup(ha), Semigroup(hb)
    g = np.sqrt(ha.space.full_weight())
    for i, t in enumerate(t_samples):
        diff = pair.d.matrix @ sg_a.matrix(t) - pair.d_prime.matrix @ sg_b.matrix(t)
        odd[i] = float(np.sum(linalg.svdvals(g[:, None] * diff / g[None, :])))
    granted = bool(np.all(np.isfinite(even)) and np.all(np.isfinite(odd)))
    return ScatteringCertificate(t_samples, even, odd, granted)
