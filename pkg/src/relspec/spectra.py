"""Spectra of weighted self-adjoint operators and closed-form spectrum laws.

Matrix spectra are computed from the symmetrization S = G^{1/2} M G^{-1/2}
(diagonal weight G), with banded solvers when the matrix storage allows.
Closed-form laws provide exact eigenvalue sequences for the model problems
so heat sums can be evaluated to near machine precision independently of
any discretization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import DomainError, HypothesisError, NumericalError
from .operators import SelfAdjointOperator

KERNEL_RELATIVE_EPS = 2.0 ** -40


@dataclass(frozen=True)
class Spectrum:
    """Sorted eigenvalues with a trace weight and a kernel threshold.

    weight multiplies every spectral sum (1/2 for realified complex
    operators whose real spectrum doubles each eigenvalue).  Eigenvalues
    with |lambda| <= kernel_threshold count as kernel.
    """

    eigenvalues: np.ndarray
    weight: float = 1.0
    kernel_threshold: float | None = None
    label: str = ""

    def __post_init__(self):
        ev = np.sort(np.asarray(self.eigenvalues, dtype=float))
        object.__setattr__(self, "eigenvalues", ev)
        if ev.size == 0:
            raise DomainError("empty spectrum")
        if self.kernel_threshold is None:
            thresh = ev.size * np.max(np.abs(ev)) * KERNEL_RELATIVE_EPS
            object.__setattr__(self, "kernel_threshold", float(thresh))

    @property
    def kernel_dim(self) -> float:
        """Weighted dimension of the kernel."""
        return self.weight * float(np.sum(np.abs(self.eigenvalues) <= self.kernel_threshold))

    @property
    def gap_mu(self) -> float:
        """Smallest |eigenvalue| above the kernel threshold."""
        above = np.abs(self.eigenvalues)[np.abs(self.eigenvalues) > self.kernel_threshold]
        if above.size == 0:
            raise HypothesisError("spectrum has no eigenvalue above the kernel")
        return float(np.min(above))

    def require_gap(self) -> float:
        """The gap, raising if nonzero spectrum dips below the threshold
        without a clean separation (negative Laplace-type eigenvalues)."""
        mu = self.gap_mu
        if np.min(self.eigenvalues) < -self.kernel_threshold:
            raise HypothesisError(
                f"spectrum '{self.label}' has negative eigenvalues; "
                "nonnegativity hypothesis violated"
            )
        return mu

    def heat_sum(self, t: float) -> float:
        """weight * sum exp(-t lambda)."""
        if t <= 0:
            raise DomainError(f"heat time must be positive, got {t}")
        return self.weight * float(np.sum(np.exp(-t * self.eigenvalues)))

    def odd_heat_sum(self, t: float) -> float:
        """weight * sum over nonzero lambda of lambda exp(-t lambda^2)
        (the graded first-order heat trace tr D exp(-t D^2))."""
        if t <= 0:
            raise DomainError(f"heat time must be positive, got {t}")
        ev = self.eigenvalues
        nz = ev[np.abs(ev) > self.kernel_threshold]
        return self.weight * float(np.sum(nz * np.exp(-t * nz ** 2)))

    def counting(self, lam: float) -> float:
        """weight * #{lambda <= lam} (inclusive)."""
        return self.weight * float(np.searchsorted(self.eigenvalues, lam, side="right"))


def _bandwidth(m: np.ndarray) -> int:
    n = m.shape[0]
    bw = 0
    for k in range(n - 1, 0, -1):
        if np.any(np.abs(np.diagonal(m, k)) > 0):
            bw = k
            break
    return bw


def eigensolve(op: SelfAdjointOperator, kernel_threshold: float | None = None) -> Spectrum:
    """Spectrum of a weighted self-adjoint operator.

    Symmetrizes with the diagonal weight and dispatches to a banded solver
    when the matrix is narrow-banded and the storage hint asks for it.
    """
    g = np.sqrt(op.space.full_weight())
    s = g[:, None] * op.matrix / g[None, :]
    s = 0.5 * (s + s.T)
    try:
        if op.storage == "banded":
            bw = _bandwidth(s)
            if 0 < bw <= 8:
                bands = np.zeros((bw + 1, s.shape[0]))
                for k in range(bw + 1):
                    bands[bw - k, k:] = np.diagonal(s, k)
                ev = linalg.eig_banded(bands, lower=False, eigvals_only=True)
            else:
                ev = linalg.eigh(s, eigvals_only=True)
        else:
            ev = linalg.eigh(s, eigvals_only=True)
    except linalg.LinAlgError as exc:  # pragma: no cover - solver failure
        raise NumericalError(f"eigensolver failed on '{op.label}': {exc}") from exc
    return Spectrum(ev, weight=op.spectral_weight,
                    kernel_threshold=kernel_threshold, label=op.label)


def eigendecompose(op: SelfAdjointOperator) -> tuple[Spectrum, np.ndarray]:
    """Spectrum plus G-orthonormal eigenvector columns of the operator."""
    g = np.sqrt(op.space.full_weight())
    s = g[:, None] * op.matrix / g[None, :]
    s = 0.5 * (s + s.T)
    try:
        ev, vecs = linalg.eigh(s)
    except linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericalError(f"eigensolver failed on '{op.label}': {exc}") from exc
    phi = vecs / g[:, None]
    spec = Spectrum(ev, weight=op.spectral_weight, label=op.label)
    return spec, phi


# ---------------------------------------------------------------------------
# closed-form spectrum laws


_LAWS = ("dirichlet-interval", "dirichlet-interval-discrete", "circle-laplace",
         "shifted-integers", "custom-sequence")


@dataclass(frozen=True)
class ExplicitSpectrum:
    """Closed-form eigenvalue law, evaluated lazily.

    Laws:
      dirichlet-interval(length):    lambda_k = (k pi / length)^2, k >= 1
      dirichlet-interval-discrete(length, n):
          lambda_k = (2/h^2)(1 - cos(k pi h / length)), h = length/(n-1),
          k = 1..n-2 (interior nodes of an (n-1)-interval grid)
      circle-laplace(length):        0 and doubled (2 pi k / length)^2
      shifted-integers(alpha):       lambda_k = k + alpha, k in Z
      custom-sequence(values):       an explicit finite list
    """

    law: str
    params: dict = field(default_factory=dict)
    weight: float = 1.0

    def __post_init__(self):
        if self.law not in _LAWS:
            raise DomainError(f"unknown spectrum law {self.law!r}")

    # -- eigenvalue enumeration -------------------------------------------

    def eigenvalues_below(self, bound: float) -> np.ndarray:
        """All eigenvalues <= bound, sorted, with multiplicity (for the
        two-sided shifted-integers law: |lambda| <= bound)."""
        if self.law == "dirichlet-interval":
            length = self.params["length"]
            kmax = int(np.floor(length * np.sqrt(max(bound, 0.0)) / np.pi))
            k = np.arange(1, kmax + 1)
            return (k * np.pi / length) ** 2
        if self.law == "dirichlet-interval-discrete":
            ev = self._discrete_interval_eigenvalues()
            return ev[ev <= bound]
        if self.law == "circle-laplace":
            length = self.params["length"]
            kmax = int(np.floor(length * np.sqrt(max(bound, 0.0)) / (2 * np.pi)))
            k = np.arange(1, kmax + 1)
            doubled = np.repeat((2 * np.pi * k / length) ** 2, 2)
            return np.sort(np.concatenate([[0.0], doubled])) if bound >= 0 else np.array([])
        if self.law == "shifted-integers":
            alpha = self.params["alpha"]
            lo = int(np.ceil(-bound - alpha))
            hi = int(np.floor(bound - alpha))
            return np.arange(lo, hi + 1) + alpha
        vals = np.sort(np.asarray(self.params["values"], dtype=float))
        return vals[vals <= bound]

    def _discrete_interval_eigenvalues(self) -> np.ndarray:
        length, n = self.params["length"], self.params["n"]
        h = length / (n - 1)
        k = np.arange(1, n - 1)
        return (2.0 / h ** 2) * (1.0 - np.cos(k * np.pi * h / length))

    # -- spectral sums -----------------------------------------------------

    def heat_sum(self, t: float, tail_log_tol: float = 46.0) -> float:
        """sum exp(-t lambda), truncated where t*lambda exceeds
        tail_log_tol (relative error < e^-tail_log_tol of the leading
        term for the quadratically growing laws)."""
        if t <= 0:
            raise DomainError(f"heat time must be positive, got {t}")
        if self.law == "shifted-integers":
            raise DomainError("heat_sum diverges for a two-sided first-order law")
        if self.law in ("custom-sequence", "dirichlet-interval-discrete"):
            ev = (np.sort(np.asarray(self.params["values"], dtype=float))
                  if self.law == "custom-sequence" else self._discrete_interval_eigenvalues())
            return self.weight * float(np.sum(np.exp(-t * ev)))
        bound = tail_log_tol / t
        ev = self.eigenvalues_below(bound)
        return self.weight * float(np.sum(np.exp(-t * ev)))

    def odd_heat_sum(self, t: float, tail_log_tol: float = 46.0) -> float:
        """sum over nonzero lambda of lambda exp(-t lambda^2), truncated
        symmetrically in |lambda| so the two-sided cancellation is kept."""
        if t <= 0:
            raise DomainError(f"heat time must be positive, got {t}")
        bound = np.sqrt(tail_log_tol / t) + np.sqrt(tail_log_tol)
        ev = self.eigenvalues_below(bound)
        nz = ev[np.abs(ev) >= 1e-300]
        return self.weight * float(np.sum(nz * np.exp(-t * nz ** 2)))

    def counting(self, lam: float) -> float:
        ev = self.eigenvalues_below(lam)
        return self.weight * float(ev.size)

    @property
    def kernel_dim(self) -> float:
        if self.law == "circle-laplace":
            return self.weight
        if self.law == "shifted-integers":
            return self.weight if float(self.params["alpha"]) == 0.0 else 0.0
        if self.law == "custom-sequence":
            vals = np.asarray(self.params["values"], dtype=float)
            return self.weight * float(np.sum(vals == 0.0))
        return 0.0

    @property
    def gap_mu(self) -> float:
        if self.law == "dirichlet-interval":
            return (np.pi / self.params["length"]) ** 2
        if self.law == "dirichlet-interval-discrete":
            return float(self._discrete_interval_eigenvalues()[0])
        if self.law == "circle-laplace":
            return (2 * np.pi / self.params["length"]) ** 2
        if self.law == "shifted-integers":
            alpha = float(self.params["alpha"]) % 1.0
            return min(alpha, 1.0 - alpha) or 1.0
        vals = np.abs(np.asarray(self.params["values"], dtype=float))
        nz = vals[vals > 0]
        if nz.size == 0:
            raise HypothesisError("custom sequence has no nonzero eigenvalue")
        return float(np.min(nz))

    def materialize(self, bound: float) -> Spectrum:
        """Finite Spectrum of all eigenvalues up to bound."""
        return Spectrum(self.eigenvalues_below(bound), weight=self.weight,
                        label=f"{self.law}")
