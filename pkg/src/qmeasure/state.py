"""Pure states, density operators and the partial trace."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .errors import NormalizationError, PositivityError, ShapeError, SymmetryError

NORM_TOL = 1e-10
PSD_FLOOR = -1e-9
MIXTURE_TOL = 1e-9


def _check_dims(dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise ShapeError(f"subsystem dimensions must be positive, got {dims}")
    return dims


@dataclass(frozen=True)
class Ket:
    """Normalized state vector on a register with subsystem ``dims``."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != math.prod(dims):
            raise ShapeError(f"{amps.size} amplitudes do not fit dims {dims}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise NormalizationError(f"sum |a_i|^2 = {norm2!r}, expected 1")
        amps.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes, dims=None, normalize: bool = False) -> "Ket":
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return cls(dims if dims is not None else (amps.size,), amps)

    @classmethod
    def basis(cls, digits: Sequence[int] | int, dims=None) -> "Ket":
        """Product basis state, e.g. ``Ket.basis([0, 1, 1])`` for ``|011>``."""
        if isinstance(digits, (int, np.integer)):
            dims = _check_dims(dims or (2,))
            if len(dims) != 1:
                raise ShapeError("integer index needs a single-subsystem dims")
            return cls(dims, linalg.ket(int(digits), dims[0]))
        digits = list(digits)
        dims = _check_dims(dims or (2,) * len(digits))
        index = int(np.ravel_multi_index(tuple(digits), dims))
        return cls(dims, linalg.ket(index, math.prod(dims)))

    @property
    def dim(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True)
class DensityOperator:
    """Unit-trace, Hermitian, positive semidefinite operator on ``dims``.

    Construction validates all three properties (the positivity check runs the
    Jacobi eigensolver); instances are immutable afterwards.
    """

    dims: tuple[int, ...]
    matrix: np.ndarray
    _eigenvalues: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        dims = _check_dims(self.dims)
        m = np.array(linalg.as_matrix(self.matrix, square=True))
        d = math.prod(dims)
        if m.shape != (d, d):
            raise ShapeError(f"matrix shape {m.shape} does not match dims {dims}")
        asym = float(np.max(np.abs(m - linalg.dagger(m))))
        if asym > NORM_TOL:
            raise SymmetryError(f"density matrix not Hermitian (max asymmetry {asym:.3e})")
        tr = linalg.trace(m)
        if abs(tr - 1.0) > NORM_TOL:
            raise NormalizationError(f"trace {tr!r}, expected 1")
        m = linalg.hermitize(m)
        spec = linalg.eig_hermitian(m)
        if spec.eigenvalues[-1] < PSD_FLOOR:
            raise PositivityError(f"min eigenvalue {spec.eigenvalues[-1]:.3e} < {PSD_FLOOR:g}")
        m.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "_eigenvalues", spec.eigenvalues)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        """Descending spectrum, computed once at construction."""
        return self._eigenvalues

    def spectrum(self) -> linalg.Spectrum:
        return linalg.eig_hermitian(self.matrix)

    def is_pure(self, tol: float = 1e-10) -> bool:
        return abs(purity(self) - 1.0) <= tol


def density_from_ket(k: Ket) -> DensityOperator:
    """``|phi><phi|`` for a normalized ket."""
    if not isinstance(k, Ket):
        k = Ket.from_amplitudes(k)
    return DensityOperator(k.dims, linalg.projector(k.amplitudes))


def maximally_mixed(dims) -> DensityOperator:
    dims = _check_dims(dims)
    d = math.prod(dims)
    return DensityOperator(dims, np.eye(d, dtype=np.complex128) / d)


def mixture(components: Iterable[tuple[float, DensityOperator]]) -> DensityOperator:
    """Convex combination ``sum_i p_i rho_i``.

    Probabilities summing to 1 within ``1e-9`` are renormalized; larger
    deviations and negative weights are rejected.
    """
    components = list(components)
    if not components:
        raise ValueError("mixture needs at least one component")
    probs = np.array([float(p) for p, _ in components])
    if np.any(probs < 0.0):
        raise ValueError("mixture weights must be nonnegative")
    total = float(probs.sum())
    if abs(total - 1.0) > MIXTURE_TOL:
        raise NormalizationError(f"mixture weights sum to {total!r}")
    probs = probs / total
    dims = components[0][1].dims
    acc = np.zeros_like(components[0][1].matrix)
    for p, rho in zip(probs, (c[1] for c in components)):
        if rho.dims != dims:
            raise ShapeError(f"mixture components disagree on dims: {rho.dims} vs {dims}")
        acc = acc + p * rho.matrix
    return DensityOperator(dims, acc)


def tensor(*states: DensityOperator) -> DensityOperator:
    dims = tuple(d for s in states for d in s.dims)
    return DensityOperator(dims, linalg.kron_all([s.matrix for s in states]))


def partial_trace(rho: DensityOperator, keep) -> DensityOperator:
    """Reduced state on the subsystems listed in ``keep``.

    ``keep`` names the subsystems that survive (in register order); everything
    else is traced out. Use :func:`qmeasure.linalg.trace` for the full trace.

    >>> ghz = density_from_ket(ghz_ket())
    >>> partial_trace(ghz, keep=[1, 2]).matrix.diagonal().real
    array([0.5, 0. , 0. , 0.5])
    """
    keep = sorted({int(k) for k in keep})
    n = len(rho.dims)
    if not keep:
        raise ValueError("keep set is empty; use linalg.trace for the full trace")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"subsystem indices {keep} out of range for {n} subsystems")
    gone = [i for i in range(n) if i not in keep]
    dims = rho.dims
    dk = math.prod(dims[i] for i in keep)
    dg = math.prod(dims[i] for i in gone) if gone else 1
    t = rho.matrix.reshape(dims + dims)
    perm = keep + gone + [n + i for i in keep] + [n + i for i in gone]
    t = np.transpose(t, perm).reshape(dk, dg, dk, dg)
    reduced = np.trace(t, axis1=1, axis2=3)
    return DensityOperator(tuple(dims[i] for i in keep), linalg.hermitize(reduced))


def purity(rho: DensityOperator) -> float:
    """``tr(rho^2)``, in ``[1/dim, 1]``."""
    m = rho.matrix
    # tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(m.real**2 + m.imag**2))


def fidelity_with_pure(rho: DensityOperator, vec) -> float:
    v = np.asarray(vec, dtype=np.complex128).reshape(-1)
    return float(np.vdot(v, rho.matrix @ v).real)


def ghz_ket(n: int = 3) -> Ket:
    """``(|0...0> + |1...1>)/sqrt(2)`` on ``n`` qubits."""
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[0] = amps[-1] = 1.0 / math.sqrt(2.0)
    return Ket((2,) * n, amps)


def w_ket(n: int = 3) -> Ket:
    """Equal superposition of the ``n`` single-excitation basis states."""
    amps = np.zeros(2**n, dtype=np.complex128)
    for i in range(n):
        amps[1 << (n - 1 - i)] = 1.0 / math.sqrt(n)
    return Ket((2,) * n, amps)


def bell_psi_plus() -> Ket:
    """``(|01> + |10>)/sqrt(2)``."""
    return Ket((2, 2), np.array([0, 1, 1, 0], dtype=np.complex128) / math.sqrt(2.0))
