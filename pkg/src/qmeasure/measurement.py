"""Measurement operators, observables, POVMs and outcome statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .errors import CompletenessError, PositivityError, ShapeError
from .state import DensityOperator, Ket

COMPLETENESS_TOL = 1e-10
PROJECTIVE_TOL = 1e-10
ZERO_PROB = 1e-12
DEGENERACY_RTOL = 1e-8
POVM_FLOOR = -1e-10

PROJECTIVE = "projective"
POVM_DERIVED = "povm-derived"
GENERAL = "general"
_KINDS = (PROJECTIVE, POVM_DERIVED, GENERAL)


def eigen_label(value: float) -> str:
    return f"{float(value) + 0.0:.12g}"


@dataclass(frozen=True)
class MeasurementSet:
    """Measurement operators ``{M_m}`` with ``sum_m M_m^H M_m = I``.

    ``kind="projective"`` additionally requires Hermitian, idempotent and
    mutually orthogonal operators.
    """

    operators: tuple[np.ndarray, ...]
    labels: tuple[str, ...]
    kind: str = GENERAL

    def __post_init__(self):
        ops = tuple(linalg.as_matrix(m, square=True) for m in self.operators)
        if not ops:
            raise ValueError("a measurement needs at least one operator")
        d = ops[0].shape[0]
        if any(m.shape != (d, d) for m in ops):
            raise ShapeError("measurement operators must share one square shape")
        labels = tuple(str(x) for x in self.labels)
        if len(labels) != len(ops):
            raise ValueError(f"{len(labels)} labels for {len(ops)} operators")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate outcome labels: {labels}")
        if self.kind not in _KINDS:
            raise ValueError(f"unknown measurement kind {self.kind!r}")
        resid = sum(linalg.dagger(m) @ m for m in ops) - np.eye(d)
        err = float(np.max(np.abs(resid)))
        if err > COMPLETENESS_TOL:
            raise CompletenessError(f"sum M^H M deviates from I by {err:.3e}")
        if self.kind == PROJECTIVE:
            for i, p in enumerate(ops):
                if not linalg.is_hermitian(p, PROJECTIVE_TOL):
                    raise ValueError(f"projector {labels[i]!r} is not Hermitian")
                if np.max(np.abs(p @ p - p)) > PROJECTIVE_TOL:
                    raise ValueError(f"projector {labels[i]!r} is not idempotent")
                for j in range(i + 1, len(ops)):
                    if np.max(np.abs(p @ ops[j])) > PROJECTIVE_TOL:
                        raise ValueError(f"projectors {labels[i]!r}, {labels[j]!r} overlap")
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def __len__(self) -> int:
        return len(self.operators)

    @classmethod
    def computational(cls, d: int = 2) -> "MeasurementSet":
        """Projective measurement in ``{|0>, ..., |d-1>}``, labelled by index."""
        ops = [linalg.projector(linalg.ket(i, d)) for i in range(d)]
        return cls(tuple(ops), tuple(str(i) for i in range(d)), PROJECTIVE)

    @classmethod
    def from_basis(cls, basis, labels: Sequence[str] | None = None) -> "MeasurementSet":
        """Rank-1 projective measurement onto the columns of a unitary."""
        u = linalg.as_matrix(basis, square=True)
        if not linalg.is_unitary(u):
            raise ValueError("basis matrix is not unitary")
        ops = [linalg.projector(u[:, i]) for i in range(u.shape[1])]
        labels = labels or [str(i) for i in range(u.shape[1])]
        return cls(tuple(ops), tuple(labels), PROJECTIVE)


@dataclass(frozen=True)
class Observable:
    """Hermitian observable with its eigenspace projectors.

    ``values[i]`` is a distinct eigenvalue (descending) and ``projectors[i]``
    projects onto its eigenspace, so ``matrix == sum_i values[i] * projectors[i]``.
    """

    matrix: np.ndarray
    spectrum: linalg.Spectrum
    values: tuple[float, ...]
    projectors: tuple[np.ndarray, ...]
    groups: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(eigen_label(v) for v in self.values)

    @property
    def nondegenerate(self) -> bool:
        return all(len(g) == 1 for g in self.groups)

    def measurement(self) -> MeasurementSet:
        ms = self.__dict__.get("_measurement")
        if ms is None:
            ms = MeasurementSet(self.projectors, self.labels, PROJECTIVE)
            object.__setattr__(self, "_measurement", ms)
        return ms

    def basis_vectors(self) -> np.ndarray:
        """Eigenvectors as columns, in the order of ``values``."""
        return self.spectrum.eigenvectors


def projective_from_observable(m, tol: float = linalg.HERMITIAN_TOL) -> Observable:
    """Spectral projectors of a Hermitian matrix.

    Eigenvalues closer than ``1e-8 * max(1, |lambda|)`` share one eigenspace.
    """
    m = linalg.as_matrix(m, square=True)
    spec = linalg.eig_hermitian(m, tol)
    lam = spec.eigenvalues
    groups: list[list[int]] = []
    for i, x in enumerate(lam):
        if groups:
            head = lam[groups[-1][0]]
            if abs(x - head) <= DEGENERACY_RTOL * max(1.0, abs(head)):
                groups[-1].append(i)
                continue
        groups.append([i])
    vecs = spec.eigenvectors
    projectors = []
    values = []
    for g in groups:
        v = vecs[:, g]
        p = linalg.hermitize(v @ linalg.dagger(v))
        p.flags.writeable = False
        projectors.append(p)
        values.append(float(np.mean(lam[g])))
    return Observable(
        matrix=m,
        spectrum=spec,
        values=tuple(values),
        projectors=tuple(projectors),
        groups=tuple(tuple(g) for g in groups),
    )


def pauli_z() -> np.ndarray:
    return np.diag([1.0, -1.0]).astype(np.complex128)


def as_measurement(obj) -> MeasurementSet:
    if isinstance(obj, MeasurementSet):
        return obj
    if isinstance(obj, Observable):
        return obj.measurement()
    raise TypeError(f"expected MeasurementSet or Observable, got {type(obj).__name__}")


@dataclass(frozen=True)
class Outcome:
    """One outcome: label, probability and the normalized post-measurement state.

    ``post_state`` is ``None`` when the outcome has probability at most 1e-12;
    such an outcome never occurs and its post-state is undefined.
    """

    label: str
    probability: float
    post_state: DensityOperator | None


@dataclass(frozen=True)
class OutcomeDistribution:
    entries: tuple[Outcome, ...]

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([e.probability for e in self.entries])

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(e.label for e in self.entries)

    def __getitem__(self, label: str) -> Outcome:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def _check_dim(ms: MeasurementSet, rho: DensityOperator):
    if ms.dim != rho.dim:
        raise ShapeError(f"measurement acts on dim {ms.dim}, state has dim {rho.dim}")


def _clamp_probability(p: float) -> float:
    if p < -ZERO_PROB or p > 1.0 + ZERO_PROB:
        raise ValueError(f"outcome probability {p!r} outside [0, 1]")
    return min(max(p, 0.0), 1.0)


def outcome_distribution(ms, rho: DensityOperator) -> OutcomeDistribution:
    """Outcome probabilities ``tr(M rho M^H)`` and conditional post-states."""
    ms = as_measurement(ms)
    _check_dim(ms, rho)
    entries = []
    for label, m in zip(ms.labels, ms.operators):
        unnorm = linalg.hermitize(m @ rho.matrix @ linalg.dagger(m))
        p = _clamp_probability(float(np.trace(unnorm).real))
        post = DensityOperator(rho.dims, unnorm / p) if p > ZERO_PROB else None
        entries.append(Outcome(label, p, post))
    return OutcomeDistribution(tuple(entries))


def ket_outcome_probabilities(ms, k: Ket) -> np.ndarray:
    """``<psi| M^H M |psi>`` for each operator, evaluated on the state vector."""
    ms = as_measurement(ms)
    if ms.dim != k.dim:
        raise ShapeError(f"measurement acts on dim {ms.dim}, ket has dim {k.dim}")
    psi = k.amplitudes
    return np.array([float(np.vdot(m @ psi, m @ psi).real) for m in ms.operators])


def ket_post_state(ms, k: Ket, label: str) -> Ket | None:
    """``M_m|psi> / sqrt(p(m))``; ``None`` for a zero-probability outcome."""
    ms = as_measurement(ms)
    m = ms.operators[ms.labels.index(label)]
    v = m @ k.amplitudes
    p = float(np.vdot(v, v).real)
    if p <= ZERO_PROB:
        return None
    return Ket(k.dims, v / math.sqrt(p))


def nonselective_update(ms, rho: DensityOperator) -> DensityOperator:
    """State after measuring without reading the result: ``sum_m M rho M^H``."""
    ms = as_measurement(ms)
    _check_dim(ms, rho)
    acc = sum(m @ rho.matrix @ linalg.dagger(m) for m in ms.operators)
    return DensityOperator(rho.dims, linalg.hermitize(acc))


def povm_to_measurement(elements, labels: Sequence[str] | None = None) -> MeasurementSet:
    """Lift POVM elements ``E_m`` to measurement operators ``M_m = sqrt(E_m)``.

    Raises
    ------
    PositivityError
        An element has an eigenvalue below ``-1e-10``.
    CompletenessError
        The elements do not sum to the identity within ``1e-10``.
    """
    elems = [linalg.as_matrix(e, square=True) for e in elements]
    if not elems:
        raise ValueError("empty POVM")
    d = elems[0].shape[0]
    if any(e.shape != (d, d) for e in elems):
        raise ShapeError("POVM elements must share one square shape")
    err = float(np.max(np.abs(sum(elems) - np.eye(d))))
    if err > COMPLETENESS_TOL:
        raise CompletenessError(f"POVM elements sum to I only within {err:.3e}")
    ops = []
    for i, e in enumerate(elems):
        lam = linalg.eig_hermitian(e).eigenvalues
        if lam[-1] < POVM_FLOOR:
            raise PositivityError(f"POVM element {i} has eigenvalue {lam[-1]:.3e}")
        ops.append(linalg.sqrtm_psd(e, POVM_FLOOR))
    labels = labels or [f"E{i + 1}" for i in range(len(elems))]
    return MeasurementSet(tuple(ops), tuple(labels), POVM_DERIVED)


def three_element_povm() -> list[np.ndarray]:
    """Qubit POVM ``E1 = c|1><1|``, ``E2 = c|-><-|``, ``E3 = I - E1 - E2``.

    ``c = sqrt(2)/(1 + sqrt(2))``. No two elements commute, so the outcomes do
    not come from a projective measurement.
    """
    c = math.sqrt(2.0) / (1.0 + math.sqrt(2.0))
    one = linalg.ket(1, 2)
    minus = np.array([1.0, -1.0], dtype=np.complex128)
    e1 = c * linalg.projector(one)
    e2 = c * np.outer(minus, minus.conj()) / 2.0
    e3 = np.eye(2, dtype=np.complex128) - e1 - e2
    return [e1, e2, e3]


def subsystem_measurement(ms, target: int, dims) -> MeasurementSet:
    """Embed a measurement on subsystem ``target`` as ``I x ... x M_m x ... x I``."""
    ms = as_measurement(ms)
    dims = tuple(int(d) for d in dims)
    if not 0 <= target < len(dims):
        raise ValueError(f"subsystem index {target} out of range for dims {dims}")
    if ms.dim != dims[target]:
        raise ShapeError(f"measurement dim {ms.dim} != subsystem dim {dims[target]}")
    left = np.eye(math.prod(dims[:target]), dtype=np.complex128)
    right = np.eye(math.prod(dims[target + 1 :]), dtype=np.complex128)
    ops = tuple(linalg.kron(linalg.kron(left, m), right) for m in ms.operators)
    return MeasurementSet(ops, ms.labels, ms.kind)


@dataclass(frozen=True)
class MomentStats:
    mean: float
    variance: float
    std_dev: float


def moment_stats(obs: Observable, rho: DensityOperator) -> MomentStats:
    """Mean ``sum_m m p(m)`` and spread ``<M^2> - <M>^2`` of an observable."""
    if obs.dim != rho.dim:
        raise ShapeError(f"observable dim {obs.dim} != state dim {rho.dim}")
    probs = [float(np.trace(p @ rho.matrix).real) for p in obs.projectors]
    mean = float(sum(v * p for v, p in zip(obs.values, probs)))
    second = float(sum(v * v * p for v, p in zip(obs.values, probs)))
    var = max(second - mean * mean, 0.0)
    return MomentStats(mean=mean, variance=var, std_dev=math.sqrt(var))


def expectation(op, rho: DensityOperator) -> float:
    """``tr(op rho)`` for a Hermitian operator."""
    return float(np.trace(np.asarray(op) @ rho.matrix).real)
