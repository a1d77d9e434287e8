"""Quantum operations in Kraus form, erasure, and the trace/measurement check."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import ShapeError
from .measurement import (
    ZERO_PROB,
    MeasurementSet,
    Observable,
    as_measurement,
    nonselective_update,
    subsystem_measurement,
)
from .state import DensityOperator, partial_trace

TP_TOL = 1e-10


@dataclass(frozen=True)
class KrausChannel:
    """``rho -> sum_k K rho K^H`` with ``K`` of shape ``(output_dim, input_dim)``."""

    elements: tuple[np.ndarray, ...]
    trace_preserving: bool = True

    def __post_init__(self):
        els = tuple(linalg.as_matrix(k) for k in self.elements)
        if not els:
            raise ValueError("a channel needs at least one Kraus element")
        shape = els[0].shape
        if any(k.shape != shape for k in els):
            raise ShapeError("Kraus elements must share one shape")
        if self.trace_preserving:
            resid = sum(linalg.dagger(k) @ k for k in els) - np.eye(shape[1])
            err = float(np.max(np.abs(resid)))
            if err > TP_TOL:
                raise ValueError(f"sum K^H K deviates from I by {err:.3e}")
        object.__setattr__(self, "elements", els)

    @property
    def input_dim(self) -> int:
        return self.elements[0].shape[1]

    @property
    def output_dim(self) -> int:
        return self.elements[0].shape[0]

    @classmethod
    def identity(cls, d: int) -> "KrausChannel":
        return cls((np.eye(d, dtype=np.complex128),))

    @classmethod
    def from_measurement(cls, ms) -> "KrausChannel":
        """Nonselective measurement as a channel."""
        return cls(as_measurement(ms).operators)


def apply(ch: KrausChannel, rho: DensityOperator) -> DensityOperator:
    """Apply the channel.

    Output dims follow the input register when the channel is square, else the
    output is a single subsystem of ``output_dim``. A non-trace-preserving
    channel is renormalized by the output trace.
    """
    if rho.dim != ch.input_dim:
        raise ShapeError(f"channel input dim {ch.input_dim} != state dim {rho.dim}")
    out = sum(k @ rho.matrix @ linalg.dagger(k) for k in ch.elements)
    out = linalg.hermitize(out)
    if not ch.trace_preserving:
        tr = float(np.trace(out).real)
        if tr <= 0.0:
            raise ValueError("channel annihilated the state")
        out = out / tr
    dims = rho.dims if ch.output_dim == ch.input_dim else (ch.output_dim,)
    return DensityOperator(dims, out)


def erasure_channel(input_dim: int) -> KrausChannel:
    """Reset channel with elements ``|0><i|``: every input goes to ``|0><0|``.

    The output is embedded in a space of the same dimension as the input so the
    channel composes with itself; its support is one-dimensional.
    """
    if input_dim < 1:
        raise ValueError("erasure needs input_dim >= 1")
    zero = linalg.ket(0, input_dim)
    return KrausChannel(tuple(np.outer(zero, linalg.ket(i, input_dim)) for i in range(input_dim)))


def transposition(j: int, d: int) -> np.ndarray:
    """Permutation matrix swapping basis states ``j`` and ``0``."""
    perm = list(range(d))
    perm[0], perm[j] = perm[j], perm[0]
    u = np.zeros((d, d), dtype=np.complex128)
    u[perm, range(d)] = 1.0
    return u


@dataclass(frozen=True)
class ErasureTranscript:
    """Record of one measure-and-rotate erasure.

    ``outcome`` is the index of the basis vector found, ``permutation`` the
    image of each computational index under the rotation (``outcome -> 0``).
    """

    outcome: int
    label: str
    probability: float
    permutation: tuple[int, ...]
    unitary: np.ndarray
    seed: int


def erase_via_measure_rotate(
    rho: DensityOperator, basis: Observable, rng_seed: int
) -> tuple[DensityOperator, ErasureTranscript]:
    """Erase ``rho`` by a projective measurement followed by a unitary.

    An outcome ``j`` is sampled from the Born probabilities of ``basis``; the
    conditional state ``|b_j><b_j|`` is rotated to ``|0><0|`` by
    ``U = S_j B^H``, where ``B`` holds the basis vectors as columns and ``S_j``
    swaps ``j`` and ``0``. For the computational basis ``U`` is just ``S_j``.

    Sampling uses ``numpy.random.default_rng(rng_seed)`` (PCG64), so a seed
    fixes the transcript.
    """
    if not isinstance(basis, Observable):
        raise TypeError("basis must be an Observable")
    if not basis.nondegenerate:
        raise ValueError("measure-and-rotate erasure needs a nondegenerate basis")
    if basis.dim != rho.dim:
        raise ShapeError(f"basis dim {basis.dim} != state dim {rho.dim}")
    ms = basis.measurement()
    probs = np.array([float(np.trace(p @ rho.matrix).real) for p in ms.operators])
    # outcomes at or below ZERO_PROB never occur
    cum = np.cumsum(np.where(probs > ZERO_PROB, probs, 0.0))
    rng = np.random.default_rng(rng_seed)
    j = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
    j = min(j, len(probs) - 1)
    d = rho.dim
    swap = transposition(j, d)
    u = swap @ linalg.dagger(basis.basis_vectors())
    proj = ms.operators[j]
    post = proj @ rho.matrix @ proj / probs[j]
    erased = linalg.hermitize(u @ post @ linalg.dagger(u))
    perm = tuple(int(np.argmax(np.abs(swap[:, i]))) for i in range(d))
    transcript = ErasureTranscript(
        outcome=j,
        label=ms.labels[j],
        probability=float(probs[j]),
        permutation=perm,
        unitary=u,
        seed=int(rng_seed),
    )
    return DensityOperator(rho.dims, erased), transcript


@dataclass(frozen=True)
class EquivalenceResult:
    via_trace: DensityOperator
    via_measurement: DensityOperator
    max_abs_diff: float


def trace_measurement_equivalence(
    rho_joint: DensityOperator, target: int, basis
) -> EquivalenceResult:
    """Compare tracing out ``target`` with an unread measurement on it.

    Both routes end with the reduced state on the remaining subsystems: the
    first traces ``target`` out directly; the second applies the nonselective
    projective measurement ``sum_j (I x P_j) rho (I x P_j)`` first and then
    traces. ``max_abs_diff`` is the entry-wise distance between the two.
    """
    ms = as_measurement(basis)
    n = len(rho_joint.dims)
    if not 0 <= target < n:
        raise ValueError(f"target {target} out of range")
    if n < 2:
        raise ShapeError("need at least two subsystems")
    if ms.dim != rho_joint.dims[target]:
        raise ShapeError(f"basis dim {ms.dim} != subsystem dim {rho_joint.dims[target]}")
    keep = [i for i in range(n) if i != target]
    via_trace = partial_trace(rho_joint, keep)
    lifted = subsystem_measurement(ms, target, rho_joint.dims)
    via_meas = partial_trace(nonselective_update(lifted, rho_joint), keep)
    diff = float(np.max(np.abs(via_trace.matrix - via_meas.matrix)))
    return EquivalenceResult(via_trace, via_meas, diff)


def measurement_channel_equivalence(ms: MeasurementSet, rho: DensityOperator) -> float:
    """Max entry-wise gap between the channel route and the direct update."""
    a = apply(KrausChannel.from_measurement(ms), rho).matrix
    b = nonselective_update(ms, rho).matrix
    return float(np.max(np.abs(a - b)))
