"""Von Neumann and Shannon entropy, Landauer cost, and coherence metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .constants import K_B, LN2
from .errors import PositivityError
from .measurement import PROJECTIVE, as_measurement, nonselective_update
from .state import DensityOperator, Ket

EIG_FLOOR = -1e-9
WAVE_THRESHOLD = 1e-9


@dataclass(frozen=True)
class EntropyValue:
    bits: float
    nats: float

    @classmethod
    def from_nats(cls, nats: float) -> "EntropyValue":
        return cls(bits=nats / LN2, nats=nats)


def _entropy_nats(weights: np.ndarray) -> float:
    w = weights[weights > 0.0]
    return float(-np.sum(w * np.log(w))) if w.size else 0.0


def von_neumann_entropy(rho: DensityOperator) -> EntropyValue:
    """``S = -sum lambda log lambda`` over the spectrum, with ``0 log 0 = 0``.

    Eigenvalues in ``[-1e-9, 0)`` are roundoff and count as zero.
    """
    lam = np.asarray(rho.eigenvalues, dtype=float)
    if lam[-1] < EIG_FLOOR:
        raise PositivityError(f"eigenvalue {lam[-1]:.3e} below {EIG_FLOOR:g}")
    lam = np.clip(lam, 0.0, None)
    return EntropyValue.from_nats(max(_entropy_nats(lam), 0.0) + 0.0)


def shannon_entropy(p) -> EntropyValue:
    p = np.asarray(p, dtype=float).reshape(-1)
    if np.any(p < 0.0):
        raise ValueError("probabilities must be nonnegative")
    if abs(float(p.sum()) - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {p.sum()!r}, expected 1")
    return EntropyValue.from_nats(max(_entropy_nats(p), 0.0) + 0.0)


@dataclass(frozen=True)
class EntropyGain:
    before: EntropyValue
    after: EntropyValue
    gain: float  # bits
    post_state: DensityOperator
    unchanged: bool


def projective_entropy_gain(rho: DensityOperator, proj, tol: float = 1e-10) -> EntropyGain:
    """Entropy before and after an unread projective measurement.

    Only defined for projective measurements; for those the gain is never
    negative and vanishes exactly when the measurement leaves ``rho`` unchanged.
    """
    ms = as_measurement(proj)
    if ms.kind != PROJECTIVE:
        raise ValueError("entropy gain is only guaranteed for projective measurements")
    post = nonselective_update(ms, rho)
    before = von_neumann_entropy(rho)
    after = von_neumann_entropy(post)
    unchanged = float(np.max(np.abs(post.matrix - rho.matrix))) <= tol
    return EntropyGain(before, after, after.bits - before.bits, post, unchanged)


@dataclass(frozen=True)
class WaveBehaviorReport:
    support_count: int
    has_wave_behavior: bool
    l1_coherence: float


def l1_coherence(rho, basis=None) -> float:
    """Sum of off-diagonal magnitudes of ``rho`` in ``basis`` (columns)."""
    m = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho)
    if basis is not None:
        b = np.asarray(basis, dtype=np.complex128)
        m = linalg.dagger(b) @ m @ b
    return float(np.sum(np.abs(m)) - np.sum(np.abs(np.diagonal(m))))


def wave_behavior(k: Ket, basis=None, threshold: float = WAVE_THRESHOLD) -> WaveBehaviorReport:
    """Count the basis states a ket occupies.

    A state spread over two or more orthogonal basis states shows wave
    behavior; a single occupied basis state is pure particle behavior. The
    ``l1_coherence`` field quantifies the same thing on a continuous scale.
    """
    psi = k.amplitudes
    if basis is None:
        amps = psi
    else:
        b = linalg.as_matrix(basis, square=True)
        if not linalg.is_unitary(b):
            raise ValueError("basis is not unitary")
        amps = linalg.dagger(b) @ psi
    mags = np.abs(amps)
    support = int(np.sum(mags > threshold))
    coh = float(np.sum(mags) ** 2 - np.sum(mags**2))
    return WaveBehaviorReport(support, support >= 2, max(coh, 0.0))


@dataclass(frozen=True)
class LandauerCost:
    bits_erased: int
    temperature: float
    min_heat: float  # J


def landauer_cost(bits: int, temperature: float) -> LandauerCost:
    """Minimum heat ``bits * k_B * T * ln 2`` released when erasing ``bits``."""
    if temperature <= 0.0 or not math.isfinite(temperature):
        raise ValueError("temperature must be positive and finite")
    if bits < 0:
        raise ValueError("bit count must be nonnegative")
    return LandauerCost(int(bits), float(temperature), bits * K_B * temperature * LN2)
