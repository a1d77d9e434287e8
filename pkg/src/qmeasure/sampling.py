"""Random test objects: Haar unitaries, Ginibre density matrices, bases."""

from __future__ import annotations

import math

import numpy as np

from .state import DensityOperator, Ket


def _rng(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def ginibre(d: int, k: int, rng=None) -> np.ndarray:
    rng = _rng(rng)
    return rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))


def random_unitary(d: int, rng=None) -> np.ndarray:
    """Haar-distributed unitary via QR with the phase fix of Mezzadri."""
    q, r = np.linalg.qr(ginibre(d, d, rng))
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def random_hermitian(d: int, rng=None) -> np.ndarray:
    x = ginibre(d, d, rng)
    return 0.5 * (x + x.conj().T)


def random_ket(dims, rng=None) -> Ket:
    dims = tuple(dims)
    v = ginibre(math.prod(dims), 1, rng).reshape(-1)
    return Ket(dims, v / np.linalg.norm(v))


def random_density(dims, rng=None, rank: int | None = None) -> DensityOperator:
    """Induced-measure random state; full rank unless ``rank`` is given."""
    dims = tuple(dims)
    d = math.prod(dims)
    x = ginibre(d, rank or d, rng)
    m = x @ x.conj().T
    m = 0.5 * (m + m.conj().T)
    return DensityOperator(dims, m / np.trace(m).real)
