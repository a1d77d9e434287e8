"""Dense complex linear algebra on top of numpy arrays.

Matrices are plain ``complex128`` 2-D arrays. Subsystem ordering is big-endian:
in ``kron(a, b)`` the factor ``a`` is the most significant index.

The Hermitian eigensolver is a parallel-ordered cyclic Jacobi method with complex
Givens rotations. It is written out here rather than delegated to LAPACK so the
entropy and positivity checks run on a numerical path this package controls.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, PositivityError, ShapeError, SizeError, SymmetryError

HERMITIAN_TOL = 1e-12
RECONSTRUCTION_TOL = 1e-10
MAX_SWEEPS = 100
MAX_DIM = 4096
_TINY = np.finfo(np.float64).tiny * 1e3


def as_matrix(a, *, square: bool = False) -> np.ndarray:
    """Validate and convert ``a`` to a read-only complex 2-D array (copy)."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or m.size == 0:
        raise ShapeError(f"expected a nonempty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    if square and m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    m.flags.writeable = False
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(a))


def hermitize(a: np.ndarray) -> np.ndarray:
    """Project onto the Hermitian part; removes product roundoff."""
    return 0.5 * (a + dagger(a))


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return float(np.max(np.abs(a - dagger(a)), initial=0.0)) <= tol


def is_unitary(u: np.ndarray, tol: float = 1e-10) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return float(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0])))) <= tol


def kron(a, b) -> np.ndarray:
    """Kronecker product, entry ``[i*rb + k, j*cb + l] = a[i, j] * b[k, l]``."""
    a = as_matrix(a)
    b = as_matrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if max(rows, cols) > MAX_DIM:
        raise SizeError(f"kron result {rows}x{cols} exceeds cap {MAX_DIM}")
    out = (a[:, None, :, None] * b[None, :, None, :]).reshape(rows, cols)
    return out


def kron_all(factors) -> np.ndarray:
    out = None
    for f in factors:
        out = as_matrix(f) if out is None else kron(out, f)
    if out is None:
        raise ShapeError("kron_all needs at least one factor")
    return out


def trace(a) -> complex:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"trace needs a square matrix, got shape {a.shape}")
    return complex(np.sum(np.diagonal(a)))


def ket(index: int, dim: int) -> np.ndarray:
    """Computational basis column vector ``|index>``."""
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return v


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=np.complex128).reshape(-1)
    return np.outer(v, np.conj(v))


@dataclass(frozen=True)
class Spectrum:
    """Eigenpairs of a Hermitian matrix.

    ``eigenvalues`` are sorted in descending order and ``eigenvectors[:, i]``
    belongs to ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)


def _round_robin_rounds(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    # Tournament schedule: every unordered pair (p, q) appears exactly once
    # across the n-1 (or n) rounds and pairs inside a round are disjoint.
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            p, q = players[i], players[m - 1 - i]
            if p >= n or q >= n:
                continue
            ps.append(min(p, q))
            qs.append(max(p, q))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def _off_norm(a: np.ndarray) -> float:
    # Direct sum over off-diagonal entries; ||A||^2 - ||diag||^2 cancels badly.
    off = a[~np.eye(a.shape[0], dtype=bool)]
    return float(np.sqrt(np.sum(off.real**2 + off.imag**2)))


def eig_hermitian(a, tol: float = HERMITIAN_TOL, max_sweeps: int = MAX_SWEEPS) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    a : array_like
        Square matrix, Hermitian to within ``tol`` (scaled by ``max(1, max|a|)``).
    tol : float
        Hermiticity tolerance and relative stopping threshold: sweeps stop once
        the off-diagonal Frobenius norm is at most ``tol * ||a||_F``.
    max_sweeps : int
        Sweep cap; exceeding it raises :class:`ConvergenceError`.

    Returns
    -------
    Spectrum
        Descending real eigenvalues and a unitary matrix of eigenvectors.
    """
    a = as_matrix(a, square=True)
    scale = max(1.0, float(np.max(np.abs(a))))
    asym = float(np.max(np.abs(a - dagger(a))))
    if asym > tol * scale:
        raise SymmetryError(f"matrix is not Hermitian: max|A - A^H| = {asym:.3e}")
    n = a.shape[0]
    work = np.array(hermitize(a))
    np.fill_diagonal(work, work.diagonal().real)
    vecs = np.eye(n, dtype=np.complex128)

    fro = float(np.linalg.norm(work))
    stop = tol * fro
    rounds = _round_robin_rounds(n) if n > 1 else []
    converged = n == 1 or _off_norm(work) <= stop
    sweeps = 0
    while not converged:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-norm {_off_norm(work):.3e})"
            )
        for p, q in rounds:
            apq = work[p, q]
            r = np.abs(apq)
            live = r > _TINY
            if not np.any(live):
                continue
            app = work[p, p].real
            aqq = work[q, q].real
            safe_r = np.where(live, r, 1.0)
            zeta = (aqq - app) / (2.0 * safe_r)
            sgn = np.where(zeta >= 0.0, 1.0, -1.0)
            t = sgn / (np.abs(zeta) + np.hypot(1.0, zeta))
            t = np.where(live, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # phase e^{-i arg a_pq} turns the 2x2 block real symmetric
            ph = np.where(live, np.conj(apq) / safe_r, 1.0)

            # A <- A J with J = [[c, s], [-s ph, c ph]] on columns (p, q)
            cp = work[:, p]
            cq = work[:, q]
            work[:, p] = cp * c - cq * (s * ph)
            work[:, q] = cp * s + cq * (c * ph)
            # A <- J^H A on rows (p, q)
            rp = work[p, :]
            rq = work[q, :]
            phc = np.conj(ph)
            work[p, :] = c[:, None] * rp - (s * phc)[:, None] * rq
            work[q, :] = s[:, None] * rp + (c * phc)[:, None] * rq
            work[p, q] = 0.0
            work[q, p] = 0.0
            work[p, p] = work[p, p].real
            work[q, q] = work[q, q].real

            vp = vecs[:, p]
            vq = vecs[:, q]
            vecs[:, p] = vp * c - vq * (s * ph)
            vecs[:, q] = vp * s + vq * (c * ph)
        sweeps += 1
        converged = _off_norm(work) <= stop

    vals = work.diagonal().real.copy()
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    vals.flags.writeable = False
    vecs.flags.writeable = False
    return Spectrum(eigenvalues=vals, eigenvectors=vecs)


def sqrtm_psd(a, floor: float = -1e-10) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[floor, 0)`` are clamped to zero; anything lower raises.
    """
    spec = eig_hermitian(a)
    lam = spec.eigenvalues
    if lam[-1] < floor:
        raise PositivityError(f"matrix has eigenvalue {lam[-1]:.3e} below {floor:g}")
    root = np.sqrt(np.clip(lam, 0.0, None))
    v = spec.eigenvectors
    return hermitize((v * root) @ dagger(v))


def format_matrix(a) -> str:
    """Serialize: one row per line, ``re+imj`` entries, 17 significant digits."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ShapeError("format_matrix needs a 2-D array")
    lines = []
    for row in a:
        lines.append(" ".join(f"{z.real:.17g}{z.imag:+.17g}j" for z in row))
    return "\n".join(lines)


def parse_matrix(text: str) -> np.ndarray:
    rows = [line.split() for line in text.strip().splitlines() if line.strip()]
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ShapeError("ragged or empty matrix text")
    return np.array([[complex(tok) for tok in r] for r in rows], dtype=np.complex128)
