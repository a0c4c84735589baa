"""
Dense complex small-matrix kernels.

The Hermitian eigensolver is a cyclic complex Jacobi iteration that works on a
whole stack of matrices at once (arrays shaped ``(..., n, n)``), so sampling a
momentum grid costs one vectorised solve instead of N^d Python calls.
"""
from functools import reduce
from itertools import combinations
from typing import Sequence, Tuple

import numpy as np
from loguru import logger

from ..exceptions import (
    MatrixTooLargeError,
    NoConvergenceError,
    NotAntisymmetricError,
    NotHermitianError,
    OddDimensionError,
)
from ..models.band_models import EigDecomposition

HERMITIAN_TOL = 1e-10
ANTISYMMETRIC_TOL = 1e-9
MAX_SWEEPS = 100
PFAFFIAN_MAX_DIM = 8

PAULI = {
    "0": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
PAULI_ALIASES = {"i": "0", "1": "0", "I": "0", "X": "x", "Y": "y", "Z": "z"}


def frobenius(A: np.ndarray) -> np.ndarray:
    """Frobenius norm over the two trailing axes"""
    return np.sqrt(np.sum(np.abs(A) ** 2, axis=(-2, -1)))


def dagger(A: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(A, -1, -2))


def pauli_string(label: str) -> np.ndarray:
    """Tensor product of Pauli matrices, e.g. ``"y*x"`` -> sigma_y (x) sigma_x"""
    factors = [f.strip() for f in label.split("*") if f.strip()]
    if not factors:
        raise ValueError(f"Empty Pauli string: {label!r}")
    mats = []
    for factor in factors:
        key = PAULI_ALIASES.get(factor, factor)
        if key not in PAULI:
            raise ValueError(f"Unknown Pauli factor {factor!r} in {label!r}")
        mats.append(PAULI[key])
    return reduce(np.kron, mats)


def check_hermitian(A: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    scale = frobenius(A)
    error = frobenius(A - dagger(A))
    if np.any(error > tol * scale):
        worst = float(np.max(error / np.maximum(scale, np.finfo(float).tiny)))
        raise NotHermitianError(f"Matrix is not Hermitian (relative error {worst:.3e})")


def eig_hermitian_batch(
    A: np.ndarray,
    max_sweeps: int = MAX_SWEEPS,
    check: bool = True,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Cyclic Jacobi diagonalisation of a stack of Hermitian matrices.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending along the
    last axis and eigenvectors as columns.
    """
    A = np.array(A, dtype=complex)
    if A.ndim < 2 or A.shape[-1] != A.shape[-2]:
        raise ValueError(f"Expected square matrices, got shape {A.shape}")
    if check:
        check_hermitian(A)

    batch_shape = A.shape[:-2]
    n = A.shape[-1]
    work = A.reshape((-1, n, n)).copy()
    work = 0.5 * (work + dagger(work))
    vecs = np.broadcast_to(np.eye(n, dtype=complex), work.shape).copy()

    scale = frobenius(work)
    threshold = 1e-14 * scale + np.finfo(float).tiny
    pairs = list(combinations(range(n), 2))

    converged = n == 1
    for sweep in range(max_sweeps):
        off_mask = ~np.eye(n, dtype=bool)
        off = np.sqrt(np.sum(np.abs(work[:, off_mask]) ** 2, axis=-1))
        if np.all(off <= threshold):
            converged = True
            break
        for p, q in pairs:
            apq = work[:, p, q]
            r = np.abs(apq)
            active = r > threshold * 1e-3
            if not np.any(active):
                continue
            phase = np.exp(-1j * np.angle(apq))
            theta = 0.5 * np.arctan2(2.0 * r, work[:, p, p].real - work[:, q, q].real)
            theta = np.where(active, theta, 0.0)
            phase = np.where(active, phase, 1.0)
            c = np.cos(theta)
            s = np.sin(theta)
            g00, g01, g10, g11 = c, -s, s * phase, c * phase

            col_p = work[:, :, p].copy()
            col_q = work[:, :, q].copy()
            work[:, :, p] = col_p * g00[:, None] + col_q * g10[:, None]
            work[:, :, q] = col_p * g01[:, None] + col_q * g11[:, None]

            row_p = work[:, p, :].copy()
            row_q = work[:, q, :].copy()
            work[:, p, :] = np.conj(g00)[:, None] * row_p + np.conj(g10)[:, None] * row_q
            work[:, q, :] = np.conj(g01)[:, None] * row_p + np.conj(g11)[:, None] * row_q
            work[:, p, q] = np.where(active, 0.0, work[:, p, q])
            work[:, q, p] = np.where(active, 0.0, work[:, q, p])

            vec_p = vecs[:, :, p].copy()
            vec_q = vecs[:, :, q].copy()
            vecs[:, :, p] = vec_p * g00[:, None] + vec_q * g10[:, None]
            vecs[:, :, q] = vec_p * g01[:, None] + vec_q * g11[:, None]
    else:
        off_mask = ~np.eye(n, dtype=bool)
        off = np.sqrt(np.sum(np.abs(work[:, off_mask]) ** 2, axis=-1))
        converged = bool(np.all(off <= threshold))

    if not converged:
        raise NoConvergenceError(f"Jacobi iteration did not converge within {max_sweeps} sweeps")

    values = np.real(np.diagonal(work, axis1=-2, axis2=-1)).copy()
    order = np.argsort(values, axis=-1, kind="stable")
    values = np.take_along_axis(values, order, axis=-1)
    vecs = np.take_along_axis(vecs, order[:, None, :], axis=-1)
    logger.debug(f"[numkit] Jacobi diagonalised {work.shape[0]} matrices of size {n}")
    return values.reshape(batch_shape + (n,)), vecs.reshape(batch_shape + (n, n))


def eig_hermitian(A: np.ndarray) -> EigDecomposition:
    """Eigendecomposition of a single Hermitian matrix"""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        raise ValueError(f"Expected a single matrix, got shape {A.shape}")
    values, vectors = eig_hermitian_batch(A[None, :, :])
    return EigDecomposition(eigenvalues=values[0], eigenvectors=vectors[0])


def det(A: np.ndarray) -> complex:
    """Determinant through a partially pivoted LU factorisation"""
    A = np.asarray(A, dtype=complex)
    if A.shape[-1] != A.shape[-2]:
        raise ValueError(f"Expected square matrices, got shape {A.shape}")
    return np.linalg.det(A)


def _pfaffian_recursive(A: np.ndarray) -> float:
    n = A.shape[0]
    if n == 0:
        return 1.0
    total = 0.0
    rest = list(range(1, n))
    for pos, j in enumerate(rest):
        if A[0, j] == 0.0:
            continue
        keep = [r for r in rest if r != j]
        minor = A[np.ix_(keep, keep)]
        sign = 1.0 if pos % 2 == 0 else -1.0
        total += sign * A[0, j] * _pfaffian_recursive(minor)
    return total


def pfaffian(A: np.ndarray, tol: float = ANTISYMMETRIC_TOL) -> float:
    """Pfaffian of a real antisymmetric matrix by first-row expansion"""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {A.shape}")
    n = A.shape[0]
    if n % 2:
        raise OddDimensionError(f"Pfaffian of odd dimension {n}")
    if n > PFAFFIAN_MAX_DIM:
        raise MatrixTooLargeError(f"Pfaffian expansion limited to {PFAFFIAN_MAX_DIM}x{PFAFFIAN_MAX_DIM}, got {n}")
    scale = max(1.0, float(frobenius(A)))
    if np.iscomplexobj(A):
        if float(frobenius(A.imag)) > tol * scale:
            raise NotAntisymmetricError("Matrix has a non-negligible imaginary part")
        A = A.real
    A = np.asarray(A, dtype=float)
    if float(frobenius(A + A.T)) > tol * scale:
        raise NotAntisymmetricError("Matrix is not antisymmetric")
    return float(_pfaffian_recursive(0.5 * (A - A.T)))


def unitary_distance(A: np.ndarray) -> float:
    """Frobenius distance of A^dagger A from the identity"""
    A = np.asarray(A, dtype=complex)
    return float(frobenius(dagger(A) @ A - np.eye(A.shape[-1])))


def takagi_symmetric_unitary(U: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """
    Factor a symmetric unitary as U = W W^T with W unitary.

    U = A + iB with A, B real symmetric and commuting, so a generic real
    combination of them is diagonalised by one orthogonal matrix O and
    W = O diag(exp(i phi / 2)).
    """
    U = np.asarray(U, dtype=complex)
    if float(frobenius(U - U.T)) > tol or unitary_distance(U) > tol:
        raise ValueError("Takagi factorisation needs a symmetric unitary matrix")
    real_part, imag_part = U.real, U.imag
    mixer = real_part + 0.6180339887498949 * imag_part
    _, orth = np.linalg.eigh(mixer)
    diagonal = np.diagonal(orth.T @ U @ orth)
    W = orth * np.exp(0.5j * np.angle(diagonal))[None, :]
    if float(frobenius(W @ W.T - U)) > 1e-8:
        # degenerate mixer spectrum; diagonalise a second combination inside each block
        mixer = real_part + np.sqrt(2.0) * imag_part + 0.1 * np.sqrt(3.0) * real_part @ imag_part
        _, orth = np.linalg.eigh(0.5 * (mixer + mixer.T))
        diagonal = np.diagonal(orth.T @ U @ orth)
        W = orth * np.exp(0.5j * np.angle(diagonal))[None, :]
    return W


def block_diag(blocks: Sequence[np.ndarray]) -> np.ndarray:
    """Direct sum of stacked matrices over the trailing two axes"""
    batch = np.broadcast_shapes(*(b.shape[:-2] for b in blocks))
    rows = sum(b.shape[-2] for b in blocks)
    cols = sum(b.shape[-1] for b in blocks)
    out = np.zeros(batch + (rows, cols), dtype=complex)
    r = c = 0
    for b in blocks:
        out[..., r:r + b.shape[-2], c:c + b.shape[-1]] = b
        r += b.shape[-2]
        c += b.shape[-1]
    return out
