"""Dense complex linear algebra for small non-normal matrices.

Eigendecomposition with biorthonormal left/right systems, Hermitian square
roots and matrix exponentials.  Everything works on plain ``numpy`` arrays
of dtype ``complex128``; sizes are desk scale (N up to a few dozen).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from ._config import default_tol
from .errors import (
    DegenerateSpectrum,
    DimensionMismatch,
    NonConvergence,
    NotDiagonalizable,
    NotHermitian,
    NotPositiveDefinite,
)

#: right-eigenvector condition number above which a matrix is called defective
COND_THRESHOLD = 1e8
#: relative eigenvalue gap below which eigenvalues form one degenerate block
DEGENERACY_TOL = 1e-9


def as_matrix(a, *, square: bool = False, name: str = "matrix") -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2 or m.size == 0:
        raise DimensionMismatch(f"{name} must be a non-empty 2-d array, got shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def as_vector(a, dim: int | None = None, *, name: str = "vector") -> np.ndarray:
    """Coerce to a 1-d complex vector (column matrices are flattened)."""
    v = np.asarray(a, dtype=complex)
    if v.ndim == 2 and 1 in v.shape:
        v = v.reshape(-1)
    if v.ndim != 1:
        raise DimensionMismatch(f"{name} must be a vector, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatch(f"{name} has length {v.shape[0]}, expected {dim}")
    return v


def adjoint(a) -> np.ndarray:
    """Conjugate transpose with respect to the standard L2 inner product."""
    return np.conj(np.asarray(a)).T


def hermiticity_residual(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - adjoint(a)))


def _sort_key(values: np.ndarray) -> np.ndarray:
    return np.lexsort((values.imag, values.real))


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues with biorthonormal right (columns psi_n) and left (phi_n) vectors.

    ``M @ right[:, n] == eigenvalues[n] * right[:, n]`` and
    ``M^dagger @ left[:, n] == conj(eigenvalues[n]) * left[:, n]`` with
    ``left^dagger @ right == I``.
    """

    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    left_vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        return (self.right_vectors * self.eigenvalues) @ adjoint(self.left_vectors)

    def gram(self) -> np.ndarray:
        return adjoint(self.left_vectors) @ self.right_vectors

    def residuals(self, m: np.ndarray) -> tuple[float, float, float]:
        """Return (right residual, left residual, biorthonormality deviation)."""
        r, l, e = self.right_vectors, self.left_vectors, self.eigenvalues
        res_r = np.linalg.norm(m @ r - r * e)
        res_l = np.linalg.norm(adjoint(m) @ l - l * np.conj(e))
        dev = np.linalg.norm(self.gram() - np.eye(self.dim))
        return float(res_r), float(res_l), float(dev)


def degenerate_blocks(eigenvalues: np.ndarray, scale: float, rel_gap: float = DEGENERACY_TOL):
    """Group indices of (sorted) eigenvalues whose mutual distance is below ``rel_gap*scale``."""
    thresh = rel_gap * max(scale, 1e-300)
    n = len(eigenvalues)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(eigenvalues[i] - eigenvalues[j]) < thresh:
                parent[find(j)] = find(i)
    blocks: dict[int, list[int]] = {}
    for i in range(n):
        blocks.setdefault(find(i), []).append(i)
    return [np.array(b) for b in blocks.values()]


def biorthonormalize(sys: EigenSystem, *, scale: float | None = None,
                     normalize_right: bool = True) -> EigenSystem:
    """Rescale left vectors so that ``<phi_m|psi_n> = delta_mn``.

    Right vectors are normalized to unit L2 norm first unless
    ``normalize_right`` is false.  Within a block of
    (numerically) degenerate eigenvalues the left vectors are replaced by
    ``L_B inv(G_B)^dagger`` where ``G_B = L_B^dagger R_B``; outside blocks this
    reduces to dividing each left vector by the conjugate of its overlap.
    """
    right = np.array(sys.right_vectors, dtype=complex)
    left = np.array(sys.left_vectors, dtype=complex)
    norms = np.linalg.norm(right, axis=0)
    if np.any(norms == 0):
        raise DegenerateSpectrum("zero right eigenvector")
    if normalize_right:
        right = right / norms
    if scale is None:
        scale = float(np.max(np.abs(sys.eigenvalues), initial=0.0)) or 1.0
    gram = adjoint(left) @ right
    for block in degenerate_blocks(sys.eigenvalues, scale):
        g = gram[np.ix_(block, block)]
        if np.linalg.cond(g) > 1.0 / np.finfo(float).eps ** 0.5:
            raise DegenerateSpectrum(
                f"left/right overlap singular on degenerate block {block.tolist()}"
            )
        left[:, block] = left[:, block] @ adjoint(np.linalg.inv(g))
    return EigenSystem(np.array(sys.eigenvalues), right, left)


def eig(m, *, cond_threshold: float = COND_THRESHOLD) -> EigenSystem:
    """Biorthonormal eigendecomposition of a diagonalizable square matrix.

    Eigenvalues are sorted by real part, then imaginary part.

    Raises:
        NotDiagonalizable: the unit-column right-eigenvector matrix has
            condition number above ``cond_threshold``.
        NonConvergence: LAPACK failed to converge.
    """
    m = as_matrix(m, square=True)
    try:
        w, vl, vr = sla.eig(m, left=True, right=True)
    except (np.linalg.LinAlgError, sla.LinAlgError) as exc:
        raise NonConvergence(str(exc)) from exc
    order = _sort_key(w)
    w, vl, vr = w[order], vl[:, order], vr[:, order]
    vr = vr / np.linalg.norm(vr, axis=0)
    cond = np.linalg.cond(vr)
    if not np.isfinite(cond) or cond > cond_threshold:
        raise NotDiagonalizable(
            f"eigenvector matrix condition number {cond:.3g} exceeds {cond_threshold:.1g}",
            condition_number=cond,
        )
    scale = float(np.linalg.norm(m, 2)) or 1.0
    for block in degenerate_blocks(w, scale):
        if len(block) > 1:
            # any basis of the eigenspace will do; an orthonormal one keeps
            # Hermitian input mapped to orthonormal eigenvectors
            vr[:, block] = np.linalg.qr(vr[:, block])[0]
    try:
        return biorthonormalize(EigenSystem(w, vr, vl), scale=scale)
    except DegenerateSpectrum:
        # LAPACK left vectors inside a degenerate block need not pair with the
        # right ones; the inverse of the right matrix is biorthonormal by construction.
        return EigenSystem(w, vr, adjoint(np.linalg.inv(vr)))


def herm_sqrt(p, *, tol: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian positive square root of ``p`` and its inverse.

    Raises:
        NotHermitian: ``||p - p^dagger|| > tol * ||p||``.
        NotPositiveDefinite: some eigenvalue is <= 0 (the smallest is reported).
    """
    tol = default_tol() if tol is None else tol
    p = as_matrix(p, square=True)
    scale = float(np.linalg.norm(p)) or 1.0
    res = hermiticity_residual(p)
    if res > tol * scale:
        raise NotHermitian(f"matrix is not Hermitian (residual {res:.3g})", residual=res)
    w, v = np.linalg.eigh(0.5 * (p + adjoint(p)))
    if w[0] <= 0:
        raise NotPositiveDefinite(
            f"matrix is not positive definite (smallest eigenvalue {w[0]:.6g})",
            smallest_eigenvalue=float(w[0]),
        )
    root = np.sqrt(w)
    s = (v * root) @ adjoint(v)
    s_inv = (v / root) @ adjoint(v)
    return 0.5 * (s + adjoint(s)), 0.5 * (s_inv + adjoint(s_inv))


def expm_scaled(m, c: complex = 1.0, *, eigensystem: EigenSystem | None = None) -> np.ndarray:
    """``exp(c * m)``.

    Diagonalizable input goes through its eigendecomposition; when the
    eigenvector matrix is ill conditioned the scipy Pade/scaling-squaring
    routine is used instead.
    """
    m = as_matrix(m, square=True)
    if c == 0:
        return np.eye(m.shape[0], dtype=complex)
    if eigensystem is None:
        try:
            eigensystem = eig(m, cond_threshold=1e4)
        except NotDiagonalizable:
            eigensystem = None
    if eigensystem is not None:
        phases = np.exp(c * eigensystem.eigenvalues)
        out = (eigensystem.right_vectors * phases) @ adjoint(eigensystem.left_vectors)
    else:
        out = sla.expm(c * m)
    if not np.all(np.isfinite(out)):
        raise NonConvergence("matrix exponential overflowed")
    return out
