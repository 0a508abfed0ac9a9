"""Linear-algebra core for finite frames in C^n and their real lifts.

A frame here is a finite family f_1, ..., f_m of vectors spanning C^n.  Phase
retrieval asks when the magnitudes |<x, f_k>| determine x up to a unimodular
scalar.  Every spectral question about that map is posed in the realified
picture: C^n is identified with R^{2n} through ``realify``, and multiplication
by i becomes the orthogonal matrix returned by ``j_matrix``.

Conventions used throughout the package:

* inner products are linear in the first argument, <x, y> = sum_j x_j conj(y_j)
* rank decisions treat a singular value as zero when it is at most
  ``RANK_RTOL`` times the largest singular value
* only Hermitian / real-symmetric eigensolvers are used, never a general one

All functions are pure and share no mutable state, so concurrent use is safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import NotAFrame, SingularTransform, ZeroScalar

__all__ = [
    "RANK_RTOL",
    "EIG_FLOOR_RTOL",
    "COND_CAP",
    "ComplexFrame",
    "RealifiedFrame",
    "SymOuter",
    "FrameOperatorSummary",
    "j_matrix",
    "realify",
    "unrealify",
    "rank_by_svd",
    "build_phi",
    "r_matrix",
    "l_matrix",
    "sym_outer",
    "nuclear_norm_rank2",
    "frame_bounds",
    "gram_squared",
    "transform_frame",
    "canonical_dual",
    "parseval_version",
]

# A singular value counts as zero when it is <= RANK_RTOL * largest.
RANK_RTOL = 1e-9

# Inverting the frame operator is refused when its smallest eigenvalue is
# <= EIG_FLOOR_RTOL * largest.
EIG_FLOOR_RTOL = 1e-12

# Default condition-number cap for transforms that must stay invertible.
COND_CAP = 1e12


def j_matrix(n: int) -> np.ndarray:
    """Return the 2n x 2n block matrix [[0, -I], [I, 0]].

    Acting on realified vectors it implements multiplication by i:
    ``j_matrix(n) @ realify(x) == realify(1j * x)``.  It is orthogonal and
    squares to minus the identity.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = -np.eye(n)
    J[n:, :n] = np.eye(n)
    return J


def realify(x: np.ndarray) -> np.ndarray:
    """Map a complex n-vector to the real 2n-vector of its parts.

    The map stacks real parts over imaginary parts.  It is an isometry for
    the real inner product: <realify(x), realify(y)> = Re <x, y>.
    """
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    return np.concatenate([x.real, x.imag])


def unrealify(xi: np.ndarray) -> np.ndarray:
    """Inverse of :func:`realify`: rebuild the complex n-vector."""
    xi = np.asarray(xi, dtype=np.float64).reshape(-1)
    if xi.size % 2 != 0:
        raise ValueError(f"realified vector must have even length, got {xi.size}")
    n = xi.size // 2
    return xi[:n] + 1j * xi[n:]


def rank_by_svd(mat: np.ndarray, rtol: float = RANK_RTOL) -> int:
    """Numerical rank: number of singular values above rtol * largest."""
    mat = np.asarray(mat)
    if mat.size == 0:
        return 0
    sv = np.linalg.svd(mat, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > rtol * sv[0]))


def _infer_field(vectors: np.ndarray) -> str:
    return "real" if np.all(vectors.imag == 0.0) else "complex"


@dataclass(frozen=True)
class ComplexFrame:
    """An ordered family of m vectors in C^n, stored as the rows of a
    read-only (m, n) complex array.

    ``field`` records whether the family is declared real (all imaginary
    parts exactly zero) or genuinely complex; the real label is validated at
    construction.  The family is not required to span C^n; ``is_frame``
    reports whether it does, using the package-wide rank threshold.
    """

    n: int
    m: int
    vectors: np.ndarray
    field: str = "complex"

    def __post_init__(self) -> None:
        vecs = np.asarray(self.vectors, dtype=np.complex128)
        if vecs.ndim != 2:
            raise ValueError(f"vectors must be 2-dimensional, got shape {vecs.shape}")
        if vecs.shape != (self.m, self.n):
            raise ValueError(
                f"vectors shape {vecs.shape} does not match (m, n) = ({self.m}, {self.n})"
            )
        if self.m < 1 or self.n < 1:
            raise ValueError(f"need m >= 1 and n >= 1, got m={self.m}, n={self.n}")
        if not np.all(np.isfinite(vecs)):
            raise ValueError("vectors must have finite entries")
        if self.field not in ("real", "complex"):
            raise ValueError(f"field must be 'real' or 'complex', got {self.field!r}")
        if self.field == "real" and np.any(vecs.imag != 0.0):
            raise ValueError("field is 'real' but some entry has a nonzero imaginary part")
        vecs = vecs.copy()
        vecs.setflags(write=False)
        object.__setattr__(self, "vectors", vecs)

    @classmethod
    def from_vectors(cls, vectors, field: str | None = None) -> "ComplexFrame":
        """Build a frame from any (m, n) array-like; infer the field label
        when none is given."""
        vecs = np.asarray(vectors, dtype=np.complex128)
        if vecs.ndim != 2:
            raise ValueError(f"vectors must be 2-dimensional, got shape {vecs.shape}")
        if field is None:
            field = _infer_field(vecs)
        m, n = vecs.shape
        return cls(n=n, m=m, vectors=vecs, field=field)

    @cached_property
    def is_frame(self) -> bool:
        """True when the family spans C^n (numerical rank equals n)."""
        return rank_by_svd(self.vectors) == self.n


@dataclass(frozen=True)
class RealifiedFrame:
    """Realified data for a frame: the lifted vectors phi_k = realify(f_k),
    the stack of lifted measurement forms Phi_k = build_phi(f_k), and the
    multiplication-by-i matrix J.

    phi has shape (m, 2n), Phi has shape (m, 2n, 2n), J has shape (2n, 2n).
    """

    phi: np.ndarray
    Phi: np.ndarray
    J: np.ndarray

    @classmethod
    def from_frame(cls, fr: ComplexFrame) -> "RealifiedFrame":
        J = j_matrix(fr.n)
        phi = np.stack([realify(f) for f in fr.vectors])
        Jphi = phi @ J.T
        Phi = (np.einsum("ki,kj->kij", phi, phi)
               + np.einsum("ki,kj->kij", Jphi, Jphi))
        for arr in (phi, Phi, J):
            arr.setflags(write=False)
        return cls(phi=phi, Phi=Phi, J=J)

    @property
    def two_n(self) -> int:
        return self.phi.shape[1]

    @property
    def m(self) -> int:
        return self.phi.shape[0]


def build_phi(f: np.ndarray) -> np.ndarray:
    """Lifted measurement form of a single vector f in C^n.

    Returns the symmetric PSD matrix ``phi phi^T + (J phi)(J phi)^T`` with
    phi = realify(f).  Its quadratic form at realify(x) equals |<x, f>|^2,
    its trace is 2 ||f||^2, its rank is at most 2, and it commutes with J.
    """
    phi = realify(f)
    n = phi.size // 2
    Jphi = j_matrix(n) @ phi
    return np.outer(phi, phi) + np.outer(Jphi, Jphi)


def r_matrix(rf: RealifiedFrame, xi: np.ndarray) -> np.ndarray:
    """Gram matrix of the vectors Phi_k xi, a (2n, 2n) symmetric PSD matrix.

    Up to a factor 4 this is the Gram matrix of the gradients of the
    squared-magnitude measurement map at xi, so its rank measures local
    injectivity.  The phase direction J xi is always in its kernel; the
    frame is phase retrievable exactly when, for every nonzero xi, nothing
    else is, i.e. when the second-smallest eigenvalue stays positive.

    Quadratic in xi: r_matrix(rf, c * xi) == c**2 * r_matrix(rf, xi).
    """
    xi = np.asarray(xi, dtype=np.float64).reshape(-1)
    prods = rf.Phi @ xi
    return prods.T @ prods


def l_matrix(rf: RealifiedFrame, xi: np.ndarray) -> np.ndarray:
    """r_matrix plus the rank-one completion (J xi)(J xi)^T in the phase
    direction.

    For a phase retrievable frame with injectivity margin a0 this matrix is
    bounded below by min(1, a0) * ||xi||^2 on the whole space.
    """
    xi = np.asarray(xi, dtype=np.float64).reshape(-1)
    Jxi = rf.J @ xi
    return r_matrix(rf, xi) + np.outer(Jxi, Jxi)


@dataclass(frozen=True)
class SymOuter:
    """Symmetrized outer product (u v* + v u*) / 2 of two vectors, a
    Hermitian (real symmetric when u, v are real) matrix of rank at most 2
    with at most one positive and one negative eigenvalue."""

    u: np.ndarray
    v: np.ndarray
    matrix: np.ndarray


def sym_outer(u: np.ndarray, v: np.ndarray) -> SymOuter:
    """Build the symmetrized outer product of u and v."""
    u = np.asarray(u, dtype=np.complex128).reshape(-1)
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    if u.size != v.size:
        raise ValueError(f"u and v must share a length, got {u.size} and {v.size}")
    mat = (np.outer(u, v.conj()) + np.outer(v, u.conj())) / 2.0
    for arr in (u, v, mat):
        arr.setflags(write=False)
    return SymOuter(u=u, v=v, matrix=mat)


def nuclear_norm_rank2(t: SymOuter) -> float:
    """Nuclear norm (sum of absolute eigenvalues) of a symmetrized outer
    product, computed by Hermitian eigendecomposition.

    Never exceeds sqrt(2) * ||u|| * ||v||.
    """
    w = np.linalg.eigvalsh(t.matrix)
    return float(np.sum(np.abs(w)))


@dataclass(frozen=True)
class FrameOperatorSummary:
    """Frame operator S = sum_k f_k f_k* with its extreme eigenvalues.

    A is the lower frame bound (smallest eigenvalue, clamped at 0), B the
    upper frame bound (largest eigenvalue).  A > 0 exactly when the family
    spans, up to the rank threshold.
    """

    S: np.ndarray
    A: float
    B: float


def frame_bounds(fr: ComplexFrame) -> FrameOperatorSummary:
    """Frame operator and optimal frame bounds of the family."""
    V = fr.vectors
    S = V.T @ V.conj()
    w = np.linalg.eigvalsh(S)
    S.setflags(write=False)
    return FrameOperatorSummary(S=S, A=float(max(w[0], 0.0)), B=float(max(w[-1], 0.0)))


def gram_squared(fr: ComplexFrame) -> np.ndarray:
    """Entrywise squared-magnitude Gram matrix, G[k, l] = |<f_k, f_l>|^2.

    Real symmetric with nonnegative entries; diagonal entries are ||f_k||^4.
    Invariant under per-vector unimodular scalings and a common unitary.
    """
    V = fr.vectors
    G = V @ V.conj().T
    return np.abs(G) ** 2


def transform_frame(fr: ComplexFrame, T: np.ndarray, z: np.ndarray,
                    cond_cap: float = COND_CAP) -> ComplexFrame:
    """Apply g_k = z_k * (T f_k) with invertible T and nonzero scalars z_k.

    Phase retrievability is preserved by such transforms, which is what
    makes them useful for moving certificates between equivalent frames.

    Raises SingularTransform when the condition number of T exceeds
    ``cond_cap`` (or is not finite), and ZeroScalar when some z_k is 0.
    """
    T = np.asarray(T, dtype=np.complex128)
    z = np.asarray(z, dtype=np.complex128).reshape(-1)
    if T.shape != (fr.n, fr.n):
        raise ValueError(f"T must have shape ({fr.n}, {fr.n}), got {T.shape}")
    if z.size != fr.m:
        raise ValueError(f"need one scalar per vector, got {z.size} for m={fr.m}")
    if np.any(z == 0):
        raise ZeroScalar("all scalars z_k must be nonzero")
    cond = np.linalg.cond(T)
    if not np.isfinite(cond) or cond > cond_cap:
        raise SingularTransform(
            f"transform condition number {cond:g} exceeds cap {cond_cap:g}"
        )
    out = fr.vectors @ T.T * z[:, None]
    return ComplexFrame.from_vectors(out)


def _checked_frame_operator(fr: ComplexFrame) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of the frame operator, rejecting near-singular S."""
    S = frame_bounds(fr).S
    w, U = np.linalg.eigh(S)
    if w[-1] <= 0.0 or w[0] <= EIG_FLOOR_RTOL * w[-1]:
        raise NotAFrame(
            "frame operator is singular up to the eigenvalue floor; "
            "the family does not span"
        )
    return w, U


def canonical_dual(fr: ComplexFrame) -> ComplexFrame:
    """Canonical dual frame S^{-1} f_k.

    The dual of the dual is the original frame; duality inverts the frame
    bounds to (1/B, 1/A).
    """
    w, U = _checked_frame_operator(fr)
    Sinv = (U / w) @ U.conj().T
    out = fr.vectors @ Sinv.T
    return ComplexFrame.from_vectors(out)


def parseval_version(fr: ComplexFrame) -> ComplexFrame:
    """Closest Parseval frame S^{-1/2} f_k; its frame bounds are both 1."""
    w, U = _checked_frame_operator(fr)
    Sinvhalf = (U / np.sqrt(w)) @ U.conj().T
    out = fr.vectors @ Sinvhalf.T
    return ComplexFrame.from_vectors(out)
