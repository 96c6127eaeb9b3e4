"""Dense complex linear-algebra kernel.

Hilbert-Schmidt orthonormal operator spaces, intertwiner (Sylvester-type)
nullspace solving, PSD square roots / pseudo-inverses, and subspace
comparison.  Everything downstream reduces its "canonical identification"
claims to rank decisions made here, so every rank cut uses a single
relative tolerance and records the spectral gap across the cut.

Vectorization is column-stacking, fixed once: vec(AXB) = (B^T kron A) vec(X).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, NotPSD, ToleranceAmbiguity

DEFAULT_TOL = 1e-9

__all__ = [
    "DEFAULT_TOL",
    "OperatorSpace",
    "as_matrix",
    "vec",
    "unvec",
    "hs_inner",
    "hs_norm",
    "op_norm",
    "rank_cut",
    "hs_orthonormalize",
    "solve_intertwiners",
    "psd_sqrt_pinv",
    "subspace_equal",
    "subspace_intersection",
]


def as_matrix(m) -> np.ndarray:
    """Coerce to a finite complex128 2-d array."""
    a = np.array(m, dtype=np.complex128, copy=True, order="C")
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix contains NaN or Inf entries")
    return a


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(m).reshape(-1, order="F")


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Inverse of :func:`vec`."""
    return np.asarray(v).reshape((rows, cols), order="F")


def hs_inner(x: np.ndarray, y: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product trace(x* y)."""
    return complex(np.vdot(x, y))


def hs_norm(x: np.ndarray) -> float:
    return float(np.linalg.norm(x))


def op_norm(x: np.ndarray) -> float:
    """Operator (spectral) norm."""
    if x.size == 0:
        return 0.0
    return float(np.linalg.norm(x, 2))


def rank_cut(values: np.ndarray, tol: float, what: str = "rank cut",
             floor: float = 0.0) -> tuple[int, float]:
    """Count values above tol * max(values, floor) and report the gap across
    the cut.

    ``floor`` anchors the cut at the natural scale of the producing problem,
    so a numerically-zero input (pure roundoff) yields rank 0 instead of
    mistaking noise for signal.  Raises ToleranceAmbiguity when some value
    lies within a factor of ten of the cut.
    """
    v = np.clip(np.asarray(values, dtype=float), 0.0, None)
    if v.size == 0 or max(v.max(), floor) <= 0.0:
        return 0, np.inf
    cut = tol * max(v.max(), floor)
    near = (v > cut / 10.0) & (v < cut * 10.0)
    if near.any():
        raise ToleranceAmbiguity(
            f"{what}: value {v[near].max():.6e} lies within a factor 10 "
            f"of the cut {cut:.6e}"
        )
    rank = int((v > cut).sum())
    dropped = v[v <= cut]
    if rank == 0 or dropped.size == 0 or dropped.max() <= 0.0:
        gap = np.inf
    else:
        gap = float(v[v > cut].min() / dropped.max())
    return rank, gap


@dataclass(frozen=True, eq=False)
class OperatorSpace:
    """HS-orthonormal basis of a space of dim_out x dim_in complex matrices.

    ``gap`` is the spectral gap of the rank cut that produced the basis
    (inf when nothing was cut).
    """

    dim_out: int
    dim_in: int
    mats: np.ndarray  # (dim, dim_out, dim_in)
    gap: float = field(default=np.inf, compare=False)

    def __post_init__(self):
        m = self.mats
        if m.ndim != 3 or m.shape[1:] != (self.dim_out, self.dim_in):
            raise DimensionMismatch(
                f"basis array shape {m.shape} does not match "
                f"({self.dim_out}, {self.dim_in})"
            )
        m.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.mats.shape[0]

    def vecs(self) -> np.ndarray:
        """Row-stack of column-stacking vectorizations, shape (dim, out*in)."""
        return self.mats.transpose(0, 2, 1).reshape(self.dim, -1)

    def coeffs(self, m: np.ndarray) -> np.ndarray:
        """Coefficients of m against the orthonormal basis (no residual check)."""
        return np.einsum("kij,ij->k", self.mats.conj(), m)

    def project(self, m: np.ndarray) -> np.ndarray:
        if self.dim == 0:
            return np.zeros((self.dim_out, self.dim_in), dtype=np.complex128)
        return np.tensordot(self.coeffs(m), self.mats, axes=1)

    def distance(self, m: np.ndarray) -> float:
        """HS distance of m from the span."""
        return hs_norm(m - self.project(m))

    def contains(self, m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
        return self.distance(m) <= tol * max(1.0, hs_norm(m))

    def projector(self) -> np.ndarray:
        """Orthogonal projection onto the span, acting on vec space."""
        v = self.vecs()
        return v.T @ v.conj()


def _check_common_shape(mats: list[np.ndarray]) -> tuple[int, int]:
    if not mats:
        raise DimensionMismatch("need at least one matrix")
    r, c = mats[0].shape
    for m in mats[1:]:
        if m.shape != (r, c):
            raise DimensionMismatch(f"mixed shapes {m.shape} vs {(r, c)}")
    return r, c


def hs_orthonormalize(mats, tol: float = DEFAULT_TOL) -> OperatorSpace:
    """HS-orthonormal basis of the span of ``mats``.

    The numerical rank is decided by singular values > tol * largest;
    the basis itself comes from a column-pivoted QR so that structured
    inputs (e.g. matrix units) stay structured instead of being mixed
    inside degenerate singular subspaces.
    """
    arr = [as_matrix(m) for m in mats]
    r, c = _check_common_shape(arr)
    A = np.stack([vec(m) for m in arr], axis=1)  # (r*c, k)
    s = np.linalg.svd(A, compute_uv=False)
    rank, gap = rank_cut(s, tol, "hs_orthonormalize")
    if rank == 0:
        return OperatorSpace(r, c, np.zeros((0, r, c), dtype=np.complex128), gap)
    Q, _, _ = scipy.linalg.qr(A, mode="economic", pivoting=True)
    Q = Q[:, :rank]
    # Pivoted QR is rank-revealing in practice; fall back to SVD vectors if
    # the leading pivots fail to carry the whole span.
    resid = A - Q @ (Q.conj().T @ A)
    if np.linalg.norm(resid) > 10.0 * tol * s[0] * max(1.0, np.sqrt(len(arr))):
        U = np.linalg.svd(A, full_matrices=False)[0]
        Q = U[:, :rank]
    basis = np.stack([unvec(Q[:, j], r, c) for j in range(rank)])
    return OperatorSpace(r, c, basis, gap)


def solve_intertwiners(lefts, rights, tol: float = DEFAULT_TOL) -> OperatorSpace:
    """HS-orthonormal basis of {X : lefts[i] X = X rights[i] for all i}.

    lefts act on the codomain, rights on the domain of X.
    """
    A = [as_matrix(m) for m in lefts]
    B = [as_matrix(m) for m in rights]
    if len(A) != len(B):
        raise DimensionMismatch(f"{len(A)} left factors vs {len(B)} right factors")
    n2 = _check_common_shape(A)[0] if A else 0
    n1 = _check_common_shape(B)[0] if B else 0
    for m in A:
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatch("left factors must be square")
    for m in B:
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatch("right factors must be square")
    N = n1 * n2
    I1 = np.eye(n1)
    I2 = np.eye(n2)
    rows = [np.kron(I1, a) - np.kron(b.T, I2) for a, b in zip(A, B)]
    M = np.vstack(rows)
    if M.shape[0] < N:
        M = np.vstack([M, np.zeros((N - M.shape[0], N), dtype=np.complex128)])
    _, s, Vh = np.linalg.svd(M, full_matrices=False)
    # anchor the cut at the operator scale of the constraints so a system
    # that is zero up to roundoff yields the full space, not noise vectors
    scale = max([1e-30] + [op_norm(a) + op_norm(b) for a, b in zip(A, B)])
    rank, gap = rank_cut(s, tol, "solve_intertwiners", floor=scale)
    null = Vh[rank:, :].conj()
    basis = np.stack([unvec(row, n2, n1) for row in null]) if null.shape[0] else \
        np.zeros((0, n2, n1), dtype=np.complex128)
    return OperatorSpace(n2, n1, basis, gap)


def psd_sqrt_pinv(m, tol: float = DEFAULT_TOL):
    """(sqrt, pinv_sqrt, support) of a PSD matrix.

    sqrt @ sqrt ~ m; pinv_sqrt is the pseudo-inverse of sqrt; support is the
    orthogonal projection onto range(m).  Raises NotPSD when m is not
    Hermitian or has an eigenvalue below -tol * scale.
    """
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch("psd_sqrt_pinv expects a square matrix")
    scale = max(1.0, op_norm(a))
    if op_norm(a - a.conj().T) > 100.0 * tol * scale:
        raise NotPSD("matrix is not Hermitian within tolerance")
    h = (a + a.conj().T) / 2.0
    w, V = np.linalg.eigh(h)
    if w.size and w.min() < -tol * scale:
        raise NotPSD(f"eigenvalue {w.min():.6e} below -tol*scale")
    rank, _ = rank_cut(w[::-1], tol, "psd_sqrt_pinv")
    keep = np.zeros_like(w, dtype=bool)
    if rank:
        keep[np.argsort(w)[::-1][:rank]] = True
    wk = np.where(keep, np.clip(w, 0.0, None), 0.0)
    sq = (V * np.sqrt(wk)) @ V.conj().T
    inv = np.zeros_like(wk)
    inv[keep] = 1.0 / np.sqrt(wk[keep])
    pinv_sq = (V * inv) @ V.conj().T
    support = (V * keep.astype(float)) @ V.conj().T
    return sq, pinv_sq, support


def subspace_equal(s1: OperatorSpace, s2: OperatorSpace, tol: float = DEFAULT_TOL):
    """(equal, distance): operator-norm distance of the two span projections."""
    if (s1.dim_out, s1.dim_in) != (s2.dim_out, s2.dim_in):
        raise DimensionMismatch(
            f"ambient shapes differ: {(s1.dim_out, s1.dim_in)} vs "
            f"{(s2.dim_out, s2.dim_in)}"
        )
    d = op_norm(s1.projector() - s2.projector())
    return d <= tol, d


def subspace_contains(big: OperatorSpace, small: OperatorSpace,
                      tol: float = DEFAULT_TOL) -> bool:
    """Whether every basis element of ``small`` lies in the span of ``big``."""
    return all(big.contains(m, tol) for m in small.mats)


def subspace_intersection(s1: OperatorSpace, s2: OperatorSpace,
                          tol: float = DEFAULT_TOL) -> OperatorSpace:
    """Orthonormal basis of the intersection of two spans.

    Eigenvectors of P1 + P2 with eigenvalue 2 span the intersection; the
    cut on 2 - eigenvalue reuses the global rank-cut discipline.
    """
    if (s1.dim_out, s1.dim_in) != (s2.dim_out, s2.dim_in):
        raise DimensionMismatch("ambient shapes differ")
    P = s1.projector() + s2.projector()
    w, V = np.linalg.eigh((P + P.conj().T) / 2.0)
    d = np.clip(2.0 - w, 0.0, None)
    n_out, gap = rank_cut(d, tol, "subspace_intersection", floor=2.0)
    n_in = w.size - n_out
    order = np.argsort(d)  # smallest deviation from 2 first
    cols = V[:, order[:n_in]]
    mats = np.stack([unvec(cols[:, j], s1.dim_out, s1.dim_in)
                     for j in range(n_in)]) if n_in else \
        np.zeros((0, s1.dim_out, s1.dim_in), dtype=np.complex128)
    return OperatorSpace(s1.dim_out, s1.dim_in, mats, gap)
