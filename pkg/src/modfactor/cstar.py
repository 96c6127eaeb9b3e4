"""Finite-dimensional C*-algebras as concrete *-closed unital matrix algebras.

Algebras are always anchored to an ambient space; abstract algebras never
exist unanchored.  The unit is the ambient identity (nondegeneracy).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, ToleranceAmbiguity, ValidationError
from .numkernel import (
    DEFAULT_TOL,
    OperatorSpace,
    hs_norm,
    hs_orthonormalize,
    solve_intertwiners,
    subspace_intersection,
)

__all__ = [
    "FiniteCStarAlgebra",
    "build_algebra",
    "algebra_from_span",
    "commutant",
    "center",
    "block_decomposition",
    "star_isomorphic",
    "hermitian_basis",
]


@dataclass(frozen=True, eq=False)
class FiniteCStarAlgebra:
    """A *-closed unital algebra of matrices acting on C^ambient_dim."""

    ambient_dim: int
    space: OperatorSpace
    unit: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.space.dim_out != self.ambient_dim or self.space.dim_in != self.ambient_dim:
            raise DimensionMismatch("algebra basis must consist of square ambient matrices")
        self.unit.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def basis(self) -> np.ndarray:
        return self.space.mats

    def contains(self, m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
        return self.space.contains(m, tol)

    def coeffs(self, m: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
        """Basis coefficients of an element; ValidationError if m leaves the span."""
        c = self.space.coeffs(m)
        resid = hs_norm(m - np.tensordot(c, self.basis, axes=1))
        if resid > tol * max(1.0, hs_norm(m)):
            raise ValidationError(f"element leaves the algebra span (residual {resid:.3e})")
        return c


def _validate_algebra(space: OperatorSpace, tol: float) -> None:
    n = space.dim_out
    mats = space.mats
    k = space.dim
    ident = np.eye(n, dtype=np.complex128)
    if space.distance(ident) > tol * np.sqrt(n):
        raise ValidationError("algebra does not contain the ambient identity")
    bflat = mats.reshape(k, -1)
    adjflat = mats.conj().transpose(0, 2, 1).reshape(k, -1)
    resid = adjflat - (adjflat @ bflat.conj().T) @ bflat
    rnorm = np.linalg.norm(resid, axis=1)
    if rnorm.size and rnorm.max() > tol:
        raise ValidationError(
            f"adjoint of basis element {int(np.argmax(rnorm))} leaves the span"
        )
    for i in range(k):
        prods = np.matmul(mats[i], mats).reshape(k, -1)
        coeffs = prods @ bflat.conj().T
        res = prods - coeffs @ bflat
        rel = np.linalg.norm(res, axis=1) / np.maximum(
            1.0, np.linalg.norm(prods, axis=1))
        if rel.max() > tol:
            raise ValidationError(
                f"product of basis elements ({i}, {int(np.argmax(rel))}) leaves the span"
            )


def algebra_from_span(mats, tol: float = DEFAULT_TOL,
                      validate: bool = True) -> FiniteCStarAlgebra:
    """Orthonormalize a spanning set and validate *-algebra closure."""
    space = hs_orthonormalize(mats, tol)
    if space.dim_out != space.dim_in:
        raise DimensionMismatch("algebra elements must be square")
    if validate:
        _validate_algebra(space, tol)
    n = space.dim_out
    return FiniteCStarAlgebra(n, space, np.eye(n, dtype=np.complex128))


def algebra_from_basis(mats, tol: float = DEFAULT_TOL) -> FiniteCStarAlgebra:
    """Wrap an already-orthonormal basis verbatim (no re-orthonormalization,
    so index alignment with external data survives) and validate closure."""
    arr = np.stack([np.asarray(m, dtype=np.complex128) for m in mats])
    if arr.shape[1] != arr.shape[2]:
        raise DimensionMismatch("algebra elements must be square")
    k = arr.shape[0]
    flat = arr.reshape(k, -1)
    gram = flat @ flat.conj().T
    if np.abs(gram - np.eye(k)).max() > 1e-8:
        raise ValidationError("stored algebra basis is not HS-orthonormal")
    space = OperatorSpace(arr.shape[1], arr.shape[2], arr)
    _validate_algebra(space, tol)
    n = space.dim_out
    return FiniteCStarAlgebra(n, space, np.eye(n, dtype=np.complex128))


def _from_space(space: OperatorSpace, tol: float = DEFAULT_TOL,
                validate: bool = True) -> FiniteCStarAlgebra:
    """Constructed (mathematically *-closed) spans may pass validate=False;
    the identity membership is always checked."""
    n = space.dim_out
    if validate:
        _validate_algebra(space, tol)
    elif space.distance(np.eye(n, dtype=np.complex128)) > tol * np.sqrt(n):
        raise ValidationError("algebra does not contain the ambient identity")
    return FiniteCStarAlgebra(n, space, np.eye(n, dtype=np.complex128))


def build_algebra(blocks) -> FiniteCStarAlgebra:
    """Block-diagonal sum of M_n tensor I_m for (size, multiplicity) pairs.

    Basis elements are the amplified matrix units, HS-normalized, so the
    returned basis is exactly structured (no orthonormalization pass).
    """
    blocks = [(int(n), int(m)) for n, m in blocks]
    for n, m in blocks:
        if n < 1 or m < 1:
            raise ValidationError(f"block sizes and multiplicities must be >= 1, got {(n, m)}")
    total = sum(n * m for n, m in blocks)
    mats = []
    offset = 0
    for n, m in blocks:
        Im = np.eye(m, dtype=np.complex128)
        for k in range(n):
            for l in range(n):
                unit = np.zeros((n, n), dtype=np.complex128)
                unit[k, l] = 1.0
                big = np.zeros((total, total), dtype=np.complex128)
                big[offset:offset + n * m, offset:offset + n * m] = np.kron(unit, Im)
                mats.append(big / np.sqrt(m))
        offset += n * m
    space = OperatorSpace(total, total, np.stack(mats))
    return FiniteCStarAlgebra(total, space, np.eye(total, dtype=np.complex128))


def commutant(A: FiniteCStarAlgebra, tol: float = DEFAULT_TOL) -> FiniteCStarAlgebra:
    """{X : XA = AX for all A} on the same ambient space."""
    key = ("commutant", tol)
    if key not in A._cache:
        space = solve_intertwiners(A.basis, A.basis, tol)
        A._cache[key] = _from_space(space, tol, validate=False)
    return A._cache[key]


def center(A: FiniteCStarAlgebra, tol: float = DEFAULT_TOL) -> FiniteCStarAlgebra:
    """A intersected with its commutant."""
    c = commutant(A, tol)
    space = subspace_intersection(A.space, c.space, tol)
    return _from_space(space, tol, validate=False)


def hermitian_basis(space: OperatorSpace) -> np.ndarray:
    """Real-orthonormal Hermitian matrices spanning the Hermitian part of a
    *-closed span.  Used for deterministic generic elements."""
    cands = []
    for b in space.mats:
        cands.append((b + b.conj().T) / 2.0)
        cands.append((b - b.conj().T) / 2.0j)
    out = hs_orthonormalize(cands, DEFAULT_TOL)
    # re-hermitize: the QR basis of a Hermitian real-span can pick up phases
    herm = []
    for m in out.mats:
        h = (m + m.conj().T) / 2.0
        a = (m - m.conj().T) / 2.0j
        herm.append(h if hs_norm(h) >= hs_norm(a) else a)
    return hs_orthonormalize(herm, DEFAULT_TOL).mats


def _minimal_central_projections(Z: FiniteCStarAlgebra, tol: float) -> list[np.ndarray]:
    """Spectral projections of a generic Hermitian central element.

    Deterministic: fixed weight sequences, retried with different weights if
    an accidental eigenvalue collision merges two minimal projections.
    """
    hb = hermitian_basis(Z.space)
    k = hb.shape[0]
    for attempt in range(8):
        w = np.cos((np.arange(k) + 1.0) * (attempt + 1.0) * 0.731) + 2.0
        h = np.tensordot(w, hb, axes=1)
        ev, V = np.linalg.eigh(h)
        spread = max(ev.max() - ev.min(), 1.0)
        splits = np.nonzero(np.diff(ev) > 1e-3 * spread)[0]
        groups = np.split(np.arange(ev.size), splits + 1)
        projs = [V[:, g] @ V[:, g].conj().T for g in groups]
        ok = True
        for p in projs:
            if Z.space.distance(p) > 100.0 * tol * max(1.0, hs_norm(p)):
                ok = False
                break
            pz = hs_orthonormalize([p @ z for z in Z.basis], tol)
            if pz.dim != 1:
                ok = False
                break
        if ok:
            return projs
    raise ToleranceAmbiguity("could not separate minimal central projections")


def block_decomposition(A: FiniteCStarAlgebra, tol: float = DEFAULT_TOL):
    """Wedderburn data [(size, multiplicity), ...], sorted."""
    Z = center(A, tol)
    blocks = []
    for p in _minimal_central_projections(Z, tol):
        ideal = hs_orthonormalize([b @ p for b in A.basis], tol)
        n = round(np.sqrt(ideal.dim))
        if n * n != ideal.dim:
            raise ToleranceAmbiguity(
                f"block ideal dimension {ideal.dim} is not a perfect square"
            )
        r = round(float(np.trace(p).real))
        if r % n:
            raise ToleranceAmbiguity(
                f"central projection rank {r} not divisible by block size {n}"
            )
        blocks.append((n, r // n))
    return sorted(blocks)


def star_isomorphic(A1: FiniteCStarAlgebra, A2: FiniteCStarAlgebra,
                    tol: float = DEFAULT_TOL) -> bool:
    """Same multiset of block sizes; multiplicities ignored."""
    b1 = sorted(n for n, _ in block_decomposition(A1, tol))
    b2 = sorted(n for n, _ in block_decomposition(A2, tol))
    return b1 == b2
