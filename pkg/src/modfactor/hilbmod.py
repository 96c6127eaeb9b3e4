"""Hilbert modules over finite-dimensional C*-algebras, realized as operator
spaces E inside B(G, H) with inner product <x, y> = x* y.

Houses modules, correspondences (modules with a commuting left action),
homomorphisms given on an algebra basis, quasi-orthonormal systems, the
commutant lifting, and the module <-> representation dictionary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cstar import FiniteCStarAlgebra, commutant, _from_space
from .errors import (
    DimensionMismatch,
    NotInModule,
    PreconditionError,
    StallError,
    ValidationError,
)
from .numkernel import (
    DEFAULT_TOL,
    OperatorSpace,
    as_matrix,
    hs_norm,
    hs_orthonormalize,
    op_norm,
    rank_cut,
    solve_intertwiners,
    subspace_contains,
    subspace_equal,
)

__all__ = [
    "HilbertModule",
    "Correspondence",
    "Homomorphism",
    "QuasiONS",
    "build_module",
    "module_from_parts",
    "inner_product",
    "finite_rank_algebra",
    "adjointable_algebra",
    "dual_module",
    "is_full",
    "fullification",
    "bimodule_center",
    "verify_unit_vector",
    "quasi_orthonormal_system",
    "dual_qons_family",
    "commutant_lifting",
    "module_from_representation",
    "commutant_bimodule",
    "module_over_itself",
    "algebra_bimodule",
    "as_bimodule",
    "identity_homomorphism",
]


@dataclass(eq=False)
class Homomorphism:
    """A linear map given on the orthonormal basis of its domain algebra.

    Validated as a unital *-homomorphism into B(C^codomain_dim).
    """

    domain: FiniteCStarAlgebra
    codomain_dim: int
    images: np.ndarray  # (domain.dim, d, d)

    def __post_init__(self):
        self.images = np.ascontiguousarray(self.images, dtype=np.complex128)
        if self.images.shape != (self.domain.dim, self.codomain_dim, self.codomain_dim):
            raise DimensionMismatch(
                f"images shape {self.images.shape} does not match "
                f"({self.domain.dim}, {self.codomain_dim}, {self.codomain_dim})"
            )
        self.images.setflags(write=False)
        self._validated_at: float | None = None

    def apply(self, a: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
        c = self.domain.coeffs(as_matrix(a), tol)
        return np.tensordot(c, self.images, axes=1)

    def image_space(self, tol: float = DEFAULT_TOL) -> OperatorSpace:
        return hs_orthonormalize(self.images, tol)

    def is_faithful(self, tol: float = DEFAULT_TOL) -> bool:
        v = self.images.reshape(self.domain.dim, -1)
        s = np.linalg.svd(v, compute_uv=False)
        return rank_cut(s, tol, "homomorphism faithfulness")[0] == self.domain.dim

    def validate(self, tol: float = DEFAULT_TOL) -> None:
        """Unitality, *-preservation and multiplicativity on the basis.

        Residuals are measured in Frobenius norm; results are cached so a
        shared homomorphism is only validated once per tolerance.
        """
        if self._validated_at is not None and self._validated_at <= tol:
            return
        dom = self.domain
        k = dom.dim
        unit_img = self.apply(dom.unit, tol)
        if op_norm(unit_img - np.eye(self.codomain_dim)) > 100.0 * tol:
            raise ValidationError("homomorphism is not unital")
        adj = np.stack([b.conj().T for b in dom.basis])
        cadj = np.einsum("kij,mij->mk", dom.basis.conj(), adj)
        star_want = np.tensordot(cadj, self.images, axes=1)
        star_got = self.images.conj().transpose(0, 2, 1)
        star_res = np.linalg.norm((star_want - star_got).reshape(k, -1), axis=1)
        if star_res.max() > 100.0 * tol * np.sqrt(self.codomain_dim):
            i = int(np.argmax(star_res))
            raise ValidationError(f"homomorphism not *-preserving at basis element {i}")
        prods = np.einsum("iab,jbc->ijac", dom.basis, dom.basis)
        cprod = np.einsum("kab,ijab->ijk", dom.basis.conj(), prods)
        closure = prods - np.einsum("ijk,kab->ijab", cprod, dom.basis)
        if np.linalg.norm(closure.reshape(k * k, -1), axis=1).max() > 100.0 * tol:
            raise ValidationError("domain basis is not multiplicatively closed")
        for i in range(k):
            want = np.tensordot(cprod[i], self.images, axes=1)
            got = np.matmul(self.images[i], self.images)
            res = np.linalg.norm((want - got).reshape(k, -1), axis=1)
            j = int(np.argmax(res))
            scale = max(1.0, float(np.linalg.norm(want[j])))
            if res[j] > 100.0 * tol * scale:
                raise ValidationError(
                    f"homomorphism not multiplicative on basis pair ({i}, {j})"
                )
        self._validated_at = tol

    def compose(self, inner: "Homomorphism", tol: float = DEFAULT_TOL) -> "Homomorphism":
        """self after inner."""
        imgs = np.stack([self.apply(m, tol) for m in inner.images])
        return Homomorphism(inner.domain, self.codomain_dim, imgs)

    def power(self, t: int, tol: float = DEFAULT_TOL) -> "Homomorphism":
        if t < 1:
            raise PreconditionError("power requires t >= 1")
        out = self
        for _ in range(t - 1):
            out = self.compose(out, tol)
        return out


def identity_homomorphism(A: FiniteCStarAlgebra) -> Homomorphism:
    return Homomorphism(A, A.ambient_dim, A.basis.copy())


@dataclass(eq=False)
class HilbertModule:
    """Operator space E in B(G, H), right module over ``base`` acting on G.

    ``h_embed`` is the isometry from the (possibly trimmed) H back into the
    H the module was built in; None when no trim happened.
    """

    base: FiniteCStarAlgebra
    space: OperatorSpace  # (k, dim_H, dim_G)
    trimmed_from: int | None = None
    h_embed: np.ndarray | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def dim_G(self) -> int:
        return self.space.dim_in

    @property
    def dim_H(self) -> int:
        return self.space.dim_out

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def basis(self) -> np.ndarray:
        return self.space.mats

    def stacked(self) -> np.ndarray:
        """Horizontal stack [x_1 | ... | x_k], shape (dim_H, k * dim_G)."""
        return np.hstack(list(self.basis))

    def coeffs(self, x: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
        c = self.space.coeffs(x)
        resid = hs_norm(x - np.tensordot(c, self.basis, axes=1))
        if resid > tol * max(1.0, hs_norm(x)):
            raise NotInModule(f"element leaves the module span (residual {resid:.3e})")
        return c


@dataclass(eq=False)
class Correspondence:
    """A Hilbert module with a unital *-representation of a left algebra.

    The left action acts on the codomain space of the module elements, so
    (a x) c = a (x c) holds exactly by associativity of composition.
    """

    module: HilbertModule
    left: FiniteCStarAlgebra
    left_action: Homomorphism
    meta: dict = field(default_factory=dict)

    @property
    def base(self) -> FiniteCStarAlgebra:
        return self.module.base

    def act(self, a: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
        return self.left_action.apply(a, tol)

    def validate(self, tol: float = DEFAULT_TOL) -> None:
        if self.left_action.codomain_dim != self.module.dim_H:
            raise DimensionMismatch("left action must act on the module's codomain space")
        if self.left_action.domain is not self.left and \
                not subspace_equal(self.left_action.domain.space, self.left.space, 1e-6)[0]:
            raise ValidationError("left_action domain differs from the left algebra")
        self.left_action.validate(tol)
        basis = self.module.basis
        for i, img in enumerate(self.left_action.images):
            moved = np.matmul(img, basis)
            resid = _batch_span_residual(self.module.space, moved)
            if resid > 100.0 * tol:
                raise ValidationError(
                    f"left action of basis element {i} leaves the module span"
                )


@dataclass(eq=False)
class QuasiONS:
    """Pairs (e, p) with <e_a, e_b> = delta p_a, p_a projections in the base,
    and sum e e* = identity on H."""

    members: list  # of (e, p) ndarray pairs
    residual: float = 0.0

    def __len__(self):
        return len(self.members)


# ---------------------------------------------------------------------------
# construction and validation


def _trim_columns(mats: np.ndarray, dim_H: int, tol: float):
    """Isometry onto the joint column span; None if already nondegenerate."""
    stacked = np.hstack(list(mats)) if len(mats) else np.zeros((dim_H, 0))
    if stacked.shape[1] == 0:
        raise ValidationError("module is zero")
    U, s, _ = np.linalg.svd(stacked, full_matrices=False)
    r, _ = rank_cut(s, tol, "module nondegeneracy trim")
    if r == dim_H:
        return None
    return U[:, :r]


def module_from_parts(base: FiniteCStarAlgebra, space: OperatorSpace,
                      tol: float = DEFAULT_TOL, validate: bool = True) -> HilbertModule:
    """Wrap an orthonormal operator space as a module, validating invariants
    and trimming H to the nondegenerate part (trim is reported, not fatal)."""
    if space.dim_in != base.ambient_dim:
        raise DimensionMismatch("module domain must be the base algebra's ambient space")
    mats = space.mats
    trimmed_from = None
    h_embed = None
    V = _trim_columns(mats, space.dim_out, tol)
    if V is not None:
        trimmed_from = space.dim_out
        h_embed = V
        mats = np.einsum("ij,kjl->kil", V.conj().T, mats)
        space = OperatorSpace(V.shape[1], space.dim_in, mats, space.gap)
    mod = HilbertModule(base, space, trimmed_from, h_embed)
    if validate:
        _validate_module(mod, tol)
    return mod


def _batch_span_residual(space: OperatorSpace, mats: np.ndarray) -> float:
    """Largest relative HS distance of a batch of matrices from a span."""
    if mats.size == 0:
        return 0.0
    flat = mats.reshape(mats.shape[0], -1)
    bflat = space.mats.reshape(space.dim, -1)
    coeffs = flat @ bflat.conj().T
    resid = flat - coeffs @ bflat
    scales = np.maximum(1.0, np.linalg.norm(flat, axis=1))
    return float((np.linalg.norm(resid, axis=1) / scales).max())


def _validate_module(E: HilbertModule, tol: float) -> None:
    for i, x in enumerate(E.basis):
        moved = np.matmul(x[None, :, :], E.base.basis)
        if _batch_span_residual(E.space, moved) > 100.0 * tol:
            raise ValidationError(f"right action moves basis element {i} out of the span")
    for i, x in enumerate(E.basis):
        prods = np.matmul(x.conj().T[None, :, :], E.basis)
        if _batch_span_residual(E.base.space, prods) > 100.0 * tol:
            raise ValidationError(
                f"an inner product against basis element {i} leaves the base algebra"
            )


def build_module(base: FiniteCStarAlgebra, generators, tol: float = DEFAULT_TOL) -> HilbertModule:
    """Close generators under the right action, orthonormalize, validate, and
    trim H to the span of the columns (reported via ``trimmed_from``)."""
    gens = [as_matrix(g) for g in generators]
    if not gens:
        raise ValidationError("need at least one generator")
    dim_G = base.ambient_dim
    for g in gens:
        if g.shape[1] != dim_G:
            raise DimensionMismatch("generator domain must match the base ambient space")
    cands = []
    for g in gens:
        cands.append(g)
        for b in base.basis:
            cands.append(g @ b)
    space = hs_orthonormalize(cands, tol)
    return module_from_parts(base, space, tol)


def inner_product(E: HilbertModule, x, y, tol: float = DEFAULT_TOL) -> np.ndarray:
    """<x, y> = x* y, checked to lie in the base algebra."""
    x = as_matrix(x)
    y = as_matrix(y)
    E.coeffs(x, tol)
    E.coeffs(y, tol)
    p = x.conj().T @ y
    if E.base.space.distance(p) > 100.0 * tol * max(1.0, hs_norm(p)):
        raise ValidationError("inner product leaves the base algebra")
    return p


def finite_rank_algebra(E: HilbertModule, tol: float = DEFAULT_TOL) -> FiniteCStarAlgebra:
    """Span of the rank-one operators x y* on H; unital on H at finite
    dimension for nondegenerate modules.  The span is *-closed by
    construction, so only identity membership is checked numerically."""
    key = ("finite_rank", tol)
    if key not in E._cache:
        prods = [x @ y.conj().T for x in E.basis for y in E.basis]
        space = hs_orthonormalize(prods, tol)
        from .cstar import _from_space
        E._cache[key] = _from_space(space, tol, validate=False)
    return E._cache[key]


def commutant_lifting(E: HilbertModule, tol: float = DEFAULT_TOL) -> Homomorphism:
    """The representation of the base's commutant on H determined by
    rho'(b') x = x b' for every x in E; faithful iff E is full."""
    key = ("commutant_lifting", tol)
    if key in E._cache:
        return E._cache[key]
    Bp = commutant(E.base, tol)
    X = E.stacked()
    Xp = np.linalg.pinv(X)
    images = []
    for bp in Bp.basis:
        Y = np.hstack([x @ bp for x in E.basis])
        R = Y @ Xp
        resid = op_norm(R @ X - Y)
        if resid > 100.0 * tol * max(1.0, op_norm(Y)):
            raise ValidationError(f"commutant lifting relation failed (residual {resid:.3e})")
        images.append(R)
    hom = Homomorphism(Bp, E.dim_H, np.stack(images))
    hom.validate(tol)
    E._cache[key] = hom
    return hom


def adjointable_algebra(E: HilbertModule, tol: float = DEFAULT_TOL) -> FiniteCStarAlgebra:
    """Adjointable operators, computed as the commutant of the lifted
    commutant (not as K(E)); asserted to contain the finite-rank algebra."""
    key = ("adjointable", tol)
    if key in E._cache:
        return E._cache[key]
    rho_p = commutant_lifting(E, tol)
    img = rho_p.image_space(tol)
    space = solve_intertwiners(img.mats, img.mats, tol)
    Ba = _from_space(space, tol, validate=False)
    K = finite_rank_algebra(E, tol)
    if not subspace_contains(Ba.space, K.space, 1e-6):
        raise ValidationError("adjointable algebra does not contain the finite-rank algebra")
    E._cache[key] = Ba
    return Ba


def dual_module(E: HilbertModule, tol: float = DEFAULT_TOL) -> Correspondence:
    """The dual module of adjoints, a correspondence from the base algebra to
    the finite-rank algebra; all operations are plain composition."""
    key = ("dual", tol)
    if key in E._cache:
        return E._cache[key]
    K = finite_rank_algebra(E, tol)
    adj = np.stack([x.conj().T for x in E.basis])
    space = OperatorSpace(E.dim_G, E.dim_H, adj)
    mod = module_from_parts(K, space, tol)
    if mod.h_embed is None:
        left = E.base
        action = identity_homomorphism(E.base)
    else:
        V = mod.h_embed
        imgs = np.stack([V.conj().T @ b @ V for b in E.base.basis])
        left = E.base
        action = Homomorphism(E.base, mod.dim_H, imgs)
    corr = Correspondence(mod, left, action)
    corr.validate(tol)
    E._cache[key] = corr
    return corr


def _ideal_data(E: HilbertModule, tol: float):
    """(uncompressed ideal span, support isometry or None)."""
    key = ("ideal", tol)
    if key in E._cache:
        return E._cache[key]
    inner = hs_orthonormalize(
        [x.conj().T @ y for x in E.basis for y in E.basis], tol)
    triples = []
    for s in inner.mats:
        triples.append(s)
        for b1 in E.base.basis:
            triples.append(b1 @ s)
            triples.append(s @ b1)
            for b2 in E.base.basis:
                triples.append(b1 @ s @ b2)
    span = hs_orthonormalize(triples, tol)
    stacked = np.hstack(list(span.mats))
    U, sv, _ = np.linalg.svd(stacked, full_matrices=False)
    r, _ = rank_cut(sv, tol, "ideal support")
    V = None if r == E.dim_G else U[:, :r]
    E._cache[key] = (span, V)
    return span, V


def is_full(E: HilbertModule, tol: float = DEFAULT_TOL):
    """(full?, ideal): the ideal generated by the inner products, returned as
    an algebra on its support space."""
    span, V = _ideal_data(E, tol)
    eq, _ = subspace_equal(span, E.base.space, 1e-6)
    if V is None:
        ideal = _from_space(span, tol, validate=False)
    else:
        mats = np.einsum("ij,kjl,lm->kim", V.conj().T, span.mats, V)
        ideal = _from_space(hs_orthonormalize(mats, tol), tol, validate=False)
    return eq, ideal


def fullification(E: HilbertModule, tol: float = DEFAULT_TOL):
    """(module over the inner-product ideal, support isometry).

    The base is compressed to the support of the ideal; module elements are
    restricted accordingly.  Identity isometry when E is already full.
    """
    span, V = _ideal_data(E, tol)
    if V is None:
        base = _from_space(span, tol, validate=False)
        mats = E.basis.copy()
    else:
        base = _from_space(hs_orthonormalize(
            np.einsum("ij,kjl,lm->kim", V.conj().T, span.mats, V), tol),
            tol, validate=False)
        mats = np.einsum("kij,jl->kil", E.basis, V)
    space = OperatorSpace(E.dim_H, base.ambient_dim, np.ascontiguousarray(mats))
    mod = module_from_parts(base, space, tol)
    return mod, (np.eye(E.dim_G, dtype=np.complex128) if V is None else V)


def bimodule_center(X: Correspondence, tol: float = DEFAULT_TOL) -> OperatorSpace:
    """{x in X : b x = x b for all b in the base}, for left algebra = base."""
    if X.left.ambient_dim != X.base.ambient_dim or \
            not subspace_equal(X.left.space, X.base.space, 1e-6)[0]:
        raise PreconditionError("bimodule_center requires left algebra equal to the base")
    k = X.module.dim
    rows = []
    for b, img in zip(X.left.basis, X.left_action.images):
        block = np.stack([(img @ x - x @ b).reshape(-1) for x in X.module.basis], axis=1)
        rows.append(block)
    M = np.vstack(rows)
    if M.shape[0] < k:
        M = np.vstack([M, np.zeros((k - M.shape[0], k), dtype=np.complex128)])
    _, s, Vh = np.linalg.svd(M, full_matrices=False)
    scale = max(1.0, float(np.abs(M).max()) * np.sqrt(M.shape[0]))
    r, gap = rank_cut(s, tol, "bimodule_center", floor=scale)
    coeff = Vh[r:, :].conj()
    mats = np.stack([np.tensordot(c, X.module.basis, axes=1) for c in coeff]) \
        if coeff.shape[0] else np.zeros((0, X.module.dim_H, X.module.dim_G), dtype=np.complex128)
    return OperatorSpace(X.module.dim_H, X.module.dim_G, mats, gap)


def verify_unit_vector(E: HilbertModule, xi, tol: float = DEFAULT_TOL) -> bool:
    """Whether <xi, xi> is the unit of the base algebra."""
    xi = as_matrix(xi)
    E.coeffs(xi, tol)  # NotInModule if outside the span
    return op_norm(xi.conj().T @ xi - E.base.unit) <= 1000.0 * tol


def quasi_orthonormal_system(E: HilbertModule, tol: float = DEFAULT_TOL) -> QuasiONS:
    """Greedy complete quasi-orthonormal system.

    Repeat: with q the projection complementary to sum e e*, pick the basis
    element x maximizing ||q L_x|| (lowest index on ties), set
    m = (q x)*(q x), e = q x pinv_sqrt(m), p = support(m).  Each step removes
    rank(m) >= 1 from q, so at most dim_H steps occur.
    """
    from .numkernel import psd_sqrt_pinv

    q = np.eye(E.dim_H, dtype=np.complex128)
    members = []
    for _ in range(E.dim_H + 1):
        if op_norm(q) <= 1000.0 * tol:
            break
        norms = np.array([op_norm(q @ x) for x in E.basis])
        best = int(np.argmax(norms))
        if norms[best] <= 1000.0 * tol:
            raise StallError("no generator reduces the residual projection")
        x = E.basis[best]
        qx = q @ x
        m = qx.conj().T @ qx
        _, pinv_sq, support = psd_sqrt_pinv(m, tol)
        e = qx @ pinv_sq
        p = support
        if E.space.distance(e) > 1e-6 * max(1.0, hs_norm(e)):
            raise ValidationError("quasi-orthonormal element left the module span")
        if E.base.space.distance(p) > 1e-6 * max(1.0, hs_norm(p)):
            raise ValidationError("quasi-orthonormal projection left the base algebra")
        members.append((e, p))
        q = q - e @ e.conj().T
    else:
        raise StallError("quasi-orthonormalization exceeded dim_H steps")
    residual = _qons_residual(E, members)
    if residual > 1e-7:
        raise ValidationError(f"quasi-orthonormal invariants failed ({residual:.3e})")
    return QuasiONS(members, residual)


def _qons_residual(E: HilbertModule, members) -> float:
    res = 0.0
    total = np.zeros((E.dim_H, E.dim_H), dtype=np.complex128)
    for i, (e, p) in enumerate(members):
        res = max(res, op_norm(p @ p - p), op_norm(p - p.conj().T))
        res = max(res, op_norm(e.conj().T @ e - p))
        total += e @ e.conj().T
        for j, (f, _) in enumerate(members):
            if i != j:
                res = max(res, op_norm(e.conj().T @ f))
    res = max(res, op_norm(total - np.eye(E.dim_H)))
    return res


def dual_qons_family(E: HilbertModule, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Family (e_b) in E whose adjoints, paired with e_b e_b*, form a
    complete quasi-orthonormal system for the dual module.

    Postconditions checked: e_a e_b* = delta * projection on H and
    sum <e_b, e_b> = unit of the base.  Requires E full.
    """
    full, _ = is_full(E, tol)
    if not full:
        raise PreconditionError("dual_qons_family requires a full module")
    dual = dual_module(E, tol)
    qons = quasi_orthonormal_system(dual.module, tol)
    family = [u.conj().T for (u, _) in qons.members]
    res = 0.0
    for i, e in enumerate(family):
        for j, f in enumerate(family):
            prod = e @ f.conj().T
            if i != j:
                res = max(res, op_norm(prod))
            else:
                res = max(res, op_norm(prod @ prod - prod), op_norm(prod - prod.conj().T))
    total = sum(e.conj().T @ e for e in family)
    res = max(res, op_norm(total - E.base.unit))
    if res > 1e-7:
        raise ValidationError(f"dual family postconditions failed ({res:.3e})")
    return family


def module_from_representation(B: FiniteCStarAlgebra, rho_p: Homomorphism,
                               tol: float = DEFAULT_TOL) -> HilbertModule:
    """The module {X in B(G, H) : rho'(b') X = X b'} over B, for a unital
    representation rho' of the commutant of B.  Degenerate representations
    are trimmed and reported via ``trimmed_from``."""
    Bp = commutant(B, tol)
    if rho_p.domain.ambient_dim != B.ambient_dim or \
            not subspace_equal(rho_p.domain.space, Bp.space, 1e-6)[0]:
        raise PreconditionError("rho' must be defined on the commutant of B")
    lefts = [rho_p.apply(bp, tol) for bp in Bp.basis]
    space = solve_intertwiners(lefts, list(Bp.basis), tol)
    return module_from_parts(B, space, tol)


def commutant_bimodule(X: Correspondence, tol: float = DEFAULT_TOL) -> Correspondence:
    """The commutant of an A-B correspondence: the intertwiner space
    {Y in B(K, H) : rho(a) Y = Y a}, a B'-A' correspondence on the same H.

    Right action of A' is composition; the left action of B' is the
    commutant lifting of the right structure of X.
    """
    A = X.left
    rho = X.left_action
    if op_norm(rho.apply(A.unit) - np.eye(X.module.dim_H)) > 1e-6:
        raise PreconditionError("left action must be unital")
    lefts = [rho.apply(a, tol) for a in A.basis]
    space = solve_intertwiners(lefts, list(A.basis), tol)
    Ap = commutant(A, tol)
    mod = module_from_parts(Ap, space, tol)
    rho_p = commutant_lifting(X.module, tol)
    Bp = rho_p.domain
    if mod.h_embed is not None:
        V = mod.h_embed
        imgs = np.stack([V.conj().T @ m @ V for m in rho_p.images])
        rho_p = Homomorphism(Bp, mod.dim_H, imgs)
    corr = Correspondence(mod, Bp, rho_p)
    corr.validate(tol)
    return corr


# ---------------------------------------------------------------------------
# convenience constructors


def module_over_itself(B: FiniteCStarAlgebra, tol: float = DEFAULT_TOL) -> HilbertModule:
    return build_module(B, [B.unit], tol)


def algebra_bimodule(B: FiniteCStarAlgebra, tol: float = DEFAULT_TOL) -> Correspondence:
    """B as a B-B correspondence with both actions by multiplication."""
    mod = module_over_itself(B, tol)
    return Correspondence(mod, B, identity_homomorphism(B))


def as_bimodule(E: HilbertModule, left: FiniteCStarAlgebra | None = None,
                tol: float = DEFAULT_TOL) -> Correspondence:
    """E as a correspondence with a concrete algebra on H acting by
    multiplication from the left; defaults to the finite-rank algebra."""
    if left is None:
        left = finite_rank_algebra(E, tol)
    corr = Correspondence(E, left, identity_homomorphism(left))
    corr.validate(tol)
    return corr
