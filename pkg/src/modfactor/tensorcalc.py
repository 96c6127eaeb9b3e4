"""Interior tensor products of correspondences and canonical identifications.

A tensor product is built as a Gram quotient: the algebraic tensor of the
left factor's basis with the standard basis of the right factor's total
space carries the semi-inner product

    <x (x) k, x' (x) k'> = <k, rho(<x, x'>) k'>,

whose Gram matrix is eigendecomposed; the support defines coordinates
S: elementary vectors -> C^r with S+ a right inverse.  The resulting module
is re-concretized on the right factor's base space, so iterated
constructions stay inside one uniform data model.

"Canonical identification" is operationalized as: construct the specific
map given by its defining formula on elementary tensors and certify
unitarity plus intertwining; the library never searches for an arbitrary
isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, PreconditionError, ValidationError
from .hilbmod import (
    Correspondence,
    HilbertModule,
    Homomorphism,
    algebra_bimodule,
    as_bimodule,
    dual_module,
    finite_rank_algebra,
    module_from_parts,
)
from .numkernel import (
    DEFAULT_TOL,
    OperatorSpace,
    as_matrix,
    hs_orthonormalize,
    op_norm,
    rank_cut,
)

__all__ = [
    "ModuleUnitary",
    "TensorProduct",
    "interior_tensor",
    "unit_identities",
    "tensor_with_space",
    "flip_unitary",
    "associator",
    "certify_module_unitary",
    "compose_unitaries",
    "adjoint_unitary",
    "identity_unitary",
    "map_from_spanning",
]


@dataclass(eq=False)
class ModuleUnitary:
    """A unitary between total spaces carrying one module onto another.

    ``map`` sends the source total space to the target total space;
    ``residual_unitary`` bounds ||U*U - 1|| and ||UU* - 1||,
    ``residual_intertwine`` bounds the left-action intertwining defects and
    the distance of mapped module elements from the target span.
    """

    source: object
    target: object
    map: np.ndarray
    residual_unitary: float
    residual_intertwine: float
    meta: dict = field(default_factory=dict)

    @property
    def residual(self) -> float:
        return max(self.residual_unitary, self.residual_intertwine)


def _module_of(obj) -> HilbertModule:
    return obj.module if isinstance(obj, Correspondence) else obj


def certify_module_unitary(source, target, U: np.ndarray,
                           meta: dict | None = None) -> ModuleUnitary:
    """Measure unitarity and bimodule intertwining residuals of U.

    Right-action intertwining is exact (composition), so the right-module
    check is membership of mapped basis elements in the target span.
    """
    src = _module_of(source)
    tgt = _module_of(target)
    U = as_matrix(U)
    if U.shape != (tgt.dim_H, src.dim_H):
        raise DimensionMismatch(
            f"map shape {U.shape} does not match target/source total spaces "
            f"({tgt.dim_H}, {src.dim_H})"
        )
    ru = max(op_norm(U.conj().T @ U - np.eye(src.dim_H)),
             op_norm(U @ U.conj().T - np.eye(tgt.dim_H)))
    ri = 0.0
    for x in src.basis:
        y = U @ x
        ri = max(ri, tgt.space.distance(y))
    if isinstance(source, Correspondence) and isinstance(target, Correspondence):
        for a in source.left.basis:
            lhs = U @ source.act(a)
            rhs = target.act(a) @ U
            ri = max(ri, op_norm(lhs - rhs))
    return ModuleUnitary(source, target, U, float(ru), float(ri), meta or {})


def compose_unitaries(first: ModuleUnitary, second: ModuleUnitary) -> ModuleUnitary:
    """second after first, re-certified against the endpoints."""
    out = certify_module_unitary(first.source, second.target,
                                 second.map @ first.map,
                                 {"composed": True,
                                  "path": [first.meta, second.meta]})
    return out


def adjoint_unitary(u: ModuleUnitary) -> ModuleUnitary:
    return certify_module_unitary(u.target, u.source, u.map.conj().T,
                                  {"reversed": True, **u.meta})


def identity_unitary(obj) -> ModuleUnitary:
    mod = _module_of(obj)
    return certify_module_unitary(obj, obj, np.eye(mod.dim_H, dtype=np.complex128))


def map_from_spanning(domain_vecs: np.ndarray, target_vecs: np.ndarray) -> np.ndarray:
    """Least-squares linear map sending spanning columns to target columns."""
    return target_vecs @ np.linalg.pinv(domain_vecs)


# ---------------------------------------------------------------------------
# interior tensor product


@dataclass(eq=False)
class TensorProduct:
    """An interior tensor product with its coordinate map.

    ``S`` maps elementary coefficient vectors (left-basis index major, right
    total-space index minor) isometrically onto C^r = the result's total
    space; ``S_pinv`` is its right inverse.
    """

    left: object
    right: Correspondence
    result: object  # Correspondence or HilbertModule
    S: np.ndarray
    S_pinv: np.ndarray
    gap: float

    @property
    def k_left(self) -> int:
        return _module_of(self.left).dim

    @property
    def right_total(self) -> int:
        return _module_of(self.right).dim_H

    def block(self, i: int) -> np.ndarray:
        """Column block of S for left-basis element i (maps right total -> result total)."""
        w = self.right_total
        return self.S[:, i * w:(i + 1) * w]

    def lift(self, coeffs: np.ndarray, kappa: np.ndarray) -> np.ndarray:
        """Total-space vector of an elementary tensor with left-factor
        coefficients ``coeffs`` and right total vector ``kappa``."""
        return self.S @ np.kron(coeffs, kappa)

    def embed(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Module element of the result for x in the left span and y in the
        right span (an operator from the base space to the result total)."""
        c = _module_of(self.left).coeffs(as_matrix(x))
        d = _module_of(self.right).coeffs(as_matrix(y))
        ymat = np.tensordot(d, _module_of(self.right).basis, axes=1)
        out = np.zeros((self.S.shape[0], ymat.shape[1]), dtype=np.complex128)
        for i in range(self.k_left):
            out += c[i] * (self.block(i) @ ymat)
        return out


def _gram_coordinates(gram: np.ndarray, tol: float):
    """(S, S_pinv, gap) with S diag(sqrt(w)) V* restricted to the support."""
    g = (gram + gram.conj().T) / 2.0
    w, V = np.linalg.eigh(g)
    order = np.argsort(w)[::-1]
    w = w[order]
    V = V[:, order]
    r, gap = rank_cut(w, tol, "tensor Gram cut")
    if r == 0:
        raise ValidationError("tensor product collapsed to zero")
    sq = np.sqrt(w[:r])
    S = (V[:, :r] * sq).conj().T
    S_pinv = V[:, :r] / sq
    return S, S_pinv, gap


def interior_tensor(X, Y: Correspondence, tol: float = DEFAULT_TOL) -> TensorProduct:
    """Interior tensor product X (.) Y of a module/correspondence over B with
    a correspondence whose left algebra is B."""
    Xm = _module_of(X)
    Ym = _module_of(Y)
    if not isinstance(Y, Correspondence):
        raise PreconditionError("right factor must be a correspondence")
    if Y.left.ambient_dim != Xm.dim_G:
        raise DimensionMismatch(
            "left algebra of the right factor must live on the left factor's base space"
        )
    k = Xm.dim
    w = Ym.dim_H
    gram = np.zeros((k * w, k * w), dtype=np.complex128)
    for i in range(k):
        for j in range(i, k):
            blockij = Y.act(Xm.basis[i].conj().T @ Xm.basis[j])
            gram[i * w:(i + 1) * w, j * w:(j + 1) * w] = blockij
            if j > i:
                gram[j * w:(j + 1) * w, i * w:(i + 1) * w] = blockij.conj().T
    S, S_pinv, gap = _gram_coordinates(gram, tol)
    r = S.shape[0]
    elements = []
    for i in range(k):
        Si = S[:, i * w:(i + 1) * w]
        for y in Ym.basis:
            elements.append(Si @ y)
    space = hs_orthonormalize(elements, tol)
    mod = module_from_parts(Ym.base, space, tol)
    if mod.dim_H != r:
        raise ValidationError("tensor module is degenerate on its own total space")

    result: object
    if isinstance(X, Correspondence):
        images = []
        for a in X.left.basis:
            C = np.stack([Xm.space.coeffs(X.act(a) @ x) for x in Xm.basis], axis=1)
            images.append(S @ np.kron(C, np.eye(w)) @ S_pinv)
        hom = Homomorphism(X.left, r, np.stack(images))
        result = Correspondence(mod, X.left, hom)
        result.validate(tol)
    else:
        result = mod
    return TensorProduct(X, Y, result, S, S_pinv, gap)


def tensor_with_space(E: HilbertModule):
    """The concrete total space H = E (.) G and the embedding x -> L_x.

    Modules are stored concretely, so the embedding is the identity on the
    stored representation; returned for interface completeness.
    """
    return E.dim_H, (lambda x: as_matrix(x))


# ---------------------------------------------------------------------------
# unit identities


def unit_identities(E: HilbertModule, tol: float = DEFAULT_TOL):
    """Certified canonical unitaries  E (.) E* -> K(E)  (x (x) y* -> x y*)
    and  E* (.) E -> B_E  (x* (x) y -> <x, y>)."""
    K = finite_rank_algebra(E, tol)
    Ecorr = as_bimodule(E, K, tol)
    Estar = dual_module(E, tol)
    # for non-full modules the dual total space is the trimmed part of G
    V_d = Estar.module.h_embed
    if V_d is None:
        V_d = np.eye(E.dim_G, dtype=np.complex128)

    # u1: E (.) E*  ->  K(E) as a K(E)-K(E) correspondence
    tp1 = interior_tensor(Ecorr, Estar, tol)
    target1 = algebra_bimodule(K, tol)
    # U sends coord(x_i (x) g~) to x_i (V_d g~) in H
    M1 = np.hstack([x @ V_d for x in E.basis])
    u1 = certify_module_unitary(tp1.result, target1, M1 @ tp1.S_pinv,
                                {"identity": "module-times-dual"})

    # u2: E* (.) E  ->  B_E as a B-B correspondence: the inner-product ideal
    # as operators from G to its support space, with both actions from B
    from .hilbmod import _ideal_data
    ideal_span, V = _ideal_data(E, tol)
    if V is None:
        V = np.eye(E.dim_G, dtype=np.complex128)
    rank = V.shape[1]
    ideal_mod = module_from_parts(
        E.base,
        OperatorSpace(rank, E.dim_G,
                      np.ascontiguousarray(
                          np.einsum("ij,kjl->kil", V.conj().T, ideal_span.mats))),
        tol)
    imgs = np.stack([V.conj().T @ b @ V for b in E.base.basis])
    target2 = Correspondence(ideal_mod, E.base,
                             Homomorphism(E.base, rank, imgs))
    target2.validate(tol)
    tp2 = interior_tensor(Estar, as_bimodule(E, None, tol), tol)
    # U sends coord(u_j (x) h) to V* (V_d u_j) h in the ideal's support space
    M2 = np.hstack([V.conj().T @ (V_d @ u) for u in Estar.module.basis])
    u2 = certify_module_unitary(tp2.result, target2, M2 @ tp2.S_pinv,
                                {"identity": "dual-times-module"})
    return u1, u2


# ---------------------------------------------------------------------------
# flip identification


def flip_unitary(E: HilbertModule, W: OperatorSpace, rho_p: Homomorphism,
                 tol: float = DEFAULT_TOL) -> ModuleUnitary:
    """Unitary from the abstract space E (.) W (.) G onto span(W L_E G).

    W is an operator space composing with E's elements on the right of H and
    carrying a right action of the base's commutant through rho'.  The
    abstract Gram (computed through rho'^{-1} inner products) must equal the
    concrete Gram of the vectors w x g; their equality is exactly the flip
    identification, verified rather than assumed.
    """
    if W.dim_in != E.dim_H:
        raise DimensionMismatch("W must compose with module elements on H")
    k, kw, g = E.dim, W.dim, E.dim_G
    inv = _representation_inverter(rho_p)
    # abstract Gram over indices (i, j, s): x_i (x) w_j (x) g_s
    n = k * kw * g
    gram = np.zeros((n, n), dtype=np.complex128)
    for j in range(kw):
        for l in range(kw):
            bprime, _ = inv(W.mats[j].conj().T @ W.mats[l])
            for i in range(k):
                for m in range(k):
                    blk = bprime @ (E.basis[i].conj().T @ E.basis[m])
                    r0 = (i * kw + j) * g
                    c0 = (m * kw + l) * g
                    gram[r0:r0 + g, c0:c0 + g] = blk
    # concrete vectors
    cols = np.hstack([W.mats[j] @ E.basis[i]
                      for i in range(k) for j in range(kw)])
    conc = cols.conj().T @ cols
    scale = max(1.0, op_norm(conc))
    if op_norm(gram - conc) > 1e-6 * scale:
        raise ValidationError(
            "abstract and concrete Gram matrices differ: the factors are not "
            "a compatible module/commutant-module pair"
        )
    S, S_pinv, gap = _gram_coordinates(gram, tol)
    U = cols @ S_pinv
    ru = op_norm(U.conj().T @ U - np.eye(S.shape[0]))
    return ModuleUnitary(("abstract tensor", "E.W.G"), ("concrete span", "W L_E G"),
                         U, float(ru), 0.0, {"gap": gap})


# ---------------------------------------------------------------------------
# associativity


def associator(tp_left: TensorProduct, tp_xy: TensorProduct,
               tp_right: TensorProduct, tp_yz: TensorProduct,
               tol: float = DEFAULT_TOL) -> ModuleUnitary:
    """Canonical unitary (X (.) Y) (.) Z -> X (.) (Y (.) Z) from embeddings.

    tp_xy = X (.) Y, tp_left = (X (.) Y) (.) Z, tp_yz = Y (.) Z,
    tp_right = X (.) (Y (.) Z).
    """
    X = _module_of(tp_xy.left)
    Y = _module_of(tp_xy.right)
    Z = _module_of(tp_yz.right)
    kx, ky, wz = X.dim, Y.dim, Z.dim_H
    dom_cols = []
    tgt_cols = []
    XY = _module_of(tp_xy.result)
    for a in range(kx):
        for b in range(ky):
            elt = tp_xy.block(a) @ Y.basis[b]          # element of X (.) Y
            c = XY.coeffs(elt)
            for u in range(wz):
                kappa = np.zeros(wz, dtype=np.complex128)
                kappa[u] = 1.0
                dom_cols.append(tp_left.lift(c, kappa))
                inner = tp_yz.lift(_unitvec(ky, b), kappa)  # (y_b (x) kappa)
                tgt_cols.append(tp_right.lift(_unitvec(kx, a), inner))
    D = np.stack(dom_cols, axis=1)
    T = np.stack(tgt_cols, axis=1)
    U = map_from_spanning(D, T)
    return certify_module_unitary(tp_left.result, tp_right.result, U,
                                  {"associator": True})


def _unitvec(n: int, i: int) -> np.ndarray:
    v = np.zeros(n, dtype=np.complex128)
    v[i] = 1.0
    return v


def _representation_inverter(rho: Homomorphism):
    """Least-squares inverse of a faithful representation, with conditioning.

    Returns a callable m -> (preimage, conditioning).
    """
    P = np.stack([img.reshape(-1) for img in rho.images], axis=1)
    Pp = np.linalg.pinv(P)
    s = np.linalg.svd(P, compute_uv=False)
    cond = float(s[0] / s[-1]) if s.size and s[-1] > 0 else np.inf

    def inv(m: np.ndarray):
        c = Pp @ m.reshape(-1)
        pre = np.tensordot(c, rho.domain.basis, axes=1)
        return pre, cond

    return inv
