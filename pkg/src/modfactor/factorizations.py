"""The constructions of the factorizing correspondence.

Given a unital *-homomorphism theta from the adjointable operators of a
module E to those of a module F, each method produces a correspondence and
a certified unitary u: E (.) corr -> F with theta(a) = u (a (.) id) u*.

Methods:
  dual        through the dual module: corr = E* (.) F
  unit_vector compression by theta(xi xi*) for a unit vector xi
  qons        direct sum of compressions along a quasi-orthonormal family
  commutant   intertwiner space of theta, then its bimodule commutant

Surjectivity arguments are replaced by exact dimension counting: at finite
dimension the isometries are surjective iff total-space dimensions match,
and a mismatch raises instead of being silently accepted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cstar import FiniteCStarAlgebra, build_algebra, commutant
from .errors import (
    DimensionMismatch,
    PreconditionError,
    UnsupportedPair,
    ValidationError,
)
from .hilbmod import (
    Correspondence,
    HilbertModule,
    Homomorphism,
    as_bimodule,
    commutant_lifting,
    dual_module,
    finite_rank_algebra,
    is_full,
    module_from_parts,
    verify_unit_vector,
)
from .numkernel import (
    DEFAULT_TOL,
    OperatorSpace,
    as_matrix,
    hs_orthonormalize,
    op_norm,
    rank_cut,
    subspace_equal,
)
from .tensorcalc import (
    ModuleUnitary,
    TensorProduct,
    _gram_coordinates,
    _representation_inverter,
    adjoint_unitary,
    certify_module_unitary,
    compose_unitaries,
    flip_unitary,
    identity_unitary,
    interior_tensor,
    map_from_spanning,
)

__all__ = [
    "FactorizationResult",
    "METHODS",
    "induced_homomorphism",
    "validate_theta",
    "factor_dual",
    "factor_unit_vector",
    "factor_qons",
    "factor_commutant",
    "compare",
    "hilbert_space_intertwiners",
    "hilbert_space_compression",
    "is_morita_equivalence",
    "scalar_inner",
    "intertwiner_composition_law",
    "compression_composition_law",
]

METHODS = ("dual", "unit_vector", "qons", "commutant")


@dataclass(eq=False)
class FactorizationResult:
    """A factorizing correspondence with its certified unitary E (.) corr -> F."""

    method: str
    correspondence: Correspondence
    unitary: ModuleUnitary
    report: dict
    aux: dict = field(default_factory=dict, repr=False)

    def to_json(self, emit_unitary: bool = False) -> dict:
        out = {"method": self.method, **self.report}
        if emit_unitary:
            u = self.unitary.map
            out["unitary"] = [[[float(z.real), float(z.imag)] for z in row] for row in u]
        return out


def validate_theta(E: HilbertModule, F: HilbertModule, theta: Homomorphism,
                   tol: float = DEFAULT_TOL) -> None:
    """theta must be a unital *-homomorphism from B^a(E) into B^a(F)."""
    if theta.domain.ambient_dim != E.dim_H:
        raise ValidationError("theta's domain does not act on E's total space")
    if theta.codomain_dim != F.dim_H:
        raise ValidationError("theta's images do not act on F's total space")
    KE = finite_rank_algebra(E, tol)
    if not subspace_equal(theta.domain.space, KE.space, 1e-6)[0]:
        raise ValidationError("theta's domain is not the adjointable algebra of E")
    KF = finite_rank_algebra(F, tol)
    for i, img in enumerate(theta.images):
        if KF.space.distance(img) > 1e-6 * max(1.0, np.linalg.norm(img)):
            raise ValidationError(
                f"theta image of basis element {i} leaves the adjointable algebra of F"
            )
    theta.validate(tol)


def _theta_residual(theta: Homomorphism, tensor_corr: Correspondence,
                    U: np.ndarray) -> float:
    """max over the domain basis of ||theta(a) - U (a (.) id) U*||."""
    res = 0.0
    for a, img in zip(theta.domain.basis, theta.images):
        lifted = U @ tensor_corr.act(a) @ U.conj().T
        res = max(res, op_norm(img - lifted))
    return float(res)


def _f_as_target(F: HilbertModule, theta: Homomorphism,
                 tol: float = DEFAULT_TOL) -> Correspondence:
    """F as a correspondence with the adjointable algebra of E acting through theta."""
    corr = Correspondence(F, theta.domain, theta)
    corr.validate(tol)
    return corr


def _dual_lift(dual_corr: Correspondence) -> np.ndarray:
    """Isometry re-expanding compressed dual elements to operators H -> G."""
    V = dual_corr.module.h_embed
    if V is None:
        return np.eye(dual_corr.module.dim_H, dtype=np.complex128)
    return V


def induced_homomorphism(E: HilbertModule, M: Correspondence,
                         tol: float = DEFAULT_TOL):
    """The converse direction: F = E (.) M and theta(a) = a (.) id on the
    adjointable algebra of E.  Serves as the seeded oracle generator."""
    if M.left.ambient_dim != E.dim_G:
        raise DimensionMismatch("M's left algebra must act on E's base space")
    X = as_bimodule(E, None, tol)
    tp = interior_tensor(X, M, tol)
    F = tp.result.module
    theta = tp.result.left_action
    theta.validate(tol)
    return F, theta, tp


def factor_dual(E: HilbertModule, F: HilbertModule, theta: Homomorphism,
                tol: float = DEFAULT_TOL) -> FactorizationResult:
    """Correspondence E* (.) F with inner product <x* . y, x'* . y'> =
    <y, theta(x x'*) y'>; the unitary sends x . (y* . z) to theta(x y*) z."""
    validate_theta(E, F, theta, tol)
    Estar = dual_module(E, tol)
    # re-express the dual over theta's domain algebra so all bases align
    dual_mod = module_from_parts(theta.domain, Estar.module.space, tol)
    dual_mod.trimmed_from = Estar.module.trimmed_from
    dual_mod.h_embed = Estar.module.h_embed
    dual_corr = Correspondence(dual_mod, Estar.left, Estar.left_action)
    F_corr = _f_as_target(F, theta, tol)
    tp1 = interior_tensor(dual_corr, F_corr, tol)
    Ftheta = tp1.result

    X = as_bimodule(E, theta.domain, tol)
    tp2 = interior_tensor(X, Ftheta, tol)
    r2 = tp2.result.module.dim_H
    if r2 != F.dim_H:
        raise ValidationError(
            f"dimension count failed: E (.) corr has total dimension {r2}, "
            f"F has {F.dim_H}"
        )
    lift = _dual_lift(dual_corr)
    k = E.dim
    w = F.dim_H
    phis = []
    for i in range(k):
        Ni = np.hstack([theta.apply(E.basis[i] @ (lift @ u), tol)
                        for u in dual_mod.basis])
        phis.append(Ni @ tp1.S_pinv)
    U = np.hstack(phis) @ tp2.S_pinv
    unitary = certify_module_unitary(tp2.result, F_corr, U, {"method": "dual"})
    t_res = _theta_residual(theta, tp2.result, U)
    report = {
        "dims": {"correspondence": Ftheta.module.dim,
                 "correspondence_total": Ftheta.module.dim_H,
                 "F_total": F.dim_H},
        "residual_unitary": unitary.residual_unitary,
        "residual_intertwine": unitary.residual_intertwine,
        "theta_residual": t_res,
        "gram_gap": tp1.gap,
    }
    aux = {"E": E, "F": F, "theta": theta, "tp_corr": tp1, "tp_unit": tp2,
           "dual": dual_corr, "dual_lift": lift}
    return FactorizationResult("dual", Ftheta, unitary, report, aux)


def _range_isometry(P: np.ndarray, tol: float) -> np.ndarray:
    """Columns spanning the range of a projection (eigenvalues ~0 or ~1)."""
    w, V = np.linalg.eigh((P + P.conj().T) / 2.0)
    if np.any((w > 1e-6) & (w < 1.0 - 1e-6)):
        raise ValidationError("matrix is not a projection within tolerance")
    keep = w > 0.5
    order = np.argsort(w)[::-1]
    return V[:, order[:int(keep.sum())]]


def factor_unit_vector(E: HilbertModule, F: HilbertModule, theta: Homomorphism,
                       xi, tol: float = DEFAULT_TOL) -> FactorizationResult:
    """Compression method: corr = range of theta(xi xi*) inside F with left
    action b . y = theta(xi b xi*) y; unitary x . y -> theta(x xi*) y."""
    xi = as_matrix(xi)
    if not verify_unit_vector(E, xi, tol):
        raise PreconditionError("xi is not a unit vector of E")
    validate_theta(E, F, theta, tol)
    P = theta.apply(xi @ xi.conj().T, tol)
    V = _range_isometry(P, tol)
    space = hs_orthonormalize([V.conj().T @ y for y in F.basis], tol)
    mod = module_from_parts(F.base, space, tol)
    if mod.h_embed is not None:
        raise ValidationError("compressed submodule is degenerate")
    imgs = np.stack([
        V.conj().T @ theta.apply(xi @ b @ xi.conj().T, tol) @ V
        for b in E.base.basis
    ])
    hom = Homomorphism(E.base, mod.dim_H, imgs)
    corr = Correspondence(mod, E.base, hom)
    corr.validate(tol)

    X = as_bimodule(E, theta.domain, tol)
    tp = interior_tensor(X, corr, tol)
    if tp.result.module.dim_H != F.dim_H:
        raise ValidationError("dimension count failed for the compression method")
    M = np.hstack([theta.apply(x @ xi.conj().T, tol) @ V for x in E.basis])
    U = M @ tp.S_pinv
    F_corr = _f_as_target(F, theta, tol)
    unitary = certify_module_unitary(tp.result, F_corr, U, {"method": "unit_vector"})
    t_res = _theta_residual(theta, tp.result, U)
    report = {
        "dims": {"correspondence": mod.dim, "correspondence_total": mod.dim_H,
                 "F_total": F.dim_H},
        "residual_unitary": unitary.residual_unitary,
        "residual_intertwine": unitary.residual_intertwine,
        "theta_residual": t_res,
    }
    aux = {"E": E, "F": F, "theta": theta, "xi": xi, "isometry": V, "tp_unit": tp}
    return FactorizationResult("unit_vector", corr, unitary, report, aux)


def check_qons_family(E: HilbertModule, family, tol: float = DEFAULT_TOL) -> float:
    """Residual of the family conditions: e_a e_b* = delta * projection and
    sum <e_b, e_b> = unit."""
    res = 0.0
    for i, e in enumerate(family):
        for j, f in enumerate(family):
            prod = e @ f.conj().T
            if i != j:
                res = max(res, op_norm(prod))
            else:
                res = max(res, op_norm(prod @ prod - prod),
                          op_norm(prod - prod.conj().T))
    total = sum(e.conj().T @ e for e in family)
    res = max(res, op_norm(total - E.base.unit))
    return float(res)


def factor_qons(E: HilbertModule, F: HilbertModule, theta: Homomorphism,
                family, tol: float = DEFAULT_TOL) -> FactorizationResult:
    """Direct-sum method along a quasi-orthonormal family (e_b).

    corr = external direct sum of the compressions theta(e_b e_b*) F (the
    summands need not be orthogonal inside F) with matrix left action
    b . y_b = (+)_b' theta(e_b' b e_b*) y_b; the unitary sends
    x (.) y to sum_b theta(x e_b*) y_b.
    """
    family = [as_matrix(e) for e in family]
    if not family:
        raise PreconditionError("empty quasi-orthonormal family")
    fam_res = check_qons_family(E, family, tol)
    if fam_res > 1e-7:
        raise PreconditionError(
            f"family violates the quasi-orthonormal conditions (residual {fam_res:.3e})"
        )
    validate_theta(E, F, theta, tol)
    isometries = []
    for e in family:
        P = theta.apply(e @ e.conj().T, tol)
        isometries.append(_range_isometry(P, tol))
    dims = [V.shape[1] for V in isometries]
    offs = np.concatenate([[0], np.cumsum(dims)])
    H_B = int(offs[-1])

    blocks = []
    for b_idx, V in enumerate(isometries):
        comp = hs_orthonormalize([V.conj().T @ y for y in F.basis], tol)
        for f in comp.mats:
            big = np.zeros((H_B, F.dim_G), dtype=np.complex128)
            big[offs[b_idx]:offs[b_idx + 1], :] = f
            blocks.append(big)
    space = hs_orthonormalize(blocks, tol)
    mod = module_from_parts(F.base, space, tol)

    imgs = []
    for b in E.base.basis:
        img = np.zeros((H_B, H_B), dtype=np.complex128)
        for bi, Vi in enumerate(isometries):
            for bj, Vj in enumerate(isometries):
                img[offs[bi]:offs[bi + 1], offs[bj]:offs[bj + 1]] = \
                    Vi.conj().T @ theta.apply(
                        family[bi] @ b @ family[bj].conj().T, tol) @ Vj
        imgs.append(img)
    hom = Homomorphism(E.base, H_B, np.stack(imgs))
    corr = Correspondence(mod, E.base, hom)
    corr.validate(tol)

    X = as_bimodule(E, theta.domain, tol)
    tp = interior_tensor(X, corr, tol)
    if tp.result.module.dim_H != F.dim_H:
        raise ValidationError("dimension count failed for the direct-sum method")
    M = np.hstack([
        np.hstack([theta.apply(x @ family[b_idx].conj().T, tol) @ V
                   for b_idx, V in enumerate(isometries)])
        for x in E.basis
    ])
    U = M @ tp.S_pinv
    F_corr = _f_as_target(F, theta, tol)
    unitary = certify_module_unitary(tp.result, F_corr, U, {"method": "qons"})
    t_res = _theta_residual(theta, tp.result, U)
    report = {
        "dims": {"correspondence": mod.dim, "correspondence_total": H_B,
                 "summands": dims, "F_total": F.dim_H},
        "residual_unitary": unitary.residual_unitary,
        "residual_intertwine": unitary.residual_intertwine,
        "theta_residual": t_res,
        "family_residual": fam_res,
    }
    aux = {"E": E, "F": F, "theta": theta, "family": family,
           "isometries": isometries, "offsets": offs, "tp_unit": tp}
    return FactorizationResult("qons", corr, unitary, report, aux)


def factor_commutant(E: HilbertModule, F: HilbertModule, theta: Homomorphism,
                     tol: float = DEFAULT_TOL):
    """Intertwiner-space method.

    prime = {X in B(H_E, H_F) : theta(a) X = X a} carries inner product
    rho'^{-1}(X* Y) over the base commutant and a left action of the target
    commutant; the factorizing correspondence is the bimodule commutant of
    prime, and the unitary is realized through the flip identification.
    Returns (prime, result).
    """
    full, _ = is_full(E, tol)
    if not full:
        raise PreconditionError("the commutant method requires a full module")
    validate_theta(E, F, theta, tol)
    W = hs_orthonormalize(
        _intertwiner_mats(theta), tol)
    # totality of the intertwiner space on H_F
    stacked = np.hstack(list(W.mats)) if W.dim else np.zeros((F.dim_H, 0))
    sv = np.linalg.svd(stacked, compute_uv=False) if stacked.size else np.array([])
    tot_rank = rank_cut(sv, tol, "intertwiner totality")[0]
    if tot_rank != F.dim_H:
        raise ValidationError(
            f"intertwiner space acts on a proper subspace ({tot_rank} of {F.dim_H})"
        )
    rho_p = commutant_lifting(E, tol)
    sigma_p = commutant_lifting(F, tol)
    inv = _representation_inverter(rho_p)
    conditioning = inv(np.eye(E.dim_H, dtype=np.complex128))[1]

    # re-concretize prime over the base commutant on G
    kw = W.dim
    G = E.dim_G
    gram = np.zeros((kw * G, kw * G), dtype=np.complex128)
    for j in range(kw):
        for l in range(kw):
            pre, _ = inv(W.mats[j].conj().T @ W.mats[l])
            gram[j * G:(j + 1) * G, l * G:(l + 1) * G] = pre
    S_P, S_P_pinv, gap_P = _gram_coordinates(gram, tol)
    rP = S_P.shape[0]
    Bp = rho_p.domain
    prime_space = hs_orthonormalize(
        [S_P[:, j * G:(j + 1) * G] for j in range(kw)], tol)
    prime_mod = module_from_parts(Bp, prime_space, tol)
    if prime_mod.dim_H != rP:
        raise ValidationError("re-concretized intertwiner module is degenerate")
    Cp = sigma_p.domain
    cp_imgs = []
    for cp in Cp.basis:
        act = sigma_p.apply(cp, tol)
        D = np.stack([W.coeffs(act @ w) for w in W.mats], axis=1)
        cp_imgs.append(S_P @ np.kron(D, np.eye(G)) @ S_P_pinv)
    prime = Correspondence(prime_mod, Cp, Homomorphism(Cp, rP, np.stack(cp_imgs)))
    prime.validate(tol)

    # flip-chain link: the abstract E (.) W (.) G Gram equals the concrete one
    flip = flip_unitary(E, W, rho_p, tol)

    # the bimodule commutant of prime, concretely over F's base
    Fpp_space = _solve_corr_intertwiners(prime, F.base, tol)
    Fpp_mod = module_from_parts(F.base, Fpp_space, tol)
    if Fpp_mod.h_embed is not None:
        raise ValidationError("factorizing correspondence is degenerate on its total space")
    lifted = commutant_lifting(prime_mod, tol)
    tau_imgs = np.stack([lifted.apply(b, tol) for b in E.base.basis])
    tau = Homomorphism(E.base, rP, tau_imgs)
    Fpp = Correspondence(Fpp_mod, E.base, tau)
    Fpp.validate(tol)

    X = as_bimodule(E, theta.domain, tol)
    tp = interior_tensor(X, Fpp, tol)
    if tp.result.module.dim_H != F.dim_H:
        raise ValidationError("dimension count failed for the commutant method")
    k = E.dim
    T = np.hstack([np.hstack([W.mats[j] @ E.basis[i] for j in range(kw)])
                   for i in range(k)])
    D = tp.S @ np.kron(np.eye(k), S_P)
    U = map_from_spanning(D, T)
    F_corr = _f_as_target(F, theta, tol)
    unitary = certify_module_unitary(tp.result, F_corr, U, {"method": "commutant"})
    t_res = _theta_residual(theta, tp.result, U)
    report = {
        "dims": {"correspondence": Fpp_mod.dim, "correspondence_total": rP,
                 "prime": prime_mod.dim, "F_total": F.dim_H},
        "residual_unitary": unitary.residual_unitary,
        "residual_intertwine": unitary.residual_intertwine,
        "theta_residual": t_res,
        "rho_inverse_conditioning": conditioning,
        "chain": {"totality_rank": tot_rank,
                  "flip_residual": flip.residual_unitary,
                  "gram_gap": gap_P},
    }
    aux = {"E": E, "F": F, "theta": theta, "W": W, "S_P": S_P,
           "S_P_pinv": S_P_pinv, "rho_p": rho_p, "sigma_p": sigma_p,
           "prime": prime, "tp_unit": tp, "flip": flip}
    return prime, FactorizationResult("commutant", Fpp, unitary, report, aux)


def _intertwiner_mats(theta: Homomorphism) -> list[np.ndarray]:
    from .numkernel import solve_intertwiners
    space = solve_intertwiners(list(theta.images), list(theta.domain.basis))
    return list(space.mats)


def _solve_corr_intertwiners(prime: Correspondence, C: FiniteCStarAlgebra,
                             tol: float) -> OperatorSpace:
    """{Z : prime_left(c') Z = Z c'} for c' in the commutant of C."""
    from .numkernel import solve_intertwiners
    Cp = prime.left
    lefts = [prime.act(cp, tol) for cp in Cp.basis]
    return solve_intertwiners(lefts, list(Cp.basis), tol)


# ---------------------------------------------------------------------------
# comparisons


def compare(result_a: FactorizationResult, result_b: FactorizationResult,
            via: FactorizationResult | None = None,
            tol: float = DEFAULT_TOL) -> ModuleUnitary:
    """Certified unitary corr_a -> corr_b, built from the defining formula of
    the ordered pair where one exists, reversed or composed through the
    dual-method result otherwise (composition is reported in meta).
    """
    a, b = result_a.method, result_b.method
    _require_same_theta(result_a, result_b)
    if a == b == "dual" or result_a is result_b:
        return identity_unitary(result_a.correspondence)
    direct = _DIRECT_COMPARISONS.get((a, b))
    if direct is not None:
        return direct(result_a, result_b, tol)
    reverse = _DIRECT_COMPARISONS.get((b, a))
    if reverse is not None:
        return adjoint_unitary(reverse(result_b, result_a, tol))
    if via is None or via.method != "dual":
        raise UnsupportedPair(
            f"no direct formula for ({a} -> {b}); supply the dual-method "
            f"result to compose through"
        )
    first = adjoint_unitary(compare(via, result_a, None, tol))
    second = compare(via, result_b, None, tol)
    out = compose_unitaries(first, second)
    out.meta["composed"] = True
    out.meta["via"] = "dual"
    return out


def _require_same_theta(ra: FactorizationResult, rb: FactorizationResult) -> None:
    ta: Homomorphism = ra.aux["theta"]
    tb: Homomorphism = rb.aux["theta"]
    if ta is tb:
        return
    if ta.images.shape != tb.images.shape or \
            float(np.abs(ta.images - tb.images).max()) > 1e-6:
        raise PreconditionError("results do not factor the same homomorphism")


def _cmp_dual_to_unit_vector(ra, rb, tol):
    tp1: TensorProduct = ra.aux["tp_corr"]
    theta: Homomorphism = ra.aux["theta"]
    lift = ra.aux["dual_lift"]
    xi = rb.aux["xi"]
    V = rb.aux["isometry"]
    dual_mod = _dual_basis_module(ra)
    M = np.hstack([V.conj().T @ theta.apply(xi @ (lift @ u), tol)
                   for u in dual_mod.basis])
    U = M @ tp1.S_pinv
    return certify_module_unitary(ra.correspondence, rb.correspondence, U,
                                  {"pair": ("dual", "unit_vector")})


def _cmp_dual_to_qons(ra, rb, tol):
    tp1: TensorProduct = ra.aux["tp_corr"]
    theta: Homomorphism = ra.aux["theta"]
    lift = ra.aux["dual_lift"]
    family = rb.aux["family"]
    isometries = rb.aux["isometries"]
    dual_mod = _dual_basis_module(ra)
    cols = []
    for u in dual_mod.basis:
        xstar = lift @ u
        cols.append(np.vstack([
            V.conj().T @ theta.apply(e @ xstar, tol)
            for e, V in zip(family, isometries)
        ]))
    M = np.hstack(cols)
    U = M @ tp1.S_pinv
    return certify_module_unitary(ra.correspondence, rb.correspondence, U,
                                  {"pair": ("dual", "qons")})


def _cmp_unit_vector_to_unit_vector(ra, rb, tol):
    theta: Homomorphism = ra.aux["theta"]
    xi_a = ra.aux["xi"]
    xi_b = rb.aux["xi"]
    Va = ra.aux["isometry"]
    Vb = rb.aux["isometry"]
    U = Vb.conj().T @ theta.apply(xi_b @ xi_a.conj().T, tol) @ Va
    return certify_module_unitary(ra.correspondence, rb.correspondence, U,
                                  {"pair": ("unit_vector", "unit_vector")})


def _cmp_dual_to_commutant(ra, rb, tol):
    """Through the flip chain: x* (x) (w y g) -> w (x) <x, y> g."""
    tp1: TensorProduct = ra.aux["tp_corr"]
    E: HilbertModule = ra.aux["E"]
    F: HilbertModule = ra.aux["F"]
    lift = ra.aux["dual_lift"]
    dual_mod = _dual_basis_module(ra)
    W: OperatorSpace = rb.aux["W"]
    S_P = rb.aux["S_P"]
    G = E.dim_G
    dom_cols = []
    tgt_cols = []
    for j, u in enumerate(dual_mod.basis):
        xstar = lift @ u  # operator H_E -> G
        S1j = tp1.block(j)
        for l, w in enumerate(W.mats):
            SPl = S_P[:, l * G:(l + 1) * G]
            for m, y in enumerate(E.basis):
                z = w @ y  # H_E columns... operator G -> H_F
                dom_cols.append(S1j @ z)
                tgt_cols.append(SPl @ (xstar @ y))
    D = np.hstack(dom_cols)
    T = np.hstack(tgt_cols)
    U = map_from_spanning(D, T)
    return certify_module_unitary(ra.correspondence, rb.correspondence, U,
                                  {"pair": ("dual", "commutant")})


def _dual_basis_module(ra) -> HilbertModule:
    return ra.aux["dual"].module


_DIRECT_COMPARISONS = {
    ("dual", "unit_vector"): _cmp_dual_to_unit_vector,
    ("dual", "qons"): _cmp_dual_to_qons,
    ("unit_vector", "unit_vector"): _cmp_unit_vector_to_unit_vector,
    ("dual", "commutant"): _cmp_dual_to_commutant,
}


# ---------------------------------------------------------------------------
# Hilbert-space special cases


def scalar_inner(x: np.ndarray, y: np.ndarray) -> complex:
    """The scalar lambda with x* y = lambda 1 (for intertwiners of a full
    matrix algebra); computed as a normalized trace."""
    n = x.shape[1]
    return complex(np.trace(x.conj().T @ y) / n)


def _require_full_matrix_domain(theta: Homomorphism) -> int:
    n = theta.domain.ambient_dim
    if theta.domain.dim != n * n:
        raise PreconditionError("domain must be a full matrix algebra")
    return n


def _scalar_column_correspondence(m: int, matrices: np.ndarray) -> Correspondence:
    """A Hilbert space C^m packaged as a correspondence over the scalars."""
    scalars = build_algebra([(1, 1)])
    cols = np.zeros((m, m, 1), dtype=np.complex128)
    for t in range(m):
        cols[t, t, 0] = 1.0
    mod = HilbertModule(scalars, OperatorSpace(m, 1, cols))
    return Correspondence(mod, scalars,
                          Homomorphism(scalars, m,
                                       np.stack([np.eye(m, dtype=np.complex128)])),
                          meta={"matrices": matrices})


def hilbert_space_intertwiners(theta: Homomorphism, tol: float = DEFAULT_TOL):
    """The intertwiner space {x : theta(a) x = x a} of a unital representation
    of a full matrix algebra, with x (x) h -> x h the certified unitary."""
    n = _require_full_matrix_domain(theta)
    theta.validate(tol)
    k = theta.codomain_dim
    space = hs_orthonormalize(_intertwiner_mats(theta), tol)
    scaled = np.stack([x * np.sqrt(n) for x in space.mats]) if space.dim else \
        np.zeros((0, k, n), dtype=np.complex128)
    m = space.dim
    if m * n != k:
        raise ValidationError(f"dimension count failed: {m} * {n} != {k}")
    U = np.hstack(list(scaled))
    ru = max(op_norm(U.conj().T @ U - np.eye(m * n)),
             op_norm(U @ U.conj().T - np.eye(k)))
    ri = 0.0
    for a in theta.domain.basis:
        lhs = theta.apply(a, tol) @ U
        rhs = U @ np.kron(np.eye(m), a)
        ri = max(ri, op_norm(lhs - rhs))
    corr = _scalar_column_correspondence(m, scaled)
    u = ModuleUnitary(("intertwiners (x) H",), ("K",), U, float(ru), float(ri),
                      {"kind": "intertwiner factor"})
    return corr, u


def hilbert_space_compression(theta: Homomorphism, omega, tol: float = DEFAULT_TOL):
    """The compression factor: range of theta(omega omega*) for a unit column
    omega, with h (x) x -> theta(h omega*) x the certified unitary."""
    n = _require_full_matrix_domain(theta)
    omega = np.asarray(omega, dtype=np.complex128).reshape(n, 1)
    if abs(np.linalg.norm(omega) - 1.0) > 1e-9:
        raise PreconditionError("omega must be a unit column")
    theta.validate(tol)
    k = theta.codomain_dim
    P = theta.apply(omega @ omega.conj().T, tol)
    V = _range_isometry(P, tol)
    m = V.shape[1]
    if n * m != k:
        raise ValidationError(f"dimension count failed: {n} * {m} != {k}")
    blocks = []
    for s in range(n):
        h = np.zeros((n, 1), dtype=np.complex128)
        h[s, 0] = 1.0
        blocks.append(theta.apply(h @ omega.conj().T, tol) @ V)
    U = np.hstack(blocks)
    ru = max(op_norm(U.conj().T @ U - np.eye(n * m)),
             op_norm(U @ U.conj().T - np.eye(k)))
    ri = 0.0
    for a in theta.domain.basis:
        lhs = theta.apply(a, tol) @ U
        rhs = U @ np.kron(a, np.eye(m))
        ri = max(ri, op_norm(lhs - rhs))
    corr = _scalar_column_correspondence(m, np.stack([V]))
    u = ModuleUnitary(("H (x) compression",), ("K",), U, float(ru), float(ri),
                      {"kind": "compression factor"})
    corr.meta["isometry"] = V
    return corr, u


def intertwiner_composition_law(theta2: Homomorphism, theta1: Homomorphism,
                                tol: float = DEFAULT_TOL) -> ModuleUnitary:
    """Certifies intertwiners(theta2 . theta1) = intertwiners2 (x) intertwiners1
    via x2 (x) x1 -> x2 x1 (contravariant order)."""
    comp = theta2.compose(theta1, tol)
    ha, _ = hilbert_space_intertwiners(comp, tol)
    ha2, _ = hilbert_space_intertwiners(theta2, tol)
    ha1, _ = hilbert_space_intertwiners(theta1, tol)
    basis = ha.meta["matrices"]
    m = basis.shape[0]
    cols = []
    for x2 in ha2.meta["matrices"]:
        for x1 in ha1.meta["matrices"]:
            prod = x2 @ x1
            cols.append(np.array([scalar_inner(bt, prod) for bt in basis]))
    Wmat = np.stack(cols, axis=1) if cols else np.zeros((m, 0))
    ru = max(op_norm(Wmat.conj().T @ Wmat - np.eye(Wmat.shape[1])),
             op_norm(Wmat @ Wmat.conj().T - np.eye(m)))
    return ModuleUnitary(("intertwiners2 (x) intertwiners1",),
                         ("intertwiners of the composition",),
                         Wmat, float(ru), 0.0, {"law": "intertwiner composition"})


def compression_composition_law(theta2: Homomorphism, theta1: Homomorphism,
                                omega, omega2, tol: float = DEFAULT_TOL) -> ModuleUnitary:
    """Certifies compression(theta2 . theta1) = compression1 (x) compression2
    via x1 (x) x2 -> theta2(x1 omega2*) x2 (covariant order)."""
    comp = theta2.compose(theta1, tol)
    hb, _ = hilbert_space_compression(comp, omega, tol)
    hb1, _ = hilbert_space_compression(theta1, omega, tol)
    hb2, _ = hilbert_space_compression(theta2, omega2, tol)
    V = hb.meta["isometry"]
    V1 = hb1.meta["isometry"]
    V2 = hb2.meta["isometry"]
    k1 = theta2.domain.ambient_dim
    omega2 = np.asarray(omega2, dtype=np.complex128).reshape(k1, 1)
    cols = []
    for i in range(V1.shape[1]):
        x1 = V1[:, i:i + 1]
        for j in range(V2.shape[1]):
            x2 = V2[:, j:j + 1]
            vec_k = theta2.apply(x1 @ omega2.conj().T, tol) @ x2
            cols.append((V.conj().T @ vec_k)[:, 0])
    Wmat = np.stack(cols, axis=1) if cols else np.zeros((V.shape[1], 0))
    ru = max(op_norm(Wmat.conj().T @ Wmat - np.eye(Wmat.shape[1])),
             op_norm(Wmat @ Wmat.conj().T - np.eye(V.shape[1])))
    return ModuleUnitary(("compression1 (x) compression2",),
                         ("compression of the composition",),
                         Wmat, float(ru), 0.0, {"law": "compression composition"})


# ---------------------------------------------------------------------------
# Morita equivalence


def is_morita_equivalence(M: Correspondence, tol: float = DEFAULT_TOL) -> bool:
    """True iff M is full over its base and the left action is a
    *-isomorphism onto the finite-rank operators of M."""
    full, _ = is_full(M.module, tol)
    if not full:
        return False
    if not M.left_action.is_faithful(tol):
        return False
    K = finite_rank_algebra(M.module, tol)
    img = M.left_action.image_space(tol)
    eq, _ = subspace_equal(img, K.space, 1e-6)
    return bool(eq)
