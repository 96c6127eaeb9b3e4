"""Instance I/O, seeded random generation with a built-in oracle, the golden
fixture, and the verification orchestrator.

JSON conventions: complex numbers as [re, im] pairs, matrices as row-major
nested arrays.  Reports are serialized canonically (sorted keys, fixed
separators) so identical input and seed give byte-identical output; timings
are collected separately and never enter the canonical form.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .cstar import (
    FiniteCStarAlgebra,
    algebra_from_basis,
    build_algebra,
    commutant,
    hermitian_basis,
)
from .errors import (
    InfeasibleSpec,
    ModfactorError,
    ParseError,
    ValidationError,
)
from .hilbmod import (
    Correspondence,
    HilbertModule,
    Homomorphism,
    build_module,
    dual_qons_family,
    finite_rank_algebra,
    fullification,
    is_full,
    module_from_parts,
    verify_unit_vector,
)
from .numkernel import OperatorSpace
from .numkernel import (
    DEFAULT_TOL,
    hs_orthonormalize,
    op_norm,
    subspace_equal,
)
from .factorizations import (
    FactorizationResult,
    compare,
    factor_commutant,
    factor_dual,
    factor_qons,
    factor_unit_vector,
    induced_homomorphism,
    validate_theta,
)
from .tensorcalc import certify_module_unitary, compose_unitaries, map_from_spanning, unit_identities

__all__ = [
    "Instance",
    "GenSpec",
    "VerificationReport",
    "golden_instance",
    "generate_random_instance",
    "parse_instance",
    "instance_to_json",
    "save_instance",
    "run_verification",
    "oracle_unitary",
]


# ---------------------------------------------------------------------------
# JSON encoding of values


def _encode_matrix(m: np.ndarray):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _decode_complex(v, where: str) -> complex:
    if not (isinstance(v, (list, tuple)) and len(v) == 2
            and all(isinstance(t, (int, float)) for t in v)):
        raise ParseError(f"{where}: expected a [re, im] pair, got {v!r}")
    return complex(v[0], v[1])


def _decode_matrix(m, where: str) -> np.ndarray:
    if not isinstance(m, list) or not m or not all(isinstance(r, list) for r in m):
        raise ParseError(f"{where}: expected a nested array matrix")
    width = len(m[0])
    rows = []
    for i, row in enumerate(m):
        if len(row) != width:
            raise ParseError(f"{where}[{i}]: ragged matrix row")
        rows.append([_decode_complex(v, f"{where}[{i}][{j}]")
                     for j, v in enumerate(row)])
    return np.array(rows, dtype=np.complex128)


def _encode_algebra(A: FiniteCStarAlgebra):
    return {"ambient_dim": A.ambient_dim,
            "basis": [_encode_matrix(b) for b in A.basis]}


def _decode_algebra(obj, where: str, tol: float) -> FiniteCStarAlgebra:
    if not isinstance(obj, dict) or "basis" not in obj or "ambient_dim" not in obj:
        raise ParseError(f"{where}: expected an algebra object")
    mats = [_decode_matrix(m, f"{where}.basis[{i}]")
            for i, m in enumerate(obj["basis"])]
    n = int(obj["ambient_dim"])
    for i, m in enumerate(mats):
        if m.shape != (n, n):
            raise ParseError(f"{where}.basis[{i}]: shape {m.shape} is not ({n}, {n})")
    # keep the stored basis verbatim so index-aligned data (homomorphism
    # images, left actions) survives the round trip
    return algebra_from_basis(mats, tol)


def _encode_module(E: HilbertModule):
    return {"base": _encode_algebra(E.base), "dim_H": E.dim_H,
            "generators": [_encode_matrix(x) for x in E.basis]}


def _decode_module(obj, where: str, tol: float) -> HilbertModule:
    if not isinstance(obj, dict) or "generators" not in obj:
        raise ParseError(f"{where}: expected a module object")
    base = _decode_algebra(obj.get("base"), f"{where}.base", tol)
    gens = [_decode_matrix(m, f"{where}.generators[{i}]")
            for i, m in enumerate(obj["generators"])]
    arr = np.stack(gens)
    flat = arr.reshape(len(gens), -1)
    gram = flat @ flat.conj().T
    if np.abs(gram - np.eye(len(gens))).max() <= 1e-8:
        # a stored orthonormal basis is kept verbatim, so recomputations on
        # a reloaded instance reproduce the original coordinates exactly
        space = OperatorSpace(arr.shape[1], arr.shape[2], arr)
        E = module_from_parts(base, space, tol)
    else:
        E = build_module(base, gens, tol)
    want = obj.get("dim_H")
    if want is not None and int(want) != E.dim_H:
        raise ValidationError(
            f"{where}: declared dim_H {want} differs from the nondegenerate "
            f"span dimension {E.dim_H}"
        )
    return E


def _encode_hom(h: Homomorphism):
    return {"domain": _encode_algebra(h.domain), "codomain_dim": h.codomain_dim,
            "images": [_encode_matrix(m) for m in h.images]}


def _decode_hom(obj, where: str, tol: float) -> Homomorphism:
    if not isinstance(obj, dict) or "images" not in obj:
        raise ParseError(f"{where}: expected a homomorphism object")
    dom = _decode_algebra(obj.get("domain"), f"{where}.domain", tol)
    d = int(obj.get("codomain_dim", 0))
    imgs = [_decode_matrix(m, f"{where}.images[{i}]")
            for i, m in enumerate(obj["images"])]
    if len(imgs) != dom.dim:
        raise ParseError(f"{where}: {len(imgs)} images for a basis of size {dom.dim}")
    hom = Homomorphism(dom, d, np.stack(imgs))
    hom.validate(tol)
    return hom


def _encode_correspondence(X: Correspondence):
    out = _encode_module(X.module)
    out["left"] = _encode_algebra(X.left)
    out["left_action"] = [_encode_matrix(m) for m in X.left_action.images]
    return out


def _decode_correspondence(obj, where: str, tol: float) -> Correspondence:
    mod = _decode_module(obj, where, tol)
    left = _decode_algebra(obj.get("left"), f"{where}.left", tol)
    imgs = [_decode_matrix(m, f"{where}.left_action[{i}]")
            for i, m in enumerate(obj.get("left_action", []))]
    if len(imgs) != left.dim:
        raise ParseError(f"{where}: left action must list one matrix per basis element")
    corr = Correspondence(mod, left, Homomorphism(left, mod.dim_H, np.stack(imgs)))
    corr.validate(tol)
    return corr


# ---------------------------------------------------------------------------
# instances


@dataclass(eq=False)
class Instance:
    """A verification problem: theta from the adjointable operators of E over
    B to those of F over C, with optional seeded oracle data."""

    B: FiniteCStarAlgebra
    C: FiniteCStarAlgebra
    E: HilbertModule
    F: HilbertModule
    theta: Homomorphism
    oracle: Correspondence | None = None
    unit_vector: np.ndarray | None = None
    qons_family: list | None = None
    notes: dict = field(default_factory=dict)


def instance_to_json(inst: Instance) -> dict:
    out = {
        "B": _encode_algebra(inst.B),
        "C": _encode_algebra(inst.C),
        "E": _encode_module(inst.E),
        "F": _encode_module(inst.F),
        "theta": _encode_hom(inst.theta),
        "oracle": None if inst.oracle is None else _encode_correspondence(inst.oracle),
        "unit_vector": None if inst.unit_vector is None
        else _encode_matrix(inst.unit_vector),
        "qons_family": None if inst.qons_family is None
        else [_encode_matrix(e) for e in inst.qons_family],
        "notes": inst.notes,
    }
    return out


def save_instance(inst: Instance, path: str) -> None:
    with open(path, "w") as f:
        json.dump(instance_to_json(inst), f, sort_keys=True, separators=(",", ":"))
        f.write("\n")


def parse_instance(path: str, tol: float = DEFAULT_TOL) -> Instance:
    """Load and fully validate an instance file.

    Raises ParseError with a location breadcrumb for malformed data and
    ValidationError naming the first violated invariant.
    """
    try:
        with open(path) as f:
            obj = json.load(f)
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON ({e})") from e
    return instance_from_json(obj, tol)


def instance_from_json(obj, tol: float = DEFAULT_TOL) -> Instance:
    if not isinstance(obj, dict):
        raise ParseError("instance: expected a JSON object")
    B = _decode_algebra(obj.get("B"), "instance.B", tol)
    C = _decode_algebra(obj.get("C"), "instance.C", tol)
    E = _decode_module(obj.get("E"), "instance.E", tol)
    F = _decode_module(obj.get("F"), "instance.F", tol)
    if not np.allclose(E.base.basis, B.basis):
        E = build_module(B, list(E.basis), tol)
    if not np.allclose(F.base.basis, C.basis):
        F = build_module(C, list(F.basis), tol)
    theta = _decode_hom(obj.get("theta"), "instance.theta", tol)
    validate_theta(E, F, theta, tol)
    oracle = obj.get("oracle")
    if oracle is not None:
        oracle = _decode_correspondence(oracle, "instance.oracle", tol)
        _check_oracle_consistency(E, F, theta, oracle, tol)
    xi = obj.get("unit_vector")
    if xi is not None:
        xi = _decode_matrix(xi, "instance.unit_vector")
        if not verify_unit_vector(E, xi, tol):
            raise ValidationError("instance.unit_vector: not a unit vector of E")
    family = obj.get("qons_family")
    if family is not None:
        family = [_decode_matrix(e, f"instance.qons_family[{i}]")
                  for i, e in enumerate(family)]
    notes = obj.get("notes") or {}
    return Instance(B, C, E, F, theta, oracle, xi, family, dict(notes))


def _check_oracle_consistency(E, F, theta, oracle, tol):
    """F must be the module induced by the oracle and theta the induced map."""
    F2, theta2, tp_F = induced_homomorphism(E, oracle, tol)
    if F2.dim_H != F.dim_H or F2.dim_G != F.dim_G or \
            not subspace_equal(F2.space, F.space, 1e-6)[0]:
        raise ValidationError(
            "instance F is not the module induced by the recorded oracle")
    theta_dist = max(op_norm(theta.apply(a, tol) - theta2.apply(a, tol))
                     for a in theta.domain.basis)
    if theta_dist > 1e-6:
        raise ValidationError(
            "instance theta is not induced by the recorded oracle")
    return tp_F


# ---------------------------------------------------------------------------
# the golden fixture


def golden_instance() -> Instance:
    """The standard example: over the block algebra C (+) M2 inside M3, the
    module spanned by the four off-corner matrix units, with the identity
    homomorphism on its adjointable operators."""
    B = build_algebra([(1, 1), (2, 1)])

    def unit(i, j):
        m = np.zeros((3, 3), dtype=np.complex128)
        m[i - 1, j - 1] = 1.0
        return m

    E = build_module(B, [unit(2, 1), unit(3, 1), unit(1, 2), unit(1, 3)])
    K = finite_rank_algebra(E)
    theta = Homomorphism(K, E.dim_H, K.basis.copy())
    return Instance(B, B, E, E, theta, notes={"name": "golden"})


# ---------------------------------------------------------------------------
# random generation


@dataclass
class GenSpec:
    """Shape of a random instance; all randomness is drawn from the seed."""

    blocks_B: list
    blocks_C: list
    module_multiplicity: int = 2
    corr_multiplicity: int = 1
    with_unit_vector: bool = False
    compress: bool = True

    @staticmethod
    def from_json(obj) -> "GenSpec":
        if not isinstance(obj, dict) or "blocks_B" not in obj or "blocks_C" not in obj:
            raise ParseError("generator spec needs blocks_B and blocks_C")
        return GenSpec(
            blocks_B=[tuple(map(int, b)) for b in obj["blocks_B"]],
            blocks_C=[tuple(map(int, b)) for b in obj["blocks_C"]],
            module_multiplicity=int(obj.get("module_multiplicity", 2)),
            corr_multiplicity=int(obj.get("corr_multiplicity", 1)),
            with_unit_vector=bool(obj.get("with_unit_vector", False)),
            compress=bool(obj.get("compress", True)),
        )


def _random_projection_in(span_mats, rng) -> np.ndarray:
    """Spectral projection of a random Hermitian element of a *-closed span,
    cut at the largest spectral gap so the cut is never ambiguous.

    Falls back to the identity when the spectrum is too degenerate to carry
    a clean cut (e.g. the span is scalar), keeping the projection inside the
    span in every case.
    """
    space = hs_orthonormalize(span_mats)
    hb = hermitian_basis(space)
    w = rng.standard_normal(hb.shape[0])
    h = np.tensordot(w, hb, axes=1)
    n = h.shape[0]
    ident = np.eye(n, dtype=np.complex128)
    ev, V = np.linalg.eigh(h)
    spread = float(ev.max() - ev.min()) if ev.size else 0.0
    if ev.size < 2 or spread < 1e-8:
        return ident
    gaps = np.diff(ev)
    cut = int(np.argmax(gaps)) + 1
    if gaps[cut - 1] < 1e-6 * spread:
        return ident
    P = V[:, cut:] @ V[:, cut:].conj().T
    if space.distance(P) > 1e-8 * max(1.0, float(np.linalg.norm(P))):
        return ident
    return P


def generate_random_instance(spec: GenSpec, seed: int,
                             tol: float = DEFAULT_TOL) -> Instance:
    """Deterministic seeded instance with a built-in oracle.

    E is a compressed free module over B (fullified when the compression
    destroys fullness, which is noted); M is a random correspondence built
    from a pair of commuting representations compressed inside their joint
    commutant; F and theta come from the induced homomorphism and the
    oracle M is recorded.
    """
    for name, blocks in (("blocks_B", spec.blocks_B), ("blocks_C", spec.blocks_C)):
        if not blocks or any(n < 1 or m < 1 for n, m in blocks):
            raise InfeasibleSpec(f"{name} must be nonempty pairs of positive integers")
    if spec.module_multiplicity < 1 or spec.corr_multiplicity < 1:
        raise InfeasibleSpec("multiplicities must be positive")
    rng = np.random.default_rng(seed)
    notes = {"seed": seed}

    B = build_algebra(spec.blocks_B)
    C = build_algebra(spec.blocks_C)
    G = B.ambient_dim
    L = C.ambient_dim

    # E = q (free module B^m), q a projection in the matrix algebra over B
    m = spec.module_multiplicity
    mmb = [np.kron(_eij(m, a, b), x)
           for a in range(m) for b in range(m) for x in B.basis]
    q = _random_projection_in(mmb, rng) if spec.compress else \
        np.eye(m * G, dtype=np.complex128)
    xi = None
    if spec.with_unit_vector:
        # adjoin an uncompressed free summand; its column is a unit vector
        q = np.block([
            [q, np.zeros((m * G, G), dtype=np.complex128)],
            [np.zeros((G, m * G), dtype=np.complex128), np.eye(G, dtype=np.complex128)],
        ])
        m = m + 1
        xi = np.zeros((m * G, G), dtype=np.complex128)
        xi[(m - 1) * G:, :] = np.eye(G)
    gens = [q @ np.kron(_col(m, a), x) for a in range(m) for x in B.basis]
    E = build_module(B, gens, tol)
    if xi is not None and E.h_embed is not None:
        xi = E.h_embed.conj().T @ xi
    full, _ = is_full(E, tol)
    if not full:
        E, V_support = fullification(E, tol)
        B = E.base
        notes["fullified"] = True
        if xi is not None:
            xi = xi @ V_support
    if xi is not None:
        xi = E.space.project(xi)
        if not verify_unit_vector(E, xi, tol):
            raise ValidationError("generated unit vector failed verification")

    # M: compress the commuting pair b -> 1 (x) b (x) 1, c' -> 1 (x) 1 (x) c'
    mc = spec.corr_multiplicity
    Bp = commutant(B, tol)
    Cp = commutant(C, tol)
    pair_commutant = [np.kron(np.kron(_eij(mc, a, b), bp), c)
                      for a in range(mc) for b in range(mc)
                      for bp in Bp.basis for c in C.basis]
    qM = _random_projection_in(pair_commutant, rng) if spec.compress else \
        np.eye(mc * B.ambient_dim * L, dtype=np.complex128)
    Mgens = []
    for a in range(mc):
        for g in range(B.ambient_dim):
            for c in C.basis:
                Mgens.append(qM @ np.kron(np.kron(_col(mc, a), _col(B.ambient_dim, g)), c))
    Mmod = build_module(C, Mgens, tol)
    VM = Mmod.h_embed if Mmod.h_embed is not None else \
        np.eye(mc * B.ambient_dim * L, dtype=np.complex128)
    rho_imgs = np.stack([
        VM.conj().T @ np.kron(np.kron(np.eye(mc), b), np.eye(L)) @ VM
        for b in B.basis
    ])
    M = Correspondence(Mmod, B, Homomorphism(B, Mmod.dim_H, rho_imgs))
    M.validate(tol)

    F, theta, _ = induced_homomorphism(E, M, tol)
    return Instance(B, C, E, F, theta, oracle=M, unit_vector=xi, notes=notes)


def _eij(n: int, i: int, j: int) -> np.ndarray:
    m = np.zeros((n, n), dtype=np.complex128)
    m[i, j] = 1.0
    return m


def _col(n: int, i: int) -> np.ndarray:
    v = np.zeros((n, 1), dtype=np.complex128)
    v[i, 0] = 1.0
    return v


# ---------------------------------------------------------------------------
# oracle link


def oracle_unitary(res_dual: FactorizationResult, M: Correspondence, tp_F,
                   tol: float = DEFAULT_TOL):
    """Certified unitary from the dual-method correspondence onto a seeded
    oracle M, via x* (x) coord_F(y (x) h) -> rho_M(<x, y>) h.

    ``tp_F`` is the tensor product realizing F = E (.) M (recomputed and
    cross-checked against the instance's F for loaded instances).
    """
    tp1 = res_dual.aux["tp_corr"]
    E: HilbertModule = res_dual.aux["E"]
    lift = res_dual.aux["dual_lift"]
    dual_mod = res_dual.aux["dual"].module
    dom_cols = []
    tgt_cols = []
    for j, u in enumerate(dual_mod.basis):
        xstar = lift @ u
        S1j = tp1.block(j)
        for mi, y in enumerate(E.basis):
            block = tp_F.block(mi)  # H_M -> H_F
            dom_cols.append(S1j @ block)
            tgt_cols.append(M.act(xstar @ y, tol))
    D = np.hstack(dom_cols)
    T = np.hstack(tgt_cols)
    U = map_from_spanning(D, T)
    return certify_module_unitary(res_dual.correspondence, M, U,
                                  {"kind": "oracle link"})


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerifyConfig:
    tol: float = DEFAULT_TOL
    cert_tol: float = 1e-8
    emit_unitaries: bool = False


@dataclass(eq=False)
class VerificationReport:
    body: dict
    timings: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.body.get("passed"))

    def to_canonical_json(self) -> str:
        """Deterministic byte form; timings are intentionally excluded."""
        return json.dumps(self.body, sort_keys=True, separators=(",", ":")) + "\n"

    def to_text(self) -> str:
        lines = [f"verification: {'PASS' if self.passed else 'FAIL'}"]
        for name, rep in sorted(self.body["methods"].items()):
            status = rep.get("status")
            if status == "ok":
                lines.append(
                    f"  method {name:<12} ok   dim {rep['dims']['correspondence']:>3}  "
                    f"theta residual {rep['theta_residual']:.2e}"
                )
            else:
                lines.append(f"  method {name:<12} {status}: {rep.get('reason', '')}")
        for pair, rep in sorted(self.body["comparisons"].items()):
            lines.append(f"  compare {pair:<18} residual {rep['residual']:.2e}"
                         + ("  (composed)" if rep.get("composed") else ""))
        ui = self.body["unit_identities"]
        lines.append(f"  unit identities residual {ui['max_residual']:.2e}")
        if self.body.get("oracle"):
            orc = self.body["oracle"]
            lines.append(f"  oracle links max residual {orc['max_residual']:.2e}")
        lines.append(f"  tolerances {self.body['tolerances']}")
        return "\n".join(lines) + "\n"


def run_verification(inst: Instance, config: VerifyConfig | None = None) -> VerificationReport:
    """Run every applicable method, all pairwise comparisons, the unit
    identities, and the oracle links when a seeded oracle is present.

    One failing method is reported and does not abort the others.
    """
    config = config or VerifyConfig()
    tol = config.tol
    ct = config.cert_tol
    timings = {}
    body = {
        "tolerances": {"tol": tol, "cert_tol": ct},
        "methods": {},
        "comparisons": {},
        "unit_identities": {},
        "oracle": None,
        "invariants": {},
    }

    t0 = time.perf_counter()
    E, F, theta = inst.E, inst.F, inst.theta
    full, _ = is_full(E, tol)
    body["fullified"] = not full
    if not full:
        E_run, _ = fullification(E, tol)
    else:
        E_run = E
    timings["setup"] = time.perf_counter() - t0

    results: dict[str, FactorizationResult] = {}

    def run_method(name, fn):
        t = time.perf_counter()
        try:
            res = fn()
            results[name] = res
            body["methods"][name] = {"status": "ok", **res.to_json(config.emit_unitaries)}
        except ModfactorError as e:
            body["methods"][name] = {"status": "error",
                                     "reason": f"{type(e).__name__}: {e}"}
        timings[name] = time.perf_counter() - t

    run_method("dual", lambda: factor_dual(E_run, F, theta, tol))

    if inst.unit_vector is not None:
        run_method("unit_vector",
                   lambda: factor_unit_vector(E_run, F, theta, inst.unit_vector, tol))
    else:
        body["methods"]["unit_vector"] = {
            "status": "not_applicable", "reason": "no unit vector supplied"}

    def qons_run():
        family = inst.qons_family or dual_qons_family(E_run, tol)
        return factor_qons(E_run, F, theta, family, tol)

    run_method("qons", qons_run)
    run_method("commutant", lambda: factor_commutant(E_run, F, theta, tol)[1])

    # pairwise comparisons through the defining formulas
    t0 = time.perf_counter()
    names = [n for n in ("dual", "unit_vector", "qons", "commutant") if n in results]
    via = results.get("dual")
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            try:
                u = compare(results[a], results[b], via=via, tol=tol)
                body["comparisons"][f"{a}->{b}"] = {
                    "residual": u.residual,
                    "composed": bool(u.meta.get("composed", False)),
                }
            except ModfactorError as e:
                body["comparisons"][f"{a}->{b}"] = {
                    "residual": None, "error": f"{type(e).__name__}: {e}"}
    timings["comparisons"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    try:
        u1, u2 = unit_identities(E_run, tol)
        body["unit_identities"] = {
            "module_times_dual": max(u1.residual_unitary, u1.residual_intertwine),
            "dual_times_module": max(u2.residual_unitary, u2.residual_intertwine),
            "max_residual": max(u1.residual, u2.residual),
        }
    except ModfactorError as e:
        body["unit_identities"] = {"max_residual": None,
                                   "error": f"{type(e).__name__}: {e}"}
    timings["unit_identities"] = time.perf_counter() - t0

    # oracle links: every successful method's correspondence against M
    if inst.oracle is not None and "dual" in results and full:
        t0 = time.perf_counter()
        res_dual = results["dual"]
        links = {}
        try:
            tp_F = _check_oracle_consistency(E_run, F, theta, inst.oracle, tol)
            link_dual = oracle_unitary(res_dual, inst.oracle, tp_F, tol)
            links["dual"] = {"residual_unitary": link_dual.residual_unitary,
                             "residual_intertwine": link_dual.residual_intertwine}
            for name in names:
                if name == "dual":
                    continue
                to_dual = compare(results[name], res_dual, via=res_dual, tol=tol)
                chained = compose_unitaries(to_dual, link_dual)
                links[name] = {"residual_unitary": chained.residual_unitary,
                               "residual_intertwine": chained.residual_intertwine}
            flat = [v for d in links.values() for v in d.values()]
            body["oracle"] = {"links": links, "max_residual": max(flat)}
        except ModfactorError as e:
            body["oracle"] = {"links": links,
                              "error": f"{type(e).__name__}: {e}", "max_residual": None}
        timings["oracle"] = time.perf_counter() - t0

    # cross-method dimension agreement
    dims = {n: results[n].correspondence.module.dim for n in names}
    body["invariants"]["correspondence_dims"] = dims
    body["invariants"]["dims_agree"] = len(set(dims.values())) <= 1

    body["passed"] = _decide_pass(body, ct)
    return VerificationReport(body, timings)


def _decide_pass(body: dict, cert_tol: float) -> bool:
    ok = True
    for name, rep in body["methods"].items():
        if rep["status"] == "error":
            ok = False
        elif rep["status"] == "ok":
            if max(rep["residual_unitary"], rep["residual_intertwine"],
                   rep["theta_residual"]) > cert_tol:
                ok = False
    for rep in body["comparisons"].values():
        if rep.get("residual") is None or rep["residual"] > cert_tol:
            ok = False
    ui = body["unit_identities"]
    if ui.get("max_residual") is None or ui["max_residual"] > cert_tol:
        ok = False
    if body.get("oracle") is not None:
        if body["oracle"].get("max_residual") is None or \
                body["oracle"]["max_residual"] > cert_tol:
            ok = False
    if not body["invariants"].get("dims_agree", True):
        ok = False
    return ok
