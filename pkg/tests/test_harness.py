import json

import pytest

from modfactor.errors import InfeasibleSpec, ParseError, ValidationError
from modfactor.harness import (
    GenSpec,
    generate_random_instance,
    golden_instance,
    instance_to_json,
    parse_instance,
    run_verification,
    save_instance,
)
from modfactor.hilbmod import Homomorphism, is_full


SPEC = GenSpec(blocks_B=[(1, 1), (2, 1)], blocks_C=[(2, 1)],
               module_multiplicity=2, corr_multiplicity=1)


class TestGolden:
    def test_dimensions(self):
        g = golden_instance()
        assert g.E.dim_G == 3 and g.E.dim_H == 3 and g.E.dim == 4
        assert g.theta.domain.dim == 5

    def test_verification(self):
        rep = run_verification(golden_instance())
        assert rep.passed
        methods = rep.body["methods"]
        assert methods["dual"]["status"] == "ok"
        assert methods["qons"]["status"] == "ok"
        assert methods["commutant"]["status"] == "ok"
        assert methods["unit_vector"]["status"] == "not_applicable"


class TestParsing:
    def test_roundtrip(self, tmp_path):
        g = golden_instance()
        p = tmp_path / "g.json"
        save_instance(g, str(p))
        loaded = parse_instance(str(p))
        assert loaded.E.dim == 4
        assert loaded.theta.domain.dim == 5

    def test_malformed_complex_pair(self, tmp_path):
        g = instance_to_json(golden_instance())
        g["E"]["generators"][0][0][0] = [1.0]  # not a [re, im] pair
        p = tmp_path / "bad.json"
        p.write_text(json.dumps(g))
        with pytest.raises(ParseError) as exc:
            parse_instance(str(p))
        assert "generators[0]" in str(exc.value)

    def test_invalid_json(self, tmp_path):
        p = tmp_path / "broken.json"
        p.write_text("{not json")
        with pytest.raises(ParseError):
            parse_instance(str(p))

    def test_missing_file(self):
        with pytest.raises(ParseError):
            parse_instance("/nonexistent/instance.json")

    def test_perturbed_theta_names_the_basis_pair(self, tmp_path):
        g = instance_to_json(golden_instance())
        # corrupt one image so multiplicativity fails
        g["theta"]["images"][2][0][0] = [0.37, 0.0]
        p = tmp_path / "pert.json"
        p.write_text(json.dumps(g))
        with pytest.raises(ValidationError) as exc:
            parse_instance(str(p))
        msg = str(exc.value)
        assert "basis" in msg and ("pair" in msg or "element" in msg)


class TestGenerator:
    def test_deterministic_given_seed(self):
        a = instance_to_json(generate_random_instance(SPEC, 42))
        b = instance_to_json(generate_random_instance(SPEC, 42))
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)

    def test_different_seeds_differ(self):
        a = instance_to_json(generate_random_instance(SPEC, 1))
        b = instance_to_json(generate_random_instance(SPEC, 2))
        assert json.dumps(a, sort_keys=True) != json.dumps(b, sort_keys=True)

    def test_generated_instances_are_full(self):
        for seed in range(5):
            inst = generate_random_instance(SPEC, seed)
            assert is_full(inst.E)[0]

    def test_fullification_is_noted(self):
        # hunt a seed whose compression destroys fullness
        for seed in range(60):
            inst = generate_random_instance(SPEC, seed)
            if inst.notes.get("fullified"):
                assert is_full(inst.E)[0]
                return
        pytest.skip("no fullified instance in the scanned seed range")

    def test_trivial_spec_gives_hilbert_space_instance(self):
        spec = GenSpec(blocks_B=[(1, 1)], blocks_C=[(1, 1)],
                       module_multiplicity=3, corr_multiplicity=2)
        inst = generate_random_instance(spec, 0)
        assert inst.B.ambient_dim == 1 and inst.C.ambient_dim == 1
        rep = run_verification(inst)
        assert rep.passed

    def test_unit_vector_request(self):
        spec = GenSpec(blocks_B=[(1, 1), (2, 1)], blocks_C=[(2, 1)],
                       module_multiplicity=1, corr_multiplicity=1,
                       with_unit_vector=True)
        inst = generate_random_instance(spec, 8)
        assert inst.unit_vector is not None
        rep = run_verification(inst)
        assert rep.passed
        assert rep.body["methods"]["unit_vector"]["status"] == "ok"

    def test_infeasible_spec(self):
        with pytest.raises(InfeasibleSpec):
            generate_random_instance(GenSpec(blocks_B=[], blocks_C=[(1, 1)]), 0)
        with pytest.raises(InfeasibleSpec):
            generate_random_instance(
                GenSpec(blocks_B=[(0, 1)], blocks_C=[(1, 1)]), 0)


class TestVerification:
    def test_seeded_instance_passes(self):
        inst = generate_random_instance(SPEC, 17)
        rep = run_verification(inst)
        assert rep.passed
        assert rep.body["oracle"]["max_residual"] <= 1e-8
        assert rep.body["invariants"]["dims_agree"]

    def test_reports_are_byte_identical(self):
        inst = generate_random_instance(SPEC, 23)
        r1 = run_verification(inst)
        r2 = run_verification(inst)
        assert r1.to_canonical_json() == r2.to_canonical_json()

    def test_reports_are_byte_identical_across_reload(self, tmp_path):
        inst = generate_random_instance(SPEC, 23)
        p = tmp_path / "i.json"
        save_instance(inst, str(p))
        r1 = run_verification(parse_instance(str(p)))
        r2 = run_verification(parse_instance(str(p)))
        assert r1.to_canonical_json() == r2.to_canonical_json()

    def test_timings_never_enter_the_canonical_report(self):
        inst = golden_instance()
        rep = run_verification(inst)
        assert rep.timings  # collected
        assert "timing" not in rep.to_canonical_json()
        assert "setup" not in rep.to_canonical_json()

    def test_fault_injection_isolates_the_homomorphism_check(self):
        # corrupt theta in memory: every method reports the homomorphism
        # failure while the unit identities (which ignore theta) still pass
        inst = golden_instance()
        K = inst.theta.domain
        imgs = inst.theta.images.copy()
        imgs[2] = imgs[2] * 1.01
        bad = Instance_with(inst, Homomorphism(K, 3, imgs))
        rep = run_verification(bad)
        assert not rep.passed
        for name in ("dual", "qons", "commutant"):
            entry = rep.body["methods"][name]
            assert entry["status"] == "error"
            assert "multiplicative" in entry["reason"] or "unital" in entry["reason"] \
                or "*-preserving" in entry["reason"]
        assert rep.body["unit_identities"]["max_residual"] <= 1e-8

    def test_text_rendering(self):
        rep = run_verification(golden_instance())
        text = rep.to_text()
        assert "PASS" in text
        assert "dual" in text and "qons" in text and "commutant" in text

    def test_supplied_qons_family_survives_the_round_trip(self, tmp_path):
        from modfactor.hilbmod import dual_qons_family
        inst = generate_random_instance(SPEC, 19)
        inst.qons_family = dual_qons_family(inst.E)
        p = tmp_path / "fam.json"
        save_instance(inst, str(p))
        loaded = parse_instance(str(p))
        assert loaded.qons_family is not None
        assert len(loaded.qons_family) == len(inst.qons_family)
        rep = run_verification(loaded)
        assert rep.passed
        assert rep.body["methods"]["qons"]["status"] == "ok"


def Instance_with(inst, theta):
    from modfactor.harness import Instance
    return Instance(inst.B, inst.C, inst.E, inst.F, theta,
                    inst.oracle, inst.unit_vector, inst.qons_family, inst.notes)


class TestOracleConsistency:
    def test_mismatched_oracle_is_rejected(self):
        inst1 = generate_random_instance(SPEC, 31)
        inst2 = generate_random_instance(SPEC, 32)
        bad = Instance_with(inst1, inst1.theta)
        bad.oracle = inst2.oracle
        rep = run_verification(bad)
        orc = rep.body["oracle"]
        assert orc is None or orc.get("max_residual") is None or not rep.passed
