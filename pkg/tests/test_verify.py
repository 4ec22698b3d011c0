"""Enumeration, sampling, chunked scanning, and report determinism."""

import json

import pytest

from sccheck import (
    OPTIMIST,
    PESSIMIST,
    Exhaustive,
    ProbabilityModel,
    Sample,
    Scc,
    decode_table,
    ds_strategy_proof_given,
    encode_table,
    enumerate_sccs,
    find_taylor_manipulation,
    fixture_sccs,
    full_table,
    mutate_fixture_sccs,
    run_verification,
    sample_sccs,
    table_space_size,
    verify_equivalence,
    verify_taylor,
)
from sccheck.verify import _env, _has_violation, _is_onto, _has_weak_dictator


def report_key(report):
    return json.dumps(report.to_json_dict(include_elapsed=False), sort_keys=True)


class TestEnumeration:
    def test_small_space_sizes(self):
        assert table_space_size(1, 3) == 117649
        assert table_space_size(1, 2) == 9
        assert table_space_size(2, 2) == 81

    def test_enumerate_one_voter_two_alternatives(self):
        tables = list(enumerate_sccs(1, 2))
        assert len(tables) == 9
        encodings = [encode_table(f) for f in tables]
        assert len(set(encodings)) == 9
        assert encodings[0] == "0.0"
        assert encodings[1] == "0.1"
        assert encodings[3] == "1.0"  # slot 0 is the most significant digit

    def test_refuses_oversized_spaces(self):
        with pytest.raises(ValueError, match="2651730845859653471779023381601"):
            list(enumerate_sccs(2, 3))
        with pytest.raises(ValueError):
            list(enumerate_sccs(1, 4))

    def test_exhaustive_count_matches(self):
        assert sum(1 for _ in enumerate_sccs(2, 2)) == 81

    def test_encoding_round_trip(self):
        f = Scc.borda_set(2, 3).materialized()
        enc = encode_table(f)
        g = decode_table(2, 3, enc)
        assert full_table(g) == full_table(f)

    def test_decode_rejects_bad_digits(self):
        with pytest.raises(ValueError):
            decode_table(1, 2, "0.3")  # base 3 digits only
        with pytest.raises(ValueError):
            decode_table(1, 2, "0")  # wrong slot count


class TestSampling:
    def test_uniform_stream_deterministic(self):
        a = [f.table for f in sample_sccs(2, 3, 10, 42)]
        b = [f.table for f in sample_sccs(2, 3, 10, 42)]
        assert a == b
        c = [f.table for f in sample_sccs(2, 3, 10, 43)]
        assert a != c

    def test_mutate_zero_flips_is_identity(self):
        base = Scc.dictatorial(2, 3, 0)
        for f in mutate_fixture_sccs(base, 5, 1, 0):
            assert f.table == full_table(base)

    def test_mutate_changes_exactly_k_slots(self):
        base = Scc.dictatorial(2, 3, 0)
        reference = full_table(base)
        for f in mutate_fixture_sccs(base, 20, 9, 3):
            diffs = sum(1 for a, b in zip(f.table, reference) if a != b)
            assert diffs == 3

    def test_uniform_samples_rarely_strategy_proof(self):
        report = run_verification(
            2, 3, Sample(count=2000, seed=5), model_count=0, forward_subsample=0
        )
        uniform = report.histogram_by_source["uniform"]
        sp = uniform["strategy-proof-with-dictator"] + uniform["strategy-proof-no-dictator"]
        assert sp / 2000 < 0.01


class TestScanIntegrity:
    """The bit-table fast path must agree with the reference deciders."""

    def scan_flags(self, f):
        env = _env(f.n, f.m)
        table = full_table(f)
        return (
            _has_violation(table, env.tay_bits, env),
            _has_violation(table, env.ds_bits, env),
            _is_onto(table, env),
            _has_weak_dictator(table, env),
        )

    def reference_flags(self, f):
        from sccheck import is_onto_singletons, weak_dictators

        taylor = (
            find_taylor_manipulation(f, OPTIMIST) is not None
            or find_taylor_manipulation(f, PESSIMIST) is not None
        )
        eu = ds_strategy_proof_given(f, ProbabilityModel.half_half()) is not None
        return taylor, eu, is_onto_singletons(f), bool(weak_dictators(f))

    def test_fixtures_both_dimensions(self):
        for n in (1, 2):
            for _, f in fixture_sccs(n, 3):
                assert self.scan_flags(f) == self.reference_flags(f)

    def test_seeded_tables(self):
        for f in sample_sccs(1, 3, 150, 77):
            assert self.scan_flags(f) == self.reference_flags(f)
        for f in sample_sccs(2, 3, 40, 78):
            assert self.scan_flags(f) == self.reference_flags(f)

    def test_mutated_tables(self):
        for f in mutate_fixture_sccs(Scc.omninomination(2, 3), 30, 5, 1):
            assert self.scan_flags(f) == self.reference_flags(f)


class TestVerifyTaylor:
    def test_requires_three_alternatives(self):
        with pytest.raises(ValueError):
            verify_taylor(2, 2, Exhaustive())

    def test_sampled_run_no_violations(self):
        report = verify_taylor(2, 3, Sample(count=300, seed=11, mutated=100))
        assert report.checked == 300 + 100 + len(fixture_sccs(2, 3))
        assert report.taylor_violations == []
        assert sum(report.histogram.values()) == report.checked

    def test_histogram_buckets_partition(self):
        report = verify_taylor(1, 3, Exhaustive())
        assert report.checked == 117649
        assert sum(report.histogram.values()) == 117649
        assert all(v >= 0 for v in report.histogram.values())


class TestVerifyEquivalence:
    def test_exhaustive_tiny_spaces_clean(self):
        for n, m in ((1, 2), (2, 2)):
            report = verify_equivalence(n, m, Exhaustive(), model_count=2, seed=3,
                                        forward_subsample=30)
            assert report.checked == table_space_size(n, m)
            assert report.equivalence_violations == []
            assert report.forward_violations == []
            assert report.witness_checks["emitted"] == report.witness_checks["passed"]

    def test_minimum_two_alternatives(self):
        with pytest.raises(ValueError):
            verify_equivalence(2, 1, Exhaustive())

    def test_forward_block_reported(self):
        report = verify_equivalence(1, 3, Sample(count=50, seed=2), model_count=2,
                                    seed=2, forward_subsample=10)
        assert report.forward == {
            "subsample": 10,
            "manipulable": report.forward["manipulable"],
            "models": 2,
        }
        assert report.forward["manipulable"] <= 10


class TestDeterminismAndPartitioning:
    @pytest.mark.parametrize("jobs", [2, 8])
    def test_partitioned_taylor_run_matches_single(self, jobs):
        single = verify_taylor(1, 3, Exhaustive(), jobs=1)
        multi = verify_taylor(1, 3, Exhaustive(), jobs=jobs)
        assert report_key(single) == report_key(multi)

    @pytest.mark.parametrize("jobs", [2, 8])
    def test_partitioned_equivalence_matches_single(self, jobs):
        single = verify_equivalence(2, 2, Exhaustive(), model_count=2, seed=1, jobs=1)
        multi = verify_equivalence(2, 2, Exhaustive(), model_count=2, seed=1, jobs=jobs)
        assert report_key(single) == report_key(multi)

    def test_identical_inputs_identical_reports(self):
        a = run_verification(2, 3, Sample(count=120, seed=6, mutated=30),
                             model_count=2, seed=6, forward_subsample=15)
        b = run_verification(2, 3, Sample(count=120, seed=6, mutated=30),
                             model_count=2, seed=6, forward_subsample=15)
        assert report_key(a) == report_key(b)

    def test_sampled_partitioning(self):
        kwargs = dict(model_count=2, seed=9, forward_subsample=20)
        a = run_verification(2, 3, Sample(count=200, seed=9, mutated=50), jobs=1, **kwargs)
        b = run_verification(2, 3, Sample(count=200, seed=9, mutated=50), jobs=4, **kwargs)
        assert report_key(a) == report_key(b)


class TestFixtureRecords:
    def test_fixture_section_content(self):
        report = run_verification(2, 3, Sample(count=20, seed=4), model_count=1,
                                  seed=4, forward_subsample=5)
        by_name = {fx["name"]: fx for fx in report.fixtures}
        assert by_name["dictatorial-0"]["classification"] == "strategy-proof-with-dictator"
        assert by_name["dictatorial-0"]["weak_dictators"] == [0]
        assert by_name["omninomination"]["weak_dictators"] == [0, 1]
        assert by_name["constant-0"]["classification"] == "not-onto"
        borda = by_name["borda-set"]
        assert borda["classification"] == "taylor-manipulable"
        assert borda["taylor_witness"] is not None
        assert borda["ds_half_witness"] is not None
