"""Desk-scale verification over spaces of social choice correspondences.

Exhaustive enumeration walks every explicit table at tiny dimensions (all
nonempty-set assignments per profile slot, base-(2^m - 1) counter order);
larger dimensions are covered by seeded uniform sampling plus mutation-biased
sampling around known strategy-proof rules. Each correspondence is classified
(not onto / manipulable / strategy-proof with a weak dictator), the
weak-dictator conclusion is asserted for every onto strategy-proof table, and
optimist-or-pessimist manipulability is cross-checked against expected-utility
manipulability under the half-half model. Violation records embed a full
table encoding so any claim can be replayed from the command line.

Scans are embarrassingly parallel over contiguous index ranges; chunk reports
are merged in range order, so the merged report is identical for any worker
count.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator

from . import ds
from .core import Scc, all_ballots, full_mask, full_table, num_profiles
from .manipulation import find_any_taylor_manipulation, validate_taylor_witness

ENUMERATION_LIMIT = 1 << 40

NOT_ONTO = "not-onto"
MANIPULABLE = "taylor-manipulable"
SP_WITH_DICTATOR = "strategy-proof-with-dictator"
SP_NO_DICTATOR = "strategy-proof-no-dictator"
BUCKETS = (NOT_ONTO, MANIPULABLE, SP_WITH_DICTATOR, SP_NO_DICTATOR)


# ---------------------------------------------------------------------------
# Scopes

@dataclass(frozen=True)
class Exhaustive:
    """Walk every explicit table."""

    def describe(self) -> dict:
        return {"kind": "exhaustive"}


@dataclass(frozen=True)
class Sample:
    """Fixtures, then `count` uniform tables, then `mutated` tables obtained
    by flipping a few slots of strategy-proof fixtures."""

    count: int
    seed: int = 0
    mutated: int = 0
    mutate_flips: int = 2

    def describe(self) -> dict:
        return {
            "kind": "sample",
            "count": self.count,
            "seed": self.seed,
            "mutated": self.mutated,
            "mutate_flips": self.mutate_flips,
        }


# ---------------------------------------------------------------------------
# Table encodings, enumeration, sampling

def table_space_size(n: int, m: int) -> int:
    return (2**m - 1) ** num_profiles(n, m)


def encode_table(f: Scc) -> str:
    """Dot-separated base-(2^m - 1) digits, profile slot 0 first."""
    return ".".join(str(mask - 1) for mask in full_table(f))


def decode_table(n: int, m: int, encoding: str) -> Scc:
    base = 2**m - 1
    codes = [int(part) for part in encoding.split(".")]
    if any(not 0 <= c < base for c in codes):
        raise ValueError(f"encoding digits must lie in 0..{base - 1}")
    return Scc.from_table(n, m, (c + 1 for c in codes))


def _table_at(index: int, n_slots: int, base: int) -> tuple[int, ...]:
    codes = [0] * n_slots
    for j in range(n_slots - 1, -1, -1):
        index, c = divmod(index, base)
        codes[j] = c + 1
    return tuple(codes)


def enumerate_sccs(n: int, m: int) -> Iterator[Scc]:
    """Every explicit table exactly once, in counter order.

    Refuses spaces larger than ENUMERATION_LIMIT.
    """
    size = table_space_size(n, m)
    if size > ENUMERATION_LIMIT:
        raise ValueError(
            f"table space for n={n}, m={m} has {size} entries, "
            f"above the enumeration limit {ENUMERATION_LIMIT}"
        )
    slots = num_profiles(n, m)
    base = 2**m - 1
    for index in range(size):
        yield Scc.from_table(n, m, _table_at(index, slots, base))


def sample_sccs(n: int, m: int, count: int, seed: int) -> Iterator[Scc]:
    """Seeded stream of uniform random tables (each slot uniform over the
    2^m - 1 nonempty sets)."""
    rng = random.Random(f"uniform:{seed}")
    slots = num_profiles(n, m)
    top = 2**m
    for _ in range(count):
        yield Scc.from_table(n, m, tuple(rng.randrange(1, top) for _ in range(slots)))


def mutate_fixture_sccs(base: Scc, count: int, seed: int, flips: int) -> Iterator[Scc]:
    """Seeded stream of tables obtained by changing `flips` random slots of a
    base rule's table to different nonempty sets. flips=0 reproduces the base."""
    table = full_table(base)
    slots = len(table)
    b = 2**base.m - 1
    rng = random.Random(f"mutate:{seed}")
    for _ in range(count):
        mutated = list(table)
        for slot in rng.sample(range(slots), flips):
            old = mutated[slot]
            mutated[slot] = 1 + (old - 1 + rng.randrange(1, b)) % b
        yield Scc.from_table(base.n, base.m, tuple(mutated))


def fixture_sccs(n: int, m: int) -> list[tuple[str, Scc]]:
    """Named built-in rules spanning non-onto, strategy-proof, and manipulable
    behavior."""
    return [
        ("constant-0", Scc.constant(n, m, 0)),
        ("dictatorial-0", Scc.dictatorial(n, m, 0)),
        ("omninomination", Scc.omninomination(n, m)),
        ("plurality-ties", Scc.plurality_ties(n, m)),
        ("borda-set", Scc.borda_set(n, m)),
        ("pareto-set", Scc.pareto_set(n, m)),
    ]


# ---------------------------------------------------------------------------
# Precomputed scan environment

@dataclass(frozen=True)
class _Env:
    n: int
    m: int
    slots: int
    base: int
    full: int
    prof_tops: tuple[tuple[int, ...], ...]
    pair_groups: tuple[tuple[int, int, tuple[int, ...]], ...]
    tay_bits: tuple[tuple[int, ...], ...]
    ds_bits: tuple[tuple[int, ...], ...]
    singleton_masks: tuple[int, ...]


@lru_cache(maxsize=8)
def _env(n: int, m: int) -> _Env:
    ballots = all_ballots(m)
    fact = factorial(m)
    slots = num_profiles(n, m)
    full = full_mask(m)

    prof_ranks = []
    prof_tops = []
    for idx in range(slots):
        digits = []
        rest = idx
        for _ in range(n):
            rest, r = divmod(rest, fact)
            digits.append(r)
        digits.reverse()
        prof_ranks.append(tuple(digits))
        prof_tops.append(tuple(ballots[r].top for r in digits))

    # deviation profile indices per (voter, sincere profile), by deviation rank
    weights = [fact ** (n - 1 - v) for v in range(n)]
    pair_groups = []
    for voter in range(n):
        w = weights[voter]
        for p in range(slots):
            r = prof_ranks[p][voter]
            start = p - r * w
            qs = tuple(start + rr * w for rr in range(fact))
            pair_groups.append((p, r, qs))

    # per (ballot rank, sincere mask): bitmask over deviation masks that
    # register a violation, for the optimist/pessimist pair and for the
    # half-half expected-utility check
    tay_bits = []
    ds_bits = []
    for ballot in ballots:
        pos = ballot.position
        t_rows = [0] * (full + 1)
        d_rows = [0] * (full + 1)
        half = [None] * (full + 1)
        bests = [None] * (full + 1)
        worsts = [None] * (full + 1)
        for x in range(1, full + 1):
            bests[x] = min((a for a in range(m) if (x >> a) & 1), key=pos.__getitem__)
            worsts[x] = max((a for a in range(m) if (x >> a) & 1), key=pos.__getitem__)
            half[x] = ds._half_lottery(ballot, x)
        for x in range(1, full + 1):
            t_row = 0
            d_row = 0
            for y in range(1, full + 1):
                if pos[bests[y]] < pos[bests[x]] or pos[worsts[y]] < pos[worsts[x]]:
                    t_row |= 1 << y
                if not ds.fosd_ge(half[x], half[y], ballot):
                    d_row |= 1 << y
            t_rows[x] = t_row
            d_rows[x] = d_row
        tay_bits.append(tuple(t_rows))
        ds_bits.append(tuple(d_rows))

    return _Env(
        n=n,
        m=m,
        slots=slots,
        base=full,  # 2^m - 1 nonempty sets
        full=full,
        prof_tops=tuple(prof_tops),
        pair_groups=tuple(pair_groups),
        tay_bits=tuple(tay_bits),
        ds_bits=tuple(ds_bits),
        singleton_masks=tuple(1 << a for a in range(m)),
    )


def _has_violation(table: tuple[int, ...], bits, env: _Env) -> bool:
    if env.n == 1:
        used = 0
        for mask in table:
            used |= 1 << mask
        # with one voter, profile index = ballot rank and deviations span
        # the whole profile space
        for p, mask in enumerate(table):
            if bits[p][mask] & used:
                return True
        return False
    for p, r, qs in env.pair_groups:
        row = bits[r][table[p]]
        if row:
            for q in qs:
                if (row >> table[q]) & 1:
                    return True
    return False


def _is_onto(table: tuple[int, ...], env: _Env) -> bool:
    for sm in env.singleton_masks:
        if sm not in table:
            return False
    return True


def _has_weak_dictator(table: tuple[int, ...], env: _Env) -> bool:
    tops = env.prof_tops
    for voter in range(env.n):
        if all((table[p] >> tops[p][voter]) & 1 for p in range(env.slots)):
            return True
    return False


# ---------------------------------------------------------------------------
# Chunked scanning

def _encode(table: tuple[int, ...]) -> str:
    return ".".join(str(mask - 1) for mask in table)


def _new_chunk_result() -> dict:
    return {
        "counts": {bucket: 0 for bucket in BUCKETS},
        "counts_by_source": {},
        "taylor_violations": [],
        "equivalence_violations": [],
        "forward_violations": [],
        "forward_selected": 0,
        "forward_manipulable": 0,
        "witnesses_emitted": 0,
        "witnesses_passed": 0,
    }


def _scan_tables(
    env: _Env,
    entries: Iterable[tuple[int, tuple[int, ...], str]],
    check_taylor: bool,
    check_equiv: bool,
    forward_set: frozenset[int],
    model_seeds: tuple[int, ...],
) -> dict:
    out = _new_chunk_result()
    counts = out["counts"]
    by_source = out["counts_by_source"]
    tay_bits = env.tay_bits
    ds_bits = env.ds_bits

    for gidx, table, source in entries:
        manipulable = _has_violation(table, tay_bits, env)
        onto = _is_onto(table, env)
        if not onto:
            bucket = NOT_ONTO
        elif manipulable:
            bucket = MANIPULABLE
        elif _has_weak_dictator(table, env):
            bucket = SP_WITH_DICTATOR
        else:
            bucket = SP_NO_DICTATOR
            if check_taylor:
                out["taylor_violations"].append(
                    {"index": gidx, "encoding": _encode(table)}
                )
        counts[bucket] += 1
        if source:
            by_source.setdefault(source, {b: 0 for b in BUCKETS})[bucket] += 1

        if check_equiv:
            eu_manipulable = _has_violation(table, ds_bits, env)
            if eu_manipulable != manipulable:
                out["equivalence_violations"].append(
                    {
                        "index": gidx,
                        "encoding": _encode(table),
                        "kind": "half-half",
                        "taylor": manipulable,
                        "ds_half": eu_manipulable,
                    }
                )
            if gidx in forward_set:
                out["forward_selected"] += 1
                if manipulable:
                    out["forward_manipulable"] += 1
                    _forward_checks(env, gidx, table, model_seeds, out)
    return out


def _forward_checks(
    env: _Env,
    gidx: int,
    table: tuple[int, ...],
    model_seeds: tuple[int, ...],
    out: dict,
) -> None:
    """Witness-level rechecks for one manipulable table: the reference
    deciders must find (and validate) witnesses under the half-half model and
    under every seeded random model."""
    f = Scc.from_table(env.n, env.m, table)

    tw = find_any_taylor_manipulation(f)
    if tw is None:
        out["equivalence_violations"].append(
            {"index": gidx, "encoding": _encode(table), "kind": "fast-path-disagreement"}
        )
    else:
        out["witnesses_emitted"] += 1
        if validate_taylor_witness(f, tw):
            out["witnesses_passed"] += 1

    models = [ds.ProbabilityModel.half_half()]
    models += [ds.ProbabilityModel.seeded(s) for s in model_seeds]
    for model in models:
        witness = ds.ds_strategy_proof_given(f, model)
        if witness is None:
            record = {"index": gidx, "encoding": _encode(table), "model": model.kind}
            if model.kind == "random":
                record["model_seed"] = model.seed
            if model.kind == "half":
                record["kind"] = "half-half-witness-missing"
                out["equivalence_violations"].append(record)
            else:
                out["forward_violations"].append(record)
            continue
        out["witnesses_emitted"] += 1
        if ds.validate_ds_witness(f, model, witness):
            out["witnesses_passed"] += 1


def _scan_exhaustive_chunk(args) -> dict:
    n, m, start, stop, check_taylor, check_equiv, forward, model_seeds = args
    env = _env(n, m)
    entries = (
        (idx, _table_at(idx, env.slots, env.base), "")
        for idx in range(start, stop)
    )
    return _scan_tables(
        env, entries, check_taylor, check_equiv, frozenset(forward), model_seeds
    )


def _scan_list_chunk(args) -> dict:
    n, m, start, tables, sources, check_taylor, check_equiv, forward, model_seeds = args
    env = _env(n, m)
    entries = (
        (start + i, table, sources[i])
        for i, table in enumerate(tables)
    )
    return _scan_tables(
        env, entries, check_taylor, check_equiv, frozenset(forward), model_seeds
    )


def _merge_chunks(results: list[dict]) -> dict:
    merged = _new_chunk_result()
    for res in results:
        for bucket, c in res["counts"].items():
            merged["counts"][bucket] += c
        for source, counts in res["counts_by_source"].items():
            target = merged["counts_by_source"].setdefault(
                source, {b: 0 for b in BUCKETS}
            )
            for bucket, c in counts.items():
                target[bucket] += c
        for key in ("taylor_violations", "equivalence_violations", "forward_violations"):
            merged[key].extend(res[key])
        for key in (
            "forward_selected",
            "forward_manipulable",
            "witnesses_emitted",
            "witnesses_passed",
        ):
            merged[key] += res[key]
    return merged


def _run_chunks(chunk_args: list, worker, jobs: int) -> dict:
    if jobs > 1 and len(chunk_args) > 1:
        try:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(worker, chunk_args))
            return _merge_chunks(results)
        except (OSError, PermissionError):
            pass  # restricted environments: fall through to in-process chunks
    return _merge_chunks([worker(args) for args in chunk_args])


# ---------------------------------------------------------------------------
# Reports

@dataclass
class VerificationReport:
    n: int
    m: int
    mode: dict
    checks: tuple[str, ...]
    checked: int
    histogram: dict
    taylor_violations: list = field(default_factory=list)
    equivalence_violations: list = field(default_factory=list)
    forward_violations: list = field(default_factory=list)
    histogram_by_source: dict | None = None
    fixtures: list | None = None
    forward: dict | None = None
    witness_checks: dict = field(default_factory=lambda: {"emitted": 0, "passed": 0})
    model_count: int = 0
    seed: int = 0
    jobs: int = 1
    elapsed: float = 0.0

    def to_json_dict(self, include_elapsed: bool = True) -> dict:
        out = {
            "scope": {"n": self.n, "m": self.m, "mode": self.mode},
            "checks": list(self.checks),
            "checked": self.checked,
            "histogram": self.histogram,
            "taylor_violations": self.taylor_violations,
            "equivalence_violations": self.equivalence_violations,
            "forward_violations": self.forward_violations,
            "witness_checks": self.witness_checks,
            "model_count": self.model_count,
            "seed": self.seed,
        }
        if self.histogram_by_source is not None:
            out["histogram_by_source"] = self.histogram_by_source
        if self.fixtures is not None:
            out["fixtures"] = self.fixtures
        if self.forward is not None:
            out["forward"] = self.forward
        if include_elapsed:
            out["elapsed"] = self.elapsed
        return out

    @property
    def ok(self) -> bool:
        return not (
            self.taylor_violations
            or self.equivalence_violations
            or self.forward_violations
        )


def _model_seeds(seed: int, model_count: int) -> tuple[int, ...]:
    return tuple((seed << 16) + k for k in range(model_count))


def _fixture_records(n: int, m: int) -> tuple[list, int, int]:
    """Reference-decider reports for every fixture, with validated witnesses."""
    from .manipulation import check_taylor_hypotheses
    from .io import default_names, taylor_witness_json, ds_witness_json

    names = default_names(m)
    records = []
    emitted = 0
    passed = 0
    half = ds.ProbabilityModel.half_half()
    for name, f in fixture_sccs(n, m):
        report = check_taylor_hypotheses(f)
        ds_witness = ds.ds_strategy_proof_given(f, half)
        record = {
            "name": name,
            "onto": report.onto,
            "spo": report.spo,
            "spp": report.spp,
            "weak_dictators": sorted(report.weak_dictators),
            "classification": (
                NOT_ONTO
                if not report.onto
                else MANIPULABLE
                if not (report.spo and report.spp)
                else SP_WITH_DICTATOR
                if report.weak_dictators
                else SP_NO_DICTATOR
            ),
            "taylor_witness": None,
            "ds_half_witness": None,
        }
        witness = report.optimist_witness or report.pessimist_witness
        if witness is not None:
            emitted += 1
            if validate_taylor_witness(f, witness):
                passed += 1
            record["taylor_witness"] = taylor_witness_json(witness, names)
        if ds_witness is not None:
            emitted += 1
            if ds.validate_ds_witness(f, half, ds_witness):
                passed += 1
            record["ds_half_witness"] = ds_witness_json(ds_witness, names)
        records.append(record)
    return records, emitted, passed


def _run(
    n: int,
    m: int,
    mode,
    check_taylor: bool,
    check_equiv: bool,
    model_count: int,
    seed: int,
    jobs: int,
    forward_subsample: int,
) -> VerificationReport:
    t0 = time.perf_counter()
    env = _env(n, m)
    model_seeds = _model_seeds(seed, model_count) if check_equiv else ()

    if isinstance(mode, Exhaustive):
        total = table_space_size(n, m)
        if total > ENUMERATION_LIMIT:
            raise ValueError(
                f"table space for n={n}, m={m} has {total} entries, "
                f"above the enumeration limit {ENUMERATION_LIMIT}"
            )
        forward: tuple[int, ...] = ()
        if check_equiv and forward_subsample:
            k = min(forward_subsample, total)
            forward = tuple(sorted(random.Random(f"forward:{seed}").sample(range(total), k)))
        n_chunks = max(jobs, 1)
        bounds = [total * i // n_chunks for i in range(n_chunks + 1)]
        chunk_args = [
            (
                n,
                m,
                bounds[i],
                bounds[i + 1],
                check_taylor,
                check_equiv,
                tuple(x for x in forward if bounds[i] <= x < bounds[i + 1]),
                model_seeds,
            )
            for i in range(n_chunks)
        ]
        merged = _run_chunks(chunk_args, _scan_exhaustive_chunk, jobs)
        checked = total
        by_source = None
        fixtures = None
        fix_emitted = fix_passed = 0
    elif isinstance(mode, Sample):
        stream: list[tuple[tuple[int, ...], str]] = []
        for _, f in fixture_sccs(n, m):
            stream.append((full_table(f), "fixture"))
        for f in sample_sccs(n, m, mode.count, mode.seed):
            stream.append((f.table, "uniform"))
        if mode.mutated:
            bases = [Scc.dictatorial(n, m, 0), Scc.omninomination(n, m)]
            per_base = [mode.mutated // len(bases)] * len(bases)
            per_base[0] += mode.mutated - sum(per_base)
            for which, base in enumerate(bases):
                for f in mutate_fixture_sccs(
                    base, per_base[which], mode.seed + which, mode.mutate_flips
                ):
                    stream.append((f.table, "mutated"))
        total = len(stream)
        forward = ()
        if check_equiv and forward_subsample:
            k = min(forward_subsample, total)
            forward = tuple(sorted(random.Random(f"forward:{seed}").sample(range(total), k)))
        n_chunks = max(jobs, 1)
        bounds = [total * i // n_chunks for i in range(n_chunks + 1)]
        chunk_args = [
            (
                n,
                m,
                bounds[i],
                [t for t, _ in stream[bounds[i] : bounds[i + 1]]],
                [s for _, s in stream[bounds[i] : bounds[i + 1]]],
                check_taylor,
                check_equiv,
                tuple(x for x in forward if bounds[i] <= x < bounds[i + 1]),
                model_seeds,
            )
            for i in range(n_chunks)
        ]
        merged = _run_chunks(chunk_args, _scan_list_chunk, jobs)
        checked = total
        by_source = merged["counts_by_source"]
        fixtures, fix_emitted, fix_passed = _fixture_records(n, m)
    else:
        raise TypeError(f"unknown mode {mode!r}")

    checks = tuple(
        name
        for name, flag in (("taylor", check_taylor), ("equivalence", check_equiv))
        if flag
    )
    report = VerificationReport(
        n=n,
        m=m,
        mode=mode.describe(),
        checks=checks,
        checked=checked,
        histogram=merged["counts"],
        taylor_violations=merged["taylor_violations"],
        equivalence_violations=merged["equivalence_violations"],
        forward_violations=merged["forward_violations"],
        histogram_by_source=by_source,
        fixtures=fixtures,
        forward=(
            {
                "subsample": merged["forward_selected"],
                "manipulable": merged["forward_manipulable"],
                "models": model_count,
            }
            if check_equiv
            else None
        ),
        witness_checks={
            "emitted": merged["witnesses_emitted"] + fix_emitted,
            "passed": merged["witnesses_passed"] + fix_passed,
        },
        model_count=model_count,
        seed=seed,
        jobs=jobs,
        elapsed=time.perf_counter() - t0,
    )
    return report


def verify_taylor(n: int, m: int, mode, jobs: int = 1) -> VerificationReport:
    """Assert the weak-dictator conclusion over a correspondence space.

    Every onto table that survives both the optimist and the pessimist scan
    must have a weak dictator; survivors without one land in
    taylor_violations (expected empty for m >= 3).
    """
    if m < 3:
        raise ValueError("the weak-dictator theorem needs at least 3 alternatives")
    return _run(
        n, m, mode,
        check_taylor=True, check_equiv=False,
        model_count=0, seed=0, jobs=jobs, forward_subsample=0,
    )


def verify_equivalence(
    n: int,
    m: int,
    mode,
    model_count: int = 3,
    seed: int = 0,
    jobs: int = 1,
    forward_subsample: int = 1000,
) -> VerificationReport:
    """Cross-check the two manipulability notions over a correspondence space.

    For every table, optimist-or-pessimist manipulability must coincide with
    the existence of an expected-utility witness under the half-half model.
    On a seeded subsample, every manipulable table must additionally yield a
    validated witness under the half-half model and under each of
    model_count seeded random models.
    """
    if m < 2:
        raise ValueError("equivalence checking needs at least 2 alternatives")
    return _run(
        n, m, mode,
        check_taylor=False, check_equiv=True,
        model_count=model_count, seed=seed, jobs=jobs,
        forward_subsample=forward_subsample,
    )


def run_verification(
    n: int,
    m: int,
    mode,
    model_count: int = 3,
    seed: int = 0,
    jobs: int = 1,
    forward_subsample: int = 1000,
) -> VerificationReport:
    """Both checks in one scan (the theorem check needs m >= 3)."""
    return _run(
        n, m, mode,
        check_taylor=m >= 3, check_equiv=True,
        model_count=model_count, seed=seed, jobs=jobs,
        forward_subsample=forward_subsample,
    )
