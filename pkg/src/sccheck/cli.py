"""Command-line front end.

Exit codes: 0 means the property holds (no witness found), 1 means a witness
or violation was found, 2 means the input was unusable. Results go to stdout
as JSON; errors go to stderr as a single JSON line.
"""

from __future__ import annotations

import json
import sys

import click

from . import ds as ds_mod
from .core import profile_decode
from .io import (
    NamedScc,
    SccFileError,
    default_names,
    ds_witness_json,
    load_scc,
    profile_key,
    taylor_witness_json,
)
from .manipulation import (
    OPTIMIST,
    PESSIMIST,
    find_any_taylor_manipulation,
    find_taylor_manipulation,
    onto_singleton_witnesses,
    weak_dictators,
)
from .verify import Exhaustive, Sample, decode_table, enumerate_sccs, encode_table, run_verification

PROPERTIES = ("spo", "spp", "onto", "weak-dictator", "taylor", "ds-half")


def _fail(reason: str, **detail) -> None:
    line = {"error": reason}
    line.update(detail)
    click.echo(json.dumps(line), err=True)
    sys.exit(2)


def _emit(payload: dict) -> None:
    click.echo(json.dumps(payload, indent=2))


def _load_input(path, encoding, voters, alternatives) -> NamedScc:
    if (path is None) == (encoding is None):
        _fail("exactly one of --file and --encoding is required")
    if path is not None:
        try:
            return load_scc(path)
        except SccFileError as exc:
            _fail(str(exc))
    if voters is None or alternatives is None:
        _fail("--encoding needs --voters and --alternatives")
    try:
        scc = decode_table(voters, alternatives, encoding)
    except ValueError as exc:
        _fail(str(exc))
    return NamedScc(scc=scc, names=default_names(alternatives))


@click.group()
def main():
    """Manipulability checks and desk-scale verification for set-valued
    voting rules."""


@main.command()
@click.option("--file", "path", type=click.Path(), help="Correspondence JSON file.")
@click.option("--encoding", help="Explicit table encoding, as emitted by enumerate/verify.")
@click.option("--voters", type=int, help="Voter count (with --encoding).")
@click.option("--alternatives", type=int, help="Alternative count (with --encoding).")
@click.option("--property", "prop", required=True,
              help="One of: " + ", ".join(PROPERTIES))
def check(path, encoding, voters, alternatives, prop):
    """Decide one property of a correspondence; print verdict and witness."""
    if prop not in PROPERTIES:
        _fail(f"unknown property {prop!r}", known=list(PROPERTIES))
    named = _load_input(path, encoding, voters, alternatives)
    f, names = named.scc, named.names

    if prop in ("spo", "spp"):
        mode = OPTIMIST if prop == "spo" else PESSIMIST
        witness = find_taylor_manipulation(f, mode)
        holds = witness is None
        _emit({
            "property": prop,
            "holds": holds,
            "witness": None if holds else taylor_witness_json(witness, names),
        })
        sys.exit(0 if holds else 1)

    if prop == "taylor":
        witness = find_any_taylor_manipulation(f)
        holds = witness is None
        _emit({
            "property": prop,
            "holds": holds,
            "witness": None if holds else taylor_witness_json(witness, names),
        })
        sys.exit(0 if holds else 1)

    if prop == "onto":
        witnesses = onto_singleton_witnesses(f)
        keyed = {
            names[a]: (
                None if idx is None else profile_key(profile_decode(idx, f.n, f.m), names)
            )
            for a, idx in enumerate(witnesses)
        }
        missing = [names[a] for a, idx in enumerate(witnesses) if idx is None]
        holds = not missing
        _emit({"property": prop, "holds": holds, "witnesses": keyed, "missing": missing})
        sys.exit(0 if holds else 1)

    if prop == "weak-dictator":
        dictators = sorted(weak_dictators(f))
        holds = bool(dictators)
        _emit({"property": prop, "holds": holds, "dictators": dictators})
        sys.exit(0 if holds else 1)

    if prop == "ds-half":
        witness = ds_mod.ds_strategy_proof_given(f, ds_mod.ProbabilityModel.half_half())
        holds = witness is None
        _emit({
            "property": prop,
            "holds": holds,
            "witness": None if holds else ds_witness_json(witness, names),
        })
        sys.exit(0 if holds else 1)

    raise AssertionError(prop)


@main.command()
@click.option("--file", "path", type=click.Path(), help="Correspondence JSON file.")
@click.option("--encoding", help="Explicit table encoding.")
@click.option("--voters", type=int)
@click.option("--alternatives", type=int)
@click.option("--model", default="half", help="half, uniform, or random.")
@click.option("--seed", type=int, default=0, help="Seed for the random model.")
def witness(path, encoding, voters, alternatives, model, seed):
    """Search for an expected-utility manipulation under one probability
    model; print the witness (utilities as exact rationals) or null."""
    if model not in ("half", "uniform", "random"):
        _fail(f"unknown model {model!r}", known=["half", "uniform", "random"])
    named = _load_input(path, encoding, voters, alternatives)
    if model == "half":
        pm = ds_mod.ProbabilityModel.half_half()
    elif model == "uniform":
        pm = ds_mod.ProbabilityModel.uniform()
    else:
        pm = ds_mod.ProbabilityModel.seeded(seed)
    try:
        found = ds_mod.ds_strategy_proof_given(named.scc, pm)
    except ds_mod.ModelInvalidError as exc:
        _fail(str(exc))
    payload = {
        "model": model,
        "seed": seed if model == "random" else None,
        "witness": None if found is None else ds_witness_json(found, named.names),
    }
    _emit(payload)
    sys.exit(0 if found is None else 1)


@main.command()
@click.option("--voters", type=int, required=True)
@click.option("--alternatives", type=int, required=True)
@click.option("--mode", required=True, help="exhaustive or sample.")
@click.option("--count", type=int, default=1000, help="Uniform samples (sample mode).")
@click.option("--mutated", type=int, default=0, help="Mutation-biased samples (sample mode).")
@click.option("--seed", type=int, default=0)
@click.option("--models", type=int, default=3, help="Random models for forward witness checks.")
@click.option("--jobs", type=int, default=1)
@click.option("--forward", type=int, default=1000, help="Forward-check subsample size.")
def verify(voters, alternatives, mode, count, mutated, seed, models, jobs, forward):
    """Scan a correspondence space; print a verification report as JSON."""
    if mode == "exhaustive":
        scope = Exhaustive()
    elif mode == "sample":
        scope = Sample(count=count, seed=seed, mutated=mutated)
    else:
        _fail(f"unknown mode {mode!r}", known=["exhaustive", "sample"])
    try:
        report = run_verification(
            voters, alternatives, scope,
            model_count=models, seed=seed, jobs=jobs, forward_subsample=forward,
        )
    except ValueError as exc:
        _fail(str(exc))
    _emit(report.to_json_dict())
    sys.exit(0 if report.ok else 1)


@main.command(name="enumerate")
@click.option("--voters", type=int, required=True)
@click.option("--alternatives", type=int, required=True)
@click.option("--limit", type=int, default=100, help="Stop after this many tables.")
def enumerate_tables(voters, alternatives, limit):
    """Stream explicit-table encodings in canonical counter order."""
    try:
        stream = enumerate_sccs(voters, alternatives)
        for _, f in zip(range(limit), stream):
            click.echo(encode_table(f))
    except ValueError as exc:
        _fail(str(exc))
    sys.exit(0)


if __name__ == "__main__":
    main()
