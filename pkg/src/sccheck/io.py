"""JSON file format for correspondences and witness serialization.

A correspondence file names its alternatives (order defines the integer ids),
states the voter count, and carries either a built-in rule reference or an
explicit table. Table keys are human-readable profiles: ballots joined by
"|", each ballot all alternative names joined by ">", e.g. "a>b>c|b>a>c".
Rationals serialize as "num/den" strings (denominator omitted when 1) so that
strict inequalities survive a round trip.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    Ballot,
    Profile,
    Scc,
    all_profiles,
    full_table,
    mask_members,
)
from .ds import DsWitness
from .manipulation import TaylorManipulation


class SccFileError(ValueError):
    """A correspondence file failed to parse or validate."""


RULE_NAMES = (
    "constant",
    "dictatorial",
    "omninomination",
    "plurality-ties",
    "borda-set",
    "pareto-set",
)


def default_names(m: int) -> tuple[str, ...]:
    if m > 26:
        raise ValueError("default names cover at most 26 alternatives")
    return tuple(string.ascii_lowercase[:m])


def frac_str(x: Fraction) -> str:
    return str(Fraction(x))


def parse_frac(s: str) -> Fraction:
    return Fraction(s)


def ballot_str(ballot: Ballot, names) -> str:
    return ">".join(names[a] for a in ballot.ranking)


def profile_key(profile: Profile, names) -> str:
    return "|".join(ballot_str(b, names) for b in profile.ballots)


def mask_names(mask: int, names) -> list[str]:
    return [names[a] for a in mask_members(mask)]


def _parse_ballot(s: str, ids: dict[str, int], key: str) -> Ballot:
    parts = s.split(">")
    ranking = []
    for name in parts:
        if name not in ids:
            raise SccFileError(f"unknown alternative name {name!r} in profile key {key!r}")
        ranking.append(ids[name])
    try:
        return Ballot(ranking)
    except ValueError as exc:
        raise SccFileError(f"bad ballot {s!r} in profile key {key!r}: {exc}") from exc


def parse_profile_key(key: str, ids: dict[str, int], n: int) -> Profile:
    ballots = [_parse_ballot(part, ids, key) for part in key.split("|")]
    if len(ballots) != n:
        raise SccFileError(f"profile key {key!r} has {len(ballots)} ballots, expected {n}")
    return Profile(ballots)


def taylor_witness_json(w: TaylorManipulation, names) -> dict:
    return {
        "type": "taylor",
        "mode": w.mode,
        "voter": w.voter,
        "sincere_profile": profile_key(w.sincere, names),
        "deviation_ballot": ballot_str(w.deviation_ballot, names),
        "sincere_set": mask_names(w.sincere_set, names),
        "deviation_set": mask_names(w.deviation_set, names),
    }


def ds_witness_json(w: DsWitness, names) -> dict:
    return {
        "type": "expected-utility",
        "voter": w.voter,
        "sincere_profile": profile_key(w.sincere, names),
        "deviation_ballot": ballot_str(w.deviation_ballot, names),
        "utility": {names[a]: frac_str(v) for a, v in enumerate(w.utility.values)},
        "eu_sincere": frac_str(w.eu_sincere),
        "eu_deviate": frac_str(w.eu_deviate),
        "epsilon": frac_str(w.epsilon),
        "delta": frac_str(w.delta),
    }


# ---------------------------------------------------------------------------
# Correspondence files

@dataclass(frozen=True)
class NamedScc:
    scc: Scc
    names: tuple[str, ...]


def _load_rule(rule: dict, n: int, m: int, ids: dict[str, int]) -> Scc:
    if not isinstance(rule, dict) or "name" not in rule:
        raise SccFileError("rule must be an object with a 'name' field")
    name = rule["name"]
    if name == "constant":
        alt = rule.get("alternative")
        if alt not in ids:
            raise SccFileError(f"constant rule needs a known 'alternative', got {alt!r}")
        return Scc.constant(n, m, ids[alt])
    if name == "dictatorial":
        voter = rule.get("voter")
        if not isinstance(voter, int) or not 0 <= voter < n:
            raise SccFileError(f"dictatorial rule needs a voter in 0..{n - 1}, got {voter!r}")
        return Scc.dictatorial(n, m, voter)
    if name == "omninomination":
        return Scc.omninomination(n, m)
    if name == "plurality-ties":
        return Scc.plurality_ties(n, m)
    if name == "borda-set":
        return Scc.borda_set(n, m)
    if name == "pareto-set":
        return Scc.pareto_set(n, m)
    raise SccFileError(f"unknown rule name {name!r} (known: {', '.join(RULE_NAMES)})")


def _load_table(table: dict, n: int, m: int, names, ids: dict[str, int]) -> Scc:
    if not isinstance(table, dict):
        raise SccFileError("table must be an object mapping profile keys to outcome lists")
    expected_keys = [profile_key(p, names) for p in all_profiles(n, m)]
    missing = [k for k in expected_keys if k not in table]
    if missing:
        shown = ", ".join(repr(k) for k in missing[:10])
        more = f" (+{len(missing) - 10} more)" if len(missing) > 10 else ""
        raise SccFileError(f"table is missing {len(missing)} profile keys: {shown}{more}")
    unknown = [k for k in table if k not in set(expected_keys)]
    if unknown:
        raise SccFileError(f"table has unknown profile key {unknown[0]!r}")

    entries = []
    for key in expected_keys:
        outcome = table[key]
        if not isinstance(outcome, list) or not outcome:
            raise SccFileError(f"empty or invalid outcome list at profile key {key!r}")
        mask = 0
        for name in outcome:
            if name not in ids:
                raise SccFileError(f"unknown alternative name {name!r} at profile key {key!r}")
            mask |= 1 << ids[name]
        entries.append(mask)
    return Scc.from_table(n, m, entries)


def load_scc(path) -> NamedScc:
    """Load a correspondence file; see the module docstring for the format."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SccFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SccFileError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise SccFileError("top level must be an object")

    alternatives = data.get("alternatives")
    if (
        not isinstance(alternatives, list)
        or not alternatives
        or not all(isinstance(a, str) and a for a in alternatives)
        or len(set(alternatives)) != len(alternatives)
    ):
        raise SccFileError("'alternatives' must be a nonempty list of distinct names")
    for name in alternatives:
        if ">" in name or "|" in name:
            raise SccFileError(f"alternative name {name!r} may not contain '>' or '|'")
    voters = data.get("voters")
    if not isinstance(voters, int) or voters < 1:
        raise SccFileError("'voters' must be a positive integer")

    names = tuple(alternatives)
    ids = {a: i for i, a in enumerate(names)}
    n, m = voters, len(names)

    has_rule = "rule" in data and data["rule"] is not None
    has_table = "table" in data and data["table"] is not None
    if has_rule == has_table:
        raise SccFileError("exactly one of 'rule' and 'table' must be present")
    if has_rule:
        scc = _load_rule(data["rule"], n, m, ids)
    else:
        scc = _load_table(data["table"], n, m, names, ids)
    return NamedScc(scc=scc, names=names)


def scc_to_json_dict(f: Scc, names=None) -> dict:
    names = tuple(names) if names is not None else default_names(f.m)
    data: dict = {"alternatives": list(names), "voters": f.n}
    if f.kind == "table":
        table = {}
        for profile, mask in zip(all_profiles(f.n, f.m), full_table(f)):
            table[profile_key(profile, names)] = mask_names(mask, names)
        data["table"] = table
    elif f.kind == "constant":
        data["rule"] = {"name": "constant", "alternative": names[f.param]}
    elif f.kind == "dictatorial":
        data["rule"] = {"name": "dictatorial", "voter": f.param}
    else:
        data["rule"] = {"name": f.kind}
    return data


def save_scc(f: Scc, path, names=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scc_to_json_dict(f, names), fh, indent=2)
        fh.write("\n")
