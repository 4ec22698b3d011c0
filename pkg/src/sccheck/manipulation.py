"""Manipulability of set-valued rules by optimists and pessimists.

An optimist compares outcome sets by their best element, a pessimist by their
worst, both judged by the voter's sincere ballot. A rule is strategy-proof for
optimists (SPO) when no misreport ever yields a set with a strictly better
best element, and strategy-proof for pessimists (SPP) dually for the worst.
Every decider here returns a replayable witness when the property fails.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    Ballot,
    Profile,
    Scc,
    all_ballots,
    all_profiles,
    best,
    worst,
)

OPTIMIST = "optimist"
PESSIMIST = "pessimist"
MODES = (OPTIMIST, PESSIMIST)


@dataclass(frozen=True)
class TaylorManipulation:
    """A successful misreport for an optimist or a pessimist.

    The deviation profile is the sincere one with this voter's ballot replaced
    by deviation_ballot. Under mode "optimist" the deviation set's best element
    is strictly preferred (by the sincere ballot) to the sincere set's best;
    under "pessimist" the same holds for the worst elements.
    """

    voter: int
    sincere: Profile
    deviation_ballot: Ballot
    sincere_set: int
    deviation_set: int
    mode: str

    def deviation_profile(self) -> Profile:
        return self.sincere.with_ballot(self.voter, self.deviation_ballot)


def _is_violation(mode: str, ballot: Ballot, x: int, y: int) -> bool:
    # strict improvement of the relevant extreme, judged by the sincere ballot
    if mode == OPTIMIST:
        return ballot.position[best(ballot, y)] < ballot.position[best(ballot, x)]
    if mode == PESSIMIST:
        return ballot.position[worst(ballot, y)] < ballot.position[worst(ballot, x)]
    raise ValueError(f"unknown mode {mode!r}")


def find_taylor_manipulation(f: Scc, mode: str) -> TaylorManipulation | None:
    """First manipulation in canonical order, or None if f is SPO/SPP.

    Scans voters ascending, sincere profiles by canonical index, deviation
    ballots by rank. Misreports equal to the sincere ballot are included; they
    can never register since a violation must be strict.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    ballots = all_ballots(f.m)
    for voter in range(f.n):
        for profile in all_profiles(f.n, f.m):
            sincere_ballot = profile.ballots[voter]
            x = f.evaluate(profile)
            for deviation in ballots:
                y = f.evaluate(profile.with_ballot(voter, deviation))
                if _is_violation(mode, sincere_ballot, x, y):
                    return TaylorManipulation(
                        voter=voter,
                        sincere=profile,
                        deviation_ballot=deviation,
                        sincere_set=x,
                        deviation_set=y,
                        mode=mode,
                    )
    return None


def find_any_taylor_manipulation(f: Scc) -> TaylorManipulation | None:
    """First manipulation in either mode, optimist checked first at each step."""
    ballots = all_ballots(f.m)
    for voter in range(f.n):
        for profile in all_profiles(f.n, f.m):
            sincere_ballot = profile.ballots[voter]
            x = f.evaluate(profile)
            for deviation in ballots:
                y = f.evaluate(profile.with_ballot(voter, deviation))
                for mode in MODES:
                    if _is_violation(mode, sincere_ballot, x, y):
                        return TaylorManipulation(
                            voter=voter,
                            sincere=profile,
                            deviation_ballot=deviation,
                            sincere_set=x,
                            deviation_set=y,
                            mode=mode,
                        )
    return None


def onto_singleton_witnesses(f: Scc) -> list[int | None]:
    """Per alternative, the first profile index where the outcome is exactly
    that singleton, or None if there is no such profile."""
    witnesses: list[int | None] = [None] * f.m
    remaining = f.m
    for idx, profile in enumerate(all_profiles(f.n, f.m)):
        mask = f.evaluate(profile)
        if mask & (mask - 1) == 0:  # singleton
            a = mask.bit_length() - 1
            if witnesses[a] is None:
                witnesses[a] = idx
                remaining -= 1
                if remaining == 0:
                    break
    return witnesses


def is_onto_singletons(f: Scc) -> bool:
    """True iff every alternative is the exact output at some profile."""
    return all(w is not None for w in onto_singleton_witnesses(f))


def weak_dictators(f: Scc) -> frozenset[int]:
    """Voters whose top choice is contained in the outcome at every profile."""
    candidates = set(range(f.n))
    for profile in all_profiles(f.n, f.m):
        mask = f.evaluate(profile)
        for voter in list(candidates):
            if not (mask >> profile.ballots[voter].top) & 1:
                candidates.discard(voter)
        if not candidates:
            break
    return frozenset(candidates)


@dataclass(frozen=True)
class HypothesisReport:
    """Joint report of the strategy-proofness and ontoness checks.

    theorem_violation is set only when m >= 3, the rule is onto with respect
    to singletons, SPO and SPP both hold, and yet no weak dictator exists.
    """

    spo: bool
    spp: bool
    onto: bool
    weak_dictators: frozenset[int]
    theorem_violation: bool
    optimist_witness: TaylorManipulation | None = None
    pessimist_witness: TaylorManipulation | None = None


def check_taylor_hypotheses(f: Scc) -> HypothesisReport:
    """Run all three deciders plus the weak-dictator scan on one rule."""
    opt = find_taylor_manipulation(f, OPTIMIST)
    pess = find_taylor_manipulation(f, PESSIMIST)
    onto = is_onto_singletons(f)
    dictators = weak_dictators(f)
    spo = opt is None
    spp = pess is None
    violation = f.m >= 3 and spo and spp and onto and not dictators
    return HypothesisReport(
        spo=spo,
        spp=spp,
        onto=onto,
        weak_dictators=dictators,
        theorem_violation=violation,
        optimist_witness=opt,
        pessimist_witness=pess,
    )


def validate_taylor_witness(f: Scc, w: TaylorManipulation) -> bool:
    """Independently re-check a manipulation witness against the rule.

    Recomputes both outcome sets from f, confirms the stored sets match, and
    re-judges the strict best/worst improvement from the sincere ballot.
    """
    if not 0 <= w.voter < f.n:
        return False
    if w.mode not in MODES:
        return False
    deviation = w.deviation_profile()
    # deviation profile must differ from the sincere one only at this voter
    for v in range(f.n):
        if v != w.voter and deviation.ballots[v] != w.sincere.ballots[v]:
            return False
    x = f.evaluate(w.sincere)
    y = f.evaluate(deviation)
    if x != w.sincere_set or y != w.deviation_set:
        return False
    ballot = w.sincere.ballots[w.voter]
    extreme = best if w.mode == OPTIMIST else worst
    ex, ey = extreme(ballot, x), extreme(ballot, y)
    if not ((x >> ex) & 1 and (y >> ey) & 1):
        return False
    return ballot.position[ey] < ballot.position[ex]
