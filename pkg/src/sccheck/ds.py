"""Expected-utility manipulability of set-valued rules.

Each voter carries a probability function assigning a lottery over every
outcome set, with strictly positive mass on the set's best and worst elements
by that voter's sincere ballot. A rule is strategy-proof for a fixed family of
such lotteries when no misreport raises expected utility under any cardinal
utility consistent with the sincere ballot (strictly decreasing along it).

The universal quantifier over consistent utilities is decided exactly: the
sincere lottery weakly beats the deviation lottery under every consistent
utility iff it first-order stochastically dominates it with respect to the
ballot. All probabilities and utilities on the decision path are Fractions,
so strict-inequality verdicts never hinge on rounding.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    Ballot,
    Profile,
    Scc,
    all_ballots,
    all_profiles,
    best,
    mask_members,
    profile_index,
    worst,
)

MODEL_KINDS = ("half", "uniform", "random")


class ModelInvalidError(ValueError):
    """A probability model produced a lottery violating its contract."""


@dataclass(frozen=True, eq=True)
class Lottery:
    """A probability distribution over alternatives, stored as exact Fractions."""

    probs: tuple[tuple[int, Fraction], ...]  # (alternative, probability), ascending

    @classmethod
    def from_dict(cls, probs: dict[int, Fraction]) -> "Lottery":
        items = tuple(sorted((a, Fraction(p)) for a, p in probs.items() if p != 0))
        return cls(probs=items)

    def prob(self, a: int) -> Fraction:
        for alt, p in self.probs:
            if alt == a:
                return p
        return Fraction(0)

    def support_mask(self) -> int:
        mask = 0
        for a, _ in self.probs:
            mask |= 1 << a
        return mask

    def total(self) -> Fraction:
        return sum((p for _, p in self.probs), Fraction(0))

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.probs)


@dataclass(frozen=True)
class ProbabilityModel:
    """A per-voter family of lotteries over outcome sets.

    half     - mass 1/2 on the set's best element and 1/2 on its worst
               (mass 1 when they coincide).
    uniform  - uniform over the set.
    random   - seeded integer weights, forced positive on best and worst;
               derived deterministically from (seed, voter, profile index,
               set mask), so no table is ever materialized.
    """

    kind: str
    seed: int = 0

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")

    @classmethod
    def half_half(cls) -> "ProbabilityModel":
        return cls(kind="half")

    @classmethod
    def uniform(cls) -> "ProbabilityModel":
        return cls(kind="uniform")

    @classmethod
    def seeded(cls, seed: int) -> "ProbabilityModel":
        return cls(kind="random", seed=seed)


def _half_lottery(ballot: Ballot, x: int) -> Lottery:
    b, w = best(ballot, x), worst(ballot, x)
    if b == w:
        return Lottery.from_dict({b: Fraction(1)})
    return Lottery.from_dict({b: Fraction(1, 2), w: Fraction(1, 2)})


def _uniform_lottery(x: int) -> Lottery:
    members = mask_members(x)
    share = Fraction(1, len(members))
    return Lottery.from_dict({a: share for a in members})


def _seeded_lottery(seed: int, voter: int, pidx: int, ballot: Ballot, x: int) -> Lottery:
    members = mask_members(x)
    rng = random.Random(f"{seed}:{voter}:{pidx}:{x}")
    weights = {a: rng.randint(0, 9) for a in members}
    # the contract requires strictly positive mass at the extremes
    weights[best(ballot, x)] = rng.randint(1, 10)
    weights[worst(ballot, x)] = max(weights[worst(ballot, x)], rng.randint(1, 10))
    total = sum(weights.values())
    return Lottery.from_dict({a: Fraction(w, total) for a, w in weights.items() if w})


def lottery_of(model: ProbabilityModel, voter: int, profile: Profile, x: int) -> Lottery:
    """The model's lottery over outcome set x for one voter at one profile.

    Validates the lottery before returning: it must sum to one, stay inside
    x, and put positive mass on the best and worst of x by the voter's ballot.
    """
    if x == 0:
        raise ValueError("lottery over an empty outcome set")
    ballot = profile.ballots[voter]
    if x > (1 << profile.m) - 1:
        raise ValueError(f"outcome set {x:#x} out of range for m={profile.m}")
    if model.kind == "half":
        lot = _half_lottery(ballot, x)
    elif model.kind == "uniform":
        lot = _uniform_lottery(x)
    else:
        lot = _seeded_lottery(model.seed, voter, profile_index(profile), ballot, x)
    _validate_lottery(lot, ballot, x)
    return lot


def _validate_lottery(lot: Lottery, ballot: Ballot, x: int) -> None:
    if lot.support_mask() & ~x:
        raise ModelInvalidError("lottery support leaves the outcome set")
    if lot.total() != 1:
        raise ModelInvalidError("lottery probabilities do not sum to 1")
    if any(p < 0 for _, p in lot.probs):
        raise ModelInvalidError("negative probability")
    if lot.prob(best(ballot, x)) <= 0 or lot.prob(worst(ballot, x)) <= 0:
        raise ModelInvalidError("zero mass on a best/worst extreme")


# ---------------------------------------------------------------------------
# Utilities and expected utility

@dataclass(frozen=True)
class UtilityFunction:
    """Cardinal utilities per alternative, meant to decrease along a ballot."""

    values: tuple[Fraction, ...]

    @classmethod
    def from_values(cls, values) -> "UtilityFunction":
        return cls(values=tuple(Fraction(v) for v in values))

    def value(self, a: int) -> Fraction:
        return self.values[a]

    def is_consistent_with(self, ballot: Ballot) -> bool:
        """Strictly decreasing along the ballot's ranking."""
        ranked = [self.values[a] for a in ballot.ranking]
        return all(hi > lo for hi, lo in zip(ranked, ranked[1:]))


def expected_utility(lottery: Lottery, utility: UtilityFunction) -> Fraction:
    total = Fraction(0)
    for a, p in lottery.probs:
        if a >= len(utility.values):
            raise ValueError(f"lottery supports alternative {a} outside the utility domain")
        total += p * utility.values[a]
    return total


def fosd_ge(l1: Lottery, l2: Lottery, ballot: Ballot) -> bool:
    """First-order stochastic dominance of l1 over l2 w.r.t. the ballot.

    True iff l1 puts at least as much mass as l2 on every upper set
    {x : x ranked weakly above a}. Equivalent to l1 having weakly higher
    expected utility under every utility consistent with the ballot.
    """
    p1 = l1.as_dict()
    p2 = l2.as_dict()
    c1 = Fraction(0)
    c2 = Fraction(0)
    for a in ballot.ranking:
        c1 += p1.get(a, 0)
        c2 += p2.get(a, 0)
        if c1 < c2:
            return False
    return True


def exists_advantageous_utility(
    l_sincere: Lottery, l_deviate: Lottery, ballot: Ballot
) -> UtilityFunction | None:
    """A consistent utility under which the deviation lottery strictly wins.

    Exists iff the sincere lottery does not dominate the deviation lottery.
    Construction: take the most-violated upper set U, give value 1 on U and 0
    off it, then tilt everything by a rank-scaled increment small enough to
    keep the strict gap while making the values strictly decreasing.
    """
    p_sin = l_sincere.as_dict()
    p_dev = l_deviate.as_dict()
    m = ballot.m
    gap = Fraction(0)
    upper_len = None
    c_sin = Fraction(0)
    c_dev = Fraction(0)
    for depth, a in enumerate(ballot.ranking, start=1):
        c_sin += p_sin.get(a, 0)
        c_dev += p_dev.get(a, 0)
        if c_dev - c_sin > gap:
            gap = c_dev - c_sin
            upper_len = depth
    if upper_len is None:
        return None
    eta = gap / (4 * m)  # below gap/(2m), so the tilt cannot erase the gap
    values = [Fraction(0)] * m
    for rank, a in enumerate(ballot.ranking):
        base = Fraction(1) if rank < upper_len else Fraction(0)
        values[a] = base + eta * (m - rank)
    return UtilityFunction(values=tuple(values))


# ---------------------------------------------------------------------------
# Witness utilities from outcome-set extremes

def _base_values(ballot: Ballot) -> list[Fraction]:
    # strictly decreasing along the ballot, all in (0, 1]
    m = ballot.m
    values = [Fraction(0)] * m
    for rank, a in enumerate(ballot.ranking):
        values[a] = Fraction(m - rank, m)
    return values


def _boosted_utility(ballot: Ballot, b: int, boost: Fraction) -> UtilityFunction:
    # base ranking values plus a constant boost on everything weakly above b
    values = _base_values(ballot)
    cutoff = ballot.position[b]
    for rank, a in enumerate(ballot.ranking):
        if rank <= cutoff:
            values[a] += boost
    return UtilityFunction(values=tuple(values))


def optimist_witness(
    epsilon: Fraction, delta: Fraction, ballot: Ballot, x: int, y: int
) -> UtilityFunction:
    """A consistent utility making any lottery on y with mass >= delta at
    b = best(ballot, y) strictly beat any lottery on x.

    Requires b strictly preferred to best(ballot, x) and delta > 0. Everything
    weakly above b is boosted by 3/delta, so the deviation side earns at least
    3 while the sincere side can never exceed 1.
    """
    epsilon = Fraction(epsilon)
    delta = Fraction(delta)
    if not 0 < delta <= 1 or not 0 < epsilon <= 1:
        raise ValueError("extreme probabilities must lie in (0, 1]")
    a = best(ballot, x)
    b = best(ballot, y)
    if not ballot.prefers(b, a):
        raise ValueError("no optimist gain: best of y is not above best of x")
    return _boosted_utility(ballot, b, 3 / delta)


def pessimist_witness(
    epsilon: Fraction, delta: Fraction, ballot: Ballot, x: int, y: int
) -> UtilityFunction:
    """A consistent utility making any lottery on y strictly beat any lottery
    on x that puts mass epsilon on a = worst(ballot, x).

    Requires b = worst(ballot, y) strictly preferred to a. When b is weakly
    above c = best(ballot, x) a plain boost at b suffices. Otherwise c sits
    above b and gets pinned to (1/e + e + 2)/(1 - e) against b's
    (1/e + e + 1)/(1 - e) and a's 1, with every unpinned alternative
    interpolated strictly between its pinned neighbours.
    """
    epsilon = Fraction(epsilon)
    delta = Fraction(delta)
    if not 0 < epsilon <= 1 or not 0 < delta <= 1:
        raise ValueError("extreme probabilities must lie in (0, 1]")
    a = worst(ballot, x)
    b = worst(ballot, y)
    c = best(ballot, x)
    if not ballot.prefers(b, a):
        raise ValueError("no pessimist gain: worst of y is not above worst of x")
    if ballot.weakly_prefers(b, c):
        # every element of x sits weakly below b; lifting b clear of the whole
        # of x settles it
        return _boosted_utility(ballot, b, 3 / delta)
    if epsilon == 1:
        # the sincere lottery is a point mass on a, and b beats a outright
        return UtilityFunction(values=tuple(_base_values(ballot)))
    u_a = Fraction(1)
    u_b = (1 / epsilon + epsilon + 1) / (1 - epsilon)
    u_c = (1 / epsilon + epsilon + 2) / (1 - epsilon)
    ra, rb, rc = ballot.position[a], ballot.position[b], ballot.position[c]
    values = [Fraction(0)] * ballot.m
    for rank, alt in enumerate(ballot.ranking):
        if rank < rc:
            values[alt] = u_c + (rc - rank)
        elif rank == rc:
            values[alt] = u_c
        elif rank < rb:
            values[alt] = u_b + (u_c - u_b) * Fraction(rb - rank, rb - rc)
        elif rank == rb:
            values[alt] = u_b
        elif rank < ra:
            values[alt] = u_a + (u_b - u_a) * Fraction(ra - rank, ra - rb)
        elif rank == ra:
            values[alt] = u_a
        else:
            values[alt] = Fraction(1, rank - ra + 1)
    return UtilityFunction(values=tuple(values))


# ---------------------------------------------------------------------------
# The strategy-proofness decider for a fixed model

@dataclass(frozen=True)
class DsWitness:
    """A misreport plus a consistent utility with a strict expected-utility gap.

    epsilon and delta record the model's mass on the relevant extreme of the
    sincere and deviation sets (best pair when the best improves, worst pair
    when only the worst improves, best pair again for violations with no
    optimist/pessimist reading, which arise only under non-half models).
    """

    voter: int
    sincere: Profile
    deviation_ballot: Ballot
    utility: UtilityFunction
    eu_sincere: Fraction
    eu_deviate: Fraction
    epsilon: Fraction
    delta: Fraction


def _extreme_masses(
    ballot: Ballot, x: int, y: int, l_sin: Lottery, l_dev: Lottery
) -> tuple[Fraction, Fraction]:
    bx, by = best(ballot, x), best(ballot, y)
    wx, wy = worst(ballot, x), worst(ballot, y)
    if ballot.prefers(by, bx):
        return l_sin.prob(bx), l_dev.prob(by)
    if ballot.prefers(wy, wx):
        return l_sin.prob(wx), l_dev.prob(wy)
    return l_sin.prob(bx), l_dev.prob(by)


def ds_strategy_proof_given(f: Scc, model: ProbabilityModel) -> DsWitness | None:
    """First expected-utility manipulation under one fixed model, or None.

    Both lotteries are the model's lotteries at the sincere profile: one over
    the sincere outcome set, one over the deviation outcome set. A witness is
    returned as soon as the sincere lottery fails to dominate the deviation
    lottery, in the same canonical order the optimist/pessimist scan uses.
    """
    ballots = all_ballots(f.m)
    for voter in range(f.n):
        for profile in all_profiles(f.n, f.m):
            ballot = profile.ballots[voter]
            x = f.evaluate(profile)
            l_sin = lottery_of(model, voter, profile, x)
            for deviation in ballots:
                y = f.evaluate(profile.with_ballot(voter, deviation))
                if y == x:
                    continue  # identical lotteries, no strict gap possible
                l_dev = lottery_of(model, voter, profile, y)
                utility = exists_advantageous_utility(l_sin, l_dev, ballot)
                if utility is None:
                    continue
                eps, dlt = _extreme_masses(ballot, x, y, l_sin, l_dev)
                return DsWitness(
                    voter=voter,
                    sincere=profile,
                    deviation_ballot=deviation,
                    utility=utility,
                    eu_sincere=expected_utility(l_sin, utility),
                    eu_deviate=expected_utility(l_dev, utility),
                    epsilon=eps,
                    delta=dlt,
                )
    return None


def validate_ds_witness(f: Scc, model: ProbabilityModel, w: DsWitness) -> bool:
    """Independently re-check an expected-utility witness.

    Recomputes both outcome sets and lotteries from scratch, requires the
    utility to be strictly consistent with the sincere ballot, and re-derives
    both expected utilities in exact arithmetic, demanding a strict gap.
    """
    if not 0 <= w.voter < f.n:
        return False
    ballot = w.sincere.ballots[w.voter]
    if not w.utility.is_consistent_with(ballot):
        return False
    x = f.evaluate(w.sincere)
    y = f.evaluate(w.sincere.with_ballot(w.voter, w.deviation_ballot))
    l_sin = lottery_of(model, w.voter, w.sincere, x)
    l_dev = lottery_of(model, w.voter, w.sincere, y)
    eu_sin = expected_utility(l_sin, w.utility)
    eu_dev = expected_utility(l_dev, w.utility)
    if eu_sin != w.eu_sincere or eu_dev != w.eu_deviate:
        return False
    if not 0 < w.epsilon <= 1 or not 0 < w.delta <= 1:
        return False
    eps, dlt = _extreme_masses(ballot, x, y, l_sin, l_dev)
    if eps != w.epsilon or dlt != w.delta:
        return False
    return eu_dev > eu_sin
