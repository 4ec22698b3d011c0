"""Finite-domain primitives for set-valued voting rules.

Alternatives are integers 0..m-1. A ballot is a strict ranking (permutation)
of all alternatives, most preferred first. Outcome sets are bitmasks over the
m alternatives, so set operations stay cheap inside enumeration loops. Profiles
are one ballot per voter and are addressable by a canonical mixed-radix index
(voter 0 is the most significant digit, ballots ordered by lexicographic rank,
rank 0 = the identity ranking 0>1>...>m-1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator


class Ballot:
    """A strict linear order over alternatives 0..m-1, most preferred first."""

    __slots__ = ("ranking", "position")

    def __init__(self, ranking: Iterable[int]):
        ranking = tuple(ranking)
        m = len(ranking)
        if sorted(ranking) != list(range(m)):
            raise ValueError(f"ballot must be a permutation of 0..{m - 1}: {ranking!r}")
        self.ranking = ranking
        pos = [0] * m
        for r, a in enumerate(ranking):
            pos[a] = r
        self.position = tuple(pos)

    @property
    def m(self) -> int:
        return len(self.ranking)

    @property
    def top(self) -> int:
        return self.ranking[0]

    def rank_of(self, a: int) -> int:
        """0 for the most preferred alternative, m-1 for the least."""
        return self.position[a]

    def prefers(self, a: int, b: int) -> bool:
        """True iff a is ranked strictly above b."""
        return self.position[a] < self.position[b]

    def weakly_prefers(self, a: int, b: int) -> bool:
        return self.position[a] <= self.position[b]

    def __eq__(self, other) -> bool:
        return isinstance(other, Ballot) and self.ranking == other.ranking

    def __hash__(self) -> int:
        return hash(self.ranking)

    def __repr__(self) -> str:
        return f"Ballot({'>'.join(map(str, self.ranking))})"


@lru_cache(maxsize=None)
def all_ballots(m: int) -> tuple[Ballot, ...]:
    """All m! ballots in lexicographic (rank) order. Rank 0 is the identity."""
    if not 1 <= m <= 8:
        raise ValueError(f"ballot enumeration supported for 1 <= m <= 8, got {m}")
    return tuple(Ballot(p) for p in itertools.permutations(range(m)))


def ballot_rank(ballot: Ballot) -> int:
    """Lexicographic rank of the ballot among all m! permutations."""
    ranking = ballot.ranking
    m = len(ranking)
    rank = 0
    for i, a in enumerate(ranking):
        smaller_remaining = sum(1 for b in ranking[i + 1 :] if b < a)
        rank += smaller_remaining * factorial(m - 1 - i)
    return rank


def ballot_unrank(rank: int, m: int) -> Ballot:
    """Inverse of ballot_rank."""
    if not 0 <= rank < factorial(m):
        raise ValueError(f"ballot rank {rank} out of range for m={m}")
    available = list(range(m))
    ranking = []
    for i in range(m):
        f = factorial(m - 1 - i)
        idx, rank = divmod(rank, f)
        ranking.append(available.pop(idx))
    return Ballot(ranking)


class Profile:
    """One ballot per voter."""

    __slots__ = ("ballots",)

    def __init__(self, ballots: Iterable[Ballot]):
        ballots = tuple(ballots)
        if not ballots:
            raise ValueError("profile needs at least one voter")
        m = ballots[0].m
        if any(b.m != m for b in ballots):
            raise ValueError("all ballots in a profile must rank the same alternatives")
        self.ballots = ballots

    @property
    def n(self) -> int:
        return len(self.ballots)

    @property
    def m(self) -> int:
        return self.ballots[0].m

    def with_ballot(self, voter: int, ballot: Ballot) -> "Profile":
        """The profile obtained by replacing one voter's ballot."""
        if ballot.m != self.m:
            raise ValueError("replacement ballot has the wrong number of alternatives")
        ballots = list(self.ballots)
        ballots[voter] = ballot
        return Profile(ballots)

    def __eq__(self, other) -> bool:
        return isinstance(other, Profile) and self.ballots == other.ballots

    def __hash__(self) -> int:
        return hash(self.ballots)

    def __repr__(self) -> str:
        return f"Profile({', '.join(repr(b) for b in self.ballots)})"


def num_profiles(n: int, m: int) -> int:
    return factorial(m) ** n


def profile_index(profile: Profile) -> int:
    """Canonical index of a profile, voter 0 as the most significant digit."""
    fact = factorial(profile.m)
    idx = 0
    for ballot in profile.ballots:
        idx = idx * fact + ballot_rank(ballot)
    return idx


def profile_decode(idx: int, n: int, m: int) -> Profile:
    """Inverse of profile_index."""
    total = num_profiles(n, m)
    if not 0 <= idx < total:
        raise ValueError(f"profile index {idx} out of range for n={n}, m={m}")
    fact = factorial(m)
    ballots_by_rank = all_ballots(m)
    ranks = []
    for _ in range(n):
        idx, r = divmod(idx, fact)
        ranks.append(r)
    return Profile(ballots_by_rank[r] for r in reversed(ranks))


def all_profiles(n: int, m: int) -> Iterator[Profile]:
    """All profiles in canonical index order."""
    for idx in range(num_profiles(n, m)):
        yield profile_decode(idx, n, m)


# ---------------------------------------------------------------------------
# Outcome sets (bitmasks)

def full_mask(m: int) -> int:
    return (1 << m) - 1


def outcome_mask(members: Iterable[int], m: int) -> int:
    """Bitmask for a nonempty set of alternatives."""
    mask = 0
    for a in members:
        if not 0 <= a < m:
            raise ValueError(f"alternative {a} out of range for m={m}")
        mask |= 1 << a
    if mask == 0:
        raise ValueError("outcome set must be nonempty")
    return mask


def mask_members(mask: int) -> tuple[int, ...]:
    """Alternatives in a bitmask, ascending."""
    members = []
    a = 0
    while mask:
        if mask & 1:
            members.append(a)
        mask >>= 1
        a += 1
    return tuple(members)


def best(ballot: Ballot, w: int) -> int:
    """The member of w the ballot ranks highest."""
    if w == 0:
        raise ValueError("best of an empty outcome set")
    for a in ballot.ranking:
        if (w >> a) & 1:
            return a
    raise ValueError(f"outcome set {w:#x} has members outside 0..{ballot.m - 1}")


def worst(ballot: Ballot, w: int) -> int:
    """The member of w the ballot ranks lowest."""
    if w == 0:
        raise ValueError("worst of an empty outcome set")
    for a in reversed(ballot.ranking):
        if (w >> a) & 1:
            return a
    raise ValueError(f"outcome set {w:#x} has members outside 0..{ballot.m - 1}")


def optimist_ge(x: int, y: int, ballot: Ballot) -> bool:
    """True iff the best of x is ranked weakly above the best of y."""
    return ballot.position[best(ballot, x)] <= ballot.position[best(ballot, y)]


def pessimist_ge(x: int, y: int, ballot: Ballot) -> bool:
    """True iff the worst of x is ranked weakly above the worst of y."""
    return ballot.position[worst(ballot, x)] <= ballot.position[worst(ballot, y)]


# ---------------------------------------------------------------------------
# Social choice correspondences

RULE_KINDS = (
    "table",
    "constant",
    "dictatorial",
    "omninomination",
    "plurality-ties",
    "borda-set",
    "pareto-set",
)

_PARAMETRIC_KINDS = ("constant", "dictatorial")


@dataclass(frozen=True)
class Scc:
    """A social choice correspondence over n voters and m alternatives.

    Either an explicit table (one nonempty outcome mask per canonical profile
    index) or a built-in rule. Evaluation is deterministic and pure.
    """

    n: int
    m: int
    kind: str
    param: int | None = None
    table: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("need at least one voter and one alternative")
        if self.kind not in RULE_KINDS:
            raise ValueError(f"unknown rule kind {self.kind!r}")
        if self.kind == "table":
            if self.table is None:
                raise ValueError("table rule needs a table")
            expected = num_profiles(self.n, self.m)
            if len(self.table) != expected:
                raise ValueError(
                    f"table must have {expected} entries, got {len(self.table)}"
                )
            fm = full_mask(self.m)
            for i, mask in enumerate(self.table):
                if not 0 < mask <= fm:
                    raise ValueError(f"table entry {i} is not a valid nonempty set")
        elif self.kind in _PARAMETRIC_KINDS:
            if self.param is None:
                raise ValueError(f"{self.kind} rule needs a parameter")
            bound = self.m if self.kind == "constant" else self.n
            if not 0 <= self.param < bound:
                raise ValueError(f"{self.kind} parameter {self.param} out of range")

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_table(cls, n: int, m: int, table: Iterable[int]) -> "Scc":
        return cls(n=n, m=m, kind="table", table=tuple(table))

    @classmethod
    def constant(cls, n: int, m: int, alternative: int) -> "Scc":
        return cls(n=n, m=m, kind="constant", param=alternative)

    @classmethod
    def dictatorial(cls, n: int, m: int, voter: int) -> "Scc":
        return cls(n=n, m=m, kind="dictatorial", param=voter)

    @classmethod
    def omninomination(cls, n: int, m: int) -> "Scc":
        return cls(n=n, m=m, kind="omninomination")

    @classmethod
    def plurality_ties(cls, n: int, m: int) -> "Scc":
        return cls(n=n, m=m, kind="plurality-ties")

    @classmethod
    def borda_set(cls, n: int, m: int) -> "Scc":
        return cls(n=n, m=m, kind="borda-set")

    @classmethod
    def pareto_set(cls, n: int, m: int) -> "Scc":
        return cls(n=n, m=m, kind="pareto-set")

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, profile: Profile) -> int:
        """The outcome mask at a profile."""
        if profile.n != self.n or profile.m != self.m:
            raise ValueError(
                f"profile is {profile.n}x{profile.m}, rule is {self.n}x{self.m}"
            )
        if self.kind == "table":
            return self.table[profile_index(profile)]
        if self.kind == "constant":
            return 1 << self.param
        if self.kind == "dictatorial":
            return 1 << profile.ballots[self.param].top
        if self.kind == "omninomination":
            mask = 0
            for ballot in profile.ballots:
                mask |= 1 << ballot.top
            return mask
        if self.kind == "plurality-ties":
            counts = [0] * self.m
            for ballot in profile.ballots:
                counts[ballot.top] += 1
            return _argmax_mask(counts)
        if self.kind == "borda-set":
            scores = [0] * self.m
            top_score = self.m - 1
            for ballot in profile.ballots:
                for r, a in enumerate(ballot.ranking):
                    scores[a] += top_score - r
            return _argmax_mask(scores)
        if self.kind == "pareto-set":
            mask = 0
            for a in range(self.m):
                if not _pareto_dominated(a, profile):
                    mask |= 1 << a
            return mask
        raise AssertionError(f"unhandled kind {self.kind}")

    def materialized(self) -> "Scc":
        """This correspondence as an explicit table."""
        if self.kind == "table":
            return self
        return Scc.from_table(self.n, self.m, full_table(self))

    def __repr__(self) -> str:
        if self.kind == "table":
            return f"Scc.table({self.n}x{self.m})"
        if self.param is not None:
            return f"Scc.{self.kind}({self.param}, {self.n}x{self.m})"
        return f"Scc.{self.kind}({self.n}x{self.m})"


def _argmax_mask(scores: list[int]) -> int:
    top = max(scores)
    mask = 0
    for a, s in enumerate(scores):
        if s == top:
            mask |= 1 << a
    return mask


def _pareto_dominated(a: int, profile: Profile) -> bool:
    # a is dominated iff some b beats it on every ballot
    for b in range(profile.m):
        if b != a and all(bal.position[b] < bal.position[a] for bal in profile.ballots):
            return True
    return False


def evaluate(f: Scc, profile: Profile) -> int:
    return f.evaluate(profile)


@lru_cache(maxsize=256)
def full_table(f: Scc) -> tuple[int, ...]:
    """Outcome masks at every profile, in canonical index order."""
    if f.kind == "table":
        return f.table
    return tuple(f.evaluate(p) for p in all_profiles(f.n, f.m))
