"""Core objects for two-sided one-to-one matching markets.

A market has n men and n women (n >= 3). Every agent ranks all agents of the
other side strictly. A matching is a bijection between the sides. Everything
downstream (stability, deferred acceptance, domain restrictions, audits) is
built on the four types here: Market, Preference, Profile, Matching.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class MatchkitError(Exception):
    """Base class for errors raised by this package."""


class InputError(MatchkitError):
    """Malformed input document or value."""


class BudgetError(MatchkitError):
    """An operation would exceed its configured work budget."""

    def __init__(self, message: str, required: int | None = None, budget: int | None = None):
        super().__init__(message)
        self.required = required
        self.budget = budget


class PreconditionError(MatchkitError):
    """A constructive operation was called on inputs outside its precondition."""


MIN_MARKET_SIZE = 3


def _check_ids(ids: Sequence[str], label: str) -> None:
    if len(ids) < MIN_MARKET_SIZE:
        raise InputError(f"{label}: need at least {MIN_MARKET_SIZE} agents, got {len(ids)}")
    if len(set(ids)) != len(ids):
        raise InputError(f"{label}: duplicate agent ids")
    for a in ids:
        if not isinstance(a, str) or not a:
            raise InputError(f"{label}: agent ids must be non-empty strings")


@dataclass(frozen=True)
class Market:
    """The two sides of the market: equal-size tuples of distinct agent ids.

    Index order of the tuples is the canonical agent order used everywhere
    (serialization, scan order, digit layouts).
    """

    men: tuple[str, ...]
    women: tuple[str, ...]
    _man_idx: dict = field(init=False, repr=False, compare=False)
    _woman_idx: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        men = tuple(self.men)
        women = tuple(self.women)
        object.__setattr__(self, "men", men)
        object.__setattr__(self, "women", women)
        _check_ids(men, "men")
        _check_ids(women, "women")
        if len(men) != len(women):
            raise InputError(f"sides differ in size: {len(men)} men vs {len(women)} women")
        overlap = set(men) & set(women)
        if overlap:
            raise InputError(f"agent ids appear on both sides: {sorted(overlap)}")
        object.__setattr__(self, "_man_idx", {m: i for i, m in enumerate(men)})
        object.__setattr__(self, "_woman_idx", {w: j for j, w in enumerate(women)})

    @property
    def n(self) -> int:
        return len(self.men)

    @classmethod
    def default(cls, n: int) -> "Market":
        """The canonical market m1..mn / w1..wn."""
        return cls(tuple(f"m{i}" for i in range(1, n + 1)), tuple(f"w{i}" for i in range(1, n + 1)))

    def side_of(self, agent: str) -> str:
        if agent in self._man_idx:
            return "men"
        if agent in self._woman_idx:
            return "women"
        raise InputError(f"unknown agent {agent!r}")

    def man_index(self, m: str) -> int:
        try:
            return self._man_idx[m]
        except KeyError:
            raise InputError(f"unknown man {m!r}") from None

    def woman_index(self, w: str) -> int:
        try:
            return self._woman_idx[w]
        except KeyError:
            raise InputError(f"unknown woman {w!r}") from None

    def opposite_side(self, agent: str) -> tuple[str, ...]:
        return self.women if self.side_of(agent) == "men" else self.men


@dataclass(frozen=True)
class Preference:
    """One agent's strict ranking of the full opposite side.

    ranking[0] is the most preferred partner. The ranking must be a
    permutation of the opposite side; completeness is what makes every
    comparison below total.
    """

    owner: str
    ranking: tuple[str, ...]
    _pos: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ranking = tuple(self.ranking)
        object.__setattr__(self, "ranking", ranking)
        if len(set(ranking)) != len(ranking):
            raise InputError(f"{self.owner}: ranking contains duplicates")
        if not ranking:
            raise InputError(f"{self.owner}: empty ranking")
        object.__setattr__(self, "_pos", {x: i for i, x in enumerate(ranking)})

    @property
    def top(self) -> str:
        return self.ranking[0]

    def position(self, x: str) -> int:
        """Zero-based rank of x (0 = best). Raises KeyError for unranked ids."""
        try:
            return self._pos[x]
        except KeyError:
            raise KeyError(f"{self.owner} does not rank {x!r}") from None

    def prefers(self, x: str, y: str) -> bool:
        """True iff x is ranked strictly above y."""
        return self.position(x) < self.position(y)

    def weakly_prefers(self, x: str, y: str) -> bool:
        return self.position(x) <= self.position(y)


def validate_profile(market: Market, raw: Mapping[str, Sequence[str]]) -> list[str]:
    """Check a raw {agent: ranking} mapping against a market.

    Returns a list of human-readable problems, empty when the profile is
    well-formed: every agent present exactly once, every ranking a
    permutation of the full opposite side. All violations are reported, not
    just the first.
    """
    problems: list[str] = []
    agents = list(market.men) + list(market.women)
    for a in agents:
        if a not in raw:
            problems.append(f"missing preference for {a}")
    for a in raw:
        if a not in market._man_idx and a not in market._woman_idx:
            problems.append(f"unknown agent {a!r}")
    for a in agents:
        if a not in raw:
            continue
        ranking = list(raw[a])
        expected = market.opposite_side(a)
        seen: set[str] = set()
        for x in ranking:
            if x in seen:
                problems.append(f"{a}: duplicate entry {x}")
            seen.add(x)
            if x not in expected:
                problems.append(f"{a}: {x!r} is not on the opposite side")
        for x in expected:
            if x not in seen:
                problems.append(f"{a}: missing entry {x}")
    return problems


class Profile:
    """A full preference profile: one Preference per agent on both sides."""

    __slots__ = ("market", "prefs", "_men_rows", "_women_rows")

    def __init__(self, market: Market, prefs: Mapping[str, Preference] | Iterable[Preference]):
        if not isinstance(prefs, Mapping):
            prefs = {p.owner: p for p in prefs}
        raw = {a: p.ranking for a, p in prefs.items()}
        problems = validate_profile(market, raw)
        if problems:
            raise InputError("invalid profile: " + "; ".join(problems))
        for a, p in prefs.items():
            if p.owner != a:
                raise InputError(f"preference keyed {a} is owned by {p.owner}")
        self.market = market
        self.prefs = dict(prefs)
        self._men_rows = None
        self._women_rows = None

    @classmethod
    def from_rankings(cls, market: Market, raw: Mapping[str, Sequence[str]]) -> "Profile":
        return cls(market, {a: Preference(a, tuple(r)) for a, r in raw.items()})

    def pref(self, agent: str) -> Preference:
        return self.prefs[agent]

    def replace(self, agent: str, ranking: Sequence[str]) -> "Profile":
        """A new profile where one agent reports a different ranking."""
        prefs = dict(self.prefs)
        prefs[agent] = Preference(agent, tuple(ranking))
        return Profile(self.market, prefs)

    # Index-form rows used by the kernels: men_rows()[i] is man i's ranking
    # as woman indices, women_rows()[j] likewise as man indices.
    def men_rows(self) -> tuple[tuple[int, ...], ...]:
        if self._men_rows is None:
            widx = self.market._woman_idx
            self._men_rows = tuple(
                tuple(widx[w] for w in self.prefs[m].ranking) for m in self.market.men
            )
        return self._men_rows

    def women_rows(self) -> tuple[tuple[int, ...], ...]:
        if self._women_rows is None:
            midx = self.market._man_idx
            self._women_rows = tuple(
                tuple(midx[m] for m in self.prefs[w].ranking) for w in self.market.women
            )
        return self._women_rows

    def __eq__(self, other):
        return (
            isinstance(other, Profile)
            and self.market == other.market
            and self.prefs == other.prefs
        )

    def __hash__(self):
        return hash((self.market, tuple(self.prefs[a].ranking for a in self.market.men + self.market.women)))

    def __repr__(self):
        parts = ", ".join(f"{a}:{'>'.join(self.prefs[a].ranking)}" for a in self.market.men + self.market.women)
        return f"Profile({parts})"


@dataclass(frozen=True)
class Matching:
    """A bijection between the sides, stored as index arrays both ways.

    wife[i] is the woman index matched to man i; husband is the inverse.
    Construct via from_pairs or from_wife_vector.
    """

    market: Market
    wife: tuple[int, ...]
    husband: tuple[int, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        n = self.market.n
        wife = tuple(self.wife)
        object.__setattr__(self, "wife", wife)
        if sorted(wife) != list(range(n)):
            raise InputError(f"matching is not a bijection over {n} agents: {wife}")
        husband = [0] * n
        for i, j in enumerate(wife):
            husband[j] = i
        object.__setattr__(self, "husband", tuple(husband))

    @classmethod
    def from_pairs(cls, market: Market, pairs: Iterable[tuple[str, str]]) -> "Matching":
        wife = [-1] * market.n
        for m, w in pairs:
            i = market.man_index(m)
            if wife[i] != -1:
                raise InputError(f"{m} is paired twice")
            wife[i] = market.woman_index(w)
        if -1 in wife:
            raise InputError("matching leaves some man unpaired")
        return cls(market, tuple(wife))

    @classmethod
    def from_wife_vector(cls, market: Market, wife: Sequence[int]) -> "Matching":
        return cls(market, tuple(wife))

    def partner(self, agent: str) -> str:
        if self.market.side_of(agent) == "men":
            return self.market.women[self.wife[self.market.man_index(agent)]]
        return self.market.men[self.husband[self.market.woman_index(agent)]]

    def pairs(self) -> tuple[tuple[str, str], ...]:
        """Pairs as (man, woman) ids, sorted by man index."""
        return tuple((self.market.men[i], self.market.women[j]) for i, j in enumerate(self.wife))

    def __str__(self):
        return " ".join(f"{m}-{w}" for m, w in self.pairs())
