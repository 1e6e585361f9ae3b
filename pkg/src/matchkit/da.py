"""Deferred acceptance, stability checks, and brute-force stable sets."""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from typing import Sequence

from . import _core
from .model import BudgetError, InputError, Market, Matching, Profile

MAX_ENUM_N = 8
_KERNEL_MAX_N = 200


def _side_bytes(rows: tuple[tuple[int, ...], ...]) -> tuple[bytes, bytes]:
    n = len(rows)
    lists = bytes(x for row in rows for x in row)
    return lists, _core.ranks_from_lists(n, lists)


def profile_digest(profile: Profile) -> str:
    payload = {
        "men": list(profile.market.men),
        "women": list(profile.market.women),
        "prefs": {a: list(profile.prefs[a].ranking) for a in (*profile.market.men, *profile.market.women)},
    }
    blob = json.dumps(payload, separators=(",", ":"), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def deferred_acceptance(profile: Profile, side: str = "men", order: Sequence[str] | None = None) -> Matching:
    """Run deferred acceptance with the given side proposing.

    Free proposers are processed as a queue; `order` fixes the initial queue
    (default: index order). The outcome never depends on it; tests shuffle
    the order to hold that invariant up.
    """
    if side not in ("men", "women"):
        raise InputError(f"side must be 'men' or 'women', got {side!r}")
    market = profile.market
    n = market.n
    if n > _KERNEL_MAX_N:
        raise BudgetError(f"deferred acceptance limited to n <= {_KERNEL_MAX_N}")
    men_lists, men_ranks = _side_bytes(profile.men_rows())
    women_lists, women_ranks = _side_bytes(profile.women_rows())
    order_bytes = None
    if order is not None:
        proposers = market.men if side == "men" else market.women
        if sorted(order) != sorted(proposers):
            raise InputError("order must be a permutation of the proposing side")
        lookup = market.man_index if side == "men" else market.woman_index
        order_bytes = bytes(lookup(a) for a in order)
    if side == "men":
        wife = _core.da_single(n, men_lists, women_ranks, order_bytes)
        return Matching(market, tuple(wife))
    husband = _core.da_single(n, women_lists, men_ranks, order_bytes)
    wife = [0] * n
    for j, i in enumerate(husband):
        wife[i] = j
    return Matching(market, tuple(wife))


def blocking_pairs(profile: Profile, matching: Matching) -> list[tuple[str, str]]:
    """All pairs who each prefer the other to their assigned partner,
    in (man index, woman index) lex order."""
    if matching.market != profile.market:
        raise InputError("matching and profile belong to different markets")
    n = profile.market.n
    _, mranks = _side_bytes(profile.men_rows())
    _, wranks = _side_bytes(profile.women_rows())
    raw = _core.blocking_pairs(n, mranks, wranks, bytes(matching.wife))
    return [(profile.market.men[m], profile.market.women[w]) for m, w in raw]


def is_stable(profile: Profile, matching: Matching) -> bool:
    return not blocking_pairs(profile, matching)


@dataclass(frozen=True)
class StableSet:
    """The full set of stable matchings of one profile, lex-ordered by wife
    vector, tagged with the profile's digest."""

    profile_digest: str
    matchings: tuple[Matching, ...]

    def __len__(self) -> int:
        return len(self.matchings)

    def __iter__(self):
        return iter(self.matchings)

    def __contains__(self, matching: Matching) -> bool:
        return matching in self.matchings


def enumerate_stable(profile: Profile, max_n: int = MAX_ENUM_N) -> StableSet:
    """Brute-force stable set: check all n! bijections.

    Deliberately independent of deferred acceptance so each can serve as the
    other's oracle. Guarded by max_n since the cost is factorial.
    """
    n = profile.market.n
    if n > max_n:
        raise BudgetError(f"stable-set enumeration limited to n <= {max_n}", required=n, budget=max_n)
    _, mranks = _side_bytes(profile.men_rows())
    _, wranks = _side_bytes(profile.women_rows())
    rows = _core.stable_perms(n, mranks, wranks)
    matchings = tuple(
        Matching(profile.market, tuple(rows[k * n : (k + 1) * n])) for k in range(len(rows) // n)
    )
    return StableSet(profile_digest(profile), matchings)


def extremal_bounds_ok(profile: Profile, stable: StableSet, men_best: Matching, women_best: Matching) -> bool:
    """Check the lattice-boundary property: every man weakly prefers his
    men_best partner to his partner in any stable matching, and weakly
    prefers the latter to his women_best partner; mirrored for women."""
    for mu in stable:
        for m in profile.market.men:
            p = profile.pref(m)
            if not p.weakly_prefers(men_best.partner(m), mu.partner(m)):
                return False
            if not p.weakly_prefers(mu.partner(m), women_best.partner(m)):
                return False
        for w in profile.market.women:
            p = profile.pref(w)
            if not p.weakly_prefers(women_best.partner(w), mu.partner(w)):
                return False
            if not p.weakly_prefers(mu.partner(w), men_best.partner(w)):
                return False
    return True


def random_profile(market: Market, rng: random.Random) -> Profile:
    raw = {}
    for m in market.men:
        ranking = list(market.women)
        rng.shuffle(ranking)
        raw[m] = ranking
    for w in market.women:
        ranking = list(market.men)
        rng.shuffle(ranking)
        raw[w] = ranking
    return Profile.from_rankings(market, raw)
