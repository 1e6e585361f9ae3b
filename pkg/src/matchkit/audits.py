"""Matching rules over finite profile spaces, and exhaustive incentive audits.

A ProfileSpace is the cartesian product of anonymous per-side menus: every
agent independently picks one ranking from their side's set. Spaces are
indexed in mixed radix (m1 most significant, then m2.., then w1..), which
makes "the profile where agent a reports something else" index arithmetic
instead of object surgery.

Audits always evaluate gains under the agent's preference in the truthful
profile, never the misreport. They run in census mode (all witnesses, scan
order) or existence mode (first witness only), and refuse up front when the
scan would exceed the operation budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import _core
from .da import deferred_acceptance
from .domains import DomainPair
from .model import BudgetError, InputError, Market, Matching, Profile

DEFAULT_BUDGET = 200_000_000
_NOBODY = 255


class ProfileSpace:
    """All profiles over a DomainPair, mixed-radix indexed."""

    def __init__(self, domain: DomainPair):
        self.domain = domain
        self.market: Market = domain.market
        n = self.market.n
        self.n = n
        self.men_prefs = domain.men_set.prefs
        self.women_prefs = domain.women_set.prefs
        self.num_mp = len(self.men_prefs)
        self.num_wp = len(self.women_prefs)
        if self.num_mp == 0 or self.num_wp == 0:
            raise InputError("empty preference set")
        if self.num_mp > 254 or self.num_wp > 254:
            raise InputError("preference sets larger than 254 members are not supported")
        self.size = (self.num_mp**n) * (self.num_wp**n)
        widx = {w: j for j, w in enumerate(self.market.women)}
        midx = {m: i for i, m in enumerate(self.market.men)}
        self.men_lists = bytes(widx[x] for p in self.men_prefs for x in p)
        self.women_lists = bytes(midx[x] for p in self.women_prefs for x in p)
        self.men_ranks = _core.ranks_from_lists(n, self.men_lists)
        self.women_ranks = _core.ranks_from_lists(n, self.women_lists)
        self._men_digit = {p: d for d, p in enumerate(self.men_prefs)}
        self._women_digit = {p: d for d, p in enumerate(self.women_prefs)}
        self.radices = (self.num_mp,) * n + (self.num_wp,) * n
        places = [0] * (2 * n)
        acc = 1
        for a in range(2 * n - 1, -1, -1):
            places[a] = acc
            acc *= self.radices[a]
        self.places = tuple(places)

    def digits_of(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.size:
            raise InputError(f"profile index {index} out of range 0..{self.size - 1}")
        return tuple((index // self.places[a]) % self.radices[a] for a in range(2 * self.n))

    def index_of_digits(self, digits: Sequence[int]) -> int:
        return sum(d * p for d, p in zip(digits, self.places))

    def agent_name(self, code: int) -> str:
        return self.market.men[code] if code < self.n else self.market.women[code - self.n]

    def pref_ranking(self, code: int, digit: int) -> tuple[str, ...]:
        return self.men_prefs[digit] if code < self.n else self.women_prefs[digit]

    def profile_at(self, index: int) -> Profile:
        digits = self.digits_of(index)
        raw = {}
        for i, m in enumerate(self.market.men):
            raw[m] = self.men_prefs[digits[i]]
        for j, w in enumerate(self.market.women):
            raw[w] = self.women_prefs[digits[self.n + j]]
        return Profile.from_rankings(self.market, raw)

    def index_of(self, profile: Profile) -> int:
        if profile.market != self.market:
            raise InputError("profile outside rule domain")
        digits = []
        try:
            for m in self.market.men:
                digits.append(self._men_digit[profile.prefs[m].ranking])
            for w in self.market.women:
                digits.append(self._women_digit[profile.prefs[w].ranking])
        except KeyError:
            raise InputError("profile outside rule domain") from None
        return self.index_of_digits(digits)

    def matching_at(self, table: bytes, index: int) -> Matching:
        n = self.n
        return Matching(self.market, tuple(table[index * n : (index + 1) * n]))


@dataclass(frozen=True, eq=False)
class Rule:
    """A matching rule: one of the deferred-acceptance directions, or an
    explicit outcome table over a specific space."""

    kind: str
    space: ProfileSpace | None = None
    table: bytes | None = None

    def __post_init__(self):
        if self.kind not in ("mpda", "wpda", "table"):
            raise InputError(f"unknown rule kind {self.kind!r}")
        if self.kind == "table":
            if self.space is None or self.table is None:
                raise InputError("table rules need a space and a table")
            if len(self.table) != self.space.size * self.space.n:
                raise InputError("table length does not match the space")


MPDA = Rule("mpda")
WPDA = Rule("wpda")


def apply_rule(rule: Rule, profile: Profile) -> Matching:
    if rule.kind == "mpda":
        return deferred_acceptance(profile, side="men")
    if rule.kind == "wpda":
        return deferred_acceptance(profile, side="women")
    idx = rule.space.index_of(profile)
    return rule.space.matching_at(rule.table, idx)


def _fill_chunk(args) -> bytes:
    n, num_mp, num_wp, ml, mr, wl, wr, men_propose, start, stop = args
    return _core.fill_table(n, num_mp, num_wp, ml, mr, wl, wr, men_propose, start, stop)


def outcome_table(rule: Rule, space: ProfileSpace, jobs: int = 1) -> bytes:
    """The rule's matching for every profile in the space, man->woman rows."""
    if rule.kind == "table":
        if rule.space.domain != space.domain:
            raise InputError("table rule belongs to a different domain")
        return rule.table
    men_propose = rule.kind == "mpda"
    base = (space.n, space.num_mp, space.num_wp, space.men_lists, space.men_ranks,
            space.women_lists, space.women_ranks, men_propose)
    if jobs <= 1 or space.size < 4096:
        return _fill_chunk(base + (0, space.size))
    bounds = [space.size * k // jobs for k in range(jobs + 1)]
    chunks = [base + (bounds[k], bounds[k + 1]) for k in range(jobs)]
    return b"".join(_core.pmap(_fill_chunk, chunks, jobs))


@dataclass(frozen=True, eq=False)
class AuditWitness:
    """One confirmed incentive failure.

    check: which audit produced it. profile_index/misreport_index locate the
    truthful and deviated profiles in the space. coalition lists everyone a
    group deviation is attributed to; misreports only those whose reports
    actually differ (a strong-group coalition may carry one truthful member
    who strictly gains).
    """

    check: str
    space: ProfileSpace
    profile_index: int
    misreport_index: int
    coalition: tuple[str, ...]
    misreports: tuple[tuple[str, tuple[str, ...]], ...]
    before: Matching
    after: Matching

    def profile(self) -> Profile:
        return self.space.profile_at(self.profile_index)

    def deviated_profile(self) -> Profile:
        return self.space.profile_at(self.misreport_index)

    def replay(self) -> bool:
        """Re-check the witness against the audit definitions, from scratch."""
        truth = self.profile()
        gains = []
        for agent in self.coalition:
            pref = truth.pref(agent)
            old = self.before.partner(agent)
            new = self.after.partner(agent)
            if pref.prefers(old, new):
                return False
            gains.append(pref.prefers(new, old))
        if self.check in ("sp", "group-weak"):
            return all(gains)
        if self.check == "group-strong":
            return any(gains)
        if self.check == "nonbossy":
            agent = self.coalition[0]
            return self.before.partner(agent) == self.after.partner(agent) and self.before != self.after
        raise InputError(f"unknown check {self.check!r}")


def _tables(rule: Rule, space: ProfileSpace, jobs: int) -> tuple[bytes, bytes]:
    table = outcome_table(rule, space, jobs=jobs)
    return table, _core.invert_rows(space.n, table)


def _require_budget(kind: str, estimate: int, budget: int) -> None:
    if estimate > budget:
        raise BudgetError(
            f"{kind} audit needs about {estimate} operations, over budget {budget}",
            required=estimate,
            budget=budget,
        )


def _unilateral_witnesses(check: str, rule: Rule, space: ProfileSpace, want_sp: bool,
                          first: bool, budget: int, jobs: int) -> list[AuditWitness]:
    est = space.size * (space.n * (space.num_mp - 1) + space.n * (space.num_wp - 1))
    _require_budget(check, est, budget)
    table, inv = _tables(rule, space, jobs)
    raw = _core.scan_unilateral(
        space.n, space.num_mp, space.num_wp, space.men_ranks, space.women_ranks,
        table, inv, want_sp, 1 if first else 0,
    )
    out = []
    for p, a, alt, q in raw:
        agent = space.agent_name(a)
        out.append(AuditWitness(
            check=check,
            space=space,
            profile_index=p,
            misreport_index=q,
            coalition=(agent,),
            misreports=((agent, space.pref_ranking(a, alt)),),
            before=space.matching_at(table, p),
            after=space.matching_at(table, q),
        ))
    return out


def audit_strategy_proofness(rule: Rule, space: ProfileSpace, first: bool = False,
                             budget: int = DEFAULT_BUDGET, jobs: int = 1) -> list[AuditWitness]:
    """Every (profile, agent, alternative report) where the agent's partner
    strictly improves under their truthful preference."""
    return _unilateral_witnesses("sp", rule, space, True, first, budget, jobs)


def audit_non_bossiness(rule: Rule, space: ProfileSpace, first: bool = False,
                        budget: int = DEFAULT_BUDGET, jobs: int = 1) -> list[AuditWitness]:
    """Every deviation that leaves the deviator's own partner unchanged but
    moves somebody else's."""
    return _unilateral_witnesses("nonbossy", rule, space, False, first, budget, jobs)


def audit_group(rule: Rule, space: ProfileSpace, mode: str = "weak",
                max_coalition: int | None = None, first: bool = False,
                budget: int = DEFAULT_BUDGET, jobs: int = 1) -> list[AuditWitness]:
    """Coalition deviations, scanning ordered pairs of profiles.

    weak: every coalition member strictly gains. strong: every member weakly
    gains and at least one strictly. The coalition is read off the agents
    whose reports differ between the two profiles; in strong mode one
    truthful strict gainer may be co-opted to complete a witness when the
    coalition cap allows.
    """
    if mode not in ("weak", "strong"):
        raise InputError(f"group audit mode must be 'weak' or 'strong', got {mode!r}")
    cap = 2 * space.n if max_coalition is None else max_coalition
    if cap < 1:
        raise InputError("max_coalition must be at least 1")
    cap = min(cap, 2 * space.n)
    est = space.size * space.size
    _require_budget(f"group-{mode}", est, budget)
    table, inv = _tables(rule, space, jobs)
    digits_mat = _core.digits_matrix(space.n, space.num_mp, space.num_wp)
    raw = _core.scan_pairs_group(
        space.n, space.num_mp, space.num_wp, space.men_ranks, space.women_ranks,
        table, inv, digits_mat, mode == "weak", cap, 1 if first else 0,
    )
    width = 2 * space.n
    out = []
    for p, q, pad in raw:
        movers = [
            a for a in range(width)
            if digits_mat[p * width + a] != digits_mat[q * width + a]
        ]
        coalition = list(movers)
        if pad != _NOBODY:
            coalition.append(pad)
            coalition.sort()
        out.append(AuditWitness(
            check=f"group-{mode}",
            space=space,
            profile_index=p,
            misreport_index=q,
            coalition=tuple(space.agent_name(a) for a in coalition),
            misreports=tuple(
                (space.agent_name(a), space.pref_ranking(a, digits_mat[q * width + a]))
                for a in movers
            ),
            before=space.matching_at(table, p),
            after=space.matching_at(table, q),
        ))
    return out
