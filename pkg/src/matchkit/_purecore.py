"""Pure-Python kernels. Reference implementation for matchkit._fastcore.

Conventions shared by both backends:
  * preference pools are bytes: row d (length n) is the ranking with digit d,
    either as ranked partner indices (lists) or as partner -> rank (ranks)
  * a profile space index mixes digits (m1..mn, w1..wn), m1 most significant
  * outcome tables are bytes: row p (length n) maps man index -> woman index
  * agents are coded 0..n-1 for men, n..2n-1 for women
All functions are deterministic; scan output order is (profile, agent, alt).
"""

from __future__ import annotations

from itertools import permutations

NOBODY = 255


def ranks_from_lists(n: int, lists: bytes) -> bytes:
    out = bytearray(len(lists))
    for row in range(len(lists) // n):
        base = row * n
        for pos in range(n):
            out[base + lists[base + pos]] = pos
    return bytes(out)


def da_single(n: int, prop_lists: bytes, recv_ranks: bytes, order: bytes | None = None) -> bytes:
    """One deferred-acceptance run; returns proposer -> receiver.

    prop_lists row p: proposer p's receivers in ranked order. recv_ranks row
    r: receiver r's rank of each proposer. order is the initial proposal
    queue (default 0..n-1); rejected proposers re-enter at the tail.
    """
    nxt = [0] * n
    held = [NOBODY] * n
    queue = list(range(n)) if order is None else list(order)
    head = 0
    while head < len(queue):
        p = queue[head]
        head += 1
        r = prop_lists[p * n + nxt[p]]
        nxt[p] += 1
        cur = held[r]
        if cur == NOBODY:
            held[r] = p
        elif recv_ranks[r * n + p] < recv_ranks[r * n + cur]:
            held[r] = p
            queue.append(cur)
        else:
            queue.append(p)
    out = bytearray(n)
    for r in range(n):
        out[held[r]] = r
    return bytes(out)


def fill_table(
    n: int,
    num_mp: int,
    num_wp: int,
    men_lists: bytes,
    men_ranks: bytes,
    women_lists: bytes,
    women_ranks: bytes,
    men_propose: bool,
    start: int,
    stop: int,
) -> bytes:
    """Deferred-acceptance outcomes for space indices [start, stop).

    Rows are always man -> woman, whichever side proposes.
    """
    width = 2 * n
    radix = [num_mp] * n + [num_wp] * n
    digits = [0] * width
    rem = start
    for i in range(width - 1, -1, -1):
        digits[i] = rem % radix[i]
        rem //= radix[i]
    out = bytearray((stop - start) * n)
    for t in range(stop - start):
        nxt = [0] * n
        held = [NOBODY] * n
        queue = list(range(n))
        head = 0
        if men_propose:
            pl, rr = men_lists, women_ranks
            poff = [digits[i] * n for i in range(n)]
            roff = [digits[n + j] * n for j in range(n)]
        else:
            pl, rr = women_lists, men_ranks
            poff = [digits[n + j] * n for j in range(n)]
            roff = [digits[i] * n for i in range(n)]
        while head < len(queue):
            p = queue[head]
            head += 1
            r = pl[poff[p] + nxt[p]]
            nxt[p] += 1
            cur = held[r]
            if cur == NOBODY:
                held[r] = p
            elif rr[roff[r] + p] < rr[roff[r] + cur]:
                held[r] = p
                queue.append(cur)
            else:
                queue.append(p)
        base = t * n
        if men_propose:
            for r in range(n):
                out[base + held[r]] = r
        else:
            for r in range(n):
                out[base + r] = held[r]
        i = width - 1
        while i >= 0:
            digits[i] += 1
            if digits[i] == radix[i]:
                digits[i] = 0
                i -= 1
            else:
                break
    return bytes(out)


def invert_rows(n: int, table: bytes) -> bytes:
    out = bytearray(len(table))
    for p in range(len(table) // n):
        base = p * n
        for i in range(n):
            out[base + table[base + i]] = i
    return bytes(out)


def digits_matrix(n: int, num_mp: int, num_wp: int) -> bytes:
    width = 2 * n
    radix = [num_mp] * n + [num_wp] * n
    count = (num_mp**n) * (num_wp**n)
    out = bytearray(count * width)
    digits = [0] * width
    for p in range(count):
        out[p * width : (p + 1) * width] = bytes(digits)
        i = width - 1
        while i >= 0:
            digits[i] += 1
            if digits[i] == radix[i]:
                digits[i] = 0
                i -= 1
            else:
                break
    return bytes(out)


def _places(n: int, num_mp: int, num_wp: int) -> list[int]:
    wblock = num_wp**n
    place = [0] * (2 * n)
    for i in range(n):
        place[i] = (num_mp ** (n - 1 - i)) * wblock
    for j in range(n):
        place[n + j] = num_wp ** (n - 1 - j)
    return place


def scan_unilateral(
    n: int,
    num_mp: int,
    num_wp: int,
    men_ranks: bytes,
    women_ranks: bytes,
    table: bytes,
    inv: bytes,
    want_sp: bool,
    limit: int,
) -> list[tuple[int, int, int, int]]:
    """Scan every (profile, agent, alternative report) deviation.

    want_sp: report deviations where the agent's match strictly improves
    under the true preference. Otherwise report non-bossiness violations:
    own match unchanged but the matching differs. Stops early after `limit`
    hits when limit > 0.
    """
    count = (num_mp**n) * (num_wp**n)
    place = _places(n, num_mp, num_wp)
    radix = [num_mp] * n + [num_wp] * n
    digits = [0] * (2 * n)
    out: list[tuple[int, int, int, int]] = []
    for p in range(count):
        base = p * n
        for a in range(2 * n):
            d = digits[a]
            if a < n:
                cur = table[base + a]
                ranks = men_ranks
            else:
                cur = inv[base + a - n]
                ranks = women_ranks
            rowbase = d * n
            pl = place[a]
            qroot = p - d * pl
            cur_rank = ranks[rowbase + cur]
            for alt in range(radix[a]):
                if alt == d:
                    continue
                q = qroot + alt * pl
                new = table[q * n + a] if a < n else inv[q * n + a - n]
                if want_sp:
                    hit = ranks[rowbase + new] < cur_rank
                else:
                    hit = new == cur and table[q * n : q * n + n] != table[base : base + n]
                if hit:
                    out.append((p, a, alt, q))
                    if limit and len(out) >= limit:
                        return out
        i = 2 * n - 1
        while i >= 0:
            digits[i] += 1
            if digits[i] == radix[i]:
                digits[i] = 0
                i -= 1
            else:
                break
    return out


def scan_pairs_group(
    n: int,
    num_mp: int,
    num_wp: int,
    men_ranks: bytes,
    women_ranks: bytes,
    table: bytes,
    inv: bytes,
    digits_mat: bytes,
    weak_mode: bool,
    max_coalition: int,
    limit: int,
) -> list[tuple[int, int, int]]:
    """Scan ordered profile pairs (truth p, joint misreport q) for coalition
    deviations.

    weak_mode: every agent whose report differs must strictly gain. Strong
    mode: every differing agent weakly gains (own match improves or stays)
    and someone in the coalition strictly gains; if no differing agent gains
    strictly, a truthful strict gainer is co-opted when max_coalition allows,
    returned as the third tuple slot (255 = none needed).
    """
    width = 2 * n
    count = (num_mp**n) * (num_wp**n)
    out: list[tuple[int, int, int]] = []
    for p in range(count):
        pb = p * width
        tb = p * n
        for q in range(count):
            if q == p:
                continue
            qb = q * width
            size = 0
            ok = True
            strict = False
            for a in range(width):
                if digits_mat[pb + a] == digits_mat[qb + a]:
                    continue
                size += 1
                if size > max_coalition:
                    ok = False
                    break
                if a < n:
                    old = table[tb + a]
                    new = table[q * n + a]
                    rowbase = digits_mat[pb + a] * n
                    better = men_ranks[rowbase + new] < men_ranks[rowbase + old]
                else:
                    old = inv[tb + a - n]
                    new = inv[q * n + a - n]
                    rowbase = digits_mat[pb + a] * n
                    better = women_ranks[rowbase + new] < women_ranks[rowbase + old]
                if better:
                    strict = True
                elif weak_mode or new != old:
                    ok = False
                    break
            if not ok or size == 0:
                continue
            if weak_mode or strict:
                out.append((p, q, NOBODY))
                if limit and len(out) >= limit:
                    return out
                continue
            if size + 1 > max_coalition:
                continue
            pad = -1
            for a in range(width):
                if digits_mat[pb + a] != digits_mat[qb + a]:
                    continue
                if a < n:
                    old = table[tb + a]
                    new = table[q * n + a]
                    rowbase = digits_mat[pb + a] * n
                    if men_ranks[rowbase + new] < men_ranks[rowbase + old]:
                        pad = a
                        break
                else:
                    old = inv[tb + a - n]
                    new = inv[q * n + a - n]
                    rowbase = digits_mat[pb + a] * n
                    if women_ranks[rowbase + new] < women_ranks[rowbase + old]:
                        pad = a
                        break
            if pad >= 0:
                out.append((p, q, pad))
                if limit and len(out) >= limit:
                    return out
    return out


def stable_perms(n: int, mranks: bytes, wranks: bytes) -> bytes:
    """All stable matchings of one instance, concatenated man->woman rows in
    lex order of the wife vector."""
    out = bytearray()
    hus = [0] * n
    for perm in permutations(range(n)):
        for m in range(n):
            hus[perm[m]] = m
        stable = True
        for m in range(n):
            row = m * n
            rm = mranks[row + perm[m]]
            for w in range(n):
                if mranks[row + w] < rm and wranks[w * n + m] < wranks[w * n + hus[w]]:
                    stable = False
                    break
            if not stable:
                break
        if stable:
            out.extend(perm)
    return bytes(out)


def blocking_pairs(n: int, mranks: bytes, wranks: bytes, match_row: bytes) -> list[tuple[int, int]]:
    hus = [0] * n
    for m in range(n):
        hus[match_row[m]] = m
    out = []
    for m in range(n):
        row = m * n
        rm = mranks[row + match_row[m]]
        for w in range(n):
            if mranks[row + w] < rm and wranks[w * n + m] < wranks[w * n + hus[w]]:
                out.append((m, w))
    return out
