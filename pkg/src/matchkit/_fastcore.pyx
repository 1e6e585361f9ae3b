# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Must stay byte-for-byte compatible with matchkit._purecore;
the parity tests enforce that on every function."""

from libc.stdlib cimport malloc, free
from libc.string cimport memcmp

DEF NOBODY = 255


cdef inline long long _count(int n, int num_mp, int num_wp):
    cdef long long c = 1
    cdef int i
    for i in range(n):
        c *= num_mp
    for i in range(n):
        c *= num_wp
    return c


def ranks_from_lists(int n, bytes lists):
    cdef const unsigned char[::1] src = lists
    cdef Py_ssize_t total = len(lists)
    cdef bytearray buf = bytearray(total)
    cdef unsigned char[::1] out = buf
    cdef Py_ssize_t base
    cdef int pos
    for base in range(0, total, n):
        for pos in range(n):
            out[base + src[base + pos]] = <unsigned char>pos
    return bytes(buf)


def da_single(int n, bytes prop_lists, bytes recv_ranks, order=None):
    cdef const unsigned char[::1] pl = prop_lists
    cdef const unsigned char[::1] rr = recv_ranks
    cdef int *nxt = <int *>malloc(n * sizeof(int))
    cdef int *held = <int *>malloc(n * sizeof(int))
    cdef int *queue = <int *>malloc((n * n + n + 1) * sizeof(int))
    cdef int head = 0, tail = 0, i, p, r, cur
    try:
        for i in range(n):
            nxt[i] = 0
            held[i] = NOBODY
        if order is None:
            for i in range(n):
                queue[tail] = i
                tail += 1
        else:
            for i in range(n):
                queue[tail] = (<bytes>order)[i]
                tail += 1
        while head < tail:
            p = queue[head]
            head += 1
            r = pl[p * n + nxt[p]]
            nxt[p] += 1
            cur = held[r]
            if cur == NOBODY:
                held[r] = p
            elif rr[r * n + p] < rr[r * n + cur]:
                held[r] = p
                queue[tail] = cur
                tail += 1
            else:
                queue[tail] = p
                tail += 1
        buf = bytearray(n)
        for r in range(n):
            buf[held[r]] = <unsigned char>r
        return bytes(buf)
    finally:
        free(nxt)
        free(held)
        free(queue)


def fill_table(int n, int num_mp, int num_wp, bytes men_lists, bytes men_ranks,
               bytes women_lists, bytes women_ranks, bint men_propose,
               long long start, long long stop):
    cdef const unsigned char[::1] ml = men_lists
    cdef const unsigned char[::1] mr = men_ranks
    cdef const unsigned char[::1] wl = women_lists
    cdef const unsigned char[::1] wr = women_ranks
    cdef const unsigned char[::1] pl
    cdef const unsigned char[::1] rr
    cdef int width = 2 * n
    cdef bytearray buf = bytearray(<Py_ssize_t>(stop - start) * n)
    cdef unsigned char[::1] out = buf
    cdef int *radix = <int *>malloc(width * sizeof(int))
    cdef int *digits = <int *>malloc(width * sizeof(int))
    cdef int *nxt = <int *>malloc(n * sizeof(int))
    cdef int *held = <int *>malloc(n * sizeof(int))
    cdef int *poff = <int *>malloc(n * sizeof(int))
    cdef int *roff = <int *>malloc(n * sizeof(int))
    cdef int *queue = <int *>malloc((n * n + n + 1) * sizeof(int))
    cdef long long t, rem, total = stop - start
    cdef Py_ssize_t base
    cdef int i, r, p, cur, head, tail
    try:
        for i in range(n):
            radix[i] = num_mp
            radix[n + i] = num_wp
        rem = start
        for i in range(width - 1, -1, -1):
            digits[i] = <int>(rem % radix[i])
            rem //= radix[i]
        if men_propose:
            pl = ml
            rr = wr
        else:
            pl = wl
            rr = mr
        for t in range(total):
            if men_propose:
                for i in range(n):
                    poff[i] = digits[i] * n
                    roff[i] = digits[n + i] * n
            else:
                for i in range(n):
                    poff[i] = digits[n + i] * n
                    roff[i] = digits[i] * n
            head = 0
            tail = n
            for i in range(n):
                nxt[i] = 0
                held[i] = NOBODY
                queue[i] = i
            while head < tail:
                p = queue[head]
                head += 1
                r = pl[poff[p] + nxt[p]]
                nxt[p] += 1
                cur = held[r]
                if cur == NOBODY:
                    held[r] = p
                elif rr[roff[r] + p] < rr[roff[r] + cur]:
                    held[r] = p
                    queue[tail] = cur
                    tail += 1
                else:
                    queue[tail] = p
                    tail += 1
            base = <Py_ssize_t>t * n
            if men_propose:
                for r in range(n):
                    out[base + held[r]] = <unsigned char>r
            else:
                for r in range(n):
                    out[base + r] = <unsigned char>held[r]
            i = width - 1
            while i >= 0:
                digits[i] += 1
                if digits[i] == radix[i]:
                    digits[i] = 0
                    i -= 1
                else:
                    break
        return bytes(buf)
    finally:
        free(radix)
        free(digits)
        free(nxt)
        free(held)
        free(poff)
        free(roff)
        free(queue)


def invert_rows(int n, bytes table):
    cdef const unsigned char[::1] src = table
    cdef Py_ssize_t total = len(table)
    cdef bytearray buf = bytearray(total)
    cdef unsigned char[::1] out = buf
    cdef Py_ssize_t base
    cdef int i
    for base in range(0, total, n):
        for i in range(n):
            out[base + src[base + i]] = <unsigned char>i
    return bytes(buf)


def digits_matrix(int n, int num_mp, int num_wp):
    cdef int width = 2 * n
    cdef long long count = _count(n, num_mp, num_wp)
    cdef bytearray buf = bytearray(<Py_ssize_t>count * width)
    cdef unsigned char[::1] out = buf
    cdef int *radix = <int *>malloc(width * sizeof(int))
    cdef int *digits = <int *>malloc(width * sizeof(int))
    cdef long long p
    cdef Py_ssize_t base
    cdef int i
    try:
        for i in range(n):
            radix[i] = num_mp
            radix[n + i] = num_wp
        for i in range(width):
            digits[i] = 0
        for p in range(count):
            base = <Py_ssize_t>p * width
            for i in range(width):
                out[base + i] = <unsigned char>digits[i]
            i = width - 1
            while i >= 0:
                digits[i] += 1
                if digits[i] == radix[i]:
                    digits[i] = 0
                    i -= 1
                else:
                    break
        return bytes(buf)
    finally:
        free(radix)
        free(digits)


def scan_unilateral(int n, int num_mp, int num_wp, bytes men_ranks, bytes women_ranks,
                    bytes table, bytes inv, bint want_sp, long long limit):
    cdef const unsigned char[::1] mr = men_ranks
    cdef const unsigned char[::1] wr = women_ranks
    cdef const unsigned char[::1] tab = table
    cdef const unsigned char[::1] hus = inv
    cdef const unsigned char *tptr
    cdef int width = 2 * n
    cdef long long count = _count(n, num_mp, num_wp)
    cdef long long *place = <long long *>malloc(width * sizeof(long long))
    cdef int *radix = <int *>malloc(width * sizeof(int))
    cdef int *digits = <int *>malloc(width * sizeof(int))
    cdef long long p, q, qroot, wblock = 1
    cdef Py_ssize_t base, qbase
    cdef int a, i, d, alt, cur, new, cur_rank, rowbase
    cdef bint hit
    out = []
    try:
        for i in range(n):
            wblock *= num_wp
        for i in range(n):
            radix[i] = num_mp
            radix[n + i] = num_wp
        place[n - 1] = wblock
        for i in range(n - 2, -1, -1):
            place[i] = place[i + 1] * num_mp
        place[width - 1] = 1
        for i in range(width - 2, n - 1, -1):
            place[i] = place[i + 1] * num_wp
        for i in range(width):
            digits[i] = 0
        tptr = &tab[0]
        for p in range(count):
            base = <Py_ssize_t>p * n
            for a in range(width):
                d = digits[a]
                if a < n:
                    cur = tab[base + a]
                    rowbase = d * n
                    cur_rank = mr[rowbase + cur]
                else:
                    cur = hus[base + a - n]
                    rowbase = d * n
                    cur_rank = wr[rowbase + cur]
                qroot = p - d * place[a]
                for alt in range(radix[a]):
                    if alt == d:
                        continue
                    q = qroot + alt * place[a]
                    qbase = <Py_ssize_t>q * n
                    if a < n:
                        new = tab[qbase + a]
                        hit = want_sp and mr[rowbase + new] < cur_rank
                    else:
                        new = hus[qbase + a - n]
                        hit = want_sp and wr[rowbase + new] < cur_rank
                    if not want_sp:
                        hit = new == cur and memcmp(tptr + qbase, tptr + base, n) != 0
                    if hit:
                        out.append((p, a, alt, q))
                        if limit and len(out) >= limit:
                            return out
            i = width - 1
            while i >= 0:
                digits[i] += 1
                if digits[i] == radix[i]:
                    digits[i] = 0
                    i -= 1
                else:
                    break
        return out
    finally:
        free(place)
        free(radix)
        free(digits)


def scan_pairs_group(int n, int num_mp, int num_wp, bytes men_ranks, bytes women_ranks,
                     bytes table, bytes inv, bytes digits_mat, bint weak_mode,
                     int max_coalition, long long limit):
    cdef const unsigned char[::1] mr = men_ranks
    cdef const unsigned char[::1] wr = women_ranks
    cdef const unsigned char[::1] tab = table
    cdef const unsigned char[::1] hus = inv
    cdef const unsigned char[::1] dm = digits_mat
    cdef int width = 2 * n
    cdef long long count = _count(n, num_mp, num_wp)
    cdef long long p, q
    cdef Py_ssize_t pb, qb, tb, qt
    cdef int a, size, old, new, rowbase, pad
    cdef bint ok, strict, better
    out = []
    for p in range(count):
        pb = <Py_ssize_t>p * width
        tb = <Py_ssize_t>p * n
        for q in range(count):
            if q == p:
                continue
            qb = <Py_ssize_t>q * width
            qt = <Py_ssize_t>q * n
            size = 0
            ok = True
            strict = False
            for a in range(width):
                if dm[pb + a] == dm[qb + a]:
                    continue
                size += 1
                if size > max_coalition:
                    ok = False
                    break
                rowbase = dm[pb + a] * n
                if a < n:
                    old = tab[tb + a]
                    new = tab[qt + a]
                    better = mr[rowbase + new] < mr[rowbase + old]
                else:
                    old = hus[tb + a - n]
                    new = hus[qt + a - n]
                    better = wr[rowbase + new] < wr[rowbase + old]
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
                if dm[pb + a] != dm[qb + a]:
                    continue
                rowbase = dm[pb + a] * n
                if a < n:
                    old = tab[tb + a]
                    new = tab[qt + a]
                    if mr[rowbase + new] < mr[rowbase + old]:
                        pad = a
                        break
                else:
                    old = hus[tb + a - n]
                    new = hus[qt + a - n]
                    if wr[rowbase + new] < wr[rowbase + old]:
                        pad = a
                        break
            if pad >= 0:
                out.append((p, q, pad))
                if limit and len(out) >= limit:
                    return out
    return out


cdef bint _next_perm(int *a, int n):
    cdef int i = n - 2, j, tmp, lo, hi
    while i >= 0 and a[i] >= a[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = n - 1
    while a[j] <= a[i]:
        j -= 1
    tmp = a[i]
    a[i] = a[j]
    a[j] = tmp
    lo = i + 1
    hi = n - 1
    while lo < hi:
        tmp = a[lo]
        a[lo] = a[hi]
        a[hi] = tmp
        lo += 1
        hi -= 1
    return True


def stable_perms(int n, bytes mranks, bytes wranks):
    cdef const unsigned char[::1] mr = mranks
    cdef const unsigned char[::1] wr = wranks
    cdef int *perm = <int *>malloc(n * sizeof(int))
    cdef int *hus = <int *>malloc(n * sizeof(int))
    cdef int m, w, row, rm
    cdef bint stable, more = True
    buf = bytearray()
    try:
        for m in range(n):
            perm[m] = m
        while more:
            for m in range(n):
                hus[perm[m]] = m
            stable = True
            for m in range(n):
                row = m * n
                rm = mr[row + perm[m]]
                for w in range(n):
                    if mr[row + w] < rm and wr[w * n + m] < wr[w * n + hus[w]]:
                        stable = False
                        break
                if not stable:
                    break
            if stable:
                for m in range(n):
                    buf.append(<unsigned char>perm[m])
            more = _next_perm(perm, n)
        return bytes(buf)
    finally:
        free(perm)
        free(hus)


def blocking_pairs(int n, bytes mranks, bytes wranks, bytes match_row):
    cdef const unsigned char[::1] mr = mranks
    cdef const unsigned char[::1] wr = wranks
    cdef const unsigned char[::1] mt = match_row
    cdef int *hus = <int *>malloc(n * sizeof(int))
    cdef int m, w, row, rm
    out = []
    try:
        for m in range(n):
            hus[mt[m]] = m
        for m in range(n):
            row = m * n
            rm = mr[row + mt[m]]
            for w in range(n):
                if mr[row + w] < rm and wr[w * n + m] < wr[w * n + hus[w]]:
                    out.append((m, w))
        return out
    finally:
        free(hus)
