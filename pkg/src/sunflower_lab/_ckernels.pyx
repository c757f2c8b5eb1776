# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: disjoint packing and the normal-form family search.

Mirror of _pykernels.py.  search_core needs candidate masks of at most 64
bits; the Python wrapper falls back to the pure kernels otherwise.
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, calloc, free

BACKEND = "cython"

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

cdef uint64_t ONE = 1


cdef inline int popc(uint64_t x) noexcept nogil:
    return __builtin_popcountll(x)


cdef inline int popc_from(const uint64_t* row, int W, int j) noexcept nogil:
    """Population count of bits >= j in a W-word bitset."""
    cdef int w = j >> 6, total = 0
    if w >= W:
        return 0
    total = popc(row[w] & (~<uint64_t>0 << (j & 63)))
    w += 1
    while w < W:
        total += popc(row[w])
        w += 1
    return total


cdef inline int next_bit(const uint64_t* row, int W, int j) noexcept nogil:
    """Smallest set bit >= j, or -1."""
    cdef int w = j >> 6
    cdef uint64_t word
    if w >= W:
        return -1
    word = row[w] & (~<uint64_t>0 << (j & 63))
    while True:
        if word:
            return (w << 6) + __builtin_ctzll(word)
        w += 1
        if w >= W:
            return -1
        word = row[w]


# -- disjoint packing over multiword masks ---------------------------------

cdef bint _pack_rec(const uint64_t* conflict, int Wm, uint64_t* avail, int depth,
                    int left, int* picks) noexcept nogil:
    cdef uint64_t* cur = avail + depth * Wm
    cdef uint64_t* nxt = cur + Wm
    cdef int i, w, cnt
    if left == 0:
        return True
    i = next_bit(cur, Wm, 0)
    while i >= 0:
        cnt = popc_from(cur, Wm, i)
        if cnt < left:
            return False
        cur[i >> 6] &= ~(ONE << (i & 63))
        for w in range(Wm):
            nxt[w] = cur[w] & ~conflict[i * Wm + w]
        picks[depth] = i
        if _pack_rec(conflict, Wm, avail, depth + 1, left - 1, picks):
            return True
        i = next_bit(cur, Wm, i + 1)
    return False


def pack_disjoint(masks, int need):
    cdef int m = len(masks)
    cdef int i, j, w, W, Wm
    cdef uint64_t* words
    cdef uint64_t* conflict
    cdef uint64_t* avail
    cdef int* picks
    cdef bint ok, hit
    if need <= 0:
        return []
    if m < need:
        return None
    picked = []
    acc = 0
    for i, s in enumerate(masks):
        if not s & acc:
            picked.append(i)
            acc |= s
            if len(picked) == need:
                return picked
    top = max(s.bit_length() for s in masks)
    W = max(1, (top + 63) >> 6)
    Wm = (m + 63) >> 6
    words = <uint64_t*>malloc(m * W * sizeof(uint64_t))
    conflict = <uint64_t*>calloc(m * Wm, sizeof(uint64_t))
    avail = <uint64_t*>calloc((need + 1) * Wm, sizeof(uint64_t))
    picks = <int*>malloc(need * sizeof(int))
    try:
        for i in range(m):
            s = masks[i]
            for w in range(W):
                words[i * W + w] = <uint64_t>((s >> (64 * w)) & 0xFFFFFFFFFFFFFFFF)
        with nogil:
            for i in range(m):
                for j in range(i + 1, m):
                    hit = False
                    for w in range(W):
                        if words[i * W + w] & words[j * W + w]:
                            hit = True
                            break
                    if hit:
                        conflict[i * Wm + (j >> 6)] |= ONE << (j & 63)
                        conflict[j * Wm + (i >> 6)] |= ONE << (i & 63)
            for i in range(m):
                avail[i >> 6] |= ONE << (i & 63)
            ok = _pack_rec(conflict, Wm, avail, 0, need, picks)
        if not ok:
            return None
        return [picks[i] for i in range(need)]
    finally:
        free(words)
        free(conflict)
        free(avail)
        free(picks)


# -- incremental sunflower test (single-word masks) ------------------------

cdef bint _pack_small(const uint64_t* P, int cnt, int start, int need, uint64_t acc) noexcept nogil:
    cdef int i
    if need == 0:
        return True
    for i in range(start, cnt - need + 1):
        if not (P[i] & acc):
            if _pack_small(P, cnt, i + 1, need - 1, acc | P[i]):
                return True
    return False


cdef bint _creates_sunflower(const uint64_t* fam, int d, uint64_t c, int need,
                             uint64_t* P, uint64_t* seen) noexcept nogil:
    cdef int a, b, t, nseen = 0, cnt
    cdef uint64_t K
    cdef bint dup
    if d < need:
        return False
    for a in range(d):
        K = fam[a] & c
        dup = False
        for t in range(nseen):
            if seen[t] == K:
                dup = True
                break
        if dup:
            continue
        seen[nseen] = K
        nseen += 1
        cnt = 0
        for b in range(d):
            if (fam[b] & c) == K:
                P[cnt] = fam[b] & ~K
                cnt += 1
        if cnt >= need and _pack_small(P, cnt, 0, need, 0):
            return True
    return False


def creates_sunflower(fam, c, int need):
    cdef int d = len(fam), i
    cdef uint64_t* buf = <uint64_t*>malloc((3 * d + 1) * sizeof(uint64_t))
    try:
        for i in range(d):
            buf[i] = <uint64_t>fam[i]
        return bool(_creates_sunflower(buf, d, <uint64_t>c, need, buf + d, buf + 2 * d))
    finally:
        free(buf)


# -- normal-form branch and bound ------------------------------------------

cdef struct SearchState:
    int m
    int Wc
    int need
    long long cap
    long long budget
    int floor
    int d
    int best
    long long nodes
    int complete
    int improved
    const uint64_t* cands
    const uint64_t* compat
    uint64_t* allowed
    int* path
    int* best_path
    int* used
    int* nxt
    uint64_t* fam
    uint64_t* P
    uint64_t* seen


cdef void _run(SearchState* s) noexcept nogil:
    cdef int d = s.d, j, j0, u, found, w, Wc = s.Wc
    cdef uint64_t c, high
    cdef uint64_t* row
    cdef bint visit = True
    while True:
        if visit:
            if s.nodes >= s.budget:
                s.d = d
                s.complete = 0
                return
            s.nodes += 1
            if d > s.best:
                s.best = d
                s.improved = 1
                for j in range(d):
                    s.best_path[j] = s.path[j]
                if s.cap and s.best >= s.cap:
                    s.d = d
                    s.complete = 2
                    return
            s.nxt[d] = s.path[d - 1] + 1 if d else 0
            visit = False
        j0 = s.nxt[d]
        row = s.allowed + d * Wc
        u = s.used[d]
        found = -1
        j = next_bit(row, Wc, j0)
        while j >= 0:
            if d + popc_from(row, Wc, j) <= s.best:
                break
            c = s.cands[j]
            high = c >> u if u < 64 else 0
            if not (high & (high + 1)):
                if s.need <= 0 or not _creates_sunflower(s.fam, d, c, s.need, s.P, s.seen):
                    found = j
                    break
            j = next_bit(row, Wc, j + 1)
        if found < 0:
            if d == s.floor:
                s.d = d
                s.complete = 1
                return
            d -= 1
            continue
        s.nxt[d] = found + 1
        c = s.cands[found]
        s.path[d] = found
        s.fam[d] = c
        for w in range(Wc):
            s.allowed[(d + 1) * Wc + w] = row[w] & s.compat[found * Wc + w]
        high = c >> u if u < 64 else 0
        s.used[d + 1] = u + popc(high)
        d += 1
        visit = True


def search_core(cands, compat, int r, cap, budget, start=(), int floor=0, int best=0, best_path=None):
    cdef int m = len(cands)
    cdef int Wc = max(1, (m + 63) >> 6)
    cdef int i, w, j, t
    cdef uint64_t high
    cdef SearchState s
    cdef uint64_t* cand_buf
    cdef uint64_t* compat_buf
    if any(c.bit_length() > 64 for c in cands):
        raise ValueError("compiled search supports ground sets of at most 64 elements")
    cand_buf = <uint64_t*>malloc((m + 1) * sizeof(uint64_t))
    compat_buf = <uint64_t*>calloc((m + 1) * Wc, sizeof(uint64_t))
    s.allowed = <uint64_t*>calloc((m + 2) * Wc, sizeof(uint64_t))
    s.path = <int*>calloc(m + 1, sizeof(int))
    s.best_path = <int*>calloc(m + 1, sizeof(int))
    s.used = <int*>calloc(m + 2, sizeof(int))
    s.nxt = <int*>calloc(m + 2, sizeof(int))
    s.fam = <uint64_t*>calloc(m + 1, sizeof(uint64_t))
    s.P = <uint64_t*>calloc(m + 1, sizeof(uint64_t))
    s.seen = <uint64_t*>calloc(m + 1, sizeof(uint64_t))
    try:
        for i in range(m):
            cand_buf[i] = <uint64_t>cands[i]
            row = compat[i]
            for w in range(Wc):
                compat_buf[i * Wc + w] = <uint64_t>((row >> (64 * w)) & 0xFFFFFFFFFFFFFFFF)
        for i in range(m):
            s.allowed[i >> 6] |= ONE << (i & 63)
        s.m = m
        s.Wc = Wc
        s.need = r - 1
        s.cap = cap or 0
        s.budget = budget
        s.floor = floor
        s.best = best
        s.nodes = 0
        s.complete = 0
        s.improved = 0
        s.cands = cand_buf
        s.compat = compat_buf
        s.used[0] = 0
        t = 0
        for j in start:
            high = cand_buf[j] >> s.used[t] if s.used[t] < 64 else 0
            if (high & (high + 1)) or not ((s.allowed[t * Wc + (j >> 6)] >> (j & 63)) & 1) \
                    or (t and j <= s.path[t - 1]):
                raise ValueError("start path is not a valid search node")
            s.nxt[t] = j + 1
            s.path[t] = j
            s.fam[t] = cand_buf[j]
            for w in range(Wc):
                s.allowed[(t + 1) * Wc + w] = s.allowed[t * Wc + w] & compat_buf[j * Wc + w]
            s.used[t + 1] = s.used[t] + popc(high)
            t += 1
        s.d = t
        with nogil:
            _run(&s)
        if s.improved:
            best_path = [s.best_path[i] for i in range(s.best)]
        checkpoint = None if s.complete else [s.path[i] for i in range(s.d)]
        return s.best, best_path, s.nodes, bool(s.complete), checkpoint
    finally:
        free(cand_buf)
        free(compat_buf)
        free(s.allowed)
        free(s.path)
        free(s.best_path)
        free(s.used)
        free(s.nxt)
        free(s.fam)
        free(s.P)
        free(s.seen)
