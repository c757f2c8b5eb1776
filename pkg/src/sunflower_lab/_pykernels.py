"""Pure-Python hot kernels.  Must stay behaviorally identical to _ckernels.pyx,
including node counts reported by :func:`search_core`."""

BACKEND = "python"


def pack_disjoint(masks, need):
    """Positions of ``need`` pairwise-disjoint masks, or None.

    Tries a greedy pass first, then backtracks over conflict bitsets.  Masks
    are scanned in the order given.
    """
    if need <= 0:
        return []
    m = len(masks)
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
    conflict = [0] * m
    for i in range(m):
        si = masks[i]
        row = 0
        for j in range(m):
            if j != i and si & masks[j]:
                row |= 1 << j
        conflict[i] = row
    picks = []

    def rec(avail, left):
        if left == 0:
            return True
        while avail:
            if avail.bit_count() < left:
                return False
            low = avail & -avail
            i = low.bit_length() - 1
            avail ^= low
            picks.append(i)
            if rec(avail & ~conflict[i], left - 1):
                return True
            picks.pop()
        return False

    return picks if rec((1 << m) - 1, need) else None


def _pack_small(P, start, need, acc):
    if need == 0:
        return True
    for i in range(start, len(P) - need + 1):
        if not P[i] & acc:
            if _pack_small(P, i + 1, need - 1, acc | P[i]):
                return True
    return False


def creates_sunflower(fam, c, need):
    """Would adding ``c`` to ``fam`` close a sunflower with ``need + 1`` petals?"""
    if len(fam) < need:
        return False
    seen = set()
    for a in fam:
        K = a & c
        if K in seen:
            continue
        seen.add(K)
        P = [b & ~K for b in fam if b & c == K]
        if len(P) >= need and _pack_small(P, 0, need, 0):
            return True
    return False


def search_core(cands, compat, r, cap, budget, start=(), floor=0, best=0, best_path=None):
    """Branch and bound over families in normal form.

    ``cands`` are candidate members (bitmasks) in lexicographic order and
    ``compat[j]`` is the bitset of candidates allowed next to candidate j.
    A family is explored as an increasing index sequence whose members
    introduce unused elements only as the next consecutive labels, so each
    isomorphism class keeps at least one representative.

    ``r == 0`` disables the sunflower constraint.  ``start`` is the node to
    visit first (a checkpoint or subtree root); the search never backtracks
    above depth ``floor``.  Returns ``(best, best_path, nodes, complete,
    checkpoint)``; ``best_path`` is None if nothing beat the initial ``best``.
    """
    m = len(cands)
    need = r - 1
    path = []
    fam = []
    allowed = [(1 << m) - 1]
    used = [0]
    nxt = []
    for j in start:
        high = cands[j] >> used[-1]
        if high & (high + 1) or not (allowed[-1] >> j) & 1 or (fam and j <= path[-1]):
            raise ValueError("start path is not a valid search node")
        nxt.append(j + 1)
        path.append(j)
        fam.append(cands[j])
        allowed.append(allowed[-1] & compat[j])
        used.append(used[-1] + high.bit_count())
    d = len(path)
    nodes = 0
    visit = True
    while True:
        if visit:
            if nodes >= budget:
                return best, best_path, nodes, False, list(path)
            nodes += 1
            if d > best:
                best = d
                best_path = list(path)
                if cap and best >= cap:
                    return best, best_path, nodes, True, None
            nxt.append(path[-1] + 1 if d else 0)
            visit = False
        j0 = nxt[d]
        av = allowed[d] >> j0
        u = used[d]
        found = -1
        while av:
            if d + av.bit_count() <= best:
                break
            low = av & -av
            j = j0 + low.bit_length() - 1
            av ^= low
            c = cands[j]
            high = c >> u
            if high & (high + 1):
                continue
            if need > 0 and creates_sunflower(fam, c, need):
                continue
            found = j
            break
        if found < 0:
            nxt.pop()
            if d == floor:
                return best, best_path, nodes, True, None
            d -= 1
            path.pop()
            fam.pop()
            allowed.pop()
            used.pop()
            continue
        nxt[d] = found + 1
        c = cands[found]
        path.append(found)
        fam.append(c)
        allowed.append(allowed[d] & compat[found])
        used.append(u + (c >> u).bit_count())
        d += 1
        visit = True
