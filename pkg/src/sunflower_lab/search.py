"""Exact extremal numbers for sunflower-free families by branch and bound.

Families are explored in a normal form: members are added in increasing
lexicographic order and each new member may introduce unused elements only
as the next consecutive labels.  Relabeling elements by order of first use
along the lexicographic ordering shows every family has an isomorphic copy
in normal form, so the pruning drops isomorphic duplicates only.

Results are exact for the ground set ``[n_max]``.  A family of m members in
which any two share at least l elements spans at most k + (m-1)(k-l)
points, and m is at most the Erdos-Rado bound, which gives the certified
cap returned by :func:`certified_n_max`.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

from . import _backend
from .bounds import er_bound, main_bound, main2_bound, recursion_f_bound, RecursionVariant, BoundDomainError
from .detect import NoSunflowerCertificate, find_sunflower, is_sunflower_masks
from .family import SetFamily, check_L_intersecting, check_ell_intersecting, is_uniform, mask_of

DEFAULT_BUDGET = 10**8


def default_budget() -> int:
    env = os.environ.get("SUNFLOWER_LAB_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class SearchProblem:
    k: int
    r: int
    n_max: int
    L: tuple[int, ...] | None = None
    ell_min: int | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("extremal search needs k >= 1")
        if self.r < 2:
            raise ValueError("petal count must be >= 2")
        if self.n_max < self.k:
            raise ValueError(f"n_max={self.n_max} smaller than k={self.k}")
        if self.L is not None and self.ell_min is not None:
            raise ValueError("give either L or ell_min, not both")
        if self.L is not None:
            object.__setattr__(self, "L", tuple(sorted(set(self.L))))
            if not self.L or min(self.L) < 0 or max(self.L) >= self.k:
                raise ValueError(f"L must be a nonempty subset of 0..{self.k - 1}")
        if self.ell_min is not None and not 0 <= self.ell_min < self.k:
            raise ValueError(f"ell must lie in 0..{self.k - 1}")

    def pair_ok(self, size: int) -> bool:
        if self.L is not None:
            return size in self.L
        if self.ell_min is not None:
            return size >= self.ell_min
        return True

    @property
    def min_intersection(self) -> int:
        if self.L is not None:
            return self.L[0]
        return self.ell_min or 0

    def describe(self) -> dict:
        d = {"k": self.k, "r": self.r, "n_max": self.n_max}
        if self.L is not None:
            d["L"] = list(self.L)
        if self.ell_min is not None:
            d["ell"] = self.ell_min
        return d


@dataclass
class SearchResult:
    problem: SearchProblem
    optimum: int
    witness: SetFamily
    nodes_explored: int
    exhaustive: bool
    cap: int
    backend: str
    checkpoint: list[int] | None = None
    best_path: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "problem": self.problem.describe(),
            "optimum": self.optimum,
            "witness": self.witness.as_lists(),
            "nodes_explored": self.nodes_explored,
            "exhaustive": self.exhaustive,
            "cap": self.cap,
            "backend": self.backend,
            "checkpoint": self.checkpoint,
            "best_path": self.best_path,
        }


def candidates(n: int, k: int) -> list[int]:
    """All k-subsets of [n] as bitmasks, lexicographic order."""
    return [mask_of(c) for c in combinations(range(1, n + 1), k)]


def compat_rows(cands: list[int], problem: SearchProblem) -> list[int]:
    rows = []
    for a in cands:
        row = 0
        for j, b in enumerate(cands):
            if a != b and problem.pair_ok((a & b).bit_count()):
                row |= 1 << j
        rows.append(row)
    return rows


def size_cap(k: int, r: int) -> int:
    v = er_bound(k, r).value
    return v.numerator // v.denominator


def certified_n_max(k: int, r: int, min_intersection: int = 0) -> int:
    """Ground-set size beyond which the optimum cannot grow."""
    m = size_cap(k, r)
    return k + (m - 1) * (k - min_intersection)


def extremal_search(
    p: SearchProblem,
    budget: int | None = None,
    threads: int = 1,
    resume: dict | None = None,
    kernels=None,
) -> SearchResult:
    """Maximum r-sunflower-free family under the problem's constraint.

    ``resume`` takes ``{"checkpoint": [...], "best_path": [...],
    "nodes": int}`` from an interrupted run's :class:`SearchResult`.
    """
    budget = default_budget() if budget is None else budget
    kern = kernels or _backend.search_kernels(p.n_max)
    cands = candidates(p.n_max, p.k)
    compat = compat_rows(cands, p)
    cap = size_cap(p.k, p.r)

    if threads > 1 and resume is None:
        best, path, nodes, complete, checkpoint = _parallel(kern, cands, compat, p.r, cap, budget, threads)
    else:
        start, best_path, prior = (), None, 0
        if resume:
            start = tuple(resume["checkpoint"])
            best_path = list(resume.get("best_path") or [])
            prior = int(resume.get("nodes", 0))
        best, path, nodes, complete, checkpoint = kern.search_core(
            cands, compat, p.r, cap, budget, start, 0, len(best_path or ()), best_path
        )
        nodes += prior
        if path is None:
            path = best_path or []
    witness = SetFamily([cands[j] for j in path], n=p.n_max)
    return SearchResult(
        problem=p,
        optimum=best,
        witness=witness,
        nodes_explored=nodes,
        exhaustive=complete,
        cap=cap,
        backend=kern.BACKEND,
        checkpoint=checkpoint,
        best_path=list(path),
    )


def _parallel(kern, cands, compat, r, cap, budget, threads):
    """Split at the second member and search each subtree on its own.

    Each subtree gets an equal share of the node budget.  The optimum is
    deterministic; among equal optima the subtree with the smallest second
    member supplies the witness.
    """
    need = r - 1
    first = cands[0]
    u = first.bit_count()
    seconds = []
    for j in range(1, len(cands)):
        c = cands[j]
        high = c >> u
        if not (compat[0] >> j) & 1 or high & (high + 1):
            continue
        if need > 0 and kern.creates_sunflower([first], c, need):
            continue
        seconds.append(j)
    if not seconds:
        return 1, [0], 2, True, None
    share = max(1, budget // len(seconds))
    with ThreadPoolExecutor(threads) as pool:
        outs = list(pool.map(lambda j: kern.search_core(cands, compat, r, cap, share, (0, j), 2, 1, None), seconds))
    best, path, nodes, complete = 1, [0], 2, True
    for b, bp, nd, comp, _ in outs:
        nodes += nd
        complete = complete and comp
        if bp is not None and b > best:
            best, path = b, bp
    if best >= cap:
        complete = True
    return best, path, nodes, complete, None


# -- independent checks ----------------------------------------------------

def verify_witness(result: SearchResult) -> list[str]:
    """Re-check a witness through code paths separate from the search."""
    p, w = result.problem, result.witness
    problems = []
    if len(w) != result.optimum:
        problems.append("witness size differs from optimum")
    if not is_uniform(w, p.k):
        problems.append("witness not uniform")
    if p.L is not None and not check_L_intersecting(w, p.L)[0]:
        problems.append("witness violates L")
    if p.ell_min is not None and not check_ell_intersecting(w, p.ell_min)[0]:
        problems.append("witness violates ell")
    if len(w) >= p.r and not isinstance(find_sunflower(w, p.r), NoSunflowerCertificate):
        problems.append("witness contains a sunflower")
    if result.optimum > result.cap:
        problems.append("optimum exceeds Erdos-Rado cap")
    return problems


def naive_optimum(p: SearchProblem) -> tuple[int, list[int]]:
    """Plain include/exclude enumeration with no symmetry breaking.

    Sunflowers are tested by brute force over (r-1)-subsets, independent of
    the packing kernels.  Only for tiny candidate sets.
    """
    cands = candidates(p.n_max, p.k)
    if len(cands) > 24:
        raise ValueError("naive enumeration limited to 24 candidates")
    best = (0, [])

    def closes_sunflower(chosen, c):
        for combo in combinations(chosen, p.r - 1):
            if is_sunflower_masks(list(combo) + [c]):
                return True
        return False

    def rec(i, chosen):
        nonlocal best
        if len(chosen) > best[0]:
            best = (len(chosen), list(chosen))
        if len(chosen) + len(cands) - i <= best[0]:
            return
        for j in range(i, len(cands)):
            c = cands[j]
            if all(p.pair_ok((c & a).bit_count()) for a in chosen) and not closes_sunflower(chosen, c):
                chosen.append(c)
                rec(j + 1, chosen)
                chosen.pop()

    rec(0, [])
    return best


def enumerate_families(k: int, n: int, *, L=None, ell=None, r: int | None = None):
    """Yield every normal-form family (empty one included).

    ``r=None`` drops the sunflower constraint.  The constraint on pairwise
    intersections must be hereditary, which all supported ones are.
    """
    allowed = set(L) if L is not None else None
    cands = candidates(n, k)

    def ok_pair(a, b):
        size = (a & b).bit_count()
        if allowed is not None:
            return size in allowed
        return ell is None or size >= ell

    def rec(start, chosen, used):
        yield SetFamily(chosen, n=n)
        for j in range(start, len(cands)):
            c = cands[j]
            high = c >> used
            if high & (high + 1):
                continue
            if not all(ok_pair(c, a) for a in chosen):
                continue
            if r is not None and any(
                is_sunflower_masks(list(combo) + [c]) for combo in combinations(chosen, r - 1)
            ):
                continue
            chosen.append(c)
            yield from rec(j + 1, chosen, used + high.bit_count())
            chosen.pop()

    yield from rec(0, [], 0)


# -- tables ----------------------------------------------------------------

def _stability(p: SearchProblem, opt: int, budget: int, kernels=None):
    """Does raising n_max by k change the optimum?  None when not affordable."""
    bigger = SearchProblem(p.k, p.r, p.n_max + p.k, p.L, p.ell_min)
    res = extremal_search(bigger, budget=budget, kernels=kernels)
    if not res.exhaustive:
        return None
    return res.optimum != opt


def g_table(k_max: int, r: int, ell: int, *, n_limit: int = 16, budget: int | None = None,
            stability_check: bool = True, alpha=None, D=None, kernels=None) -> list[dict]:
    """Rows g(k, r, ell) for k = ell+1 .. k_max.

    The l-intersecting bound column is filled only when both constants
    ``alpha`` and ``D`` are supplied and k - ell is inside its log domain.
    """
    budget = default_budget() if budget is None else budget
    rows = []
    for k in range(ell + 1, k_max + 1):
        cert = certified_n_max(k, r, ell)
        n_max = min(cert, max(n_limit, k))
        p = SearchProblem(k, r, n_max, ell_min=ell)
        res = extremal_search(p, budget=budget, kernels=kernels)
        row = {
            "k": k, "r": r, "ell": ell, "value": res.optimum, "exhaustive": res.exhaustive,
            "n_max": n_max, "certified_n_max": cert, "certified_cap": n_max >= cert,
            "er_bound": er_bound(k, r).value, "nodes": res.nodes_explored, "witness": res.witness,
            "witness_problems": verify_witness(res),
        }
        try:
            use = r > 2 and alpha is not None and D is not None
            row["ell_bound"] = main2_bound(k, ell, alpha, D).value if use else None
        except BoundDomainError:
            row["ell_bound"] = None
        row["ground_sensitive"] = (
            None if row["certified_cap"] or not stability_check else _stability(p, res.optimum, budget, kernels)
        )
        rows.append(row)
    return sorted(rows, key=lambda x: (x["k"], x["r"], x["ell"]))


def f_table(k_max: int, s: int, *, r: int = 3, n_limit: int = 9, budget: int | None = None,
            k_min: int | None = None, kernels=None) -> list[dict]:
    """Rows f(k, r, s) for k = s .. k_max, maximizing over every L of size s."""
    budget = default_budget() if budget is None else budget
    rows = []
    for k in range(max(s, k_min or 1), k_max + 1):
        per_L = []
        for L in combinations(range(k), s):
            cert = certified_n_max(k, r, L[0])
            n_max = min(cert, max(n_limit, k))
            res = extremal_search(SearchProblem(k, r, n_max, L=L), budget=budget, kernels=kernels)
            per_L.append({
                "L": list(L), "value": res.optimum, "exhaustive": res.exhaustive, "n_max": n_max,
                "certified_cap": n_max >= cert, "nodes": res.nodes_explored, "witness": res.witness,
                "witness_problems": verify_witness(res),
            })
        top = max(per_L, key=lambda x: x["value"])
        row = {
            "k": k, "r": r, "s": s, "value": top["value"], "argmax_L": top["L"],
            "exhaustive": all(x["exhaustive"] for x in per_L),
            "certified_cap": all(x["certified_cap"] for x in per_L),
            "per_L": per_L,
            "main_bound": main_bound(k, s).value if r == 3 else None,
            "recursion_as_stated": recursion_f_bound(k, s, variant=RecursionVariant.AS_STATED).value if r == 3 else None,
            "recursion_as_proved": recursion_f_bound(k, s, variant=RecursionVariant.AS_PROVED).value if r == 3 else None,
        }
        rows.append(row)
    return rows


__all__ = [
    "SearchProblem", "SearchResult", "extremal_search", "certified_n_max", "size_cap", "candidates",
    "verify_witness", "naive_optimum", "enumerate_families", "g_table", "f_table",
]
