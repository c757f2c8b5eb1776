"""Generators for sunflower-free families and design examples."""

from __future__ import annotations

from itertools import product

from .family import FamilyError, SetFamily, mask_of

SIZE_LIMIT = 1 << 20

FANO_LINES = (
    (1, 2, 3),
    (1, 4, 5),
    (1, 6, 7),
    (2, 4, 6),
    (2, 5, 7),
    (3, 4, 7),
    (3, 5, 6),
)


def transversal_family(k: int, r: int, limit: int = SIZE_LIMIT) -> SetFamily:
    """All transversals of k disjoint blocks of size r-1.

    Block i (1-based) is {(i-1)(r-1)+1, ..., i(r-1)}; members come out of a
    mixed-radix counter.  Among any r members two agree in every block, so a
    sunflower would have to agree everywhere.
    """
    if k < 1 or r < 2:
        raise FamilyError(f"need k >= 1 and r >= 2, got k={k}, r={r}")
    w = r - 1
    if w**k > limit:
        raise FamilyError(f"(r-1)^k = {w**k} exceeds size limit {limit}")
    members = [
        mask_of(i * w + choice + 1 for i, choice in enumerate(digits))
        for digits in product(range(w), repeat=k)
    ]
    return SetFamily(members, n=k * w)


def product_compose(a: SetFamily, b: SetFamily, limit: int = SIZE_LIMIT) -> SetFamily:
    """All unions A | B' where B' is B shifted past a's ground set."""
    ka, kb = a.uniformity(), b.uniformity()
    if ka is None or kb is None:
        raise FamilyError("product_compose needs nonempty uniform families")
    if len(a) * len(b) > limit:
        raise FamilyError(f"product of size {len(a) * len(b)} exceeds size limit {limit}")
    shift = a.n
    members = [x | (y << shift) for x in a.masks for y in b.masks]
    return SetFamily(members, n=a.n + b.n)


def fano_plane() -> SetFamily:
    """The 7 lines of PG(2,2) on points 1..7."""
    return SetFamily(FANO_LINES, n=7)


def triangle() -> SetFamily:
    return SetFamily([(1, 2), (1, 3), (2, 3)], n=3)


def two_triangles() -> SetFamily:
    return SetFamily([(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)], n=6)
