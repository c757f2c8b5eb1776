"""Exact sunflower detection.

For r >= 2 the kernel of any r-petal sunflower equals the intersection of
any two of its petals, so only the pairwise intersections of the family are
candidate kernels.  For each candidate K the members containing K are
reduced to ``S - K`` and a disjoint packing of size r is searched for.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations

from ._backend import kernels
from .family import DuplicateMemberError, FamilyError, MemberSet, SetFamily, elements_of, mask_of


@dataclass(frozen=True)
class SunflowerCertificate:
    r: int
    petal_indices: tuple[int, ...]
    kernel: MemberSet

    def to_json(self, fam: SetFamily) -> dict:
        return {
            "r": self.r,
            "kernel": self.kernel.elements,
            "petals": [elements_of(fam.masks[i]) for i in self.petal_indices],
        }


@dataclass(frozen=True)
class NoSunflowerCertificate:
    r: int
    exhaustive_kernel_count: int

    def to_json(self, fam: SetFamily | None = None) -> dict:
        return {"r": self.r, "sunflower_free": True, "kernels_examined": self.exhaustive_kernel_count}


def certificate_from_json(data: dict, fam: SetFamily):
    """Rebuild a certificate; petals are located in ``fam`` by value."""
    if data.get("sunflower_free"):
        return NoSunflowerCertificate(int(data["r"]), int(data["kernels_examined"]))
    try:
        idx = tuple(fam.index_of(mask_of(p)) for p in data["petals"])
    except ValueError as exc:
        raise FamilyError("certificate petal is not a member of the family") from exc
    return SunflowerCertificate(int(data["r"]), idx, MemberSet.of(data["kernel"]))


def is_sunflower_masks(masks) -> bool:
    """Whether the given sets form a sunflower (pairwise intersections all equal)."""
    masks = list(masks)
    if len(masks) < 2:
        return True
    core = masks[0]
    for m in masks[1:]:
        core &= m
    return all(a & b == core for a, b in combinations(masks, 2))


def verify_sunflower(fam: SetFamily, cert: SunflowerCertificate) -> bool:
    idx = cert.petal_indices
    for i in idx:
        if not 0 <= i < len(fam):
            raise IndexError(f"petal index {i} out of range for family of size {len(fam)}")
    if len(idx) != cert.r or len(set(idx)) != len(idx) or cert.r < 2:
        return False
    petals = [fam.masks[i] for i in idx]
    return all(a & b == cert.kernel.mask for a, b in combinations(petals, 2))


def _require_distinct(fam: SetFamily):
    if not fam.distinct and len(set(fam.masks)) != len(fam.masks):
        raise DuplicateMemberError("sunflower detection needs distinct members")


def candidate_kernels(fam: SetFamily) -> list[int]:
    """Distinct pairwise intersections, smallest first."""
    ks = {a & b for a, b in combinations(fam.masks, 2)}
    return sorted(ks, key=lambda K: (K.bit_count(), elements_of(K)))


def _try_kernel(masks, K, r):
    idx = [i for i, S in enumerate(masks) if S & K == K]
    if len(idx) < r:
        return None
    reduced = [masks[i] ^ K for i in idx]
    order = sorted(range(len(idx)), key=lambda t: (reduced[t].bit_count(), t))
    picks = kernels.pack_disjoint([reduced[t] for t in order], r)
    if picks is None:
        return None
    return tuple(sorted(idx[order[p]] for p in picks))


def find_sunflower(fam: SetFamily, r: int, threads: int = 1):
    """An r-petal sunflower certificate, or a NoSunflowerCertificate.

    With ``threads > 1`` candidate kernels are tried concurrently; the
    reported certificate is still the one for the first kernel in order.
    """
    if r < 2:
        raise ValueError(f"petal count must be >= 2, got {r}")
    _require_distinct(fam)
    masks = fam.masks
    if len(masks) < r:
        return NoSunflowerCertificate(r, 0)
    ks = candidate_kernels(fam)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            for K, petals in zip(ks, pool.map(lambda K: _try_kernel(masks, K, r), ks)):
                if petals is not None:
                    return SunflowerCertificate(r, petals, MemberSet(K))
        return NoSunflowerCertificate(r, len(ks))
    for K in ks:
        petals = _try_kernel(masks, K, r)
        if petals is not None:
            return SunflowerCertificate(r, petals, MemberSet(K))
    return NoSunflowerCertificate(r, len(ks))


def has_sunflower(fam: SetFamily, r: int) -> bool:
    return isinstance(find_sunflower(fam, r), SunflowerCertificate)


def max_petals(fam: SetFamily) -> tuple[int, SunflowerCertificate]:
    """Largest r with an r-petal sunflower in ``fam``, plus a witness."""
    if len(fam) < 2:
        raise FamilyError("max_petals needs at least two members")
    best = find_sunflower(fam, 2)
    r = 3
    while r <= len(fam):
        cert = find_sunflower(fam, r)
        if not isinstance(cert, SunflowerCertificate):
            break
        best = cert
        r += 1
    return best.r, best


def brute_force_sunflower(fam: SetFamily, r: int):
    """Reference oracle: lexicographically first r-subset of members forming a sunflower."""
    for combo in combinations(range(len(fam)), r):
        if is_sunflower_masks(fam.masks[i] for i in combo):
            return combo
    return None
