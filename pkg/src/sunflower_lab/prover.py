"""Proof replay on concrete families.

:func:`decompose_L_intersecting` rebuilds the induction on |L| for a
k-uniform, L-intersecting, 3-sunflower-free family as a certificate tree:

* ``BASE_DEZA``  |L| = 1; the Deza dichotomy bounds the family.
* ``SKIP_ELL1``  no pair meets in min(L) elements; recurse on L minus min(L).
* ``SPLIT``      a pair F1, F2 meets in l1 = min(L) elements.  Every member
  meets M = F1 | F2 in more than l1 points, so the families
  F(T) = {F : T <= F} over the (l1+1)-subsets T of M cover the family.
  Each child is G(T) = {F - T : F in F(T)}, which is (k-l1-1)-uniform and
  intersects in sizes {l - l1 - 1 : l in L, l > l1}.

:func:`verify_certificate` re-checks a serialized tree against a family
without trusting anything the builder computed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import comb

from .bounds import main_bound
from .detect import SunflowerCertificate, find_sunflower, is_sunflower_masks
from .family import FamilyError, MemberSet, SetFamily, elements_of, mask_of


class PreconditionError(FamilyError):
    """Input violates a hypothesis; ``witness`` shows how."""

    def __init__(self, msg: str, witness=None):
        super().__init__(msg)
        self.witness = witness


class ProofFailure(AssertionError):
    """A step the proof guarantees did not hold on a valid input."""


class DezaOutcome(str, Enum):
    WITHIN_BOUND = "WITHIN_BOUND"
    IS_SUNFLOWER = "IS_SUNFLOWER"
    VIOLATION = "VIOLATION"


class NodeCase(str, Enum):
    BASE_DEZA = "BASE_DEZA"
    SKIP_ELL1 = "SKIP_ELL1"
    SPLIT = "SPLIT"


def _pairs_with_size(masks, size):
    for i, j in combinations(range(len(masks)), 2):
        if (masks[i] & masks[j]).bit_count() == size:
            yield i, j


def _realized(masks) -> list[int]:
    return sorted({(a & b).bit_count() for a, b in combinations(masks, 2)})


def _uniform_k(masks, k=None):
    sizes = {m.bit_count() for m in masks}
    if k is not None:
        sizes.add(k)
    if len(sizes) > 1:
        raise PreconditionError(f"family is not uniform (sizes {sorted(sizes)})")
    return sizes.pop() if sizes else None


# -- Deza dichotomy --------------------------------------------------------

def deza_check(fam: SetFamily, lam: int, k: int | None = None) -> DezaOutcome:
    """Classify a k-uniform {lam}-intersecting family.

    A sunflower is reported first; otherwise the size is compared with
    k^2 - k + 1.  VIOLATION would contradict the Deza dichotomy.
    """
    k = _uniform_k(fam.masks, k)
    for i, j in combinations(range(len(fam)), 2):
        if (fam.masks[i] & fam.masks[j]).bit_count() != lam:
            raise PreconditionError(f"members {i} and {j} do not meet in exactly {lam} points", (i, j))
    if is_sunflower_masks(fam.masks):
        return DezaOutcome.IS_SUNFLOWER
    if len(fam) <= k * k - k + 1:
        return DezaOutcome.WITHIN_BOUND
    return DezaOutcome.VIOLATION


# -- the key lemma -----------------------------------------------------------

@dataclass
class SoulResult:
    holds: bool
    M: MemberSet
    violator: int | None = None
    sunflower: SunflowerCertificate | None = None
    precondition_failures: list[str] = field(default_factory=list)


def soul_check(fam: SetFamily, ell: int, i: int, j: int, check_preconditions: bool = True) -> SoulResult:
    """Does every member meet M = F_i | F_j in more than ``ell`` points?

    When a member F meets M in exactly ``ell`` points, {F, F_i, F_j} is
    returned as a 3-petal sunflower if it is one.
    """
    masks = fam.masks
    if not (0 <= i < len(masks) and 0 <= j < len(masks)) or i == j:
        raise IndexError("pair indices must be distinct and in range")
    f1, f2 = masks[i], masks[j]
    if (f1 & f2).bit_count() != ell:
        raise PreconditionError(f"|F_{i} & F_{j}| != {ell}")
    failures = []
    if check_preconditions:
        low = [(a, b) for a, b in combinations(range(len(masks)), 2) if (masks[a] & masks[b]).bit_count() < ell]
        if low:
            failures.append(f"not {ell}-intersecting: pair {low[0]}")
        if len(masks) >= 3 and isinstance(find_sunflower(fam, 3), SunflowerCertificate):
            failures.append("family contains a 3-petal sunflower")
    M = f1 | f2
    for t, F in enumerate(masks):
        if (F & M).bit_count() <= ell:
            petals = tuple(sorted({t, i, j}))
            cert = None
            if len(petals) == 3 and is_sunflower_masks([masks[x] for x in petals]):
                cert = SunflowerCertificate(3, petals, MemberSet(f1 & f2))
            return SoulResult(False, MemberSet(M), t, cert, failures)
    return SoulResult(True, MemberSet(M), None, None, failures)


# -- certificate tree ------------------------------------------------------

@dataclass
class DecompositionNode:
    case: NodeCase
    family_size: int
    k: int
    L: list[int]
    L_realized: list[int]
    certified_bound: Fraction
    pair: tuple[int, int] | None = None
    M: MemberSet | None = None
    ell1: int | None = None
    n_T: int | None = None
    children: dict[tuple[int, ...], "DecompositionNode"] = field(default_factory=dict)
    skip_child: "DecompositionNode | None" = None
    deza_outcome: DezaOutcome | None = None
    step_bound: Fraction | None = None
    tight_bound: Fraction | None = None
    soul_holds: bool | None = None
    cover_holds: bool | None = None
    masks: tuple[int, ...] = field(default=(), repr=False, compare=False)

    def walk(self):
        yield self
        if self.skip_child is not None:
            yield from self.skip_child.walk()
        for child in self.children.values():
            yield from child.walk()

    def to_json(self) -> dict:
        out = {
            "case": self.case.value,
            "family_size": self.family_size,
            "k": self.k,
            "L": self.L,
            "L_realized": self.L_realized,
            "certified_bound": _fstr(self.certified_bound),
        }
        if self.case is NodeCase.BASE_DEZA:
            out["deza_outcome"] = self.deza_outcome.value
        elif self.case is NodeCase.SKIP_ELL1:
            out["skip_child"] = self.skip_child.to_json()
        else:
            out.update(
                pair=list(self.pair),
                M=self.M.elements,
                ell1=self.ell1,
                n_T=self.n_T,
                soul_holds=self.soul_holds,
                cover_holds=self.cover_holds,
                step_bound=_fstr(self.step_bound),
                tight_bound=_fstr(self.tight_bound),
                children=[{"T": list(T), "node": c.to_json()} for T, c in self.children.items()],
            )
        return out


def _fstr(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _base_bound(outcome: DezaOutcome, k: int, size: int) -> Fraction:
    if outcome is DezaOutcome.WITHIN_BOUND:
        return Fraction(k * k - k + 1)
    if outcome is DezaOutcome.IS_SUNFLOWER and size <= 2:
        return Fraction(2)
    raise ProofFailure(f"base case cannot bound a family of {size} members ({outcome.value})")


def _shift_L(L, ell1):
    return [x - ell1 - 1 for x in L if x > ell1]


def _build(masks: tuple[int, ...], k: int, L: list[int]) -> DecompositionNode:
    node = _build_node(masks, k, L)
    node.masks = tuple(masks)
    return node


def _build_node(masks: tuple[int, ...], k: int, L: list[int]) -> DecompositionNode:
    size = len(masks)
    realized = _realized(masks)
    if not set(realized) <= set(L):
        raise ProofFailure(f"realized intersections {realized} not inside {L}")
    if len(L) == 1:
        fam = SetFamily(masks, allow_empty=True)
        outcome = deza_check(fam, L[0], k)
        if outcome is DezaOutcome.VIOLATION:
            raise ProofFailure("Deza dichotomy violated")
        return DecompositionNode(NodeCase.BASE_DEZA, size, k, list(L), realized,
                                 _base_bound(outcome, k, size), deza_outcome=outcome)
    ell1 = L[0]
    pair = next(_pairs_with_size(masks, ell1), None)
    if pair is None:
        child = _build(masks, k, L[1:])
        return DecompositionNode(NodeCase.SKIP_ELL1, size, k, list(L), realized,
                                 child.certified_bound, skip_child=child)
    i, j = pair
    M = masks[i] | masks[j]
    soul = all((F & M).bit_count() > ell1 for F in masks)
    if not soul:
        raise ProofFailure(f"a member meets M = F{i} | F{j} in at most {ell1} points")
    Lbar = _shift_L(L, ell1)
    children = {}
    covered = 0
    for T_elems in combinations(elements_of(M), ell1 + 1):
        T = mask_of(T_elems)
        FT = [F for F in masks if F & T == T]
        if not FT:
            continue
        for t, F in enumerate(masks):
            if F & T == T:
                covered |= 1 << t
        G = tuple(sorted((F ^ T for F in FT), key=elements_of))
        children[T_elems] = _build(G, k - ell1 - 1, Lbar)
    cover = covered == (1 << size) - 1
    if not cover:
        raise ProofFailure("the families F(T) do not cover the family")
    factor = comb(2 * k - ell1, ell1 + 1)
    s = len(L)
    return DecompositionNode(
        NodeCase.SPLIT, size, k, list(L), realized,
        sum((c.certified_bound for c in children.values()), Fraction(0)),
        pair=(i, j), M=MemberSet(M), ell1=ell1, n_T=comb(M.bit_count(), ell1 + 1),
        children=children,
        step_bound=factor * main_bound(k, s - 1).value,
        tight_bound=factor * main_bound(k - ell1 - 1, s - 1).value,
        soul_holds=soul, cover_holds=cover,
    )


def decompose_L_intersecting(fam: SetFamily, L, require_sunflower_free: bool = True) -> DecompositionNode:
    """Certificate tree bounding ``|fam|`` for a k-uniform L-intersecting family.

    With ``require_sunflower_free=False`` a family containing 3-petal
    sunflowers is accepted; the tree is then only valid if every step that
    needs freeness still checks out (each step is re-verified anyway).
    """
    L = sorted(set(L))
    if not L:
        raise PreconditionError("L must be nonempty")
    k = _uniform_k(fam.masks)
    if k is None:
        raise PreconditionError("empty family")
    realized = _realized(fam.masks)
    if not set(realized) <= set(L):
        bad = next(p for p in combinations(range(len(fam)), 2)
                   if (fam.masks[p[0]] & fam.masks[p[1]]).bit_count() not in L)
        raise PreconditionError(f"family is not {L}-intersecting", bad)
    if require_sunflower_free and len(fam) >= 3:
        cert = find_sunflower(fam, 3)
        if isinstance(cert, SunflowerCertificate):
            raise PreconditionError("family contains a 3-petal sunflower", cert)
    return _build(fam.masks, k, L)


def certificate_problems(root: DecompositionNode) -> list[str]:
    """Bound checks on a built tree: at least the size, at most the closed form."""
    out = []
    if root.certified_bound < root.family_size:
        out.append("certified bound below family size")
    cap = main_bound(root.k, len(root.L)).value
    if root.certified_bound > cap:
        out.append(f"certified bound {root.certified_bound} exceeds closed form {float(cap):.6g}")
    return out


# -- independent verification ------------------------------------------------

def _frac(s) -> Fraction:
    return Fraction(s)


def verify_certificate(fam: SetFamily, data: dict) -> list[str]:
    """Re-check a serialized tree against ``fam``; returns the problems found."""
    problems: list[str] = []
    _verify_node(tuple(fam.masks), data, "root", problems)
    if not problems:
        if _frac(data["certified_bound"]) < len(fam):
            problems.append("root: bound below family size")
        if _frac(data["certified_bound"]) > main_bound(data["k"], len(data["L"])).value:
            problems.append("root: bound above closed form")
    return problems


def _verify_node(masks, d, where, problems) -> Fraction | None:
    def bad(msg):
        problems.append(f"{where}: {msg}")
        return None

    try:
        k, L, case = int(d["k"]), [int(x) for x in d["L"]], NodeCase(d["case"])
        claimed = _frac(d["certified_bound"])
    except (KeyError, ValueError, TypeError) as exc:
        return bad(f"malformed node ({exc})")
    if d.get("family_size") != len(masks):
        return bad("family size mismatch")
    if any(m.bit_count() != k for m in masks):
        return bad(f"members are not {k}-uniform")
    realized = _realized(masks)
    if d.get("L_realized") != realized:
        return bad("realized intersection sizes mismatch")
    if not set(realized) <= set(L) or L != sorted(set(L)):
        return bad("family is not L-intersecting")

    if case is NodeCase.BASE_DEZA:
        if len(L) != 1:
            return bad("base case with |L| != 1")
        if is_sunflower_masks(masks):
            if len(masks) > 2:
                return bad("base family is a sunflower with more than two members")
            expect = Fraction(2)
        elif len(masks) <= k * k - k + 1:
            expect = Fraction(k * k - k + 1)
        else:
            return bad("Deza dichotomy fails")
        return expect if claimed == expect else bad("base bound mismatch")

    if len(L) < 2:
        return bad("recursive case with |L| < 2")
    ell1 = L[0]
    if case is NodeCase.SKIP_ELL1:
        if ell1 in realized:
            return bad("min L is realized; skip not allowed")
        child = d.get("skip_child")
        if not isinstance(child, dict) or [int(x) for x in child.get("L", [])] != L[1:]:
            return bad("skip child must carry L minus min L")
        got = _verify_node(masks, child, where + "/skip", problems)
        if got is None:
            return None
        return got if claimed == got else bad("skip bound mismatch")

    try:
        i, j = (int(x) for x in d["pair"])
        M = mask_of(d["M"])
    except (KeyError, ValueError, TypeError):
        return bad("split node needs pair and M")
    if not (0 <= i < j < len(masks)):
        return bad("pair out of range")
    if (masks[i] & masks[j]).bit_count() != ell1:
        return bad("pair does not meet in min L points")
    if M != masks[i] | masks[j] or M.bit_count() != 2 * k - ell1:
        return bad("M is not the union of the pair")
    if any((F & M).bit_count() <= ell1 for F in masks):
        return bad("some member meets M in at most min L points")
    expected_T = {}
    for T_elems in combinations(elements_of(M), ell1 + 1):
        T = mask_of(T_elems)
        FT = [F for F in masks if F & T == T]
        if FT:
            expected_T[T_elems] = tuple(sorted((F ^ T for F in FT), key=elements_of))
    got_T = {}
    for entry in d.get("children", []):
        T_elems = tuple(sorted(int(x) for x in entry["T"]))
        if T_elems in got_T:
            return bad(f"duplicate child T={list(T_elems)}")
        got_T[T_elems] = entry["node"]
    if set(got_T) != set(expected_T):
        return bad("children do not match the nonempty F(T)")
    covered = 0
    for T_elems in expected_T:
        T = mask_of(T_elems)
        for t, F in enumerate(masks):
            if F & T == T:
                covered |= 1 << t
    if covered != (1 << len(masks)) - 1:
        return bad("F(T) do not cover the family")
    Lbar = _shift_L(L, ell1)
    total = Fraction(0)
    for T_elems, child_masks in expected_T.items():
        child = got_T[T_elems]
        if int(child.get("k", -1)) != k - ell1 - 1 or [int(x) for x in child.get("L", [])] != Lbar:
            return bad(f"child T={list(T_elems)} has wrong k or L")
        got = _verify_node(child_masks, child, f"{where}/T{list(T_elems)}", problems)
        if got is None:
            return None
        total += got
    return total if claimed == total else bad("split bound is not the sum of child bounds")


# -- cover audit for l-intersecting families ---------------------------------

@dataclass
class CoverAudit:
    ell: int
    k: int
    F0_index: int
    sizes: dict[tuple[int, ...], int]
    cover_holds: bool
    count_bound: int
    bound_holds: bool
    transfer_checked: int = 0
    transfer_lifted: list[tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=list)
    transfer_holds: bool = True

    @property
    def ok(self) -> bool:
        return self.cover_holds and self.bound_holds and self.transfer_holds


def lift_sunflower(fam: SetFamily, T: int, G: SetFamily, cert: SunflowerCertificate) -> SunflowerCertificate:
    """Map a sunflower of G(T) back to the family by adding T to each petal."""
    idx = tuple(sorted(fam.index_of(G.masks[i] | T) for i in cert.petal_indices))
    return SunflowerCertificate(cert.r, idx, MemberSet(cert.kernel.mask | T))


def audit_ell_cover(fam: SetFamily, ell: int, F0_index: int, r: int = 3, check_transfer: bool = True) -> CoverAudit:
    """Check F = union of F(T) over the ell-subsets T of F0, and the reductions G(T).

    Each G(T) must be (k-ell)-uniform, and any r-sunflower found in some
    G(T) must lift to an r-sunflower of ``fam``.
    """
    from .detect import verify_sunflower

    k = _uniform_k(fam.masks)
    if k is None:
        raise PreconditionError("empty family")
    if not 0 <= F0_index < len(fam):
        raise IndexError("F0 index out of range")
    for i, j in combinations(range(len(fam)), 2):
        if (fam.masks[i] & fam.masks[j]).bit_count() < ell:
            raise PreconditionError(f"family is not {ell}-intersecting", (i, j))
    F0 = fam.masks[F0_index]
    sizes = {}
    covered = 0
    lifted = []
    transfer_ok = True
    checked = 0
    for T_elems in combinations(elements_of(F0), ell):
        T = mask_of(T_elems)
        FT = [t for t, F in enumerate(fam.masks) if F & T == T]
        sizes[T_elems] = len(FT)
        for t in FT:
            covered |= 1 << t
        G = SetFamily((fam.masks[t] ^ T for t in FT), n=fam.n, allow_empty=True)
        if any(m.bit_count() != k - ell for m in G.masks):
            transfer_ok = False
        if check_transfer and len(G) >= r:
            checked += 1
            cert = find_sunflower(G, r)
            if isinstance(cert, SunflowerCertificate):
                up = lift_sunflower(fam, T, G, cert)
                if verify_sunflower(fam, up):
                    lifted.append((T_elems, up.petal_indices))
                else:
                    transfer_ok = False
    cover = covered == (1 << len(fam)) - 1
    count_bound = comb(k, ell) * max(sizes.values(), default=0)
    return CoverAudit(ell, k, F0_index, sizes, cover, count_bound, len(fam) <= count_bound,
                      checked, lifted, transfer_ok)
