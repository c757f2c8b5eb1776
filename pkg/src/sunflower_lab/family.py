"""Set families over a finite ground set [n].

Members are stored as Python ints used as bitsets: element ``e`` lives at
bit ``e - 1``.  A :class:`SetFamily` is immutable and keeps its members in
canonical order (lexicographic on the ascending element tuples), so two
families with the same members compare equal and serialize identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

N_MAX_DEFAULT = 4096


class FamilyError(ValueError):
    """A family violates a structural requirement."""


class DuplicateMemberError(FamilyError):
    pass


class FamilyFormatError(FamilyError):
    """Malformed family file; carries the 1-based line and column."""

    def __init__(self, line: int, col: int, msg: str):
        self.line = line
        self.col = col
        self.msg = msg
        super().__init__(f"line {line}, column {col}: {msg}")


def elements_of(mask: int) -> list[int]:
    """Ascending elements of a bitset."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return out


def mask_of(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        mask |= 1 << (e - 1)
    return mask


def _lex_key(mask: int) -> tuple[int, ...]:
    return tuple(elements_of(mask))


@dataclass(frozen=True)
class GroundSet:
    n: int
    n_max: int = N_MAX_DEFAULT

    def __post_init__(self):
        if self.n < 1:
            raise FamilyError(f"ground set size must be >= 1, got {self.n}")
        if self.n > self.n_max:
            raise FamilyError(f"ground set size {self.n} exceeds cap {self.n_max}")

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1


@dataclass(frozen=True)
class MemberSet:
    """A single member, kept as a bitset.  Iterates in ascending order."""

    mask: int

    @classmethod
    def of(cls, elements: Iterable[int]) -> "MemberSet":
        return cls(mask_of(elements))

    @property
    def elements(self) -> list[int]:
        return elements_of(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self.elements)) + "}"


@dataclass(frozen=True)
class IntersectionProfile:
    sizes: tuple[int, ...]
    min_size: int

    def is_L_intersecting(self, L: Iterable[int]) -> bool:
        return set(self.sizes) <= set(L)

    def is_ell_intersecting(self, ell: int) -> bool:
        return self.min_size >= ell


class SetFamily:
    """Immutable family of subsets of ``[n]`` in canonical order.

    ``members`` may be given as bitmask ints, :class:`MemberSet` objects or
    iterables of elements.  ``n`` defaults to the largest element used.
    With ``distinct=True`` (the default) repeated members raise
    :class:`DuplicateMemberError`.  The empty set is rejected unless
    ``allow_empty`` is passed.
    """

    __slots__ = ("ground", "masks", "distinct", "_hash")

    def __init__(
        self,
        members: Iterable = (),
        n: int | None = None,
        *,
        distinct: bool = True,
        allow_empty: bool = False,
        n_max: int = N_MAX_DEFAULT,
    ):
        masks = [_coerce(m) for m in members]
        top = max((m.bit_length() for m in masks), default=0)
        if n is None:
            n = max(top, 1)
        elif top > n:
            raise FamilyError(f"element {top} outside ground set [1..{n}]")
        self.ground = GroundSet(n, n_max)
        if not allow_empty and any(m == 0 for m in masks):
            raise FamilyError("empty member not allowed (pass allow_empty for k=0)")
        masks.sort(key=_lex_key)
        if distinct:
            for a, b in zip(masks, masks[1:]):
                if a == b:
                    raise DuplicateMemberError(f"repeated member {MemberSet(a)!r}")
        self.masks: tuple[int, ...] = tuple(masks)
        self.distinct = distinct
        self._hash = None

    @property
    def n(self) -> int:
        return self.ground.n

    @property
    def members(self) -> list[MemberSet]:
        return [MemberSet(m) for m in self.masks]

    def __len__(self) -> int:
        return len(self.masks)

    def __iter__(self) -> Iterator[MemberSet]:
        return iter(self.members)

    def __getitem__(self, i: int) -> MemberSet:
        return MemberSet(self.masks[i])

    def __eq__(self, other) -> bool:
        if not isinstance(other, SetFamily):
            return NotImplemented
        return self.masks == other.masks and self.n == other.n

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.masks))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(repr(MemberSet(m)) for m in self.masks)
        return f"SetFamily(n={self.n}, [{body}])"

    def as_lists(self) -> list[list[int]]:
        return [elements_of(m) for m in self.masks]

    def index_of(self, mask: int) -> int:
        return self.masks.index(mask)

    def uniformity(self) -> int | None:
        """The common member size, or None if sizes differ or the family is empty."""
        sizes = {m.bit_count() for m in self.masks}
        return sizes.pop() if len(sizes) == 1 else None

    def support(self) -> int:
        out = 0
        for m in self.masks:
            out |= m
        return out

    def relabel(self, perm: dict[int, int] | Sequence[int]) -> "SetFamily":
        """Apply an element permutation; ``perm[e]`` is the image of ``e``.

        A sequence is read as 0-based: ``perm[e - 1]`` is the image of ``e``.
        """
        if isinstance(perm, dict):
            image = perm.get
            img = lambda e: image(e, e)  # noqa: E731
        else:
            img = lambda e: perm[e - 1]  # noqa: E731
        return SetFamily(
            (mask_of(img(e) for e in elements_of(m)) for m in self.masks),
            n=self.n,
            distinct=self.distinct,
            allow_empty=True,
            n_max=self.ground.n_max,
        )


def _coerce(m) -> int:
    if isinstance(m, int):
        if m < 0:
            raise FamilyError("negative bitmask")
        return m
    if isinstance(m, MemberSet):
        return m.mask
    elems = list(m)
    if len(set(elems)) != len(elems):
        raise FamilyError(f"repeated element in member {elems}")
    for e in elems:
        if not isinstance(e, int) or e < 1:
            raise FamilyError(f"elements must be positive integers, got {e!r}")
    return mask_of(elems)


def is_uniform(fam: SetFamily, k: int) -> bool:
    return all(m.bit_count() == k for m in fam.masks)


def intersection_profile(fam: SetFamily) -> IntersectionProfile:
    if len(fam) < 2:
        raise FamilyError("intersection profile needs at least two members")
    sizes = {(a & b).bit_count() for a, b in combinations(fam.masks, 2)}
    ordered = tuple(sorted(sizes))
    return IntersectionProfile(ordered, ordered[0])


def check_L_intersecting(fam: SetFamily, L: Iterable[int]) -> tuple[bool, tuple[int, int] | None]:
    """Whether every pairwise intersection size lies in ``L``.

    On failure the second item is the first offending index pair.
    """
    allowed = set(L)
    masks = fam.masks
    for i in range(len(masks)):
        a = masks[i]
        for j in range(i + 1, len(masks)):
            if (a & masks[j]).bit_count() not in allowed:
                return False, (i, j)
    return True, None


def check_ell_intersecting(fam: SetFamily, ell: int) -> tuple[bool, tuple[int, int] | None]:
    masks = fam.masks
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            if (masks[i] & masks[j]).bit_count() < ell:
                return False, (i, j)
    return True, None


# -- file format -----------------------------------------------------------

def parse_family(text: str, *, n_max: int = N_MAX_DEFAULT, allow_empty: bool = False) -> SetFamily:
    """Parse the one-member-per-line text format.

    Lines starting with ``#`` and blank lines are skipped; ``n=<int>`` fixes
    the ground set.  Errors carry line/column positions.
    """
    n = None
    rows: list[tuple[int, list[int]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        if line.startswith("n="):
            if n is not None:
                raise FamilyFormatError(lineno, 1, "duplicate n= header")
            if rows:
                raise FamilyFormatError(lineno, 1, "n= header must precede members")
            value = line[2:]
            if not value.isdigit():
                raise FamilyFormatError(lineno, 3, f"bad ground-set size {value!r}")
            n = int(value)
            if n < 1 or n > n_max:
                raise FamilyFormatError(lineno, 3, f"ground-set size {n} outside [1, {n_max}]")
            continue
        elems: list[int] = []
        col = 1
        for tok in line.split(" "):
            if not tok.isdigit():
                what = "empty token (elements separated by single spaces)" if not tok else f"bad element {tok!r}"
                raise FamilyFormatError(lineno, col, what)
            e = int(tok)
            if e < 1:
                raise FamilyFormatError(lineno, col, "elements start at 1")
            if n is not None and e > n:
                raise FamilyFormatError(lineno, col, f"element {e} outside [1..{n}]")
            if e in elems:
                raise FamilyFormatError(lineno, col, f"repeated element {e}")
            elems.append(e)
            col += len(tok) + 1
        rows.append((lineno, elems))
    seen: dict[int, int] = {}
    for lineno, elems in rows:
        m = mask_of(elems)
        if m in seen:
            raise FamilyFormatError(lineno, 1, f"duplicate member (first on line {seen[m]})")
        seen[m] = lineno
    try:
        return SetFamily((e for _, e in rows), n=n, n_max=n_max, allow_empty=allow_empty)
    except FamilyError as exc:
        raise FamilyFormatError(rows[0][0] if rows else 1, 1, str(exc)) from exc


def format_family(fam: SetFamily, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend("# " + c for c in comment.splitlines())
    lines.append(f"n={fam.n}")
    lines.extend(" ".join(map(str, elements_of(m))) for m in fam.masks)
    return "\n".join(lines) + "\n"


def read_family(path, **kw) -> SetFamily:
    with open(path, encoding="utf-8") as fh:
        return parse_family(fh.read(), **kw)


def write_family(fam: SetFamily, path, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_family(fam, comment))


# -- isomorphism (brute force, small supports only) ------------------------

def canonical_form(fam: SetFamily, max_support: int = 10) -> tuple[tuple[int, ...], ...]:
    """Isomorphism-invariant form by trying every relabeling of the support.

    Exponential in the support size; meant for witness checks on tiny families.
    """
    from itertools import permutations

    supp = elements_of(fam.support())
    if len(supp) > max_support:
        raise FamilyError(f"support of size {len(supp)} too large for brute-force canonical form")
    best = None
    for perm in permutations(range(1, len(supp) + 1)):
        img = dict(zip(supp, perm))
        form = tuple(sorted(tuple(sorted(img[e] for e in elements_of(m))) for m in fam.masks))
        if best is None or form < best:
            best = form
    return best


def is_isomorphic(a: SetFamily, b: SetFamily, max_support: int = 10) -> bool:
    if len(a) != len(b) or a.support().bit_count() != b.support().bit_count():
        return False
    if sorted(m.bit_count() for m in a.masks) != sorted(m.bit_count() for m in b.masks):
        return False
    return canonical_form(a, max_support) == canonical_form(b, max_support)
