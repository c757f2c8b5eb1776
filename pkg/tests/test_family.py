import pytest

from sunflower_lab.family import (
    DuplicateMemberError,
    FamilyError,
    FamilyFormatError,
    GroundSet,
    MemberSet,
    SetFamily,
    canonical_form,
    check_ell_intersecting,
    check_L_intersecting,
    elements_of,
    format_family,
    intersection_profile,
    is_isomorphic,
    is_uniform,
    mask_of,
    parse_family,
    read_family,
    write_family,
)
from hypothesis import given

from conftest import families


def test_bitset_helpers_round_trip():
    assert mask_of([1, 3]) == 0b101
    assert elements_of(0b101) == [1, 3]
    assert elements_of(0) == []


def test_members_are_stored_in_lex_order():
    fam = SetFamily([(2, 3), (1, 4), (1, 2)], n=4)
    assert fam.as_lists() == [[1, 2], [1, 4], [2, 3]]


def test_equality_ignores_input_order():
    a = SetFamily([(1, 2), (3, 4)], n=4)
    b = SetFamily([(3, 4), (2, 1)], n=4)
    assert a == b and hash(a) == hash(b)


def test_duplicates_rejected():
    with pytest.raises(DuplicateMemberError):
        SetFamily([(1, 2), (2, 1)], n=3)


def test_duplicates_allowed_when_not_distinct():
    fam = SetFamily([(1, 2), (1, 2)], n=2, distinct=False)
    assert len(fam) == 2


def test_element_outside_ground_set():
    with pytest.raises(FamilyError):
        SetFamily([(1, 5)], n=4)


def test_empty_member_needs_flag():
    with pytest.raises(FamilyError):
        SetFamily([()], n=3)
    assert len(SetFamily([()], n=3, allow_empty=True)) == 1


def test_ground_set_limits():
    assert GroundSet(5).full_mask == 0b11111
    with pytest.raises(FamilyError):
        GroundSet(5000)
    with pytest.raises(FamilyError):
        GroundSet(-1)


def test_memberset_repr_and_len():
    m = MemberSet.of([3, 1])
    assert m.elements == [1, 3] and len(m) == 2 and repr(m) == "{1,3}"


def test_uniformity_and_support():
    fam = SetFamily([(1, 2), (2, 5)], n=6)
    assert fam.uniformity() == 2 and is_uniform(fam, 2)
    assert fam.support() == mask_of([1, 2, 5])
    assert SetFamily([(1,), (1, 2)], n=2).uniformity() is None


def test_intersection_profile():
    fam = SetFamily([(1, 2, 3), (1, 4, 5), (2, 4, 6)], n=6)
    prof = intersection_profile(fam)
    assert prof.sizes == (1,) and prof.min_size == 1
    assert prof.is_L_intersecting([1]) and prof.is_ell_intersecting(1)
    assert not prof.is_ell_intersecting(2)
    with pytest.raises(FamilyError):
        intersection_profile(SetFamily([(1,)], n=1))


def test_L_and_ell_checks_report_a_witness_pair():
    fam = SetFamily([(1, 2), (1, 3), (4, 5)], n=5)
    ok, pair = check_L_intersecting(fam, [1])
    assert not ok and pair is not None
    assert (fam[pair[0]].mask & fam[pair[1]].mask).bit_count() == 0
    assert check_L_intersecting(fam, [0, 1]) == (True, None)
    ok, pair = check_ell_intersecting(fam, 1)
    assert not ok


def test_parse_and_format_round_trip():
    text = "# comment\nn=6\n1 2 3\n\n4 5 6\n"
    fam = parse_family(text)
    assert fam.n == 6 and fam.as_lists() == [[1, 2, 3], [4, 5, 6]]
    assert parse_family(format_family(fam, comment="again")) == fam


def test_parse_without_header_uses_max_element():
    assert parse_family("1 2\n2 7\n").n == 7


@pytest.mark.parametrize(
    "text,line,col",
    [
        ("n=4\n1 x\n", 2, 3),
        ("n=4\n1  2\n", 2, 3),
        ("n=4\n1 2\n1 9\n", 3, 3),
        ("n=4\n1 2\n2 1\n", 3, 1),
        ("n=4\n0 1\n", 2, 1),
        ("n=4\n1 1\n", 2, 3),
    ],
)
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(FamilyFormatError) as info:
        parse_family(text)
    assert (info.value.line, info.value.col) == (line, col)


def test_file_round_trip(tmp_path):
    fam = SetFamily([(1, 2), (2, 3)], n=3)
    path = tmp_path / "f.txt"
    write_family(fam, path)
    assert read_family(path) == fam


def test_relabel_and_isomorphism():
    fam = SetFamily([(1, 2), (2, 3)], n=3)
    moved = fam.relabel({1: 3, 2: 1, 3: 2})
    assert moved.as_lists() == [[1, 2], [1, 3]]
    assert is_isomorphic(fam, moved)
    assert not is_isomorphic(fam, SetFamily([(1, 2), (3, 4)], n=4))


@given(families(n_max=6, max_members=6))
def test_canonical_form_invariant_under_reversal(fam):
    perm = {e: fam.n + 1 - e for e in range(1, fam.n + 1)}
    assert canonical_form(fam) == canonical_form(fam.relabel(perm))


@given(families(n_max=7, max_members=8))
def test_round_trip_property(fam):
    assert parse_family(format_family(fam)) == fam
