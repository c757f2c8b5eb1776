import pytest

from sunflower_lab.constructions import (
    FANO_LINES,
    fano_plane,
    product_compose,
    transversal_family,
    triangle,
    two_triangles,
)
from sunflower_lab.detect import has_sunflower
from sunflower_lab.family import FamilyError, intersection_profile


@pytest.mark.parametrize("k,r", [(1, 2), (1, 5), (2, 3), (3, 3), (2, 5), (4, 3), (3, 4)])
def test_transversal_size_and_freeness(k, r):
    fam = transversal_family(k, r)
    assert len(fam) == (r - 1) ** k and fam.uniformity() == k and fam.n == k * (r - 1)
    if len(fam) >= r:
        assert not has_sunflower(fam, r)


def test_transversal_block_layout():
    fam = transversal_family(2, 3)
    assert fam.as_lists() == [[1, 3], [1, 4], [2, 3], [2, 4]]


def test_transversal_limits():
    with pytest.raises(FamilyError):
        transversal_family(0, 3)
    with pytest.raises(FamilyError):
        transversal_family(30, 3)


def test_product_compose():
    fam = product_compose(triangle(), two_triangles())
    assert len(fam) == 18 and fam.uniformity() == 4 and fam.n == 9
    assert not has_sunflower(fam, 3)
    assert intersection_profile(fam).sizes == (1, 2, 3)


def test_product_needs_uniform_inputs():
    from sunflower_lab.family import SetFamily
    with pytest.raises(FamilyError):
        product_compose(SetFamily([(1,), (1, 2)], n=2), triangle())


def test_fano_plane_structure():
    fam = fano_plane()
    assert len(fam) == 7 and fam.n == 7 and len(FANO_LINES) == 7
    assert intersection_profile(fam).sizes == (1,)
    for p in range(1, 8):
        assert sum(p in line for line in FANO_LINES) == 3


def _small_free_families():
    from sunflower_lab.search import SearchProblem, extremal_search
    out = [triangle(), two_triangles(), transversal_family(1, 3), transversal_family(2, 3), transversal_family(3, 3)]
    for p in (SearchProblem(2, 3, 5), SearchProblem(3, 3, 6, L=(1,)), SearchProblem(2, 3, 4, L=(0,))):
        w = extremal_search(p).witness
        if 0 < len(w) <= 8:
            out.append(w)
    return out


def test_product_of_singletons():
    ab = transversal_family(1, 3)
    prod = product_compose(ab, ab)
    assert len(prod) == 4 and prod.uniformity() == 2


def test_products_stay_sunflower_free_and_record_profiles():
    fams = _small_free_families()
    profiles = {}
    for i, a in enumerate(fams):
        for j, b in enumerate(fams):
            prod = product_compose(a, b)
            assert len(prod) == len(a) * len(b)
            assert prod.uniformity() == a.uniformity() + b.uniformity()
            if len(prod) >= 3:
                assert not has_sunflower(prod, 3)
            if len(prod) >= 2:
                profiles[(i, j)] = intersection_profile(prod).sizes
    assert profiles[(0, 0)] == (2, 3)
