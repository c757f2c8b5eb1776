import os
import subprocess
import sys
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sunflower_lab import _backend, _pykernels
from sunflower_lab.detect import is_sunflower_masks

compiled = _backend.compiled
needs_ext = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")

mask_lists = st.lists(st.integers(1, (1 << 12) - 1), min_size=0, max_size=14, unique=True)
wide_masks = st.lists(st.integers(1, (1 << 150) - 1), min_size=0, max_size=10, unique=True)


def _disjoint_oracle(masks, need):
    return any(
        all(a & b == 0 for a, b in combinations(combo, 2))
        for combo in combinations(masks, need)
    )


def _check_packing(masks, need, picks):
    assert len(picks) == need == len(set(picks))
    chosen = [masks[i] for i in picks]
    assert all(a & b == 0 for a, b in combinations(chosen, 2))


def test_pure_selection_by_env():
    env = dict(os.environ, SUNFLOWER_LAB_PURE="1")
    code = "from sunflower_lab._backend import BACKEND; print(BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"


@needs_ext
def test_default_backend_is_compiled():
    assert _backend.BACKEND == "cython"


@given(mask_lists, st.integers(1, 5))
def test_pure_packing_matches_oracle(masks, need):
    picks = _pykernels.pack_disjoint(masks, need)
    assert (picks is not None) == _disjoint_oracle(masks, need)
    if picks is not None:
        _check_packing(masks, need, picks)


@needs_ext
@given(st.one_of(mask_lists, wide_masks), st.integers(1, 5))
def test_compiled_packing_agrees(masks, need):
    a = compiled.pack_disjoint(masks, need)
    b = _pykernels.pack_disjoint(masks, need)
    assert (a is None) == (b is None)
    if a is not None:
        _check_packing(masks, need, a)


def _creates_oracle(fam, c, need):
    return any(is_sunflower_masks(list(combo) + [c]) for combo in combinations(fam, need))


@given(mask_lists, st.integers(1, (1 << 12) - 1), st.integers(1, 3))
def test_creates_sunflower_kernels(fam, c, need):
    fam = [m for m in fam if m != c]
    expected = _creates_oracle(fam, c, need)
    assert _pykernels.creates_sunflower(fam, c, need) == expected
    if compiled is not None:
        assert compiled.creates_sunflower(fam, c, need) == expected


@needs_ext
def test_compiled_search_rejects_wide_candidates():
    with pytest.raises((ValueError, OverflowError)):
        compiled.search_core([1 << 70], [0], 3, 5, 100)


def test_search_kernels_switch_on_width():
    assert _backend.search_kernels(200) is _pykernels
    assert _backend.search_kernels(10) is _backend.kernels
