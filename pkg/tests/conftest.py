import pytest
from hypothesis import settings
from hypothesis import strategies as st

from sunflower_lab.family import SetFamily, mask_of

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@st.composite
def families(draw, n_max=8, k=None, max_members=10, min_members=0):
    """Distinct k-uniform (or mixed-size) families on [n]."""
    n = draw(st.integers(2, n_max))
    size = st.just(k) if k is not None else st.integers(1, n)
    raw = draw(st.lists(
        size.flatmap(lambda s: st.lists(st.integers(1, n), min_size=min(s, n), max_size=min(s, n), unique=True)),
        min_size=min_members, max_size=max_members,
    ))
    masks = sorted({mask_of(m) for m in raw})
    return SetFamily(masks, n=n)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def tmp_family_file(tmp_path):
    def make(text, name="fam.txt"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return make
