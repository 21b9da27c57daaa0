import pytest

from flagkneser import build_universe, canonical_frame


@pytest.fixture(scope="session")
def uni2():
    """The fully materialized q=2 flag universe (177165 flags)."""
    return build_universe(2)


@pytest.fixture(scope="session")
def frame2():
    return canonical_frame(2)


@pytest.fixture(scope="session")
def frame3():
    return canonical_frame(3)
