"""Shared fixtures for the affine TL test suites."""

import pytest

from affine_tl.coxeter import CoxeterContext, new_context


@pytest.fixture
def ctx2() -> CoxeterContext:
    """Smallest rank: generators s1, s2, s3 with bonds 4-4."""
    return new_context(2)


@pytest.fixture
def ctx3() -> CoxeterContext:
    return new_context(3)


@pytest.fixture
def ctx5() -> CoxeterContext:
    return new_context(5)
