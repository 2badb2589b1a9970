"""Shared fixtures: keep the process-global unit caches test-local.

Several tests deliberately load crafted cache files (including rows that
are arithmetically consistent but not fundamental); without clearing, the
planted units would leak into unrelated modules and skew their searches.
"""

import pytest

from sysarith.real_quadratic import clear_caches


@pytest.fixture(autouse=True)
def isolated_unit_caches():
    clear_caches()
    yield
    clear_caches()
