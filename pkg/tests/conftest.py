import os

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

from qdouble.catalog import builtin_group

GROUP_NAMES = ["Z2", "Z3", "Z4", "Z6", "S3", "D4", "Q8"]


@pytest.fixture(scope="session")
def groups():
    return {name: builtin_group(name) for name in GROUP_NAMES}


@pytest.fixture(scope="session")
def S3():
    return builtin_group("S3")


def pytest_terminal_summary(terminalreporter):
    import sys
    results = {}
    for name, mod in list(sys.modules.items()):
        if name.endswith("test_acceptance"):
            results.update(getattr(mod, "RESULTS", {}))
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
