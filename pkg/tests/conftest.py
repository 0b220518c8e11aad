import itertools

import pytest


def brute_hfold(elements, h, bound):
    """All sums of h elements (with repetition) that are <= bound, by enumeration."""
    small = sorted(e for e in set(elements) if e <= bound)
    return {
        sum(combo)
        for combo in itertools.combinations_with_replacement(small, h)
        if sum(combo) <= bound
    }



@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.call_report = rep
