"""One test per acceptance criterion; each prints its pass/fail line.

The lines are also collected and repeated in the terminal summary.
"""
import pytest

from abasym.acceptance import CRITERIA, format_entry, run_criterion

RESULTS = {}


def _params():
    out = []
    for cid, title, _, slow in CRITERIA:
        marks = [pytest.mark.slow] if slow else []
        out.append(pytest.param(cid, id=f"criterion_{cid}", marks=marks))
    return out


@pytest.mark.parametrize("cid", _params())
def test_criterion(cid):
    entry = run_criterion(cid)
    text = format_entry(entry)
    RESULTS[cid] = text
    print(text)
    assert entry["passed"], text
