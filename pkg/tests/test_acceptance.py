"""The acceptance battery.

Runs every criterion at its stated tolerance and prints one PASS/FAIL line
per criterion. ``starmd suite`` drives the same functions from the CLI.
"""

import pytest

from starmd.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("cid,name",
                         [(c[0], c[1]) for c in CRITERIA],
                         ids=[f"criterion_{c[0]:02d}_{c[1].replace(' ', '_')}"
                              for c in CRITERIA])
def test_acceptance_criterion(cid, name, capsys):
    result = run_criterion(cid)
    status = "PASS" if result.passed else "FAIL"
    with capsys.disabled():
        print(f"\n[{status}] criterion {cid:2d} ({name}): {result.detail} "
              f"({result.seconds:.2f}s)")
    assert result.passed, f"criterion {cid} ({name}): {result.detail}"
