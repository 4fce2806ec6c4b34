"""Acceptance gate: all thirteen criteria, one pass/fail line each."""

import pytest

from vortexplane import verify

_IDS = [f"criterion_{i:02d}" for i in range(1, 14)]


@pytest.mark.parametrize("index", range(13), ids=_IDS)
def test_criterion(acceptance_results, index):
    result = acceptance_results[index]
    print(result.line())
    assert result.ident == index + 1
    assert result.passed, result.line()


def test_matrix(acceptance_results):
    lines = verify.matrix_lines(acceptance_results)
    for line in lines:
        print(line)
    assert len(acceptance_results) == 13
    assert lines[-1] == "overall: PASS"


def test_report_is_canonical_json(acceptance_results):
    import json

    text = verify.render_report(acceptance_results)
    payload = json.loads(text)
    assert payload["schema_version"] == 1
    assert payload["overall_pass"] is True
    assert [c["id"] for c in payload["criteria"]] == list(range(1, 14))
    # canonical form: re-serialization reproduces the exact bytes
    assert json.dumps(payload, sort_keys=True, indent=2) + "\n" == text
