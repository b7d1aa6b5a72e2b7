"""Every acceptance criterion at its stated tolerance and runtime budget.

Each test prints one PASS/FAIL line; the lines are also collected into a
summary section at the end of the pytest run.
"""

import warnings

import pytest

from hslab import acceptance

from .conftest import ACCEPTANCE_LINES

CASES = [
    (acceptance.criterion_constants, {}),
    (acceptance.criterion_spectral_gap, {}),
    (acceptance.criterion_levels, {}),
    (acceptance.criterion_two_peak, {"N": 4}),
    (acceptance.criterion_rates, {"N": 4}),
    (acceptance.criterion_hidden, {"N": 4}),
    (acceptance.criterion_radial, {"N": 4}),
    (acceptance.criterion_distance, {"N": 4, "seed": 0}),
    (acceptance.criterion_hardy_ode, {}),
]


@pytest.mark.parametrize("fn,kwargs", CASES, ids=[fn.__name__ for fn, _ in CASES])
def test_criterion(fn, kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        c = fn(**kwargs)
    line = c.line()
    print(line)
    ACCEPTANCE_LINES.append(line)
    detail = "\n".join(f"  {ch.name}: {ch.value:.6g} (bound {ch.bound:.6g}) {'ok' if ch.ok else 'FAIL'}" for ch in c.checks)
    assert c.passed, f"{line}\n{detail}"
