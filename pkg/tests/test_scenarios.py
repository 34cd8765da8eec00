import json

import pytest

from froblab.errors import UnknownScenarioError
from froblab.scenarios import REGISTRY, run_named_scenario

# the counterexample suite and the two exact-count scenarios run in test_acceptance
COVERED = {"e_f3", "e_gl_nonfrob", "e_nonfrob_hamming", "e_nrt", "e_rt_symm", "e_poset_nonext",
           "e_rank_matrix", "e_rank_field", "e_hier_two_ext", "orbit_17_20"}


def test_registry_size():
    assert len(REGISTRY) == 17
    assert COVERED < set(REGISTRY)


@pytest.mark.parametrize("name", sorted(set(REGISTRY) - COVERED))
def test_scenario_passes(name):
    rep = run_named_scenario(name)
    assert rep.passed, rep.failed_checks()
    assert rep.checks and all(rep.checks.values())


def test_report_json_is_deterministic():
    a = run_named_scenario("orbit_17_20").to_json(timing=False)
    b = run_named_scenario("orbit_17_20").to_json(timing=False)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert "runtime_ms" not in a
    assert "runtime_ms" in run_named_scenario("orbit_17_20").to_json(timing=True)


def test_orbit_counts_report_both_conventions():
    c = run_named_scenario("orbit_17_20").counts
    assert (c["right"], c["left"]) == (17, 20)
    assert (c["right_with_zero"], c["left_with_zero"]) == (18, 21)


def test_unknown_scenario():
    with pytest.raises(UnknownScenarioError):
        run_named_scenario("no_such_scenario")
