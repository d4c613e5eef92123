import pytest

from semescape.scenarios import run_scenario


@pytest.fixture(scope="session")
def scenario_report():
    """Run each catalog scenario at most once per test session."""
    cache = {}

    def get(scenario_id, config=None, cache_key=None):
        key = (scenario_id, cache_key)
        if key not in cache:
            cache[key] = run_scenario(scenario_id, config=config)
        return cache[key]

    return get
