"""
=======
Harness
=======

Scenario files, seeded trial suites, the oscillator comparison table and the
final-position variance table.

"""
from legwheel.harness.scenario import (
    NOISE_SCENARIOS,
    ScenarioSpec,
    ScenarioValidationError,
    build_scenario_tree,
    list_scenarios,
    load_scenario,
    packaged_scenario,
    validate_scenario,
)
from legwheel.harness.seeds import initial_phases, splitmix64, trial_seed
from legwheel.harness.suite import (
    SuiteResult,
    compare_oscillators,
    run_suite,
    run_trial_for,
    variance_table,
    write_results,
)
