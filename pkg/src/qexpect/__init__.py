"""Quantum-probability belief dynamics for investor expectation modeling:
Born-rule measurement, sequential order effects, interference against the
classical total-probability baseline, and seeded ensemble market simulation.
"""

__version__ = "0.1.0"

from .classical import (
    ClassicalConditionalModel,
    ImpossibleEvidenceError,
    bayes_update,
    classical_agent_step,
    total_probability,
)
from .config import (
    ConfigParseError,
    ConfigValidationError,
    ConfigVersionError,
    load_document,
    load_scenario,
    scenario_from_document,
    scenario_to_dict,
    scenarios_equivalent,
)
from .hilbert import (
    Hamiltonian,
    Observable,
    Projector,
    StateVector,
    commutator_norm,
    evolve,
    inner_product,
    make_observable,
    projector_for,
)
from .market import (
    AgentPopulation,
    NewsEvent,
    NewsSchedule,
    PricePath,
    Scenario,
    SimulationHalt,
    agent_stream,
    run_ensemble,
    run_market,
    run_sequential_ensemble,
    sample_measurement,
)
from .measurement import (
    ImpossibleOutcomeError,
    InterferenceReport,
    JointTable,
    OutcomeDistribution,
    born_distribution,
    born_probability,
    collapse,
    evolved_born,
    interference_term,
    order_effect,
    order_effect_from_tables,
    sequential_joint,
    transition_probability,
    uncertainty_product,
)

__all__ = [
    "__version__",
    "AgentPopulation",
    "ClassicalConditionalModel",
    "ConfigParseError",
    "ConfigValidationError",
    "ConfigVersionError",
    "Hamiltonian",
    "ImpossibleEvidenceError",
    "ImpossibleOutcomeError",
    "InterferenceReport",
    "JointTable",
    "NewsEvent",
    "NewsSchedule",
    "Observable",
    "OutcomeDistribution",
    "PricePath",
    "Projector",
    "Scenario",
    "SimulationHalt",
    "StateVector",
    "agent_stream",
    "bayes_update",
    "born_distribution",
    "born_probability",
    "classical_agent_step",
    "collapse",
    "commutator_norm",
    "evolve",
    "evolved_born",
    "inner_product",
    "interference_term",
    "load_document",
    "load_scenario",
    "make_observable",
    "order_effect",
    "order_effect_from_tables",
    "projector_for",
    "run_ensemble",
    "run_market",
    "run_sequential_ensemble",
    "sample_measurement",
    "scenario_from_document",
    "scenario_to_dict",
    "scenarios_equivalent",
    "sequential_joint",
    "total_probability",
    "transition_probability",
    "uncertainty_product",
]
