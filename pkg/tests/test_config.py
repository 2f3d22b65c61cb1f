import json
import math
from pathlib import Path

import numpy as np
import pytest

from qexpect.config import (
    ConfigParseError,
    ConfigValidationError,
    ConfigVersionError,
    document_from_dict,
    load_document,
    load_scenario,
    scenario_from_document,
    scenario_to_dict,
    scenarios_equivalent,
)
from qexpect.hilbert import Hamiltonian, StateVector, make_observable
from qexpect.market import AgentPopulation, NewsEvent, NewsSchedule, Scenario

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def minimal_raw() -> dict:
    return {
        "version": 1,
        "states": {"up": [[1.0, 0.0], [0.0, 0.0]]},
        "scenario": {"populations": [{"kind": "quantum", "count": 10, "state": "up"}]},
    }


def write_config(tmp_path, raw) -> Path:
    path = tmp_path / "config.json"
    path.write_text(json.dumps(raw), encoding="utf-8")
    return path


# ---------------------------------------------------------------------------
# parsing and versioning


def test_minimal_config_fills_defaults(tmp_path):
    sc = load_scenario(write_config(tmp_path, minimal_raw()))
    assert sc.seed == 0
    assert sc.periods == 1
    assert sc.initial_price == 100.0
    assert sc.impact == 0.0
    assert sc.price_observable.outcomes == (1.0, -1.0)
    assert len(sc.news) == 0
    assert sc.populations[0].count == 10


def test_missing_file_is_a_parse_error(tmp_path):
    with pytest.raises(ConfigParseError, match="cannot read"):
        load_document(tmp_path / "absent.json")


def test_malformed_json_reports_line_and_column(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "version": 1,\n  "states": {,}\n}', encoding="utf-8")
    with pytest.raises(ConfigParseError, match=r"line 3 column 14"):
        load_document(path)


def test_version_field_is_required():
    with pytest.raises(ConfigValidationError, match="version"):
        document_from_dict({"states": {}})


def test_version_mismatch():
    with pytest.raises(ConfigVersionError):
        document_from_dict({"version": 2})


# ---------------------------------------------------------------------------
# states, observables, hamiltonians


def test_complex_entries_must_be_pairs():
    raw = minimal_raw()
    raw["states"]["up"] = [1.0, 0.0]
    with pytest.raises(ConfigValidationError, match=r"states\.up.*\[re, im\]"):
        document_from_dict(raw)


def test_state_must_normalize():
    raw = minimal_raw()
    raw["states"]["up"] = [[0.0, 0.0], [0.0, 0.0]]
    with pytest.raises(ConfigValidationError, match="states.up"):
        document_from_dict(raw)


def test_angle_in_degrees_builds_the_rotated_basis():
    raw = minimal_raw()
    raw["observables"] = {"tilted": {"angle": 60.0, "degrees": True}}
    doc = document_from_dict(raw)
    obs = doc.observables["tilted"]
    expected_up = [math.cos(math.pi / 3), math.sin(math.pi / 3)]
    assert np.allclose(obs.eigenvectors[0].amplitudes, expected_up, atol=1e-12)
    assert np.allclose(
        obs.eigenvectors[1].amplitudes, [-expected_up[1], expected_up[0]], atol=1e-12
    )
    assert obs.eigenvalues == (1.0, -1.0)


def test_angle_with_phase_stays_orthonormal():
    raw = minimal_raw()
    raw["observables"] = {"spun": {"angle": 0.7, "phase": 1.1}}
    obs = document_from_dict(raw).observables["spun"]
    gram = np.array(
        [
            [np.vdot(a.amplitudes, b.amplitudes) for b in obs.eigenvectors]
            for a in obs.eigenvectors
        ]
    )
    assert np.allclose(gram, np.eye(2), atol=1e-12)


def test_explicit_vectors_need_eigenvalues():
    raw = minimal_raw()
    raw["observables"] = {"bad": {"vectors": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]}}
    with pytest.raises(ConfigValidationError, match="eigenvalues"):
        document_from_dict(raw)


def test_non_orthonormal_vectors_rejected():
    raw = minimal_raw()
    raw["observables"] = {
        "bad": {
            "vectors": [[[1.0, 0.0], [0.0, 0.0]], [[0.9, 0.0], [0.1, 0.0]]],
            "eigenvalues": [1.0, -1.0],
        }
    }
    with pytest.raises(ConfigValidationError, match="observables.bad"):
        document_from_dict(raw)


def test_non_hermitian_matrix_names_the_entry():
    raw = minimal_raw()
    raw["hamiltonians"] = {
        "news": {"matrix": [[[0.0, 0.0], [1.0, 0.0]], [[0.5, 0.0], [0.0, 0.0]]]}
    }
    with pytest.raises(ConfigValidationError, match=r"hamiltonians\.news\.matrix\[\d\]\[\d\]"):
        document_from_dict(raw)


def test_hamiltonian_presets():
    raw = minimal_raw()
    raw["hamiltonians"] = {
        "swing": {"preset": "rabi", "omega": 2.0},
        "still": {"preset": "zero"},
    }
    doc = document_from_dict(raw)
    assert np.allclose(doc.hamiltonians["swing"].matrix, [[0, 2.0], [2.0, 0]])
    assert np.allclose(doc.hamiltonians["still"].matrix, np.zeros((2, 2)))


def test_unknown_preset_rejected():
    raw = minimal_raw()
    raw["hamiltonians"] = {"odd": {"preset": "chirp"}}
    with pytest.raises(ConfigValidationError, match="preset"):
        document_from_dict(raw)


def test_unknown_reference_names_the_field():
    raw = minimal_raw()
    raw["scenario"]["populations"][0]["state"] = "ghost"
    with pytest.raises(ConfigValidationError, match=r"populations\[0\]\.state.*ghost"):
        scenario_from_document(document_from_dict(raw))


# ---------------------------------------------------------------------------
# scenario assembly and round trips


def test_shipped_market_config_loads():
    sc = load_scenario(CONFIG_DIR / "market.json")
    assert sc.seed == 42
    assert sc.periods == 6
    assert sc.total_agents == 5500
    assert len(sc.news) == 2
    assert sc.populations[1].kind == "classical"


def test_scenario_roundtrip_is_equivalent():
    tilted = make_observable(
        [[np.cos(0.6), np.sin(0.6)], [-np.sin(0.6), np.cos(0.6)]], [1.0, -1.0]
    )
    sc = Scenario(
        seed=99,
        populations=(
            AgentPopulation(123, StateVector([0.6, 0.8j]), "quantum"),
            AgentPopulation(45, StateVector([1, 1]), "classical"),
        ),
        news=NewsSchedule(
            (
                NewsEvent(
                    hamiltonian=Hamiltonian([[0.0, 0.5], [0.5, 0.3]]),
                    duration=0.7,
                    observable=tilted,
                ),
            )
        ),
        price_observable=make_observable([[1, 0], [0, 1]], [1.0, -1.0]),
        impact=0.2,
        initial_price=50.0,
        periods=7,
    )
    replayed = scenario_from_document(document_from_dict(scenario_to_dict(sc)))
    assert scenarios_equivalent(sc, replayed)


def test_roundtrip_through_json_text(tmp_path):
    sc = load_scenario(CONFIG_DIR / "market.json")
    path = tmp_path / "echo.json"
    path.write_text(json.dumps(scenario_to_dict(sc)), encoding="utf-8")
    assert scenarios_equivalent(sc, load_scenario(path))


def test_populations_are_required():
    raw = minimal_raw()
    raw["scenario"].pop("populations")
    with pytest.raises(ConfigValidationError, match="populations"):
        scenario_from_document(document_from_dict(raw))


def test_section_lookup_errors():
    doc = document_from_dict({"version": 1})
    with pytest.raises(ConfigValidationError, match="born"):
        doc.section("born")
