"""Config parsing, validation error collection, and presets."""

import json

import pytest

from openchain.config import (
    ConfigError,
    PRESETS,
    get_preset,
    parse_config,
    scenario_to_dict,
)

MINIMAL_CLOSED = {
    "mode": "closed",
    "L": 2,
    "gamma_meV": 1,
    "v_meV": 0,
    "t_final": 1,
    "N_t": 2,
    "seed": 7,
    "init_sites": [1],
}


def test_minimal_closed_config_parses():
    cfg = parse_config(json.dumps(MINIMAL_CLOSED))
    assert cfg.mode == "closed"
    assert cfg.chain.L == 2 and cfg.chain.gamma == 1.0
    assert cfg.run.seed == 7
    assert cfg.init_occupations == (0,)


def test_eta_above_one_rejected():
    raw = dict(MINIMAL_CLOSED, mode="open",
               contacts=[{"site": 1, "Gamma_meV": 3.0, "f": 1.0}])
    with pytest.raises(ConfigError) as exc:
        parse_config(json.dumps(raw))
    assert any("eta" in e and "exceeds 1" in e for e in exc.value.errors)


def test_fig3a_preset_expansion():
    cfg = get_preset("fig3a")
    assert cfg.chain.L == 7 and cfg.chain.gamma == 3.0 and cfg.chain.v == 10.0
    assert cfg.run.dt == 0.5
    source, drain = cfg.contacts
    assert (source.q, source.Gamma, source.f) == (0, 0.5, 1.0)
    assert (drain.q, drain.Gamma, drain.f) == (6, 0.5, 0.0)


def test_all_presets_validate_via_roundtrip():
    for name in PRESETS:
        cfg = get_preset(name)
        assert parse_config(json.dumps(scenario_to_dict(cfg))) is not None


def test_malformed_json_rejected():
    with pytest.raises(ConfigError):
        parse_config("{not json")
    with pytest.raises(ConfigError):
        parse_config("[1, 2]")


def test_errors_are_collected_with_key_paths():
    raw = {
        "mode": "open",
        "L": 3,
        "gamma_meV": 1,
        "t_final": 10,
        "N_t": 20,
        "contacts": [
            {"site": 9, "Gamma_meV": 0.5, "f": 1.0},
            {"site": 1, "f": 0.5},
            {"site": 2, "Gamma_meV": 0.5, "f": 2.0},
        ],
        "init_sites": [1, 1],
    }
    with pytest.raises(ConfigError) as exc:
        parse_config(json.dumps(raw))
    errors = "\n".join(exc.value.errors)
    assert "contacts[0].site" in errors
    assert "contacts[1]" in errors
    assert "contacts[2].f" in errors
    assert "listed twice" in errors


def test_mode_constraints():
    with pytest.raises(ConfigError) as exc:
        parse_config(json.dumps(dict(
            MINIMAL_CLOSED, contacts=[{"site": 1, "Gamma_meV": 0.5, "f": 1.0}])))
    assert any("mode=closed" in e for e in exc.value.errors)

    with pytest.raises(ConfigError) as exc:
        parse_config(json.dumps(dict(MINIMAL_CLOSED, mode="open")))
    assert any("mode=open" in e for e in exc.value.errors)

    big = dict(MINIMAL_CLOSED, mode="compare", L=9,
               contacts=[{"site": 1, "Gamma_meV": 0.5, "f": 1.0}])
    with pytest.raises(ConfigError) as exc:
        parse_config(json.dumps(big))
    assert any("L <= 8" in e for e in exc.value.errors)


def test_roundtrip_is_identity():
    cfg = get_preset("compare-l2")
    again = parse_config(json.dumps(scenario_to_dict(cfg)))
    assert again.mode == cfg.mode
    assert again.chain == cfg.chain
    assert again.contacts == cfg.contacts
    assert again.run == cfg.run
    assert again.init_occupations == cfg.init_occupations
    assert again.include_depolarizing == cfg.include_depolarizing


def test_eta_key_alternative():
    raw = dict(MINIMAL_CLOSED, mode="open", t_final=10, N_t=20,
               contacts=[{"site": 1, "eta": 0.5, "f": 1.0}])
    cfg = parse_config(json.dumps(raw))
    assert cfg.contacts[0].Gamma == pytest.approx(1.0)  # eta / dt with dt=0.5


def test_fermi_dirac_contact_entry():
    raw = dict(MINIMAL_CLOSED, mode="open", t_final=10, N_t=20,
               contacts=[{"site": 1, "Gamma_meV": 0.5,
                          "eps_meV": 1.0, "mu_meV": 1.0, "kT_meV": 0.3}])
    cfg = parse_config(json.dumps(raw))
    assert cfg.contacts[0].f == 0.5


def test_unknown_and_unsupported_presets():
    with pytest.raises(ConfigError):
        get_preset("nope")
    with pytest.raises(ConfigError) as exc:
        get_preset("fig2-l30")
    assert "unsupported" in str(exc.value)


def test_preset_overrides():
    cfg = get_preset("fig3a", seed=99, n_traj=10)
    assert cfg.run.seed == 99 and cfg.run.N_traj == 10
