"""Scenario configuration: JSON ingestion, validation, presets.

Sites are 1-based in config files and output (matching the physics
convention used throughout the docs); internally they map to qubits
0..L-1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from .model import ChainSpec
from .trajectory import ContactSpec, RunConfig, fermi_dirac, validate_contacts

MODES = ("closed", "open", "lindblad-check", "compare")

# Tolerance budget for the trajectory-vs-Lindblad comparison:
# |n_traj - n_lindblad| <= SIGMA_FACTOR * stderr + ABS_BUDGET per
# (site, time).  The absolute part covers the O(dt) trajectory bias.
SIGMA_FACTOR = 3.0
ABS_BUDGET = 0.05


class ConfigError(ValueError):
    """All validation problems of a config, collected."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class ScenarioConfig:
    mode: str
    chain: ChainSpec
    contacts: tuple[ContactSpec, ...]
    run: RunConfig
    init_occupations: tuple[int, ...]  # 0-based qubit indices
    include_depolarizing: bool = True
    emit_heatmap: bool = False
    output_path: str | None = None


def _contact_from_dict(entry: dict, L: int, dt: float, path: str, errors: list[str]):
    site = entry.get("site")
    if not isinstance(site, int) or not 1 <= site <= L:
        errors.append(f"{path}.site: must be an integer in [1, {L}], got {site!r}")
        return None
    if "f" in entry:
        f = entry["f"]
        if not isinstance(f, (int, float)) or not 0.0 <= f <= 1.0:
            errors.append(f"{path}.f: must be in [0, 1], got {f!r}")
            return None
        f = float(f)
    elif all(k in entry for k in ("eps_meV", "mu_meV", "kT_meV")):
        try:
            f = fermi_dirac(entry["eps_meV"], entry["mu_meV"], entry["kT_meV"])
        except (TypeError, ValueError) as exc:
            errors.append(f"{path}: bad Fermi-Dirac parameters ({exc})")
            return None
    else:
        errors.append(f"{path}: needs either 'f' or (eps_meV, mu_meV, kT_meV)")
        return None
    if "Gamma_meV" in entry:
        gamma = entry["Gamma_meV"]
    elif "eta" in entry:
        # alternate reading: a dimensionless per-step probability
        gamma = entry["eta"] / dt
    else:
        errors.append(f"{path}: needs either 'Gamma_meV' or 'eta'")
        return None
    if not isinstance(gamma, (int, float)) or gamma < 0:
        errors.append(f"{path}.Gamma_meV: must be >= 0, got {gamma!r}")
        return None
    return ContactSpec(q=site - 1, Gamma=float(gamma), f=f, label=str(entry.get("label", "")))


def parse_config(text: str) -> ScenarioConfig:
    """Parse and fully validate a JSON scenario config.

    Raises ConfigError carrying every violation found, with key paths.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"malformed JSON: {exc}"]) from exc
    if not isinstance(raw, dict):
        raise ConfigError(["top-level value must be a JSON object"])

    errors: list[str] = []

    mode = raw.get("mode")
    if mode not in MODES:
        errors.append(f"mode: must be one of {MODES}, got {mode!r}")

    L = raw.get("L")
    if not isinstance(L, int) or L < 1:
        errors.append(f"L: must be an integer >= 1, got {L!r}")
        raise ConfigError(errors)

    chain = None
    try:
        chain = ChainSpec(L, float(raw.get("gamma_meV", 0.0)), float(raw.get("v_meV", 0.0)))
    except (TypeError, ValueError) as exc:
        errors.append(f"chain: {exc}")

    run = None
    try:
        run = RunConfig(
            t_final=float(raw.get("t_final", 0.0)),
            N_t=int(raw.get("N_t", 0)),
            N_traj=int(raw.get("N_traj", 1)),
            seed=int(raw.get("seed", 0)),
            record_every=int(raw.get("record_every", 1)),
        )
    except (TypeError, ValueError) as exc:
        errors.append(f"run: {exc}")

    contacts: list[ContactSpec] = []
    raw_contacts = raw.get("contacts", [])
    if not isinstance(raw_contacts, list):
        errors.append("contacts: must be a list")
        raw_contacts = []
    if run is not None:
        for i, entry in enumerate(raw_contacts):
            if not isinstance(entry, dict):
                errors.append(f"contacts[{i}]: must be an object")
                continue
            c = _contact_from_dict(entry, L, run.dt, f"contacts[{i}]", errors)
            if c is not None:
                contacts.append(c)
        errors.extend(validate_contacts(contacts, L, run.dt))

    init_sites = raw.get("init_sites", [])
    init: list[int] = []
    if not isinstance(init_sites, list):
        errors.append("init_sites: must be a list of site numbers")
    else:
        for s in init_sites:
            if not isinstance(s, int) or not 1 <= s <= L:
                errors.append(f"init_sites: site {s!r} out of range [1, {L}]")
            elif s - 1 in init:
                errors.append(f"init_sites: site {s} listed twice")
            else:
                init.append(s - 1)

    if mode == "closed" and contacts:
        errors.append("mode=closed requires an empty contact list")
    if mode == "open" and not raw_contacts:
        errors.append("mode=open requires at least one contact")
    if mode in ("compare", "lindblad-check") and L > 8:
        errors.append(f"mode={mode} requires L <= 8 (dense oracle), got L={L}")

    if errors or chain is None or run is None:
        raise ConfigError(errors)

    return ScenarioConfig(
        mode=mode,
        chain=chain,
        contacts=tuple(contacts),
        run=run,
        init_occupations=tuple(sorted(init)),
        include_depolarizing=bool(raw.get("include_depolarizing", True)),
        emit_heatmap=bool(raw.get("emit_heatmap", False)),
        output_path=raw.get("output"),
    )


def scenario_to_dict(cfg: ScenarioConfig) -> dict:
    """Inverse of parse_config: parse(json.dumps(scenario_to_dict(c)))
    recovers c field for field."""
    d = {
        "mode": cfg.mode,
        "L": cfg.chain.L,
        "gamma_meV": cfg.chain.gamma,
        "v_meV": cfg.chain.v,
        "contacts": [
            {"site": c.q + 1, "Gamma_meV": c.Gamma, "f": c.f, "label": c.label}
            for c in cfg.contacts
        ],
        "t_final": cfg.run.t_final,
        "N_t": cfg.run.N_t,
        "N_traj": cfg.run.N_traj,
        "seed": cfg.run.seed,
        "record_every": cfg.run.record_every,
        "init_sites": [q + 1 for q in cfg.init_occupations],
        "include_depolarizing": cfg.include_depolarizing,
        "emit_heatmap": cfg.emit_heatmap,
    }
    if cfg.output_path is not None:
        d["output"] = cfg.output_path
    return d


# -- presets -----------------------------------------------------------

def _source_drain(L: int, Gamma: float = 0.5) -> tuple[ContactSpec, ContactSpec]:
    return (
        ContactSpec(q=0, Gamma=Gamma, f=1.0, label="S"),
        ContactSpec(q=L - 1, Gamma=Gamma, f=0.0, label="D"),
    )


def _preset_fig2() -> ScenarioConfig:
    # single electron on a 12-site chain, dt = 0.5 (N_t/t = 2)
    return ScenarioConfig(
        mode="closed",
        chain=ChainSpec(L=12, gamma=1.0, v=0.0),
        contacts=(),
        run=RunConfig(t_final=15.0, N_t=30, N_traj=1, seed=1),
        init_occupations=(0,),
        emit_heatmap=True,
    )


def _preset_fig3(gamma: float) -> ScenarioConfig:
    return ScenarioConfig(
        mode="open",
        chain=ChainSpec(L=7, gamma=gamma, v=10.0),
        contacts=_source_drain(7),
        run=RunConfig(t_final=10.0, N_t=20, N_traj=2000, seed=1),
        init_occupations=(0,),
    )


def _preset_fig4() -> ScenarioConfig:
    return ScenarioConfig(
        mode="open",
        chain=ChainSpec(L=12, gamma=5.0, v=10.0),
        contacts=_source_drain(12),
        run=RunConfig(t_final=15.0, N_t=30, N_traj=500, seed=1),
        init_occupations=(0,),
    )


def _preset_compare(L: int) -> ScenarioConfig:
    return ScenarioConfig(
        mode="compare",
        chain=ChainSpec(L=L, gamma=3.0, v=10.0),
        contacts=_source_drain(L),
        run=RunConfig(t_final=10.0, N_t=40, N_traj=8000, seed=1),
        init_occupations=(0,),
        include_depolarizing=True,
    )


PRESETS = {
    "fig2": _preset_fig2,
    "fig3a": lambda: _preset_fig3(3.0),
    "fig3b": lambda: _preset_fig3(5.0),
    "fig4-l12": _preset_fig4,
    "compare-l2": lambda: _preset_compare(2),
    "compare-l3": lambda: _preset_compare(3),
}

# fig2 at the full 30-site width needs 2^30 amplitudes; deliberately not
# provided (the ballistic-front physics is scale-invariant at L=12).
UNSUPPORTED_PRESETS = {
    "fig2-l30": "requires 2^30 amplitudes; use fig2 (L=12) instead",
}


def get_preset(name: str, seed: int | None = None, n_traj: int | None = None) -> ScenarioConfig:
    if name in UNSUPPORTED_PRESETS:
        raise ConfigError([f"preset {name!r} is unsupported: {UNSUPPORTED_PRESETS[name]}"])
    if name not in PRESETS:
        known = ", ".join(sorted(PRESETS))
        raise ConfigError([f"unknown preset {name!r}; available: {known}"])
    cfg = PRESETS[name]()
    run = cfg.run
    if seed is not None:
        run = replace(run, seed=seed)
    if n_traj is not None:
        run = replace(run, N_traj=n_traj)
    return replace(cfg, run=run)
