"""Flat ``key = value`` configuration for engines and backtests.

Keys (defaults in brackets)::

    elo.initial_rating [1500]   elo.scale [400]   elo.base [10]
    elo.home_advantage [0]      elo.k_mode [fixed: fixed|goal|international|club]
    elo.k [20]   elo.k0 [10]   elo.lambda [1]   elo.k_base [20]
    elo.importance.<competition> [world_cup_finals=60, friendly=20]
    pi.lambda [0.035]   pi.gamma [0.7]   pi.b [10]   pi.c [3]
    berrar.alpha_h/alpha_a [5]   berrar.beta_h/beta_a [1]
    berrar.gamma_h [-0.85]   berrar.gamma_a [-1.25]
    berrar.omega_oh/omega_dh/omega_oa/omega_da [0.1]
    berrar.defence_is_strength [false]
    gap.lambda [0.1]   gap.phi1 [0.5]   gap.phi2 [0.5]   gap.stat [goals]   gap.rollover [true]
    backtest.folds [season: season|chunk]   backtest.chunk_size   backtest.window
    poisson.g_max [15]

Config files hold one ``key = value`` per line; ``#`` starts a comment.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .ratings import (BerrarConfig, ClubK, EloConfig, FixedK, GapConfig, GoalBasedK,
                      INTERNATIONAL_IMPORTANCE, InternationalK, PiConfig)

DEFAULTS: dict[str, str] = {
    "elo.initial_rating": "1500",
    "elo.scale": "400",
    "elo.base": "10",
    "elo.home_advantage": "0",
    "elo.k_mode": "fixed",
    "elo.k": "20",
    "elo.k0": "10",
    "elo.lambda": "1",
    "elo.k_base": "20",
    **{f"elo.importance.{k}": repr(v) for k, v in INTERNATIONAL_IMPORTANCE.items()},
    "pi.lambda": "0.035",
    "pi.gamma": "0.7",
    "pi.b": "10",
    "pi.c": "3",
    "berrar.alpha_h": "5",
    "berrar.alpha_a": "5",
    "berrar.beta_h": "1",
    "berrar.beta_a": "1",
    "berrar.gamma_h": "-0.85",
    "berrar.gamma_a": "-1.25",
    "berrar.omega_oh": "0.1",
    "berrar.omega_dh": "0.1",
    "berrar.omega_oa": "0.1",
    "berrar.omega_da": "0.1",
    "berrar.defence_is_strength": "false",
    "gap.lambda": "0.1",
    "gap.phi1": "0.5",
    "gap.phi2": "0.5",
    "gap.stat": "goals",
    "gap.rollover": "true",
    "backtest.folds": "season",
    "backtest.chunk_size": "",
    "backtest.window": "",
    "poisson.g_max": "15",
}

OPEN_PREFIXES = ("elo.importance.",)


class ConfigError(ValueError):
    pass


def parse_pairs(pairs: Iterable[str], source: str = "--set") -> dict[str, str]:
    out = {}
    for n, raw in enumerate(pairs, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{source} entry {n}: expected key=value, got {raw.strip()!r}")
        out[key.strip()] = value.strip()
    return out


def load_config_file(path) -> dict[str, str]:
    text = Path(path).read_text(encoding="utf-8")
    return parse_pairs(text.splitlines(), source=str(path))


def resolve(file_values: dict[str, str] | None = None,
            overrides: dict[str, str] | None = None) -> dict[str, str]:
    """Defaults, then file values, then overrides; unknown keys are rejected."""
    cfg = dict(DEFAULTS)
    for values in (file_values or {}, overrides or {}):
        for key, value in values.items():
            if key not in DEFAULTS and not key.startswith(OPEN_PREFIXES):
                raise ConfigError(f"unknown config key {key!r}")
            cfg[key] = value
    return cfg


def dump(cfg: dict[str, str]) -> str:
    return "".join(f"{k} = {v}\n" for k, v in sorted(cfg.items()))


def _float(cfg, key) -> float:
    try:
        return float(cfg[key])
    except ValueError:
        raise ConfigError(f"{key} must be a number, got {cfg[key]!r}") from None


def _bool(cfg, key) -> bool:
    v = cfg[key].lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key} must be true or false, got {cfg[key]!r}")


def _opt_int(cfg, key) -> int | None:
    if not cfg[key]:
        return None
    try:
        return int(cfg[key])
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {cfg[key]!r}") from None


def elo_config(cfg: dict[str, str]) -> EloConfig:
    mode = cfg["elo.k_mode"]
    if mode == "fixed":
        k_mode = FixedK(_float(cfg, "elo.k"))
    elif mode == "goal":
        k_mode = GoalBasedK(_float(cfg, "elo.k0"), _float(cfg, "elo.lambda"))
    elif mode == "club":
        k_mode = ClubK(_float(cfg, "elo.k_base"))
    elif mode == "international":
        table = {k[len("elo.importance."):]: _float(cfg, k)
                 for k in cfg if k.startswith("elo.importance.")}
        k_mode = InternationalK(table)
    else:
        raise ConfigError(f"elo.k_mode must be fixed, goal, international or club, got {mode!r}")
    return EloConfig(_float(cfg, "elo.initial_rating"), _float(cfg, "elo.scale"),
                     _float(cfg, "elo.base"), k_mode, _float(cfg, "elo.home_advantage"))


def pi_config(cfg: dict[str, str]) -> PiConfig:
    return PiConfig(_float(cfg, "pi.lambda"), _float(cfg, "pi.gamma"),
                    _float(cfg, "pi.b"), _float(cfg, "pi.c"))


def berrar_config(cfg: dict[str, str]) -> BerrarConfig:
    f = lambda name: _float(cfg, f"berrar.{name}")
    return BerrarConfig(
        f("alpha_h"), f("alpha_a"), f("beta_h"), f("beta_a"), f("gamma_h"), f("gamma_a"),
        (f("omega_oh"), f("omega_dh"), f("omega_oa"), f("omega_da")),
        _bool(cfg, "berrar.defence_is_strength"),
    )


def gap_config(cfg: dict[str, str]) -> GapConfig:
    return GapConfig(_float(cfg, "gap.lambda"), _float(cfg, "gap.phi1"), _float(cfg, "gap.phi2"),
                     cfg["gap.stat"], _bool(cfg, "gap.rollover"))


ENGINE_CONFIGS = {"elo": elo_config, "pi": pi_config, "berrar": berrar_config, "gap": gap_config}


def engine_config(name: str, cfg: dict[str, str]):
    try:
        return ENGINE_CONFIGS[name](cfg)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid {name} configuration: {exc}") from None
