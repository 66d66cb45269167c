import pytest

from pitchrater import config as cfgmod
from pitchrater.ratings import ClubK, EloConfig, GapConfig, InternationalK


def test_defaults_build_every_engine():
    cfg = cfgmod.resolve()
    assert cfgmod.engine_config("elo", cfg) == EloConfig()
    assert cfgmod.engine_config("gap", cfg) == GapConfig()
    for name in ("pi", "berrar"):
        cfgmod.engine_config(name, cfg)


def test_precedence_and_file_parsing(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# comment\nelo.k_mode = club\nelo.k_base = 30  # trailing\n\n")
    cfg = cfgmod.resolve(cfgmod.load_config_file(path), cfgmod.parse_pairs(["elo.k_base=40"]))
    assert cfgmod.elo_config(cfg).k_mode == ClubK(40.0)


def test_importance_table_is_open():
    cfg = cfgmod.resolve(overrides={"elo.k_mode": "international", "elo.importance.qualifier": "40"})
    k_mode = cfgmod.elo_config(cfg).k_mode
    assert isinstance(k_mode, InternationalK)
    assert k_mode.table == {"world_cup_finals": 60.0, "friendly": 20.0, "qualifier": 40.0}


def test_errors():
    with pytest.raises(cfgmod.ConfigError, match="unknown"):
        cfgmod.resolve(overrides={"elo.kk": "1"})
    with pytest.raises(cfgmod.ConfigError):
        cfgmod.parse_pairs(["novalue"])
    with pytest.raises(cfgmod.ConfigError, match="number"):
        cfgmod.elo_config(cfgmod.resolve(overrides={"elo.k": "abc"}))
    with pytest.raises(cfgmod.ConfigError, match="invalid gap"):
        cfgmod.engine_config("gap", cfgmod.resolve(overrides={"gap.phi1": "2"}))
    with pytest.raises(cfgmod.ConfigError):
        cfgmod.gap_config(cfgmod.resolve(overrides={"gap.rollover": "maybe"}))


def test_dump_round_trip():
    cfg = cfgmod.resolve(overrides={"pi.lambda": "0.05"})
    text = cfgmod.dump(cfg)
    assert cfgmod.resolve(cfgmod.parse_pairs(text.splitlines())) == cfg
