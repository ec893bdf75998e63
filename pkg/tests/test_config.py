import pytest

from prioswitch.config import (PAPER_SEEDS, ConfigParseError, ExperimentConfig,
                               parse_config, parse_seeds, parse_text)
from prioswitch.traffic import ArrivalMode, DiscreteUniform, Fixed


def test_empty_file_gives_reference_defaults(tmp_path):
    path = tmp_path / "empty.cfg"
    path.write_text("")
    cfg = parse_config(path)
    assert cfg == ExperimentConfig()
    assert cfg.link_rate == 10 * 10**9
    assert cfg.hp_size == 1200
    assert (cfg.lp_size_min, cfg.lp_size_max) == (40, 1500)
    assert cfg.buffer_bytes == 16_777_216
    assert cfg.packets_per_class == 40_000
    assert cfg.seeds == PAPER_SEEDS and len(cfg.seeds) == 10
    assert cfg.hp_arrivals is ArrivalMode.SHAPED
    assert cfg.sweep_loads == (0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6)
    plan = cfg.plan(0.3, 0.4)
    assert plan.hp.size_model == Fixed(1200)
    assert plan.lp.size_model == DiscreteUniform(40, 1500)


def test_full_file():
    cfg = parse_text("""
        # comment line
        link_rate = 1e9        # 1 Gb/s
        hp_load = 0.25
        lp_load = 0.3 0.35
        sweep = 0.1 0.2
        seeds = 1 2 3
        hp_arrivals = Poisson
        buffer_bytes = 65536
        packets_per_class = 1000
        validate_points = 0.1:0.2 0.5:0
    """)
    assert cfg.link_rate == 10**9
    assert cfg.lp_load == (0.3, 0.35)
    assert cfg.sweep_loads == (0.1, 0.2)
    assert cfg.seeds == (1, 2, 3)
    assert cfg.hp_arrivals is ArrivalMode.POISSON
    assert cfg.validate_points == ((0.1, 0.2), (0.5, 0.0))


@pytest.mark.parametrize("text,message", [
    ("hp_load = 1.2", "load must be in (0,1)"),
    ("seeds = 907 907", "seeds must be distinct"),
    ("sweep = 0.3 0.2", "sorted ascending"),
    ("colour = blue", "unknown key 'colour'"),
    ("hp_load 0.3", "expected 'key = value'"),
    ("hp_load = fast", "hp_load"),
    ("packets_per_class = 10.5", "not an integer"),
    ("hp_arrivals = bursty", "shaped or poisson"),
    ("seeds =", "seeds must be non-empty"),
])
def test_errors(text, message):
    with pytest.raises(ConfigParseError, match=message.replace("(", r"\(").replace(")", r"\)")):
        parse_text(text)


def test_error_names_line():
    with pytest.raises(ConfigParseError, match=r"x.cfg:3:"):
        parse_text("hp_load = 0.2\n\nlp_load = 0.4 1.5\n", "x.cfg")
    with pytest.raises(ConfigParseError, match=r":2: duplicate"):
        parse_text("hp_load = 0.2\nhp_load = 0.3")


def test_order_independent_size_bounds():
    cfg = parse_text("lp_size_min = 2000\nlp_size_max = 3000")
    assert (cfg.lp_size_min, cfg.lp_size_max) == (2000, 3000)


def test_parse_seeds():
    assert parse_seeds("1,2, 3 4") == (1, 2, 3, 4)
