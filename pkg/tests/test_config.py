import json

import pytest

from mlpsim.config import DEFAULT_DT, DEFAULT_MAX_TICKS, SimConfig, load_config, parse_config
from mlpsim.errors import ConfigParseError, ConfigValidationError


@pytest.mark.parametrize("text", ["", "  \n", "{}"])
def test_empty_document_gives_defaults(text):
    cfg = parse_config(text)
    assert cfg == SimConfig()
    assert cfg.channel.noise.kind == "none" and cfg.channel.feedback_gain == 0.0
    assert cfg.dt == DEFAULT_DT == 0.001 and cfg.max_ticks == DEFAULT_MAX_TICKS == 10_000
    assert cfg.seed == 0


def test_feedback_gain_constraint():
    with pytest.raises(ConfigValidationError) as err:
        parse_config('{"channel": {"feedback_gain": 1.5}}')
    assert err.value.key == "feedback_gain" and err.value.constraint == "|g| < 1"


def test_unknown_top_level_key():
    with pytest.raises(ConfigParseError) as err:
        parse_config('{\n  "dt": 0.001,\n  "foo": 1\n}')
    assert err.value.key == "foo" and "foo" in str(err.value)
    assert (err.value.line, err.value.column) == (3, 3)


def test_unknown_nested_key():
    with pytest.raises(ConfigParseError) as err:
        parse_config('{"channel": {"gain": 0.1}}')
    assert err.value.key == "gain"


def test_syntax_error_location():
    with pytest.raises(ConfigParseError) as err:
        parse_config('{\n "dt": ,\n}')
    assert err.value.line == 2


@pytest.mark.parametrize("doc,key", [
    ({"dt": 0}, "dt"),
    ({"dt": "fast"}, "dt"),
    ({"max_ticks": 0}, "max_ticks"),
    ({"max_ticks": 1.5}, "max_ticks"),
    ({"seed": -1}, "seed"),
    ({"seed": 2**64}, "seed"),
    ({"channel": {"spread": -0.1}}, "spread"),
    ({"channel": {"noise": "pink"}}, "noise"),
    ({"thresholds": {"h_th": True}}, "h_th"),
    ({"stimulus": {"receptor": "eye"}}, "receptor"),
    ({"stimulus": {"receptor": "pacinian_corpuscle", "frequency_hz": 350}}, "frequency_hz"),
    ({"stimulus": {"receptor": "pacinian_corpuscle"}}, "frequency_hz"),
    ({"stimulus": {"duration_s": 0}}, "stimulus"),
])
def test_validation_errors(doc, key):
    with pytest.raises(ConfigValidationError) as err:
        parse_config(json.dumps(doc))
    assert err.value.key == key


def test_full_document():
    doc = {
        "thresholds": {"h_th": 0.5, "s_th": 0.25, "v_th": 1.0},
        "channel": {"noise": "gaussian", "mean": 0.1, "spread": 0.2, "feedback_gain": -0.3},
        "stimulus": {"receptor": "pacinian_corpuscle", "amplitude": 2.0, "frequency_hz": 200,
                     "duration_s": 0.02, "adaptation_tau_s": 0.01},
        "stages": {"synapse_attenuation": 0.5, "t_t": 0.1},
        "dt": 0.0001, "max_ticks": 50, "seed": 123,
    }
    cfg = parse_config(json.dumps(doc))
    assert cfg.thresholds.s_th == 0.25
    assert cfg.channel.noise.seed == 123 and cfg.channel.feedback_gain == -0.3
    assert cfg.stages.synapse_attenuation == 0.5 and cfg.stages.h_s == pytest.approx(1 / 3)
    assert len(cfg.stimulus_series()) == 200
    assert cfg.to_dict()["stimulus"]["frequency_hz"] == 200.0


def test_overrides():
    cfg = parse_config('{"seed": 3}').with_overrides(seed=9, max_ticks=7)
    assert cfg.seed == 9 and cfg.channel.noise.seed == 9 and cfg.max_ticks == 7
    with pytest.raises(ConfigValidationError):
        SimConfig().with_overrides(max_ticks=0)


def test_load_config(tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{"max_ticks": 3}')
    assert load_config(p).max_ticks == 3
    with pytest.raises(OSError):
        load_config(tmp_path / "missing.json")
