import math

import numpy as np
import pytest

from ctcbeam import PresetLookupError, preset, preset_names, validate
from ctcbeam.errors import ConfigParseError
from ctcbeam.scenarios import coerce_value, resolve_config, scenario_from_config


EXPECTED_PRESETS = {
    "fig2_diffraction",
    "fig3_bouncing",
    "fig4_constructive",
    "fig4_destructive",
    "fig5_solitons",
    "toy_single_mode",
}


class TestRegistry:
    def test_names(self):
        assert set(preset_names()) == EXPECTED_PRESETS

    def test_unknown_name_lists_valid_ones(self):
        with pytest.raises(PresetLookupError) as err:
            preset("fig7_wormhole")
        assert "fig2_diffraction" in str(err.value)

    def test_every_preset_validates_clean(self):
        for name in preset_names():
            assert validate(preset(name)) == [], name

    def test_fig4_phases(self):
        assert preset("fig4_constructive").ctc.alpha_phase == 0.0
        assert preset("fig4_destructive").ctc.alpha_phase == pytest.approx(math.pi)

    def test_fig2_window_location(self):
        assert preset("fig2_diffraction").ctc.y_out == pytest.approx(-20.0, abs=1.0)

    def test_fig5_is_mean_subtracted_with_background(self):
        s = preset("fig5_solitons")
        assert s.ctc.mode == "mean-subtracted"
        assert s.background_reference is not None
        assert s.params.g > 0

    def test_toy_window_covers_domain(self):
        s = preset("toy_single_mode")
        assert np.all(s.ctc.window_weights(s.grid) == 1.0)

    def test_scenario_cross_references(self):
        for name in preset_names():
            s = preset(name)
            assert s.base_initial.grid == s.grid
            assert s.T == s.grid.duration
            if s.background_reference is not None:
                assert s.background_reference.grid == s.grid


class TestValidate:
    def test_window_outside_domain(self):
        cfg = {"ctc.y_out": 500.0}
        violations = validate(scenario_from_config(cfg))
        assert len(violations) == 1
        assert "window" in violations[0]

    def test_dt_heuristic(self):
        cfg = {"grid.dt": 0.05}  # way past the pi/4 kinetic-phase bound at ny=1024
        violations = validate(scenario_from_config(cfg))
        assert any("dt" in v for v in violations)

    def test_packet_near_edge(self):
        cfg = {"initial.y0": -78.0, "initial.sigma": 6.0}
        violations = validate(scenario_from_config(cfg))
        assert any("edge density" in v for v in violations)

    def test_uniform_background_exempt_from_edge_margin(self):
        cfg = {
            "initial.kind": "background_dip",
            "initial.depth": 0.2,
            "initial.width": 3.0,
            "initial.y0": 0.0,
        }
        assert validate(scenario_from_config(cfg)) == []


class TestConfig:
    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigParseError):
            coerce_value("grid.nz", "12")

    def test_type_coercion(self):
        assert coerce_value("grid.ny", "512") == 512
        assert coerce_value("ctc.alpha_phase", "3.141592653589793") == pytest.approx(math.pi)
        assert coerce_value("initial.normalize", "false") is False
        assert coerce_value("ctc.mode", "total-field") == "total-field"

    def test_bad_values_rejected(self):
        with pytest.raises(ConfigParseError):
            coerce_value("grid.ny", "lots")
        with pytest.raises(ConfigParseError):
            coerce_value("initial.normalize", "maybe")

    def test_defaults_fill_in(self):
        cfg = resolve_config({})
        assert cfg["grid.ny"] == 1024
        assert cfg["ctc.y_in"] == cfg["ctc.y_out"]

    def test_bad_kind_rejected(self):
        with pytest.raises(ConfigParseError):
            scenario_from_config({"initial.kind": "vortex"})
        with pytest.raises(ConfigParseError):
            scenario_from_config({"potential.kind": "random"})
