import numpy as np
import pytest

from ctcbeam.errors import ConfigParseError
from ctcbeam.io import (
    format_config,
    parse_config_text,
    read_field_map,
    write_field_map,
    write_field_map_csv,
)


class TestFieldMapContainer:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        arr = rng.normal(size=(17, 64))
        path = tmp_path / "map.ctcb"
        write_field_map(path, arr)
        back = read_field_map(path)
        assert np.array_equal(back, arr)

    def test_rejects_bad_magic(self, tmp_path):
        path = tmp_path / "junk.ctcb"
        path.write_bytes(b"NOPE" + b"\x00" * 32)
        with pytest.raises(ValueError, match="magic"):
            read_field_map(path)

    def test_rejects_truncation(self, tmp_path):
        path = tmp_path / "map.ctcb"
        write_field_map(path, np.ones((4, 4)))
        data = path.read_bytes()
        path.write_bytes(data[:-8])
        with pytest.raises(ValueError, match="truncated"):
            read_field_map(path)

    def test_csv_twin(self, tmp_path):
        arr = np.arange(12.0).reshape(3, 4)
        path = tmp_path / "map.csv"
        assert write_field_map_csv(path, arr)
        back = np.loadtxt(path, delimiter=",")
        assert np.array_equal(back, arr)


class TestConfigText:
    def test_parse_basic(self):
        raw = parse_config_text("# comment\n\nctc.alpha_phase=3.14\nname = fig2\n")
        assert raw == {"ctc.alpha_phase": "3.14", "name": "fig2"}

    def test_error_carries_line_number(self):
        with pytest.raises(ConfigParseError) as err:
            parse_config_text("a=1\nnot a pair\n")
        assert err.value.line == 2

    def test_duplicate_key_rejected(self):
        with pytest.raises(ConfigParseError):
            parse_config_text("a.b=1\na.b=2\n")

    def test_format_round_trips_floats_exactly(self):
        cfg = {"x": 30.0 / 8192.0, "flag": True, "n": 7, "s": "total-field"}
        text = format_config(cfg)
        back = parse_config_text(text)
        assert float(back["x"]) == cfg["x"]
        assert back["flag"] == "true"
        assert back["s"] == "total-field"
