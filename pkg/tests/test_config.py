import json

import numpy as np
import pytest

from obstacle_mvs.config import PRESETS, get_preset, merge_config
from obstacle_mvs.config.run_config import config_from_dict, load_config, preset_config
from obstacle_mvs.errors import ConfigError
from obstacle_mvs.utils import SCHEMA_VERSION, VersionManager, describe_streams, stream, stream_seed


class TestPresets:
    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_presets_validate(self, name):
        config = preset_config(name)
        assert config.name == name
        assert max(config.radii) <= config.grid.M / 4

    def test_laplace3d_suites(self):
        config = preset_config("laplace3d")
        assert config.grid.dim == 3
        assert config.suites.enabled() == ["nesting", "volume", "monotone_average", "growth", "fb_measure", "cross_solver"]
        assert len(config.radii) == 3
        assert "svg" not in config.output.formats

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            get_preset("poisson")

    def test_merge_is_deep_and_pure(self):
        base = {"grid": {"M": 2.0, "h": 0.1}, "name": "a"}
        merged = merge_config(base, {"grid": {"h": 0.05}})
        assert merged == {"grid": {"M": 2.0, "h": 0.05}, "name": "a"}
        assert base["grid"]["h"] == 0.1


class TestValidation:
    def test_defaults(self):
        config = config_from_dict({})
        assert config.schema_version == SCHEMA_VERSION
        assert config.problem.route == "lcp"
        assert config.suites.enabled() == []

    def test_radius_guard(self):
        with pytest.raises(ConfigError):
            config_from_dict({"grid": {"M": 1.0}, "problem": {"radii": [0.5]}})

    @pytest.mark.parametrize("override", [
        {"grid": {"h": 0.3}},
        {"grid": {"dim": 4}},
        {"coefficients": {"kind": "layered"}},
        {"problem": {"radii": []}},
        {"problem": {"radii": [0.25, 0.25]}},
        {"problem": {"radii": [-0.25]}},
        {"problem": {"tol": 1e-12}},
        {"problem": {"omega": 2.0}},
        {"problem": {"s": 1.5}},
        {"problem": {"route": "multigrid"}},
        {"problem": {"offset": [0.1]}},
        {"output": {"formats": ["png"]}},
        {"unknown_block": {}},
        {"schema_version": "2.0"},
        {"schema_version": "not-a-version"},
    ])
    def test_invalid_values(self, override):
        with pytest.raises(ConfigError):
            config_from_dict(override)

    def test_coarse_levels_must_be_valid(self):
        # 2M/(4h) = 4 < 8
        with pytest.raises(ConfigError):
            config_from_dict({"grid": {"M": 1.0, "h": 1 / 8}, "problem": {"radii": [0.25]},
                              "suites": {"fb_measure": True}})

    def test_radii_are_sorted(self):
        assert config_from_dict({"problem": {"radii": [0.5, 0.25]}}).radii == [0.25, 0.5]


class TestHash:
    def test_hash_is_stable(self):
        a = preset_config("checkerboard2d")
        b = preset_config("checkerboard2d")
        assert a.config_hash() == b.config_hash()
        assert len(a.config_hash()) == 64

    def test_hash_tracks_changes(self):
        a = preset_config("checkerboard2d")
        b = preset_config("checkerboard2d", {"seed": 1})
        assert a.config_hash() != b.config_hash()

    def test_canonical_json_sorted(self):
        data = json.loads(config_from_dict({}).canonical_json())
        assert list(data) == sorted(data)


class TestConfigFile:
    def test_file_over_preset(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"preset": "laplace2d", "problem": {"radii": [0.5]}}), encoding="utf-8")
        config = load_config(path)
        assert config.name == "laplace2d"
        assert config.radii == [0.5]
        assert config.grid.M == 4.0

    def test_file_over_defaults(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"name": "small", "grid": {"M": 1.0}, "problem": {"radii": [0.25]}}),
                        encoding="utf-8")
        config = load_config(path)
        assert config.name == "small"
        assert config.grid.h == pytest.approx(1 / 32)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "none.json")

    def test_broken_json(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("{grid:", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_top_level_must_be_object(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_config(path)


class TestSeedsAndVersion:
    def test_streams_are_reproducible_and_independent(self):
        a = stream(7, "growth").random(4)
        assert np.array_equal(a, stream(7, "growth").random(4))
        assert not np.array_equal(a, stream(7, "coefficients").random(4))
        assert not np.array_equal(a, stream(8, "growth").random(4))

    def test_stream_seed(self):
        assert stream_seed(7, "coefficients") == stream_seed(7, "coefficients")
        assert 0 <= stream_seed(7, "coefficients") < 2 ** 32

    def test_describe_streams(self):
        info = describe_streams(3, ["growth", "coefficients"])
        assert info["root_seed"] == 3
        assert list(info["streams"]) == ["coefficients", "growth"]

    def test_compare_versions(self):
        assert VersionManager.compare_versions("1.2.0", "1.10.0") == -1
        assert VersionManager.compare_versions("1.0", "1.0.0") == 0
        assert VersionManager.compare_versions("2.0", "1.9") == 1

    def test_schema_check(self):
        VersionManager.check_schema("1.3")
        with pytest.raises(ConfigError):
            VersionManager.check_schema("2.0")

    def test_version_info(self):
        info = VersionManager().get_version_info()
        assert info["schema_version"] == SCHEMA_VERSION
        assert {"version", "python_version", "numpy", "scipy", "platform"} <= set(info)
