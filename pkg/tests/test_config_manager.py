import json

import pytest

from merminpoly.config_manager import DEFAULT_CONFIG, ConfigManager, merge_overrides


def test_defaults_without_file(tmp_path):
    manager = ConfigManager(str(tmp_path / "missing.json"))
    assert not manager.config_exists()
    assert manager.load_or_default() == DEFAULT_CONFIG
    with pytest.raises(FileNotFoundError):
        manager.load_config()


def test_create_and_override(tmp_path):
    path = tmp_path / "mermin_config.json"
    manager = ConfigManager(str(path))
    assert manager.create_default_config()
    assert json.loads(path.read_text()) == DEFAULT_CONFIG

    manager.save_config({"seed": 7})
    config = manager.load_or_default()
    assert config["seed"] == 7
    assert config["samples"] == DEFAULT_CONFIG["samples"]
    assert manager.get("seed") == 7


def test_merge_overrides():
    merged = merge_overrides(DEFAULT_CONFIG, {"seed": 3, "workers": None})
    assert merged["seed"] == 3
    assert merged["workers"] == DEFAULT_CONFIG["workers"]
    with pytest.raises(ValueError):
        merge_overrides(DEFAULT_CONFIG, {"enumeration_method": "lrs"})
