"""
config_manager.py
Handles the JSON run configuration: seeds, sample sizes and enumeration settings.
"""

import json
import os
from typing import Any, Dict


DEFAULT_CONFIG = {
    "seed": 20240601,
    "samples": 1000,
    "lambda2_samples": 500,
    "mp0_samples": 200,
    "weight_samples": 20,
    "invariance_samples": 500,
    "membership_samples": 1000,
    "enumeration_method": "dd",
    "workers": 1,
    "working_dir": "working_dir",
    "log_level": "INFO",
}

ENUMERATION_METHODS = ("dd", "brute")


class ConfigManager:
    def __init__(self, config_path: str = "mermin_config.json"):
        self.config_path = config_path

    def config_exists(self) -> bool:
        return os.path.exists(self.config_path)

    def load_config(self) -> Dict[str, Any]:
        if not self.config_exists():
            raise FileNotFoundError(f"Configuration file '{self.config_path}' not found")
        with open(self.config_path, 'r') as f:
            return json.load(f)

    def save_config(self, config_data: Dict[str, Any]):
        with open(self.config_path, 'w') as f:
            json.dump(config_data, f, indent=2)

    def create_default_config(self) -> bool:
        """Write DEFAULT_CONFIG to disk."""
        try:
            self.save_config(DEFAULT_CONFIG.copy())
            print(f"✅ Configuration saved to {self.config_path}")
            return True
        except OSError as e:
            print(f"❌ Failed to save configuration: {e}")
            return False

    def load_or_default(self) -> Dict[str, Any]:
        """Stored values merged over DEFAULT_CONFIG; the defaults alone when no file exists."""
        config = DEFAULT_CONFIG.copy()
        if self.config_exists():
            config.update(self.load_config())
        return config

    def get(self, key: str) -> Any:
        return self.load_or_default().get(key, DEFAULT_CONFIG.get(key))


def merge_overrides(config: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """CLI flags win over the config file; None means the flag was not given."""
    merged = dict(config)
    for key, value in overrides.items():
        if value is not None:
            merged[key] = value
    if merged.get("enumeration_method") not in ENUMERATION_METHODS:
        raise ValueError(f"enumeration_method must be one of {ENUMERATION_METHODS}")
    return merged
