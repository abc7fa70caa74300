#!/usr/bin/env python3
"""
Main entry point for mermin-polytopes.
Checks dependencies, prepares the working directory, then hands the
remaining arguments to the CLI.
"""

import argparse
import os
import sys

from merminpoly.cli import create_cli_parser, run_cli_mode


def check_dependencies() -> bool:
    """Check for required dependencies."""
    try:
        import networkx  # noqa: F401
        import sympy  # noqa: F401
        return True
    except ImportError as e:
        print(f"❌ Missing dependency: {e}")
        print("Please install required packages:")
        print("  pip install -r requirements.txt")
        return False


def ensure_config_exists(config_path: str) -> bool:
    """Ensure the run configuration exists, writing the defaults if needed."""
    try:
        from merminpoly.config_manager import ConfigManager
        config_manager = ConfigManager(config_path)

        if config_manager.config_exists():
            return True

        print(f"\n{config_path} not found; writing defaults.")
        return config_manager.create_default_config()
    except Exception as e:
        print(f"❌ Configuration setup failed: {e}")
        return False


def setup_environment(args) -> bool:
    """Set up environment."""
    print("\n" + "="*60)
    print("Environment Setup")
    print("="*60)

    # 1. Ensure config exists FIRST
    if not ensure_config_exists(args.config):
        return False

    print("✅ Configuration check passed")

    # 2. Prepare the log directory
    try:
        from merminpoly.config_manager import ConfigManager
        from merminpoly.log_manager import LogManager
        working_dir = ConfigManager(args.config).get("working_dir")
        log_manager = LogManager(os.path.join(working_dir, "run_logs"))
        log_manager.check_and_clean(clean=args.clean_logs)
        print("✅ Log directory ready")
    except Exception:
        print("⚠ Could not prepare the log directory")

    print("\n" + "="*60)
    print("Setup Complete")
    print("="*60)
    return True


def main() -> int:
    """Application entry point."""
    print("🚀 mermin-polytopes")

    # Check dependencies
    if not check_dependencies():
        return 1

    # Launcher-only options; everything else goes to the CLI parser
    parser = argparse.ArgumentParser(description="mermin-polytopes launcher", add_help=False)
    parser.add_argument("--config", default="mermin_config.json")
    parser.add_argument("--clean-logs", action="store_true", help="Remove old run logs first")

    args, remaining = parser.parse_known_args()

    if not setup_environment(args):
        print("\n❌ Environment setup failed. Exiting.")
        return 1

    cli_parser = create_cli_parser()
    cli_args = cli_parser.parse_args(remaining + ["--config", args.config] if remaining else remaining)
    return run_cli_mode(cli_args)


if __name__ == "__main__":
    sys.exit(main())
