import logging

from merminpoly.log_manager import LogManager


def test_check_and_clean(tmp_path):
    logs = tmp_path / "run_logs"
    manager = LogManager(str(logs))
    assert manager.check_and_clean()
    assert (logs / "init.log").exists()

    (logs / "old.log").write_text("x")
    manager.check_and_clean(clean=False)
    assert (logs / "old.log").exists()
    manager.check_and_clean(clean=True)
    assert not (logs / "old.log").exists()


def test_setup_logging(tmp_path):
    manager = LogManager(str(tmp_path / "run_logs"))
    logger = manager.setup_logging("DEBUG")
    logging.getLogger("merminpoly.polytope").info("hello")
    for handler in logger.handlers:
        handler.flush()
    with open(manager.log_path, encoding="utf-8") as f:
        assert "hello" in f.read()
    assert logger.level == logging.DEBUG
