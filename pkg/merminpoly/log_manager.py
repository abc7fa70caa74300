import glob
import logging
import os
from datetime import datetime
from typing import List, Optional

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class LogManager:
    def __init__(self, logs_dir: str = "working_dir/run_logs"):
        self.logs_dir = logs_dir
        self.log_path: Optional[str] = None

    def ensure_logs_dir(self):
        """Ensure logs directory exists."""
        os.makedirs(self.logs_dir, exist_ok=True)

    def get_existing_logs(self) -> List[str]:
        """Get list of existing log files."""
        return glob.glob(os.path.join(self.logs_dir, "*.log"))

    def clean_logs(self) -> int:
        """Clean all log files, then create init.log."""
        log_files = self.get_existing_logs()
        cleaned_count = 0

        for log_file in log_files:
            try:
                os.remove(log_file)
                cleaned_count += 1
            except OSError as e:
                print(f"❌ Failed to delete {log_file}: {e}")

        init_path = os.path.join(self.logs_dir, "init.log")
        try:
            with open(init_path, "w", encoding="utf-8") as f:
                f.write("Log initialization complete.\n")
            print(f"📝 Created {init_path}")
        except OSError as e:
            print(f"❌ Failed to create init.log: {e}")

        return cleaned_count

    def check_and_clean(self, clean: bool = False) -> bool:
        """Report existing log files and remove them when ``clean`` is set."""
        self.ensure_logs_dir()
        log_files = self.get_existing_logs()

        if log_files and not clean:
            print(f"⚠ Found {len(log_files)} existing log files in {self.logs_dir}/")
            return True

        cleaned_count = self.clean_logs()
        if cleaned_count:
            print(f"✅ Successfully cleaned {cleaned_count} log files and created init.log.")
        return True

    def setup_logging(self, level: str = "INFO") -> logging.Logger:
        """Attach a timestamped file handler and a stderr handler to the package logger."""
        self.ensure_logs_dir()
        logger = logging.getLogger("merminpoly")
        logger.setLevel(getattr(logging, str(level).upper(), logging.INFO))
        for handler in list(logger.handlers):
            logger.removeHandler(handler)
            handler.close()

        stamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        self.log_path = os.path.join(self.logs_dir, f"run_{stamp}.log")
        file_handler = logging.FileHandler(self.log_path, encoding="utf-8")
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(file_handler)

        stream_handler = logging.StreamHandler()
        stream_handler.setLevel(logging.WARNING)
        stream_handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        logger.addHandler(stream_handler)
        return logger
