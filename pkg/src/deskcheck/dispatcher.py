import contextlib
import json
import os
import socket
import time
import traceback
from datetime import datetime, timezone
from pathlib import Path

import debug
from deskcheck.check import DeskCheck
from deskcheck.checkresult import CheckResult


class Dispatcher:
    def __init__(self):
        self.queued_checks: list[DeskCheck] = []
        results_root = Path(os.getenv("RESULTS_ROOT", "results"))
        self.folder = str(results_root / "deskcheck/")

    def queue_check(self, check: DeskCheck):
        self.queued_checks.append(check)

    @staticmethod
    def _raw_log_path(base_folder: str, name: str) -> Path:
        raw_folder = Path(base_folder) / "raw"
        raw_folder.mkdir(parents=True, exist_ok=True)
        return raw_folder / f"{name}_raw.txt"

    @contextlib.contextmanager
    def _redirect_trace_to_raw(self, check: DeskCheck):
        raw_path = self._raw_log_path(self.folder, check.name)
        raw_path.write_text("")

        with debug.tracing(raw_path):
            yield raw_path

    def _log_check_failure(self, check: DeskCheck, error: Exception) -> None:
        """Persist failure details into the check's result file."""
        try:
            os.makedirs(self.folder, exist_ok=True)
            path = Path(self.folder) / f"{check.name}.json"
            entry = {
                "timestamp": datetime.now(timezone.utc).isoformat(),
                "check": check.name,
                "status": "error",
                "error": str(error),
                "error_type": type(error).__name__,
                "hostname": socket.gethostname(),
                "traceback": traceback.format_exc(),
            }
            path.write_text(json.dumps(entry, ensure_ascii=False, indent=2))
        except OSError:
            pass

    def run_single(self, check: DeskCheck) -> CheckResult:
        os.makedirs(self.folder, exist_ok=True)
        result = CheckResult(check, hostname=socket.gethostname())

        with self._redirect_trace_to_raw(check):
            start_time = time.time()
            try:
                outcome = check.run()
            except Exception as e:
                self._log_check_failure(check, e)
                result.error = f"{type(e).__name__}: {e}"
            else:
                result.ok = outcome.ok
                result.details = outcome.details
            result.time_s = time.time() - start_time

        if result.error is None:
            self._write_file(Path(self.folder) / f"{check.name}.json", result.toJSON())
        return result

    def run_all(self) -> list[CheckResult]:
        return [self.run_single(check) for check in self.queued_checks]

    def _write_file(self, path, content):
        with open(path, "w", encoding="utf-8") as f:
            f.write(content)
