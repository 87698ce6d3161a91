from __future__ import annotations

import json
import os
import sys
import tempfile
import unittest
from pathlib import Path
from unittest import mock

ROOT = Path(__file__).resolve().parents[1]
SRC_DIR = ROOT / "src"
if str(SRC_DIR) not in sys.path:
    sys.path.insert(0, str(SRC_DIR))

import config
from deskcheck.check import CheckOutcome, DeskCheck
from deskcheck.dispatcher import Dispatcher
from deskcheck.registry import DeskChecks, resolve


def _boom() -> CheckOutcome:
    raise RuntimeError("boom")


class TestRegistry(unittest.TestCase):
    def test_resolve_all(self):
        self.assertEqual(len(resolve([])), len(DeskChecks))

    def test_resolve_named(self):
        self.assertEqual([c.name for c in resolve(["frobenius", "tensor-gr"])], ["frobenius", "tensor-gr"])

    def test_resolve_unknown(self):
        with self.assertRaises(KeyError):
            resolve(["frobenius", "nope"])

    def test_names_are_unique(self):
        names = [c.value.name for c in DeskChecks]
        self.assertEqual(len(names), len(set(names)))


class TestChecks(unittest.TestCase):
    def test_cheap_checks_pass(self):
        for name in ("invertible-weights", "frobenius", "tensor-gr", "round-trip"):
            outcome = resolve([name])[0].run()
            self.assertTrue(outcome.ok, f"{name}: {outcome.details}")


class TestDispatcher(unittest.TestCase):
    def setUp(self) -> None:
        self.tmp = tempfile.TemporaryDirectory()
        patcher = mock.patch.dict(os.environ, {"RESULTS_ROOT": self.tmp.name})
        patcher.start()
        self.addCleanup(patcher.stop)
        self.addCleanup(self.tmp.cleanup)

    def test_result_file_written(self):
        check = resolve(["invertible-weights"])[0]
        result = Dispatcher().run_single(check)
        self.assertTrue(result.ok)
        path = Path(self.tmp.name) / "deskcheck" / "invertible-weights.json"
        data = json.loads(path.read_text(encoding="utf-8"))
        self.assertTrue(data["ok"])
        self.assertEqual(data["check"]["name"], "invertible-weights")
        self.assertIn("PASS", result.toString(color=False))

    def test_trace_is_restored(self):
        before = config.APPEND_TRACE
        Dispatcher().run_single(resolve(["frobenius"])[0])
        self.assertEqual(config.APPEND_TRACE, before)
        self.assertTrue((Path(self.tmp.name) / "deskcheck" / "raw" / "frobenius_raw.txt").exists())

    def test_raising_check_is_recorded(self):
        result = Dispatcher().run_single(DeskCheck("exploding", "raises", _boom))
        self.assertFalse(result.ok)
        self.assertIn("RuntimeError", result.error)
        data = json.loads((Path(self.tmp.name) / "deskcheck" / "exploding.json").read_text(encoding="utf-8"))
        self.assertEqual(data["status"], "error")
        self.assertIn("FAIL", result.toString(color=False))


if __name__ == "__main__":
    unittest.main()
