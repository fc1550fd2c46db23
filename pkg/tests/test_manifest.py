import json
import os
import tempfile
import unittest

import numpy as np

from entrobound import __version__
from entrobound.manifest import RunManifest, dumps_json, file_sha256, format_float


class TestJsonFormat(unittest.TestCase):
    """Unit tests for the fixed-precision JSON writer."""

    def test_seventeen_digits(self):
        """Should write every float with 17 significant digits."""
        self.assertEqual(format_float(0.1), "0.10000000000000001")
        self.assertEqual(format_float(1.01e-25), "%.17g" % 1.01e-25)
        self.assertEqual(dumps_json({"x": 0.1}), '{\n    "x": 0.10000000000000001\n}')

    def test_integral_floats_stay_floats(self):
        """Should keep a decimal point on integral floats and leave ints alone."""
        self.assertEqual(format_float(1.0), "1.0")
        text = dumps_json({"a": 1.0, "b": 1, "c": True, "d": None})
        document = json.loads(text)
        self.assertIsInstance(document["a"], float)
        self.assertIsInstance(document["b"], int)
        self.assertIs(document["c"], True)
        self.assertIsNone(document["d"])

    def test_numpy_scalars_and_nesting(self):
        """Should convert numpy scalars inside lists and dicts."""
        document = json.loads(dumps_json({"rows": [{"p": np.float64(0.5), "n": np.int64(3)}],
                                          "flag": np.bool_(False)}))
        self.assertEqual(document, {"rows": [{"p": 0.5, "n": 3}], "flag": False})

    def test_non_finite(self):
        """Should use the JSON spellings of NaN and infinities."""
        text = dumps_json([float("nan"), float("inf"), -float("inf")], indent=None)
        self.assertEqual(text, "[NaN, Infinity, -Infinity]")

    def test_strings_untouched(self):
        """Should not rewrite ordinary strings that look like numbers."""
        self.assertEqual(json.loads(dumps_json({"s": "float:1.5"})), {"s": "float:1.5"})


class TestRunManifest(unittest.TestCase):
    """Unit tests for the reproducibility manifest."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.input = os.path.join(self.tmp.name, "input.csv")
        with open(self.input, "w") as fp:
            fp.write("a,b\n1,2\n")

    def test_write_next_to_output(self):
        """Should write <out>.manifest.json with the version, inputs and seed."""
        manifest = RunManifest("cv-spatial", parameters={"sigma_p": 1e-3}, seed=7)
        manifest.add_input(self.input)
        path = manifest.write(os.path.join(self.tmp.name, "out.csv"))
        self.assertTrue(path.endswith("out.csv.manifest.json"))
        with open(path) as fp:
            document = json.load(fp)
        self.assertEqual(document["tool_version"], __version__)
        self.assertEqual(document["seed"], 7)
        self.assertEqual(document["parameters"]["sigma_p"], 1e-3)
        self.assertEqual(document["inputs"][self.input], file_sha256(self.input))

    def test_identical_manifests(self):
        """Should serialize identical runs to identical text."""
        first = RunManifest("werner", parameters={"p": 0.25, "state": "gw"}).dumps()
        second = RunManifest("werner", parameters={"state": "gw", "p": 0.25}).dumps()
        self.assertEqual(first, second)


if __name__ == "__main__":
    unittest.main()
