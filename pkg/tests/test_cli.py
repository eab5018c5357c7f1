import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout

from sympy import expand

from donaldson_gluing import config
from donaldson_gluing.arithmetic import format_gaussian, gaussian
from donaldson_gluing.catalog.store import CatalogStore, build_from_recipe
from donaldson_gluing.cli import EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION_FAILED, main
from donaldson_gluing.exp_polynomial import ExpPolynomial, QuadMarker
from tests.utils import taylor_coefficients, to_sympy


class TestCli(unittest.TestCase):

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.directory.cleanup()

    def run_cli(self, *arguments):
        stdout, stderr = io.StringIO(), io.StringIO()
        with redirect_stdout(stdout), redirect_stderr(stderr):
            code = main(["--catalog_directory", self.directory.name] + list(arguments))
        return code, stdout.getvalue(), stderr.getvalue()

    def run_json(self, *arguments):
        code, output, _ = self.run_cli(*arguments)
        self.assertEqual(code, EXIT_OK)
        return json.loads(output)

    def write_file(self, name, text):
        filename = os.path.join(self.directory.name, name)
        with open(filename, "w") as output_file:
            output_file.write(text)
        return filename

    def test_glue(self):
        data = self.run_json("glue", "--left", "bg:3", "--right", "bg:3", "--g", "3")

        self.assertEqual(data["left"], "bg:3")
        self.assertEqual(data["w_sq"], 0)
        self.assertEqual(sorted(pair[2:] for pair in data["pairs"]), [["+", "-16"], ["-", "-16"]])

        data = self.run_json("glue", "--left", "dia2:2:3", "--right", "dia2:2:3", "--g", "3")
        self.assertEqual(data["pairs"], [])

    def test_glue_table(self):
        code, output, _ = self.run_cli("--table", "glue", "--left", "bg:3", "--right", "bg:3", "--g", "3")
        rows = [line.split("\t") for line in output.splitlines()]

        self.assertEqual(code, EXIT_OK)
        self.assertEqual(sorted(row[2:] for row in rows), [["+", "-16"], ["-", "-16"]])

    def test_torus_glue(self):
        data = self.run_json("glue", "--left", "K3", "--right", "K3", "--g", "1", "--torus")
        self.assertEqual([pair[2:] for pair in data["pairs"]], [["+", "-1/4"], ["-", "-1/4"], ["0", "-1/2"]])

        code, _, error = self.run_cli("glue", "--left", "K3", "--right", "K3", "--g", "1")
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("glue_torus", error)

    def test_eval(self):
        _, output, _ = self.run_cli("glue", "--left", "bg:3", "--right", "bg:3", "--g", "3")
        filename = self.write_file("glued.json", output)

        data = self.run_json("eval", "--glued", filename, "--d1", "T1", "--d2", "T1", "--sigma-d", "1")
        expected = ExpPolynomial(((2, -16), (-2, -16)), QuadMarker.PLUS, 0)
        self.assertEqual(data["value"], expected.to_json())
        self.assertNotIn("expansion", data)

        data = self.run_json("eval", "--glued", filename, "--d1", "T1", "--d2", "T1", "--sigma-d", "1",
                             "--expand-order")
        self.assertEqual(len(data["expansion"]), 7)
        self.assertEqual(data["expansion"][0], format_gaussian(gaussian(-32)))
        self.assertEqual(data["expansion"][1], format_gaussian(gaussian(0)))

        data = self.run_json("--float", "eval", "--glued", filename, "--d1", "T1", "--d2", "T1", "--sigma-d", "1")
        self.assertEqual([complex(term["c"]) for term in data["value"]["terms"]], [-16 + 0j, -16 + 0j])

        code, _, error = self.run_cli("eval", "--glued", filename, "--d1", "T1", "--d2", "T1", "--sigma-d", "1",
                                      "--expand-order", "99")
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("--expand-order", error)

        code, _, error = self.run_cli("eval", "--glued", filename, "--d1", "T1", "--d2", "K_Bg", "--sigma-d", "1")
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("Split class parts", error)

    def test_eval_expansion_matches_taylor_series(self):
        _, output, _ = self.run_cli("glue", "--left", "bg:3", "--right", "bg:3", "--g", "3")
        filename = self.write_file("glued.json", output)
        evaluate = ["eval", "--glued", filename, "--d1", "E1", "--d2", "E1", "--sigma-d", "1", "--expand-order"]

        for order in (1, 6, config.MAX_EXPAND_ORDER):
            data = self.run_json(*(evaluate + [str(order)]))
            expected = taylor_coefficients(data["value"], order)

            self.assertEqual(data["value"]["square"], "-2")
            self.assertEqual(len(data["expansion"]), order + 1)
            for n, (text, coefficient) in enumerate(zip(data["expansion"], expected)):
                self.assertEqual(expand(to_sympy(text) - coefficient), 0, "order=%d t^%d" % (order, n))

        code, _, error = self.run_cli(*(evaluate + [str(config.MAX_EXPAND_ORDER + 1)]))
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("--expand-order", error)

    def test_check_entry(self):
        data = self.run_json("check", "--entry", "bg:4")

        self.assertEqual(data["subject"], "B4")
        self.assertEqual(data["status"], "passed")
        self.assertIn("relation_polynomial", data["suites"])

    def test_check_glued(self):
        _, output, _ = self.run_cli("glue", "--left", "bg:3", "--right", "bg:3", "--g", "3")
        data = json.loads(output)

        code, _, _ = self.run_cli("check", "--glued", self.write_file("glued.json", output))
        self.assertEqual(code, EXIT_OK)

        data["pairs"][0][3] = "-32"
        code, output, _ = self.run_cli("check", "--glued", self.write_file("tampered.json", json.dumps(data)))
        self.assertEqual(code, EXIT_VERIFICATION_FAILED)
        self.assertEqual(json.loads(output)["suites"]["coefficient_match"]["status"], "failed")

    def test_fit(self):
        data = self.run_json("fit", "--g", "2")

        self.assertEqual(data[0], {"alpha": 1, "M": ExpPolynomial.exponential(2, -32).to_json()})
        self.assertEqual(data[1], {"alpha": 2, "M": ExpPolynomial.exponential(-2, 32).to_json()})

        data = self.run_json("fit", "--g", "3", "--references", "dia2:1:3,dia2:1:3,glue", "dia2:2:3,dia2:2:3,glue")
        self.assertEqual([row["alpha"] for row in data], [3, 4, 5])
        self.assertTrue(all(row["M"]["terms"] == [] for row in data))

        code, _, error = self.run_cli("fit", "--g", "2", "--references", "bg:2,bg:2")
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("LEFT,RIGHT,GLUED", error)

    def test_conjecture(self):
        filename = CatalogStore(self.directory.name).save(build_from_recipe("cg:3"))

        data = self.run_json("conjecture", "--left", filename, "--right", filename, "--g", "3")
        self.assertTrue(data["experimental"])
        self.assertFalse(data["sigma_shift"])
        self.assertEqual([pair[3] for pair in data["pairs"]], ["-16", "-16"])

    def test_catalog(self):
        data = self.run_json("catalog", "list")
        self.assertEqual(data["stored"], [])
        self.assertIn("bg:3", data["standard"])

        data = self.run_json("build", "bg:2")
        self.assertEqual(data["name"], "B2")
        self.assertTrue(os.path.isfile(os.path.join(self.directory.name, "bg_2.json")))

        data = self.run_json("catalog", "show", "B2")
        self.assertEqual(data["recipe"], "bg:2")

        code, _, error = self.run_cli("catalog", "show")
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("needs an entry name", error)

    def test_errors(self):
        code, _, error = self.run_cli("build", "enriques:1")
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("Unknown catalog entry", error)

        filename = CatalogStore(self.directory.name).save(build_from_recipe("cg:2"))
        with open(filename) as input_file:
            data = json.load(input_file)
        data["series"]["entries"][0]["a"] = "-3"
        self.write_file(os.path.basename(filename), json.dumps(data))

        code, _, error = self.run_cli("catalog", "show", "C2")
        self.assertEqual(code, EXIT_VERIFICATION_FAILED)
        self.assertIn("catalog round trip", error)

    def test_usage_error(self):
        with redirect_stderr(io.StringIO()), self.assertRaises(SystemExit) as context:
            main(["glue", "--left", "bg:3"])

        self.assertEqual(context.exception.code, 2)
