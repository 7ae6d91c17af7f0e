"""Tests for parameter-count tables."""

import unittest

from tied_plda.eval.tables import format_param_table, param_table, param_table_tsv
from tied_plda.models.params import count_params
from tied_plda.models.reports import ParamRow

from tests.helpers import small_model


class TestParamTables(unittest.TestCase):

    def setUp(self):
        self.rows = [
            ParamRow(system="tied-plda", d=10, state_dependent=1234, state_independent=567),
            ParamRow(system="mix", d=10, state_dependent=8, state_independent=1234567),
        ]

    def test_text_columns_are_aligned(self):
        lines = format_param_table(self.rows).splitlines()
        self.assertEqual(len(lines), 4)
        self.assertEqual(lines[0].split(), ["System", "Dim", "State-dependent", "State-independent"])
        self.assertEqual(set(lines[1]), {"-", " "})
        self.assertEqual(lines[2].split(), ["tied-plda", "10", "1,234", "567"])
        self.assertEqual(lines[3].split(), ["mix", "10", "8", "1,234,567"])
        self.assertEqual(len({len(line) for line in lines}), 1)

    def test_tsv(self):
        self.assertEqual(
            param_table_tsv(self.rows),
            "system\td\tstate_dependent\tstate_independent\n"
            "tied-plda\t10\t1234\t567\n"
            "mix\t10\t8\t1234567\n",
        )

    def test_empty_tables(self):
        self.assertEqual(format_param_table([]), "")
        self.assertEqual(param_table_tsv([]), "")

    def test_rows_from_models(self):
        model = small_model()
        (row,) = param_table([("small", model)])
        self.assertEqual(row.system, "small")
        self.assertEqual(row.d, 4)
        self.assertEqual((row.state_dependent, row.state_independent), count_params(model))
