import os
import tempfile
import unittest
from unittest import mock

import suite_runner
from main import main, resolve_fixture_path, EXIT_PASSED, EXIT_LAW_FAILED, EXIT_ERROR


class TestMain(unittest.TestCase):
    """Codes de sortie de la ligne de commande."""

    def setUp(self):
        self.print_patcher = mock.patch('builtins.print')
        self.print_patcher.start()

    def tearDown(self):
        self.print_patcher.stop()

    def test_resolve_bundled_name(self):
        """Test de la résolution d'un nom de fixture sans extension."""
        self.assertTrue(resolve_fixture_path('f2_z3_z2').endswith(os.path.join('fixtures', 'f2_z3_z2.cm')))
        self.assertEqual(resolve_fixture_path('absente'), 'absente')

    def test_check_passes(self):
        self.assertEqual(main(['check', 'f2_z3_z2', '--suite', 'finite']), EXIT_PASSED)

    def test_check_law_failure(self):
        """Test : une loi violée donne le code 1."""
        def violated(ctx):
            return suite_runner._outcome(residuals={'gap': 1.0}, thresholds={'gap': 1e-6})

        with mock.patch.dict(suite_runner.FINITE_LAWS, {'middle-four': violated}):
            self.assertEqual(main(['check', 'f1_z2']), EXIT_LAW_FAILED)

    def test_check_incompatible_suite(self):
        """Test d'une suite matricielle sur une fixture finie."""
        self.assertEqual(main(['check', 'f1_z2', '--suite', 'lie']), EXIT_ERROR)

    def test_missing_fixture(self):
        self.assertEqual(main(['check', 'inexistante.cm']), EXIT_ERROR)

    def test_malformed_fixture_files(self):
        """Test : fichier non UTF-8 ou groupe mal décrit donnent le code 2, pas une trace."""
        with tempfile.TemporaryDirectory() as directory:
            binary = os.path.join(directory, 'binaire.cm')
            with open(binary, 'wb') as f:
                f.write(b'{"kind": "\xff\xfe"}')
            self.assertEqual(main(['check', binary]), EXIT_ERROR)

            group = os.path.join(directory, 'groupe.m2g')
            with open(group, 'w', encoding='utf-8') as f:
                f.write('{"kind": "matrix", "model": {"type": "inner", "group": "so2"}}')
            self.assertEqual(main(['check', group]), EXIT_ERROR)

    def test_report_written(self):
        """Test de l'écriture du rapport JSON et CSV."""
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'f6.json')
            self.assertEqual(main(['check', 'f6_z4', '--report', path, '--csv']), EXIT_PASSED)
            self.assertTrue(os.path.exists(path))
            self.assertTrue(os.path.exists(os.path.join(directory, 'f6.csv')))

    def test_report_unwritable(self):
        """Test : un chemin de rapport non inscriptible donne le code 2."""
        with tempfile.TemporaryDirectory() as directory:
            blocker = os.path.join(directory, 'fichier')
            with open(blocker, 'w', encoding='utf-8') as f:
                f.write('x')
            code = main(['check', 'f1_z2', '--report', os.path.join(blocker, 'r.json')])
            self.assertEqual(code, EXIT_ERROR)

    def test_export(self):
        """Test de l'export des constantes de structure de F4."""
        with tempfile.TemporaryDirectory() as directory:
            out = os.path.join(directory, 'f4.json')
            self.assertEqual(main(['export', 'f4_so2', '--out', out]), EXIT_PASSED)
            self.assertTrue(os.path.exists(out))

    def test_export_finite(self):
        self.assertEqual(main(['export', 'f2_z3_z2', '--out', 'inutile.json']), EXIT_ERROR)


if __name__ == '__main__':
    unittest.main()
