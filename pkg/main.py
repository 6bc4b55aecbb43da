import os
import sys
import argparse
import logging
from typing import Dict, Any, List, Optional

import numpy as np
import pandas as pd

import config
from errors import VerificationError
from fixtures import load_fixture, bundled_fixture_path
from suite_runner import SUITES, SuiteReport, run_suite
from reports import save_report, export_structure

# Configuration du logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

EXIT_PASSED = 0
EXIT_LAW_FAILED = 1
EXIT_ERROR = 2


def resolve_fixture_path(name: str) -> str:
    """Chemin explicite, ou nom d'une fixture fournie (avec ou sans extension)."""
    if os.path.exists(name):
        return name
    for candidate in (name, f"{name}.cm", f"{name}.m2g"):
        path = bundled_fixture_path(candidate)
        if os.path.exists(path):
            return path
    return name


def display_report(report: SuiteReport):
    """Affiche le rapport d'une suite de manière formatée."""
    print(f"\n=== SUITE {report.suite.upper()} : {report.fixture} ===\n")
    print(f"🎲 Graine : {report.seed}   📐 Échantillons : {report.samples}   ⏱️ {report.wall_time:.2f}s")
    print("-" * 50)

    with pd.option_context('display.max_colwidth', 60, 'display.width', 120):
        table = report.to_dataframe()
        table['passed'] = table['passed'].map({True: '✅', False: '❌'})
        print(table.to_string(index=False, float_format=lambda v: f"{v:.2e}"))
    print("-" * 50)

    failed = report.failed_laws()
    if failed:
        print(f"❌ {len(failed)} loi(s) en échec :")
        for law in report.laws:
            if law['passed']:
                continue
            print(f"  • {law['law']}")
            if law['error']:
                print(f"     {law['error']}")
            for key, value in law['residuals'].items():
                bound = law['thresholds'].get(key, law['minimums'].get(key))
                print(f"     {key} = {value:.3e} (seuil {bound})")
    else:
        print(f"✅ {len(report.laws)} lois validées")


def display_structure(document: Dict[str, Any]):
    """Affiche les constantes de structure exportées."""
    print(f"\n=== 2-ALGÈBRE DE LIE : {document['fixture']} ===\n")
    print(f"📏 dim 𝔤₀ = {document['g0_dim']}, dim 𝔤₁ = {document['g1_dim']}")
    for key in ('ds', 'dt', 'd1'):
        print(f"\n🔗 {key} :")
        print(np.array2string(np.asarray(document[key]), precision=6, suppress_small=True))
    nonzero = int(np.count_nonzero(np.abs(np.asarray(document['bracket1'])) > 1e-12))
    print(f"\n🧮 Constantes de structure non nulles de 𝔤₁ : {nonzero}")
    print("-" * 50)


def parse_args(argv: Optional[List[str]] = None):
    """Parse les arguments de la ligne de commande."""
    parser = argparse.ArgumentParser(description='Vérification des lois de 2-groupes et de champs multiplicatifs')
    subparsers = parser.add_subparsers(dest='command', required=True)

    check = subparsers.add_parser('check', help='Vérifie une suite de lois sur une fixture')
    check.add_argument('fixture', help='Chemin ou nom de fixture (ex. f2_z3_z2)')
    check.add_argument('--suite', choices=SUITES, default='all', help='Suite de lois à vérifier')
    check.add_argument('--seed', type=int, default=None, help='Graine (par défaut celle de la fixture)')
    check.add_argument('--samples', type=int, default=None, help="Nombre d'échantillons")
    check.add_argument('--report', default=None, help='Chemin du rapport JSON')
    check.add_argument('--csv', action='store_true', help='Écrit aussi le tableau des lois en CSV')
    check.add_argument('--workers', type=int, default=1, help='Lois vérifiées en parallèle')

    export = subparsers.add_parser('export', help='Exporte les constantes de structure de la 2-algèbre')
    export.add_argument('fixture', help='Chemin ou nom de fixture matricielle')
    export.add_argument('--out', required=True, help='Chemin du document JSON')

    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    logging.getLogger().setLevel(config.LOG_LEVEL)

    try:
        fixture = load_fixture(resolve_fixture_path(args.fixture))
    except VerificationError as e:
        logger.error(f"Erreur lors du chargement de la fixture : {str(e)}")
        return EXIT_ERROR

    if args.command == 'export':
        try:
            document = export_structure(fixture, args.out)
        except (VerificationError, OSError) as e:
            logger.error(f"Erreur lors de l'export : {str(e)}")
            return EXIT_ERROR
        display_structure(document)
        return EXIT_PASSED

    try:
        report = run_suite(fixture, args.suite, seed=args.seed, samples=args.samples, workers=args.workers)
    except VerificationError as e:
        logger.error(f"Erreur lors de la vérification : {str(e)}")
        return EXIT_ERROR

    display_report(report)
    if args.report or args.csv:
        try:
            save_report(report, args.report, csv=args.csv)
        except OSError as e:
            logger.error(f"Erreur lors de la sauvegarde du rapport : {str(e)}")
            return EXIT_ERROR
    return EXIT_PASSED if report.passed else EXIT_LAW_FAILED


if __name__ == "__main__":
    sys.exit(main())
