"""
Documents JSON : rapports de suite et export des constantes de structure.
"""

import os
import json
import logging
from typing import Dict, Any, Optional

import numpy as np

import config
from fixtures import Fixture
from utils import require_kind, to_list

# Configuration du logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

# Champs numériques restitués en tableaux par load_structure
ARRAY_FIELDS = ('bracket0', 'bracket1', 'ds', 'dt', 'd1', 'circledast_matrix', 'matched_basis')


class CustomJSONEncoder(json.JSONEncoder):
    """Encodeur JSON personnalisé pour gérer les types numpy."""

    def default(self, obj):
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, np.bool_):
            return bool(obj)
        return super().default(obj)


def _write_json(document: Dict[str, Any], filepath: str):
    directory = os.path.dirname(filepath)
    try:
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(filepath, 'w', encoding='utf-8') as f:
            json.dump(document, f, ensure_ascii=False, indent=2, cls=CustomJSONEncoder)
    except OSError as e:
        logger.error(f"Erreur lors de l'écriture de {filepath} : {str(e)}")
        raise OSError(e.errno, f"Écriture impossible : {e.strerror}", filepath) from e
    logger.info(f"Données sauvegardées dans {filepath}")


def save_report(report, path: Optional[str] = None, csv: bool = False) -> str:
    """
    Sauvegarde un SuiteReport en JSON (et en CSV si demandé).

    Args:
        report: SuiteReport
        path: Chemin du document (par défaut DATA_DIR/<fixture>_<suite>_report.json)
        csv: Écrit aussi le tableau pandas à côté du JSON

    Returns:
        str: Chemin du document JSON
    """
    filepath = path or os.path.join(config.DATA_DIR, f"{report.fixture}_{report.suite}_report.json")
    _write_json(report.to_document(), filepath)
    if csv:
        csv_path = os.path.splitext(filepath)[0] + '.csv'
        report.to_dataframe().to_csv(csv_path, index=False)
        logger.info(f"Tableau des lois sauvegardé dans {csv_path}")
    return filepath


def structure_document(fixture: Fixture) -> Dict[str, Any]:
    L = fixture.build().algebra
    return {
        'fixture': fixture.name,
        'g0_dim': L.g0_dim,
        'g1_dim': L.g1_dim,
        'bracket0': to_list(L.bracket0),
        'bracket1': to_list(L.bracket1),
        'ds': to_list(L.ds),
        'dt': to_list(L.dt),
        'd1': to_list(L.d1),
        'circledast_matrix': to_list(L.circledast_matrix),
        'matched_basis': to_list(L.matched_basis),
        'tolerances': dict(sorted(fixture.tolerances.items())),
    }


@require_kind('matrix')
def export_structure(fixture: Fixture, out_path: str) -> Dict[str, Any]:
    """Écrit les constantes de structure de la 2-algèbre de Lie de la fixture."""
    document = structure_document(fixture)
    _write_json(document, out_path)
    return document


def load_structure(path: str) -> Dict[str, Any]:
    """Relit un export ; les tenseurs redeviennent des tableaux numpy."""
    with open(path, 'r', encoding='utf-8') as f:
        document = json.load(f)
    for key in ARRAY_FIELDS:
        document[key] = np.asarray(document[key], dtype=float)
    return document
