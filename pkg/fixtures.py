"""
Chargement et validation des fixtures (documents JSON `.cm` et `.m2g`).

Voir docs/fixture-format.md pour le schéma.
"""

import os
import json
import logging
from dataclasses import dataclass, field
from typing import Dict, Any, Optional, Union

import numpy as np

import config
from errors import VerificationError, FixtureParseError, FixtureValidationError
from finite_core import (
    CrossedModule,
    Internal2Group,
    build_group,
    build_crossed_module,
    two_group_from_crossed_module,
)
from matrix_lie import from_descriptor
from lie2 import MatrixLie2Group, model_from_descriptor

# Configuration du logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

KINDS = ('finite', 'matrix')


@dataclass
class Fixture:
    name: str
    kind: str
    payload: Dict[str, Any]
    seed: int = config.DEFAULT_SEED
    samples: int = config.DEFAULT_PAIR_SAMPLES
    tolerances: Dict[str, float] = field(default_factory=lambda: dict(config.DEFAULT_TOLERANCES))
    path: Optional[str] = None
    _crossed_module: Optional[CrossedModule] = field(default=None, init=False, repr=False)
    _built: Optional[Union[Internal2Group, MatrixLie2Group]] = field(default=None, init=False, repr=False)

    def crossed_module(self) -> CrossedModule:
        if self.kind != 'finite':
            raise FixtureValidationError("Pas de module croisé fini dans une fixture matricielle", 'kind')
        if self._crossed_module is None:
            self._crossed_module = _build_crossed_module(self.payload.get('crossed_module'), self.name)
        return self._crossed_module

    def build(self) -> Union[Internal2Group, MatrixLie2Group]:
        """Internal2Group (fixture finie) ou MatrixLie2Group (fixture matricielle), mémorisé."""
        if self._built is None:
            if self.kind == 'finite':
                try:
                    self._built = two_group_from_crossed_module(self.crossed_module())
                except VerificationError as e:
                    raise FixtureValidationError(str(e), 'crossed_module', e.witness) from e
            else:
                self._built = _build_matrix_2group(self.payload.get('model'), self.name,
                                                   min(self.samples, config.DEFAULT_GROUP_SAMPLES), self.seed)
        return self._built


def _table(value: Any, path: str) -> np.ndarray:
    try:
        array = np.asarray(value)
    except Exception as e:
        raise FixtureValidationError(f"Tableau illisible : {str(e)}", path) from e
    if array.dtype.kind not in 'iu':
        raise FixtureValidationError("Entiers attendus", path)
    return array


def _build_crossed_module(data: Any, name: str) -> CrossedModule:
    if not isinstance(data, dict):
        raise FixtureValidationError("Objet attendu", 'crossed_module')
    for key in ('h_table', 'g_table', 'boundary', 'action'):
        if key not in data:
            raise FixtureValidationError("Champ manquant", f"crossed_module.{key}")
    try:
        H = build_group(_table(data['h_table'], 'crossed_module.h_table'), name=f"{name}:H")
    except VerificationError as e:
        raise FixtureValidationError(str(e), 'crossed_module.h_table', e.witness) from e
    try:
        G = build_group(_table(data['g_table'], 'crossed_module.g_table'), name=f"{name}:G")
    except VerificationError as e:
        raise FixtureValidationError(str(e), 'crossed_module.g_table', e.witness) from e
    try:
        return build_crossed_module(H, G, _table(data['boundary'], 'crossed_module.boundary'),
                                    _table(data['action'], 'crossed_module.action'), name=name)
    except FixtureValidationError:
        raise
    except VerificationError as e:
        raise FixtureValidationError(str(e), 'crossed_module', e.witness) from e


def _build_matrix_2group(data: Any, name: str, n_samples: int, seed: int) -> MatrixLie2Group:
    if not isinstance(data, dict):
        raise FixtureValidationError("Objet attendu", 'model')
    if 'group' not in data:
        raise FixtureValidationError("Champ manquant", 'model.group')
    if not isinstance(data['group'], dict):
        raise FixtureValidationError("Objet attendu", 'model.group', data['group'])
    try:
        group = from_descriptor(data['group'])
    except (VerificationError, ValueError, KeyError, TypeError) as e:
        raise FixtureValidationError(str(e), 'model.group') from e
    try:
        model = model_from_descriptor(data, group)
    except VerificationError as e:
        raise FixtureValidationError(str(e), 'model.type', e.witness) from e
    G = model.to_lie2group(name)
    try:
        G.validate(n_samples, seed)
    except VerificationError as e:
        raise FixtureValidationError(str(e), 'model', e.witness) from e
    return G


def _positive_int(data: Dict[str, Any], key: str, default: int) -> int:
    value = data.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise FixtureValidationError("Entier positif attendu", key, value)
    return value


def load_fixture(path: str) -> Fixture:
    """
    Lit, valide et construit une fixture.

    Raises:
        FixtureParseError: document JSON illisible ou tronqué
        FixtureValidationError: schéma ou construction invalide (avec chemin du champ)
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise FixtureParseError(f"Lecture impossible de {path} : {str(e)}") from e
    except UnicodeDecodeError as e:
        raise FixtureParseError(f"{path} : encodage UTF-8 invalide", witness={'offset': e.start}) from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FixtureParseError(f"{path} : {e.msg}", witness={'line': e.lineno, 'column': e.colno}) from e

    if not isinstance(data, dict):
        raise FixtureValidationError("Objet JSON attendu", '$')
    kind = data.get('kind')
    if kind not in KINDS:
        raise FixtureValidationError(f"Type inconnu {kind!r}, attendu parmi {KINDS}", 'kind')

    tolerances = dict(config.DEFAULT_TOLERANCES)
    overrides = data.get('tolerances', {})
    if not isinstance(overrides, dict):
        raise FixtureValidationError("Objet attendu", 'tolerances')
    for key, value in overrides.items():
        if key not in tolerances:
            raise FixtureValidationError("Seuil inconnu", f"tolerances.{key}")
        if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
            raise FixtureValidationError("Réel strictement positif attendu", f"tolerances.{key}", value)
        tolerances[key] = float(value)

    samples = _positive_int(data, 'samples', config.DEFAULT_PAIR_SAMPLES)
    if samples == 0:
        raise FixtureValidationError("Au moins un échantillon", 'samples')

    fixture = Fixture(
        name=str(data.get('name') or os.path.splitext(os.path.basename(path))[0]),
        kind=kind,
        payload=data,
        seed=_positive_int(data, 'seed', config.DEFAULT_SEED),
        samples=samples,
        tolerances=tolerances,
        path=path,
    )
    fixture.build()
    logger.info(f"Fixture {fixture.name} ({kind}) chargée depuis {path}")
    return fixture


def bundled_fixture_path(filename: str) -> str:
    """Chemin d'une fixture fournie avec le dépôt."""
    if os.path.isabs(config.FIXTURES_DIR):
        return os.path.join(config.FIXTURES_DIR, filename)
    return os.path.join(os.path.dirname(os.path.abspath(__file__)), config.FIXTURES_DIR, filename)
