"""
Orchestration des suites de lois sur une fixture.

Chaque loi est une fonction `ctx -> dict` enregistrée sous un identifiant
descriptif ; le runner l'exécute comme une tâche (temps, erreurs capturées)
et assemble un SuiteReport ordonné par identifiant.
"""

import time
import logging
import threading
import itertools
import concurrent.futures
from datetime import datetime, timezone
from dataclasses import dataclass, field
from typing import Callable, Dict, Any, List, Optional, Tuple

import numpy as np
import pandas as pd
import scipy.linalg

import config
from errors import DimensionMismatch, IncompatibleSuite, NotEquivariant
from fixtures import Fixture
from utils import require_kind, residual
from finite_core import (
    check_interchange,
    check_composition_via_multiplication,
    action_groupoid_iso,
    source_kernel_iso,
)
from gpd_cat import left_regular, check_middle_four
from matrix_lie import (
    adjoint_matrix,
    conjugation_map,
    lie_functor,
    sample_matrices,
    snapshot_differential_stats,
)
from lie2 import (
    ell,
    unit_section_residual,
    structure_map_bracket_residual,
    circledast_identity_check,
    algebra_interchange_residual,
    bracket_compatibility_residual,
    left_translation_residual,
)
from multvf import (
    MultVectorField,
    TwoVectorSpaceMap,
    p,
    verify_multiplicative,
    perturb_arrow_component,
    control_field,
    inner_field,
    kernel_section,
    J_map,
    j_section_residual,
    bracket_objects,
    bracket_arrows,
    bracket_arrows_residual,
    invariance_residual,
    arrow_invariance_residual,
    reconstruction_residual,
    lambda_homomorphism_residual,
    lambda_horizontal_residual,
    lambda_naturality_residual,
    lambda_whiskered_residual,
    unit_arrow,
    limit_factorize,
    map_through_p,
)

# Configuration du logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

SUITES = ('finite', 'lie', 'invariance', 'limit', 'all')
MATRIX_SUITES = ('lie', 'invariance', 'limit')

# Échantillons des lois coûteuses (crochets de champs, composés horizontaux)
COSTLY_SAMPLES = 8


@dataclass
class LawCheck:
    """Une loi à vérifier, exécutée comme une tâche."""
    law_id: str
    suite: str
    func: Callable[['LawContext'], Dict[str, Any]]
    result: Optional[Dict[str, Any]] = None
    elapsed: float = 0.0
    error: Optional[str] = None


class LawContext:
    """Données partagées par les lois d'une exécution : fixture, graine, échantillons, caches."""

    def __init__(self, fixture: Fixture, seed: int, samples: int):
        self.fixture = fixture
        self.seed = seed
        self.n_pairs = samples
        self.n_points = min(samples, config.DEFAULT_GROUP_SAMPLES)
        self.tolerances = fixture.tolerances
        self.G = fixture.build()
        self.stats_baseline: Dict[str, int] = snapshot_differential_stats()
        self._lock = threading.RLock()
        self._cache: Dict[str, Any] = {}

    def cached(self, key: str, factory: Callable[[], Any]) -> Any:
        with self._lock:
            if key not in self._cache:
                self._cache[key] = factory()
            return self._cache[key]

    @property
    def L(self):
        return self.G.algebra

    def points(self, offset: int, n: Optional[int] = None) -> List[np.ndarray]:
        n = self.n_points if n is None else n
        return self.cached(f"points:{offset}:{n}", lambda: sample_matrices(self.G.G0, n, self.seed + offset))

    def arrows(self, offset: int, n: Optional[int] = None) -> List[np.ndarray]:
        n = self.n_points if n is None else n
        return self.cached(f"arrows:{offset}:{n}", lambda: sample_matrices(self.G.G1, n, self.seed + offset))

    def left_regular(self):
        return self.cached('left_regular', lambda: left_regular(self.G))

    def control(self) -> Tuple[MultVectorField, bool]:
        """Champ non invariant de contrôle ; (champ, True) s'il est multiplicatif."""
        return self.cached('control', self._build_control)

    def _build_control(self) -> Tuple[MultVectorField, bool]:
        L = self.L
        a = np.eye(L.g0_dim)[0]
        base = p(L, a, 0)
        candidate = control_field(L, a)
        gap = max(
            max(residual(candidate.v0(x), base.v0(x)) for x in self.points(60, COSTLY_SAMPLES)),
            max(residual(candidate.v1(g), base.v1(g)) for g in self.arrows(61, COSTLY_SAMPLES)),
        )
        if gap >= self.tolerances['control_min']:
            return candidate, True
        logger.warning(f"Perturbation intérieure dégénérée sur {self.fixture.name} (écart {gap:.2e}), "
                       f"contrôle par perturbation de la composante flèche")
        return perturb_arrow_component(base, _kernel_direction(L)), False


def _outcome(residuals: Optional[Dict[str, float]] = None,
             thresholds: Optional[Dict[str, float]] = None,
             minimums: Optional[Dict[str, float]] = None,
             counts: Optional[Dict[str, int]] = None,
             witnesses: Optional[List[Any]] = None,
             passed: bool = True) -> Dict[str, Any]:
    """Verdict d'une loi : résidus ≤ seuils, résidus de contrôle ≥ minimums, et `passed`."""
    residuals = {k: float(v) for k, v in sorted((residuals or {}).items())}
    thresholds = {k: float(v) for k, v in sorted((thresholds or {}).items())}
    minimums = {k: float(v) for k, v in sorted((minimums or {}).items())}
    ok = passed
    ok = ok and all(residuals[k] <= t for k, t in thresholds.items())
    ok = ok and all(residuals[k] >= m for k, m in minimums.items())
    return {
        'passed': bool(ok),
        'residuals': residuals,
        'thresholds': thresholds,
        'minimums': minimums,
        'counts': {k: int(v) for k, v in sorted((counts or {}).items())},
        'witnesses': list(witnesses or [])[:config.MAX_WITNESSES],
    }


def _kernel_direction(L) -> np.ndarray:
    kernel = scipy.linalg.null_space(L.ds)
    if kernel.shape[1] == 0:
        raise DimensionMismatch("ker(ds) est nul")
    return L.group.G1.from_coords(kernel[:, 0])


def _merge(residuals: Dict[str, float], thresholds: Dict[str, float], certificate, prefix: str):
    for key, value in certificate.residuals.items():
        residuals[prefix + key] = max(residuals.get(prefix + key, 0.0), value)
        thresholds[prefix + key] = certificate.thresholds[key]


# Lois finies (exhaustives)

def law_interchange(ctx: LawContext) -> Dict[str, Any]:
    report = check_interchange(ctx.G, ctx.seed)
    return _outcome(counts={'checked': report['checked'], 'violations': report['violations'],
                            'exhaustive': int(report['exhaustive'])},
                    witnesses=report['witnesses'], passed=report['passed'])


def law_composition_via_multiplication(ctx: LawContext) -> Dict[str, Any]:
    report = check_composition_via_multiplication(ctx.G)
    return _outcome(counts={'checked': report['checked'], 'matches': report['matches'],
                            'violations': report['violations']},
                    witnesses=report['witnesses'], passed=report['passed'])


def law_action_groupoid_iso(ctx: LawContext) -> Dict[str, Any]:
    iso = action_groupoid_iso(ctx.G)
    counts = {name: int(ok) for name, ok in iso.checks.items()}
    counts['kernel_order'] = iso.K.order
    counts['action_trivial'] = int(iso.action_is_trivial)
    return _outcome(counts=counts, passed=iso.verified)


def law_kernel_iso(ctx: LawContext) -> Dict[str, Any]:
    cm = ctx.fixture.crossed_module()
    hom = source_kernel_iso(cm, ctx.G)
    kernel_order = len(ctx.G.s.kernel())
    return _outcome(counts={'h_order': cm.H.order, 'kernel_order': kernel_order},
                    passed=hom.is_injective() and kernel_order == cm.H.order)


def law_left_regular_homomorphism(ctx: LawContext) -> Dict[str, Any]:
    L = ctx.left_regular()
    return _outcome(counts=dict(L.laws))


def law_middle_four(ctx: LawContext) -> Dict[str, Any]:
    report = check_middle_four(ctx.left_regular(), ctx.G, ctx.seed)
    return _outcome(counts={'checked': report['checked'], 'violations': report['violations'],
                            'exhaustive': int(report['exhaustive'])},
                    witnesses=report['witnesses'], passed=report['passed'])


# Lois de la 2-algèbre de Lie

def law_structure_maps(ctx: LawContext) -> Dict[str, Any]:
    tol = ctx.tolerances['one_derivative']
    residuals = ctx.G.validate(ctx.n_points, ctx.seed, tol=tol)
    return _outcome(residuals=residuals, thresholds={k: tol for k in residuals})


def law_lie_functor_adjoint(ctx: LawContext) -> Dict[str, Any]:
    """T_e(c_g) comparé à Ad_g, résidu relatif, sur G₀ et G₁."""
    worst = 0.0
    checked = 0
    for group, offset in ((ctx.G.G0, 20), (ctx.G.G1, 21)):
        for g in sample_matrices(group, 4, ctx.seed + offset):
            Ad = adjoint_matrix(group, g)
            M = lie_functor(conjugation_map(group, g))
            worst = max(worst, residual(M, Ad) / max(1.0, float(np.linalg.norm(Ad))))
            checked += 1
    return _outcome(residuals={'adjoint_relative': worst},
                    thresholds={'adjoint_relative': ctx.tolerances['two_derivatives']},
                    counts={'elements': checked})


def law_unit_section(ctx: LawContext) -> Dict[str, Any]:
    L = ctx.L
    return _outcome(
        residuals={'unit_section': unit_section_residual(L),
                   'structure_map_brackets': structure_map_bracket_residual(L)},
        thresholds={'unit_section': ctx.tolerances['one_derivative'],
                    'structure_map_brackets': ctx.tolerances['two_derivatives']},
    )


def law_circledast_identity(ctx: LawContext) -> Dict[str, Any]:
    L = ctx.L
    return _outcome(residuals={'circledast_identity': circledast_identity_check(L)},
                    thresholds={'circledast_identity': ctx.tolerances['multiplicative']},
                    counts={'matched_dim': L.matched_basis.shape[1]})


def law_algebra_interchange(ctx: LawContext) -> Dict[str, Any]:
    L = ctx.L
    return _outcome(residuals={'algebra_interchange': algebra_interchange_residual(L)},
                    thresholds={'algebra_interchange': ctx.tolerances['multiplicative']},
                    counts={'matched_dim': L.matched_basis.shape[1]})


def law_bracket_compatibility(ctx: LawContext) -> Dict[str, Any]:
    L, G = ctx.L, ctx.G
    samples = ctx.points(22, COSTLY_SAMPLES)
    translation = max(left_translation_residual(ell(L, G, b, 0), samples) for b in np.eye(L.g0_dim))
    tol = ctx.tolerances
    return _outcome(
        residuals={'level0': bracket_compatibility_residual(L, 0),
                   'level1': bracket_compatibility_residual(L, 1),
                   'left_translation': translation},
        thresholds={'level0': tol['two_derivatives'], 'level1': tol['two_derivatives'],
                    'left_translation': tol['one_derivative']},
    )


def law_q_functoriality(ctx: LawContext) -> Dict[str, Any]:
    """p(bᵢ) multiplicatifs, p(cⱼ) flèches valides ; le champ perturbé doit échouer."""
    L = ctx.L
    residuals: Dict[str, float] = {}
    thresholds: Dict[str, float] = {}
    for b in np.eye(L.g0_dim):
        _merge(residuals, thresholds, verify_multiplicative(p(L, b, 0), ctx.n_pairs, ctx.seed, ctx.tolerances),
               'object_')
    for c in np.eye(L.g1_dim):
        _merge(residuals, thresholds, p(L, c, 1).validate(ctx.n_pairs, ctx.seed, ctx.tolerances), 'arrow_')

    perturbed = perturb_arrow_component(p(L, np.eye(L.g0_dim)[0], 0), _kernel_direction(L))
    certificate = verify_multiplicative(perturbed, ctx.n_points, ctx.seed, ctx.tolerances)
    residuals['control_defect'] = max(certificate.residuals['functoriality'],
                                      certificate.residuals['relatedness'])
    return _outcome(residuals=residuals, thresholds=thresholds,
                    minimums={'control_defect': ctx.tolerances['control_min']},
                    counts={'pairs': ctx.n_pairs, 'objects': L.g0_dim, 'arrows': L.g1_dim})


def law_J_inverts_q(ctx: LawContext) -> Dict[str, Any]:
    """J(p(c))(γ) = γ·C pour chaque cⱼ de base, et j(ζ) = TR_γ(ζ)."""
    L, G = ctx.L, ctx.G
    gammas = ctx.arrows(30, ctx.n_pairs)
    worst = 0.0
    for c in np.eye(L.g1_dim):
        C = G.G1.from_coords(c)
        J = J_map(p(L, c, 1))
        worst = max(worst, max(residual(J(gamma), gamma @ C) for gamma in gammas))
    section = j_section_residual(kernel_section(L), gammas[:COSTLY_SAMPLES])
    tol = ctx.tolerances['multiplicative']
    return _outcome(residuals={'J_of_q': worst, 'j_right_translation': section},
                    thresholds={'J_of_q': tol, 'j_right_translation': tol},
                    counts={'samples': len(gammas)})


def _bracket_pairs(dim: int, seed: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Paires (i, j) avec i ≤ j de la base, plus une paire de combinaisons tirées."""
    basis = np.eye(dim)
    pairs = [(basis[i], basis[j]) for i, j in itertools.combinations_with_replacement(range(dim), 2)]
    rng = np.random.default_rng(seed)
    pairs.append((rng.standard_normal(dim), rng.standard_normal(dim)))
    return pairs


def law_bracket_preservation_objects(ctx: LawContext) -> Dict[str, Any]:
    """[p(a), p(b)] = p([a, b]) en v0 et v1, sur la base et une paire tirée."""
    L = ctx.L
    xs = ctx.points(40, COSTLY_SAMPLES)
    gammas = ctx.arrows(41, COSTLY_SAMPLES)
    level0 = level1 = 0.0
    pairs = _bracket_pairs(L.g0_dim, ctx.seed + 45)
    for a, b in pairs:
        lhs = bracket_objects(p(L, a, 0), p(L, b, 0))
        rhs = p(L, L.bracket(0, a, b), 0)
        level0 = max(level0, max(residual(lhs.v0(x), rhs.v0(x)) for x in xs))
        level1 = max(level1, max(residual(lhs.v1(g), rhs.v1(g)) for g in gammas))
    tol = ctx.tolerances['bracket']
    return _outcome(residuals={'v0': level0, 'v1': level1}, thresholds={'v0': tol, 'v1': tol},
                    counts={'pairs': len(pairs)})


def law_bracket_preservation_arrows(ctx: LawContext) -> Dict[str, Any]:
    """[p(c), p(c')] (par J) = p([c, c']), sur la base et une paire tirée."""
    L = ctx.L
    xs = ctx.points(42, COSTLY_SAMPLES)
    gammas = ctx.arrows(43, 4)
    components = through_J = 0.0
    pairs = _bracket_pairs(L.g1_dim, ctx.seed + 46)
    for c1, c2 in pairs:
        alpha, beta = p(L, c1, 1), p(L, c2, 1)
        bracket = bracket_arrows(alpha, beta, COSTLY_SAMPLES, ctx.seed + 44)
        expected = p(L, L.bracket(1, c1, c2), 1)
        components = max(components, max(residual(bracket(x), expected(x)) for x in xs))
        through_J = max(through_J, bracket_arrows_residual(alpha, beta, gammas))
    tol = ctx.tolerances['bracket']
    return _outcome(residuals={'components': components, 'through_J': through_J},
                    thresholds={'components': tol, 'through_J': tol},
                    counts={'pairs': len(pairs)})


# Lois d'invariance

def law_fixed_point_forward(ctx: LawContext) -> Dict[str, Any]:
    """λ(x)p(a) = p(a), λ(γ)p(a) = 1_{p(a)} et λ(x)p(c) = p(c)."""
    L = ctx.L
    objects = morphisms = arrows = 0.0
    for b in np.eye(L.g0_dim):
        obj, morph = invariance_residual(p(L, b, 0), ctx.n_points, ctx.seed)
        objects, morphisms = max(objects, obj), max(morphisms, morph)
    for c in np.eye(L.g1_dim):
        arrows = max(arrows, arrow_invariance_residual(p(L, c, 1), ctx.n_points, ctx.seed))
    tol = ctx.tolerances['invariance']
    return _outcome(residuals={'objects': objects, 'morphisms': morphisms, 'arrows': arrows},
                    thresholds={'objects': tol, 'morphisms': tol, 'arrows': tol},
                    counts={'samples': ctx.n_points})


def _constant_weight(x: np.ndarray) -> float:
    return 1.0


def law_fixed_point_converse(ctx: LawContext) -> Dict[str, Any]:
    """
    Un champ invariant est p(v0(e₀)) ; le contrôle non invariant ne l'est pas.

    Candidats : les p(bᵢ) et les champs intérieurs de poids constant sur une base de
    ker(ds), construits sans passer par p. Au moins un candidat doit être invariant.
    """
    L = ctx.L
    xs = ctx.points(50)
    gammas = ctx.arrows(51)
    strict = ctx.tolerances['invariance_strict']
    candidates = [('p', p(L, b, 0)) for b in np.eye(L.g0_dim)]
    for coords in scipy.linalg.null_space(L.ds).T:
        candidates.append(('inner', inner_field(kernel_section(L, coords, _constant_weight))))

    reconstruction = {'p': 0.0, 'inner': 0.0}
    invariant = {'p': 0, 'inner': 0}
    for origin, v in candidates:
        if max(invariance_residual(v, ctx.n_points, ctx.seed)) <= strict:
            invariant[origin] += 1
            reconstruction[origin] = max(reconstruction[origin], reconstruction_residual(v, L, xs, gammas))

    control, inner = ctx.control()
    control_obj, _ = invariance_residual(control, ctx.n_points, ctx.seed)
    control_rec = reconstruction_residual(control, L, xs, gammas)
    tol = ctx.tolerances
    return _outcome(
        residuals={'reconstruction': reconstruction['p'], 'inner_reconstruction': reconstruction['inner'],
                   'control_invariance': control_obj, 'control_reconstruction': control_rec},
        thresholds={'reconstruction': tol['reconstruction'], 'inner_reconstruction': tol['reconstruction']},
        minimums={'control_invariance': tol['control_min'], 'control_reconstruction': tol['reconstruction']},
        counts={'invariant_fields': invariant['p'], 'invariant_inner_fields': invariant['inner'],
                'candidates': len(candidates), 'basis': L.g0_dim, 'control_inner': int(inner)},
        passed=invariant['p'] + invariant['inner'] > 0,
    )


def law_lambda_homomorphism(ctx: LawContext) -> Dict[str, Any]:
    """λ(x·y) = λ(x)∘λ(y), λ(γ₂·γ₁) = λ(γ₂)∘ₕλ(γ₁), naturalité et forme de composé horizontal."""
    L = ctx.L
    control, inner = ctx.control()
    v = control if inner else p(L, np.eye(L.g0_dim)[0], 0)
    alpha = p(L, np.eye(L.g1_dim)[0], 1)
    xs = ctx.points(70, 4)
    gammas = ctx.arrows(71, 4)
    zs = ctx.points(72, 4)
    tol = ctx.tolerances['multiplicative']
    residuals = {
        'homomorphism': lambda_homomorphism_residual(v, xs, zs),
        'horizontal': lambda_horizontal_residual(v, gammas, zs),
        'naturality': lambda_naturality_residual(alpha, gammas, zs),
        'whiskered': lambda_whiskered_residual(v, gammas, zs),
    }
    return _outcome(residuals=residuals, thresholds={k: tol for k in residuals},
                    counts={'field_inner': int(inner)})


# Lois de la limite

def law_limit_factorization(ctx: LawContext) -> Dict[str, Any]:
    """ψ = p∘M₀ sur 𝔥 discret : ψ̄ retrouve M₀, unicité par rang de Gram."""
    L = ctx.L
    rng = np.random.default_rng(ctx.seed)
    h0 = min(2, L.g0_dim)
    M0 = np.eye(L.g0_dim, h0) + 0.5 * rng.uniform(-1.0, 1.0, size=(L.g0_dim, h0))
    result = limit_factorize(map_through_p(L, M0), L, ctx.n_points, ctx.seed, ctx.tolerances)
    tol = ctx.tolerances
    return _outcome(
        residuals={'reconstruction': result.reconstruction_residual,
                   'structure': result.structure_residual,
                   'equivariance': result.equivariance_residual,
                   'recovery': residual(result.psi_bar0, M0)},
        thresholds={'reconstruction': tol['multiplicative'], 'structure': tol['two_derivatives'],
                    'equivariance': tol['equivariance'], 'recovery': tol['one_derivative']},
        counts={'h0': h0, 'rank0': result.rank0, 'rank1': result.rank1,
                'gram_rank0': result.gram_rank0, 'gram_rank1': result.gram_rank1, 'unique': int(result.unique)},
        passed=result.unique and result.rank0 == h0,
    )


def law_limit_rejects_control(ctx: LawContext) -> Dict[str, Any]:
    """ψ à valeurs dans le champ de contrôle : NotEquivariant attendu."""
    L = ctx.L
    control, inner = ctx.control()
    psi = TwoVectorSpaceMap(
        h0_dim=1,
        h1_dim=1,
        psi0=lambda c: float(c[0]) * control,
        psi1=lambda c: float(c[0]) * unit_arrow(control),
        hs=np.eye(1),
        ht=np.eye(1),
        hu=np.eye(1),
    )
    try:
        limit_factorize(psi, L, ctx.n_points, ctx.seed, ctx.tolerances)
    except NotEquivariant as e:
        return _outcome(counts={'rejected': 1, 'control_inner': int(inner)}, witnesses=[e.witness])
    logger.warning(f"Le contrôle non invariant a été factorisé sur {ctx.fixture.name}")
    return _outcome(counts={'rejected': 0, 'control_inner': int(inner)}, passed=False)


def law_numerical_hygiene(ctx: LawContext) -> Dict[str, Any]:
    """Toutes les dérivées de la suite ont passé le contrôle h / h/2."""
    now = snapshot_differential_stats()
    evaluations = now['evaluations'] - ctx.stats_baseline['evaluations']
    failures = now['richardson_failures'] - ctx.stats_baseline['richardson_failures']
    return _outcome(counts={'evaluations': evaluations, 'richardson_failures': failures},
                    passed=failures == 0 and evaluations > 0)


FINITE_LAWS = {
    'interchange': law_interchange,
    'composition-via-multiplication': law_composition_via_multiplication,
    'action-groupoid-iso': law_action_groupoid_iso,
    'kernel-iso': law_kernel_iso,
    'left-regular-homomorphism': law_left_regular_homomorphism,
    'middle-four': law_middle_four,
}

MATRIX_LAWS = {
    'lie': {
        'structure-maps': law_structure_maps,
        'lie-functor-adjoint': law_lie_functor_adjoint,
        'unit-section': law_unit_section,
        'circledast-identity': law_circledast_identity,
        'algebra-interchange': law_algebra_interchange,
        'bracket-compatibility': law_bracket_compatibility,
        'q-functoriality': law_q_functoriality,
        'J-inverts-q': law_J_inverts_q,
        'bracket-preservation-objects': law_bracket_preservation_objects,
        'bracket-preservation-arrows': law_bracket_preservation_arrows,
    },
    'invariance': {
        'fixed-point-forward': law_fixed_point_forward,
        'fixed-point-converse': law_fixed_point_converse,
        'lambda-homomorphism': law_lambda_homomorphism,
    },
    'limit': {
        'limit-factorization': law_limit_factorization,
        'limit-rejects-control': law_limit_rejects_control,
    },
}

HYGIENE_LAW = 'numerical-hygiene'


@require_kind('finite')
def _finite_checks(fixture: Fixture, suite: str) -> List[LawCheck]:
    return [LawCheck(law_id, 'finite', func) for law_id, func in FINITE_LAWS.items()]


@require_kind('matrix')
def _matrix_checks(fixture: Fixture, suite: str) -> List[LawCheck]:
    suites = MATRIX_SUITES if suite == 'all' else (suite,)
    checks = [LawCheck(law_id, name, func) for name in suites for law_id, func in MATRIX_LAWS[name].items()]
    checks.append(LawCheck(HYGIENE_LAW, 'hygiene', law_numerical_hygiene))
    return checks


def plan_suite(fixture: Fixture, suite: str = 'all') -> List[LawCheck]:
    """Lois à vérifier pour (fixture, suite) ; IncompatibleSuite si la suite ne s'applique pas."""
    if suite not in SUITES:
        raise IncompatibleSuite(f"Suite inconnue {suite!r}, attendue parmi {SUITES}", witness=suite)
    if suite == 'finite' or (suite == 'all' and fixture.kind == 'finite'):
        return _finite_checks(fixture, suite)
    return _matrix_checks(fixture, suite)


@dataclass
class SuiteReport:
    fixture: str
    kind: str
    suite: str
    seed: int
    samples: int
    tolerances: Dict[str, float]
    laws: List[Dict[str, Any]]
    passed: bool
    wall_time: float = 0.0
    generated_at: str = ''
    timings: Dict[str, float] = field(default_factory=dict)

    def body(self) -> Dict[str, Any]:
        """Contenu déterministe du rapport (sans horodatage ni temps)."""
        return {
            'fixture': self.fixture,
            'kind': self.kind,
            'suite': self.suite,
            'seed': self.seed,
            'samples': self.samples,
            'tolerances': dict(sorted(self.tolerances.items())),
            'passed': self.passed,
            'laws': self.laws,
        }

    def to_document(self) -> Dict[str, Any]:
        return {
            'generated_at': self.generated_at,
            'timing': {'wall_time': self.wall_time, 'laws': self.timings},
            'body': self.body(),
        }

    def failed_laws(self) -> List[str]:
        return [law['law'] for law in self.laws if not law['passed']]

    def to_dataframe(self) -> pd.DataFrame:
        rows = []
        for law in self.laws:
            ratios = [law['residuals'][k] / t for k, t in law['thresholds'].items() if t > 0]
            rows.append({
                'law': law['law'],
                'suite': law['suite'],
                'passed': law['passed'],
                'max_residual': max(law['residuals'].values(), default=np.nan),
                'worst_ratio': max(ratios, default=np.nan),
                'elapsed': self.timings.get(law['law'], np.nan),
                'error': law['error'] or '',
            })
        return pd.DataFrame(rows, columns=['law', 'suite', 'passed', 'max_residual', 'worst_ratio',
                                           'elapsed', 'error'])


def _run_law(check: LawCheck, ctx: LawContext):
    """Exécute une loi ; une exception devient une loi échouée."""
    start_time = time.time()
    try:
        logger.info(f"Vérification de la loi : {check.law_id}")

        outcome = check.func(ctx)

        check.elapsed = time.time() - start_time
        check.result = {'law': check.law_id, 'suite': check.suite, **outcome, 'error': None}
        status = "validée" if outcome['passed'] else "ÉCHEC"
        logger.info(f"Loi {check.law_id} {status} en {check.elapsed:.2f}s")
        if not outcome['passed']:
            logger.warning(f"Loi {check.law_id} violée : {outcome['residuals'] or outcome['counts']}")

    except Exception as e:
        check.elapsed = time.time() - start_time
        check.error = f"{type(e).__name__}: {str(e)}"
        logger.error(f"Erreur dans la loi {check.law_id}: {str(e)}")
        check.result = {
            'law': check.law_id, 'suite': check.suite, 'passed': False,
            'residuals': {}, 'thresholds': {}, 'minimums': {}, 'counts': {},
            'witnesses': [], 'error': check.error,
        }


def run_suite(fixture: Fixture, suite: str = 'all', seed: Optional[int] = None,
              samples: Optional[int] = None, workers: int = 1) -> SuiteReport:
    """
    Vérifie toutes les lois de la suite sur la fixture.

    Args:
        fixture: Fixture chargée
        suite: 'finite', 'lie', 'invariance', 'limit' ou 'all'
        seed: Graine (par défaut celle de la fixture)
        samples: Nombre de paires échantillonnées (par défaut celui de la fixture)
        workers: Nombre de threads ; les lois indépendantes tournent en parallèle

    Returns:
        SuiteReport: Lois triées par identifiant
    """
    checks = plan_suite(fixture, suite)
    seed = fixture.seed if seed is None else seed
    samples = fixture.samples if samples is None else samples
    start_time = time.time()

    if fixture.kind == 'matrix':
        # Algèbre calculée avant la ligne de base de l'hygiène et hors des threads
        try:
            fixture.build().algebra
        except Exception as e:
            logger.error(f"Erreur lors du calcul de la 2-algèbre de {fixture.name} : {str(e)}")
    ctx = LawContext(fixture, seed, samples)

    hygiene = [c for c in checks if c.law_id == HYGIENE_LAW]
    others = [c for c in checks if c.law_id != HYGIENE_LAW]

    logger.info(f"Suite {suite} sur {fixture.name} : {len(checks)} lois, graine {seed}, {samples} échantillons")
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=min(workers, config.MAX_WORKERS)) as executor:
            future_to_check = {executor.submit(_run_law, check, ctx): check for check in others}
            for future in concurrent.futures.as_completed(future_to_check):
                check = future_to_check[future]
                try:
                    future.result()
                except Exception as e:
                    logger.error(f"Erreur lors de l'exécution de {check.law_id}: {str(e)}")
    else:
        for check in others:
            _run_law(check, ctx)
    for check in hygiene:
        _run_law(check, ctx)

    ordered = sorted(checks, key=lambda c: c.law_id)
    laws = [c.result for c in ordered]
    report = SuiteReport(
        fixture=fixture.name,
        kind=fixture.kind,
        suite=suite,
        seed=seed,
        samples=samples,
        tolerances=dict(fixture.tolerances),
        laws=laws,
        passed=all(law['passed'] for law in laws),
        wall_time=time.time() - start_time,
        generated_at=datetime.now(timezone.utc).isoformat(),
        timings={c.law_id: c.elapsed for c in ordered},
    )
    failed = report.failed_laws()
    if failed:
        logger.warning(f"Suite {suite} sur {fixture.name} : {len(failed)} loi(s) en échec : {failed}")
    else:
        logger.info(f"Suite {suite} sur {fixture.name} : {len(laws)} lois validées en {report.wall_time:.2f}s")
    return report
