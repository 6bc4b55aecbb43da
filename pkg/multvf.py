"""
Champs de vecteurs multiplicatifs sur un 2-groupe de Lie matriciel.

Un champ est un couple d'applications (v0, v1) qui renvoient la direction
ambiante au point donné ; le point de base est implicite. Les certificats
mesurent sur des échantillons déterministes les résidus des lois de X(G).
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Any, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

import config
from errors import (
    RelatednessViolation,
    NotInInvariantSubspace,
    NotEquivariant,
    DimensionMismatch,
)
from lie2 import Lie2Algebra, MatrixLie2Group, LeftInvariantField, ell
from matrix_lie import (
    SmoothMap,
    TangentVector,
    differential,
    field_bracket,
    path_derivative,
    sample_matrices,
    expm,
)

# Configuration du logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

Field = Callable[[np.ndarray], np.ndarray]

TOL = config.DEFAULT_TOLERANCES


def _res(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)))


@dataclass
class Certificate:
    """Résidus maximaux par loi et seuils associés."""
    residuals: Dict[str, float]
    thresholds: Dict[str, float]
    samples: int = 0

    @property
    def passed(self) -> bool:
        return all(self.residuals[k] <= self.thresholds.get(k, np.inf) for k in self.residuals)

    def failures(self) -> List[str]:
        return [k for k in sorted(self.residuals) if self.residuals[k] > self.thresholds.get(k, np.inf)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'residuals': dict(sorted(self.residuals.items())),
            'thresholds': dict(sorted(self.thresholds.items())),
            'samples': self.samples,
            'passed': self.passed,
        }


@dataclass
class MultVectorField:
    G: MatrixLie2Group
    v0: Field
    v1: Field
    name: str = 'v'
    certificate: Optional[Certificate] = None

    def __add__(self, other: 'MultVectorField') -> 'MultVectorField':
        return MultVectorField(self.G, lambda x: self.v0(x) + other.v0(x),
                               lambda g: self.v1(g) + other.v1(g), name=f"{self.name}+{other.name}")

    def __sub__(self, other: 'MultVectorField') -> 'MultVectorField':
        return self + (-1.0) * other

    def __rmul__(self, c: float) -> 'MultVectorField':
        return MultVectorField(self.G, lambda x: c * self.v0(x), lambda g: c * self.v1(g),
                               name=f"{c}·{self.name}")

    __mul__ = __rmul__


def zero_field(G: MatrixLie2Group) -> MultVectorField:
    return MultVectorField(G, lambda x: np.zeros_like(x, dtype=float), lambda g: np.zeros_like(g, dtype=float),
                           name='0')


@dataclass
class VFArrow:
    """Flèche α : src ⇒ dst de X(G) ; alpha(x) est tangent en 1_x."""
    src: MultVectorField
    dst: MultVectorField
    alpha: Field
    name: str = 'α'

    @property
    def G(self) -> MatrixLie2Group:
        return self.src.G

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.alpha(x)

    def __add__(self, other: 'VFArrow') -> 'VFArrow':
        return VFArrow(self.src + other.src, self.dst + other.dst,
                       lambda x: self.alpha(x) + other.alpha(x), name=f"{self.name}+{other.name}")

    def __rmul__(self, c: float) -> 'VFArrow':
        return VFArrow(c * self.src, c * self.dst, lambda x: c * self.alpha(x), name=f"{c}·{self.name}")

    __mul__ = __rmul__

    def __sub__(self, other: 'VFArrow') -> 'VFArrow':
        return self + (-1.0) * other

    def validate(self, n_samples: int = config.DEFAULT_PAIR_SAMPLES, seed: Optional[int] = None,
                 tolerances: Optional[Dict[str, float]] = None) -> Certificate:
        """Ts/Tt et naturalité α(tγ) ⋆ src(γ) = dst(γ) ⋆ α(sγ)."""
        tol = {**TOL, **(tolerances or {})}
        G = self.G
        seed = config.DEFAULT_SEED if seed is None else seed
        xs = sample_matrices(G.G0, n_samples, seed)
        gammas = sample_matrices(G.G1, n_samples, seed + 1)

        chart = max(G.G1.chart_residual(G.unit(x), self.alpha(x)) for x in xs)
        source = max(_res(G.Ts(G.unit(x), self.alpha(x)), self.src.v0(x)) for x in xs)
        target = max(_res(G.Tt(G.unit(x), self.alpha(x)), self.dst.v0(x)) for x in xs)
        natural = 0.0
        for gamma in gammas:
            x, y = G.s(gamma), G.t(gamma)
            lhs = star(G, G.unit(y), self.alpha(y), gamma, self.src.v1(gamma))
            rhs = star(G, gamma, self.dst.v1(gamma), G.unit(x), self.alpha(x))
            natural = max(natural, _res(lhs, rhs))
        return Certificate(
            residuals={'chart': chart, 'source': source, 'target': target, 'naturality': natural},
            thresholds={'chart': tol['tangent_chart'], 'source': tol['multiplicative'],
                        'target': tol['multiplicative'], 'naturality': tol['multiplicative']},
            samples=n_samples,
        )


@dataclass
class AlgebroidSection:
    """ζ(x) tangent en 1_x, annulé par Ts."""
    G: MatrixLie2Group
    zeta: Field

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.zeta(x)

    def validate(self, n_samples: int = config.DEFAULT_GROUP_SAMPLES, seed: Optional[int] = None) -> Certificate:
        G = self.G
        xs = sample_matrices(G.G0, n_samples, seed)
        annihilation = max(float(np.linalg.norm(G.Ts(G.unit(x), self.zeta(x)))) for x in xs)
        chart = max(G.G1.chart_residual(G.unit(x), self.zeta(x)) for x in xs)
        return Certificate(
            residuals={'source_annihilation': annihilation, 'chart': chart},
            thresholds={'source_annihilation': TOL['tangent_chart'], 'chart': TOL['tangent_chart']},
            samples=n_samples,
        )


@dataclass
class TwoVectorSpaceMap:
    """
    ψ : 𝔥 → X(G) sur un 2-espace vectoriel 𝔥 = {𝔥₁ ⇉ 𝔥₀} de structure (hs, ht, hu).

    psi0(c) est un objet de X(G), psi1(c) une flèche ; les deux sont linéaires en c.
    """
    h0_dim: int
    h1_dim: int
    psi0: Callable[[np.ndarray], MultVectorField]
    psi1: Callable[[np.ndarray], VFArrow]
    hs: np.ndarray
    ht: np.ndarray
    hu: np.ndarray

    def validate(self, G: MatrixLie2Group, n_samples: int = config.DEFAULT_GROUP_SAMPLES,
                 seed: Optional[int] = None) -> Certificate:
        xs = sample_matrices(G.G0, n_samples, seed)
        worst = {'source': 0.0, 'target': 0.0, 'unit': 0.0}
        for j, f in enumerate(np.eye(self.h1_dim)):
            arrow = self.psi1(f)
            src, dst = self.psi0(self.hs @ f), self.psi0(self.ht @ f)
            for x in xs:
                worst['source'] = max(worst['source'], _res(arrow.src.v0(x), src.v0(x)))
                worst['target'] = max(worst['target'], _res(arrow.dst.v0(x), dst.v0(x)))
        for i, e in enumerate(np.eye(self.h0_dim)):
            arrow = self.psi1(self.hu @ e)
            unit = unit_arrow(self.psi0(e))
            for x in xs:
                worst['unit'] = max(worst['unit'], _res(arrow.alpha(x), unit.alpha(x)))
        return Certificate(residuals=worst, thresholds={k: TOL['multiplicative'] for k in worst},
                           samples=n_samples)


# Produit ⋆ = T∗

def star(G: MatrixLie2Group, sigma: np.ndarray, X: np.ndarray, gamma: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """
    T∗(X, Y) pour X tangent en σ, Y tangent en γ, s(σ) = t(γ).

    La courbe en σ est recorrigée par une unité pour rester composable, ce qui
    ne change pas sa vitesse en 0 lorsque Ts(X) = Tt(Y).
    """
    xi = np.linalg.solve(sigma, X)
    eta = np.linalg.solve(gamma, Y)

    def path(tau: float) -> np.ndarray:
        g = gamma @ expm(tau * eta)
        return G.comp(G.match(sigma @ expm(tau * xi), g), g)

    return path_derivative(path)


# Vérification

def verify_multiplicative(v: MultVectorField, n_samples: int = config.DEFAULT_PAIR_SAMPLES,
                          seed: Optional[int] = None,
                          tolerances: Optional[Dict[str, float]] = None) -> Certificate:
    """Section, relations Ts/Tt/T1 et fonctorialité v1(σ∗γ) = v1(σ) ⋆ v1(γ)."""
    tol = {**TOL, **(tolerances or {})}
    G = v.G
    seed = config.DEFAULT_SEED if seed is None else seed
    pairs = G.sample_composable_pairs(n_samples, seed)
    xs = sample_matrices(G.G0, n_samples, seed + 7)

    chart = relatedness = functoriality = 0.0
    for sigma, gamma in pairs:
        w = v.v1(gamma)
        chart = max(chart, G.G1.chart_residual(gamma, w))
        relatedness = max(relatedness,
                          _res(G.Ts(gamma, w), v.v0(G.s(gamma))),
                          _res(G.Tt(gamma, w), v.v0(G.t(gamma))))
        composite = v.v1(G.comp(sigma, gamma))
        functoriality = max(functoriality, _res(composite, star(G, sigma, v.v1(sigma), gamma, w)))
    for x in xs:
        chart = max(chart, G.G0.chart_residual(x, v.v0(x)))
        relatedness = max(relatedness, _res(v.v1(G.unit(x)), G.T1(x, v.v0(x))))

    certificate = Certificate(
        residuals={'chart': chart, 'relatedness': relatedness, 'functoriality': functoriality},
        thresholds={'chart': tol['tangent_chart'], 'relatedness': tol['multiplicative'],
                    'functoriality': tol['multiplicative']},
        samples=n_samples,
    )
    v.certificate = certificate
    if not certificate.passed:
        logger.warning(f"Champ {v.name} non multiplicatif : {certificate.failures()}")
    return certificate


# q, ℓ et p

def q_object(u: LeftInvariantField, G: MatrixLie2Group) -> MultVectorField:
    """v0 = u, v1(γ) = γ·T1(u(e₀))."""
    A = u.value_at_identity
    D = differential(G.unit, TangentVector(G.G0, G.e0, A)).dir
    return MultVectorField(G, lambda x: x @ A, lambda gamma: gamma @ D, name=f"q({np.round(u.coords, 6).tolist()})")


def q_arrow(alpha: LeftInvariantField, G: MatrixLie2Group,
            src: LeftInvariantField, dst: LeftInvariantField) -> VFArrow:
    """q(α)(x) = 1_x·α(e₁), de q(src) vers q(dst)."""
    L = G.algebra
    beta = np.asarray(alpha.coords, dtype=float)
    gap_s = _res(L.ds @ beta, src.coords)
    gap_t = _res(L.dt @ beta, dst.coords)
    if gap_s > TOL['one_derivative'] or gap_t > TOL['one_derivative']:
        raise RelatednessViolation("ds(α) ou dt(α) ne correspond pas aux extrémités déclarées",
                                   witness={'source': gap_s, 'target': gap_t})
    B = alpha.value_at_identity
    return VFArrow(q_object(src, G), q_object(dst, G), lambda x: G.unit(x) @ B,
                   name=f"q({np.round(beta, 6).tolist()})")


def p(L: Lie2Algebra, a: Sequence[float], level: int):
    """p = q∘ℓ : objet (niveau 0) ou flèche (niveau 1) de X(G)."""
    G = L.group
    a = np.asarray(a, dtype=float)
    u = ell(L, G, a, level)
    if level == 0:
        return q_object(u, G)
    return q_arrow(u, G, ell(L, G, L.ds @ a, 0), ell(L, G, L.dt @ a, 0))


def unit_arrow(v: MultVectorField) -> VFArrow:
    G = v.G
    return VFArrow(v, v, lambda x: G.T1(x, v.v0(x)), name=f"1_{v.name}")


def vertical_compose_arrows(beta: VFArrow, alpha: VFArrow) -> VFArrow:
    """(β ∘ᵥ α)(x) = β(x) ⋆ α(x)."""
    G = alpha.G

    def composite(x: np.ndarray) -> np.ndarray:
        u = G.unit(x)
        return star(G, u, beta.alpha(x), u, alpha.alpha(x))

    return VFArrow(alpha.src, beta.dst, composite, name=f"{beta.name}∘ᵥ{alpha.name}")


# j et J

def j_section(zeta: AlgebroidSection) -> Field:
    """j(ζ)(γ) = γ·1_{tγ}⁻¹·ζ(tγ)."""
    G = zeta.G

    def field_(gamma: np.ndarray) -> np.ndarray:
        y = G.t(gamma)
        return gamma @ np.linalg.solve(G.unit(y), zeta(y))

    return field_


def j_section_right_translation(zeta: AlgebroidSection, gamma: np.ndarray) -> np.ndarray:
    """TR_γ(ζ(tγ)) avec R_γ(μ) = γ·1_{s(μ)⁻¹}·μ, dérivé numériquement."""
    G = zeta.G
    y = G.t(gamma)
    R = SmoothMap(G.G1, G.G1, lambda mu: G.compose_via_multiplication(mu, gamma), name='R_γ')
    return differential(R, TangentVector(G.G1, G.unit(y), zeta(y))).dir


def j_section_residual(zeta: AlgebroidSection, samples: Sequence[np.ndarray]) -> float:
    j = j_section(zeta)
    return max((_res(j(gamma), j_section_right_translation(zeta, gamma)) for gamma in samples), default=0.0)


def J_map(alpha: VFArrow) -> Field:
    """J(α) = j(α − 1_{s(α)}) + s(α)₁."""
    G = alpha.G
    src = alpha.src
    section = AlgebroidSection(G, lambda x: alpha.alpha(x) - G.T1(x, src.v0(x)))
    j = j_section(section)
    return lambda gamma: j(gamma) + src.v1(gamma)


# Crochets

def bracket_objects(u: MultVectorField, v: MultVectorField) -> MultVectorField:
    return MultVectorField(u.G, field_bracket(u.v0, v.v0), field_bracket(u.v1, v.v1),
                           name=f"[{u.name},{v.name}]")


def bracket_arrows(alpha: VFArrow, beta: VFArrow, n_samples: int = config.DEFAULT_GROUP_SAMPLES,
                   seed: Optional[int] = None) -> VFArrow:
    """
    [α, β] = p(c) où c sont les coordonnées de [J(α), J(β)](e₁).

    L'inversion de J n'est faite que sur p(𝔤₁) : le champ crochet doit être
    invariant à gauche sur les échantillons.
    """
    G = alpha.G
    L = G.algebra
    F = field_bracket(J_map(alpha), J_map(beta))
    at_identity = F(G.e1)
    worst = 0.0
    for gamma in sample_matrices(G.G1, n_samples, seed):
        worst = max(worst, _res(F(gamma), gamma @ at_identity))
    if worst > TOL['j_inversion']:
        raise NotInInvariantSubspace("[J(α), J(β)] n'est pas invariant à gauche", witness=worst)
    c = G.G1.coords(at_identity)[0]
    result = p(L, c, 1)
    result.name = f"[{alpha.name},{beta.name}]"
    return result


def bracket_arrows_residual(alpha: VFArrow, beta: VFArrow, samples: Sequence[np.ndarray]) -> float:
    """‖J([α, β]) − [J(α), J(β)]‖ sur les échantillons."""
    F = field_bracket(J_map(alpha), J_map(beta))
    Jb = J_map(bracket_arrows(alpha, beta))
    return max((_res(Jb(gamma), F(gamma)) for gamma in samples), default=0.0)


# Représentation régulière à gauche λ

def lambda_object(x: np.ndarray, v: MultVectorField) -> MultVectorField:
    """λ(x)v = TL_x ∘ v ∘ L_{x⁻¹}."""
    G = v.G
    x_inv = np.linalg.inv(x)
    ux, ux_inv = G.unit(x), G.unit(x_inv)
    return MultVectorField(G, lambda z: x @ v.v0(x_inv @ z), lambda sigma: ux @ v.v1(ux_inv @ sigma),
                           name=f"λ(x){v.name}")


def lambda_arrow(x: np.ndarray, alpha: VFArrow) -> VFArrow:
    """(λ(x)α)(z) = 1_x·α(x⁻¹z)."""
    G = alpha.G
    x_inv = np.linalg.inv(x)
    ux = G.unit(x)
    return VFArrow(lambda_object(x, alpha.src), lambda_object(x, alpha.dst),
                   lambda z: ux @ alpha.alpha(x_inv @ z), name=f"λ(x){alpha.name}")


def lambda_morphism(gamma: np.ndarray, v: MultVectorField) -> VFArrow:
    """λ(γ)v : λ(sγ)v ⇒ λ(tγ)v, de composante γ·v1(γ⁻¹·1_z)."""
    G = v.G
    gamma_inv = np.linalg.inv(gamma)
    return VFArrow(lambda_object(G.s(gamma), v), lambda_object(G.t(gamma), v),
                   lambda z: gamma @ v.v1(gamma_inv @ G.unit(z)), name=f"λ(γ){v.name}")


def lambda_morphism_whiskered(gamma: np.ndarray, v: MultVectorField) -> Field:
    """Composante A ⋆ B du composé horizontal TL_γ ∘ₕ v ∘ₕ L_{γ⁻¹}."""
    G = v.G
    x, y = G.s(gamma), G.t(gamma)
    y_inv = np.linalg.inv(y)
    gamma_inv = np.linalg.inv(gamma)
    ux = G.unit(x)

    def component(z: np.ndarray) -> np.ndarray:
        point = y_inv @ z
        a_base = gamma @ G.unit(point)
        A = gamma @ G.T1(point, v.v0(point))
        b_point = gamma_inv @ G.unit(z)
        b_base = ux @ b_point
        B = ux @ v.v1(b_point)
        return star(G, a_base, A, b_base, B)

    return component


def lambda_homomorphism_residual(v: MultVectorField, xs: Sequence[np.ndarray], zs: Sequence[np.ndarray]) -> float:
    """λ(x·y) = λ(x)∘λ(y) et λ(e₀) = id aux points d'échantillon."""
    G = v.G
    worst = 0.0
    identity = lambda_object(G.e0, v)
    for z in zs:
        worst = max(worst, _res(identity.v0(z), v.v0(z)), _res(identity.v1(G.unit(z)), v.v1(G.unit(z))))
    for x, y in zip(xs, xs[1:] + xs[:1]):
        lhs = lambda_object(x @ y, v)
        rhs = lambda_object(x, lambda_object(y, v))
        for z in zs:
            sigma = G.unit(z)
            worst = max(worst, _res(lhs.v0(z), rhs.v0(z)), _res(lhs.v1(sigma), rhs.v1(sigma)))
    return worst


def lambda_horizontal_residual(v: MultVectorField, gammas: Sequence[np.ndarray], zs: Sequence[np.ndarray]) -> float:
    """λ(γ₂·γ₁)v = λ(γ₂)(λ(y₁)v) ⋆ λ(x₂)(λ(γ₁)v) composante par composante."""
    G = v.G
    worst = 0.0
    for g2, g1 in zip(gammas, gammas[1:] + gammas[:1]):
        direct = lambda_morphism(g2 @ g1, v)
        outer = lambda_morphism(g2, lambda_object(G.t(g1), v))
        inner = lambda_arrow(G.s(g2), lambda_morphism(g1, v))
        for z in zs:
            u = G.unit(z)
            composite = star(G, u, outer.alpha(z), u, inner.alpha(z))
            worst = max(worst, _res(direct.alpha(z), composite))
    return worst


def lambda_naturality_residual(alpha: VFArrow, gammas: Sequence[np.ndarray], zs: Sequence[np.ndarray]) -> float:
    """λ(y)α ∘ᵥ λ(γ)v = λ(γ)w ∘ᵥ λ(x)α pour α : v ⇒ w et γ : x → y."""
    G = alpha.G
    worst = 0.0
    for gamma in gammas:
        x, y = G.s(gamma), G.t(gamma)
        lhs = vertical_compose_arrows(lambda_arrow(y, alpha), lambda_morphism(gamma, alpha.src))
        rhs = vertical_compose_arrows(lambda_morphism(gamma, alpha.dst), lambda_arrow(x, alpha))
        for z in zs:
            worst = max(worst, _res(lhs.alpha(z), rhs.alpha(z)))
    return worst


def lambda_whiskered_residual(v: MultVectorField, gammas: Sequence[np.ndarray], zs: Sequence[np.ndarray]) -> float:
    """Écart entre la forme close de λ(γ)v et le composé horizontal."""
    worst = 0.0
    for gamma in gammas:
        closed = lambda_morphism(gamma, v)
        whiskered = lambda_morphism_whiskered(gamma, v)
        for z in zs:
            worst = max(worst, _res(closed.alpha(z), whiskered(z)))
    return worst


def invariance_residual(v: MultVectorField, n_samples: int = config.DEFAULT_GROUP_SAMPLES,
                        seed: Optional[int] = None) -> Tuple[float, float]:
    """(max ‖λ(x)v − v‖, max ‖γ·v1(γ⁻¹·1_z) − v1(1_z)‖) aux points d'échantillon."""
    G = v.G
    seed = config.DEFAULT_SEED if seed is None else seed
    xs = sample_matrices(G.G0, n_samples, seed)
    zs = sample_matrices(G.G0, n_samples, seed + 1)
    arrows = sample_matrices(G.G1, n_samples, seed + 2)
    gammas = sample_matrices(G.G1, n_samples, seed + 3)

    obj = 0.0
    for x, z, sigma in zip(xs, zs, arrows):
        moved = lambda_object(x, v)
        obj = max(obj, _res(moved.v0(z), v.v0(z)), _res(moved.v1(sigma), v.v1(sigma)))
    morph = 0.0
    for gamma, z in zip(gammas, zs):
        morph = max(morph, _res(lambda_morphism(gamma, v).alpha(z), v.v1(G.unit(z))))
    return obj, morph


def arrow_invariance_residual(alpha: VFArrow, n_samples: int = config.DEFAULT_GROUP_SAMPLES,
                              seed: Optional[int] = None) -> float:
    """max ‖λ(x)α − α‖ aux points d'échantillon."""
    G = alpha.G
    seed = config.DEFAULT_SEED if seed is None else seed
    xs = sample_matrices(G.G0, n_samples, seed)
    zs = sample_matrices(G.G0, n_samples, seed + 1)
    return max((_res(lambda_arrow(x, alpha).alpha(z), alpha.alpha(z)) for x, z in zip(xs, zs)), default=0.0)


def reconstruction_residual(v: MultVectorField, L: Lie2Algebra, samples: Sequence[np.ndarray],
                            arrows: Sequence[np.ndarray] = ()) -> float:
    """‖v − p(v0(e₀))‖ en v0 et v1 aux échantillons (unités 1_x puis flèches quelconques)."""
    G = L.group
    rebuilt = p(L, G.G0.coords(v.v0(G.e0))[0], 0)
    worst = 0.0
    for x in samples:
        sigma = G.unit(x)
        worst = max(worst, _res(v.v0(x), rebuilt.v0(x)), _res(v.v1(sigma), rebuilt.v1(sigma)))
    for gamma in arrows:
        worst = max(worst, _res(v.v1(gamma), rebuilt.v1(gamma)))
    return worst


def p_gram_rank(L: Lie2Algebra, level: int, samples: Sequence[np.ndarray]) -> int:
    """Rang de la matrice de Gram des évaluations de p sur une base."""
    dim = L.g0_dim if level == 0 else L.g1_dim
    rows = []
    for a in np.eye(dim):
        image = p(L, a, level)
        evaluate = image.v0 if level == 0 else image.alpha
        rows.append(np.concatenate([evaluate(x).reshape(-1) for x in samples]))
    E = np.array(rows)
    return int(np.linalg.matrix_rank(E @ E.T))


# Champs intérieurs et contrôles négatifs

def inner_field(zeta: AlgebroidSection) -> MultVectorField:
    """Champ multiplicatif engendré par une section de l'algébroïde."""
    G = zeta.G
    j = j_section(zeta)

    def w0(x: np.ndarray) -> np.ndarray:
        return G.Tt(G.unit(x), zeta(x))

    def w1(gamma: np.ndarray) -> np.ndarray:
        x = G.s(gamma)
        ux = G.unit(x)
        correction = G.T1(x, w0(x)) - zeta(x)
        return j(gamma) + correction @ np.linalg.solve(ux, gamma)

    return MultVectorField(G, w0, w1, name='δζ')


def default_weight(x: np.ndarray) -> float:
    return float(x[0, 0])


def kernel_section(L: Lie2Algebra, coords: Optional[Sequence[float]] = None,
                   weight: Callable[[np.ndarray], float] = default_weight) -> AlgebroidSection:
    """ζ(x) = φ(x)·1_x·Z avec Z ∈ ker(ds)."""
    G = L.group
    if coords is None:
        kernel = scipy.linalg.null_space(L.ds)
        if kernel.shape[1] == 0:
            raise DimensionMismatch("ker(ds) est nul")
        coords = kernel[:, 0]
    coords = np.asarray(coords, dtype=float)
    gap = float(np.linalg.norm(L.ds @ coords))
    if gap > TOL['one_derivative']:
        raise RelatednessViolation("Z n'est pas dans ker(ds)", witness=gap)
    Z = G.G1.from_coords(coords)
    return AlgebroidSection(G, lambda x: weight(x) * (G.unit(x) @ Z))


def control_field(L: Lie2Algebra, a: Sequence[float], weight: Callable[[np.ndarray], float] = default_weight,
                  kernel_coords: Optional[Sequence[float]] = None) -> MultVectorField:
    """p(a) plus une perturbation intérieure de poids non constant : multiplicatif, non invariant."""
    field_ = p(L, a, 0) + inner_field(kernel_section(L, kernel_coords, weight))
    field_.name = 'contrôle'
    return field_


def perturb_arrow_component(v: MultVectorField, direction: np.ndarray,
                            weight: Callable[[np.ndarray], float] = default_weight) -> MultVectorField:
    """v1'(γ) = v1(γ) + w(sγ)·γ·Z : brise la fonctorialité."""
    G = v.G
    return MultVectorField(G, v.v0, lambda gamma: v.v1(gamma) + weight(G.s(gamma)) * (gamma @ direction),
                           name=f"{v.name}~")


# Factorisation par la limite

@dataclass
class LimitFactorization:
    psi_bar0: np.ndarray
    psi_bar1: np.ndarray
    reconstruction_residual: float
    structure_residual: float
    equivariance_residual: float
    gram_rank0: int
    gram_rank1: int
    rank0: int
    rank1: int
    unique: bool
    details: Dict[str, Any] = field(default_factory=dict)


def limit_factorize(psi: TwoVectorSpaceMap, L: Lie2Algebra, n_samples: int = config.DEFAULT_GROUP_SAMPLES,
                    seed: Optional[int] = None,
                    tolerances: Optional[Dict[str, float]] = None) -> LimitFactorization:
    """
    Factorise ψ : 𝔥 → X(G) par p(𝔤) : ψ̄ est lu en e₀, puis ψ est reconstruit par p∘ψ̄.

    Lève NotEquivariant si un élément de base de ψ n'est pas λ-invariant.
    """
    tol = {**TOL, **(tolerances or {})}
    G = L.group
    seed = config.DEFAULT_SEED if seed is None else seed

    equivariance = 0.0
    for i, e in enumerate(np.eye(psi.h0_dim)):
        obj, morph = invariance_residual(psi.psi0(e), n_samples, seed)
        equivariance = max(equivariance, obj, morph)
        if max(obj, morph) > tol['equivariance']:
            raise NotEquivariant("ψ₀ atteint un champ non invariant",
                                 witness={'level': 0, 'basis': i, 'object': obj, 'morphism': morph})
    for j, f in enumerate(np.eye(psi.h1_dim)):
        res = arrow_invariance_residual(psi.psi1(f), n_samples, seed)
        equivariance = max(equivariance, res)
        if res > tol['equivariance']:
            raise NotEquivariant("ψ₁ atteint une flèche non invariante",
                                 witness={'level': 1, 'basis': j, 'residual': res})

    e0, e1 = G.e0, G.e1
    psi_bar0 = np.column_stack([G.G0.coords(psi.psi0(e).v0(e0))[0] for e in np.eye(psi.h0_dim)])
    psi_bar1 = np.column_stack([G.G1.coords(psi.psi1(f).alpha(e0))[0] for f in np.eye(psi.h1_dim)])

    samples = sample_matrices(G.G0, n_samples, seed + 11)
    reconstruction = 0.0
    for i, e in enumerate(np.eye(psi.h0_dim)):
        original, rebuilt = psi.psi0(e), p(L, psi_bar0[:, i], 0)
        for x in samples:
            sigma = G.unit(x)
            reconstruction = max(reconstruction, _res(original.v0(x), rebuilt.v0(x)),
                                 _res(original.v1(sigma), rebuilt.v1(sigma)))
    for j, f in enumerate(np.eye(psi.h1_dim)):
        original, rebuilt = psi.psi1(f), p(L, psi_bar1[:, j], 1)
        for x in samples:
            reconstruction = max(reconstruction, _res(original.alpha(x), rebuilt.alpha(x)))

    structure = max(
        _res(L.ds @ psi_bar1, psi_bar0 @ psi.hs),
        _res(L.dt @ psi_bar1, psi_bar0 @ psi.ht),
        _res(L.d1 @ psi_bar0, psi_bar1 @ psi.hu),
    )

    rank_samples = samples[:8]
    gram0 = p_gram_rank(L, 0, rank_samples)
    gram1 = p_gram_rank(L, 1, rank_samples)
    rank0 = int(np.linalg.matrix_rank(psi_bar0)) if psi.h0_dim else 0
    rank1 = int(np.linalg.matrix_rank(psi_bar1)) if psi.h1_dim else 0
    unique = gram0 == L.g0_dim and gram1 == L.g1_dim

    logger.info(f"Factorisation par p(𝔤) : résidu {reconstruction:.2e}, rangs ({rank0}, {rank1}), "
                f"unicité {'certifiée' if unique else 'non certifiée'}")
    return LimitFactorization(
        psi_bar0=psi_bar0,
        psi_bar1=psi_bar1,
        reconstruction_residual=reconstruction,
        structure_residual=structure,
        equivariance_residual=equivariance,
        gram_rank0=gram0,
        gram_rank1=gram1,
        rank0=rank0,
        rank1=rank1,
        unique=unique,
        details={'samples': n_samples, 'seed': seed},
    )


def map_through_p(L: Lie2Algebra, M0: np.ndarray, M1: Optional[np.ndarray] = None,
                  hs: Optional[np.ndarray] = None, ht: Optional[np.ndarray] = None,
                  hu: Optional[np.ndarray] = None) -> TwoVectorSpaceMap:
    """
    ψ = p∘M pour M0 : 𝔥₀ → 𝔤₀ et M1 : 𝔥₁ → 𝔤₁.

    Sans M1, 𝔥 est discret (𝔥₁ = 𝔥₀, structure identité) et M1 = d1·M0.
    """
    M0 = np.asarray(M0, dtype=float)
    h0 = M0.shape[1]
    if M1 is None:
        M1 = L.d1 @ M0
        hs = ht = hu = np.eye(h0)
    M1 = np.asarray(M1, dtype=float)
    return TwoVectorSpaceMap(
        h0_dim=h0,
        h1_dim=M1.shape[1],
        psi0=lambda c: p(L, M0 @ c, 0),
        psi1=lambda c: p(L, M1 @ c, 1),
        hs=hs,
        ht=ht,
        hu=hu,
    )
