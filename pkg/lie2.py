"""
2-groupes de Lie matriciels, modèles par blocs de modules croisés matriciels
et 2-algèbre de Lie obtenue en différentiant les applications de structure.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, Any, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

import config
from errors import (
    Internal2GroupAxiomViolation,
    NotComposable,
    DimensionMismatch,
    VerificationError,
)
from matrix_lie import (
    MatrixLieGroup,
    SmoothMap,
    TangentVector,
    block_diagonal,
    affine_linear,
    expm,
    field_bracket,
    lie_functor,
    path_derivative,
    sample_matrices,
)

# Configuration du logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MatrixLie2Group:
    """
    Catégorie interne aux groupes matriciels ; m0 et m1 sont le produit matriciel.

    `comp(σ, γ)` n'est défini que pour s(σ) = t(γ).
    """
    name: str
    G0: MatrixLieGroup
    G1: MatrixLieGroup
    s: SmoothMap
    t: SmoothMap
    unit: SmoothMap
    comp: Callable[[np.ndarray, np.ndarray], np.ndarray]
    model: Optional[Any] = field(default=None, repr=False)

    @property
    def e0(self) -> np.ndarray:
        return self.G0.identity()

    @property
    def e1(self) -> np.ndarray:
        return self.G1.identity()

    @cached_property
    def algebra(self) -> 'Lie2Algebra':
        return lie2algebra_of(self)

    def groupoid_inverse(self, sigma: np.ndarray) -> np.ndarray:
        """1_{sσ}·σ⁻¹·1_{tσ}."""
        return self.unit(self.s(sigma)) @ np.linalg.inv(sigma) @ self.unit(self.t(sigma))

    def compose_via_multiplication(self, sigma: np.ndarray, gamma: np.ndarray) -> np.ndarray:
        """γ·1_{s(σ)⁻¹}·σ, prolongement lisse de la composition hors des paires composables."""
        return gamma @ self.unit(np.linalg.inv(self.s(sigma))) @ sigma

    def match(self, sigma: np.ndarray, gamma: np.ndarray) -> np.ndarray:
        """Corrige σ par 1_{s(σ)⁻¹·t(γ)} pour rendre (σ, γ) composable."""
        return sigma @ self.unit(np.linalg.solve(self.s(sigma), self.t(gamma)))

    def sample_composable_pairs(self, n: int, seed: Optional[int] = None) -> List[Tuple[np.ndarray, np.ndarray]]:
        seed = config.DEFAULT_SEED if seed is None else seed
        gammas = sample_matrices(self.G1, n, seed)
        sigmas = sample_matrices(self.G1, n, seed + 1)
        return [(self.match(sigma, gamma), gamma) for sigma, gamma in zip(sigmas, gammas)]

    # Applications tangentes exactes (s, t et 1 sont des homomorphismes)

    def Ts(self, gamma: np.ndarray, w: np.ndarray) -> np.ndarray:
        L = self.algebra
        xi = self.G1.coords(np.linalg.solve(gamma, w))[0]
        return self.s(gamma) @ self.G0.from_coords(L.ds @ xi)

    def Tt(self, gamma: np.ndarray, w: np.ndarray) -> np.ndarray:
        L = self.algebra
        xi = self.G1.coords(np.linalg.solve(gamma, w))[0]
        return self.t(gamma) @ self.G0.from_coords(L.dt @ xi)

    def T1(self, x: np.ndarray, w: np.ndarray) -> np.ndarray:
        L = self.algebra
        xi = self.G0.coords(np.linalg.solve(x, w))[0]
        return self.unit(x) @ self.G1.from_coords(L.d1 @ xi)

    def validate(self, n_samples: int = config.DEFAULT_GROUP_SAMPLES, seed: Optional[int] = None,
                 tol: float = config.DEFAULT_TOLERANCES['one_derivative']) -> Dict[str, float]:
        """Lois d'homomorphisme, de catégorie et d'échange sur échantillons ; renvoie les résidus."""
        seed = config.DEFAULT_SEED if seed is None else seed
        if not np.array_equal(self.unit(self.e0), self.e1):
            raise Internal2GroupAxiomViolation("e1 ≠ 1_{e0}")

        a = sample_matrices(self.G1, n_samples, seed)
        b = sample_matrices(self.G1, n_samples, seed + 1)
        x = sample_matrices(self.G0, n_samples, seed + 2)
        y = sample_matrices(self.G0, n_samples, seed + 3)
        pairs = self.sample_composable_pairs(n_samples, seed + 4)
        others = self.sample_composable_pairs(n_samples, seed + 5)

        residuals = {
            's_homomorphism': max(_res(self.s(p @ q), self.s(p) @ self.s(q)) for p, q in zip(a, b)),
            't_homomorphism': max(_res(self.t(p @ q), self.t(p) @ self.t(q)) for p, q in zip(a, b)),
            'unit_homomorphism': max(_res(self.unit(p @ q), self.unit(p) @ self.unit(q)) for p, q in zip(x, y)),
            'unit_section': max(_res(self.s(self.unit(p)), p) + _res(self.t(self.unit(p)), p) for p in x),
            'comp_source_target': max(_res(self.s(self.comp(sg, gm)), self.s(gm))
                                      + _res(self.t(self.comp(sg, gm)), self.t(sg)) for sg, gm in pairs),
            'unit_laws': max(_res(self.comp(self.unit(self.t(gm)), gm), gm)
                             + _res(self.comp(sg, self.unit(self.s(sg))), sg) for sg, gm in pairs),
            'interchange': max(
                _res(self.comp(s2, s1) @ self.comp(g2, g1), self.comp(s2 @ g2, s1 @ g1))
                for (s2, s1), (g2, g1) in zip(pairs, others)
            ),
            'composition_via_multiplication': max(
                _res(self.comp(sg, gm), self.compose_via_multiplication(sg, gm)) for sg, gm in pairs
            ),
        }
        for law, value in residuals.items():
            if value > tol:
                raise Internal2GroupAxiomViolation(f"{self.name} : loi {law} violée", witness=value)
        return residuals


def _res(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b))


@dataclass(frozen=True, eq=False)
class InnerBlockModel:
    """Module croisé (H, H, id, conjugaison) ; (h, g) ↦ diag(h·g, g)."""
    H: MatrixLieGroup

    def encode(self, h: np.ndarray, g: np.ndarray) -> np.ndarray:
        return scipy.linalg.block_diag(h @ g, g)

    def decode(self, M: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        n = self.H.ambient_dim
        g = M[n:, n:]
        return M[:n, :n] @ np.linalg.inv(g), g

    def to_lie2group(self, name: str = 'inner') -> MatrixLie2Group:
        H = self.H
        n = H.ambient_dim
        G1 = block_diagonal(H)

        def comp(sigma: np.ndarray, gamma: np.ndarray) -> np.ndarray:
            # (h₂, h₁g) ∗ (h₁, g) = (h₂h₁, g)
            h2, _ = self.decode(sigma)
            h1, g = self.decode(gamma)
            return self.encode(h2 @ h1, g)

        return MatrixLie2Group(
            name=name,
            G0=H,
            G1=G1,
            s=SmoothMap(G1, H, lambda M: M[n:, n:], name='s'),
            t=SmoothMap(G1, H, lambda M: M[:n, :n], name='t'),
            unit=SmoothMap(H, G1, lambda x: scipy.linalg.block_diag(x, x), name='1'),
            comp=comp,
            model=self,
        )


@dataclass(frozen=True, eq=False)
class VectorBlockModel:
    """Module croisé (ℝⁿ, G, trivial, action linéaire) ; (v, g) ↦ [[g, v], [0, 1]]."""
    G: MatrixLieGroup

    def encode(self, v: np.ndarray, g: np.ndarray) -> np.ndarray:
        n = self.G.ambient_dim
        M = np.eye(n + 1)
        M[:n, :n] = g
        M[:n, n] = v
        return M

    def decode(self, M: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        n = self.G.ambient_dim
        return M[:n, n].copy(), M[:n, :n].copy()

    def to_lie2group(self, name: str = 'vector') -> MatrixLie2Group:
        G = self.G
        n = G.ambient_dim
        G1 = affine_linear(G)

        def comp(sigma: np.ndarray, gamma: np.ndarray) -> np.ndarray:
            v2, _ = self.decode(sigma)
            v1, g = self.decode(gamma)
            return self.encode(v2 + v1, g)

        return MatrixLie2Group(
            name=name,
            G0=G,
            G1=G1,
            s=SmoothMap(G1, G, lambda M: M[:n, :n], name='s'),
            t=SmoothMap(G1, G, lambda M: M[:n, :n], name='t'),
            unit=SmoothMap(G, G1, lambda x: self.encode(np.zeros(n), x), name='1'),
            comp=comp,
            model=self,
        )


@dataclass(frozen=True, eq=False)
class Lie2Algebra:
    """
    𝔤 = {𝔤₁ ⇉ 𝔤₀} en coordonnées.

    matched_basis : colonnes (α; β) engendrant {ds α = dt β} ;
    circledast_matrix : ⊛ exprimé sur ces colonnes.
    """
    g0_dim: int
    g1_dim: int
    bracket0: np.ndarray
    bracket1: np.ndarray
    ds: np.ndarray
    dt: np.ndarray
    d1: np.ndarray
    matched_basis: np.ndarray
    circledast_matrix: np.ndarray
    group: MatrixLie2Group

    def bracket(self, level: int, a: Sequence[float], b: Sequence[float]) -> np.ndarray:
        C = self.bracket0 if level == 0 else self.bracket1
        return np.einsum('kij,i,j->k', C, np.asarray(a, dtype=float), np.asarray(b, dtype=float))

    def circledast(self, alpha: Sequence[float], beta: Sequence[float]) -> np.ndarray:
        alpha = np.asarray(alpha, dtype=float)
        beta = np.asarray(beta, dtype=float)
        gap = float(np.linalg.norm(self.ds @ alpha - self.dt @ beta))
        if gap > config.DEFAULT_TOLERANCES['one_derivative']:
            raise NotComposable("ds(α) ≠ dt(β)", witness=gap)
        w = np.linalg.lstsq(self.matched_basis, np.concatenate([alpha, beta]), rcond=None)[0]
        return self.circledast_matrix @ w


def lie2algebra_of(G: MatrixLie2Group) -> Lie2Algebra:
    """Différentie s, t, 1 et la composition en (e₁, e₁)."""
    ds = lie_functor(G.s)
    dt = lie_functor(G.t)
    d1 = lie_functor(G.unit)
    g0, g1 = G.G0.dim, G.G1.dim

    matched = scipy.linalg.null_space(np.hstack([ds, -dt]))
    columns = []
    for w in matched.T:
        A = G.G1.from_coords(w[:g1])
        B = G.G1.from_coords(w[g1:])
        d = path_derivative(lambda tau: G.comp(expm(tau * A), expm(tau * B)))
        columns.append(G.G1.coords(d)[0])
    circ = np.column_stack(columns) if columns else np.zeros((g1, 0))

    L = Lie2Algebra(
        g0_dim=g0,
        g1_dim=g1,
        bracket0=G.G0.structure_constants(),
        bracket1=G.G1.structure_constants(),
        ds=ds,
        dt=dt,
        d1=d1,
        matched_basis=matched,
        circledast_matrix=circ,
        group=G,
    )
    res = unit_section_residual(L)
    if res > config.DEFAULT_TOLERANCES['one_derivative']:
        raise Internal2GroupAxiomViolation("ds∘d1 ou dt∘d1 ≠ id", witness=res)
    logger.info(f"2-algèbre de Lie de {G.name} : dim 𝔤₀ = {g0}, dim 𝔤₁ = {g1}, "
                f"paires appariées de dimension {matched.shape[1]}")
    return L


def unit_section_residual(L: Lie2Algebra) -> float:
    identity = np.eye(L.g0_dim)
    return max(_res(L.ds @ L.d1, identity), _res(L.dt @ L.d1, identity))


def circledast_identity_check(L: Lie2Algebra) -> float:
    """Max de ‖α⊛β − (α + β − d1·ds·α)‖ sur la base appariée et sur les unités."""
    worst = 0.0
    for w in L.matched_basis.T:
        alpha, beta = w[:L.g1_dim], w[L.g1_dim:]
        worst = max(worst, _res(L.circledast(alpha, beta), alpha + beta - L.d1 @ (L.ds @ alpha)))
    for u in np.eye(L.g0_dim):
        unit = L.d1 @ u
        worst = max(worst, _res(L.circledast(unit, unit), unit))
    return worst


def tangent_product(L: Lie2Algebra, a: Sequence[float], b: Sequence[float]) -> np.ndarray:
    """Tm(a, b) en (e₁, e₁), dérivé numériquement."""
    G1 = L.group.G1
    A, B = G1.from_coords(a), G1.from_coords(b)
    return G1.coords(path_derivative(lambda tau: expm(tau * A) @ expm(tau * B)))[0]


def algebra_interchange_residual(L: Lie2Algebra) -> float:
    """Tm(α⊛β, γ⊛δ) = Tm(α, γ)⊛Tm(β, δ) sur les couples de colonnes appariées."""
    worst = 0.0
    g1 = L.g1_dim
    for w in L.matched_basis.T:
        for z in L.matched_basis.T:
            alpha, beta = w[:g1], w[g1:]
            gamma, delta = z[:g1], z[g1:]
            lhs = tangent_product(L, L.circledast(alpha, beta), L.circledast(gamma, delta))
            rhs = L.circledast(tangent_product(L, alpha, gamma), tangent_product(L, beta, delta))
            worst = max(worst, _res(lhs, rhs))
    return worst


@dataclass(frozen=True, eq=False)
class LeftInvariantField:
    """u(g) = g·(Σ cᵢbᵢ)."""
    group: MatrixLieGroup
    coords: np.ndarray

    @property
    def value_at_identity(self) -> np.ndarray:
        return self.group.from_coords(self.coords)

    def __call__(self, g: np.ndarray) -> np.ndarray:
        return g @ self.value_at_identity

    def at(self, g: np.ndarray) -> TangentVector:
        return TangentVector(self.group, g, self(g))


def ell(L: Lie2Algebra, G: MatrixLie2Group, a: Sequence[float], level: int) -> LeftInvariantField:
    group = G.G0 if level == 0 else G.G1
    a = np.asarray(a, dtype=float)
    if level not in (0, 1) or a.shape != (group.dim,):
        raise DimensionMismatch(f"Coordonnées de niveau {level} de taille {group.dim} attendues",
                                witness=a.shape)
    return LeftInvariantField(group, a)


def bracket_compatibility_residual(L: Lie2Algebra, level: int) -> float:
    """[ℓ(bᵢ), ℓ(bⱼ)](e) comparé à ℓ([bᵢ, bⱼ])(e) sur toutes les paires de base."""
    G = L.group
    dim = L.g0_dim if level == 0 else L.g1_dim
    group = G.G0 if level == 0 else G.G1
    e = group.identity()
    worst = 0.0
    basis = np.eye(dim)
    for i in range(dim):
        for j in range(dim):
            X, Y = ell(L, G, basis[i], level), ell(L, G, basis[j], level)
            lhs = field_bracket(X, Y)(e)
            rhs = ell(L, G, L.bracket(level, basis[i], basis[j]), level)(e)
            worst = max(worst, _res(lhs, rhs))
    return worst


def structure_map_bracket_residual(L: Lie2Algebra) -> float:
    """ds, dt et d1 entrelacent les crochets."""
    worst = 0.0
    for i in range(L.g1_dim):
        for j in range(L.g1_dim):
            a, b = np.eye(L.g1_dim)[i], np.eye(L.g1_dim)[j]
            for D in (L.ds, L.dt):
                worst = max(worst, _res(D @ L.bracket(1, a, b), L.bracket(0, D @ a, D @ b)))
    for i in range(L.g0_dim):
        for j in range(L.g0_dim):
            a, b = np.eye(L.g0_dim)[i], np.eye(L.g0_dim)[j]
            worst = max(worst, _res(L.d1 @ L.bracket(0, a, b), L.bracket(1, L.d1 @ a, L.d1 @ b)))
    return worst


def left_translation_residual(u: LeftInvariantField, samples: Sequence[np.ndarray]) -> float:
    """u(g·g') calculé depuis e et par translation de u(g') ; max sur les couples d'échantillons."""
    worst = 0.0
    for g in samples:
        for h in samples:
            worst = max(worst, _res((g @ h) @ u.value_at_identity, g @ u(h)))
    return worst


def model_from_descriptor(descriptor: Dict[str, Any], group: MatrixLieGroup):
    kind = descriptor.get('type')
    if kind == 'inner':
        return InnerBlockModel(group)
    if kind == 'vector':
        return VectorBlockModel(group)
    raise VerificationError(f"Modèle par blocs inconnu : {kind!r}", witness=descriptor)
