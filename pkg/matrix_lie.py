"""
Groupes de Lie matriciels : exponentielle, échantillonnage, différentielles
numériques dans la carte de translation à gauche et foncteur de Lie.

Un vecteur tangent en g est stocké comme la matrice ambiante `dir`, avec
g⁻¹·dir dans l'algèbre de Lie du groupe.
"""

import logging
import threading
from dataclasses import dataclass
from typing import Callable, Dict, Any, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

import config
from errors import (
    VerificationError,
    ExpmOverflow,
    NumericalInstability,
    NotHomomorphism,
    DimensionMismatch,
)

# Configuration du logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

# Compteurs de la règle d'hygiène numérique
differential_stats = {
    'evaluations': 0,
    'richardson_failures': 0,
}
_stats_lock = threading.Lock()


def _count(key: str):
    with _stats_lock:
        differential_stats[key] += 1


def reset_differential_stats():
    with _stats_lock:
        for key in differential_stats:
            differential_stats[key] = 0


def snapshot_differential_stats() -> Dict[str, int]:
    with _stats_lock:
        return dict(differential_stats)


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


@dataclass(frozen=True, eq=False)
class MatrixLieGroup:
    """
    Groupe de Lie de matrices n×n réelles.

    Args:
        basis: base (d, n, n) de l'algèbre de Lie
        membership: résidu d'appartenance, nul sur le groupe
    """
    name: str
    ambient_dim: int
    basis: np.ndarray
    membership: Callable[[np.ndarray], float]
    membership_tol: float = config.DEFAULT_TOLERANCES['membership']

    def __post_init__(self):
        flat = self.basis.reshape(len(self.basis), -1).T
        object.__setattr__(self, '_flat', flat)
        object.__setattr__(self, '_pinv', np.linalg.pinv(flat))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def identity(self) -> np.ndarray:
        return np.eye(self.ambient_dim)

    def coords(self, X: np.ndarray) -> Tuple[np.ndarray, float]:
        """Coordonnées (moindres carrés) d'une matrice dans la base, et résidu."""
        x = np.asarray(X, dtype=float).reshape(-1)
        c = self._pinv @ x
        return c, float(np.linalg.norm(self._flat @ c - x))

    def from_coords(self, c: Sequence[float]) -> np.ndarray:
        c = np.asarray(c, dtype=float)
        if c.shape != (self.dim,):
            raise DimensionMismatch(f"{self.name} : {self.dim} coordonnées attendues", witness=c.shape)
        return np.tensordot(c, self.basis, axes=1)

    def structure_constants(self) -> np.ndarray:
        """C[k, i, j] avec [b_i, b_j] = Σ_k C[k, i, j] b_k."""
        d = self.dim
        C = np.zeros((d, d, d))
        for i in range(d):
            for j in range(d):
                C[:, i, j] = self.coords(commutator(self.basis[i], self.basis[j]))[0]
        return C

    def membership_residual(self, M: np.ndarray) -> float:
        return float(self.membership(np.asarray(M, dtype=float)))

    def contains(self, M: np.ndarray) -> bool:
        return self.membership_residual(M) <= self.membership_tol

    def chart_residual(self, base: np.ndarray, direction: np.ndarray) -> float:
        """Résidu de base⁻¹·dir hors de l'algèbre de Lie."""
        return self.coords(np.linalg.solve(base, direction))[1]


def validate_group(H: MatrixLieGroup):
    """Base libre, algèbre fermée pour le commutateur, neutre dans le groupe."""
    flat = H.basis.reshape(H.dim, -1)
    if np.linalg.matrix_rank(flat) != H.dim:
        raise DimensionMismatch(f"Base de {H.name} liée", witness=H.dim)
    closure = 0.0
    for i in range(H.dim):
        for j in range(H.dim):
            closure = max(closure, H.coords(commutator(H.basis[i], H.basis[j]))[1])
    if closure > config.DEFAULT_TOLERANCES['membership']:
        raise VerificationError(f"Algèbre de {H.name} non fermée pour le crochet", witness=closure)
    if not H.contains(H.identity()):
        raise VerificationError(f"Le neutre n'appartient pas à {H.name}")


@dataclass(frozen=True, eq=False)
class GroupElement:
    group: MatrixLieGroup
    matrix: np.ndarray

    def __mul__(self, other: 'GroupElement') -> 'GroupElement':
        return GroupElement(self.group, self.matrix @ other.matrix)

    def inverse(self) -> 'GroupElement':
        return GroupElement(self.group, np.linalg.inv(self.matrix))

    def membership_residual(self) -> float:
        return self.group.membership_residual(self.matrix)


@dataclass(frozen=True, eq=False)
class TangentVector:
    """Vecteur tangent (base, dir) à un groupe matriciel."""
    group: MatrixLieGroup
    base: np.ndarray
    dir: np.ndarray

    def chart_residual(self) -> float:
        return self.group.chart_residual(self.base, self.dir)

    def coords(self) -> np.ndarray:
        """Coordonnées de base⁻¹·dir."""
        return self.group.coords(np.linalg.solve(self.base, self.dir))[0]

    def __add__(self, other: 'TangentVector') -> 'TangentVector':
        if np.linalg.norm(self.base - other.base) > config.DEFAULT_TOLERANCES['closed_form']:
            raise DimensionMismatch("Somme de vecteurs tangents en des points différents")
        return TangentVector(self.group, self.base, self.dir + other.dir)

    def __rmul__(self, scalar: float) -> 'TangentVector':
        return TangentVector(self.group, self.base, scalar * self.dir)


@dataclass(frozen=True, eq=False)
class SmoothMap:
    """Application lisse entre groupes matriciels, évaluée sur les matrices."""
    dom: MatrixLieGroup
    cod: MatrixLieGroup
    eval: Callable[[np.ndarray], np.ndarray]
    name: str = 'f'

    def __call__(self, M: np.ndarray) -> np.ndarray:
        return self.eval(M)

    def compose(self, other: 'SmoothMap') -> 'SmoothMap':
        """self ∘ other."""
        return SmoothMap(other.dom, self.cod, lambda M: self.eval(other.eval(M)),
                         name=f"{self.name}∘{other.name}")


def identity_map(H: MatrixLieGroup) -> SmoothMap:
    return SmoothMap(H, H, lambda M: M, name=f"id_{H.name}")


def conjugation_map(H: MatrixLieGroup, g: np.ndarray) -> SmoothMap:
    g_inv = np.linalg.inv(g)
    return SmoothMap(H, H, lambda M: g @ M @ g_inv, name='conj')


def expm(X: np.ndarray) -> np.ndarray:
    """Exponentielle matricielle (Padé avec mise à l'échelle et quadratures)."""
    X = np.asarray(X, dtype=float)
    if not np.all(np.isfinite(X)):
        raise ValueError("expm : entrées non finies")
    norm = np.linalg.norm(X, 1)
    if norm > config.EXPM_NORM_LIMIT:
        raise ExpmOverflow(f"Norme {norm:.3g} hors du domaine de expm", witness=norm)
    with np.errstate(over='ignore', invalid='ignore'):
        result = scipy.linalg.expm(X)
    if not np.all(np.isfinite(result)):
        raise ExpmOverflow("expm : résultat non fini", witness=norm)
    return result


def element_from_coords(H: MatrixLieGroup, c: Sequence[float]) -> GroupElement:
    return GroupElement(H, expm(H.from_coords(c)))


def sample_elements(H: MatrixLieGroup, n: int, seed: Optional[int] = None) -> List[GroupElement]:
    """n éléments exp(Σ cᵢbᵢ), cᵢ uniformes dans [−1, 1], tirés de façon déterministe."""
    rng = np.random.default_rng(config.DEFAULT_SEED if seed is None else seed)
    coefficients = rng.uniform(-1.0, 1.0, size=(n, H.dim))
    elements = [element_from_coords(H, c) for c in coefficients]
    for k, g in enumerate(elements):
        res = g.membership_residual()
        if res > H.membership_tol:
            raise VerificationError(f"Échantillon hors de {H.name}", witness={'sample': k, 'residual': res})
    return elements


def sample_element(H: MatrixLieGroup, seed: Optional[int] = None) -> GroupElement:
    return sample_elements(H, 1, seed)[0]


def sample_matrices(H: MatrixLieGroup, n: int, seed: Optional[int] = None) -> List[np.ndarray]:
    return [g.matrix for g in sample_elements(H, n, seed)]


def path_derivative(path: Callable[[float], np.ndarray], h: float = config.FD_STEP) -> np.ndarray:
    """
    Dérivée en 0 d'un chemin par différences centrées aux pas h et h/2.

    Les deux estimations doivent concorder à config.RICHARDSON_RTOL près
    (relativement à max(1, ‖D_{h/2}‖)) ; on renvoie l'extrapolation de Richardson.
    """
    def central(step: float) -> np.ndarray:
        return (np.asarray(path(step)) - np.asarray(path(-step))) / (2.0 * step)

    d_h = central(h)
    d_half = central(h / 2.0)
    _count('evaluations')
    gap = float(np.linalg.norm(d_h - d_half))
    scale = max(1.0, float(np.linalg.norm(d_half)))
    if not np.isfinite(gap) or gap > config.RICHARDSON_RTOL * scale:
        _count('richardson_failures')
        raise NumericalInstability(f"Écart h / h/2 de {gap:.3e}", witness={'gap': gap, 'scale': scale})
    return (4.0 * d_half - d_h) / 3.0


def directional_derivative(F: Callable[[np.ndarray], np.ndarray], base: np.ndarray,
                           direction: np.ndarray) -> np.ndarray:
    """Dérivée de F le long de τ ↦ base·exp(τ·base⁻¹·dir)."""
    xi = np.linalg.solve(base, direction)
    return path_derivative(lambda tau: F(base @ expm(tau * xi)))


def differential(f: SmoothMap, v: TangentVector) -> TangentVector:
    """Tf(v), vérifié dans la carte de translation à gauche de cod(f)."""
    d = directional_derivative(f.eval, v.base, v.dir)
    image = TangentVector(f.cod, f.eval(v.base), d)
    res = image.chart_residual()
    bound = 1e-6 * max(1.0, float(np.linalg.norm(v.dir)))
    if res > bound:
        raise NumericalInstability(f"Tf(v) hors de l'espace tangent de {f.cod.name}",
                                   witness={'map': f.name, 'residual': res})
    return image


def lie_functor(f: SmoothMap) -> np.ndarray:
    """Matrice de T_e f dans les bases des algèbres ; vérifie que c'est un morphisme d'algèbres."""
    dom, cod = f.dom, f.cod
    e = dom.identity()
    res = float(np.linalg.norm(f.eval(e) - cod.identity()))
    if res > config.DEFAULT_TOLERANCES['one_derivative']:
        raise NotHomomorphism(f"{f.name}(e) ≠ e", witness=res)

    columns = [cod.coords(differential(f, TangentVector(dom, e, b)).dir)[0] for b in dom.basis]
    M = np.column_stack(columns) if columns else np.zeros((cod.dim, 0))

    C_dom = dom.structure_constants()
    worst = 0.0
    for i in range(dom.dim):
        for j in range(dom.dim):
            lhs = M @ C_dom[:, i, j]
            rhs = cod.coords(commutator(cod.from_coords(M[:, i]), cod.from_coords(M[:, j])))[0]
            worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    if worst > config.DEFAULT_TOLERANCES['two_derivatives']:
        raise NotHomomorphism(f"T_e {f.name} ne respecte pas le crochet", witness=worst)
    return M


def adjoint_matrix(H: MatrixLieGroup, g: np.ndarray) -> np.ndarray:
    """Ad_g en coordonnées : colonnes coords(g·bᵢ·g⁻¹)."""
    g_inv = np.linalg.inv(g)
    return np.column_stack([H.coords(g @ b @ g_inv)[0] for b in H.basis])


def field_bracket(X: Callable[[np.ndarray], np.ndarray],
                  Y: Callable[[np.ndarray], np.ndarray]) -> Callable[[np.ndarray], np.ndarray]:
    """[X, Y](p) = DY(p)[X(p)] − DX(p)[Y(p)] pour des champs à valeurs ambiantes."""
    def bracket(p: np.ndarray) -> np.ndarray:
        return directional_derivative(Y, p, X(p)) - directional_derivative(X, p, Y(p))
    return bracket


# Groupes enregistrés

def _unit_matrix(n: int, i: int, j: int) -> np.ndarray:
    E = np.zeros((n, n))
    E[i, j] = 1.0
    return E


def special_orthogonal(n: int = 2) -> MatrixLieGroup:
    """SO(n), base E_ji − E_ij pour i < j."""
    basis = np.array([_unit_matrix(n, j, i) - _unit_matrix(n, i, j)
                      for i in range(n) for j in range(i + 1, n)])

    def membership(M: np.ndarray) -> float:
        return float(np.linalg.norm(M.T @ M - np.eye(n)) + abs(np.linalg.det(M) - 1.0))

    return MatrixLieGroup(f"SO({n})", n, basis, membership)


def special_orthogonal_2() -> MatrixLieGroup:
    return special_orthogonal(2)


def affine_line_group() -> MatrixLieGroup:
    """Groupe affine de la droite {[[a, b], [0, 1]] : a > 0} ; [E11, E12] = E12."""
    basis = np.array([_unit_matrix(2, 0, 0), _unit_matrix(2, 0, 1)])

    def membership(M: np.ndarray) -> float:
        if M[0, 0] <= 0:
            return float('inf')
        return float(abs(M[1, 0]) + abs(M[1, 1] - 1.0))

    return MatrixLieGroup('Aff(1)', 2, basis, membership)


def block_diagonal(H: MatrixLieGroup) -> MatrixLieGroup:
    """H×H plongé en diag(X, Y) ; base diag(bᵢ, 0) puis diag(0, bᵢ)."""
    n = H.ambient_dim
    zero = np.zeros((n, n))
    basis = np.array([np.block([[b, zero], [zero, zero]]) for b in H.basis]
                     + [np.block([[zero, zero], [zero, b]]) for b in H.basis])

    def membership(M: np.ndarray) -> float:
        off = np.linalg.norm(M[:n, n:]) + np.linalg.norm(M[n:, :n])
        return float(off + H.membership(M[:n, :n]) + H.membership(M[n:, n:]))

    return MatrixLieGroup(f"{H.name}×{H.name}", 2 * n, basis, membership, H.membership_tol)


def affine_linear(G: MatrixLieGroup) -> MatrixLieGroup:
    """ℝⁿ⋊G plongé en [[g, v], [0, 1]] ; base (bᵢ, 0) puis les translations."""
    n = G.ambient_dim
    basis = []
    for b in G.basis:
        B = np.zeros((n + 1, n + 1))
        B[:n, :n] = b
        basis.append(B)
    for k in range(n):
        basis.append(_unit_matrix(n + 1, k, n))

    def membership(M: np.ndarray) -> float:
        return float(G.membership(M[:n, :n]) + np.linalg.norm(M[n, :n]) + abs(M[n, n] - 1.0))

    return MatrixLieGroup(f"R{n}⋊{G.name}", n + 1, np.array(basis), membership, G.membership_tol)


GROUP_KINDS = ('special_orthogonal', 'affine', 'block_diagonal', 'affine_linear')


def from_descriptor(descriptor: Dict[str, Any]) -> MatrixLieGroup:
    """
    Groupe décrit par un document de fixture.

    Args:
        descriptor: {"kind": ..., "n": ..., "of": {...}, "basis": [...]} ; une base
            explicite remplace la base par défaut (même dimension).
    """
    if not isinstance(descriptor, dict):
        raise TypeError(f"Descripteur de groupe : objet attendu, reçu {type(descriptor).__name__}")
    kind = descriptor.get('kind')
    if kind == 'special_orthogonal':
        H = special_orthogonal(int(descriptor.get('n', 2)))
    elif kind == 'affine':
        H = affine_line_group()
    elif kind == 'block_diagonal':
        H = block_diagonal(from_descriptor(descriptor['of']))
    elif kind == 'affine_linear':
        H = affine_linear(from_descriptor(descriptor['of']))
    else:
        raise ValueError(f"Type de groupe inconnu : {kind!r} (attendu parmi {GROUP_KINDS})")

    if 'basis' in descriptor:
        basis = np.asarray(descriptor['basis'], dtype=float)
        if basis.shape != H.basis.shape:
            raise DimensionMismatch(f"Base de forme {basis.shape}, attendu {H.basis.shape}")
        H = MatrixLieGroup(H.name, H.ambient_dim, basis, H.membership, H.membership_tol)
    if 'membership_tol' in descriptor:
        H = MatrixLieGroup(H.name, H.ambient_dim, H.basis, H.membership, float(descriptor['membership_tol']))
    validate_group(H)
    return H
