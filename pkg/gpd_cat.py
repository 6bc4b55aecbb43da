"""
Groupoïdes finis, foncteurs, transformations naturelles, le 2-groupe Aut(K)
et les actions strictes de 2-groupes finis.

Foncteurs et transformations sont stockés comme tableaux d'indices denses ;
l'égalité est l'égalité des tableaux.
"""

import logging
import itertools
from dataclasses import dataclass
from typing import Dict, Any, Iterator, List, Optional, Tuple

import numpy as np

import config
from errors import (
    GroupoidAxiomViolation,
    FunctorViolation,
    NatTransfViolation,
    NotComposable,
    CapExceeded,
    ActionAxiomViolation,
)
from finite_core import Internal2Group, build_group, assemble_internal_2group

# Configuration du logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    """Groupoïde fini ; comp_table[σ, γ] = σ∗γ si s(σ) = t(γ), -1 sinon."""
    n_objects: int
    s: np.ndarray
    t: np.ndarray
    unit: np.ndarray
    comp_table: np.ndarray
    inv: np.ndarray
    name: str = 'groupoid'

    @property
    def n_arrows(self) -> int:
        return len(self.s)

    def compose(self, sigma: int, gamma: int) -> int:
        value = int(self.comp_table[sigma, gamma])
        if value < 0:
            raise NotComposable(f"{self.name}: s({sigma}) ≠ t({gamma})", witness=(sigma, gamma))
        return value

    def hom_set(self, a: int, b: int) -> np.ndarray:
        return np.flatnonzero((self.s == a) & (self.t == b))

    def composable_pairs(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.nonzero(self.comp_table >= 0)


def same_groupoid(A: FiniteGroupoid, B: FiniteGroupoid) -> bool:
    if A is B:
        return True
    return (A.n_objects == B.n_objects
            and all(np.array_equal(getattr(A, f), getattr(B, f))
                    for f in ('s', 't', 'unit', 'comp_table')))


def validate_groupoid(K: FiniteGroupoid):
    """Axiomes de catégorie et inversibilité ; lève GroupoidAxiomViolation."""
    m = K.n_arrows
    objects = np.arange(K.n_objects)
    arrows = np.arange(m)
    if (K.s[K.unit] != objects).any() or (K.t[K.unit] != objects).any():
        raise GroupoidAxiomViolation("s(1_a) = a = t(1_a) violé", witness=K.name)

    defined = K.comp_table >= 0
    expected = K.s[:, None] == K.t[None, :]
    if not np.array_equal(defined, expected):
        bad = tuple(int(v) for v in np.argwhere(defined != expected)[0])
        raise GroupoidAxiomViolation("Composition définie hors des paires composables", witness=bad)

    sig, gam = K.composable_pairs()
    c = K.comp_table[sig, gam]
    bad = np.flatnonzero((K.s[c] != K.s[gam]) | (K.t[c] != K.t[sig]))
    if len(bad):
        raise GroupoidAxiomViolation("Source ou but de la composée incorrect",
                                     witness=(int(sig[bad[0]]), int(gam[bad[0]])))
    if (K.comp_table[K.unit[K.t], arrows] != arrows).any() or (K.comp_table[arrows, K.unit[K.s]] != arrows).any():
        raise GroupoidAxiomViolation("Lois d'unité violées", witness=K.name)

    i, z = np.nonzero(K.t[None, :] == K.s[gam][:, None])
    a, b = sig[i], gam[i]
    bad = np.flatnonzero(K.comp_table[K.comp_table[a, b], z] != K.comp_table[a, K.comp_table[b, z]])
    if len(bad):
        k = bad[0]
        raise GroupoidAxiomViolation("Composition non associative", witness=(int(a[k]), int(b[k]), int(z[k])))

    if (K.comp_table[K.inv, arrows] != K.unit[K.s]).any() or (K.comp_table[arrows, K.inv] != K.unit[K.t]).any():
        raise GroupoidAxiomViolation("Inverse incorrect", witness=K.name)


def groupoid_from_2group(G: Internal2Group) -> FiniteGroupoid:
    """Groupoïde sous-jacent G1 ⇉ G0."""
    inv = np.array([G.groupoid_inverse(g) for g in range(G.G1.order)], dtype=np.int64)
    return FiniteGroupoid(G.G0.order, G.s.map, G.t.map, G.unit.map, G.comp_table, inv, name=G.name)


def groupoid_from_group(H) -> FiniteGroupoid:
    """Groupoïde à un objet dont les flèches sont les éléments de H."""
    n = H.order
    zeros = np.zeros(n, dtype=np.int64)
    K = FiniteGroupoid(1, zeros, zeros, np.array([H.identity]), H.mul_table, H.inv_table,
                       name=f"B{H.name}")
    validate_groupoid(K)
    return K


def discrete_groupoid(n: int) -> FiniteGroupoid:
    ids = np.arange(n)
    table = np.full((n, n), -1, dtype=np.int64)
    table[ids, ids] = ids
    return FiniteGroupoid(n, ids, ids, ids, table, ids, name=f"discret{n}")


def product_groupoid(A: FiniteGroupoid, B: FiniteGroupoid) -> FiniteGroupoid:
    """A×B ; l'objet (a, b) a l'indice a·|B0| + b, la flèche (σ, τ) l'indice σ·|B1| + τ."""
    nB, mA, mB = B.n_objects, A.n_arrows, B.n_arrows
    sig = np.repeat(np.arange(mA), mB)
    tau = np.tile(np.arange(mB), mA)
    ca = A.comp_table[sig[:, None], sig[None, :]]
    cb = B.comp_table[tau[:, None], tau[None, :]]
    comp = np.where((ca >= 0) & (cb >= 0), ca * mB + cb, -1)
    obj_a = np.repeat(np.arange(A.n_objects), nB)
    obj_b = np.tile(np.arange(nB), A.n_objects)
    return FiniteGroupoid(
        n_objects=A.n_objects * nB,
        s=A.s[sig] * nB + B.s[tau],
        t=A.t[sig] * nB + B.t[tau],
        unit=A.unit[obj_a] * mB + B.unit[obj_b],
        comp_table=comp,
        inv=A.inv[sig] * mB + B.inv[tau],
        name=f"{A.name}×{B.name}",
    )


@dataclass(frozen=True, eq=False)
class GpdFunctor:
    dom: FiniteGroupoid
    cod: FiniteGroupoid
    obj_map: np.ndarray
    arr_map: np.ndarray
    name: str = 'F'


def validate_functor(F: GpdFunctor):
    dom, cod = F.dom, F.cod
    if (cod.s[F.arr_map] != F.obj_map[dom.s]).any() or (cod.t[F.arr_map] != F.obj_map[dom.t]).any():
        bad = int(np.flatnonzero((cod.s[F.arr_map] != F.obj_map[dom.s]) | (cod.t[F.arr_map] != F.obj_map[dom.t]))[0])
        raise FunctorViolation(f"{F.name} ne respecte pas source/but", witness=bad)
    bad = np.flatnonzero(F.arr_map[dom.unit] != cod.unit[F.obj_map])
    if len(bad):
        raise FunctorViolation(f"{F.name} ne respecte pas les unités", witness=int(bad[0]))
    sig, gam = dom.composable_pairs()
    bad = np.flatnonzero(F.arr_map[dom.comp_table[sig, gam]] != cod.comp_table[F.arr_map[sig], F.arr_map[gam]])
    if len(bad):
        raise FunctorViolation(f"{F.name} ne respecte pas la composition",
                               witness=(int(sig[bad[0]]), int(gam[bad[0]])))


def identity_functor(K: FiniteGroupoid) -> GpdFunctor:
    return GpdFunctor(K, K, np.arange(K.n_objects), np.arange(K.n_arrows), name=f"id_{K.name}")


def compose_functors(g: GpdFunctor, f: GpdFunctor) -> GpdFunctor:
    """g ∘ f."""
    if not same_groupoid(f.cod, g.dom):
        raise NotComposable(f"{g.name} ∘ {f.name} : groupoïdes intermédiaires distincts")
    return GpdFunctor(f.dom, g.cod, g.obj_map[f.obj_map], g.arr_map[f.arr_map], name=f"{g.name}∘{f.name}")


def functors_equal(F: GpdFunctor, G: GpdFunctor) -> bool:
    return (same_groupoid(F.dom, G.dom) and same_groupoid(F.cod, G.cod)
            and np.array_equal(F.obj_map, G.obj_map) and np.array_equal(F.arr_map, G.arr_map))


def is_invertible(F: GpdFunctor) -> bool:
    return (len(np.unique(F.obj_map)) == F.cod.n_objects == F.dom.n_objects
            and len(np.unique(F.arr_map)) == F.cod.n_arrows == F.dom.n_arrows)


@dataclass(frozen=True, eq=False)
class NatTransf:
    """component[a] : src(a) → dst(a)."""
    src: GpdFunctor
    dst: GpdFunctor
    component: np.ndarray
    name: str = 'α'


def validate_nat(N: NatTransf):
    if not (same_groupoid(N.src.dom, N.dst.dom) and same_groupoid(N.src.cod, N.dst.cod)):
        raise NatTransfViolation(f"{N.name} : foncteurs de domaines différents")
    C, D = N.src.cod, N.src.dom
    c = N.component
    bad = np.flatnonzero((C.s[c] != N.src.obj_map) | (C.t[c] != N.dst.obj_map))
    if len(bad):
        raise NatTransfViolation(f"{N.name}({int(bad[0])}) ne va pas de src(a) à dst(a)", witness=int(bad[0]))
    # Carré de naturalité : α(b) ∗ src(σ) = dst(σ) ∗ α(a) pour σ : a → b
    lhs = C.comp_table[c[D.t], N.src.arr_map]
    rhs = C.comp_table[N.dst.arr_map, c[D.s]]
    bad = np.flatnonzero(lhs != rhs)
    if len(bad):
        raise NatTransfViolation(f"Carré de naturalité de {N.name} non commutatif", witness=int(bad[0]))


def identity_nat(f: GpdFunctor) -> NatTransf:
    return NatTransf(f, f, f.cod.unit[f.obj_map], name=f"id_{f.name}")


def nats_equal(a: NatTransf, b: NatTransf) -> bool:
    return (functors_equal(a.src, b.src) and functors_equal(a.dst, b.dst)
            and np.array_equal(a.component, b.component))


def vertical_compose(beta: NatTransf, alpha: NatTransf) -> NatTransf:
    """(β ∘ᵥ α)(a) = β(a) ∗ α(a)."""
    if not functors_equal(beta.src, alpha.dst):
        raise NotComposable(f"src({beta.name}) ≠ dst({alpha.name})")
    C = alpha.src.cod
    result = NatTransf(alpha.src, beta.dst, C.comp_table[beta.component, alpha.component],
                       name=f"{beta.name}∘ᵥ{alpha.name}")
    validate_nat(result)
    return result


def horizontal_compose(beta: NatTransf, alpha: NatTransf) -> NatTransf:
    """
    Composition horizontale de α : g ⇒ h (A → B) et β : k ⇒ n (B → C).

    Composante en a : β(h(a)) ∗ k(α(a)), de k(g(a)) vers n(h(a)).
    """
    if not same_groupoid(alpha.src.cod, beta.src.dom):
        raise NotComposable(f"{beta.name} ∘ₕ {alpha.name} : groupoïdes intermédiaires distincts")
    k, h = beta.src, alpha.dst
    C = beta.src.cod
    component = C.comp_table[beta.component[h.obj_map], k.arr_map[alpha.component]]
    result = NatTransf(compose_functors(beta.src, alpha.src), compose_functors(beta.dst, alpha.dst),
                       component, name=f"{beta.name}∘ₕ{alpha.name}")
    validate_nat(result)
    return result


def whisker_left(k: GpdFunctor, alpha: NatTransf) -> NatTransf:
    """k·α : k∘g ⇒ k∘h."""
    return NatTransf(compose_functors(k, alpha.src), compose_functors(k, alpha.dst),
                     k.arr_map[alpha.component], name=f"{k.name}·{alpha.name}")


def whisker_right(beta: NatTransf, g: GpdFunctor) -> NatTransf:
    """β·g : k∘g ⇒ n∘g."""
    return NatTransf(compose_functors(beta.src, g), compose_functors(beta.dst, g),
                     beta.component[g.obj_map], name=f"{beta.name}·{g.name}")


@dataclass(frozen=True, eq=False)
class AutTwoGroup:
    """Aut(K) : foncteurs inversibles, isomorphismes naturels et le 2-groupe qu'ils forment."""
    functors: List[GpdFunctor]
    nat_isos: List[NatTransf]
    two_group: Internal2Group


def _invertible_functors(K: FiniteGroupoid) -> Iterator[GpdFunctor]:
    """Permutations des objets prolongées aux flèches par retour arrière."""
    m = K.n_arrows
    sig, gam = K.composable_pairs()
    comp = K.comp_table[sig, gam]
    is_unit = np.zeros(m, dtype=bool)
    is_unit[K.unit] = True
    order = [int(a) for a in range(m) if not is_unit[a]]

    for perm in itertools.permutations(range(K.n_objects)):
        obj = np.array(perm, dtype=np.int64)
        arr = np.full(m, -1, dtype=np.int64)
        arr[K.unit] = K.unit[obj]
        used = set(int(a) for a in arr[K.unit])

        def consistent() -> bool:
            mask = (arr[sig] >= 0) & (arr[gam] >= 0) & (arr[comp] >= 0)
            return bool((K.comp_table[arr[sig[mask]], arr[gam[mask]]] == arr[comp[mask]]).all())

        def extend(k: int) -> Iterator[np.ndarray]:
            if k == len(order):
                yield arr.copy()
                return
            sigma = order[k]
            for tau in K.hom_set(obj[K.s[sigma]], obj[K.t[sigma]]):
                tau = int(tau)
                if tau in used:
                    continue
                arr[sigma] = tau
                if consistent():
                    used.add(tau)
                    yield from extend(k + 1)
                    used.discard(tau)
                arr[sigma] = -1

        for arr_map in extend(0):
            yield GpdFunctor(K, K, obj.copy(), arr_map, name=f"F{perm}")


def _nat_isos(f: GpdFunctor, g: GpdFunctor, limit: int) -> List[NatTransf]:
    K = f.cod
    choices = [K.hom_set(f.obj_map[a], g.obj_map[a]) for a in range(f.dom.n_objects)]
    size = int(np.prod([len(c) for c in choices], dtype=np.float64))
    if size > limit:
        raise CapExceeded(f"{size} familles de composantes candidates entre {f.name} et {g.name}", witness=size)
    result = []
    for component in itertools.product(*choices):
        N = NatTransf(f, g, np.array(component, dtype=np.int64), name=f"{f.name}⇒{g.name}")
        try:
            validate_nat(N)
        except NatTransfViolation:
            continue
        result.append(N)
    return result


def _functor_key(F: GpdFunctor) -> Tuple:
    return tuple(F.obj_map.tolist()) + tuple(F.arr_map.tolist())


def aut_2group(K: FiniteGroupoid, cap: int = config.AUT_CAP) -> AutTwoGroup:
    """
    Énumère Aut(K) : objets = foncteurs inversibles (produit = composition),
    flèches = isomorphismes naturels (produit = composition horizontale,
    composition catégorique = composition verticale).
    """
    functors: List[GpdFunctor] = []
    for F in _invertible_functors(K):
        functors.append(F)
        if len(functors) > cap:
            raise CapExceeded(f"Plus de {cap} foncteurs inversibles sur {K.name}", witness=cap)
    f_index = {_functor_key(F): i for i, F in enumerate(functors)}

    nats: List[NatTransf] = []
    n_src, n_dst = [], []
    for i, f in enumerate(functors):
        for j, g in enumerate(functors):
            for N in _nat_isos(f, g, limit=cap * max(1, len(functors))):
                nats.append(N)
                n_src.append(i)
                n_dst.append(j)
    n_index = {(n_src[k], n_dst[k], tuple(N.component.tolist())): k for k, N in enumerate(nats)}

    def functor_idx(F: GpdFunctor) -> int:
        return f_index[_functor_key(F)]

    def nat_idx(N: NatTransf) -> int:
        return n_index[(functor_idx(N.src), functor_idx(N.dst), tuple(N.component.tolist()))]

    n0, n1 = len(functors), len(nats)
    t0 = np.array([[functor_idx(compose_functors(functors[i], functors[j])) for j in range(n0)]
                   for i in range(n0)], dtype=np.int64)
    t1 = np.array([[nat_idx(horizontal_compose(nats[i], nats[j])) for j in range(n1)]
                   for i in range(n1)], dtype=np.int64)
    G0 = build_group(t0, name=f"Aut({K.name})0")
    G1 = build_group(t1, name=f"Aut({K.name})1")
    unit_map = [nat_idx(identity_nat(F)) for F in functors]

    def comp_of_pair(sigma: int, gamma: int) -> int:
        return nat_idx(vertical_compose(nats[sigma], nats[gamma]))

    two = assemble_internal_2group(G0, G1, n_src, n_dst, unit_map, comp_of_pair, name=f"Aut({K.name})")
    logger.info(f"Aut({K.name}) : {n0} foncteurs inversibles, {n1} isomorphismes naturels")
    return AutTwoGroup(functors, nats, two)


@dataclass(frozen=True, eq=False)
class Action2:
    """Action stricte a : G×K → K d'un 2-groupe fini sur un groupoïde fini."""
    G: Internal2Group
    K: FiniteGroupoid
    a: GpdFunctor


def validate_action(A: Action2):
    """Loi d'unité, associativité et fonctorialité ; lève ActionAxiomViolation."""
    G, K, a = A.G, A.K, A.a
    n0, n1 = G.G0.order, G.G1.order
    nK, mK = K.n_objects, K.n_arrows
    if a.dom.n_arrows != n1 * mK or a.dom.n_objects != n0 * nK:
        raise ActionAxiomViolation("Le domaine de a n'est pas G×K")

    bad = np.flatnonzero(a.arr_map[G.e1 * mK + np.arange(mK)] != np.arange(mK))
    if len(bad):
        raise ActionAxiomViolation("a(e₁, σ) ≠ σ", witness={'sigma': int(bad[0])})
    bad = np.flatnonzero(a.obj_map[G.e0 * nK + np.arange(nK)] != np.arange(nK))
    if len(bad):
        raise ActionAxiomViolation("a(e₀, b) ≠ b", witness={'object': int(bad[0])})

    # a(γ·δ, σ) = a(γ, a(δ, σ))
    T1, T0 = G.G1.mul_table, G.G0.mul_table
    g = np.arange(n1)[:, None, None]
    d = np.arange(n1)[None, :, None]
    lhs = a.arr_map[T1[g, d] * mK + np.arange(mK)[None, None, :]]
    rhs = a.arr_map[g * mK + a.arr_map[d * mK + np.arange(mK)[None, None, :]]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        raise ActionAxiomViolation("a∘(m×id) ≠ a∘(id×a) sur les flèches",
                                   witness=tuple(int(v) for v in bad[0]))
    x = np.arange(n0)[:, None, None]
    y = np.arange(n0)[None, :, None]
    lhs = a.obj_map[T0[x, y] * nK + np.arange(nK)[None, None, :]]
    rhs = a.obj_map[x * nK + a.obj_map[y * nK + np.arange(nK)[None, None, :]]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        raise ActionAxiomViolation("a∘(m×id) ≠ a∘(id×a) sur les objets",
                                   witness=tuple(int(v) for v in bad[0]))

    try:
        validate_functor(a)
    except FunctorViolation as e:
        raise ActionAxiomViolation(f"a n'est pas un foncteur : {e}", witness=e.witness) from e


def multiplication_action(G: Internal2Group) -> Action2:
    """G agit sur son groupoïde sous-jacent par multiplication à gauche."""
    K = groupoid_from_2group(G)
    P = product_groupoid(K, K)
    a = GpdFunctor(P, K, G.G0.mul_table.reshape(-1), G.G1.mul_table.reshape(-1), name='m')
    return Action2(G, K, a)


def trivial_action(G: Internal2Group, K: FiniteGroupoid) -> Action2:
    """a(γ, σ) = σ."""
    P = product_groupoid(groupoid_from_2group(G), K)
    a = GpdFunctor(P, K, np.tile(np.arange(K.n_objects), G.G0.order),
                   np.tile(np.arange(K.n_arrows), G.G1.order), name='pr')
    return Action2(G, K, a)


@dataclass(frozen=True, eq=False)
class TwoGroupHom:
    """x ↦ â(x) (foncteurs), γ ↦ â(γ) (transformations naturelles)."""
    functors: List[GpdFunctor]
    nats: List[NatTransf]
    laws: Dict[str, int]


def action_to_hom(A: Action2) -> TwoGroupHom:
    """â(x)(σ : a → b) = 1_x·σ, â(γ)(b) = γ·1_b, avec vérification des lois d'homomorphisme."""
    validate_action(A)
    G, K, a = A.G, A.K, A.a
    n0, n1 = G.G0.order, G.G1.order
    nK, mK = K.n_objects, K.n_arrows
    u = G.unit.map

    functors = []
    for x in range(n0):
        F = GpdFunctor(K, K, a.obj_map[x * nK + np.arange(nK)], a.arr_map[u[x] * mK + np.arange(mK)],
                       name=f"â({x})")
        try:
            validate_functor(F)
        except FunctorViolation as e:
            raise ActionAxiomViolation(str(e), witness={'x': x}) from e
        functors.append(F)

    nats = []
    for gamma in range(n1):
        N = NatTransf(functors[G.s.map[gamma]], functors[G.t.map[gamma]],
                      a.arr_map[gamma * mK + K.unit], name=f"â({gamma})")
        try:
            validate_nat(N)
        except NatTransfViolation as e:
            raise ActionAxiomViolation(str(e), witness={'gamma': gamma}) from e
        nats.append(N)

    identity = identity_functor(K)
    if not functors_equal(functors[G.e0], identity):
        raise ActionAxiomViolation("â(e₀) ≠ id")
    if not nats_equal(nats[G.e1], identity_nat(identity)):
        raise ActionAxiomViolation("â(e₁) ≠ id_id")

    T0, T1 = G.G0.mul_table, G.G1.mul_table
    for x in range(n0):
        for y in range(n0):
            if not functors_equal(compose_functors(functors[x], functors[y]), functors[T0[x, y]]):
                raise ActionAxiomViolation("â(x·y) ≠ â(x)∘â(y)", witness={'x': x, 'y': y})
    for g2 in range(n1):
        for g1 in range(n1):
            if not nats_equal(horizontal_compose(nats[g2], nats[g1]), nats[T1[g2, g1]]):
                raise ActionAxiomViolation("â(γ₂·γ₁) ≠ â(γ₂)∘ₕâ(γ₁)", witness={'gamma2': g2, 'gamma1': g1})

    laws = {
        'naturality_pairs': n1 * mK,
        'functor_products': n0 * n0,
        'horizontal_products': n1 * n1,
    }
    logger.info(f"Homomorphisme â vérifié : {laws}")
    return TwoGroupHom(functors, nats, laws)


def left_regular(G: Internal2Group) -> TwoGroupHom:
    """L_x(σ) = 1_x·σ, L_γ(a) = γ·1_a ; vérifie aussi L_x∘L_{x⁻¹} = id."""
    L = action_to_hom(multiplication_action(G))
    identity = identity_functor(L.functors[0].dom)
    for x in range(G.G0.order):
        if not functors_equal(compose_functors(L.functors[x], L.functors[G.G0.inv_table[x]]), identity):
            raise ActionAxiomViolation("L_x∘L_{x⁻¹} ≠ id", witness={'x': x})
    L.laws['inverse_pairs'] = G.G0.order
    return L


def check_middle_four(L: TwoGroupHom, G: Internal2Group, seed: Optional[int] = None) -> Dict[str, Any]:
    """
    Échange (β'∘ᵥβ)∘ₕ(α'∘ᵥα) = (β'∘ₕα')∘ᵥ(β∘ₕα) et associativité de ∘ₕ
    sur les transformations L_γ ; exhaustif sous les plafonds MIDDLE_FOUR_* de config.
    """
    pairs = G.g2_pairs
    n1 = G.G1.order
    nats = L.nats
    exhaustive = (n1 <= config.MIDDLE_FOUR_EXHAUSTIVE_ARROWS
                  and len(pairs) <= config.MIDDLE_FOUR_EXHAUSTIVE_PAIRS)
    rng = np.random.default_rng(config.DEFAULT_SEED if seed is None else seed)

    if exhaustive:
        quads = [(p, q) for p in range(len(pairs)) for q in range(len(pairs))]
        triples = list(itertools.product(range(n1), repeat=3))
    else:
        quads = [tuple(v) for v in rng.integers(0, len(pairs), size=(config.MIDDLE_FOUR_SAMPLES, 2))]
        triples = [tuple(v) for v in rng.integers(0, n1, size=(config.MIDDLE_FOUR_SAMPLES, 3))]

    violations = []
    for p, q in quads:
        alpha_p, alpha = (nats[i] for i in pairs[p])
        beta_p, beta = (nats[i] for i in pairs[q])
        lhs = horizontal_compose(vertical_compose(beta_p, beta), vertical_compose(alpha_p, alpha))
        rhs = vertical_compose(horizontal_compose(beta_p, alpha_p), horizontal_compose(beta, alpha))
        if not nats_equal(lhs, rhs):
            violations.append({'alpha_pair': pairs[p].tolist(), 'beta_pair': pairs[q].tolist()})

    assoc_violations = 0
    for i, j, k in triples:
        lhs = horizontal_compose(horizontal_compose(nats[i], nats[j]), nats[k])
        rhs = horizontal_compose(nats[i], horizontal_compose(nats[j], nats[k]))
        if not nats_equal(lhs, rhs):
            assoc_violations += 1

    return {
        'law': 'middle-four-exchange',
        'exhaustive': exhaustive,
        'checked': len(quads) + len(triples),
        'violations': len(violations) + assoc_violations,
        'witnesses': violations[:config.MAX_WITNESSES],
        'passed': not violations and assoc_violations == 0,
    }
