import unittest
from unittest import mock

import numpy as np

from errors import (
    CapExceeded,
    FunctorViolation,
    NatTransfViolation,
    NotComposable,
    ActionAxiomViolation,
    GroupoidAxiomViolation,
)
from finite_core import cyclic_group, build_crossed_module, two_group_from_crossed_module
from gpd_cat import (
    FiniteGroupoid,
    GpdFunctor,
    NatTransf,
    Action2,
    validate_groupoid,
    groupoid_from_2group,
    groupoid_from_group,
    discrete_groupoid,
    product_groupoid,
    validate_functor,
    identity_functor,
    compose_functors,
    functors_equal,
    is_invertible,
    validate_nat,
    identity_nat,
    nats_equal,
    vertical_compose,
    horizontal_compose,
    whisker_left,
    whisker_right,
    aut_2group,
    validate_action,
    multiplication_action,
    trivial_action,
    action_to_hom,
    left_regular,
    check_middle_four,
)


def f2_two_group():
    cm = build_crossed_module(cyclic_group(3), cyclic_group(2), [0, 0, 0], [[0, 1, 2], [0, 2, 1]], name='f2')
    return two_group_from_crossed_module(cm)


def f1_two_group():
    Z2 = cyclic_group(2)
    return two_group_from_crossed_module(build_crossed_module(Z2, Z2, [0, 1], [[0, 1], [0, 1]], name='f1'))


class TestGroupoids(unittest.TestCase):
    def test_groupoid_from_2group(self):
        """Test du groupoïde sous-jacent de F2."""
        K = groupoid_from_2group(f2_two_group())
        validate_groupoid(K)
        self.assertEqual(K.n_objects, 2)
        self.assertEqual(K.n_arrows, 6)

    def test_groupoid_from_group(self):
        """Test du groupoïde à un objet BZ3."""
        K = groupoid_from_group(cyclic_group(3))
        self.assertEqual(K.n_objects, 1)
        self.assertEqual(K.compose(1, 2), 0)

    def test_discrete_groupoid(self):
        """Test du groupoïde discret : seules les unités se composent."""
        K = discrete_groupoid(3)
        validate_groupoid(K)
        with self.assertRaises(NotComposable):
            K.compose(0, 1)

    def test_product_groupoid(self):
        """Test du produit de groupoïdes."""
        P = product_groupoid(discrete_groupoid(2), groupoid_from_group(cyclic_group(3)))
        validate_groupoid(P)
        self.assertEqual(P.n_objects, 2)
        self.assertEqual(P.n_arrows, 6)

    def test_broken_groupoid(self):
        """Test d'une table de composition sans loi d'unité."""
        K = groupoid_from_group(cyclic_group(2))
        broken = FiniteGroupoid(1, K.s, K.t, K.unit, np.array([[1, 0], [0, 1]]), K.inv, name='cassé')
        with self.assertRaises(GroupoidAxiomViolation):
            validate_groupoid(broken)


class TestFunctorsAndNats(unittest.TestCase):
    def setUp(self):
        self.K = groupoid_from_group(cyclic_group(3))
        # Automorphisme k ↦ -k de BZ3
        self.neg = GpdFunctor(self.K, self.K, np.array([0]), np.array([0, 2, 1]), name='neg')
        self.id = identity_functor(self.K)

    def test_functor_composition(self):
        """Test de neg∘neg = id."""
        validate_functor(self.neg)
        self.assertTrue(functors_equal(compose_functors(self.neg, self.neg), self.id))
        self.assertTrue(is_invertible(self.neg))

    def test_not_a_functor(self):
        """Test d'une application de flèches qui ne respecte pas la composition."""
        bad = GpdFunctor(self.K, self.K, np.array([0]), np.array([0, 1, 1]), name='mauvais')
        with self.assertRaises(FunctorViolation):
            validate_functor(bad)

    def test_nat_transf_abelian(self):
        """Test : dans BZ3 toute composante k donne id ⇒ id (groupe abélien)."""
        for k in range(3):
            validate_nat(NatTransf(self.id, self.id, np.array([k])))

    def test_nat_transf_not_natural(self):
        """Test : la composante 1 ne donne pas de transformation naturelle id ⇒ neg."""
        with self.assertRaises(NatTransfViolation):
            validate_nat(NatTransf(self.id, self.neg, np.array([1])))

    def test_vertical_and_horizontal(self):
        """Test des compositions verticale et horizontale sur BZ3."""
        a = NatTransf(self.id, self.id, np.array([1]), name='a')
        b = NatTransf(self.id, self.id, np.array([2]), name='b')
        self.assertEqual(int(vertical_compose(b, a).component[0]), 0)
        self.assertEqual(int(horizontal_compose(b, a).component[0]), 0)
        self.assertTrue(nats_equal(vertical_compose(identity_nat(self.id), a), a))

    def test_vertical_not_composable(self):
        """Test de NotComposable quand src(β) ≠ dst(α)."""
        a = NatTransf(self.id, self.id, np.array([1]))
        c = identity_nat(self.neg)
        with self.assertRaises(NotComposable):
            vertical_compose(c, a)

    def test_whiskering(self):
        """Test de neg·α : la composante est envoyée par neg."""
        a = NatTransf(self.id, self.id, np.array([1]), name='a')
        left = whisker_left(self.neg, a)
        self.assertEqual(int(left.component[0]), 2)
        right = whisker_right(a, self.neg)
        self.assertEqual(int(right.component[0]), 1)
        # β∘ₕα = (β·h)∘ᵥ(k·α) avec k = h = id
        self.assertTrue(nats_equal(horizontal_compose(a, a), vertical_compose(whisker_right(a, self.id),
                                                                               whisker_left(self.id, a))))


class TestAut2Group(unittest.TestCase):
    def test_discrete_two_objects(self):
        """Test de Aut(discret2) : Aut0 ≅ S2, seules les transformations identités."""
        aut = aut_2group(discrete_groupoid(2))
        self.assertEqual(aut.two_group.G0.order, 2)
        self.assertEqual(aut.two_group.G1.order, 2)

    def test_one_object_z3(self):
        """Test de Aut(BZ3) : deux automorphismes, trois composantes chacun."""
        aut = aut_2group(groupoid_from_group(cyclic_group(3)))
        self.assertEqual(aut.two_group.G0.order, 2)
        self.assertEqual(aut.two_group.G1.order, 6)

    def test_cap_exceeded(self):
        """Test du plafond d'énumération sur 10 objets."""
        with self.assertRaises(CapExceeded):
            aut_2group(discrete_groupoid(10), cap=100)


class TestActions(unittest.TestCase):
    def setUp(self):
        self.G = f2_two_group()

    def test_multiplication_action(self):
        """Test des axiomes de l'action par multiplication."""
        validate_action(multiplication_action(self.G))

    def test_trivial_action(self):
        """Test de l'action triviale sur BZ3 : â(γ) est l'identité."""
        hom = action_to_hom(trivial_action(self.G, groupoid_from_group(cyclic_group(3))))
        for nat in hom.nats:
            self.assertEqual(int(nat.component[0]), 0)

    def test_corrupted_action(self):
        """Test d'une action dont la loi d'unité est cassée."""
        A = multiplication_action(self.G)
        arr = A.a.arr_map.copy()
        mK = A.K.n_arrows
        arr[self.G.e1 * mK + 1], arr[self.G.e1 * mK + 2] = arr[self.G.e1 * mK + 2], arr[self.G.e1 * mK + 1]
        broken = Action2(self.G, A.K, GpdFunctor(A.a.dom, A.a.cod, A.a.obj_map, arr, name='cassé'))
        with self.assertRaises(ActionAxiomViolation) as ctx:
            validate_action(broken)
        self.assertIsNotNone(ctx.exception.witness)

    def test_left_regular_f2(self):
        """Test des lois d'homomorphisme exhaustives de la représentation régulière sur F2."""
        L = left_regular(self.G)
        self.assertEqual(len(L.functors), 2)
        self.assertEqual(len(L.nats), 6)
        self.assertEqual(L.laws['horizontal_products'], 36)
        self.assertEqual(L.laws['inverse_pairs'], 2)
        K = L.functors[0].dom
        self.assertTrue(nats_equal(L.nats[self.G.e1], identity_nat(identity_functor(K))))

    def test_middle_four_exhaustive(self):
        """Test de la loi d'échange entre ∘ₕ et ∘ᵥ sur F1 et F2."""
        for G in (f1_two_group(), self.G):
            report = check_middle_four(left_regular(G), G)
            self.assertTrue(report['exhaustive'])
            self.assertTrue(report['passed'])
            self.assertEqual(report['violations'], 0)

    def test_middle_four_sampled_beyond_caps(self):
        """Test : au-delà des plafonds de config, la loi d'échange est tirée au hasard."""
        with mock.patch('config.MIDDLE_FOUR_EXHAUSTIVE_ARROWS', 1), mock.patch('config.MIDDLE_FOUR_SAMPLES', 10):
            report = check_middle_four(left_regular(self.G), self.G, seed=3)
        self.assertFalse(report['exhaustive'])
        self.assertEqual(report['checked'], 20)
        self.assertTrue(report['passed'])


if __name__ == '__main__':
    unittest.main()
