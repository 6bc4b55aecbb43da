import dataclasses
import unittest

import numpy as np

from errors import (
    GroupTableError,
    NotAssociative,
    NoIdentity,
    NoInverse,
    NotHomomorphism,
    CrossedModuleAxiomViolation,
    NotComposable,
)
from finite_core import (
    build_group,
    cyclic_group,
    trivial_group,
    symmetric_group,
    group_from_permutations,
    direct_product,
    subgroup,
    build_hom,
    GroupHom,
    CrossedModule,
    build_crossed_module,
    validate_crossed_module,
    two_group_from_crossed_module,
    source_kernel_iso,
    check_interchange,
    compose_via_multiplication,
    check_composition_via_multiplication,
    action_groupoid_iso,
)


def z2_z2_crossed_module():
    Z2 = cyclic_group(2)
    return build_crossed_module(Z2, Z2, [0, 1], [[0, 1], [0, 1]], name='f1')


def z3_z2_crossed_module():
    return build_crossed_module(cyclic_group(3), cyclic_group(2), [0, 0, 0], [[0, 1, 2], [0, 2, 1]], name='f2')


class TestFiniteGroups(unittest.TestCase):
    def test_cyclic_group(self):
        """Test de la construction de Z/n."""
        Z5 = cyclic_group(5)
        self.assertEqual(Z5.order, 5)
        self.assertEqual(Z5.identity, 0)
        self.assertEqual(Z5.inverse(2), 3)
        self.assertTrue(Z5.is_abelian())

    def test_trivial_group(self):
        """Test du groupe trivial."""
        T = trivial_group()
        self.assertEqual(T.order, 1)
        self.assertEqual(T.multiply(0, 0), 0)

    def test_symmetric_group_not_abelian(self):
        """Test de S3 : ordre 6, non abélien."""
        S3, elements = symmetric_group(3)
        self.assertEqual(S3.order, 6)
        self.assertEqual(elements[S3.identity], (0, 1, 2))
        self.assertFalse(S3.is_abelian())

    def test_group_from_permutations(self):
        """Test du groupe engendré par un 4-cycle."""
        C4, elements = group_from_permutations([[1, 2, 3, 0]])
        self.assertEqual(C4.order, 4)
        self.assertTrue(C4.is_abelian())

    def test_non_associative_table(self):
        """Test d'une table non associative : le témoin est un triplet."""
        table = [[0, 1, 2], [1, 0, 0], [2, 0, 0]]
        with self.assertRaises(NotAssociative) as ctx:
            build_group(table)
        self.assertEqual(len(ctx.exception.witness), 3)

    def test_no_identity(self):
        """Test d'une table associative sans neutre."""
        with self.assertRaises(NoIdentity):
            build_group([[0, 0], [0, 0]])

    def test_no_inverse(self):
        """Test du monoïde {0, 1} pour le produit : 0 n'a pas d'inverse."""
        with self.assertRaises(NoInverse) as ctx:
            build_group([[0, 0], [0, 1]])
        self.assertEqual(ctx.exception.witness, 0)

    def test_malformed_table(self):
        """Test des tables non carrées ou hors bornes."""
        with self.assertRaises(GroupTableError):
            build_group([[0, 1]])
        with self.assertRaises(GroupTableError):
            build_group([[0, 2], [2, 0]])

    def test_direct_product(self):
        """Test de Z2×Z3 ≅ Z6 (abélien d'ordre 6)."""
        P = direct_product(cyclic_group(2), cyclic_group(3))
        self.assertEqual(P.order, 6)
        self.assertTrue(P.is_abelian())
        # (1, 1)·(1, 2) = (0, 0)
        self.assertEqual(P.multiply(1 * 3 + 1, 1 * 3 + 2), 0)

    def test_subgroup(self):
        """Test du sous-groupe {0, 2} de Z4."""
        H = subgroup(cyclic_group(4), [0, 2])
        self.assertEqual(H.order, 2)
        with self.assertRaises(GroupTableError):
            subgroup(cyclic_group(4), [0, 1])


class TestHomomorphisms(unittest.TestCase):
    def setUp(self):
        self.Z4 = cyclic_group(4)
        self.Z2 = cyclic_group(2)

    def test_reduction_mod_2(self):
        """Test de Z4 → Z2, noyau {0, 2}."""
        hom = build_hom(self.Z4, self.Z2, [0, 1, 0, 1])
        self.assertEqual(hom(3), 1)
        np.testing.assert_array_equal(hom.kernel(), [0, 2])
        self.assertFalse(hom.is_injective())

    def test_not_a_homomorphism(self):
        """Test d'une application qui ne respecte pas le produit."""
        with self.assertRaises(NotHomomorphism):
            build_hom(self.Z4, self.Z2, [0, 1, 1, 0])


class TestCrossedModules(unittest.TestCase):
    def test_valid_crossed_modules(self):
        """Test des modules croisés F1 et F2."""
        self.assertEqual(z2_z2_crossed_module().H.order, 2)
        cm = z3_z2_crossed_module()
        self.assertEqual(cm.act(1, 1), 2)

    def test_peiffer_violation(self):
        """Test de S3 → 1 avec action triviale : identité de Peiffer violée (H non abélien)."""
        S3, _ = symmetric_group(3)
        with self.assertRaises(CrossedModuleAxiomViolation) as ctx:
            build_crossed_module(S3, trivial_group(), [0] * 6, [list(range(6))])
        self.assertIn("Peiffer", str(ctx.exception))

    def test_action_not_automorphism(self):
        """Test d'une action qui n'est pas un automorphisme."""
        with self.assertRaises(CrossedModuleAxiomViolation):
            build_crossed_module(cyclic_group(3), cyclic_group(2), [0, 0, 0], [[0, 1, 2], [1, 0, 2]])

    def test_unvalidated_crossed_module_rejected(self):
        """Test : un module croisé construit sans validation est refusé par la construction du 2-groupe."""
        S3, _ = symmetric_group(3)
        T = trivial_group()
        cm = CrossedModule(S3, T, GroupHom(S3, T, np.zeros(6, dtype=np.int64)), np.arange(6)[None, :], name='s3')
        with self.assertRaises(CrossedModuleAxiomViolation) as ctx:
            two_group_from_crossed_module(cm)
        self.assertIn("Peiffer", str(ctx.exception))

    def test_boundary_not_homomorphism(self):
        """Test d'un ∂ qui ne respecte pas le produit dans un module croisé construit à la main."""
        Z3, Z2 = cyclic_group(3), cyclic_group(2)
        cm = CrossedModule(Z3, Z2, GroupHom(Z3, Z2, np.array([0, 1, 1])), np.array([[0, 1, 2], [0, 2, 1]]))
        with self.assertRaises(CrossedModuleAxiomViolation):
            validate_crossed_module(cm)
        with self.assertRaises(CrossedModuleAxiomViolation):
            two_group_from_crossed_module(cm)


class TestInternal2Groups(unittest.TestCase):
    def setUp(self):
        self.cm1 = z2_z2_crossed_module()
        self.cm2 = z3_z2_crossed_module()
        self.G1 = two_group_from_crossed_module(self.cm1)
        self.G2 = two_group_from_crossed_module(self.cm2)

    def test_orders(self):
        """Test des ordres : |G1| = 4 pour F1, 6 (non abélien) pour F2."""
        self.assertEqual(self.G1.G1.order, 4)
        self.assertEqual(self.G1.G2.order, 8)
        self.assertEqual(self.G2.G1.order, 6)
        self.assertFalse(self.G2.G1.is_abelian())
        self.assertEqual(self.G2.G2.order, 18)

    def test_interchange_exhaustive(self):
        """Test de la loi d'échange exhaustive sur F1 et F2."""
        r1 = check_interchange(self.G1)
        self.assertTrue(r1['passed'])
        self.assertTrue(r1['exhaustive'])
        self.assertEqual(r1['checked'], 64)
        r2 = check_interchange(self.G2)
        self.assertTrue(r2['passed'])
        self.assertEqual(r2['checked'], 324)
        self.assertEqual(r2['violations'], 0)

    def test_interchange_corrupted(self):
        """Test d'une composition corrompue : violations avec quadruplet témoin."""
        corrupted = self.G2.comp.map.copy()
        k = int(np.flatnonzero(corrupted != self.G2.e1)[0])
        corrupted[k] = (corrupted[k] + 1) % self.G2.G1.order
        comp = GroupHom(self.G2.G2, self.G2.G1, corrupted, name='comp')
        report = check_interchange(dataclasses.replace(self.G2, comp=comp))
        self.assertFalse(report['passed'])
        self.assertGreater(report['violations'], 0)
        self.assertEqual(set(report['witnesses'][0]) - {'lhs', 'rhs'}, {'sigma2', 'sigma1', 'gamma2', 'gamma1'})

    def test_composition_via_multiplication(self):
        """Test de σ∗γ = γ·1_{s(σ)⁻¹}·σ sur toutes les paires de F2."""
        report = check_composition_via_multiplication(self.G2)
        self.assertEqual(report['matches'], 18)
        self.assertEqual(report['checked'], 18)
        sigma, gamma = (int(v) for v in self.G2.g2_pairs[5])
        self.assertEqual(compose_via_multiplication(self.G2, sigma, gamma), self.G2.compose(sigma, gamma))

    def test_not_composable(self):
        """Test de NotComposable sur une paire non composable de F1."""
        # (0, 1) a pour source 1, (0, 0) a pour but 0
        with self.assertRaises(NotComposable):
            self.G1.compose(1, 0)
        with self.assertRaises(NotComposable):
            compose_via_multiplication(self.G1, 1, 0)

    def test_groupoid_inverse(self):
        """Test de l'inverse pour ∗."""
        for gamma in range(self.G2.G1.order):
            inv = self.G2.groupoid_inverse(gamma)
            self.assertEqual(self.G2.compose(inv, gamma), int(self.G2.unit.map[self.G2.s.map[gamma]]))

    def test_source_kernel_iso(self):
        """Test de ker(s) ≅ H."""
        hom = source_kernel_iso(self.cm2, self.G2)
        self.assertTrue(hom.is_injective())
        self.assertEqual(len(self.G2.s.kernel()), 3)

    def test_action_groupoid_iso(self):
        """Test de la forme groupoïde d'action sur F2 : bijective, action ◇ triviale."""
        iso = action_groupoid_iso(self.G2)
        self.assertTrue(iso.verified)
        self.assertEqual(iso.K.order, 3)
        self.assertTrue(iso.action_is_trivial)
        self.assertEqual(len(np.unique(iso.phi1[:, 0] * 2 + iso.phi1[:, 1])), 6)

    def test_action_groupoid_nontrivial(self):
        """Test sur F1 : ∂ = id, l'action ◇ n'est pas triviale."""
        iso = action_groupoid_iso(self.G1)
        self.assertTrue(iso.verified)
        self.assertFalse(iso.action_is_trivial)

    def test_one_object_fixture(self):
        """Test de F6 : G0 trivial, K = G1."""
        Z4 = cyclic_group(4)
        cm = build_crossed_module(Z4, trivial_group(), [0, 0, 0, 0], [[0, 1, 2, 3]], name='f6')
        G = two_group_from_crossed_module(cm)
        iso = action_groupoid_iso(G)
        self.assertEqual(iso.K.order, G.G1.order)
        self.assertTrue(check_interchange(G)['passed'])


if __name__ == '__main__':
    unittest.main()
