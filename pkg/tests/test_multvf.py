import unittest

import numpy as np
import scipy.linalg

from errors import NotEquivariant, RelatednessViolation
from matrix_lie import affine_line_group, special_orthogonal, sample_matrices
from lie2 import InnerBlockModel, ell
from multvf import (
    TwoVectorSpaceMap,
    p,
    q_arrow,
    verify_multiplicative,
    unit_arrow,
    vertical_compose_arrows,
    J_map,
    j_section,
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
    kernel_section,
    inner_field,
    control_field,
    perturb_arrow_component,
    limit_factorize,
    map_through_p,
)


class TestMultiplicativeFieldsAffine(unittest.TestCase):
    """Champs p(a) sur le 2-groupe intérieur de Aff(1)."""

    @classmethod
    def setUpClass(cls):
        cls.G = InnerBlockModel(affine_line_group()).to_lie2group('f3')
        cls.L = cls.G.algebra
        cls.points = sample_matrices(cls.G.G0, 3, seed=5)
        cls.arrows = sample_matrices(cls.G.G1, 3, seed=6)

    def test_p_object_is_multiplicative(self):
        """Test : p(a) vérifie section, relations et fonctorialité."""
        certificate = verify_multiplicative(p(self.L, [0.4, -1.1], 0), n_samples=4, seed=0)
        self.assertTrue(certificate.passed, certificate.to_dict())

    def test_p_arrow_is_natural(self):
        """Test : p(b) est une flèche de X(G) de p(ds b) vers p(dt b)."""
        alpha = p(self.L, [0.3, 0.0, -0.5, 1.0], 1)
        certificate = alpha.validate(n_samples=4, seed=1)
        self.assertTrue(certificate.passed, certificate.to_dict())

    def test_unit_arrow_vertical(self):
        """Test de 1_v ∘ᵥ α = α."""
        alpha = p(self.L, [0.3, 0.0, -0.5, 1.0], 1)
        composite = vertical_compose_arrows(unit_arrow(alpha.dst), alpha)
        for x in self.points:
            np.testing.assert_allclose(composite(x), alpha(x), atol=1e-6)

    def test_J_inverts_q(self):
        """Test : J(p(b)) est le champ invariant à gauche ℓ(b)."""
        b = np.array([0.3, 0.0, -0.5, 1.0])
        J = J_map(p(self.L, b, 1))
        B = self.G.G1.from_coords(b)
        for gamma in self.arrows:
            np.testing.assert_allclose(J(gamma), gamma @ B, atol=1e-6)

    def test_bracket_objects(self):
        """Test de [p(a), p(a')] = p([a, a']) en v0."""
        a, b = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        bracket = bracket_objects(p(self.L, a, 0), p(self.L, b, 0))
        expected = p(self.L, self.L.bracket(0, a, b), 0)
        for x in self.points:
            np.testing.assert_allclose(bracket.v0(x), expected.v0(x), atol=1e-4)

    def test_bracket_arrows(self):
        """Test de J([α, β]) = [J(α), J(β)]."""
        alpha = p(self.L, [1.0, 0.0, 0.0, 0.0], 1)
        beta = p(self.L, [0.0, 1.0, 0.0, 0.0], 1)
        self.assertLessEqual(bracket_arrows_residual(alpha, beta, self.arrows), 1e-4)

    def test_invariance_of_p(self):
        """Test : les champs p(a) et p(b) sont λ-invariants."""
        obj, morph = invariance_residual(p(self.L, [0.4, -1.1], 0), n_samples=4, seed=2)
        self.assertLessEqual(max(obj, morph), 1e-6)
        self.assertLessEqual(arrow_invariance_residual(p(self.L, [0.3, 0.0, -0.5, 1.0], 1), 4, seed=2), 1e-6)

    def test_lambda_laws(self):
        """Test de λ(x·y) = λ(x)∘λ(y) et de la forme close de λ(γ)."""
        v = p(self.L, [0.4, -1.1], 0)
        self.assertLessEqual(lambda_homomorphism_residual(v, self.points, self.points), 1e-6)
        self.assertLessEqual(lambda_whiskered_residual(v, self.arrows[:2], self.points[:2]), 1e-6)

    def test_control_is_not_invariant(self):
        """Test : le champ de contrôle est multiplicatif mais ni invariant ni reconstruit."""
        control = control_field(self.L, [1.0, 0.0])
        certificate = verify_multiplicative(control, n_samples=4, seed=3)
        self.assertLessEqual(certificate.residuals['functoriality'], 1e-5)
        obj, _ = invariance_residual(control, n_samples=4, seed=4)
        self.assertGreater(obj, 1e-2)
        self.assertGreater(reconstruction_residual(control, self.L, self.points, self.arrows), 1e-5)

    def test_reconstruction_of_p(self):
        v = p(self.L, [0.4, -1.1], 0)
        self.assertLessEqual(reconstruction_residual(v, self.L, self.points, self.arrows), 1e-8)

    def test_j_section_dual_formula(self):
        """Test : j(ζ)(γ) = γ·1_{tγ}⁻¹·ζ(tγ) coïncide avec TR_γ(ζ(tγ)) dérivé numériquement."""
        zeta = kernel_section(self.L)
        self.assertLessEqual(j_section_residual(zeta, self.arrows), 1e-6)
        j = j_section(zeta)
        for x in self.points:
            np.testing.assert_allclose(j(self.G.unit(x)), zeta(x), atol=1e-10)

    def test_lambda_horizontal_and_naturality(self):
        """Test de λ(γ₂·γ₁) = λ(γ₂)∘ₕλ(γ₁) et de la naturalité de λ(γ) en α."""
        v = control_field(self.L, [1.0, 0.0])
        alpha = p(self.L, [1.0, 0.0, 0.0, 0.0], 1)
        gammas = sample_matrices(self.G.G1, 4, seed=71)
        zs = sample_matrices(self.G.G0, 4, seed=72)
        self.assertLessEqual(lambda_horizontal_residual(v, gammas, zs), 1e-6)
        self.assertLessEqual(lambda_naturality_residual(alpha, gammas, zs), 1e-6)

    def test_constant_inner_field_is_p(self):
        """Test : un champ intérieur de poids constant est invariant et égal à p(v0(e₀))."""
        coords = scipy.linalg.null_space(self.L.ds)[:, 0]
        w = inner_field(kernel_section(self.L, coords, lambda x: 1.0))
        obj, morph = invariance_residual(w, n_samples=4, seed=8)
        self.assertLessEqual(max(obj, morph), 1e-7)
        self.assertLessEqual(reconstruction_residual(w, self.L, self.points, self.arrows), 1e-5)

    def test_limit_factorization_two_dimensional(self):
        """Test de la factorisation de ψ = p∘M pour 𝔥 discret de dimension 2."""
        M0 = np.random.default_rng(9).uniform(-1.0, 1.0, size=(2, 2)) + 2.0 * np.eye(2)
        result = limit_factorize(map_through_p(self.L, M0), self.L, n_samples=4, seed=0)
        np.testing.assert_allclose(result.psi_bar0, M0, atol=1e-8)
        np.testing.assert_allclose(result.psi_bar1, self.L.d1 @ M0, atol=1e-8)
        self.assertEqual((result.rank0, result.rank1), (2, 2))
        self.assertTrue(result.unique)

    def test_limit_factorization_of_inclusion(self):
        """Test : pour l'inclusion de 𝔤 lui-même, ψ̄ redonne les matrices identité."""
        psi = map_through_p(self.L, np.eye(2), np.eye(4), hs=self.L.ds, ht=self.L.dt, hu=self.L.d1)
        result = limit_factorize(psi, self.L, n_samples=4, seed=0)
        np.testing.assert_allclose(result.psi_bar0, np.eye(2), atol=1e-8)
        np.testing.assert_allclose(result.psi_bar1, np.eye(4), atol=1e-8)
        self.assertLessEqual(result.structure_residual, 1e-8)
        self.assertLessEqual(result.reconstruction_residual, 1e-6)

    def test_limit_rejects_control(self):
        """Test : ψ atteignant un champ non invariant lève NotEquivariant."""
        control = control_field(self.L, [1.0, 0.0])
        identity = np.eye(1)
        psi = TwoVectorSpaceMap(
            h0_dim=1,
            h1_dim=1,
            psi0=lambda c: float(c[0]) * control,
            psi1=lambda c: float(c[0]) * unit_arrow(control),
            hs=identity,
            ht=identity,
            hu=identity,
        )
        with self.assertRaises(NotEquivariant) as ctx:
            limit_factorize(psi, self.L, n_samples=4, seed=0)
        self.assertEqual(ctx.exception.witness['level'], 0)

    def test_kernel_section_requires_kernel(self):
        """Test : Z hors de ker(ds) est refusé."""
        with self.assertRaises(RelatednessViolation):
            kernel_section(self.L, [0.0, 0.0, 1.0, 0.0])

    def test_q_arrow_endpoints(self):
        """Test : q(α) refuse des extrémités incompatibles avec ds, dt."""
        alpha = ell(self.L, self.G, [1.0, 0.0, 0.0, 0.0], 1)
        zero = ell(self.L, self.G, [0.0, 0.0], 0)
        with self.assertRaises(RelatednessViolation):
            q_arrow(alpha, self.G, zero, zero)


class TestMultiplicativeFieldsSO2(unittest.TestCase):
    """Cas abélien : 2-groupe intérieur de SO(2)."""

    @classmethod
    def setUpClass(cls):
        cls.G = InnerBlockModel(special_orthogonal(2)).to_lie2group('f4')
        cls.L = cls.G.algebra

    def test_perturbation_breaks_functoriality(self):
        """Test : une perturbation de v1 de poids non constant n'est plus multiplicative."""
        direction = self.G.G1.from_coords(scipy.linalg.null_space(self.L.ds)[:, 0])
        perturbed = perturb_arrow_component(p(self.L, [1.0], 0), direction)
        certificate = verify_multiplicative(perturbed, n_samples=4, seed=0)
        self.assertFalse(certificate.passed)

    def test_brackets_vanish(self):
        """Test : sur SO(2) abélien, crochets d'objets et de flèches nuls à 1e-8."""
        points = sample_matrices(self.G.G0, 3, seed=5)
        u, v = p(self.L, [1.0], 0), p(self.L, [-0.6], 0)
        bracket = bracket_objects(u, v)
        for x in points:
            self.assertLessEqual(np.linalg.norm(bracket.v0(x)), 1e-8)
            self.assertLessEqual(np.linalg.norm(bracket.v1(self.G.unit(x))), 1e-8)
        alpha, beta = p(self.L, [1.0, 0.0], 1), p(self.L, [0.0, 1.0], 1)
        arrow = bracket_arrows(alpha, beta, n_samples=4, seed=0)
        for x in points:
            self.assertLessEqual(np.linalg.norm(arrow(x)), 1e-8)

    def test_limit_factorization(self):
        """Test de ψ = p∘ψ̄ pour ψ = p∘M avec 𝔥 discret."""
        M0 = np.array([[2.0]])
        result = limit_factorize(map_through_p(self.L, M0), self.L, n_samples=4, seed=0)
        np.testing.assert_allclose(result.psi_bar0, M0, atol=1e-6)
        self.assertLessEqual(result.reconstruction_residual, 1e-6)
        self.assertLessEqual(result.structure_residual, 1e-5)
        self.assertTrue(result.unique)
        self.assertEqual(result.rank0, 1)


if __name__ == '__main__':
    unittest.main()
