import numpy as np
import pytest

from errors import DimensionMismatch, ExpmOverflow, NumericalInstability, VerificationError
from matrix_lie import (
    SmoothMap,
    TangentVector,
    adjoint_matrix,
    affine_line_group,
    affine_linear,
    block_diagonal,
    conjugation_map,
    differential,
    expm,
    from_descriptor,
    identity_map,
    lie_functor,
    path_derivative,
    reset_differential_stats,
    sample_matrices,
    snapshot_differential_stats,
    special_orthogonal,
)


def test_expm_rotation():
    """Test de exp(θ·J) = rotation d'angle θ."""
    theta = 0.7
    R = expm(np.array([[0.0, -theta], [theta, 0.0]]))
    expected = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    np.testing.assert_allclose(R, expected, atol=1e-12)


def test_expm_inverse():
    """Test de exp(X)·exp(−X) = I."""
    X = np.array([[0.3, 1.2], [-0.4, 0.1]])
    np.testing.assert_allclose(expm(X) @ expm(-X), np.eye(2), atol=1e-10)


def test_expm_overflow():
    """Test du refus d'une norme hors domaine."""
    with pytest.raises(ExpmOverflow):
        expm(np.diag([800.0, 0.0]))


def test_expm_non_finite():
    with pytest.raises(ValueError):
        expm(np.array([[np.nan, 0.0], [0.0, 0.0]]))


def test_sampling_is_deterministic():
    """Test : même graine, mêmes échantillons ; graine différente, échantillons différents."""
    H = special_orthogonal(3)
    a = sample_matrices(H, 4, seed=3)
    b = sample_matrices(H, 4, seed=3)
    c = sample_matrices(H, 4, seed=4)
    for M, N in zip(a, b):
        np.testing.assert_array_equal(M, N)
    assert not np.allclose(a[0], c[0])
    assert all(H.contains(M) for M in a)


def test_richardson_smooth_path():
    """Test de la dérivée de sin en 0."""
    reset_differential_stats()
    d = path_derivative(lambda tau: np.array([np.sin(tau)]))
    np.testing.assert_allclose(d, [1.0], atol=1e-9)
    assert snapshot_differential_stats() == {'evaluations': 1, 'richardson_failures': 0}


def test_richardson_rejects_discontinuity():
    """Test : un saut en 0 fait diverger les estimations h et h/2."""
    reset_differential_stats()
    with pytest.raises(NumericalInstability):
        path_derivative(lambda tau: np.array([np.sign(tau)]))
    assert snapshot_differential_stats()['richardson_failures'] == 1


def test_structure_constants_affine():
    """Test de [E11, E12] = E12 dans aff(1)."""
    C = affine_line_group().structure_constants()
    assert C[1, 0, 1] == pytest.approx(1.0)
    assert C[1, 1, 0] == pytest.approx(-1.0)
    assert np.count_nonzero(np.abs(C) > 1e-12) == 2


def test_lie_functor_of_conjugation_is_adjoint():
    """Test de T_e(conj_g) = Ad_g sur Aff(1)."""
    H = affine_line_group()
    for g in sample_matrices(H, 3, seed=7):
        M = lie_functor(conjugation_map(H, g))
        np.testing.assert_allclose(M, adjoint_matrix(H, g), atol=1e-4)


def test_differential_stays_tangent():
    """Test : l'image d'un vecteur tangent par un homomorphisme reste tangente."""
    H = special_orthogonal(2)
    D = block_diagonal(H)
    diag = SmoothMap(H, D, lambda M: np.block([[M, np.zeros((2, 2))], [np.zeros((2, 2)), M]]), name='diag')
    g = sample_matrices(H, 1, seed=2)[0]
    v = TangentVector(H, g, g @ H.basis[0])
    image = differential(diag, v)
    np.testing.assert_allclose(image.coords(), [1.0, 1.0], atol=1e-6)



def test_differential_identity_map():
    """Test : T(id) laisse le vecteur tangent inchangé."""
    H = affine_line_group()
    g = sample_matrices(H, 1, seed=11)[0]
    v = TangentVector(H, g, g @ H.basis[1])
    image = differential(identity_map(H), v)
    np.testing.assert_allclose(image.base, g, atol=1e-12)
    np.testing.assert_allclose(image.dir, v.dir, atol=1e-8)


def test_differential_left_multiplication():
    """Test : T(L_g)(v) = g·v pour la multiplication à gauche."""
    H = affine_line_group()
    g, x = sample_matrices(H, 2, seed=12)
    left = SmoothMap(H, H, lambda M: g @ M, name='L_g')
    v = TangentVector(H, x, x @ (0.7 * H.basis[0] - 1.3 * H.basis[1]))
    image = differential(left, v)
    np.testing.assert_allclose(image.base, g @ x, atol=1e-12)
    np.testing.assert_allclose(image.dir, g @ v.dir, atol=1e-8)


def test_differential_constant_map():
    """Test : la différentielle d'une application constante est nulle."""
    H = special_orthogonal(2)
    c, x = sample_matrices(H, 2, seed=13)
    constant = SmoothMap(H, H, lambda M: c, name='const')
    image = differential(constant, TangentVector(H, x, x @ H.basis[0]))
    np.testing.assert_array_equal(image.base, c)
    np.testing.assert_allclose(image.dir, np.zeros((2, 2)), atol=1e-12)


def test_differential_chain_rule():
    """Test de T(f∘g) = Tf∘Tg sur Aff(1)."""
    H = affine_line_group()
    g1, g2, x = sample_matrices(H, 3, seed=14)
    f = SmoothMap(H, H, lambda M: g2 @ M, name='L')
    g = conjugation_map(H, g1)
    v = TangentVector(H, x, x @ (H.basis[0] + 0.5 * H.basis[1]))
    direct = differential(f.compose(g), v)
    chained = differential(f, differential(g, v))
    np.testing.assert_allclose(direct.base, chained.base, atol=1e-12)
    np.testing.assert_allclose(direct.dir, chained.dir, atol=1e-7)


def test_lie_functor_of_composition():
    """Test : le foncteur de Lie d'un composé est le produit des matrices."""
    H = affine_line_group()
    g1, g2 = sample_matrices(H, 2, seed=15)
    f, g = conjugation_map(H, g2), conjugation_map(H, g1)
    np.testing.assert_allclose(lie_functor(f.compose(g)), lie_functor(f) @ lie_functor(g), atol=1e-6)
    np.testing.assert_allclose(lie_functor(identity_map(H)), np.eye(H.dim), atol=1e-8)

def test_affine_linear_dimension():
    """Test de ℝ²⋊SO(2) : dimension 3, plongé en 3×3."""
    H = affine_linear(special_orthogonal(2))
    assert H.dim == 3
    assert H.ambient_dim == 3
    assert all(H.contains(M) for M in sample_matrices(H, 3, seed=0))


def test_from_coords_wrong_shape():
    with pytest.raises(DimensionMismatch):
        affine_line_group().from_coords([1.0, 2.0, 3.0])


def test_from_descriptor_nested():
    """Test d'un descripteur imbriqué."""
    H = from_descriptor({'kind': 'block_diagonal', 'of': {'kind': 'affine'}})
    assert H.dim == 4
    assert H.ambient_dim == 4


def test_from_descriptor_unknown_kind():
    with pytest.raises(ValueError):
        from_descriptor({'kind': 'lorentz'})


def test_from_descriptor_bad_basis():
    """Test des bases explicites invalides : forme, liberté, fermeture."""
    E11 = [[1.0, 0.0], [0.0, 0.0]]
    E12 = [[0.0, 1.0], [0.0, 0.0]]
    E21 = [[0.0, 0.0], [1.0, 0.0]]
    with pytest.raises(DimensionMismatch):
        from_descriptor({'kind': 'affine', 'basis': [E11]})
    with pytest.raises(DimensionMismatch):
        from_descriptor({'kind': 'affine', 'basis': [E11, E11]})
    with pytest.raises(VerificationError):
        from_descriptor({'kind': 'affine', 'basis': [E12, E21]})
