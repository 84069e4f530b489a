import math

import numpy as np
import pytest

from pairabsorb.errors import FamilyMismatchError, NotNormalizedError, ZeroNormError
from pairabsorb.states import (
    ALL_A_LABELS,
    ALL_B_LABELS,
    BasisLabel,
    Bipartition,
    DensityMatrix,
    InternalLevel,
    Ket,
    MixedState,
    Particle,
    SpatialMode,
    Subsystem,
    a_label,
    b_label,
    coefficient_matrix,
    exchange_left_right,
    inner,
    ket_from_matrix,
    max_entry_delta,
    normalize,
    reduced_density,
    tensor,
)

S2 = 1.0 / math.sqrt(2.0)

A_L = a_label(SpatialMode.PHI_L)
A_R = a_label(SpatialMode.PHI_R)
B_L = b_label(SpatialMode.VARPHI_L)
B_R = b_label(SpatialMode.VARPHI_R)

PSI0 = Ket({(A_L, B_R): S2, (A_R, B_L): S2})
PRODUCT = Ket({(A_L, B_R): 1.0})


def random_ket(rng, rows=None, cols=None):
    rows = rows or rng.integers(2, 9)
    cols = cols or rng.integers(2, 9)
    amps = {
        (la, lb): complex(rng.normal(), rng.normal())
        for la in ALL_A_LABELS[:rows]
        for lb in ALL_B_LABELS[:cols]
    }
    return normalize(Ket(amps))


def test_label_family_is_enforced():
    with pytest.raises(FamilyMismatchError):
        BasisLabel(Particle.A, SpatialMode.VARPHI_L, InternalLevel.G)
    with pytest.raises(FamilyMismatchError):
        BasisLabel(Particle.B, SpatialMode.PHI_R_PERP, InternalLevel.E)


def test_pair_keys_must_be_ordered_a_b():
    with pytest.raises(FamilyMismatchError):
        Ket({(B_R, A_L): 1.0})


def test_ket_drops_tiny_amplitudes():
    k = Ket({(A_L, B_R): 1.0, (A_R, B_L): 1e-16})
    assert len(k) == 1
    assert k.amplitude(A_R, B_L) == 0


def test_normalized_flag():
    assert PSI0.is_normalized
    assert not Ket({(A_L, B_R): 2.0}).is_normalized


def test_inner_orthonormal_examples():
    assert inner(PRODUCT, PRODUCT) == 1.0 + 0j
    assert inner(PRODUCT, Ket({(A_R, B_L): 1.0})) == 0j
    assert abs(inner(PRODUCT, PSI0) - S2) < 1e-15


def test_inner_sesquilinear():
    rng = np.random.default_rng(1)
    x, y = random_ket(rng), random_ket(rng)
    c = complex(0.3, -1.1)
    assert abs(inner(x.scaled(c), y) - c.conjugate() * inner(x, y)) < 1e-12
    assert abs(inner(x, y.scaled(c)) - c * inner(x, y)) < 1e-12
    value = inner(x, x)
    assert abs(value.imag) < 1e-15 and value.real >= 0


def test_inner_self_equals_amplitude_sum():
    rng = np.random.default_rng(2)
    for _ in range(20):
        x = random_ket(rng)
        direct = sum(abs(v) ** 2 for v in x.amplitudes.values())
        assert inner(x, x).real == pytest.approx(direct, abs=0, rel=1e-15)


def test_normalize():
    k = normalize(Ket({(A_L, B_R): 2.0}))
    assert k.amplitude(A_L, B_R) == pytest.approx(1.0)
    k = normalize(Ket({(A_L, B_R): 1.0, (A_R, B_L): 1.0}))
    assert k.amplitude(A_L, B_R) == pytest.approx(S2)
    assert k.amplitude(A_R, B_L) == pytest.approx(S2)
    with pytest.raises(ZeroNormError):
        normalize(Ket({}))


def test_tensor_basic():
    k = tensor({A_L: 1.0}, {B_R: 1.0})
    assert len(k) == 1 and k.amplitude(A_L, B_R) == 1.0
    excited = BasisLabel(Particle.A, SpatialMode.PHI_L, InternalLevel.E)
    k = tensor({excited: 0.3, A_L: 0.8}, {B_R: 1.0})
    assert k.amplitude(excited, B_R) == pytest.approx(0.3)
    assert k.amplitude(A_L, B_R) == pytest.approx(0.8)


def test_tensor_family_mismatch():
    with pytest.raises(FamilyMismatchError):
        tensor({B_L: 1.0}, {B_R: 1.0})
    with pytest.raises(FamilyMismatchError):
        tensor({A_L: 1.0}, {A_R: 1.0})


def test_tensor_norm_multiplicative():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a = {la: complex(rng.normal(), rng.normal()) for la in ALL_A_LABELS[: rng.integers(1, 9)]}
        b = {lb: complex(rng.normal(), rng.normal()) for lb in ALL_B_LABELS[: rng.integers(1, 9)]}
        norm_a = math.sqrt(sum(abs(v) ** 2 for v in a.values()))
        norm_b = math.sqrt(sum(abs(v) ** 2 for v in b.values()))
        assert tensor(a, b).norm() == pytest.approx(norm_a * norm_b, rel=1e-12)


def test_coefficient_matrix_entangled_antidiagonal():
    cm = coefficient_matrix(PSI0, Bipartition.PARTICLES)
    assert cm.row_labels == (A_L, A_R)
    assert cm.col_labels == (B_L, B_R)
    expected = np.array([[0.0, S2], [S2, 0.0]])
    assert np.abs(cm.matrix - expected).max() < 1e-15


def test_coefficient_matrix_product_is_rank_one():
    rng = np.random.default_rng(4)
    a = {la: complex(rng.normal(), rng.normal()) for la in ALL_A_LABELS[:4]}
    b = {lb: complex(rng.normal(), rng.normal()) for lb in ALL_B_LABELS[:5]}
    cm = coefficient_matrix(normalize(tensor(a, b)), Bipartition.PARTICLES)
    s = np.linalg.svd(cm.matrix, compute_uv=False)
    assert s[1] <= 1e-10 * s[0]


@pytest.mark.parametrize("split", [Bipartition.PARTICLES, Bipartition.DOFS])
def test_coefficient_matrix_round_trip(split):
    rng = np.random.default_rng(5)
    for _ in range(20):
        x = random_ket(rng)
        cm = coefficient_matrix(x, split)
        back = ket_from_matrix(cm.row_labels, cm.col_labels, cm.matrix, split)
        assert max_entry_delta(x, back) < 1e-15


def test_singular_values_invariant_under_relabeling():
    rng = np.random.default_rng(6)
    x = random_ket(rng)
    cm = coefficient_matrix(x, Bipartition.PARTICLES)
    reference = np.linalg.svd(cm.matrix, compute_uv=False)
    for _ in range(5):
        rows = list(cm.row_labels)
        cols = list(cm.col_labels)
        rng.shuffle(rows)
        rng.shuffle(cols)
        shuffled = coefficient_matrix(x, Bipartition.PARTICLES, row_labels=rows, col_labels=cols)
        assert np.allclose(
            np.linalg.svd(shuffled.matrix, compute_uv=False), reference, atol=1e-12
        )


def test_coefficient_matrix_rejects_uncovering_basis():
    with pytest.raises(ValueError):
        coefficient_matrix(PSI0, Bipartition.PARTICLES, row_labels=[A_L], col_labels=[B_R])


def test_coefficient_matrix_rejects_zero_state():
    with pytest.raises(ValueError):
        coefficient_matrix(Ket({}), Bipartition.PARTICLES)


def test_reduced_density_entangled():
    rho = reduced_density(PSI0, Subsystem.A)
    assert rho.basis == (A_L, A_R)
    assert np.abs(rho.matrix - 0.5 * np.eye(2)).max() < 1e-14


def test_reduced_density_product_is_projector():
    rho = reduced_density(PRODUCT, Subsystem.A)
    assert np.abs(rho.matrix @ rho.matrix - rho.matrix).max() < 1e-12


def test_reduced_density_eigenvalues_match_svd():
    # oracle: squared singular values of the coefficient matrix
    rng = np.random.default_rng(7)
    for _ in range(50):
        x = random_ket(rng)
        singular = np.linalg.svd(
            coefficient_matrix(x, Bipartition.PARTICLES).matrix, compute_uv=False
        )
        for keep in (Subsystem.A, Subsystem.B):
            eigenvalues = reduced_density(x, keep).eigenvalues()
            squared = np.zeros(len(eigenvalues))
            squared[: len(singular)] = singular**2
            assert np.abs(eigenvalues - squared).max() < 1e-10


def test_reduced_density_requires_normalized():
    with pytest.raises(NotNormalizedError):
        reduced_density(Ket({(A_L, B_R): 0.5}), Subsystem.A)


def test_density_matrix_invariants():
    with pytest.raises(ValueError):
        DensityMatrix(basis=(A_L, A_R), matrix=np.array([[0.5, 0.1], [0.3, 0.5]]))
    with pytest.raises(ValueError):
        DensityMatrix(basis=(A_L, A_R), matrix=np.array([[0.7, 0.0], [0.0, 0.5]]))
    with pytest.raises(ValueError):
        DensityMatrix(basis=(A_L, A_R), matrix=np.array([[1.5, 0.0], [0.0, -0.5]]))


def test_mixed_state_validation():
    branch = Ket({(A_L, B_R): 1.0})
    with pytest.raises(ValueError):
        MixedState(((0.5, branch), (0.4, branch)))
    with pytest.raises(NotNormalizedError):
        MixedState(((1.0, Ket({(A_L, B_R): 0.5})),))


def test_mixed_state_to_density():
    mixture = MixedState(((0.5, Ket({(A_L, B_R): 1.0})), (0.5, Ket({(A_R, B_L): 1.0}))))
    rho = mixture.to_density()
    assert np.allclose(rho.eigenvalues(), [0.5, 0.5], atol=1e-14)


def test_exchange_left_right():
    assert max_entry_delta(exchange_left_right(PSI0), PSI0) == 0.0
    rng = np.random.default_rng(8)
    x = random_ket(rng)
    swapped = exchange_left_right(x)
    assert swapped.norm() == pytest.approx(x.norm(), rel=1e-15)
    assert max_entry_delta(exchange_left_right(swapped), x) == 0.0
