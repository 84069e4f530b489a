"""Entanglement quantification and hyperentanglement classification.

Two independent routes to the Schmidt data of a pure pair state are
implemented.  The canonical route is a singular value decomposition of the
coefficient matrix across the chosen bipartition; it is valid for any
state.  The second route diagonalizes the hand-derived 6x6 coupling matrix
of the post-absorption entangled state: because that matrix is built from
rank-1 blocks, its nonzero eigenvalue pair reproduces the Schmidt
coefficients after normalization.  Eigenvalues of a non-symmetric
coefficient matrix are not Schmidt coefficients in general, so the
agreement of the two routes is asserted as a property of this state family
rather than assumed; keeping both routes makes that agreement an explicit,
testable claim.

Entropies are in bits (base-2 logarithm) with 0 log 0 = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .absorption import AbsorptionAmplitudes
from .errors import (
    ComplexAmplitudesError,
    DegenerateSpectrumError,
    NotADistributionError,
    NotNormalizedError,
)
from .recoil import RecoilOverlaps
from .states import (
    BasisLabel,
    Bipartition,
    InternalLevel,
    Ket,
    Particle,
    SpatialMode,
    coefficient_matrix,
)

#: default relative second-singular-value threshold for product tests
PRODUCT_TOLERANCE = 1e-8
#: |k_value| at or below this leaves the eigenvalue route undefined
DEGENERACY_FLOOR = 1e-10
_SPECTRUM_TOLERANCE = 1e-10
_MINOR_TOLERANCE = 1e-12

# ordered single-atom bases the coupling matrix is written in:
# ground packet, excited packet, excited complement, for left then right
LAMBDA_BASIS_A: tuple[BasisLabel, ...] = tuple(
    BasisLabel(Particle.A, mode, level)
    for mode, level in (
        (SpatialMode.PHI_L, InternalLevel.G),
        (SpatialMode.PHI_L, InternalLevel.E),
        (SpatialMode.PHI_L_PERP, InternalLevel.E),
        (SpatialMode.PHI_R, InternalLevel.G),
        (SpatialMode.PHI_R, InternalLevel.E),
        (SpatialMode.PHI_R_PERP, InternalLevel.E),
    )
)
LAMBDA_BASIS_B: tuple[BasisLabel, ...] = tuple(
    BasisLabel(Particle.B, mode, level)
    for mode, level in (
        (SpatialMode.VARPHI_L, InternalLevel.G),
        (SpatialMode.VARPHI_L, InternalLevel.E),
        (SpatialMode.VARPHI_L_PERP, InternalLevel.E),
        (SpatialMode.VARPHI_R, InternalLevel.G),
        (SpatialMode.VARPHI_R, InternalLevel.E),
        (SpatialMode.VARPHI_R_PERP, InternalLevel.E),
    )
)


def entropy_bits(probabilities: Iterable[float]) -> float:
    """Shannon entropy -sum p log2 p of a probability list, in bits."""
    p = np.asarray(list(probabilities), dtype=float)
    if p.size and p.min() < -1e-12:
        raise NotADistributionError(f"negative probability {p.min()!r}")
    total = float(p.sum())
    if abs(total - 1.0) > 1e-10:
        raise NotADistributionError(f"probabilities sum to {total!r}, not 1")
    p = p[p > 0.0]
    return float(-(p * np.log2(p)).sum()) + 0.0  # avoid -0.0


@dataclass(frozen=True, eq=False)
class SchmidtResult:
    """Schmidt data for one bipartition of a pure state.

    ``coefficients`` are non-negative and descending; the vector lists are
    orthonormal coordinate vectors over ``left_labels`` / ``right_labels``
    (rows and columns of the underlying coefficient matrix).
    """

    coefficients: tuple[float, ...]
    left_vectors: tuple[np.ndarray, ...]
    right_vectors: tuple[np.ndarray, ...]
    left_labels: tuple
    right_labels: tuple
    entropy_bits: float


def schmidt_decompose(x: Ket, split: Bipartition) -> SchmidtResult:
    """Schmidt decomposition via SVD of the coefficient matrix.

    The reconstruction sum(c_k |u_k>|v_k>) reproduces ``x``; the squared
    coefficients feed the von Neumann entropy.
    """
    if not x.is_normalized:
        raise NotNormalizedError("schmidt_decompose requires a unit-norm state")
    cm = coefficient_matrix(x, split)
    u, s, vh = np.linalg.svd(cm.matrix, full_matrices=False)
    coefficients = tuple(float(value) for value in s)
    return SchmidtResult(
        coefficients=coefficients,
        left_vectors=tuple(u[:, i] for i in range(len(coefficients))),
        right_vectors=tuple(vh[i, :] for i in range(len(coefficients))),
        left_labels=cm.row_labels,
        right_labels=cm.col_labels,
        entropy_bits=entropy_bits(s * s),
    )


@dataclass(frozen=True, eq=False)
class LambdaMatrices:
    """Hand-derived coefficient matrix of the post-absorption entangled state.

    ``lambda_tilde`` is the 3x3 block coupling one atom's left family to
    the other's right family; ``lambda_full`` is the 6x6 block matrix with
    ``lambda_tilde`` in both off-diagonal blocks (the two blocks coincide
    because the state is left/right symmetric).  ``lambda_full`` pairs the
    atom-B basis rows of :data:`LAMBDA_BASIS_B` with the atom-A basis
    columns of :data:`LAMBDA_BASIS_A`, i.e. it is the transpose of the
    A-rows coefficient matrix, scaled by sqrt(2).
    """

    lambda_tilde: np.ndarray
    lambda_full: np.ndarray
    k_value: float


def build_lambda(amps: AbsorptionAmplitudes, ov: RecoilOverlaps) -> LambdaMatrices:
    """Assemble the coupling matrix from real channel amplitudes and overlaps.

    Restricted to real amplitudes because the eigenvalue route's
    characteristic polynomial is derived for a real matrix; complex input
    is rejected rather than silently generalized.
    """
    if not amps.is_real:
        raise ComplexAmplitudesError(
            "coupling-matrix route requires real channel amplitudes"
        )
    al = complex(amps.alpha).real
    be = complex(amps.beta).real
    ga = complex(amps.gamma).real
    de = complex(amps.delta).real
    a, b, c, d = ov.a, ov.b, ov.c, ov.d
    lt = np.array(
        [
            [be * de, al * de * a, al * de * b],
            [be * ga * c, al * ga * a * c, al * ga * b * c],
            [be * ga * d, al * ga * a * d, al * ga * b * d],
        ]
    )
    full = np.zeros((6, 6))
    full[:3, 3:] = lt
    full[3:, :3] = lt
    lt.setflags(write=False)
    full.setflags(write=False)
    k_value = al * ga * (a * c + b * d) + be * de
    return LambdaMatrices(lambda_tilde=lt, lambda_full=full, k_value=k_value)


def lambda_spectrum_check(lm: LambdaMatrices) -> tuple[list[float], bool]:
    """Numerically verify the predicted spectrum {0 x4, +k, -k}.

    Returns the six eigenvalue real parts (ascending) and a verdict that is
    true iff the eigenvalue multiset matches, the eigenvalues are real, and
    the characteristic polynomial collapses to x^6 - k^2 x^4.
    """
    evals = np.linalg.eigvals(lm.lambda_full)
    got = np.sort(evals.real)
    expected = np.sort([0.0, 0.0, 0.0, 0.0, lm.k_value, -lm.k_value])
    ok = bool(
        np.abs(got - expected).max() <= _SPECTRUM_TOLERANCE
        and np.abs(evals.imag).max() <= _SPECTRUM_TOLERANCE
    )
    # monic characteristic polynomial: only the degree-4 coefficient survives
    poly = np.poly(lm.lambda_full)
    ok = ok and abs(poly[2] + lm.k_value * lm.k_value) <= _SPECTRUM_TOLERANCE
    others = np.abs(np.concatenate([poly[1:2], poly[3:]]))
    ok = ok and bool(others.max() <= _SPECTRUM_TOLERANCE)
    return [float(v) for v in got], ok


def schmidt_via_eigenvalues(lm: LambdaMatrices) -> SchmidtResult:
    """Schmidt data from the eigenvalue pair of the coupling matrix.

    The two nonzero eigenvalues +-k normalize to coefficients
    (1/sqrt2, 1/sqrt2); the associated right eigenvectors of the matrix and
    of its transpose supply the atom-B and atom-A Schmidt vectors.  Valid
    only when k is nonzero; the SVD route has no such restriction.
    """
    k = lm.k_value
    if abs(k) <= DEGENERACY_FLOOR:
        raise DegenerateSpectrumError(
            f"nonzero eigenvalue pair vanishes (k = {k!r}); use the SVD route"
        )
    evals_b, vecs_b = np.linalg.eig(lm.lambda_full)
    evals_a, vecs_a = np.linalg.eig(lm.lambda_full.T)
    m_a_rows = lm.lambda_full.T / math.sqrt(2.0)

    def _pick(evals: np.ndarray, vecs: np.ndarray, target: float) -> tuple[float, np.ndarray]:
        index = int(np.argmin(np.abs(evals - target)))
        value, vector = evals[index], vecs[:, index]
        if abs(value.imag) > _SPECTRUM_TOLERANCE or np.abs(vector.imag).max() > 1e-9:
            raise DegenerateSpectrumError("nonzero eigenvalue pair is not real")
        vector = vector.real
        return float(value.real), vector / np.linalg.norm(vector)

    lam_plus, b_plus = _pick(evals_b, vecs_b, k)
    lam_minus, b_minus = _pick(evals_b, vecs_b, -k)
    _, a_plus = _pick(evals_a, vecs_a, k)
    _, a_minus = _pick(evals_a, vecs_a, -k)

    scale = math.hypot(lam_plus, lam_minus)
    coefficients = (abs(lam_plus) / scale, abs(lam_minus) / scale)
    left, right = [], []
    for a_vec, b_vec in ((a_plus, b_plus), (a_minus, b_minus)):
        # fold the sign into the B vector so the pair's weight is positive
        if float(a_vec @ m_a_rows @ b_vec) < 0.0:
            b_vec = -b_vec
        left.append(a_vec)
        right.append(b_vec)
    return SchmidtResult(
        coefficients=coefficients,
        left_vectors=tuple(left),
        right_vectors=tuple(right),
        left_labels=LAMBDA_BASIS_A,
        right_labels=LAMBDA_BASIS_B,
        entropy_bits=entropy_bits([c * c for c in coefficients]),
    )


def lambda_channel_deviation(lm: LambdaMatrices, final_state: Ket) -> float:
    """Largest entry mismatch between the coupling matrix and the channel output.

    The channel output's coefficient matrix is built with atom-A rows; the
    coupling matrix pairs atom-B rows with atom-A columns, so the
    comparison transposes before scaling by sqrt(2).
    """
    cm = coefficient_matrix(
        final_state,
        Bipartition.PARTICLES,
        row_labels=LAMBDA_BASIS_A,
        col_labels=LAMBDA_BASIS_B,
    )
    return float(np.abs(math.sqrt(2.0) * cm.matrix.T - lm.lambda_full).max())


def is_product_across(x: Ket, split: Bipartition, tol: float = PRODUCT_TOLERANCE) -> bool:
    """Whether ``x`` factors across ``split`` up to a relative tolerance.

    True iff the second singular value of the coefficient matrix is at most
    ``tol`` times the largest; scale- and phase-free by construction.
    """
    if not 0.0 < tol < 1.0:
        raise ValueError(f"tol must lie in (0, 1), got {tol!r}")
    s = np.linalg.svd(coefficient_matrix(x, split).matrix, compute_uv=False)
    return len(s) < 2 or s[1] <= tol * s[0]


class Classification(Enum):
    SEPARABLE = "separable"
    SINGLE_DOF = "single-dof entangled"
    PRODUCT_FORM = "product-form hyperentangled"
    NON_PRODUCT = "non-product hyperentangled"


@dataclass(frozen=True)
class HyperentanglementReport:
    """How a pure pair state distributes entanglement over its variables."""

    ab_entangled: bool
    ab_entropy_bits: float
    dof_product: bool
    classification: Classification


def _pair_vector_entangled(vector: np.ndarray, pair_labels: Sequence, tol: float) -> bool:
    # reshape a vector over (first, second) label pairs and rank-test it
    firsts = sorted({p[0] for p in pair_labels}, key=lambda v: v.value)
    seconds = sorted({p[1] for p in pair_labels}, key=lambda v: v.value)
    matrix = np.zeros((len(firsts), len(seconds)), dtype=complex)
    for value, (first, second) in zip(vector, pair_labels):
        matrix[firsts.index(first), seconds.index(second)] = value
    s = np.linalg.svd(matrix, compute_uv=False)
    return len(s) >= 2 and s[1] > tol * s[0]


def hyperentanglement_report(x: Ket, tol: float = PRODUCT_TOLERANCE) -> HyperentanglementReport:
    """Classify the entanglement structure of a unit-norm pure state.

    A state is hyperentangled when the two atoms are entangled and the
    correlation involves both the wavepacket and the internal variables.
    The product-form flavor factors into (wavepacket part) x (internal
    part) with each factor entangled on its own; the non-product flavor
    does not factor at all.
    """
    sr = schmidt_decompose(x, Bipartition.PARTICLES)
    ab_product = len(sr.coefficients) < 2 or sr.coefficients[1] <= tol * sr.coefficients[0]
    cm = coefficient_matrix(x, Bipartition.DOFS)
    u, s, vh = np.linalg.svd(cm.matrix, full_matrices=False)
    dof_product = len(s) < 2 or s[1] <= tol * s[0]
    if ab_product:
        classification = Classification.SEPARABLE
    elif dof_product:
        spatial_entangled = _pair_vector_entangled(u[:, 0], cm.row_labels, tol)
        internal_entangled = _pair_vector_entangled(vh[0, :], cm.col_labels, tol)
        classification = (
            Classification.PRODUCT_FORM
            if spatial_entangled and internal_entangled
            else Classification.SINGLE_DOF
        )
    else:
        classification = Classification.NON_PRODUCT
    return HyperentanglementReport(
        ab_entangled=not ab_product,
        ab_entropy_bits=sr.entropy_bits,
        dof_product=dof_product,
        classification=classification,
    )
