"""Sparse state algebra for a pair of distinguishable two-level atoms.

Each atom carries two degrees of freedom: a wavepacket mode (four
orthonormal modes per atom: a left-moving and a right-moving packet plus
their orthogonal complements, which absorb the recoiled part of a kicked
packet) and an internal electronic level (ground or excited).  Pair states
are stored sparsely as complex amplitudes over ordered pairs of
single-atom labels; the label set is small enough that every operation is
exact dense linear algebra at double precision.

All values are immutable after construction and every operation is a pure
function, so concurrent reads need no coordination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from .errors import FamilyMismatchError, NotNormalizedError, ZeroNormError

#: amplitudes with magnitude at or below this are not stored
DROP_TOLERANCE = 1e-15
#: norm below which a state counts as zero and cannot be normalized
NORM_FLOOR = 1e-14
#: accepted distance of the squared norm from 1 for the normalized flag
NORMALIZATION_TOLERANCE = 1e-12
#: tolerance for density-matrix invariants (hermiticity, trace, positivity)
DENSITY_TOLERANCE = 1e-12


class Particle(Enum):
    A = "A"
    B = "B"


class SpatialMode(Enum):
    """Wavepacket labels; ``phi_*`` belong to atom A, ``varphi_*`` to atom B.

    The eight modes are treated as an orthonormal family.  Recoiled
    (non-orthogonal) packets never appear as labels; they enter only as
    coordinates over an original mode and its ``_perp`` complement.
    """

    PHI_L = "phi_L"
    PHI_L_PERP = "phi_L_perp"
    PHI_R = "phi_R"
    PHI_R_PERP = "phi_R_perp"
    VARPHI_L = "varphi_L"
    VARPHI_L_PERP = "varphi_L_perp"
    VARPHI_R = "varphi_R"
    VARPHI_R_PERP = "varphi_R_perp"

    @property
    def particle(self) -> Particle:
        return Particle.A if self.value.startswith("phi") else Particle.B

    @property
    def is_complement(self) -> bool:
        return self.value.endswith("_perp")

    @property
    def complement(self) -> "SpatialMode":
        """The orthogonal-complement mode paired with this packet."""
        if self.is_complement:
            raise ValueError(f"{self.name} is already a complement mode")
        return SpatialMode(self.value + "_perp")

    @property
    def mirrored(self) -> "SpatialMode":
        """Left/right exchange partner; complement modes swap likewise."""
        if "_L" in self.value:
            return SpatialMode(self.value.replace("_L", "_R"))
        return SpatialMode(self.value.replace("_R", "_L"))


class InternalLevel(Enum):
    G = "g"
    E = "e"


_SPATIAL_ORDER = {mode: index for index, mode in enumerate(SpatialMode)}
_INTERNAL_ORDER = {level: index for index, level in enumerate(InternalLevel)}


@dataclass(frozen=True)
class BasisLabel:
    """One atom's basis label: particle identity, wavepacket mode, level."""

    particle: Particle
    spatial: SpatialMode
    internal: InternalLevel

    def __post_init__(self) -> None:
        if self.spatial.particle is not self.particle:
            raise FamilyMismatchError(
                f"spatial mode {self.spatial.name} does not belong to "
                f"particle {self.particle.name}"
            )
        # labels are dict keys on every hot path; hash once
        object.__setattr__(
            self, "_hash", hash((self.particle, self.spatial, self.internal))
        )

    def __hash__(self) -> int:
        return self._hash

    def sort_key(self) -> tuple:
        return (
            self.particle.value,
            _SPATIAL_ORDER[self.spatial],
            _INTERNAL_ORDER[self.internal],
        )

    def __repr__(self) -> str:
        return f"|{self.spatial.value},{self.internal.value}>_{self.particle.value}"


def a_label(spatial: SpatialMode, internal: InternalLevel = InternalLevel.G) -> BasisLabel:
    return BasisLabel(Particle.A, spatial, internal)


def b_label(spatial: SpatialMode, internal: InternalLevel = InternalLevel.G) -> BasisLabel:
    return BasisLabel(Particle.B, spatial, internal)


#: pair key: (label of atom A, label of atom B)
PairLabel = tuple[BasisLabel, BasisLabel]

ALL_A_LABELS: tuple[BasisLabel, ...] = tuple(
    BasisLabel(Particle.A, mode, level)
    for mode in SpatialMode
    if mode.particle is Particle.A
    for level in InternalLevel
)
ALL_B_LABELS: tuple[BasisLabel, ...] = tuple(
    BasisLabel(Particle.B, mode, level)
    for mode in SpatialMode
    if mode.particle is Particle.B
    for level in InternalLevel
)


class Ket:
    """Immutable sparse pair state over ordered (A label, B label) keys.

    Entries with magnitude at or below :data:`DROP_TOLERANCE` are dropped
    at construction, so the stored support is always finite and exact zero
    amplitudes never linger.
    """

    __slots__ = ("_amps", "_norm")

    def __init__(self, amplitudes: Mapping[PairLabel, complex]):
        amps: dict[PairLabel, complex] = {}
        for (la, lb), value in amplitudes.items():
            if la.particle is not Particle.A or lb.particle is not Particle.B:
                raise FamilyMismatchError(
                    "pair keys must be ordered (A label, B label); "
                    f"got ({la!r}, {lb!r})"
                )
            v = complex(value)
            if abs(v) > DROP_TOLERANCE:
                amps[(la, lb)] = v
        self._amps = amps
        self._norm = math.sqrt(
            sum(v.real * v.real + v.imag * v.imag for v in amps.values())
        )

    @property
    def amplitudes(self) -> Mapping[PairLabel, complex]:
        return MappingProxyType(self._amps)

    def amplitude(self, la: BasisLabel, lb: BasisLabel) -> complex:
        return self._amps.get((la, lb), 0j)

    def norm(self) -> float:
        return self._norm

    @property
    def is_normalized(self) -> bool:
        return abs(self._norm * self._norm - 1.0) <= NORMALIZATION_TOLERANCE

    def scaled(self, factor: complex) -> "Ket":
        return Ket({key: factor * v for key, v in self._amps.items()})

    def __add__(self, other: "Ket") -> "Ket":
        merged = dict(self._amps)
        for key, v in other._amps.items():
            merged[key] = merged.get(key, 0j) + v
        return Ket(merged)

    def __sub__(self, other: "Ket") -> "Ket":
        return self + other.scaled(-1.0)

    def __len__(self) -> int:
        return len(self._amps)

    def __repr__(self) -> str:
        terms = ", ".join(
            f"({la!r},{lb!r}): {v:.4g}" for (la, lb), v in sorted(
                self._amps.items(),
                key=lambda item: (item[0][0].sort_key(), item[0][1].sort_key()),
            )
        )
        return f"Ket({{{terms}}})"


def inner(x: Ket, y: Ket) -> complex:
    """Inner product <x|y>; conjugate-linear in ``x``, linear in ``y``."""
    if len(x) > len(y):
        return complex(np.conj(inner(y, x)))
    total = 0j
    for key, vx in x.amplitudes.items():
        vy = y.amplitudes.get(key)
        if vy is not None:
            total += vx.conjugate() * vy
    return total


def normalize(x: Ket) -> Ket:
    """Rescale ``x`` to unit norm by a positive real factor."""
    n = x.norm()
    if n <= NORM_FLOOR:
        raise ZeroNormError(f"cannot normalize a state of norm {n:.3e}")
    return x.scaled(1.0 / n)


def tensor(
    a: Mapping[BasisLabel, complex], b: Mapping[BasisLabel, complex]
) -> Ket:
    """Assemble the product state of single-atom amplitude maps.

    ``a`` must be supported on atom-A labels and ``b`` on atom-B labels;
    the result's (i, j) amplitude is ``a[i] * b[j]``, so the norm is
    multiplicative.
    """
    for label in a:
        if label.particle is not Particle.A:
            raise FamilyMismatchError(f"{label!r} is not an atom-A label")
    for label in b:
        if label.particle is not Particle.B:
            raise FamilyMismatchError(f"{label!r} is not an atom-B label")
    return Ket(
        {
            (la, lb): va * vb
            for la, va in a.items()
            for lb, vb in b.items()
        }
    )


class Bipartition(Enum):
    """How the four tensor factors are split into two groups."""

    #: atom A (wavepacket and level) versus atom B
    PARTICLES = "particles"
    #: wavepacket modes of both atoms versus internal levels of both atoms
    DOFS = "dofs"


class Subsystem(Enum):
    """Factor kept by a partial trace."""

    A = "A"
    B = "B"
    SPATIAL = "spatial"
    INTERNAL = "internal"


@dataclass(frozen=True, eq=False)
class CoefficientMatrix:
    """State amplitudes arranged as a matrix across a bipartition."""

    row_labels: tuple
    col_labels: tuple
    matrix: np.ndarray


def _split_keys(key: PairLabel, split: Bipartition) -> tuple:
    la, lb = key
    if split is Bipartition.PARTICLES:
        return la, lb
    return (la.spatial, lb.spatial), (la.internal, lb.internal)


def _row_sort_key(row, split: Bipartition):
    if split is Bipartition.PARTICLES:
        return row.sort_key()
    return (_SPATIAL_ORDER[row[0]], _SPATIAL_ORDER[row[1]])


def _col_sort_key(col, split: Bipartition):
    if split is Bipartition.PARTICLES:
        return col.sort_key()
    return (_INTERNAL_ORDER[col[0]], _INTERNAL_ORDER[col[1]])


def coefficient_matrix(
    x: Ket,
    split: Bipartition,
    row_labels: Sequence | None = None,
    col_labels: Sequence | None = None,
) -> CoefficientMatrix:
    """Arrange the amplitudes of ``x`` as a matrix across ``split``.

    Under :attr:`Bipartition.PARTICLES`, rows are atom-A labels and columns
    atom-B labels.  Under :attr:`Bipartition.DOFS`, rows are pairs of
    wavepacket modes ``(mode_A, mode_B)`` and columns pairs of internal
    levels ``(level_A, level_B)``.  When explicit label sequences are given
    they fix both ordering and size (entries outside them are an error);
    otherwise only occupied labels appear, in canonical order.
    """
    if len(x) == 0:
        raise ValueError("cannot build a coefficient matrix for the zero state")
    entries = {}
    for key, value in x.amplitudes.items():
        rk, ck = _split_keys(key, split)
        entries[(rk, ck)] = entries.get((rk, ck), 0j) + value
    if row_labels is None:
        rows = tuple(sorted({rk for rk, _ in entries}, key=lambda r: _row_sort_key(r, split)))
    else:
        rows = tuple(row_labels)
    if col_labels is None:
        cols = tuple(sorted({ck for _, ck in entries}, key=lambda c: _col_sort_key(c, split)))
    else:
        cols = tuple(col_labels)
    row_index = {label: i for i, label in enumerate(rows)}
    col_index = {label: j for j, label in enumerate(cols)}
    matrix = np.zeros((len(rows), len(cols)), dtype=complex)
    for (rk, ck), value in entries.items():
        try:
            matrix[row_index[rk], col_index[ck]] = value
        except KeyError:
            raise ValueError(
                f"state has support on ({rk!r}, {ck!r}) outside the given bases"
            ) from None
    matrix.setflags(write=False)
    return CoefficientMatrix(row_labels=rows, col_labels=cols, matrix=matrix)


def ket_from_matrix(
    row_labels: Sequence, col_labels: Sequence, matrix: np.ndarray, split: Bipartition
) -> Ket:
    """Inverse of :func:`coefficient_matrix`: flatten a matrix back to a ket."""
    amps: dict[PairLabel, complex] = {}
    for i, rk in enumerate(row_labels):
        for j, ck in enumerate(col_labels):
            value = complex(matrix[i, j])
            if value == 0:
                continue
            if split is Bipartition.PARTICLES:
                key = (rk, ck)
            else:
                (sa, sb), (ia, ib) = rk, ck
                key = (
                    BasisLabel(Particle.A, sa, ia),
                    BasisLabel(Particle.B, sb, ib),
                )
            amps[key] = amps.get(key, 0j) + value
    return Ket(amps)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive matrix over an ordered basis."""

    basis: tuple
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] != len(self.basis):
            raise ValueError("density matrix must be square over its basis")
        if np.abs(m - m.conj().T).max() > DENSITY_TOLERANCE:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > DENSITY_TOLERANCE or abs(np.trace(m).imag) > DENSITY_TOLERANCE:
            raise ValueError("density matrix trace differs from 1")
        if np.linalg.eigvalsh(m).min() < -DENSITY_TOLERANCE:
            raise ValueError("density matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "basis", tuple(self.basis))

    def eigenvalues(self) -> np.ndarray:
        """Real eigenvalues, descending."""
        return np.sort(np.linalg.eigvalsh(self.matrix))[::-1]


def reduced_density(x: Ket, keep: Subsystem) -> DensityMatrix:
    """Partial trace of |x><x| keeping one side of a bipartition.

    The eigenvalue multiset of the result equals the squared Schmidt
    coefficients of the corresponding split, which is the cross-check the
    test suite leans on.
    """
    if not x.is_normalized:
        raise NotNormalizedError("reduced_density requires a unit-norm state")
    split = (
        Bipartition.PARTICLES
        if keep in (Subsystem.A, Subsystem.B)
        else Bipartition.DOFS
    )
    cm = coefficient_matrix(x, split)
    if keep in (Subsystem.A, Subsystem.SPATIAL):
        m, basis = cm.matrix, cm.row_labels
    else:
        m, basis = cm.matrix.T, cm.col_labels
    return DensityMatrix(basis=basis, matrix=m @ m.conj().T)


@dataclass(frozen=True, eq=False)
class MixedState:
    """Classical mixture of unit-norm kets with weights summing to 1."""

    branches: tuple[tuple[float, Ket], ...]

    def __post_init__(self) -> None:
        branches = tuple((float(w), k) for w, k in self.branches)
        if not branches:
            raise ValueError("a mixture needs at least one branch")
        total = 0.0
        for weight, ket in branches:
            if not 0.0 < weight <= 1.0 + NORMALIZATION_TOLERANCE:
                raise ValueError(f"branch weight {weight} outside (0, 1]")
            if not ket.is_normalized:
                raise NotNormalizedError("every mixture branch must be unit norm")
            total += weight
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            raise ValueError(f"branch weights sum to {total!r}, not 1")
        object.__setattr__(self, "branches", branches)

    def to_density(self) -> DensityMatrix:
        """Weighted sum of branch projectors over the union pair basis."""
        keys = sorted(
            {key for _, ket in self.branches for key in ket.amplitudes},
            key=lambda key: (key[0].sort_key(), key[1].sort_key()),
        )
        index = {key: i for i, key in enumerate(keys)}
        rho = np.zeros((len(keys), len(keys)), dtype=complex)
        for weight, ket in self.branches:
            vec = np.zeros(len(keys), dtype=complex)
            for key, value in ket.amplitudes.items():
                vec[index[key]] = value
            rho += weight * np.outer(vec, vec.conj())
        return DensityMatrix(basis=tuple(keys), matrix=rho)


State = Ket | MixedState


def exchange_left_right(x: Ket) -> Ket:
    """Relabel every wavepacket mode by its left/right mirror image.

    A pure relabeling within the orthonormal mode family, hence unitary.
    """
    return Ket(
        {
            (
                BasisLabel(Particle.A, la.spatial.mirrored, la.internal),
                BasisLabel(Particle.B, lb.spatial.mirrored, lb.internal),
            ): value
            for (la, lb), value in x.amplitudes.items()
        }
    )


def max_entry_delta(x: Ket, y: Ket) -> float:
    """Largest absolute amplitude difference over the union support."""
    keys = set(x.amplitudes) | set(y.amplitudes)
    if not keys:
        return 0.0
    return max(abs(x.amplitudes.get(k, 0j) - y.amplitudes.get(k, 0j)) for k in keys)
