"""Initial preparations and the low-intensity absorption channel.

The channel acts independently on each atom's ground-level wavepacket:
with amplitude alpha (gamma for atom B) the atom absorbs a photon, is
promoted to the excited level and its packet is kicked onto the recoiled
combination a|phi> + b|phi_perp>; with amplitude beta (delta) nothing
happens.  Multi-photon absorption is excluded structurally: the channel is
only defined on ground-level factors and refuses excited input.

Outcome bookkeeping follows coincidence counting.  For a preparation that
superposes the two left/right atom assignments, the two double-absorption
pathways fire the same pair of detectors and are therefore counted
coherently: the doubly-excited sector gets an exchange-overlap interference
term on top of its squared-amplitude weight, and the no-absorption outcome
carries the compensating weight so the four outcomes stay a distribution.
Single-absorption events fire distinct detectors and are counted
incoherently.  The distribution is valid in the low-intensity regime,
where the interference term never exceeds the no-absorption weight;
outside it the constructor refuses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import (
    ExcitedInputError,
    NotADistributionError,
    NotNormalizedError,
    WrongKindError,
)
from .recoil import RecoilOverlaps
from .states import (
    ALL_A_LABELS,
    ALL_B_LABELS,
    BasisLabel,
    InternalLevel,
    Ket,
    MixedState,
    PairLabel,
    Particle,
    SpatialMode,
    State,
    a_label,
    b_label,
)

#: advisory single-atom excitation probability bound for the linear regime
LINEAR_REGIME_LIMIT = 0.1
#: largest imaginary part still treated as a real amplitude
REAL_TOLERANCE = 1e-14
_NORM_RESIDUAL = 1e-12


@dataclass(frozen=True)
class AbsorptionAmplitudes:
    """Channel coefficients: alpha/beta for atom A, gamma/delta for atom B.

    Each pair must satisfy |absorb|^2 + |stay|^2 = 1.  Exceeding the
    low-intensity bound on |alpha|^2 or |gamma|^2 only raises the
    :attr:`beyond_linear_regime` flag, never an error: the state algebra
    downstream is exact for any normalized amplitudes.
    """

    alpha: complex
    beta: complex
    gamma: complex
    delta: complex

    def __post_init__(self) -> None:
        for names, absorb, stay in (
            (("alpha", "beta"), self.alpha, self.beta),
            (("gamma", "delta"), self.gamma, self.delta),
        ):
            total = abs(absorb) ** 2 + abs(stay) ** 2
            if abs(total - 1.0) > _NORM_RESIDUAL:
                raise ValueError(
                    f"|{names[0]}|^2 + |{names[1]}|^2 = 1 violated (got {total!r})"
                )

    @property
    def beyond_linear_regime(self) -> bool:
        return (
            abs(self.alpha) ** 2 > LINEAR_REGIME_LIMIT
            or abs(self.gamma) ** 2 > LINEAR_REGIME_LIMIT
        )

    @property
    def is_real(self) -> bool:
        return (
            max(
                abs(complex(self.alpha).imag),
                abs(complex(self.beta).imag),
                abs(complex(self.gamma).imag),
                abs(complex(self.delta).imag),
            )
            <= REAL_TOLERANCE
        )

    @classmethod
    def from_excitation(cls, alpha: complex, gamma: complex) -> "AbsorptionAmplitudes":
        """Complete beta, delta as the positive real remainders."""
        for name, value in (("alpha", alpha), ("gamma", gamma)):
            if abs(value) > 1.0:
                raise ValueError(f"|{name}| must be <= 1 to complete the pair")
        return cls(
            alpha=alpha,
            beta=math.sqrt(1.0 - abs(alpha) ** 2),
            gamma=gamma,
            delta=math.sqrt(1.0 - abs(gamma) ** 2),
        )


class InitialStateKind(Enum):
    ENTANGLED = "entangled"
    EQUAL_MIXTURE = "equal-mixture"
    PRODUCT = "product"


@dataclass(frozen=True)
class Scenario:
    """One unit of execution: a preparation plus channel parameters."""

    kind: InitialStateKind
    amplitudes: AbsorptionAmplitudes
    overlaps: RecoilOverlaps


@dataclass(frozen=True)
class OutcomeProbabilities:
    """Distribution over the four absorption outcomes."""

    p_double: float
    p_a_only: float
    p_b_only: float
    p_none: float

    def __post_init__(self) -> None:
        values = (self.p_double, self.p_a_only, self.p_b_only, self.p_none)
        for name, value in zip(("p_double", "p_a_only", "p_b_only", "p_none"), values):
            if value < -_NORM_RESIDUAL or value > 1.0 + _NORM_RESIDUAL:
                raise NotADistributionError(
                    f"{name} = {value!r} outside [0, 1]; the coherent double-"
                    "absorption counting is only a distribution at low intensity"
                )
        total = sum(values)
        if abs(total - 1.0) > _NORM_RESIDUAL:
            raise NotADistributionError(f"outcome probabilities sum to {total!r}")


# the two counter-propagating ground packets each preparation starts from
_A_LEFT = a_label(SpatialMode.PHI_L)
_A_RIGHT = a_label(SpatialMode.PHI_R)
_B_LEFT = b_label(SpatialMode.VARPHI_L)
_B_RIGHT = b_label(SpatialMode.VARPHI_R)


def build_initial(kind: InitialStateKind) -> State:
    """The three preparations over the left/right ground packets.

    Entangled: equal superposition of (A left, B right) and (A right,
    B left).  Equal mixture: the same two configurations as classical
    alternatives with weight 1/2 each.  Product: (A left, B right) alone.
    """
    s = 1.0 / math.sqrt(2.0)
    if kind is InitialStateKind.ENTANGLED:
        return Ket({(_A_LEFT, _B_RIGHT): s, (_A_RIGHT, _B_LEFT): s})
    if kind is InitialStateKind.EQUAL_MIXTURE:
        return MixedState(
            (
                (0.5, Ket({(_A_LEFT, _B_RIGHT): 1.0})),
                (0.5, Ket({(_A_RIGHT, _B_LEFT): 1.0})),
            )
        )
    if kind is InitialStateKind.PRODUCT:
        return Ket({(_A_LEFT, _B_RIGHT): 1.0})
    raise WrongKindError(f"unknown initial-state kind {kind!r}")


# excited / recoil-kicked targets for the four ground packets the channel acts on
_CHANNEL_TARGETS = {
    label: (
        BasisLabel(label.particle, label.spatial, InternalLevel.E),
        BasisLabel(label.particle, label.spatial.complement, InternalLevel.E),
    )
    for label in (_A_LEFT, _A_RIGHT, _B_LEFT, _B_RIGHT)
}

# left/right mirror image of every single-atom label
_MIRRORED = {
    label: BasisLabel(label.particle, label.spatial.mirrored, label.internal)
    for label in ALL_A_LABELS + ALL_B_LABELS
}


def _expand_factor(
    label: BasisLabel, absorb: complex, stay: complex, lead: float, perp: float
) -> tuple[tuple[BasisLabel, complex], ...]:
    if label.internal is InternalLevel.E:
        raise ExcitedInputError(
            f"channel is defined on ground-level factors only, got {label!r}"
        )
    if label.spatial.is_complement:
        raise ValueError(
            f"channel has no recoil data for complement mode {label.spatial.name}"
        )
    excited, kicked = _CHANNEL_TARGETS[label]
    return (
        (excited, absorb * lead),
        (kicked, absorb * perp),
        (label, stay),
    )


def _apply_ket(x: Ket, amps: AbsorptionAmplitudes, ov: RecoilOverlaps) -> Ket:
    out: dict[PairLabel, complex] = {}
    for (la, lb), value in x.amplitudes.items():
        for la2, ca in _expand_factor(la, amps.alpha, amps.beta, ov.a, ov.b):
            for lb2, cb in _expand_factor(lb, amps.gamma, amps.delta, ov.c, ov.d):
                key = (la2, lb2)
                out[key] = out.get(key, 0j) + value * ca * cb
    return Ket(out)


def apply_absorption(state: State, amps: AbsorptionAmplitudes, ov: RecoilOverlaps) -> State:
    """Apply the single-absorption channel; mixtures are mapped branch-wise.

    The channel is an isometry on its domain, so the output norm equals the
    input norm and branch weights are untouched.
    """
    if isinstance(state, MixedState):
        return MixedState(
            tuple((w, _apply_ket(k, amps, ov)) for w, k in state.branches)
        )
    return _apply_ket(state, amps, ov)


def _exchanged(key: PairLabel) -> PairLabel:
    la, lb = key
    return _MIRRORED[la], _MIRRORED[lb]


def _ket_outcomes(x: Ket) -> tuple[float, float, float, float]:
    if not x.is_normalized:
        raise NotNormalizedError("outcome probabilities need a unit-norm state")
    sector: dict[tuple[InternalLevel, InternalLevel], float] = {}
    doubly_excited: dict[PairLabel, complex] = {}
    for (la, lb), value in x.amplitudes.items():
        pattern = (la.internal, lb.internal)
        sector[pattern] = sector.get(pattern, 0.0) + abs(value) ** 2
        if pattern == (InternalLevel.E, InternalLevel.E):
            doubly_excited[(la, lb)] = value
    # coherent cross term between the two left/right-swapped double-absorption
    # pathways; zero whenever the doubly-excited component has no mirror image
    cross = sum(
        (value.conjugate() * doubly_excited.get(_exchanged(key), 0j)).real
        for key, value in doubly_excited.items()
    )
    ee = sector.get((InternalLevel.E, InternalLevel.E), 0.0)
    eg = sector.get((InternalLevel.E, InternalLevel.G), 0.0)
    ge = sector.get((InternalLevel.G, InternalLevel.E), 0.0)
    gg = sector.get((InternalLevel.G, InternalLevel.G), 0.0)
    return ee + cross, eg, ge, gg - cross


def outcome_probabilities(state: State) -> OutcomeProbabilities:
    """Outcome distribution of a post-absorption state.

    Mixtures contribute branch-wise with their weights.  See the module
    docstring for how the doubly-excited sector is counted.
    """
    if isinstance(state, MixedState):
        totals = [0.0, 0.0, 0.0, 0.0]
        for weight, ket in state.branches:
            for i, p in enumerate(_ket_outcomes(ket)):
                totals[i] += weight * p
        p_double, p_a, p_b, p_none = totals
    else:
        p_double, p_a, p_b, p_none = _ket_outcomes(state)
    return OutcomeProbabilities(
        p_double=p_double, p_a_only=p_a, p_b_only=p_b, p_none=p_none
    )


def no_recoil_final(scenario: Scenario) -> Ket:
    """Post-absorption state of the entangled preparation with recoil ignored.

    Product of the entangled spatial factor with the two single-atom
    internal superpositions; coincides with the channel output whenever the
    recoiled packets equal the originals (a = c = 1).
    """
    if scenario.kind is not InitialStateKind.ENTANGLED:
        raise WrongKindError(
            f"no-recoil form is defined for the entangled kind, got {scenario.kind.value}"
        )
    amps = scenario.amplitudes
    s = 1.0 / math.sqrt(2.0)
    internal_a = {InternalLevel.E: amps.alpha, InternalLevel.G: amps.beta}
    internal_b = {InternalLevel.E: amps.gamma, InternalLevel.G: amps.delta}
    entries: dict[PairLabel, complex] = {}
    for sa, sb in ((SpatialMode.PHI_L, SpatialMode.VARPHI_R), (SpatialMode.PHI_R, SpatialMode.VARPHI_L)):
        for ia, va in internal_a.items():
            for ib, vb in internal_b.items():
                entries[(BasisLabel(Particle.A, sa, ia), BasisLabel(Particle.B, sb, ib))] = (
                    s * va * vb
                )
    return Ket(entries)
