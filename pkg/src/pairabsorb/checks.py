"""Self-contained verification suite behind the ``check`` subcommand.

Each check draws its own random scenarios, measures a claimed identity at a
fixed tolerance and reports one pass/fail result.  The whole suite is
deterministic for a given seed and runs in well under ten seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .absorption import (
    AbsorptionAmplitudes,
    InitialStateKind,
    LINEAR_REGIME_LIMIT,
    apply_absorption,
    build_initial,
    outcome_probabilities,
)
from .entanglement import (
    build_lambda,
    is_product_across,
    lambda_channel_deviation,
    lambda_spectrum_check,
    schmidt_decompose,
    schmidt_via_eigenvalues,
)
from .recoil import GaussianRecoilModel, RecoilOverlaps, gaussian_recoil_overlap
from .states import (
    ALL_A_LABELS,
    ALL_B_LABELS,
    Bipartition,
    Ket,
    Subsystem,
    coefficient_matrix,
    reduced_density,
)

DEFAULT_CHECK_SEED = 20250809

_trapezoid = getattr(np, "trapezoid", None) or np.trapz


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: str
    expected: str


def draw_linear_amplitudes(rng: np.random.Generator) -> AbsorptionAmplitudes:
    """Real amplitudes with excitation probabilities inside the linear regime."""
    alpha = math.sqrt(rng.uniform(1e-4, LINEAR_REGIME_LIMIT))
    gamma = math.sqrt(rng.uniform(1e-4, LINEAR_REGIME_LIMIT))
    return AbsorptionAmplitudes.from_excitation(alpha, gamma)


def draw_real_amplitudes(rng: np.random.Generator) -> AbsorptionAmplitudes:
    """Unconstrained real amplitudes on the two unit circles."""
    t1, t2 = rng.uniform(0.0, 2.0 * math.pi, size=2)
    return AbsorptionAmplitudes(
        alpha=math.cos(t1), beta=math.sin(t1), gamma=math.cos(t2), delta=math.sin(t2)
    )


def draw_overlaps(rng: np.random.Generator) -> RecoilOverlaps:
    return RecoilOverlaps.from_scalars(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))


def quadrature_gaussian_overlap(sigma: float, k: float, points: int = 20001) -> float:
    """Trapezoid oracle for the Gaussian overlap, independent of the closed form."""
    xs = np.linspace(-13.0 * sigma, 13.0 * sigma, points)
    density = np.exp(-(xs * xs) / (2.0 * sigma * sigma)) / (sigma * math.sqrt(2.0 * math.pi))
    return float(abs(_trapezoid(density * np.exp(1j * k * xs), xs)))


def check_absorption_enhancement(rng: np.random.Generator, draws: int = 1000) -> CheckResult:
    """Entangled double-absorption probability doubles the mixture's."""
    worst_ratio, worst_dev = 2.0, 0.0
    for _ in range(draws):
        amps, ov = draw_linear_amplitudes(rng), draw_overlaps(rng)
        ent = outcome_probabilities(
            apply_absorption(build_initial(InitialStateKind.ENTANGLED), amps, ov)
        )
        mix = outcome_probabilities(
            apply_absorption(build_initial(InitialStateKind.EQUAL_MIXTURE), amps, ov)
        )
        ratio = ent.p_double / mix.p_double
        target = 2.0 * abs(amps.alpha * amps.gamma) ** 2
        dev = max(abs(ratio - 2.0), abs(ent.p_double - target))
        if dev > worst_dev:
            worst_ratio, worst_dev = ratio, dev
    return CheckResult(
        name="absorption-enhancement",
        passed=worst_dev <= 1e-12,
        measured=f"{worst_ratio:.6f}",
        expected="2",
    )


def check_lambda_reproduction(rng: np.random.Generator, draws: int = 200) -> CheckResult:
    """Hand-derived coupling matrix equals the channel output entry by entry."""
    worst = 0.0
    for _ in range(draws):
        amps, ov = draw_real_amplitudes(rng), draw_overlaps(rng)
        final = apply_absorption(build_initial(InitialStateKind.ENTANGLED), amps, ov)
        worst = max(worst, lambda_channel_deviation(build_lambda(amps, ov), final))
    return CheckResult(
        name="lambda-reproduction",
        passed=worst <= 1e-12,
        measured=f"max entry deviation {worst:.3e}",
        expected="<= 1e-12",
    )


def check_lambda_spectrum(rng: np.random.Generator, draws: int = 200) -> CheckResult:
    """Spectrum is {0 x4, +-k} and the 3x3 block is rank one."""
    worst_eig, worst_minor, all_ok = 0.0, 0.0, True
    for _ in range(draws):
        lm = build_lambda(draw_real_amplitudes(rng), draw_overlaps(rng))
        eigenvalues, ok = lambda_spectrum_check(lm)
        all_ok = all_ok and ok
        expected = np.sort([0.0, 0.0, 0.0, 0.0, lm.k_value, -lm.k_value])
        worst_eig = max(worst_eig, float(np.abs(np.asarray(eigenvalues) - expected).max()))
        lt = lm.lambda_tilde
        for i in range(3):
            for j in range(i + 1, 3):
                for k in range(3):
                    for l in range(k + 1, 3):
                        minor = abs(lt[i, k] * lt[j, l] - lt[i, l] * lt[j, k])
                        worst_minor = max(worst_minor, minor)
    return CheckResult(
        name="lambda-spectrum",
        passed=all_ok and worst_eig <= 1e-10 and worst_minor <= 1e-12,
        measured=f"max eigenvalue deviation {worst_eig:.3e}, max 2x2 minor {worst_minor:.3e}",
        expected="<= 1e-10 and <= 1e-12",
    )


def check_entropy_conservation(rng: np.random.Generator, draws: int = 200) -> CheckResult:
    """Initial and final atom/atom entropies are 1 bit; both routes agree."""
    psi0 = build_initial(InitialStateKind.ENTANGLED)
    s0 = schmidt_decompose(psi0, Bipartition.PARTICLES).entropy_bits
    worst_entropy, worst_dev = s0, abs(s0 - 1.0)
    for _ in range(draws):
        amps, ov = draw_real_amplitudes(rng), draw_overlaps(rng)
        final = apply_absorption(psi0, amps, ov)
        s_final = schmidt_decompose(final, Bipartition.PARTICLES).entropy_bits
        if abs(s_final - 1.0) > worst_dev:
            worst_entropy, worst_dev = s_final, abs(s_final - 1.0)
        lm = build_lambda(amps, ov)
        if abs(lm.k_value) > 1e-6:
            s_eigen = schmidt_via_eigenvalues(lm).entropy_bits
            if abs(s_eigen - s_final) > worst_dev:
                worst_entropy, worst_dev = s_eigen, abs(s_eigen - s_final)
    return CheckResult(
        name="entropy-conservation",
        passed=worst_dev <= 1e-9,
        measured=f"{worst_entropy:.6f}",
        expected="1",
    )


def check_hyperentanglement(rng: np.random.Generator, draws: int = 100) -> CheckResult:
    """Recoil switches the final state between product and non-product form."""
    psi0 = build_initial(InitialStateKind.ENTANGLED)
    no_recoil = RecoilOverlaps.none()
    products_ok = True
    worst_ratio, worst_entropy = math.inf, 0.0
    for _ in range(draws):
        # without recoil the wavepacket/internal split must factor
        amps = draw_real_amplitudes(rng)
        final = apply_absorption(psi0, amps, no_recoil)
        products_ok = products_ok and is_product_across(final, Bipartition.DOFS)
        # generic recoil must leave a clearly non-product state
        amps = AbsorptionAmplitudes.from_excitation(
            math.sqrt(rng.uniform(0.1, 0.9)), math.sqrt(rng.uniform(0.1, 0.9))
        )
        ov = RecoilOverlaps.from_scalars(rng.uniform(0.3, 0.9), rng.uniform(0.3, 0.9))
        final = apply_absorption(psi0, amps, ov)
        s = np.linalg.svd(coefficient_matrix(final, Bipartition.DOFS).matrix, compute_uv=False)
        worst_ratio = min(worst_ratio, float(s[1] / s[0]))
        # an initially product pair must stay separable
        product_final = apply_absorption(
            build_initial(InitialStateKind.PRODUCT), amps, ov
        )
        entropy = schmidt_decompose(product_final, Bipartition.PARTICLES).entropy_bits
        worst_entropy = max(worst_entropy, entropy)
    passed = products_ok and worst_ratio > 1e-6 and worst_entropy <= 1e-12
    return CheckResult(
        name="hyperentanglement-classification",
        passed=passed,
        measured=(
            f"no-recoil product {products_ok}, min residual ratio {worst_ratio:.3e}, "
            f"max separable entropy {worst_entropy:.3e}"
        ),
        expected="product, > 1e-6, <= 1e-12",
    )


def check_probability_completeness(rng: np.random.Generator, draws: int = 100) -> CheckResult:
    """Outcome probabilities of every preparation sum to 1."""
    worst = 0.0
    for kind in InitialStateKind:
        for _ in range(draws):
            amps, ov = draw_linear_amplitudes(rng), draw_overlaps(rng)
            p = outcome_probabilities(apply_absorption(build_initial(kind), amps, ov))
            worst = max(worst, abs(p.p_double + p.p_a_only + p.p_b_only + p.p_none - 1.0))
    return CheckResult(
        name="probability-completeness",
        passed=worst <= 1e-12,
        measured=f"max |sum - 1| = {worst:.3e}",
        expected="<= 1e-12",
    )


def check_gaussian_overlap(rng: np.random.Generator) -> CheckResult:
    """Closed-form overlap agrees with the quadrature oracle on a grid."""
    worst = 0.0
    for sigma in (0.1, 1.0, 10.0):
        for k in (0.0, 0.5, 1.0, 5.0):
            closed = gaussian_recoil_overlap(GaussianRecoilModel(sigma_x=sigma, k_recoil=k))
            worst = max(worst, abs(closed - quadrature_gaussian_overlap(sigma, k)))
    return CheckResult(
        name="gaussian-overlap-quadrature",
        passed=worst <= 1e-8,
        measured=f"max |closed form - quadrature| = {worst:.3e}",
        expected="<= 1e-8",
    )


def draw_random_ket(rng: np.random.Generator) -> Ket:
    """Random complex state over a random block of the 8x8 pair basis."""
    rows = rng.integers(2, len(ALL_A_LABELS) + 1)
    cols = rng.integers(2, len(ALL_B_LABELS) + 1)
    amps = {}
    for la in ALL_A_LABELS[:rows]:
        for lb in ALL_B_LABELS[:cols]:
            amps[(la, lb)] = complex(rng.normal(), rng.normal())
    norm = math.sqrt(sum(abs(v) ** 2 for v in amps.values()))
    return Ket({key: v / norm for key, v in amps.items()})


def check_reduced_density_oracle(rng: np.random.Generator, draws: int = 500) -> CheckResult:
    """Partial-trace eigenvalues equal squared SVD Schmidt coefficients."""
    worst = 0.0
    for _ in range(draws):
        ket = draw_random_ket(rng)
        eigenvalues = reduced_density(ket, Subsystem.A).eigenvalues()
        coefficients = np.asarray(
            schmidt_decompose(ket, Bipartition.PARTICLES).coefficients
        )
        squared = np.zeros(len(eigenvalues))
        squared[: len(coefficients)] = coefficients * coefficients
        worst = max(worst, float(np.abs(eigenvalues - squared).max()))
    return CheckResult(
        name="reduced-density-oracle",
        passed=worst <= 1e-10,
        measured=f"max |eigenvalue - coefficient^2| = {worst:.3e}",
        expected="<= 1e-10",
    )


ALL_CHECKS = (
    check_absorption_enhancement,
    check_lambda_reproduction,
    check_lambda_spectrum,
    check_entropy_conservation,
    check_hyperentanglement,
    check_probability_completeness,
    check_gaussian_overlap,
    check_reduced_density_oracle,
)


def run_all_checks(seed: int = DEFAULT_CHECK_SEED) -> list[CheckResult]:
    """Run every check with a deterministic generator; never raises."""
    rng = np.random.default_rng(seed)
    results = []
    for check in ALL_CHECKS:
        try:
            results.append(check(rng))
        except Exception as exc:  # a crashed check is a failed check
            results.append(
                CheckResult(
                    name=check.__name__.removeprefix("check_").replace("_", "-"),
                    passed=False,
                    measured=f"raised {type(exc).__name__}: {exc}",
                    expected="no exception",
                )
            )
    return results
