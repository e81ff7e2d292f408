"""Invariant suite behind ``main.py check``.

Each check draws its own seeded generator, records the worst value of every metric it tracks and
passes when all metrics sit inside their tolerances. Checks run in a thread pool; an exception
inside one check marks that check failed and leaves the others running.
"""

import itertools
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np
from loguru import logger
from tqdm import tqdm

from .arcs import TWO_PI
from .bijection import SequencePair, pair_to_verblunsky, verblunsky_to_pair
from .chain_sequences import maximal_parameters
from .closed_form import (
    ExampleParams,
    bands_within_support,
    example_alpha,
    example_bands,
    example_discriminant,
    example_masses,
    example_pair,
    example_weight,
    rotation_identity_residual,
)
from .config import RunConfig
from .exceptions import ChainOpucError
from .periodic import (
    ac_weight,
    band_structure,
    discriminant,
    is_periodic_pair,
    parallel_alpha_from_parameters,
    parallel_lines_check,
    pure_point_mass,
    series_mass,
    spectrum,
    total_mass,
)
from .polynomials import r_poly, w_eval
from .quadrature import moments, quadrature
from .transforms import conjugate_pair, rotate_alpha, rotation_point, unfold_alternating
from .zeros import support_gap_check, w_zero_levels

EXAMPLE_C = (0.0, 0.5, -0.5, 1.0, -1.0)
EXAMPLE_B = (0.3, -0.3, 0.7, -0.7, 0.0)

# Above this, zeros of consecutive levels can sit closer than double precision separates.
RESOLVABLE_C_SCALE = 0.5


@dataclass
class CheckResult:
    """Outcome of one named check.

    Attributes:
        name: registry name of the check
        passed: every metric is within its tolerance
        cases: number of cases exercised
        metrics: worst observed value per metric
        tolerances: limit per metric (metrics ending in "_margin" must exceed it, others stay below)
        message: first failure description, empty when passed
    """

    name: str
    passed: bool = True
    cases: int = 0
    metrics: Dict[str, float] = field(default_factory=dict)
    tolerances: Dict[str, float] = field(default_factory=dict)
    message: str = ""

    def record(self, metric: str, value: float, tol: float) -> None:
        """Fold one observation into the metric's worst value."""
        lower_bound = metric.endswith("_margin")
        previous = self.metrics.get(metric)
        if previous is None:
            worst = value
        else:
            worst = min(previous, value) if lower_bound else max(previous, value)
        self.metrics[metric] = float(worst)
        self.tolerances[metric] = tol
        ok = value > tol if lower_bound else value < tol
        if not ok:
            self.fail(f"{metric} = {value!r} violates {tol!r}")

    def fail(self, message: str) -> None:
        if self.passed:
            self.message = message
        self.passed = False

    def as_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "metrics": self.metrics,
            "tolerances": self.tolerances,
            "message": self.message,
        }


def random_pair(rng: np.random.Generator, length: int, c_scale: float = 2.0) -> SequencePair:
    """Pair with c uniform in [-c_scale, c_scale] and minimal parameters uniform in [0.05, 0.95]."""
    c = rng.uniform(-c_scale, c_scale, length)
    m = np.concatenate([[0.0], rng.uniform(0.05, 0.95, length)])
    return SequencePair.from_minimal(c, m)


def random_alpha(rng: np.random.Generator, length: int, radius: float = 0.9) -> np.ndarray:
    return rng.uniform(0.0, radius, length) * np.exp(1j * rng.uniform(0.0, TWO_PI, length))


def alternating_pair(rng: np.random.Generator, magnitudes: np.ndarray) -> SequencePair:
    """c_k = (-1)^k magnitudes[k-1] with random minimal parameters."""
    signs = (-1.0) ** np.arange(1, len(magnitudes) + 1)
    m = np.concatenate([[0.0], rng.uniform(0.05, 0.95, len(magnitudes))])
    return SequencePair.from_minimal(signs * magnitudes, m)


def example_grid() -> List[ExampleParams]:
    """All (c, b1, b2) with c in {0, +-0.5, +-1} and b1, b2 in {0, +-0.3, +-0.7}."""
    return [ExampleParams(c, b1, b2) for c, b1, b2 in itertools.product(EXAMPLE_C, EXAMPLE_B, EXAMPLE_B)]


def _circular_miss(expected: List[float], found: List[float]) -> float:
    """Largest distance from an expected angle to its nearest found angle."""
    if len(expected) != len(found):
        return math.inf
    worst = 0.0
    for theta in expected:
        worst = max(worst, min(abs(math.remainder(theta - f, TWO_PI)) for f in found))
    return worst


# ---------------------------------------------------------------------------
# Individual checks
# ---------------------------------------------------------------------------


def check_round_trip(config: RunConfig, rng: np.random.Generator) -> CheckResult:
    result = CheckResult("bijection_round_trip")
    tol = config.bijection.round_trip_tol
    length = config.processing.check_length
    for _ in range(config.processing.check_pairs):
        pair = random_pair(rng, length)
        back = verblunsky_to_pair(pair_to_verblunsky(pair))
        error = max(float(np.max(np.abs(back.c - pair.c))), float(np.max(np.abs(back.m - pair.m))))
        result.record("pair_error", error, tol)

        alpha = random_alpha(rng, length)
        again = pair_to_verblunsky(verblunsky_to_pair(alpha)).alpha
        result.record("alpha_error", float(np.max(np.abs(again - alpha))), tol)
        result.cases += 2
    return result


def check_quadrature(config: RunConfig, rng: np.random.Generator) -> CheckResult:
    result = CheckResult("quadrature_validity")
    level = config.processing.check_length
    for _ in range(config.processing.check_pairs):
        pair = random_pair(rng, level, RESOLVABLE_C_SCALE)
        dm = quadrature(pair, level, node_eps=config.quadrature.node_eps, sum_tol=config.quadrature.sum_tol)
        result.record("min_weight_margin", float(np.min(dm.weights)), 0.0)
        result.record("sum_error", abs(float(np.sum(dm.weights)) - 1.0), 1e-10)
        alpha0 = pair_to_verblunsky(pair).alpha[0]
        result.record("first_moment_error", float(abs(moments(dm, 1)[1] - alpha0)), 1e-10)
        result.cases += 1

    lebesgue = verblunsky_to_pair(np.zeros(60, dtype=complex))
    for n in (15, 30, 60):
        mu = moments(quadrature(lebesgue, n), n)
        result.record("lebesgue_moment", float(np.max(np.abs(mu[1:]))), 1e-12)
        result.cases += 1
    return result


def check_interlacing(config: RunConfig, rng: np.random.Generator) -> CheckResult:
    result = CheckResult("interlacing")
    length = config.processing.check_length
    for _ in range(config.processing.check_pairs):
        levels = w_zero_levels(random_pair(rng, length, RESOLVABLE_C_SCALE), length)
        for inner, outer in zip(levels[:-1], levels[1:]):
            above = float(np.min(outer.x_zeros[:-1] - inner.x_zeros))
            below = float(np.min(inner.x_zeros - outer.x_zeros[1:]))
            result.record("interlacing_margin", min(above, below), 1e-12)
        result.cases += 1
    return result


def check_support_gap(config: RunConfig, rng: np.random.Generator) -> CheckResult:
    result = CheckResult("support_gap")
    n = min(30, config.processing.check_length)
    bound = 1.0 / math.sqrt(2.0)
    for _ in range(config.processing.check_pairs):
        pair = alternating_pair(rng, rng.uniform(1.0, 2.0, n))
        levels = w_zero_levels(pair, n)
        support_gap_check(pair, n, levels=levels)
        closest = min(float(np.min(np.abs(zs.x_zeros))) for zs in levels)
        result.record("gap_margin", closest - bound, -1e-9)
        result.cases += 1

    c = float(rng.uniform(0.2, 2.0))
    target = -c / math.sqrt(1.0 + c * c)
    for zs in w_zero_levels(alternating_pair(rng, np.full(n, c)), n):
        if zs.level % 2 == 1:
            result.record("odd_level_zero_miss", float(np.min(np.abs(zs.x_zeros - target))), 1e-10)
    result.cases += 1
    return result


def _closed_gap(params: ExampleParams) -> bool:
    return params.b1 + params.b2 == 0.0 or (params.c == 0.0 and params.b1 == params.b2)


def check_example_bands(config: RunConfig, rng: np.random.Generator) -> CheckResult:
    result = CheckResult("example_bands")
    thetas = np.linspace(0.0, TWO_PI, 1000, endpoint=False)
    for params in example_grid():
        alpha = np.array(example_alpha(params))
        error = float(np.max(np.abs(discriminant(alpha, thetas) - example_discriminant(params, thetas))))
        result.record("discriminant_error", error, 1e-10)

        found = band_structure(alpha, config.periodic.grid_per_period)
        plus1, minus1, plus2, minus2 = example_bands(params)
        miss = max(
            _circular_miss([plus1, plus2], found.plus_solutions),
            _circular_miss([minus1, minus2], found.minus_solutions),
        )
        if _closed_gap(params):
            result.record("closed_edge_error", miss, 1e-6)
        else:
            result.record("open_edge_error", miss, 1e-10)

        for band in found.bands:
            theta = float(np.mod(band.arc.start + 0.37 * band.arc.length, TWO_PI))
            expected = example_weight(params, theta)
            result.record("weight_rel_error", abs(ac_weight(alpha, theta) - expected) / expected, 1e-8)

        result.record("rotation_identity", rotation_identity_residual(params), 1e-14)
        if not bands_within_support(params):
            result.fail(f"bands leave the support arcs at {params}")
        result.cases += 1
    return result


def check_example_masses(config: RunConfig, rng: np.random.Generator) -> CheckResult:
    result = CheckResult("example_masses")
    for params in example_grid():
        alpha = np.array(example_alpha(params))
        expected_pair = example_masses(params)
        for expected, w in zip(expected_pair, (1.0 + 0.0j, rotation_point(params.c))):
            got = pure_point_mass(alpha, w)
            got_mass = got.mass if got is not None else 0.0
            if expected is None:
                result.record("spurious_mass", got_mass, 1e-12)
                continue
            if got is None:
                result.fail(f"no pure point at {w!r} for {params}")
                continue
            result.record("mass_error", abs(got_mass - expected.mass), 1e-12)
            if float(np.prod(got.q)) < 0.99:
                result.record("series_error", abs(series_mass(alpha, w) - got_mass), 1e-8)

        jump = maximal_parameters(example_pair(params).chain_with_tail()).jump_at_one
        first = expected_pair[0].mass if expected_pair[0] is not None else 0.0
        if params.b1 + params.b2 == 0.0:
            result.record("closed_jump_error", abs(jump - first), 1e-6)
        else:
            result.record("jump_error", abs(jump - first), 1e-10)
        result.cases += 1
    return result


def check_normalization(config: RunConfig, rng: np.random.Generator) -> CheckResult:
    result = CheckResult("normalization")
    for _ in range(10):
        c, b1, b2 = rng.uniform([-1.0, -0.8, -0.8], [1.0, 0.8, 0.8])
        params = ExampleParams(float(c), float(b1), float(b2))
        found = spectrum(np.array(example_alpha(params)), config.periodic, cross_check=False)
        result.record("mass_defect", abs(total_mass(found) - 1.0), 1e-3)
        result.cases += 1
    return result


def check_transforms(config: RunConfig, rng: np.random.Generator) -> CheckResult:
    result = CheckResult("transforms")
    length = max(2, 2 * (config.processing.check_length // 2))
    for _ in range(config.processing.check_pairs):
        c = np.repeat(rng.uniform(-2.0, 2.0, length // 2), 2)
        c[1::2] *= -1.0
        pair = SequencePair.from_minimal(c, np.concatenate([[0.0], rng.uniform(0.05, 0.95, length)]))
        data = unfold_alternating(pair)
        residual = float(np.max(np.abs(pair_to_verblunsky(data.pair_tilde).alpha - data.alpha_tilde)))
        result.record("unfolding_residual", residual, 1e-11)
        result.cases += 1

    c_const = float(rng.uniform(0.2, 2.0))
    pair = alternating_pair(rng, np.full(length, c_const))
    rotated = verblunsky_to_pair(rotate_alpha(pair_to_verblunsky(pair), rotation_point(c_const)))
    result.record("rotation_c_error", float(np.max(np.abs(rotated.c - c_const))), 1e-11)
    result.cases += 1

    n = min(30, length)
    pair = random_pair(rng, n, RESOLVABLE_C_SCALE)
    mirrored = np.mod(-w_zero_levels(pair, n)[-1].theta_zeros, TWO_PI)
    conj_thetas = w_zero_levels(conjugate_pair(pair), n)[-1].theta_zeros
    result.record("conjugate_zero_error", _circular_miss(list(mirrored), list(conj_thetas)), 1e-10)
    result.cases += 1
    return result


def check_periodicity(config: RunConfig, rng: np.random.Generator) -> CheckResult:
    result = CheckResult("periodicity")
    disagreements = 0
    for _ in range(config.processing.check_pairs):
        p = int(rng.integers(1, 5))
        block = random_alpha(rng, p, 0.8)
        for perturb in (False, True):
            alpha = np.tile(block, 6)
            if perturb:
                alpha[p + int(rng.integers(0, 4 * p))] += 1e-3
            pair = verblunsky_to_pair(alpha)
            report = is_periodic_pair(pair, p)
            direct = pair_to_verblunsky(pair).alpha
            direct_periodic = bool(np.max(np.abs(direct[p:] - direct[:-p])) < 1e-10)
            disagreements += int(report.periodic != direct_periodic) + int(report.periodic == perturb)
            result.cases += 1

        half = int(rng.integers(1, 3))
        built = parallel_alpha_from_parameters(rng.uniform(-2.0, 2.0, half), rng.uniform(-0.9, 0.9, 2 * half))
        disagreements += int(not parallel_lines_check(built))
        disagreements += int(parallel_lines_check(random_alpha(rng, 2 * half)))
        result.cases += 2

    p = 3
    m = np.concatenate([[0.0], np.tile(rng.uniform(0.05, 0.95, p), 4)])
    report = is_periodic_pair(SequencePair.from_minimal(np.zeros(4 * p), m, p), p)
    if not (report.periodic and report.symmetric):
        result.fail("odd-period pair with c = 0 is not reported periodic and symmetric")
    result.cases += 1

    result.record("disagreements", float(disagreements), 0.5)

    for _ in range(config.processing.check_pairs):
        p = int(rng.integers(1, 7))
        block = random_alpha(rng, p, 0.9)
        found = spectrum(block, config.periodic, cross_check=False)
        miss = abs(len(found.plus_solutions) - p) + abs(len(found.minus_solutions) - p)
        result.record("edge_count_error", float(miss), 0.5)
        result.record("band_count_error", float(abs(len(found.bands) - p)), 0.5)
        for point in found.pure_points:
            if float(np.prod(point.q)) < 0.99:
                result.record("series_error", abs(series_mass(block, point.point) - point.mass), 1e-8)
        result.cases += 1
    return result


def check_alternating_structure(config: RunConfig, rng: np.random.Generator) -> CheckResult:
    result = CheckResult("alternating_structure")
    x = np.linspace(-0.99, 0.99, 41)
    for n in range(1, 21):
        pair = alternating_pair(rng, np.full(2 * n, float(rng.uniform(-2.0, 2.0))))
        coeffs = r_poly(pair, 2 * n).coeffs
        result.record("r_imag_part", float(np.max(np.abs(coeffs.imag)) / np.max(np.abs(coeffs))), 1e-11)
        values = w_eval(pair, 2 * n, x)
        residual = float(np.max(np.abs(values - values[::-1])) / np.max(np.abs(values)))
        result.record("w_evenness", residual, 1e-10)
        result.cases += 1
    return result


CHECKS: Dict[str, Callable[[RunConfig, np.random.Generator], CheckResult]] = {
    "bijection_round_trip": check_round_trip,
    "quadrature_validity": check_quadrature,
    "interlacing": check_interlacing,
    "support_gap": check_support_gap,
    "example_bands": check_example_bands,
    "example_masses": check_example_masses,
    "normalization": check_normalization,
    "transforms": check_transforms,
    "periodicity": check_periodicity,
    "alternating_structure": check_alternating_structure,
}


def _run_one(name: str, config: RunConfig) -> CheckResult:
    rng = np.random.default_rng([config.processing.seed, list(CHECKS).index(name)])
    try:
        return CHECKS[name](config, rng)
    except ChainOpucError as e:
        logger.error(f"Check {name} raised {type(e).__name__}: {e.message}")
        failed = CheckResult(name)
        failed.fail(f"{type(e).__name__}: {e.message}")
        return failed


def run_checks(config: RunConfig, names: Optional[List[str]] = None) -> List[CheckResult]:
    """Run the named checks (all by default); results come back in registry order.

    Raises:
        ValueError: if a name is not a registered check
    """
    unknown = sorted(set(names or []) - set(CHECKS))
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(unknown)}")
    selected = [n for n in CHECKS if names is None or n in names]

    results: Dict[str, CheckResult] = {}
    with tqdm(total=len(selected), desc="Running checks", unit="check") as pbar:
        with ThreadPoolExecutor(max_workers=config.processing.max_workers) as executor:
            futures = {executor.submit(_run_one, name, config): name for name in selected}
            for future in as_completed(futures):
                result = future.result()
                results[result.name] = result
                if result.passed:
                    logger.debug(f"Check {result.name} passed over {result.cases} cases")
                else:
                    logger.warning(f"Check {result.name} failed: {result.message}")
                pbar.update(1)

    return [results[name] for name in selected]
