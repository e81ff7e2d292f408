"""Dispatch of one CLI command to the library and emission of its report."""

import math
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
from loguru import logger

from . import __version__
from .bijection import SequencePair, VerblunskySequence, pair_to_verblunsky, verblunsky_to_pair
from .chain_sequences import maximal_parameters
from .checks import run_checks
from .closed_form import (
    ExampleParams,
    bands_within_support,
    example_alpha,
    example_bands,
    example_discriminant,
    example_masses,
    example_weight,
    rotation_identity_residual,
)
from .config import RunConfig
from .exceptions import InvalidParametersError, OffBandError
from .io import CsvTable, SequenceInput, csv_text, json_text, load_sequence, write_artifacts
from .io.writers import rows_from_columns
from .periodic import PeriodicSpectrum, is_periodic_pair, sample_weight, spectrum, total_mass
from .polynomials import alternating_constant, q_poly, r_from_szego_residual, r_poly, szego_coeffs, w_from_r_check
from .quadrature import moments, quadrature, step_eval
from .transforms import conjugate_pair, rotate_alpha, rotation_point, unfold_alternating
from .zeros import support_gap_check, w_zero_levels, zero_arc_hull

EXIT_OK = 0
EXIT_CHECK_FAILED = 3


@dataclass
class CommandOutput:
    """JSON result plus CSV tables produced by one command."""

    result: Dict[str, Any]
    tables: List[CsvTable] = field(default_factory=list)
    exit_code: int = EXIT_OK


def pair_payload(pair: SequencePair) -> Dict[str, Any]:
    return {
        "c": pair.c,
        "m": pair.m,
        "d": pair.d,
        "b": pair.b,
        "tail_period": pair.periodic_tail,
    }


def spectrum_payload(result: PeriodicSpectrum) -> Dict[str, Any]:
    return {
        "p": result.p,
        "bands": [{"arc": band.arc.as_list(), "orientation": band.orientation} for band in result.bands],
        "gaps": [{"arc": gap.arc.as_list(), "closed": gap.closed} for gap in result.gaps],
        "plus_solutions": result.plus_solutions,
        "minus_solutions": result.minus_solutions,
        "candidates": [{"point": w, "theta": t} for w, t in zip(result.candidates, result.candidate_thetas)],
        "pure_points": [
            {"point": pp.point, "theta": pp.theta, "mass": pp.mass, "gamma": pp.gamma, "delta": pp.delta}
            for pp in result.pure_points
        ],
        "note": result.note,
    }


class SpectralRunner:
    def __init__(self, config: RunConfig):
        """
        Initialize the runner for a single command.

        Args:
            config: RunConfig instance with all settings
        """
        self.config = config
        self._commands = {
            "pair2alpha": self._cmd_pair2alpha,
            "alpha2pair": self._cmd_alpha2pair,
            "polys": self._cmd_polys,
            "zeros": self._cmd_zeros,
            "quadrature": self._cmd_quadrature,
            "cdf": self._cmd_cdf,
            "periodic": self._cmd_periodic,
            "weight": self._cmd_weight,
            "transform": self._cmd_transform,
            "demo": self._cmd_demo,
            "check": self._cmd_check,
        }

    def run(self) -> int:
        """Execute the configured command and emit its report; returns the process exit code."""
        command = self.config.command
        if command not in self._commands:
            raise InvalidParametersError(f"unknown command: {command}")
        logger.debug(f"Running {command}")
        output = self.execute()
        self.emit(output)
        return output.exit_code

    def execute(self) -> CommandOutput:
        return self._commands[self.config.command]()

    # ------------------------------------------------------------------
    # Input conversion
    # ------------------------------------------------------------------

    def _input(self) -> SequenceInput:
        return load_sequence(self.config.input_source)

    def _pair(self, seq: Optional[SequenceInput] = None) -> SequencePair:
        """Pair view of any input family; a bare chain sequence is the symmetric pair c = 0."""
        seq = seq or self._input()
        if seq.pair is not None:
            return seq.pair
        if seq.alpha is not None:
            return verblunsky_to_pair(
                seq.alpha,
                boundary_eps=self.config.bijection.boundary_eps,
                renormalize_every=self.config.bijection.renormalize_every,
            )
        chain = seq.chain
        logger.info("Chain sequence given without c; using the symmetric pair c = 0")
        return SequencePair(
            c=np.zeros(chain.length), chain=chain, periodic_tail=chain.periodic_tail, tail_basis="d"
        )

    def _alpha(self, seq: Optional[SequenceInput] = None) -> VerblunskySequence:
        seq = seq or self._input()
        if seq.alpha is not None:
            return seq.alpha
        return pair_to_verblunsky(self._pair(seq), self.config.bijection.renormalize_every)

    def _theta_grid(self) -> np.ndarray:
        return np.linspace(0.0, 2.0 * math.pi, self.config.output.samples)

    # ------------------------------------------------------------------
    # Commands
    # ------------------------------------------------------------------

    def _cmd_pair2alpha(self) -> CommandOutput:
        pair = self._pair()
        v = pair_to_verblunsky(pair, self.config.bijection.renormalize_every)
        result: Dict[str, Any] = {"alpha": v.alpha, "tau": v.tau, "tail_period": v.periodic_tail}
        if pair.periodic_tail is not None:
            chain_cfg = self.config.chain
            mp = maximal_parameters(
                pair.chain_with_tail(),
                depth=chain_cfg.initial_depth,
                tol=chain_cfg.tol,
                max_depth=chain_cfg.max_depth,
                method=chain_cfg.method,
            )
            result["maximal_parameters"] = {
                "M": mp.M,
                "jump_at_one": mp.jump_at_one,
                "determinate": mp.determinate,
                "method": mp.method,
            }
        n = np.arange(len(v.alpha))
        table = CsvTable("alpha", ["n", "re", "im"], rows_from_columns(n, v.alpha.real, v.alpha.imag))
        return CommandOutput(result, [table])

    def _cmd_alpha2pair(self) -> CommandOutput:
        seq = self._input()
        if seq.alpha is None:
            raise InvalidParametersError("alpha2pair needs an alpha input")
        pair = self._pair(seq)
        table = CsvTable(
            "pair", ["n", "c", "m", "d"], rows_from_columns(range(1, pair.length + 1), pair.c, pair.m[1:], pair.d)
        )
        return CommandOutput(pair_payload(pair), [table])

    def _cmd_polys(self) -> CommandOutput:
        seq = self._input()
        pair = self._pair(seq)
        n = self.config.n
        max_degree = self.config.polynomial.max_coeff_degree
        build = r_poly if self.config.family == "R" else q_poly

        polynomials = []
        rows = []
        for degree in range(1, n + 1):
            poly = build(pair, degree, max_degree)
            polynomials.append(
                {"n": degree, "coeffs": poly.coeffs, "self_inversive_residual": poly.self_inversive_residual()}
            )
            rows.extend([degree, k, z.real, z.imag] for k, z in enumerate(poly.coeffs))

        theta = np.linspace(0.0, 2.0 * math.pi, 66)[1:-1]
        szego_alpha = seq.alpha if seq.alpha is not None else pair_to_verblunsky(pair.extended(n))
        phi, phi_star = szego_coeffs(szego_alpha, n)
        result = {
            "family": self.config.family,
            "polynomials": polynomials,
            "szego": {"phi": phi.coeffs, "phi_star": phi_star.coeffs},
            "w_from_r_residual": float(np.max(w_from_r_check(pair, n, theta))),
            "r_from_szego_residual": float(np.max(r_from_szego_residual(pair, n, np.exp(1j * theta)))),
        }
        return CommandOutput(result, [CsvTable("polys", ["n", "k", "re", "im"], rows)])

    def _cmd_zeros(self) -> CommandOutput:
        pair = self._pair()
        cfg = self.config.zeros
        n = self.config.n
        levels = w_zero_levels(pair, n, cfg.tol, cfg.cluster_factor, cfg.theta_refine_margin, cfg.collapse_floor)
        last = levels[-1]
        result: Dict[str, Any] = {
            "level": n,
            "x": last.x_zeros,
            "theta": last.theta_zeros,
            "nodes": last.nodes,
            "arc_hull": {"heuristic": True, "arcs": [arc.as_list() for arc in zero_arc_hull(levels, cfg.hull_gap)]},
        }
        if self.config.support_gap:
            report = support_gap_check(pair, n, cfg.tol, levels)
            result["support_gap"] = {
                "c_bound": report.c_bound,
                "x_bound": report.x_bound,
                "theta_c": report.theta_c,
                "min_distance": report.min_distance,
                "levels": report.levels,
                "arcs": [arc.as_list() for arc in report.arcs],
            }
        rows = [[zs.level, j + 1, x, t] for zs in levels for j, (x, t) in enumerate(zip(zs.x_zeros, zs.theta_zeros))]
        return CommandOutput(result, [CsvTable("zeros", ["level", "j", "x", "theta"], rows)])

    def _discrete_measure(self):
        cfg = self.config.quadrature
        return quadrature(
            self._pair(),
            self.config.n,
            node_eps=cfg.node_eps,
            weight_floor=cfg.weight_floor,
            sum_tol=cfg.sum_tol,
            zero_tol=self.config.zeros.tol,
        )

    def _cmd_quadrature(self) -> CommandOutput:
        dm = self._discrete_measure()
        result = {
            "level": dm.level,
            "theta": dm.thetas,
            "weights": dm.weights,
            "weight_sum": float(np.sum(dm.weights)),
            "moments": moments(dm, self.config.quadrature.k_max),
        }
        table = CsvTable(
            "quadrature", ["j", "theta", "weight"], rows_from_columns(range(dm.level + 1), dm.thetas, dm.weights)
        )
        return CommandOutput(result, [table])

    def _cmd_cdf(self) -> CommandOutput:
        dm = self._discrete_measure()
        theta = self._theta_grid()
        psi = step_eval(dm, theta)
        result = {"level": dm.level, "theta": theta, "psi": psi, "jumps": dm.thetas}
        return CommandOutput(result, [CsvTable("cdf", ["theta", "psi"], rows_from_columns(theta, psi))])

    def _cmd_periodic(self) -> CommandOutput:
        seq = self._input()
        alpha = self._alpha(seq)
        found = spectrum(alpha, self.config.periodic)
        result = spectrum_payload(found)
        result["total_mass"] = total_mass(found)
        if seq.pair is not None and seq.pair.periodic_tail is not None:
            result["periodicity"] = is_periodic_pair(seq.pair, seq.pair.periodic_tail).as_dict()

        theta = self._theta_grid()
        weight = sample_weight(found.alpha, theta)
        tables = [
            CsvTable("weight", ["theta", "w"], rows_from_columns(theta, weight)),
            CsvTable(
                "pure_points",
                ["theta", "mass"],
                [[pp.theta, pp.mass] for pp in found.pure_points],
            ),
        ]
        return CommandOutput(result, tables)

    def _cmd_weight(self) -> CommandOutput:
        alpha = self._alpha()
        theta = self._theta_grid()
        weight = sample_weight(alpha, theta)
        result = {"theta": theta, "w": weight}
        return CommandOutput(result, [CsvTable("weight", ["theta", "w"], rows_from_columns(theta, weight))])

    def _cmd_transform(self) -> CommandOutput:
        op = self.config.op
        seq = self._input()
        if op == "conjugate":
            pair = conjugate_pair(self._pair(seq))
            result = {"op": op, **pair_payload(pair)}
        elif op == "unfold":
            data = unfold_alternating(self._pair(seq), renormalize_every=self.config.bijection.renormalize_every)
            result = {"op": op, **pair_payload(data.pair_tilde), "beta": data.beta, "alpha_tilde": data.alpha_tilde}
        else:
            beta = self._rotation(seq)
            rotated = rotate_alpha(self._alpha(seq), beta)
            result = {"op": op, "beta": beta, "alpha": rotated}
        return CommandOutput(result)

    def _rotation(self, seq: SequenceInput) -> complex:
        """--beta when given, else the rotation point of an alternating constant c."""
        if self.config.beta is not None:
            return complex(*self.config.beta)
        pair = self._pair(seq)
        return rotation_point(alternating_constant(pair, pair.length))

    def _cmd_demo(self) -> CommandOutput:
        c, b1, b2 = self.config.example
        params = ExampleParams(c, b1, b2)
        alpha = np.array(example_alpha(params))
        plus1, minus1, plus2, minus2 = example_bands(params)
        closed_points = [m for m in example_masses(params) if m is not None]
        generic = spectrum(alpha, self.config.periodic)

        theta = self._theta_grid()
        closed_weight = np.array([self._closed_weight(params, t) for t in theta])
        result = {
            "params": {"c": c, "b1": b1, "b2": b2},
            "alpha": alpha,
            "bands": [[plus1, minus1], [minus2, plus2]],
            "band_edges": {"theta1_plus": plus1, "theta1_minus": minus1, "theta2_plus": plus2, "theta2_minus": minus2},
            "pure_points": [{"point": m.point, "theta": m.theta, "mass": m.mass} for m in closed_points],
            "bands_within_support": bands_within_support(params),
            "rotation_identity_residual": rotation_identity_residual(params),
            "generic": {**spectrum_payload(generic), "total_mass": total_mass(generic)},
        }
        tables = [
            CsvTable("weight", ["theta", "w"], rows_from_columns(theta, closed_weight)),
            CsvTable(
                "discriminant",
                ["theta", "delta"],
                rows_from_columns(theta, example_discriminant(params, theta)),
            ),
            CsvTable("pure_points", ["theta", "mass"], [[m.theta, m.mass] for m in closed_points]),
            CsvTable("alpha", ["n", "re", "im"], rows_from_columns(range(2), alpha.real, alpha.imag)),
        ]
        return CommandOutput(result, tables)

    @staticmethod
    def _closed_weight(params: ExampleParams, theta: float) -> float:
        try:
            return example_weight(params, theta)
        except OffBandError:
            return 0.0

    def _cmd_check(self) -> CommandOutput:
        results = run_checks(self.config)
        passed = all(r.passed for r in results)
        if passed:
            logger.info("Invariant checks completed successfully")
        else:
            failed = [r.name for r in results if not r.passed]
            logger.error(f"Invariant checks failed: {', '.join(failed)}")
        result = {"passed": passed, "checks": [r.as_dict() for r in results]}
        return CommandOutput(result, exit_code=EXIT_OK if passed else EXIT_CHECK_FAILED)

    # ------------------------------------------------------------------
    # Emission
    # ------------------------------------------------------------------

    def emit(self, output: CommandOutput) -> None:
        """Write the report to stdout and, with format "both", CSV files to the output directory."""
        fmt = self.config.output.format
        report = json_text(self.config.command, output.result, __version__)

        if fmt == "csv":
            if not output.tables:
                logger.warning(f"{self.config.command} has no CSV form; writing JSON")
                sys.stdout.write(report)
                return
            sys.stdout.write(csv_text(output.tables[0]))
            return

        sys.stdout.write(report)
        if fmt == "both":
            files = {f"{table.name}.csv": csv_text(table) for table in output.tables}
            if self.config.output_dir is not None:
                files[f"{self.config.command}.json"] = report
            if files:
                write_artifacts(self.config.output_dir or self.config.output.directory, files)
