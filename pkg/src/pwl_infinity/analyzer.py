"""Analysis service shared by the command line and the HTTP API."""

import logging
import math
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .classify import classify_infinity
from .config import settings
from .cycles import find_cycles, truncation_roots
from .flow import trace_orbit
from .models import (
    CycleScan,
    InfinityClass,
    LoadedSpec,
    RegionMap,
    RunReport,
    SystemSpec,
    Trajectory,
    UnfoldingTarget,
    Window,
)
from .params import parse_spec_document, to_equilibrium, to_lienard, to_reduced
from .serialization import write_trajectory_csv
from .series import closed_form_coeffs, displacement_series, half_return_series
from .unfold import order3_unfold, region_boundaries, unfolded_spec

logger = logging.getLogger(__name__)

# Third-order weak focus with gamma_L = -1/8, x_L = 1
CRITICAL_REDUCED = {
    "gamma_L": "-1/8",
    "x_L": "1",
    "b": "-1/4",
    "gamma_R": "1/8",
    "x_R": "1",
}

# Nearby system with three big limit cycles
PERTURBED_REDUCED = {
    "gamma_L": "-1/8",
    "x_L": "1",
    "b": "-260534/1045519",
    "gamma_R": "1638355/13106841",
    "x_R": "552751/556327",
}

EXPECTED_CRITICAL_DELTA4 = 1.06495899308488
EXPECTED_PERTURBED_DELTAS = (-4.43719886e-8, 3.993655760e-5, -1.15001344e-2, 1.054869499)
EXPECTED_TRUNCATION_ROOTS = (0.002467460261, 0.003358360933, 0.005076128658)
EXPECTED_RECIPROCALS = (405.27501730, 297.76430224, 197.00052293)
EXPECTED_CYCLE_ORDINATES = (196.89979358, 297.91820638, 405.21567427)

# Default check tolerances: (kind, value)
CHECK_TOLERANCES = {
    "critical_delta4_closed_form": ("abs", 1e-12),
    "critical_delta4_printed": ("abs", 1e-11),
    "perturbed_deltas": ("rel", 1e-7),
    "truncation_roots": ("abs", 1e-10),
    "truncation_reciprocals": ("rel", 1e-7),
    "truncation_count": ("abs", 0.0),
    "cycle_count": ("abs", 0.0),
    "cycle_ordinates": ("rel", 1e-6),
    "cycle_closure": ("rel", 1e-6),
}


def reduced_document(values: Dict[str, str]) -> Dict[str, str]:
    return {"form": "reduced", **values}


def _reduced_spec(values: Dict[str, str]) -> SystemSpec:
    return parse_spec_document(reduced_document(values)).spec


def critical_spec() -> SystemSpec:
    return _reduced_spec(CRITICAL_REDUCED)


def perturbed_spec() -> SystemSpec:
    return _reduced_spec(PERTURBED_REDUCED)


class InfinityAnalyzer:
    """Runs the analyses and assembles their reports."""

    def __init__(self):
        """Initialize the analyzer."""
        logger.info(
            f"Infinity analyzer initialized (series cap {settings.series_max_order}, "
            f"scan grid {settings.cycle_grid})"
        )

    def describe_spec(self, loaded: LoadedSpec) -> Dict[str, Any]:
        """
        Echo a spec in every parametrization.

        Args:
            loaded: Spec with its form and verbatim inputs

        Returns:
            Dictionary with the canonical, Lienard, equilibrium and reduced forms
        """
        spec = loaded.spec
        return {
            "form": loaded.form,
            "provenance": loaded.provenance,
            "centering_shift": loaded.centering_shift,
            "canonical": spec,
            "lienard": to_lienard(spec),
            "equilibrium": to_equilibrium(spec),
            "reduced": to_reduced(spec),
        }

    def classify(self, spec: SystemSpec, tol: Optional[float] = None) -> InfinityClass:
        return classify_infinity(spec, tol)

    def coefficients(self, spec: SystemSpec, order: int) -> Dict[str, Any]:
        """
        Series coefficients of both half-return maps and of the displacement.

        Args:
            spec: Canonical spec
            order: Truncation order

        Returns:
            Dictionary with the recurrence output and the closed-form low orders
        """
        left = half_return_series(spec, "L", order)
        right = half_return_series(spec, "R", order)
        deltas = displacement_series(spec, order)
        logger.info(f"Computed series coefficients to order {order}")
        return {
            "order": order,
            "deltas": deltas.deltas,
            "L": left.u_series.coeffs,
            "R": right.u_series.coeffs,
            "time_L": left.time_series.coeffs,
            "time_R": right.time_series.coeffs,
            "closed_form": closed_form_coeffs(spec),
        }

    def cycles(
        self, spec: SystemSpec, u0_max: Optional[float] = None, grid: Optional[int] = None
    ) -> CycleScan:
        return find_cycles(spec, u0_max, grid)

    def trace(
        self,
        spec: SystemSpec,
        start: Sequence[float],
        turns: float = 1,
        samples_per_turn: int = 256,
    ) -> Trajectory:
        return trace_orbit(spec, start, turns, samples_per_turn)

    def unfold(self, gamma_L: float, x_L: float, target: UnfoldingTarget) -> Dict[str, Any]:
        """
        Realize a target near the third-order weak focus.

        Returns:
            The unfolding result and the canonical spec it describes
        """
        result = order3_unfold(gamma_L, x_L, target)
        return {"result": result, "spec": unfolded_spec(result)}

    def region(self, delta3: float, window: Window, resolution: int = 32) -> RegionMap:
        return region_boundaries(delta3, window, resolution)

    def reproduce_example(
        self, tolerance: Optional[float] = None, trace_dir: Optional[Path] = None
    ) -> Tuple[Dict[str, Any], bool]:
        """
        Rerun the worked example and compare with its reference values.

        Args:
            tolerance: Replaces every check tolerance when given
            trace_dir: Directory for the polylines of the found cycles

        Returns:
            Report outputs and whether every check passed
        """
        checks: List[Dict[str, Any]] = []

        def check(name: str, value: float, expected: float) -> None:
            kind, default = CHECK_TOLERANCES[name]
            tol = default if tolerance is None else tolerance
            error = abs(value - expected)
            if kind == "rel":
                error /= abs(expected)
            checks.append(
                {
                    "name": name,
                    "value": value,
                    "expected": expected,
                    "error": error,
                    "kind": kind,
                    "tolerance": tol,
                    "passed": error <= tol,
                }
            )

        critical = critical_spec()
        critical_delta4 = displacement_series(critical, 4)[4]
        closed = 65 / 384 * math.exp(math.pi / 8) * (1 + math.exp(3 * math.pi / 8))
        check("critical_delta4_closed_form", critical_delta4, closed)
        check("critical_delta4_printed", critical_delta4, EXPECTED_CRITICAL_DELTA4)

        perturbed = perturbed_spec()
        deltas = displacement_series(perturbed, 4).deltas
        for value, expected in zip(deltas, EXPECTED_PERTURBED_DELTAS):
            check("perturbed_deltas", value, expected)

        roots = truncation_roots(deltas)
        for value, expected in zip(roots.roots, EXPECTED_TRUNCATION_ROOTS):
            check("truncation_roots", value, expected)
        for value, expected in zip(roots.roots, EXPECTED_RECIPROCALS):
            check("truncation_reciprocals", 1.0 / value, expected)
        check("truncation_count", float(roots.count), 3.0)

        scan = find_cycles(perturbed)
        check("cycle_count", float(len(scan.cycles)), 3.0)
        ordinates = sorted(cycle.y_top for cycle in scan.cycles)
        for value, expected in zip(ordinates, EXPECTED_CYCLE_ORDINATES):
            check("cycle_ordinates", value, expected)

        traces = []
        if trace_dir is not None:
            trace_dir = Path(trace_dir)
            trace_dir.mkdir(parents=True, exist_ok=True)
            for i, cycle in enumerate(scan.cycles, start=1):
                trajectory = trace_orbit(perturbed, (0.0, cycle.y_top), turns=1)
                end = trajectory.crossings[-1].y if trajectory.crossings else math.nan
                check("cycle_closure", end, cycle.y_top)
                path = trace_dir / f"cycle_{i}.csv"
                write_trajectory_csv(trajectory, path)
                traces.append(str(path))

        passed = all(c["passed"] for c in checks)
        logger.info(
            f"Example reproduction {'passed' if passed else 'failed'} "
            f"({sum(c['passed'] for c in checks)}/{len(checks)} checks)"
        )
        outputs = {
            "critical_delta4": critical_delta4,
            "perturbed_deltas": deltas,
            "truncation_roots": roots.roots,
            "reciprocals": [1.0 / r for r in roots.roots],
            "cycles": scan.cycles,
            "traces": traces,
            "checks": checks,
            "status": "PASS" if passed else "FAIL",
        }
        return outputs, passed

    def report(
        self,
        command: str,
        inputs: Dict[str, Any],
        outputs: Dict[str, Any],
        started: float,
    ) -> RunReport:
        """
        Assemble a run report.

        Args:
            command: Sub-command echo
            inputs: Inputs as given
            outputs: Results of the run
            started: time.perf_counter() at the start of the run

        Returns:
            Report; identical inputs give identical reports apart from timing
        """
        tolerances = {
            name: value
            for name, value in settings.model_dump().items()
            if isinstance(value, float) and name != "trace_max_time"
        }
        return RunReport(
            command=command,
            version=__version__,
            inputs=inputs,
            outputs=outputs,
            tolerances=tolerances,
            timing=time.perf_counter() - started,
        )

