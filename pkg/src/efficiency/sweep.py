"""
Efficiency sweeps over grids of symmetric standard-form states.

Each grid point is an independent work item run through the sweep
executor; unphysical, PPT and (for coherent attacks) unsecurable points are
recorded as skipped with a reason.
"""
import asyncio
import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field

from error_handling.exceptions import ConfigurationError, EmptySweep, GaussQKDError
from efficiency.integrator import EfficiencyCheck, QuadratureConfig, efficiency, verify_efficiency
from output.generator import OutputGenerator
from qkd_protocol.security import Attack, accept_interval
from qkd_protocol.states import SymmetricStdState
from sweep_runner.executor import SweepExecutor

logger = logging.getLogger(__name__)

CSV_DIGITS = 12
RECORD_HEADER = ["lambda", "c_x", "c_p", "log_negativity", "purity", "param", "efficiency", "attack"]
VERIFY_HEADER = ["mc_mean", "mc_standard_error", "mc_consistent"]
SKIPPED_HEADER = ["lambda", "c_x", "c_p", "reason"]

GridPoint = Tuple[float, float, float]


def format_number(value: float, digits: int = CSV_DIGITS) -> str:
    return format(float(value), f".{digits}g")


@dataclass(frozen=True)
class SweepRecord:
    """One evaluated state, with the Monte-Carlo cross-check when the sweep verified it."""
    lam: float
    c_x: float
    c_p: float
    log_negativity: float
    purity: float
    param: float
    efficiency: float
    attack: str
    check: Optional[EfficiencyCheck] = None

    def to_row(self) -> List[str]:
        numbers = [self.lam, self.c_x, self.c_p, self.log_negativity, self.purity, self.param, self.efficiency]
        row = [format_number(x) for x in numbers] + [self.attack]
        if self.check is not None:
            mc = self.check.monte_carlo
            row += [format_number(mc.mean), format_number(mc.standard_error), str(self.check.consistent).lower()]
        return row

    def as_dict(self) -> dict:
        values = dict(zip(RECORD_HEADER, [self.lam, self.c_x, self.c_p, self.log_negativity,
                                          self.purity, self.param, self.efficiency, self.attack]))
        if self.check is not None:
            mc = self.check.monte_carlo
            values.update(zip(VERIFY_HEADER, [mc.mean, mc.standard_error, self.check.consistent]))
        return values


@dataclass(frozen=True)
class SkippedPoint:
    """A grid point that was not evaluated."""
    lam: float
    c_x: float
    c_p: float
    reason: str

    def to_row(self) -> List[str]:
        return [format_number(self.lam), format_number(self.c_x), format_number(self.c_p), self.reason]


@dataclass
class SweepResult:
    """Evaluated records and skipped points, both in grid order."""
    records: List[SweepRecord] = field(default_factory=list)
    skipped: List[SkippedPoint] = field(default_factory=list)

    def __iter__(self) -> Iterator[SweepRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def verified(self) -> bool:
        return any(r.check is not None for r in self.records)

    @property
    def inconsistent(self) -> List[SweepRecord]:
        """Records whose quadrature value falls outside the Monte-Carlo tolerance."""
        return [r for r in self.records if r.check is not None and not r.check.consistent]


class GridSpec(BaseModel):
    """
    Default sweep grid: lambda on a linear range, c_x = f_x * lambda and
    c_p = f_p * c_x with f_x in (0, 1) and f_p in [-1, 1].
    """
    lambda_min: float = Field(1.05, ge=1.0, description="Smallest lambda")
    lambda_max: float = Field(3.0, ge=1.0, description="Largest lambda")
    n_lambda: int = Field(20, ge=1, description="Number of lambda values")
    n_cx: int = Field(25, ge=1, description="Number of c_x fractions in (0, 1)")
    n_cp: int = Field(21, ge=1, description="Number of c_p fractions in [-1, 1]")


def default_grid(spec: Optional[GridSpec] = None) -> List[GridPoint]:
    """Deterministic (lambda, c_x, c_p) triples; inadmissible ones are filtered by sweep."""
    spec = spec or GridSpec()
    if spec.lambda_max < spec.lambda_min:
        raise ConfigurationError(
            f"lambda_max={spec.lambda_max} is smaller than lambda_min={spec.lambda_min}"
        )
    lambdas = np.linspace(spec.lambda_min, spec.lambda_max, spec.n_lambda)
    cx_fractions = np.linspace(0.0, 1.0, spec.n_cx + 2)[1:-1]
    cp_fractions = np.linspace(-1.0, 1.0, spec.n_cp) if spec.n_cp > 1 else np.array([1.0])
    return [
        (float(lam), float(fx * lam), float(fp * fx * lam))
        for lam in lambdas
        for fx in cx_fractions
        for fp in cp_fractions
    ]


def load_grid_csv(path: Union[str, Path]) -> List[GridPoint]:
    """
    Read (lambda, c_x, c_p) triples from a CSV file; a header row is optional.

    Raises:
        ConfigurationError: If a row does not hold three numbers
    """
    points: List[GridPoint] = []
    with open(path, newline="", encoding="utf-8") as handle:
        for line_no, row in enumerate(csv.reader(handle), start=1):
            cells = [cell.strip() for cell in row if cell.strip()]
            if not cells or cells[0].startswith("#"):
                continue
            try:
                values = [float(cell) for cell in cells]
            except ValueError:
                if line_no == 1:
                    continue
                raise ConfigurationError(f"{path}:{line_no}: non-numeric grid row {row}")
            if len(values) != 3:
                raise ConfigurationError(f"{path}:{line_no}: expected lambda,c_x,c_p; got {row}")
            points.append((values[0], values[1], values[2]))
    logger.info(f"Loaded {len(points)} grid points from {path}")
    return points


def evaluate_point(
    point: GridPoint,
    attack: Attack,
    config: QuadratureConfig,
    index: int = 0,
    verify: bool = False,
) -> Union[SweepRecord, SkippedPoint]:
    """Evaluate one grid point, converting admissibility failures into a skip reason."""
    lam, cx, cp = point
    try:
        state = SymmetricStdState(lam, cx, cp)
        interval = accept_interval(state, None, attack)
        value = efficiency(state, attack, config)
    except GaussQKDError as error:
        return SkippedPoint(lam, cx, cp, f"{type(error).__name__}: {error}")

    check = verify_efficiency(state, attack, config, stream=index, n_sigma=config.verify_sigma) if verify else None
    return SweepRecord(
        lam=state.lam,
        c_x=state.c_x,
        c_p=state.c_p,
        log_negativity=state.log_negativity,
        purity=state.purity,
        param=interval.param,
        efficiency=value,
        attack=Attack(attack).value,
        check=check,
    )


async def sweep_async(
    param_grid: Sequence[GridPoint],
    attack: Attack = Attack.INDIVIDUAL,
    config: Optional[QuadratureConfig] = None,
    threads: Optional[int] = None,
    verify: bool = False,
) -> SweepResult:
    """Coroutine behind sweep(), for callers already inside an event loop."""
    config = config or QuadratureConfig()
    attack = Attack(attack)
    executor = SweepExecutor(max_workers=threads)
    for index, point in enumerate(param_grid):
        executor.add_task(index, evaluate_point, args=(tuple(point), attack, config, index, verify))

    outcomes = await executor.execute()
    result = SweepResult()
    for index in sorted(outcomes):
        outcome = outcomes[index]
        if isinstance(outcome, SweepRecord):
            result.records.append(outcome)
        else:
            logger.debug(f"Skipped ({outcome.lam:g}, {outcome.c_x:g}, {outcome.c_p:g}): {outcome.reason}")
            result.skipped.append(outcome)

    logger.info(f"Sweep finished: {len(result.records)} records, {len(result.skipped)} skipped")
    if verify and result.inconsistent:
        logger.warning(f"{len(result.inconsistent)} of {len(result.records)} points disagree with Monte-Carlo")
    if not result.records:
        raise EmptySweep(f"No admissible state among {len(param_grid)} grid points for {attack.value} attacks")
    return result


def sweep(
    param_grid: Sequence[GridPoint],
    attack: Attack = Attack.INDIVIDUAL,
    config: Optional[QuadratureConfig] = None,
    threads: Optional[int] = None,
    verify: bool = False,
) -> SweepResult:
    """
    Evaluate the efficiency over a grid of states.

    Args:
        param_grid: (lambda, c_x, c_p) triples
        attack: Attack model
        config: Quadrature settings shared by every point
        threads: Worker threads; defaults to the number of logical cores
        verify: Also run the Monte-Carlo oracle per point and attach the check
                to each record (tolerance: config.verify_sigma)

    Returns:
        SweepResult with records and skipped points in grid order

    Raises:
        EmptySweep: If no grid point is admissible
    """
    return asyncio.run(sweep_async(param_grid, attack, config, threads, verify))


def write_sweep(
    result: SweepResult,
    generator: OutputGenerator,
    records_path: str = "sweep.csv",
    skipped_path: str = "skipped.csv",
) -> Tuple[str, str]:
    """Write the records and the skipped-points sidecar; returns both paths."""
    header = RECORD_HEADER + VERIFY_HEADER if result.verified else RECORD_HEADER
    records = generator.write_csv(records_path, header, [r.to_row() for r in result.records], overwrite=True)
    skipped = generator.write_csv(skipped_path, SKIPPED_HEADER, [s.to_row() for s in result.skipped], overwrite=True)
    return records, skipped
