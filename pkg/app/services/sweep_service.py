import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

import numpy as np

from app import __version__
from app.errors import FilteredToZeroError, LabError
from app.models.models import (
    R_MAX,
    FilterMode,
    ScenarioConfig,
    ScenarioFilter,
    Subsystem,
    SweepResult,
    SweepRow,
)
from app.services.filters import apply_filter
from app.services.measures import negativity
from app.services.rindler import accelerate
from app.services.states import one_param_state

logger = logging.getLogger(__name__)

FIGURE_STRENGTHS = (0.1, 0.3, 0.5, 0.7, 0.9)
# 0.8 in the strength-sweep figures lies outside [0, pi/4]; pi/4 is the nearest admissible r
FIGURE_FIXED_R = (0.2, 0.4, 0.6, R_MAX)
FIGURE_IDS = (1, 2, 3, 4, 5, 6)

# figure id -> (accelerated subsystem, filtered subsystem); 3 and 6 sweep both filters
_R_CURVES = {
    1: (Subsystem.QUBIT, Subsystem.QUBIT),
    2: (Subsystem.QUBIT, Subsystem.QUTRIT),
    4: (Subsystem.QUTRIT, Subsystem.QUBIT),
    5: (Subsystem.QUTRIT, Subsystem.QUTRIT),
}
_STRENGTH_CURVES = {3: Subsystem.QUBIT, 6: Subsystem.QUTRIT}


def r_grid(steps: int = 101, r_min: float = 0.0, r_max: float = R_MAX) -> List[float]:
    """Uniform Rindler grid, endpoints included."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if steps == 1:
        return [float(r_min)]
    return [float(x) for x in np.linspace(r_min, r_max, steps)]


def strength_grid(steps: int = 101, low: float = 0.005, high: float = 0.995) -> List[float]:
    """Uniform filter-strength grid strictly inside (0, 1)."""
    return [float(x) for x in np.linspace(low, high, steps)]


def figure_preset(
    figure_id: int, mu: float, mode: FilterMode = FilterMode.POSTSELECT
) -> List[ScenarioConfig]:
    """Scenario list behind one of the six published figures.

    Figures 1, 2, 4, 5 plot negativity against r for the unfiltered baseline
    and strengths 0.1..0.9. Figures 3 and 6 plot negativity against filter
    strength at four fixed r, first for the qubit filter then for the qutrit.
    ``mode`` applies to qutrit filters only; a channel keeps the pair level of
    an accelerated qutrit.
    """
    mode = FilterMode(mode)
    if figure_id in _R_CURVES:
        accelerated, target = _R_CURVES[figure_id]
        target_mode = mode if target == Subsystem.QUTRIT else FilterMode.POSTSELECT
        grid = r_grid()
        configs = [ScenarioConfig(mu=mu, accelerated=accelerated, r_grid=grid)]
        for strength in FIGURE_STRENGTHS:
            configs.append(
                ScenarioConfig(
                    mu=mu,
                    accelerated=accelerated,
                    filtered=ScenarioFilter(target=target, strength=strength, mode=target_mode),
                    r_grid=grid,
                )
            )
        return configs
    if figure_id in _STRENGTH_CURVES:
        accelerated = _STRENGTH_CURVES[figure_id]
        strengths = strength_grid()
        configs = []
        for target in (Subsystem.QUBIT, Subsystem.QUTRIT):
            target_mode = mode if target == Subsystem.QUTRIT else FilterMode.POSTSELECT
            for r in FIGURE_FIXED_R:
                configs.append(
                    ScenarioConfig(
                        mu=mu,
                        accelerated=accelerated,
                        filtered=ScenarioFilter(target=target, mode=target_mode),
                        r_grid=[r],
                        strength_grid=strengths,
                    )
                )
        return configs
    raise ValueError(f"unknown figure id {figure_id}; expected one of {list(FIGURE_IDS)}")


def evaluate_point(cfg: ScenarioConfig, r: float, strength: Optional[float]) -> Optional[float]:
    """state -> accelerate -> optional filter -> negativity; None if filtering fails."""
    rho = accelerate(one_param_state(cfg.mu), cfg.accelerated, r)
    if cfg.filtered is not None:
        try:
            rho = apply_filter(rho, cfg.filtered.spec(strength))
        except FilteredToZeroError:
            return None
    return negativity(rho)


class SweepService:
    def __init__(self, workers: Optional[int] = None):
        if workers is None:
            workers = int(os.getenv("SWEEP_WORKERS", "1"))
        self.workers = max(1, workers)

    def grid_points(self, cfg: ScenarioConfig) -> List[Tuple[float, Optional[float]]]:
        """Canonical row order: r outer, strength inner."""
        if cfg.strength_grid is not None:
            return [(r, s) for r in cfg.r_grid for s in cfg.strength_grid]
        strength = cfg.filtered.strength if cfg.filtered is not None else None
        return [(r, strength) for r in cfg.r_grid]

    def run_scenario(self, cfg: ScenarioConfig) -> SweepResult:
        """Evaluate every grid point of ``cfg``.

        Points may run on a thread pool; ``map`` keeps results in grid order
        so output does not depend on the worker count.
        """
        points = self.grid_points(cfg)
        logger.info("running scenario '%s' over %d points", cfg.label, len(points))

        def run(point: Tuple[float, Optional[float]]) -> SweepRow:
            r, strength = point
            value = evaluate_point(cfg, r, strength)
            logger.debug("r=%g strength=%s negativity=%s", r, strength, value)
            return SweepRow(r=r, strength=strength, negativity=value)

        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                rows = list(pool.map(run, points))
        else:
            rows = [run(point) for point in points]

        failed = sum(row.negativity is None for row in rows)
        if failed:
            logger.warning("%d of %d points had a failed post-selection", failed, len(rows))
        return SweepResult(scenario=cfg, rows=rows, version=__version__)

    def run_figure(
        self, figure_id: int, mu: float, mode: FilterMode = FilterMode.POSTSELECT
    ) -> List[SweepResult]:
        configs = figure_preset(figure_id, mu, mode)
        logger.info("figure %d: %d curves at mu=%g", figure_id, len(configs), mu)
        results = []
        for cfg in configs:
            try:
                results.append(self.run_scenario(cfg))
            except LabError:
                logger.exception("figure %d curve '%s' failed", figure_id, cfg.label)
                raise
        return results
