import csv
import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union
from xml.sax.saxutils import escape

import numpy as np

from app.errors import OutputError
from app.models.models import FilterMode, ScenarioConfig, Subsystem, SweepResult, SweepRow
from app.models.quantum import DensityMatrix

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

SVG_WIDTH = 800
SVG_HEIGHT = 500
_MARGIN_LEFT, _MARGIN_RIGHT, _MARGIN_TOP, _MARGIN_BOTTOM = 70, 190, 30, 60
_PALETTE = ("#000000", "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
_DASHES = ("", "8,4", "2,3", "8,3,2,3", "12,4", "4,4", "8,3,2,3,2,3", "1,2")


def format_number(value: Optional[float]) -> str:
    """Shortest round-trip decimal, or NA."""
    return "NA" if value is None else repr(float(value) + 0.0)


def scenario_line(cfg: ScenarioConfig) -> str:
    if cfg.filtered is None:
        target, mode, pair = "none", "NA", "NA"
    elif cfg.filtered.target == Subsystem.QUBIT:
        target, mode, pair = "qubit", FilterMode.POSTSELECT.value, "NA"
    else:
        target = "qutrit"
        mode, pair = cfg.filtered.mode.value, cfg.filtered.pair_policy.value
    return (
        f"# scenario: mu={cfg.mu:.17g} accelerated={cfg.accelerated.value} filter={target} "
        f"strength-mode={mode} pair={pair}"
    )


class OutputService:
    def __init__(self):
        pass

    def render_csv(self, result: SweepResult) -> str:
        lines = [
            f"# unruh-filter-lab v{result.version}",
            scenario_line(result.scenario),
            "r,strength,negativity",
        ]
        for row in result.rows:
            lines.append(
                ",".join(
                    (format_number(row.r), format_number(row.strength), format_number(row.negativity))
                )
            )
        return "\n".join(lines) + "\n"

    def write_csv(self, result: SweepResult, path: PathLike) -> None:
        """Write one sweep as UTF-8, LF-terminated CSV with two comment lines."""
        path = Path(path)
        try:
            path.write_bytes(self.render_csv(result).encode("utf-8"))
        except OSError as e:
            logger.error("Error writing CSV %s: %s", path, e)
            raise OutputError(path, f"cannot write CSV: {e.strerror or e}") from e
        logger.info("wrote %d rows to %s", len(result.rows), path)

    def read_csv(self, path: PathLike) -> List[SweepRow]:
        """Parse the data rows of a CSV written by ``write_csv``."""
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise OutputError(path, f"cannot read CSV: {e.strerror or e}") from e

        def parse(field: str) -> Optional[float]:
            return None if field == "NA" else float(field)

        data = [line for line in text.splitlines() if line and not line.startswith("#")]
        reader = csv.reader(data)
        header = next(reader, None)
        if header != ["r", "strength", "negativity"]:
            raise OutputError(path, f"unexpected CSV header {header}")
        rows = []
        for fields in reader:
            r, strength, value = fields
            rows.append(SweepRow(r=float(r), strength=parse(strength), negativity=parse(value)))
        return rows

    def render_svg(self, results: Sequence[SweepResult], labels: Optional[Sequence[str]] = None) -> str:
        """Line chart with one polyline per result, axis ticks and a legend."""
        if labels is None:
            labels = [result.label for result in results]
        if len(labels) != len(results):
            raise ValueError("one label per result is required")

        by_strength = any(result.scenario.strength_grid is not None for result in results)
        xs = [
            (row.strength if by_strength else row.r)
            for result in results
            for row in result.rows
            if (row.strength if by_strength else row.r) is not None
        ]
        x_lo, x_hi = (min(xs), max(xs)) if xs else (0.0, 1.0)
        if x_hi <= x_lo:
            x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
        ys = [row.negativity for result in results for row in result.rows if row.negativity is not None]
        y_lo, y_hi = 0.0, max(1.0, max(ys, default=1.0))

        plot_w = SVG_WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
        plot_h = SVG_HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM

        def sx(x: float) -> float:
            return _MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

        def sy(y: float) -> float:
            return _MARGIN_TOP + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h

        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" '
            f'viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
            f'<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="#ffffff"/>',
            f'<rect x="{_MARGIN_LEFT}" y="{_MARGIN_TOP}" width="{plot_w}" height="{plot_h}" '
            'fill="none" stroke="#000000"/>',
        ]
        for tick in np.linspace(x_lo, x_hi, 5):
            x = sx(tick)
            bottom = _MARGIN_TOP + plot_h
            out.append(f'<line x1="{x:.2f}" y1="{bottom}" x2="{x:.2f}" y2="{bottom + 5}" stroke="#000000"/>')
            out.append(
                f'<text x="{x:.2f}" y="{bottom + 20}" font-size="12" text-anchor="middle">{tick:.3g}</text>'
            )
        for tick in np.linspace(y_lo, y_hi, 6):
            y = sy(tick)
            out.append(
                f'<line x1="{_MARGIN_LEFT - 5}" y1="{y:.2f}" x2="{_MARGIN_LEFT}" y2="{y:.2f}" stroke="#000000"/>'
            )
            out.append(
                f'<text x="{_MARGIN_LEFT - 8}" y="{y + 4:.2f}" font-size="12" text-anchor="end">{tick:.3g}</text>'
            )
        x_label = "strength" if by_strength else "r"
        out.append(
            f'<text x="{_MARGIN_LEFT + plot_w / 2:.2f}" y="{SVG_HEIGHT - 15}" font-size="14" '
            f'text-anchor="middle">{x_label}</text>'
        )
        out.append(
            f'<text x="18" y="{_MARGIN_TOP + plot_h / 2:.2f}" font-size="14" text-anchor="middle" '
            f'transform="rotate(-90 18 {_MARGIN_TOP + plot_h / 2:.2f})">negativity</text>'
        )

        for index, (result, label) in enumerate(zip(results, labels)):
            color = _PALETTE[index % len(_PALETTE)]
            dash = _DASHES[index % len(_DASHES)]
            dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
            points = " ".join(
                f"{sx(row.strength if by_strength else row.r):.2f},{sy(row.negativity):.2f}"
                for row in result.rows
                if row.negativity is not None
            )
            out.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash_attr} points="{points}"/>'
            )
            legend_y = _MARGIN_TOP + 15 + 20 * index
            legend_x = SVG_WIDTH - _MARGIN_RIGHT + 15
            out.append(
                f'<line x1="{legend_x}" y1="{legend_y}" x2="{legend_x + 30}" y2="{legend_y}" '
                f'stroke="{color}" stroke-width="1.5"{dash_attr}/>'
            )
            out.append(
                f'<text x="{legend_x + 36}" y="{legend_y + 4}" font-size="12">{escape(label)}</text>'
            )
        out.append("</svg>")
        return "\n".join(out) + "\n"

    def write_svg(
        self,
        results: Sequence[SweepResult],
        path: PathLike,
        labels: Optional[Sequence[str]] = None,
    ) -> None:
        path = Path(path)
        try:
            path.write_bytes(self.render_svg(results, labels).encode("utf-8"))
        except OSError as e:
            logger.error("Error writing SVG %s: %s", path, e)
            raise OutputError(path, f"cannot write SVG: {e.strerror or e}") from e
        logger.info("wrote %d curves to %s", len(results), path)

    def format_dump(self, rho: DensityMatrix) -> str:
        """Labeled real/imag blocks, row-major, 15 significant digits."""
        lines = [f"dims={rho.dims[0]}x{rho.dims[1]}", "real:"]
        for row in np.real(rho.matrix):
            lines.append(" ".join(f"{value + 0.0:.15g}" for value in row))
        lines.append("imag:")
        for row in np.imag(rho.matrix):
            lines.append(" ".join(f"{value + 0.0:.15g}" for value in row))
        return "\n".join(lines)
