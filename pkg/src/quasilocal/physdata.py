"""Physical surface data: construction, ingestion, persistence.

A physical surface is a metric together with the norm of its spacetime
mean curvature vector and the connection one-form of the frame aligned
with it.  Everything downstream (energy evaluation, minimization,
certification) consumes this triple and nothing else, so data can come
from closed-form families, from a lifted surface, or from a text table.

Files are whitespace-separated decimal tables with one comment line
declaring the grid size and one header line naming the columns:

    # n=32
    theta P Q normH alpha_theta
    <one row per node, 17 significant digits>

Node positions are regenerated from the declared grid size on load and
checked against the theta column; values are never interpolated.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .geometry import (
    AxisymMetric,
    Grid,
    InvalidParameterError,
    OneForm,
    _check_field,
    make_grid,
    round_sphere,
)
from .embedding import embed_lifted, extrinsic_data

COLUMNS = ("theta", "P", "Q", "normH", "alpha_theta")


class HorizonError(InvalidParameterError):
    """The requested sphere lies at or inside the horizon radius."""


class DataFormatError(ValueError):
    """A data table violates the expected layout or value ranges."""


@dataclass(frozen=True)
class PhysicalData:
    """Surface data (metric, |H|, alpha_H) with a provenance tag."""

    metric: AxisymMetric
    norm_H: np.ndarray
    alpha_H: OneForm
    provenance: str

    def __post_init__(self):
        norm_h = _check_field(self.metric.grid, self.norm_H, "normH")
        j = int(np.argmin(norm_h))
        if norm_h[j] <= 0.0:
            raise InvalidParameterError(
                f"normH must be positive; normH = {norm_h[j]} at node {j}"
            )
        object.__setattr__(self, "norm_H", norm_h)


def schwarzschild_sphere(grid: Grid, mass: float, radius: float) -> PhysicalData:
    """Round coordinate sphere in the time-symmetric slice of mass m.

    |H| = (2/r) sqrt(1 - 2m/r) and alpha_H = 0, so the zero time
    function solves the criticality equation for this data.
    """
    if mass < 0.0:
        raise InvalidParameterError(f"mass must be nonnegative, got {mass}")
    if radius <= 2.0 * mass:
        raise HorizonError(
            f"radius {radius} does not lie outside the horizon radius {2.0 * mass}"
        )
    norm_h = np.full(grid.n_nodes, (2.0 / radius) * np.sqrt(1.0 - 2.0 * mass / radius))
    return PhysicalData(
        metric=round_sphere(grid, radius),
        norm_H=norm_h,
        alpha_H=OneForm(theta=np.zeros(grid.n_nodes)),
        provenance="schwarzschild",
    )


def minkowski_surface_data(m: AxisymMetric, tau0: np.ndarray) -> PhysicalData:
    """Data of the lift of (m, tau0) viewed as a surface in flat spacetime."""
    data = extrinsic_data(embed_lifted(m, tau0))
    return PhysicalData(
        metric=m, norm_H=data.norm_H, alpha_H=data.alpha_H, provenance="minkowski"
    )


def store_physical_data(d: PhysicalData, path: str | os.PathLike) -> None:
    """Write a PhysicalData table; see the module docstring for layout."""
    g = d.metric.grid
    rows = np.column_stack(
        [g.nodes, d.metric.P, d.metric.Q, d.norm_H, d.alpha_H.theta]
    )
    lines = [f"# n={g.n_nodes}", " ".join(COLUMNS)]
    for row in rows:
        lines.append(" ".join(f"{val:.17g}" for val in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _split_row(line: str) -> list[str]:
    return line.replace(",", " ").split()


def load_physical_data(path: str | os.PathLike) -> PhysicalData:
    """Read a PhysicalData table written by store_physical_data.

    The grid is regenerated from the declared size; the theta column must
    reproduce its nodes.  Raises DataFormatError naming the offending row
    and column on any violation.
    """
    with open(path) as fh:
        raw = [line.strip() for line in fh]
    lines = [line for line in raw if line]
    if not lines or not lines[0].startswith("#"):
        raise DataFormatError("missing '# n=<N>' declaration on the first line")
    decl = lines[0].lstrip("#").strip()
    if not decl.startswith("n="):
        raise DataFormatError(f"malformed grid declaration {lines[0]!r}")
    try:
        n = int(decl[2:])
    except ValueError:
        raise DataFormatError(f"malformed grid declaration {lines[0]!r}") from None

    header = tuple(_split_row(lines[1]))
    if header != COLUMNS:
        raise DataFormatError(
            f"header must name columns {' '.join(COLUMNS)}, got {lines[1]!r}"
        )

    body = lines[2:]
    if len(body) != n:
        raise DataFormatError(f"table has {len(body)} rows, declared grid needs {n}")
    table = np.empty((n, len(COLUMNS)))
    for i, line in enumerate(body):
        parts = _split_row(line)
        if len(parts) != len(COLUMNS):
            raise DataFormatError(
                f"row {i} has {len(parts)} fields, expected {len(COLUMNS)}"
            )
        for j, part in enumerate(parts):
            try:
                table[i, j] = float(part)
            except ValueError:
                raise DataFormatError(
                    f"row {i}, column {COLUMNS[j]}: not a number: {part!r}"
                ) from None

    grid = make_grid(n)
    theta = table[:, 0]
    j = int(np.argmax(np.abs(theta - grid.nodes)))
    if abs(theta[j] - grid.nodes[j]) > 1e-12:
        raise DataFormatError(
            f"row {j}, column theta: node {theta[j]} does not match the "
            f"n={n} grid node {grid.nodes[j]}"
        )
    for name, col in (("P", 1), ("Q", 2), ("normH", 3)):
        i = int(np.argmin(table[:, col]))
        if table[i, col] <= 0.0:
            raise DataFormatError(
                f"row {i}, column {name}: must be positive, got {table[i, col]}"
            )

    return PhysicalData(
        metric=AxisymMetric(grid, table[:, 1], table[:, 2]),
        norm_H=table[:, 3],
        alpha_H=OneForm(theta=table[:, 4]),
        provenance="file",
    )
