"""File outputs besides trajectories: feasibility-function grids and gnuplot scripts."""
from __future__ import annotations

import os
from typing import IO, Iterable, Sequence, Union

import numpy as np

from .wind_feas import FeasibilityParams, sigma_feas, sigma_legacy

FEASMAP_COLUMNS = ("beta", "lambda", "sigma_feas", "sigma_legacy")


def export_feasibility_map(
    params: FeasibilityParams,
    beta_grid: Sequence[float],
    lambda_grid: Sequence[float],
    out: Union[str, os.PathLike, IO[str]],
    beta_buf: float | None = None,
    v_A: float = 9.0,
    legacy: bool = True,
) -> np.ndarray:
    """Tabulate the feasibility function over a (beta, lambda) grid and write it as CSV.

    ``beta_buf`` defaults to ``params.v_A_buf / v_A``. Rows run over lambda
    fastest. Returns the sigma grid with shape ``(len(beta_grid), len(lambda_grid))``.
    """
    betas = np.asarray(beta_grid, dtype=float)
    lams = np.asarray(lambda_grid, dtype=float)
    if betas.size == 0 or lams.size == 0:
        raise ValueError("grids must be non-empty")
    if beta_buf is None:
        beta_buf = params.v_A_buf / v_A
    if not isinstance(out, (str, os.PathLike)):
        return _write_feasmap(params, betas, lams, out, beta_buf, legacy)
    with open(out, "w", newline="") as fh:
        return _write_feasmap(params, betas, lams, fh, beta_buf, legacy)


def _write_feasmap(params, betas, lams, fh, beta_buf, legacy) -> np.ndarray:
    cols = FEASMAP_COLUMNS if legacy else FEASMAP_COLUMNS[:3]
    fh.write(",".join(cols) + "\n")
    grid = np.empty((betas.size, lams.size))
    for i, b in enumerate(betas.tolist()):
        for j, lam in enumerate(lams.tolist()):
            s = sigma_feas(b, lam, beta_buf, params).sigma
            grid[i, j] = s
            vals = [b, lam, s] + ([sigma_legacy(b, lam)] if legacy else [])
            fh.write(",".join(format(v, ".9g") for v in vals) + "\n")
    return grid


_GNUPLOT_HEADER = """\
set datafile separator ','
set key autotitle columnhead
set grid
"""


def gnuplot_script(csv_paths: Iterable[str], output: str = "windloiter.png") -> str:
    """gnuplot script plotting track, roll reference, airspeed reference and L1 period of trajectory CSVs."""
    paths = list(csv_paths)
    if not paths:
        raise ValueError("need at least one trajectory CSV")

    def plots(x: str, y: str) -> str:
        return ", \\\n     ".join(f"'{p}' using '{x}':'{y}' with lines title '{os.path.basename(p)}'" for p in paths)

    lines = [
        _GNUPLOT_HEADER,
        "set terminal pngcairo size 1400,1000",
        f"set output '{output}'",
        "set multiplot layout 2,2",
        "set title 'track (east vs north) [m]'",
        "set size ratio -1",
        "plot " + plots("e", "n"),
        "set size noratio",
        "set title 'roll reference [rad]'",
        "plot " + plots("t", "phi_ref"),
        "set title 'airspeed reference [m/s]'",
        "plot " + plots("t", "v_A_ref"),
        "set title 'effective L1 period [s]'",
        "plot " + plots("t", "P_eff"),
        "unset multiplot",
    ]
    return "\n".join(lines) + "\n"
