"""Experiment orchestration: limit comparisons, (m, K) sweeps and CSV output."""

import csv
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .diagnostics import KineticGrid, complementarity_residual, kinetic_two_valued_metric
from .errors import StiffPressError
from .grid import cell_average_of_faces, face_gradient, norm
from .hyperbolic import run_hyperbolic
from .pme import run_pme

log = logging.getLogger(__name__)

THREADS_ENV = "STIFFPRESS_THREADS"


def fmt_real(x):
    """17 significant digits, the CSV convention for every real."""
    if x is None:
        return ""
    return f"{float(x):.17g}"


def compare_to_limit(snaps_m, snaps_limit, g, K):
    """``[(t, ||u_m(t) - u_limit(t)||_1)]`` for matching snapshot lists.

    Only meaningful for ``K <= 1``, where the hyperbolic system is the limit.
    """
    if K > 1.0:
        raise ValueError(f"the hyperbolic run is not the limit for K={K} > 1")
    if len(snaps_m) != len(snaps_limit):
        raise ValueError(f"{len(snaps_m)} snapshots vs {len(snaps_limit)} in the limit run")
    out = []
    for a, b in zip(snaps_m, snaps_limit):
        if not np.isclose(a.t, b.t, rtol=1e-12, atol=1e-12):
            raise ValueError(f"snapshot times differ: {a.t} vs {b.t}")
        if a.u.shape != (g.n_cells,) or b.u.shape != (g.n_cells,):
            raise ValueError("snapshot does not live on the given grid")
        out.append((a.t, norm(a.u - b.u, g, 1)))
    return out


@dataclass(frozen=True)
class SweepRow:
    m: float
    K: float
    t: float
    l1_dist_to_limit: float | None
    grad_P_energy: float | None
    comp_residual_l1: float | None
    excess_sat_total: float | None
    max_P: float | None
    kinetic_metric: float | None
    status: str = "ok"

    @classmethod
    def header(cls):
        return [f.name for f in fields(cls)]

    def csv_fields(self):
        out = []
        for name in self.header():
            value = getattr(self, name)
            out.append(value if isinstance(value, str) else fmt_real(value))
        return out


def thread_count():
    raw = os.environ.get(THREADS_ENV, "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            log.warning("ignoring malformed %s=%r", THREADS_ENV, raw)
    return os.cpu_count() or 1


def _pme_task(cfg):
    """Per-snapshot summaries of one porous-medium run (runs in a worker)."""
    p, g = cfg.params, cfg.grid
    try:
        result = run_pme(cfg)
    except StiffPressError as exc:
        return {"error": f"{type(exc).__name__}: {exc}"}
    kg = KineticGrid.for_capacity(p.K)
    summary = {}
    for s in result.snapshots:
        totals = result.totals_until(s.t)
        summary[s.t] = {
            "u": s.u,
            "grad_P_energy": totals["grad_P_energy"],
            "comp_residual_l1": complementarity_residual(s, p, g)[1],
            "excess_sat_total": totals["excess_sat_total"],
            "max_P": totals["max_P"],
            "kinetic_metric": kinetic_two_valued_metric(s.u, g, kg),
        }
    return {"snapshots": summary}


def _limit_task(cfg):
    try:
        result = run_hyperbolic(cfg, record=False)
    except StiffPressError as exc:
        return {"error": f"{type(exc).__name__}: {exc}"}
    return {"snapshots": {s.t: s.u for s in result.snapshots}}


def _run_task(task):
    kind, cfg = task
    return _pme_task(cfg) if kind == "pme" else _limit_task(cfg)


def _map(tasks, threads):
    if threads <= 1 or len(tasks) <= 1:
        return [_run_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(threads, len(tasks))) as pool:
        return list(pool.map(_run_task, tasks))


def run_sweep(base, m_list, k_list, threads=None, csv_path=None):
    """One :class:`SweepRow` per ``(m, K, snapshot time)``, sorted by ``(m, K, t)``.

    Runs are independent and may execute in parallel processes
    (``threads`` or ``$STIFFPRESS_THREADS``).  For ``K <= 1`` one
    hyperbolic run per ``K`` provides the limit profile.  A failed run
    yields rows with empty metrics and a ``failed: ...`` status instead of
    gaps.
    """
    threads = thread_count() if threads is None else threads
    pairs = sorted({(float(m), float(K)) for m in m_list for K in k_list})

    tasks, task_keys, invalid = [], [], {}
    for m, K in pairs:
        try:
            tasks.append(("pme", base.with_params(m=m, K=K)))
            task_keys.append(("pme", m, K))
        except StiffPressError as exc:
            invalid[(m, K)] = f"{type(exc).__name__}: {exc}"
    for K in sorted({K for _, K in pairs if K <= 1.0}):
        try:
            tasks.append(("limit", base.with_params(K=K)))
            task_keys.append(("limit", K))
        except StiffPressError as exc:
            invalid[("limit", K)] = f"{type(exc).__name__}: {exc}"
    results = dict(zip(task_keys, _map(tasks, threads)))

    times = sorted(base.snapshot_times)
    rows = []
    for m, K in pairs:
        out = results.get(("pme", m, K), {"error": invalid.get((m, K))})
        if "error" in out:
            rows.extend(SweepRow(m, K, t, *([None] * 6), status=f"failed: {out['error']}") for t in times)
            continue
        limit = None
        if K <= 1.0:
            limit = results.get(("limit", K), {"error": invalid.get(("limit", K))})
        for t in times:
            snap = out["snapshots"][t]
            dist, status = None, "ok"
            if limit is not None:
                if "error" in limit:
                    status = f"failed: limit run {limit['error']}"
                else:
                    dist = norm(snap["u"] - limit["snapshots"][t], base.grid, 1)
            rows.append(
                SweepRow(
                    m, K, t, dist,
                    snap["grad_P_energy"], snap["comp_residual_l1"], snap["excess_sat_total"],
                    snap["max_P"], snap["kinetic_metric"], status,
                )
            )
    rows.sort(key=lambda r: (r.m, r.K, r.t))
    if csv_path is not None:
        write_sweep_csv(rows, csv_path)
    return rows


def write_sweep_csv(rows, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SweepRow.header())
        for row in rows:
            writer.writerow(row.csv_fields())
    return path


def snapshot_filename(t):
    return f"snap_t{t:g}.csv"


def write_snapshot_csv(s, g, path):
    """Columns ``x,u,c,P,gradP``; ``gradP`` is the mean of the two adjacent face gradients."""
    gradP = cell_average_of_faces(face_gradient(s.P, g), g)
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "u", "c", "P", "gradP"])
        for row in zip(g.centers, s.u, s.c, s.P, gradP):
            writer.writerow([fmt_real(v) for v in row])
    return Path(path)


def write_diagnostics_csv(records, path):
    from .diagnostics import DiagnosticsRecord

    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(DiagnosticsRecord.field_names())
        for r in records:
            writer.writerow([fmt_real(v) for v in r.as_tuple()])
    return Path(path)


def write_run(result, output_dir):
    """Write every snapshot plus ``diagnostics.csv``; returns the written paths."""
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    g = result.config.grid
    paths = [write_snapshot_csv(s, g, out / snapshot_filename(s.t)) for s in result.snapshots]
    if result.records:
        paths.append(write_diagnostics_csv(result.records, out / "diagnostics.csv"))
    return paths


def write_dump(dump, path):
    """Write the state carried by a :class:`NumericalFailure` as CSV."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "u", "c", "P"])
        for u, c, P in zip(dump["u"], dump["c"], dump["P"]):
            writer.writerow([fmt_real(dump["t"]), fmt_real(u), fmt_real(c), fmt_real(P)])
    return Path(path)
