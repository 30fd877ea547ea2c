"""Shared time-marching driver for the porous-medium and hyperbolic steppers."""

import logging
from dataclasses import dataclass, field

import numpy as np

from .diagnostics import DiagnosticsRecord, record_diagnostics
from .errors import NumericalFailure, StepRejected
from .grid import integral
from .state import check_state, make_state, stable_dt

log = logging.getLogger(__name__)


@dataclass
class RunResult:
    config: object
    snapshots: list
    records: list = field(default_factory=list)
    clipped: np.ndarray = field(default_factory=lambda: np.zeros(0))
    dts: np.ndarray = field(default_factory=lambda: np.zeros(0))
    initial_mass: float = 0.0
    final_mass: float = 0.0

    @property
    def n_steps(self):
        return int(self.dts.size)

    @property
    def mass_drift(self):
        """Relative change of the total mass between the first and last state."""
        if self.initial_mass == 0.0:
            return abs(self.final_mass)
        return abs(self.final_mass - self.initial_mass) / abs(self.initial_mass)

    def snapshot_at(self, t):
        for s in self.snapshots:
            if np.isclose(s.t, t, rtol=1e-12, atol=1e-12):
                return s
        raise KeyError(f"no snapshot at t={t}")

    def record_array(self, name):
        return np.array([getattr(r, name) for r in self.records])

    def totals_until(self, t):
        """Space-time totals accumulated over ``[0, t]`` (left-endpoint rule)."""
        if not self.records:
            raise ValueError("run was made without diagnostics")
        times = self.record_array("t")
        before = times < t - 1e-12 * max(1.0, abs(t))
        upto = times <= t + 1e-12 * max(1.0, abs(t))
        return {
            "excess_sat_total": float(np.sqrt(self.record_array("excess_sat_l2_sq_increment")[before].sum())),
            "grad_P_energy": float(self.record_array("grad_P_energy_increment")[before].sum()),
            "defect_total": float(self.record_array("defect_increment")[before].sum()),
            "max_P": float(self.record_array("P_max")[upto].max()),
        }


def _dump(s):
    return {"t": s.t, "u": s.u.copy(), "c": s.c.copy(), "P": s.P.copy()}


def march(config, stepper, record=True, initial_map=None):
    """Integrate from ``t = 0`` to ``config.t_final`` with ``stepper``.

    Steps use :func:`stable_dt`, shortened to land exactly on every
    requested snapshot time.  A rejected step is retried with half the
    step, at most ``params.max_halvings`` times.
    """
    g, p = config.grid, config.params
    s = make_state(0.0, config.initial_density(), p, g)
    if initial_map is not None:
        s = initial_map(s, p)
    check_state(s, p)

    wanted = sorted(set(float(t) for t in config.snapshot_times))
    snapshots = [s] if wanted and wanted[0] == 0.0 else []
    targets = [t for t in wanted if t > 0.0]
    if config.t_final > 0.0 and (not targets or targets[-1] < config.t_final):
        targets.append(float(config.t_final))

    records, clipped, dts = [], [], []
    mass0 = integral(s.u, g)
    for target in targets:
        while s.t < target:
            dt_ok = stable_dt(s, p, g)
            dt = target - s.t if target - s.t <= dt_ok else dt_ok
            for _ in range(p.max_halvings + 1):
                try:
                    new = stepper(s, p, g, dt)
                    break
                except StepRejected as exc:
                    log.info("t=%.6g: step rejected (%s); halving dt", s.t, exc)
                    dt *= 0.5
            else:
                raise NumericalFailure(
                    f"step at t={s.t:.6g} rejected {p.max_halvings + 1} times", dump=_dump(s)
                )
            if new.t >= target or np.isclose(new.t, target, rtol=1e-14, atol=0.0):
                new.t = target
            check_state(new, p)
            if record:
                records.append(record_diagnostics(s, p, g, dt))
            clipped.append(new.clipped)
            dts.append(dt)
            s = new
        if target in wanted:
            snapshots.append(s)
    if record:
        records.append(record_diagnostics(s, p, g, 0.0))

    result = RunResult(
        config=config,
        snapshots=snapshots,
        records=records,
        clipped=np.array(clipped),
        dts=np.array(dts),
        initial_mass=mass0,
        final_mass=integral(s.u, g),
    )
    if result.mass_drift > 1e-8:
        log.warning("relative mass drift %.3e over the run", result.mass_drift)
    return result


__all__ = ["DiagnosticsRecord", "RunResult", "march"]
