"""An (m, K) sweep written to CSV.

Runs are independent and spread over worker processes
(STIFFPRESS_THREADS caps the count); the CSV is sorted by (m, K, t), so
it is byte-identical whatever the scheduling.
"""

import sys
from pathlib import Path

from stiffpress import preset
from stiffpress.harness import run_sweep

out = Path(sys.argv[1] if len(sys.argv) > 1 else "out/demo_sweep.csv")
base = preset("fig2", n_cells=80, t_final=2.0, snapshot_times=[1.0, 2.0])
rows = run_sweep(base, [2, 20], [0.6, 1, 2], csv_path=out)
print(f"{len(rows)} rows -> {out}")
print(out.read_text())
