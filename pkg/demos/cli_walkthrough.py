"""
Driving the command line from Python
====================================

Each job is one JSON config.  Outputs land in ``--out``: solution.json,
grid.csv and report.json, all written deterministically.
"""
import json
import tempfile
from pathlib import Path

from harmonic_duality.cli import run

work = Path(tempfile.mkdtemp(prefix="hd-demo-"))

# %%
# A Neumann problem on the annulus 1/2 < r < 2.
job = {
    "schema": 1,
    "problem": "neumann",
    "region": {"type": "annulus", "r1": 0.5, "r2": 2},
    "data": {"inner": {"a0": 0, "a": [4]}, "outer": {"a0": 0, "a": [1]}},
    "options": {"grid": "17x32"},
}
cfg = work / "neumann.json"
cfg.write_text(json.dumps(job))
print("exit:", run(["solve", "--config", str(cfg), "--out", str(work / "neumann")]))
report = json.loads((work / "neumann" / "report.json").read_text())["report"]
print("boundary residuals:", report["residual"]["bc_linf"])

# %%
# The same job against the independent oracles.
job["problem"] = "verify"
job["options"]["fd_grid"] = [33, 64]
cfg.write_text(json.dumps(job))
print("exit:", run(["verify", "--config", str(cfg), "--out", str(work / "verify")]))
report = json.loads((work / "verify" / "report.json").read_text())["report"]
print({k: report[k] for k in ("fd_relative_linf", "quadrature_linf", "C_conjugate_gap", "passed")})

# %%
# Data with net flux are rejected with exit code 3 and a one-line JSON
# diagnostic on stderr.
job["problem"] = "neumann"
job["data"] = {"inner": {"a0": 1}, "outer": {"a0": 1}}
cfg.write_text(json.dumps(job))
print("exit:", run(["solve", "--config", str(cfg), "--out", str(work / "bad")]))

print("files in", work)
