# The command line runner on the reference configuration.
# Same as: python3 -m mixedfrac --config demos/reference.cfg --out <dir> --strict

# %%
import json
import tempfile
from pathlib import Path

from mixedfrac.cli import run

cfg = Path(__file__).with_name("reference.cfg")
out = Path(tempfile.mkdtemp(prefix="mixedfrac-"))

# %%
code = run(["--config", str(cfg), "--out", str(out), "--strict"])
print("exit", code)
print(sorted(p.name for p in out.iterdir()))

# %%
print((out / "modes.csv").read_text().splitlines()[:4])
report = json.loads((out / "report.json").read_text())
print(json.dumps(report["verification"]["pde_residual_sup"]))
print(report["uniqueness"]["limit"], report["uniqueness"]["separated_from"])

# %% dry run prints the resolved configuration
run(["--config", str(cfg), "--dry-run"])
