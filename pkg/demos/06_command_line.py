"""Running the ac4x command line tasks on the sample configurations."""

# %%
import json
import tempfile
from pathlib import Path

from ac4x.cli import main

configs = Path(__file__).parent / "configs"
out = Path(tempfile.mkdtemp(prefix="ac4x-"))

# %%
# Each task writes summary.json (and table.csv where tabular) into --out.
runs = [
    ("hminus", "hminus.toml"),
    ("kodaira-table", "kodaira.toml"),
    ("decompose", "decompose.toml"),
    ("cy-solve", "cy_solve.toml"),
    ("deform-scan", "deform_scan.toml"),
]
for task, cfg in runs:
    dest = out / task
    code = main([task, "--config", str(configs / cfg), "--out", str(dest)])
    summary = json.loads((dest / "summary.json").read_text())
    print(f"{task:14s} exit {code}  status {summary['status']}")
    if (dest / "table.csv").exists():
        print((dest / "table.csv").read_text())

# %%
print("outputs in", out)
