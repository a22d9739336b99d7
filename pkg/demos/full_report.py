"""
A full comparison report
========================

The same run is available from the shell as ``twinnet compare A.jsonl B.jsonl --out report``.
"""

import json
import tempfile
from pathlib import Path

from twinnet import RunConfig, run_compare, write_dataset
from twinnet.synth import generate_dataset, random_subset

tmp = Path(tempfile.mkdtemp())
a = generate_dataset(4000, label="A", duration=6 * 3600, seed=9)
write_dataset(a, tmp / "A.jsonl")
write_dataset(random_subset(a, 0.9, seed=10), tmp / "B.jsonl")

cfg = RunConfig(
    datasets=[str(tmp / "A.jsonl"), str(tmp / "B.jsonl")],
    out_dir=str(tmp / "report"),
    top_k=1000,
    seed=0,
)
report = run_compare(cfg)
print("ok:", report.ok)

pair = report.manifest["pairs"]["A__vs__B"]
print(json.dumps(pair["stats_delta"]["flags"]))
for kind, net in pair["networks"].items():
    taus = {m: s["tau"] for m, s in net["similarity"].items()}
    print(kind, "ARI", round(net["clusters"]["ari"], 3), taus)

for path in sorted((tmp / "report").rglob("*"))[:15]:
    print(path.relative_to(tmp / "report"))
