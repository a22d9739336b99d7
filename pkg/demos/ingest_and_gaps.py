"""
Ingesting a collection and finding interruptions
================================================

"""

import tempfile
from pathlib import Path

from twinnet import activity_timeline, detect_gaps, read_dataset, write_dataset
from twinnet.synth import DEFAULT_START, drop_windows, lines_for, steady_stream

# a steady day of traffic, 100 posts an hour, with two 75 minute outages
day = steady_stream(100, 24, seed=1, label="stream")
outages = [
    (DEFAULT_START + 6 * 3600, DEFAULT_START + 6 * 3600 + 4500),
    (DEFAULT_START + 15 * 3600, DEFAULT_START + 15 * 3600 + 4500),
]
day = drop_windows(day, outages)

# write it as line-delimited JSON, then add a duplicate and a truncated line
tmp = Path(tempfile.mkdtemp())
path = tmp / "stream.jsonl"
write_dataset(day, path)
extra = lines_for(list(day)[:1])[0]
with path.open("a") as fh:
    fh.write(extra + "\n")
    fh.write(extra[:30] + "\n")

d = read_dataset(path)
print(d.summary())

# 15 minute activity counts
ts = activity_timeline(d, 900)
print(ts.to_csv().splitlines()[:5])

# the detector compares each interval to the median of its neighbours
for gap in detect_gaps(ts):
    print(gap.to_dict(ts))
