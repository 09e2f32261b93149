"""Rewrite the golden CLI outputs in tests/golden/ from their job files.

Run only after an intentional change to the output format or numerics.
"""

from pathlib import Path

from unwinding.cli import main

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"

for job in sorted(GOLDEN.glob("*.job.json")):
    stem = job.name[: -len(".job.json")]
    fmt = "csv" if '"csv"' in job.read_text() else "json"
    out = GOLDEN / f"{stem}.expected.{fmt}"
    code = main(["expand", "--input", str(job), "--out", str(out)])
    print(f"{stem}: exit {code} -> {out.name}")
