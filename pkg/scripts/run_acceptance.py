"""Run the acceptance criteria and write a JSON record.

    python scripts/run_acceptance.py --out results/acceptance.json [--only 1 2 5]
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from cfkernel.config import load_spec
from cfkernel.suites import CRITERIA, DEFAULT_SEED, run_suite


@dataclass
class AcceptanceRun:
    seed: int = DEFAULT_SEED
    criteria: list[int] = field(default_factory=lambda: sorted(CRITERIA))
    out: str | None = None
    config: str | None = None


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--only", type=int, nargs="+")
    ap.add_argument("--out")
    ap.add_argument("--config")
    a = ap.parse_args(argv)
    run = AcceptanceRun(seed=a.seed, out=a.out, config=a.config, criteria=a.only or sorted(CRITERIA))
    spec = load_spec(run.config)
    records = []
    for n in run.criteria:
        rep = run_suite(CRITERIA[n], seed=run.seed, spec=spec)
        print(f"{'PASS' if rep.passed else 'FAIL'} criterion {n}: {rep.summary()[5:]}", flush=True)
        for line in rep.lines:
            print("    " + line)
        records.append({"criterion": n, **rep.as_dict()})
    if run.out:
        Path(run.out).parent.mkdir(parents=True, exist_ok=True)
        Path(run.out).write_text(json.dumps({"run": asdict(run), "results": records}, indent=1, default=str))
    return 0 if all(r["passed"] for r in records) else 1


if __name__ == "__main__":
    sys.exit(main())
