"""Run every shipped experiment config into one output directory.

    python scripts/run_all.py [out_dir]
"""

import sys
from pathlib import Path

from wellblock import cli

ROOT = Path(__file__).resolve().parent.parent


def main(out: str = "results") -> int:
    status = 0
    for cfg in sorted((ROOT / "configs").glob("*.json")):
        code = cli.main(["run", "--config", str(cfg), "--out", out])
        print(f"{cfg.stem:20s} exit {code}")
        status = status or code
    return status


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:2]))
