"""Run the level-by-level search from n=6 and check the terminal level.

    python scripts/run_full_search.py --state-dir runs/full --workers 4

The run is resumable: rerunning with the same state directory continues
from the last completed level.
"""

import argparse
import logging
import sys
from pathlib import Path

from tripack.canon import are_isomorphic
from tripack.graph import blowup, cycle_graph
from tripack.search import PipelineConfig, run_pipeline


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--state-dir", default="runs/full")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--report", help="write the JSON run report here")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    levels = {}
    report = run_pipeline(
        PipelineConfig(start_n=6, state_dir=Path(args.state_dir), workers=args.workers),
        on_level=lambda lv: levels.__setitem__(lv.n, lv),
    )
    print(report.to_text(), end="")
    if args.report:
        Path(args.report).write_text(report.to_json())

    l25 = levels.get(25)
    blown_up = l25 is not None and len(l25) == 1 and are_isomorphic(l25.survivors[0], blowup(cycle_graph(5), 5))
    print(f"empty level at n={report.terminal_n}; L25 is the 5-blowup of C5: {blown_up}")
    return 0 if report.terminal_n == 26 and blown_up else 1


if __name__ == "__main__":
    sys.exit(main())
