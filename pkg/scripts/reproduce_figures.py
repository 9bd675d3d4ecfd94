"""Write the data series behind the three-box figures as CSV files.

    python scripts/reproduce_figures.py [outdir]

Produces fig2 profiles, rail scans for A/B/C at visibility 1.0 and 0.95,
and the two-pointer scans with and without the V-blocking polarizer.
"""

import sys
from pathlib import Path

from threebox.cli import main

RUNS = {
    "fig2_profiles.csv": ["fig2", "--k-c", "-0.69", "--points", "801"],
    "fig2_profiles_v095.csv": ["fig2", "--k-c", "-0.69", "--points", "801", "--visibility", "0.95"],
    "fig3_rail_a.csv": ["scan", "--rail", "A", "--k-min", "-3", "--k-max", "3", "--steps", "121"],
    "fig3_rail_b.csv": ["scan", "--rail", "B", "--k-min", "-3", "--k-max", "3", "--steps", "121"],
    "fig3_rail_c.csv": ["scan", "--rail", "C", "--k-min", "-3", "--k-max", "3", "--steps", "121"],
    "fig3_rail_c_v095.csv": ["scan", "--rail", "C", "--k-min", "-3", "--k-max", "3", "--steps", "121",
                             "--visibility", "0.95"],
    "fig3_rail_c_strong.csv": ["scan", "--rail", "C", "--k-min", "0.1", "--k-max", "20", "--steps", "200"],
    "fig4_two_pointer.csv": ["two-pointer", "--states", "swapped", "--theta-deg", "9.6",
                             "--k-min", "-2", "--k-max", "2", "--steps", "81"],
    "fig4_two_pointer_block_v.csv": ["two-pointer", "--states", "swapped", "--theta-deg", "9.6",
                                     "--polarizer", "block-v", "--k-min", "-2", "--k-max", "2",
                                     "--steps", "81"],
}


def run(outdir: Path) -> int:
    outdir.mkdir(parents=True, exist_ok=True)
    for name, argv in RUNS.items():
        states = [] if "--states" in argv else ["--states", "generalized"]
        code = main(argv + states + ["-o", str(outdir / name)])
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(run(Path(sys.argv[1] if len(sys.argv) > 1 else "results")))
