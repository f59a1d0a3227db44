"""Draw the figure configurations as SVG files.

    python3 scripts/figures.py --out figures/
"""

import argparse
from pathlib import Path

from grassfold.arrangement import base_derived, evaluate_script, fiber_type_completion
from grassfold.fixtures import FIGURE1, FIGURE2, FIGURE3_SCRIPT, FIGURE4_T1_GENERIC, FIGURE5_LEFT_GENERIC, config
from grassfold.render import render_svg


def pictures():
    yield "figure1", config(FIGURE1), base_derived(config(FIGURE1))
    yield "figure2", config(FIGURE2), base_derived(config(FIGURE2))
    yield "figure3_left", config(FIGURE2), evaluate_script(FIGURE3_SCRIPT, config(FIGURE2)).configuration
    yield "figure4_t1", config(FIGURE4_T1_GENERIC), base_derived(config(FIGURE4_T1_GENERIC))
    yield "figure5_left", config(FIGURE5_LEFT_GENERIC), base_derived(config(FIGURE5_LEFT_GENERIC))
    d = fiber_type_completion(config(FIGURE2))
    yield "figure2_fibertype", config(FIGURE2), d.configuration


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figures")
    ap.add_argument("--meets", action="store_true", help="circle unmarked intersection points")
    args = ap.parse_args()
    out, meets = Path(args.out), args.meets
    out.mkdir(parents=True, exist_ok=True)
    for name, pts, arr in pictures():
        path = out / f"{name}.svg"
        path.write_text(render_svg(pts, arr, show_meets=meets))
        print(path, len(arr.hyperplanes()), "lines")


if __name__ == "__main__":
    main()
