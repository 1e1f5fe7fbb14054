#!/usr/bin/env python3
"""Demonstrate the non-compact Caratheodory ball on the glued space.

Builds the 12-sheet truncation over A(4), certifies one point per sheet
inside the Mobius ball of radius 2/e about the sheet-0 basepoint, and prints
the certified pairwise separation floor that rules out convergent
subsequences.
"""

import sys

from caralab import AnnulusConfig, SpaceConfig, noncompactness_probe
from caralab.cli import render_json


def main() -> int:
    cfg = SpaceConfig(
        annulus=AnnulusConfig(R=4.0, family_degree=2, grid_density=2), sheets=12
    )
    report = noncompactness_probe(cfg, cfg.sheets)
    print(render_json(report.to_dict()))
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
