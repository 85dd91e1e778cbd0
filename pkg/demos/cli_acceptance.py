"""Run every documented command-line example and print a transcript.

Each command is shown with its exit code, stdout and stderr. Nothing in
the transcript depends on time or randomness, so two runs of this script
produce byte-identical output::

    python3 demos/cli_acceptance.py > run1.txt
    python3 demos/cli_acceptance.py > run2.txt
    cmp run1.txt run2.txt
"""

import math
import shlex
import subprocess
import sys

TWO_PI = repr(2 * math.pi)

COMMANDS = [
    ["catalog", "list"],
    ["frenet", "cos(t),sin(t),t", "--t-range", "0", TWO_PI, "--order", "3"],
    ["frenet", "t, 2*t, 0", "--t-range", "0", "1", "--order", "3"],
    ["frenet", "cos(", "--t-range", "0", "1"],
    ["helix-space", "--surface", "cylinder"],
    ["helix-space", "--surface", "sphere"],
    ["helix-space", "--surface", "plane"],
    ["helix-space", "--surface", "cone"],
    ["helix-space", "--surface", "torus_product"],
    ["helix-space", "--immersion", "u1^3, u2, 0", "--dims", "2", "3", "--samples", "81"],
    ["verify", "3.1", "--surface", "cone", "--curve", "u_circle", "--direction", "e3"],
    ["verify", "3.1", "--surface", "cylinder", "--curve", "u_circle", "--direction", "e3"],
    ["verify", "3.2", "--surface", "cylinder", "--curve", "geodesic", "--direction", "e3"],
    ["verify", "3.3", "--surface", "cylinder", "--curve", "u_circle", "--direction", "e3"],
    ["verify", "3.3", "--surface", "product_s1_r3", "--curve", "flat_helix", "--direction", "e5"],
    ["verify", "3.5", "--surface", "cone", "--curve", "u_circle", "--direction", "e3"],
    ["verify", "3.6", "--surface", "plane", "--curve", "circle", "--direction", "(1, 0, 1)"],
    ["trace", "--surface", "cylinder", "--kind", "geodesic", "--start", "0", "0", "--velocity", "1", "1",
     "--length", "10", "--step", "1e-3"],
    ["trace", "--surface", "sphere", "--kind", "curvline", "--start", "0", "0"],
    ["trace", "--surface", "plane", "--kind", "geodesic", "--start", "0", "0", "--velocity", "0.6", "0.8",
     "--length", "2", "--step", "0.25"],
]


def main():
    for argv in COMMANDS:
        proc = subprocess.run(
            [sys.executable, "-m", "helixsub", *argv], capture_output=True, text=True, check=False
        )
        sys.stdout.write(f"$ helixsub {shlex.join(argv)}\n[exit {proc.returncode}]\n")
        sys.stdout.write(proc.stdout)
        if proc.stderr:
            sys.stdout.write("[stderr]\n" + proc.stderr)
        sys.stdout.write("\n")


if __name__ == "__main__":
    main()
