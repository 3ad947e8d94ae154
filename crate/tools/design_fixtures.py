#!/usr/bin/env python3
"""Regenerate the filter coefficient fixtures used by the tests and examples.

Filter design is outside the simulator; this script is the design oracle.

  fir_lowpass_50.txt     50-tap equiripple low-pass, pass edge 0.375*pi,
                         stop edge 0.5*pi, equal band weights.
  iir_bandpass_6sos.txt  12th-order Butterworth band-pass (6 sections),
                         pass band 0.10625*pi .. 0.11875*pi. Each section
                         keeps the zero pair at z = +1, -1 (b = 1, 0, -1) and
                         the total gain is split evenly across sections.
"""
import os
import numpy as np
from scipy import signal

here = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "fixtures")


def fir():
    taps = signal.remez(50, [0.0, 0.375, 0.5, 1.0], [1.0, 0.0], fs=2.0)
    with open(os.path.join(here, "fir_lowpass_50.txt"), "w") as f:
        for t in taps:
            f.write(f"{t:.17g}\n")


def iir():
    z, p, k = signal.butter(6, [0.10625, 0.11875], btype="bandpass", output="zpk")
    # one conjugate pole pair per section, lowest radius first
    upper = sorted((q for q in p if q.imag > 0), key=abs)
    gain = abs(k) ** (1.0 / len(upper))
    with open(os.path.join(here, "iir_bandpass_6sos.txt"), "w") as f:
        f.write(f"gain {gain:.17g}\n")
        for q in upper:
            a1 = -2.0 * q.real
            a2 = abs(q) ** 2
            f.write(" ".join(f"{v:.17g}" for v in (1.0, 0.0, -1.0, 1.0, a1, a2)) + "\n")


if __name__ == "__main__":
    fir()
    iir()
