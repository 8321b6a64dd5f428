"""Classical Malus-law intensities for polarizers and PBS cascades.

Angles here are full polarizer angles: transmission goes as cos^2(Delta),
whereas spin-1/2 probabilities go as cos^2(Delta / 2). The same physical
rotation therefore appears doubled in optical correlations.
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from .tolerances import TOL


@dataclass(frozen=True)
class IntensitySet:
    i0: float
    i_pp: float
    i_pm: float
    i_mp: float
    i_mm: float

    def __post_init__(self):
        branches = (self.i_pp, self.i_pm, self.i_mp, self.i_mm)
        if min(branches) < -TOL.eq * self.i0:
            raise ValueError("negative branch intensity")
        if abs(sum(branches) - self.i0) > TOL.eq * self.i0:
            raise ValueError("branch intensities do not add up to the input")

    def correlation(self):
        return (self.i_pp + self.i_mm - self.i_pm - self.i_mp) / self.i0


def malus(i_in, delta):
    if i_in < 0:
        raise ValueError("intensity must be non-negative")
    return i_in * np.cos(delta) ** 2


def pbs_cascade(i0, theta1, theta2):
    """Unpolarized beam through a PBS at theta1; both outputs through PBS at theta2.

    Each first-stage output carries i0/2 and splits by Malus' law at the
    second stage: transmitted-transmitted (and deflected-deflected) get
    cos^2, the crossed branches sin^2.
    """
    if i0 <= 0:
        raise ValueError("input intensity must be positive")
    half = 0.5 * i0
    d = theta2 - theta1
    stay = malus(half, d)
    cross = half - stay
    return IntensitySet(i0, stay, cross, cross, stay)


def pbs_correlation(i0, theta1, theta2):
    return pbs_cascade(i0, theta1, theta2).correlation()


def three_filter_chain(i0, t1, t2, t3):
    """Intensity after three successive polarizers, given light polarized along t1."""
    return malus(malus(i0, t2 - t1), t3 - t2)


def sweep_csv(kind, i0, fixed, values, angle_scale=1.0, fmt="{:.12g}"):
    """CSV of intensities over an angle sweep.

    kind ``cascade``: ``fixed = (theta1,)``, sweep theta2.
    kind ``chain``: ``fixed = (t1, t3)``, sweep the middle filter t2.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if kind == "cascade":
        w.writerow(["theta1", "theta2", "i_pp", "i_pm", "i_mp", "i_mm", "correlation"])
        for t2 in values:
            s = pbs_cascade(i0, fixed[0], t2)
            w.writerow([fmt.format(fixed[0] * angle_scale), fmt.format(t2 * angle_scale)]
                       + [fmt.format(x) for x in (s.i_pp, s.i_pm, s.i_mp, s.i_mm, s.correlation())])
    elif kind == "chain":
        w.writerow(["t1", "t2", "t3", "intensity"])
        for t2 in values:
            w.writerow([fmt.format(x * angle_scale) for x in (fixed[0], t2, fixed[1])]
                       + [fmt.format(three_filter_chain(i0, fixed[0], t2, fixed[1]))])
    else:
        raise ValueError(f"unknown sweep kind {kind!r}")
    return buf.getvalue()
