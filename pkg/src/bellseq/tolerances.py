"""Library-wide numerical tolerances.

A single frozen :class:`Tolerances` instance (``TOL``) is used as the default
everywhere. Individual values can be overridden through environment
variables at import time::

    BELLSEQ_TOL_EQ=1e-10 python -m bellseq ...
"""

import os
from dataclasses import dataclass, fields


@dataclass(frozen=True)
class Tolerances:
    eq: float = 1e-12          # entrywise / scalar equality
    psd: float = 1e-10         # eigenvalue slack for density matrices
    norm: float = 1e-12        # state-vector normalisation
    prob_sum: float = 1e-10    # joint distribution total probability
    clamp: float = 1e-12       # negative entries above -clamp read as 0
    impossible: float = 1e-14  # projective outcome treated as impossible
    feasibility: float = 1e-10  # slack on positivity constraints
    phase: float = 1e-10       # |<a|b>| = 1 global-phase comparison

    @classmethod
    def from_env(cls, prefix="BELLSEQ_TOL_"):
        kwargs = {}
        for f in fields(cls):
            raw = os.environ.get(prefix + f.name.upper())
            if raw is not None:
                kwargs[f.name] = float(raw)
        return cls(**kwargs)


TOL = Tolerances.from_env()
