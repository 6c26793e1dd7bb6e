"""Built-in reference problems."""

import math

from .errors import UnknownCatalogEntry
from .problem import make_problem

_ENTRIES = {
    "harmonic": dict(kind="sl", interval=(-math.inf, math.inf),
                     coefficients={"p": "1", "q": "x^2", "r": "1"}, left="lp", right="lp"),
    "coulomb_l1": dict(kind="sl", interval=(0.0, math.inf),
                       coefficients={"p": "1", "q": "2/x^2 - 1/x", "r": "1"}, left="lp", right="lp"),
    "mathieu_impurity": dict(kind="sl", interval=(-math.inf, math.inf),
                             coefficients={"p": "1", "q": "2*cos(2*x) - 3*exp(-x^2)", "r": "1"},
                             left="lp", right="lp"),
    "dirac_well": dict(kind="dirac", interval=(-math.inf, math.inf),
                       coefficients={"q11": "1 - 2*exp(-x^2)", "q12": "0", "q22": "-1 - 2*exp(-x^2)",
                                     "r11": "1", "r12": "0", "r22": "1"},
                       left="lp", right="lp"),
    "dirichlet_box": dict(kind="sl", interval=(0.0, math.pi),
                          coefficients={"p": "1", "q": "0", "r": "1"}, left=0.0, right=0.0),
}

DESCRIPTIONS = {
    "harmonic": "-y'' + x^2 y on the line; spectrum 2k+1",
    "coulomb_l1": "-y'' + (2/x^2 - 1/x) y on the half-line; bound states -1/(4n^2), n >= 2",
    "mathieu_impurity": "Mathieu potential 2cos(2x) with a Gaussian well; bound states in spectral gaps",
    "dirac_well": "Dirac operator with mass 1 and a Gaussian well; bound states in the gap (-1, 1)",
    "dirichlet_box": "-y'' on (0, pi) with Dirichlet conditions; spectrum n^2",
}


def names():
    return list(_ENTRIES)


def catalog(name: str, n_probe: int = 64):
    """Return the reference :class:`ProblemSpec` registered under ``name``."""
    try:
        entry = _ENTRIES[name]
    except KeyError:
        raise UnknownCatalogEntry(f"unknown catalog entry {name!r}; available: {', '.join(_ENTRIES)}") from None
    return make_problem(name=name, n_probe=n_probe, **entry)
