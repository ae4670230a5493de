from ._version import __version__
from .catalog import build, catalog, defined_set_by_name
from .evaluate import Evaluator, defined_set, evaluate, naive_evaluate
from .lattice import ElementSubset, FiniteLattice, random_lattice
from .parser import parse
from .universe import LabeledLattice, UniverseSpec, build_universe

__all__ = [
    "ElementSubset",
    "Evaluator",
    "FiniteLattice",
    "LabeledLattice",
    "UniverseSpec",
    "__version__",
    "build",
    "build_universe",
    "catalog",
    "defined_set",
    "defined_set_by_name",
    "evaluate",
    "naive_evaluate",
    "parse",
    "random_lattice",
]
