"""merminpoly - exact Mermin polytope engine

Constructs the Mermin polytopes MP_beta with exact rational arithmetic,
enumerates and classifies their vertices, builds their graphs and symmetry
groups, and runs the Fine and Lambda2 membership pipelines.
"""

# Expose submodules
from . import cli
from . import core
from . import exactla
from . import fine
from . import lambda2
from . import mermin
from . import polytope
from . import scenario
from . import symmetry

# Expose key classes/functions at top level
from .cli import create_cli_parser, main, run_cli_mode
from .config_manager import ConfigManager
from .core import MerminCore, Report, create_core
from .errors import MerminError
from .fine import ChshDistribution, fine_check
from .lambda2 import NS232Distribution, membership_cross_check
from .mermin import MerminDistribution, build_h_rep, mermin_member
from .polytope import HPolytope, build_graph, vertices_of
from .scenario import BetaAssignment, IncidenceWeight
from .symmetry import generate_G0, generate_G1, stabilizer

__all__ = [
    "cli",
    "core",
    "exactla",
    "fine",
    "lambda2",
    "mermin",
    "polytope",
    "scenario",
    "symmetry",
    "create_cli_parser",
    "main",
    "run_cli_mode",
    "ConfigManager",
    "MerminCore",
    "Report",
    "create_core",
    "MerminError",
    "ChshDistribution",
    "fine_check",
    "NS232Distribution",
    "membership_cross_check",
    "MerminDistribution",
    "build_h_rep",
    "mermin_member",
    "HPolytope",
    "build_graph",
    "vertices_of",
    "BetaAssignment",
    "IncidenceWeight",
    "generate_G0",
    "generate_G1",
    "stabilizer",
]


__version__ = "1.0.0"
