"""Exact discrete volume, volume defect and Dehn invariants of 3D lattice polytopes."""

from .angles import AngleClass, AngleSum, is_rational_multiple_of_pi
from .catalog import big_counterexample, counterexample, pyramid, t1, t2, t3, unit_cube, wedge
from .config import Config
from .dehn import (
    DehnStatus, DehnVector, KaganSpec, RelationSet, dehn_invariant, dihedral_angle, edge_length,
    evaluate_kagan, find_angle_relations, is_zero, reduce,
)
from .ehrhart import dilation_profile, fit_odd_cubic, minkowski_linearity_residual
from .geometry import (
    LatticePolytope, PointClass, classify_point, convex_hull, dilate, minkowski_sum, translate, volume, zonotope,
)
from .invariants import discrete_volume, enumerate_lattice_points, solid_angle, volume_defect
from .sqrtfield import SqrtField
from .tiling import TileSet, obstruction_report, orthoscheme_cube_tiling, verify_multitile

__version__ = "0.1.0"
