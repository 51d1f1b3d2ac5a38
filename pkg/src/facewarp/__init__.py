"""Landmark-driven facial image deformation.

Eye expansion by radial backward mapping with bilinear resampling, and
nose/mouth/cheek shrinking by Moving Least Squares (affine, similarity or
rigid) deformation.
"""

from .errors import (
    DegenerateConfigurationError,
    DegenerateGeometryError,
    DegenerateRigidWarning,
    FaceWarpError,
    ImageFormatError,
    LandmarkFormatError,
)
from .expansion import CenterScheme, ExpansionParams, Side, expand_eyes
from .geometry import Point2, Vec2, eye_axis_angle, perp
from .imaging import BackwardMap, bilinear_sample, load_png, save_png, warp_backward
from .landmarks import (
    GroupId,
    LandmarkSet,
    load_landmarks,
    parse_landmarks,
    select_group,
    serialize_landmarks,
    synthetic_face,
    validate_against_image,
)
from .mls import (
    ControlPairSet,
    Method,
    MlsParams,
    build_backward_warp,
    deform_image,
    map_affine,
    map_rigid,
    map_similarity,
)
from .shrink import ShrinkConfig, moving_vectors, plan_to_control_pairs, shrink_control_pairs

__version__ = "0.1.0"
