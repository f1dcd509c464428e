"""Exact computations with perfectoid rings: tilts, Witt vectors, Banach norms,
Berkovich points, rational domains and Cech complexes of toric covers."""

from .banach import NormSpec, filtration_member, is_powerbounded, norm_eval, spectral_radius, uniformize
from .berkovich import (
    GridSpec, RationalDomainSpec, SeminormPoint, approx_verify, cover_check, domain_meet, eval_point,
    in_domain, perfected_domain, sharp_compat, tilt_point,
)
from .cech import ToricCover, almost_exactness, build_cech, cohomology, torus_perfectoid_complex
from .char0 import UntiltSeries, mod_omega_bridge, pth_root_mod_p, sharp
from .charp import TiltSeries
from .cones import Cone
from .errors import LabError
from .exact import INF, NormValue
from .witt import FpBase, TiltBase, WittVec, delta, is_distinguished, theta

__version__ = "0.1.0"
