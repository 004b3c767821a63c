"""Geo-distributed graph store simulator: layered graph, heat-diffusion
placement, stepwise routing and cost accounting."""

from ._geolayer import *  # noqa: F401,F403
from ._geolayer import __doc__  # noqa: F401
