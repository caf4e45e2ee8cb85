"""Inverse scattering and soliton resolution for the defocusing mKdV equation with kink data."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
