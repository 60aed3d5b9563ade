"""Sparse linear regression robust to response outliers."""

from ._srlr import *  # noqa: F401,F403
from ._srlr import __doc__  # noqa: F401
