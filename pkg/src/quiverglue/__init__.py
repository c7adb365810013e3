"""Exact-arithmetic toolkit for gluing quiver representations along Ext bases."""

import warnings

import sympy as _sympy  # noqa: F401  (imported first: sympy prepends its own warning filter)

# sympy >= 1.13 warns when sorting GF(p) factor lists internally; harmless here
# and silenced so command output stays stable.
warnings.filterwarnings(
    "ignore",
    message="(?s).*Ordered comparisons with modular integers.*",
    category=DeprecationWarning,
)

__version__ = "0.1.0"
