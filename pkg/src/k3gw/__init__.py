"""Exact q-series engine for counting elliptic curves in K3 surfaces."""

from .series import PowerSeries, mul, mul_fast, invert, theta, compose_power, reindex
from .qseries import divisor_sigma, cover_count, g2, eta24_inverse, f_combo
from .counts import n0, n1, p0, p1, m0, m1_theorem, h1_from_ode, n1_index2, table
from .verify import run_all

__version__ = "0.1.0"
