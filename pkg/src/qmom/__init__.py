"""Moments of two-species k-body embedded Gaussian unitary ensembles.

Exact finite-N and dilute-limit moment formulas, the q-normal reference
density, and a Monte Carlo simulator that builds the ensembles explicitly.
"""
from .combinatorics import Statistics, binomial, binomial_signed, space_dimension
from .errors import (
    DegenerateEnsembleError,
    DimensionCapError,
    QmomError,
    ValidationError,
)
from .model import InteractionSpec, RScheme, SystemSpec, Table, Uniform, YTermPolicy
from .finite import MomentReport, moment_report, mu2_finite, mu6_finite, q_finite
from .asymptotic import asymptotic_report, mu2_asym, mu6_asym, q_asym
from .qnormal import mu4_of_q, mu6_of_q, qnormal_pdf, support

__version__ = "0.1.0"
