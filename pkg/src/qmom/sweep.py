"""k-sweeps of q and mu6 in the layout of the rank-dependence figures."""
from __future__ import annotations

import csv
import io
import logging
from dataclasses import astuple, dataclass, fields
from typing import Iterable, Optional

from .asymptotic import asymptotic_report
from .errors import QmomError
from .finite import moment_report
from .model import InteractionSpec, RScheme, SystemSpec, VarianceScheme

log = logging.getLogger(__name__)

__all__ = ["SweepRow", "DEFAULT_GRIDS", "SMALL_M1_KMAX", "sweep", "grid_systems", "rows_to_csv"]

# repository defaults, not values read off the published figures
DEFAULT_GRIDS = {
    "fermion": [(12, 4, 12, 4), (12, 6, 12, 6), (10, 4, 14, 6), (20, 4, 20, 4)],
    "boson": [(4, 4, 4, 4), (4, 6, 4, 6), (5, 4, 5, 4)],
    "small-m1": [(12, 2, 12, 6), (12, 3, 12, 6), (12, 4, 12, 6)],
}
SMALL_M1_KMAX = 4


@dataclass
class SweepRow:
    stats: str
    N1: int
    m1: int
    N2: int
    m2: int
    k: int
    mode: str
    scheme: str
    R: Optional[float]
    mu2: Optional[float]
    q: Optional[float]
    mu4: Optional[float]
    mu6_formula: Optional[float]
    mu6_qnormal: Optional[float]
    rel_diff: Optional[float]

    @classmethod
    def columns(cls):
        return [f.name for f in fields(cls)]


def grid_systems(name: str):
    """(stats, (N1, m1, N2, m2), k_max) for a named default grid."""
    if name not in DEFAULT_GRIDS:
        raise KeyError(f"unknown grid {name!r}; choose from {sorted(DEFAULT_GRIDS)}")
    stats = "boson" if name == "boson" else "fermion"
    for spec in DEFAULT_GRIDS[name]:
        k_max = SMALL_M1_KMAX if name == "small-m1" else min(spec[1], spec[3])
        yield stats, spec, k_max


def sweep(
    sys: SystemSpec,
    scheme: VarianceScheme,
    k_values: Optional[Iterable[int]] = None,
    mode: str = "finite",
    policy=None,
) -> list:
    """One SweepRow per k (default k = 1 .. min(m1, m2)).

    A row that cannot be evaluated is kept with empty numeric fields and a
    warning; the sweep fails only when every row fails.
    """
    if k_values is None:
        k_values = range(1, min(sys.m1, sys.m2) + 1)
    evaluate = moment_report if mode == "finite" else asymptotic_report
    R = float(scheme.R) if isinstance(scheme, RScheme) else None
    rows, errors = [], []
    for k in k_values:
        base = dict(stats=sys.stats.value, N1=sys.N1, m1=sys.m1, N2=sys.N2, m2=sys.m2,
                    k=k, mode=mode, scheme=scheme.name, R=R)
        try:
            rep = evaluate(sys, InteractionSpec(k, scheme), policy)
        except QmomError as exc:
            log.warning("k=%d skipped: %s", k, exc)
            errors.append(exc)
            rows.append(SweepRow(**base, mu2=None, q=None, mu4=None, mu6_formula=None,
                                 mu6_qnormal=None, rel_diff=None))
            continue
        rows.append(SweepRow(**base, mu2=rep.mu2, q=rep.q, mu4=rep.mu4,
                             mu6_formula=rep.mu6_formula, mu6_qnormal=rep.mu6_qnormal,
                             rel_diff=rep.rel_diff))
    if rows and len(errors) == len(rows):
        raise errors[0]
    return rows


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows, header: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header:
        writer.writerow(SweepRow.columns())
    for row in rows:
        writer.writerow([_cell(v) for v in astuple(row)])
    return buf.getvalue()
