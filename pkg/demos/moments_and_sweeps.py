"""Reduced moments of a two-species embedded GUE and how they move with k.

Run with ``python3 demos/moments_and_sweeps.py``.  For six fermions in each
of two 12-orbital spaces, q falls from near 1 (Gaussian-like) at k=1 toward 0
(semicircle) as the interaction rank grows.  The last two columns compare the
sixth moment from the ensemble formula against the q-normal value at the
same q; the Y-term policy used is printed with each table.
"""
from fractions import Fraction

from qmom import RScheme, SystemSpec, Uniform, YTermPolicy
from qmom.sweep import sweep

system = SystemSpec("fermion", 12, 6, 12, 6)


def show(title, rows):
    print(title)
    print("   k        q        mu6(formula)  mu6(q-normal)  rel diff")
    for r in rows:
        print(f"  {r.k:2d}  {r.q:10.6f}  {r.mu6_formula:12.5f}  {r.mu6_qnormal:12.5f}  {r.rel_diff:8.4f}")
    print()


show("finite N, uniform variances, Y from the dilute limit (default)", sweep(system, Uniform(1)))
show("finite N, Y term dropped", sweep(system, Uniform(1), policy=YTermPolicy.DROP))
show("finite N, Y share taken whole from the dilute limit",
     sweep(system, Uniform(1), policy=YTermPolicy.ASYMPTOTIC_REDUCED))
show("dilute limit (binomial products at the same N, m)", sweep(system, Uniform(1), mode="asymptotic"))

# Weak cross-species coupling: interactions that move particles of both species are suppressed.
show("finite N, R = 1/5", sweep(system, RScheme(1, Fraction(1, 5))))
