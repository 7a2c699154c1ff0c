"""The q-normal family between the semicircle (q=0) and the Gaussian (q=1).

Run with ``python3 demos/qnormal_density.py``.  Prints the density on a few
points, the support edge, and checks the fourth and sixth moments by
quadrature against their closed forms.
"""
import numpy as np

from qmom.qnormal import integrate_against_pdf, mu4_of_q, mu6_of_q, qnormal_pdf, support

xs = np.array([0.0, 0.5, 1.0, 1.5, 2.0, 3.0])

print("q-normal density f(x|q)")
print("    q   " + "".join(f"x={x:<7g}" for x in xs) + "  support edge")
for q in (0.0, 0.25, 0.5, 0.75, 0.95, 1.0):
    edge = support(q).upper
    row = "".join(f"{v:<9.5f}" for v in qnormal_pdf(xs, q))
    print(f"  {q:4.2f}  {row}  {edge:.4g}")

# Shape is carried by mu4 = 2 + q and mu6 = 5 + 6q + 3q^2 + q^3.
print("\nmoments by quadrature vs closed form")
for q in (0.0, 0.3, 0.7, 1.0):
    m4 = integrate_against_pdf(lambda x: x**4, q)
    m6 = integrate_against_pdf(lambda x: x**6, q)
    print(f"  q={q:.1f}  mu4 {m4:.10f} ({mu4_of_q(q):.10f})  mu6 {m6:.10f} ({mu6_of_q(q):.10f})")
