"""Stack mass against refined-moduli mass for the weighted-line fixtures.

Run:  python3 demos/mass_table.py
The (2,3) line at q = 7 enumerates about 3.6 million candidates.
"""
import time

from stacky_moduli.pipeline import GL_FIXTURES, gl_pipeline
from stacky_moduli.verify import compare_masses

plan = {"p1": [3, 5, 7], "p12": [3, 5, 7], "w222": [3, 5], "w23": [5, 7]}

print(f"{'fixture':8} {'q':>3} {'stack':>6} {'naive':>6} {'refined':>8}  profile")
for name, qs in plan.items():
    P = gl_pipeline(GL_FIXTURES[name]())
    t0 = time.perf_counter()
    for r in compare_masses(P.cox, P.S, P.constraints, P.lattices, qs, P.default_theta()):
        prof = {k: str(v) for k, v in sorted(r.refined_profile.items())}
        flag = "" if r.match else "  MISMATCH"
        print(f"{name:8} {r.q:>3} {str(r.stack_mass):>6} {str(r.naive_stack_mass):>6} {str(r.refined_mass):>8}"
              f"  {prof}{flag}")
    print(f"{'':8} ({time.perf_counter() - t0:.1f}s)")

# With torsion in L (the (2,2,2) line) the naive count |points| / |L^dual|
# undercounts: points with a mu_2 stabilizer come in twisted forms.
