"""Which stability parameters recover P(1,2)?

Scans a grid of theta and reports the refined mass at q = 5 in restricted
and unrestricted mode.  The stack mass is 6.

Run:  python3 demos/theta_chambers.py
"""
from stacky_moduli.pipeline import gl_pipeline, weighted_p12
from stacky_moduli.refined import generic_violations
from stacky_moduli.verify import refined_mass, stack_mass, theta_grid

P = gl_pipeline(weighted_p12())
q = 5
target = stack_mass(P.cox, q)
print("stack mass:", target)

for restricted in (True, False):
    print("restricted" if restricted else "all subsets")
    rows = []
    for th in theta_grid(2, 2):
        if generic_violations(P.lattices, th, restricted):
            rows.append(f"{th}: -")
            continue
        m = refined_mass(P.S, P.constraints, P.lattices, th, q, restricted).refined_mass
        rows.append(f"{th}: {m}{' *' if m == target else ''}")
    for k in range(0, len(rows), 5):
        print("   " + "   ".join(rows[k:k + 5]))
# restricted mode only tests the subset {0}, so theta matters through its
# class modulo Lambda_r; every theta with theta_0 < 0 gives the right mass.
# Testing every subset instead drops the point with a mu_2 stabilizer
# (m_a = m_b = 0), so the best unrestricted mass is 5.
