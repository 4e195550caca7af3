"""The Hirzebruch surface F_2 with the collection O, O(f), O(h), O(f+h).

The quiver of sections never sees the generator u of degree h - 2f on its
own, so S / I_de cannot be the Cox ring.

Run:  python3 demos/f2_negative.py
"""
from stacky_moduli.pipeline import build_pipeline, hirzebruch_f2
from stacky_moduli.refined import captures_cox_check

C, V = hirzebruch_f2()
P = build_pipeline(C, V)
Q = P.quiver

print("vertices (f, h coordinates):", [v.canonical for v in Q.vertices])
for a in Q.arrows:
    print(f"  {a.tail} -> {a.head}: {Q.label_name(a)}")

cc = captures_cox_check(C, P.S, P.de_ideal)
print("captures the Cox ring:", cc.verdict)
for u in cc.unreached:
    print("  ", u["generator"], "-", u["reason"])
bad = cc.mismatches
print(f"{len(bad)} of {cc.degrees_checked} tested degrees disagree, e.g.")
for h in bad[:4]:
    print(f"   degree {h['degree'].canonical}: dim (S/I_de) = {h['lhs']}, dim R = {h['rhs']}")
