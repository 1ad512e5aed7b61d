"""Gamma quotient and critical-line poles of L(s, sym^2 Delta) / zeta(s)."""
from archimedea import analytic as an
from archimedea import arch_gamma as ag
from archimedea import coeffs as co

num, den = co.sym_power_delta(2), co.zeta()
v = ag.reduce_quotient(num.arch / den.arch)
if isinstance(v, ag.FinitelyManyZeros):
    print("gamma quotient has finitely many zeros:", v.gl2_type)
else:
    print("gamma quotient has infinitely many zeros, witness", v.witness.label())

report = an.quotient_pole_report(num, den, 14, 26)
for p in report.entries:
    flag = "certified" if p.certified else "not certified"
    print(f"  t = {p.t:.6f}  zero order of zeta {p.den_zero_order}  |Lambda_num| {p.num_abs:.3e}  {flag}")
