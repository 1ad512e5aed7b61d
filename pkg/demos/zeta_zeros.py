"""Scan the critical line of zeta and Delta and print the zeros found."""
from archimedea import analytic as an
from archimedea import coeffs as co

for series, (t0, t1) in [(co.zeta(), (10, 40)), (co.delta(), (5, 20))]:
    zeros = an.scan_zeros(series, t0, t1)
    print(f"{series.label}: {len(zeros)} zeros on [{t0}, {t1}]")
    for g in zeros:
        print(f"  {g:.9f}")
