"""Print J_nu(r) in each decay regime next to its fitted shape bound."""

from rlab.besself import asymptotic_bound, bessel_j, classify_regime

for nu in (20.0, 100.0):
    for ratio in (0.25, 0.5, 0.9, 1.0, 1.2, 4.0):
        r = ratio * nu
        v = bessel_j(nu, r)
        print(f"nu={nu:5g} r={r:7g} {str(classify_regime(nu, r)):12s} J={v.value: .6e} "
              f"bound={asymptotic_bound(nu, r):.3e} via {v.method}")
