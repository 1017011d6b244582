"""Numerical tour of the radial blow-up and blow-down forms.

The forms live on C^n minus the origin.  Each check samples random points and
unit vectors and reports the worst residual it saw.
"""
from sympack import localmodels as lm

lam, eps, delta = 1.0, 0.25, 1.0

print("Fubini-Study area of CP^1 by quadrature:", round(lm.fs_area_cp1(), 6))

rep = lm.verify_calculation_identity(lam, n=2, samples=50)
print(f"pullback identity: max residual {rep.max_residual:.2e} pass={rep.passed}")

# the blow-up form picks its own small neck radius; the blow-down form needs one
for which, d in (("tau_tilde", None), ("tau", delta), ("rho", None)):
    reps = lm.local_model_suite(which, lam=lam, eps=eps, delta=d, n=2, samples=50)
    for r in reps:
        print(f"{which:9s} {r.check:26s} on ({r.region[0]:.3g}, {r.region[1]:.3g}): "
              f"{r.max_residual:.2e} {'ok' if r.passed else 'FAIL'}")
