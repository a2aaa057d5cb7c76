"""Generate the Airy golden table used by the specfun test suite.

Integrates y'' = x*y with a high-order Taylor-series stepper in extended
precision, starting from the exact closed-form values

    Ai(0)  =  3^(-2/3) / Gamma(2/3)
    Ai'(0) = -3^(-1/3) / Gamma(1/3)

and marches in steps of 0.1 up to x = 30 and down to x = -15.  The output
file has three space-separated columns ``x ai ai_prime`` with 17 significant
digits per value, one row per grid point.

Run once, from the repository root:

    python3 tools/gen_airy_golden.py

The forward march (towards +30) is the numerically hostile direction: the
growing companion solution amplifies relative error by roughly exp(2*zeta(30))
~ 1e95, so the working precision is set far above that.
"""

import os

import mpmath as mp

mp.mp.dps = 170

ORDER = 80          # Taylor order per step
STEP = mp.mpf(1) / 10
X_LO = -150         # grid index range, in units of 0.1
X_HI = 300
OUT = os.path.join(os.path.dirname(__file__), os.pardir,
                   "src", "gapdet", "data", "airy_golden.txt")


def taylor_step(x0, a, p, h):
    """One Taylor step of y'' = x*y from (y, y') = (a, p) at x0 to x0 + h."""
    c = [a, p]
    for n in range(ORDER - 1):
        nxt = (x0 * c[n] + (c[n - 1] if n >= 1 else mp.mpf(0)))
        c.append(nxt / ((n + 1) * (n + 2)))
    val = mp.mpf(0)
    der = mp.mpf(0)
    for k in range(len(c) - 1, -1, -1):
        val = val * h + c[k]
        if k >= 1:
            der = der * h + k * c[k]
    return val, der


def main():
    ai0 = mp.power(3, mp.mpf(-2) / 3) / mp.gamma(mp.mpf(2) / 3)
    aip0 = -mp.power(3, mp.mpf(-1) / 3) / mp.gamma(mp.mpf(1) / 3)

    rows = {0: (ai0, aip0)}
    a, p = ai0, aip0
    for k in range(X_HI):
        a, p = taylor_step(k * STEP, a, p, STEP)
        rows[k + 1] = (a, p)
    a, p = ai0, aip0
    for k in range(0, X_LO, -1):
        a, p = taylor_step(k * STEP, a, p, -STEP)
        rows[k - 1] = (a, p)

    # generator self-check against an unrelated evaluation route
    for k in (X_LO, -40, 0, 45, 120, X_HI):
        ref = mp.airyai(k * STEP)
        refp = mp.airyai(k * STEP, 1)
        assert mp.fabs(rows[k][0] - ref) < mp.mpf(10) ** (-40), k
        assert mp.fabs(rows[k][1] - refp) < mp.mpf(10) ** (-40), k

    with open(OUT, "w") as fh:
        for k in range(X_LO, X_HI + 1):
            a, p = rows[k]
            fh.write("%.1f %s %s\n" % (k / 10.0,
                                       mp.nstr(a, 17, strip_zeros=False),
                                       mp.nstr(p, 17, strip_zeros=False)))
    print("wrote", os.path.normpath(OUT), "rows:", X_HI - X_LO + 1)


if __name__ == "__main__":
    main()
