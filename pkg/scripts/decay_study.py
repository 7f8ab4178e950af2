"""Error of each predictor as n doubles, for a preset weight.

Prints one CSV row per (quantity, point, n) with the error and the ratio to the
previous n.  Useful for checking the 1/n^2 (or 1/n) rates by eye.
"""

import argparse
import cmath
import sys

from fhopuc import asym, opuc, szego, weight
from fhopuc.numerics import Precision


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--preset", default="fig3", choices=sorted(weight.PRESETS))
    p.add_argument("--n", default="50,100,200", help="ascending degrees")
    p.add_argument("--precision", type=int, default=113)
    args = p.parse_args(argv)
    ns = [int(x) for x in args.n.split(",")]
    prec = Precision(args.precision)
    spec = weight.preset(args.preset)
    st = opuc.levinson(weight.moments(spec, max(ns) + 1, prec), max(ns) + 1)
    data = szego.build_szego(spec, prec)

    rows = []

    def series(label, f):
        prev = None
        for n in ns:
            e = float(abs(f(n)))
            rows.append((label, n, e, "" if prev in (None, 0) else f"{e / prev:.4f}"))
            prev = e

    series("alpha", lambda n: st.alpha[n] - asym.predict_verblunsky(data, n))
    ctx = prec.ctx
    sb = spec.sum_beta_sq(prec)
    series("kappa", lambda n: st.kappa_sq(n - 1) * 2 * ctx.pi * data.G - (1 - sb / n))
    for z in (0, 0.3j):
        series(f"interior z={z}", lambda n, z=z: asym.compare(st, data, n, z, "interior").abs_err)
    for z in (2.0, 1.5 * cmath.exp(1j)):
        series(f"exterior z={z:.3g}", lambda n, z=z: asym.compare(st, data, n, z, "exterior").rel_err)
    for k, a in enumerate(data.points):
        a = complex(a)
        series(f"local k={k}", lambda n, a=a, k=k: asym.compare(
            st, data, n, a * cmath.exp(2j / n) * (1 - 1 / n), "local", k=k).rel_err)

    w = sys.stdout
    w.write("quantity,n,error,ratio\n")
    for r in rows:
        w.write(f"{r[0]},{r[1]},{r[2]!r},{r[3]}\n")


if __name__ == "__main__":
    main()
