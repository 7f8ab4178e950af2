"""Print h_0(beta) and h(beta) for the standard beta list (or the ones given)."""

import argparse

from fhopuc.cli import DEFAULT_BETAS, hbeta_table

if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("betas", nargs="*", type=float, default=list(DEFAULT_BETAS))
    args = p.parse_args()
    print(hbeta_table(args.betas), end="")
