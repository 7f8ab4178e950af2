"""Write the data behind the four zero plots into one directory per figure."""

import argparse
import sys
from pathlib import Path

from fhopuc import cli, weight

FIGS = {
    "fig1": ("fig1", [15, 30, 45, 60, 75, 90], ["figure fig1"]),
    "fig2": ("fig2", [15, 30, 45, 60, 75, 90], ["figure fig2"]),
    "fig3": ("fig3", [150], ["figure fig3", "limitset"]),
    "fig4": ("fig3", [150], ["figure fig4"]),
}

if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default="figure_data")
    p.add_argument("--only", choices=sorted(FIGS), action="append")
    args = p.parse_args()
    status = 0
    for fig in args.only or sorted(FIGS):
        name, ns, cmds = FIGS[fig]
        cfg = cli.RunConfig(weight.preset(name), ns, 113, cmds, str(Path(args.out) / fig))
        code = cli.run(cfg)
        print(f"{fig}: exit {code} -> {cfg.output_dir}")
        status = max(status, code)
    sys.exit(status)
