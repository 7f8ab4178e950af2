"""Command-line driver: read a run configuration, execute commands, write
CSV/JSON outputs plus a manifest with checksums."""

from __future__ import annotations

import argparse
import cmath
import hashlib
import json
import os
import shlex
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import asym, opuc, specfun, szego, weight, zeros
from .errors import FHError, PrecisionError, SpecificationError
from .numerics import ESCALATION, Precision

EXIT_OK, EXIT_VALIDATION, EXIT_ESCALATION = 0, 2, 3

COMMANDS = ("moments", "verblunsky", "poly", "zeros", "szego", "predict", "compare", "toeplitz",
            "hbeta", "levelcurve", "limitset", "figure")
FIGURES = ("fig1", "fig2", "fig3", "fig4")
DEFAULT_BETAS = (-0.25, 1.0, 2.0, 3.0, 4.0, 5.0)
REGION_POINTS = {
    "interior": (0j, 0.3j),
    "exterior": (2 + 0j, 1.5 * cmath.exp(1j)),
    "annulus": (1.05 * cmath.exp(2j), 0.95 * cmath.exp(2j)),
}


@dataclass
class RunConfig:
    weight: weight.WeightSpec = field(default_factory=weight.lebesgue)
    n_list: list = field(default_factory=lambda: [10])
    precision_bits: int = 53
    commands: list = field(default_factory=list)
    output_dir: str = "out"
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        self.n_list = [int(n) for n in self.n_list]
        if any(n < 0 for n in self.n_list):
            raise SpecificationError("n_list entries must be nonnegative")
        if self.n_list != sorted(self.n_list):
            raise SpecificationError("n_list must be ascending")
        Precision(int(self.precision_bits))
        for c in self.commands:
            name = shlex.split(c)[0] if c.strip() else ""
            if name not in COMMANDS:
                raise SpecificationError(f"unknown command {name!r}")

    @property
    def n_max(self) -> int:
        return max(self.n_list) if self.n_list else 0

    def to_json(self) -> str:
        return json.dumps({
            "weight": json.loads(self.weight.to_json()),
            "n_list": self.n_list,
            "precision_bits": self.precision_bits,
            "commands": list(self.commands),
            "output_dir": self.output_dir,
            "tolerances": self.tolerances,
        }, sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecificationError(f"config is not valid JSON: {exc}") from exc
        if "preset" in obj:
            w = weight.preset(obj["preset"])
        else:
            w = weight.WeightSpec.from_json(obj.get("weight", {}))
        return cls(
            weight=w,
            n_list=obj.get("n_list", [10]),
            precision_bits=int(obj.get("precision_bits", 53)),
            commands=list(obj.get("commands", [])),
            output_dir=obj.get("output_dir", "out"),
            tolerances=dict(obj.get("tolerances", {})),
        )


# ---------------------------------------------------------------------------
# shared state


class Session:
    """Lazily built moments, OPUC state and Szegő data at one precision."""

    def __init__(self, cfg: RunConfig, prec: Precision, n_need: int | None = None):
        self.cfg = cfg
        self.prec = prec
        self.n_need = cfg.n_max if n_need is None else n_need
        self._moments = self._state = self._szego = None
        self.files: dict[str, bytes] = {}

    @property
    def moments(self):
        if self._moments is None:
            self._moments = weight.moments(self.cfg.weight, self.n_need + 1, self.prec)
        return self._moments

    @property
    def state(self):
        if self._state is None:
            self._state = opuc.levinson(self.moments, self.n_need + 1)
        return self._state

    @property
    def szego(self):
        if self._szego is None:
            self._szego = szego.build_szego(self.cfg.weight, self.prec)
        return self._szego

    def emit(self, name: str, text: str):
        self.files[name] = text.encode()


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    for r in rows:
        lines.append(",".join(_cell(x) for x in r))
    return "\n".join(lines) + "\n"


def _cell(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("OPUC_FH_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items):
    with ThreadPoolExecutor(max_workers=_threads()) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# commands


def cmd_moments(s: Session, args):
    mt = s.moments
    rows = [(j, float(s.prec.ctx.re(mt[j])), float(s.prec.ctx.im(mt[j]))) for j in range(-mt.J, mt.J + 1)]
    s.emit("moments.csv", _csv(["j", "re_d", "im_d"], rows))


def cmd_verblunsky(s: Session, args):
    st = s.state
    ctx = s.prec.ctx
    rows = []
    for n in range(s.cfg.n_max):
        a = st.alpha[n]
        rows.append((n, float(ctx.re(a)), float(ctx.im(a)), float(1 / ctx.sqrt(st.E[n]))))
    s.emit("verblunsky.csv", _csv(["n", "re_alpha", "im_alpha", "kappa"], rows))


def cmd_poly(s: Session, args):
    for n in s.cfg.n_list:
        s.emit(f"poly_n{n}.csv", s.state.coeffs_csv(n))


def cmd_zeros(s: Session, args):
    st, data = s.state, s.szego
    reports = _pmap(lambda n: zeros.zero_report(st, data, n, prec=Precision(53)), s.cfg.n_list)
    summary = []
    for rep in reports:
        s.emit(f"zeros_n{rep.n}.csv", rep.to_csv())
        c = rep.clock
        summary.append({
            "n": rep.n,
            "classes": {k: rep.classes.count(k) for k in sorted(set(rep.classes))},
            "discrepancies": [[t, [z.real, z.imag]] for t, z in rep.discrepancies],
            "clock": None if c is None else {
                "bulk_count": c.bulk_count, "excluded": c.excluded, "mean_gap": c.mean_gap,
                "max_gap_dev": c.max_gap_dev, "alpha": c.alpha, "moduli_fit": c.moduli_fit,
                "max_modulus_dev": c.max_modulus_dev},
        })
    s.emit("zeros_summary.json", json.dumps(summary, sort_keys=True, indent=2))


def cmd_szego(s: Session, args):
    s.emit("szego.json", s.szego.to_json())


def cmd_predict(s: Session, args):
    data = s.szego
    rows = []
    for n in s.cfg.n_list:
        if n < 1:
            continue
        for region, pts in REGION_POINTS.items():
            for z in pts:
                try:
                    p = asym.predict(data, n, z)
                except FHError:
                    continue
                v = complex(p.value)
                rows.append((n, z.real, z.imag, p.region, v.real, v.imag))
    s.emit("predict.csv", _csv(["n", "re_z", "im_z", "region", "re_pred", "im_pred"], rows))
    coef = []
    for n in s.cfg.n_list:
        if n < 1:
            continue
        a = complex(asym.predict_verblunsky(data, n))
        try:
            k2 = float(asym.predict_kappa(data, n))
        except FHError:
            k2 = float("nan")
        coef.append((n, a.real, a.imag, k2))
    s.emit("predict_coefficients.csv", _csv(["n", "re_alpha_pred", "im_alpha_pred", "kappa_sq_pred"], coef))


def cmd_compare(s: Session, args):
    p = argparse.ArgumentParser(prog="compare", add_help=False)
    p.add_argument("--region", choices=sorted(REGION_POINTS), default=None)
    opts = p.parse_args(args)
    regions = [opts.region] if opts.region else sorted(REGION_POINTS)
    st, data = s.state, s.szego
    for region in regions:
        rows = []
        for z in REGION_POINTS[region]:
            for n in s.cfg.n_list:
                if n >= 1:
                    rows.append(asym.compare(st, data, n, z, region))
        s.emit(f"compare_{region}.csv", asym.rows_to_csv(rows))
        ratios = []
        for z in REGION_POINTS[region]:
            sel = [r for r in rows if r.z == z]
            for r0, r1 in zip(sel, sel[1:]):
                ratios.append({"z": [z.real, z.imag], "n": [r0.n, r1.n],
                               "ratio": r1.rel_err / r0.rel_err if r0.rel_err else None,
                               "rel_err": [r0.rel_err, r1.rel_err]})
        s.emit(f"compare_{region}.json", json.dumps({"region": region, "ratios": ratios}, sort_keys=True, indent=2))


def cmd_toeplitz(s: Session, args):
    st, data = s.state, s.szego
    rows = []
    for n in s.cfg.n_list:
        rows.append((n, float(opuc.log_toeplitz_det(st, n)),
                     float(asym.toeplitz_ratio(st, data, n)) if n >= 1 else float("nan")))
    s.emit("toeplitz.csv", _csv(["n", "log_det", "r_n"], rows))


def hbeta_table(betas) -> str:
    rows = []
    for b in betas:
        h0 = specfun.h0(b)
        h = specfun.find_h(b)
        if h is None:
            rows.append((repr(float(b)), repr(h0.real), repr(h0.imag), "no zero", "no zero"))
        else:
            h = complex(h)
            rows.append((repr(float(b)), repr(h0.real), repr(h0.imag), repr(h.real), repr(h.imag)))
    return _csv(["beta", "re_h0", "im_h0", "re_h", "im_h"], rows)


def cmd_hbeta(s: Session, args):
    p = argparse.ArgumentParser(prog="hbeta", add_help=False)
    p.add_argument("--betas", default=None)
    # keep a leading minus sign in the value from reading as an option
    args = [f"{a}={args[i + 1]}" if a == "--betas" and i + 1 < len(args) else a
            for i, a in enumerate(args) if not (i > 0 and args[i - 1] == "--betas")]
    opts = p.parse_args(args)
    betas = DEFAULT_BETAS if not opts.betas else [float(x) for x in opts.betas.split(",")]
    s.emit("hbeta.csv", hbeta_table(betas))


def cmd_levelcurve(s: Session, args):
    data = s.szego
    if data.m == 0:
        return
    for n in s.cfg.n_list:
        if n < 2:
            continue
        pts = zeros.level_curve(data, n)
        s.emit(f"levelcurve_n{n}.csv", _csv(["re", "im"], [(z.real, z.imag) for z in pts]))


def cmd_limitset(s: Session, args):
    s.emit("limitset.csv", zeros.limit_set(s.szego).to_csv())


def _zeros_rows(st, ns):
    rows = []
    for n in ns:
        for z in zeros.compute_zeros(st, n, Precision(53)):
            rows.append((n, z.real, z.imag))
    return rows


def cmd_figure(s: Session, args):
    if not args or args[0] not in FIGURES:
        raise SpecificationError(f"figure needs one of {FIGURES}")
    which = args[0]
    st, data = s.state, s.szego
    if which == "fig1":
        ns = [n for n in s.cfg.n_list if n >= 1]
        s.emit("fig1_zeros.csv", _csv(["n", "re", "im"], _zeros_rows(st, ns)))
        cen = []
        for n in ns:
            for t in asym.predict_spurious_zeros(data, n):
                cen.append((n, complex(t).real, complex(t).imag))
        s.emit("fig1_spurious_centers.csv", _csv(["n", "re", "im"], cen))
    elif which == "fig2":
        ns = [n for n in s.cfg.n_list if n >= 2]
        s.emit("fig2_zeros.csv", _csv(["n", "re", "im"], _zeros_rows(st, ns)))
        rows = []
        for n in ns:
            for z in zeros.level_curve(data, n, num=360):
                rows.append((n, z.real, z.imag))
        s.emit("fig2_level_curves.csv", _csv(["n", "re", "im"], rows))
    elif which == "fig3":
        ns = list(range(1, s.cfg.n_max + 1))
        s.emit("fig3_zeros.csv", _csv(["n", "re", "im"], _zeros_rows(st, ns)))
        s.emit("fig3_limitset.csv", zeros.limit_set(data).to_csv())
    else:
        n = s.cfg.n_max
        zs = zeros.compute_zeros(st, n, Precision(53))
        s.emit("fig4_zeros.csv", _csv(["n", "re", "im"], [(n, z.real, z.imag) for z in zs]))
        rows = []
        for k, (b, a) in enumerate(zip(data.betas, data.points)):
            b = float(b)
            a = complex(a)
            if b == 0:
                continue
            hz = specfun.calH_zeros(b, (1e-3, 10.0, 1e-3, 6.0))
            for h in hz:
                h = complex(h)
                for zeta in (h, -h.conjugate()):
                    z = a * cmath.exp(2j * zeta / n)
                    if abs(z - a) <= s.cfg.weight.delta:
                        rows.append((k, z.real, z.imag))
        s.emit("fig4_centers.csv", _csv(["k", "re", "im"], rows))


HANDLERS = {
    "moments": cmd_moments, "verblunsky": cmd_verblunsky, "poly": cmd_poly, "zeros": cmd_zeros,
    "szego": cmd_szego, "predict": cmd_predict, "compare": cmd_compare, "toeplitz": cmd_toeplitz,
    "hbeta": cmd_hbeta, "levelcurve": cmd_levelcurve, "limitset": cmd_limitset, "figure": cmd_figure,
}


# ---------------------------------------------------------------------------
# driver


def _run_at(cfg: RunConfig, prec: Precision) -> Session:
    s = Session(cfg, prec)
    for c in cfg.commands:
        parts = shlex.split(c)
        HANDLERS[parts[0]](s, parts[1:])
    return s


def _write(out: Path, files: dict, manifest: dict):
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for name in sorted(files):
        data = files[name]
        (out / name).write_bytes(data)
        entries.append({"file": name, "sha256": hashlib.sha256(data).hexdigest(), "bytes": len(data)})
    manifest["files"] = entries
    (out / "manifest.json").write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")


def run(cfg: RunConfig) -> int:
    """Execute the configured commands with precision escalation; returns an exit code."""
    out = Path(cfg.output_dir)
    ladder = [p for p in ESCALATION if p.bits >= cfg.precision_bits] or [Precision(cfg.precision_bits)]
    if ladder[0].bits != cfg.precision_bits:
        ladder.insert(0, Precision(cfg.precision_bits))
    errors = []
    for prec in ladder:
        try:
            s = _run_at(cfg, prec)
        except PrecisionError as exc:
            errors.append({"bits": prec.bits, "error": str(exc)})
            continue
        manifest = {"config": json.loads(cfg.to_json()), "precision_bits": prec.bits,
                    "escalations": errors, "status": "ok"}
        _write(out, s.files, manifest)
        return EXIT_OK
    manifest = {"config": json.loads(cfg.to_json()), "precision_bits": ladder[-1].bits,
                "escalations": errors, "status": "precision_exhausted"}
    _write(out, {}, manifest)
    print(json.dumps({"error": "precision escalation exhausted", "attempts": errors}), file=sys.stderr)
    return EXIT_ESCALATION


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fhopuc", description="Orthogonal polynomials for Fisher-Hartwig weights")
    p.add_argument("--config", type=str, help="run configuration JSON")
    p.add_argument("--preset", type=str, choices=sorted(weight.PRESETS), help="use a built-in weight")
    p.add_argument("--precision", type=int, help="significand bits (53, 113, 237, ...)")
    p.add_argument("--out", type=str, help="output directory")
    p.add_argument("--command", action="append", default=None,
                   help='command with its options, e.g. "compare --region exterior" (repeatable)')
    p.add_argument("--n", type=str, help="comma-separated ascending degrees")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    if ns.config:
        cfg = RunConfig.from_json(Path(ns.config).read_text())
    else:
        cfg = RunConfig()
    if ns.preset:
        cfg.weight = weight.preset(ns.preset)
    if ns.precision is not None:
        cfg.precision_bits = ns.precision
    if ns.out:
        cfg.output_dir = ns.out
    if ns.command:
        cfg.commands = list(ns.command)
    if ns.n:
        try:
            cfg.n_list = [int(x) for x in ns.n.split(",") if x.strip()]
        except ValueError as exc:
            raise SpecificationError(f"bad --n list: {ns.n}") from exc
    # re-run validation on the merged configuration
    return RunConfig(cfg.weight, cfg.n_list, cfg.precision_bits, cfg.commands, cfg.output_dir, cfg.tolerances)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code else EXIT_OK
    try:
        cfg = config_from_args(ns)
    except (SpecificationError, ValueError, OSError) as exc:
        print(json.dumps({"error": "validation", "detail": str(exc)}), file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return run(cfg)
    except (SpecificationError, ValueError) as exc:
        print(json.dumps({"error": "validation", "detail": str(exc)}), file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
