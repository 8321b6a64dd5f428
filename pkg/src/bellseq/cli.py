"""Command-line front end.

Angles are degrees unless ``--unit rad``; the library works in radians and the
conversion happens here only. Every float is printed with 12 significant
digits, so identical arguments give byte-identical output.

Exit status: 0 success, 2 bad arguments, 1 internal invariant violation.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import fine, inequalities, lhv, optics, probcore, scenarios
from . import spinalg as sa
from .errors import InvariantViolation

RHO_CHOICES = {"mixed": sa.MAXIMALLY_MIXED, "up_z": sa.UP_Z, "up_y": sa.UP_Y}
SCENARIO_ALIASES = {"bell": "bell_pair", "sequential": "sequential_chain", "product": "product_pair"}
CORR_CHOICES = {
    "singlet": scenarios.bell_correlation,
    "lhv": inequalities.lhv_linear_corr,
    "product": scenarios.product_correlation,
    "product_anti": lambda a, b: -scenarios.product_correlation(a, b),
}


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    angle_unit: str = "deg"
    seed: int = 0
    output: str = "json"
    out_path: str = "-"

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls(**json.loads(text))


def _round(x):
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = float(f"{float(x):.12g}")
        return 0.0 if v == 0.0 else v
    if isinstance(x, complex):
        return {"re": _round(x.real), "im": _round(x.imag)}
    if isinstance(x, dict):
        return {k: _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_round(v) for v in x]
    return x


def _flatten(d, prefix=""):
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = " ".join(json.dumps(x) for x in v)
        else:
            out[key] = "" if v is None else json.dumps(v) if isinstance(v, bool) else v
    return out


def _csv_from_report(report):
    flat = _flatten(report)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(flat))
    w.writerow(list(flat.values()))
    return buf.getvalue()


class Runner:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.scale = 180.0 / math.pi if cfg.angle_unit == "deg" else 1.0
        self.workers = int(os.environ.get("BELLSEQ_THREADS", "1"))

    def rad(self, a):
        return float(a) / self.scale

    def out_angle(self, a):
        return a * self.scale

    def out_angles(self, angles):
        return [self.out_angle(a) for a in angles]

    def emit(self, report=None, text=None):
        """Report dict rendered as JSON or CSV, or pre-rendered CSV text."""
        if text is None:
            report = _round(report)
            if self.cfg.output == "csv":
                text = _csv_from_report(report)
            else:
                text = json.dumps(report, indent=2) + "\n"
        if self.cfg.out_path == "-":
            sys.stdout.write(text)
        else:
            with open(self.cfg.out_path, "w", newline="") as fh:
                fh.write(text)

    # -- commands -------------------------------------------------------

    def correlate(self, p):
        angles = [self.rad(a) for a in p["angles"]]
        rho = RHO_CHOICES[p["rho"]] if p.get("rho") else None
        if p.get("samples"):
            batch = scenarios.sample(p["scenario"], angles, p["samples"], self.cfg.seed, rho, self.workers)
            if p.get("emit_samples"):
                if self.cfg.output == "csv":
                    return self.emit(text=batch.to_csv())
                d = batch.to_dict()
                d["angles"] = self.out_angles(batch.angles)
                return self.emit(d)
            rec = scenarios.estimate(batch)
        else:
            rec = scenarios.exact_correlation(p["scenario"], angles, rho)
        d = rec.to_dict()
        d["angles"] = self.out_angles(rec.angles)
        d["angle_unit"] = self.cfg.angle_unit
        self.emit(d)

    def equivalence(self, p):
        theta, phi = self.rad(p["theta"]), self.rad(p["phi"])
        r = scenarios.equivalence_report(theta, phi)
        if not r.matches:
            raise InvariantViolation(f"equivalence failed at {(theta, phi)}")
        self.emit({"theta": p["theta"], "phi": p["phi"], "angle_unit": self.cfg.angle_unit,
                   "c_ab": r.c_ab, "c_bb": r.c_bb, "matches": r.matches,
                   "max_conditional_gap": r.max_conditional_gap})

    def _scan(self, family, p):
        corr = CORR_CHOICES[p["corr"]]
        step = self.rad(p["step"])
        if self.cfg.output == "csv":
            return self.emit(text=inequalities.scan_csv(family, corr, step, self.scale))
        angles, values = inequalities.scan(family, corr, step)
        bound = inequalities.BOUNDS[family]
        rows = [{"angles": self.out_angles(a), "value": v + bound, "violated": bool(v > 1e-12)}
                for a, v in zip(angles, values)]
        self.emit({"family": family, "corr": p["corr"], "step": p["step"],
                   "angle_unit": self.cfg.angle_unit,
                   "violations": sum(r["violated"] for r in rows), "rows": rows})

    def scan_bell(self, p):
        self._scan(p["family"], p)

    def scan_chsh(self, p):
        self._scan("chsh", p)

    def maximize(self, p):
        corr = CORR_CHOICES[p["corr"]]
        m = inequalities.maximize_violation(p["family"], corr, self.rad(p["step"]), p["refine"])
        self.emit({"family": p["family"], "corr": p["corr"], "angles": self.out_angles(m.angles),
                   "angle_unit": self.cfg.angle_unit, "value": m.value, "violation": m.violation})

    def fine(self, p):
        r = fine.fine_check(*(self.rad(a) for a in p["angles"]))
        d = r.to_dict()
        d["angles"] = p["angles"]
        d["angle_unit"] = self.cfg.angle_unit
        self.emit(d)

    def fine_chsh(self, p):
        vals = p["values"]
        if p.get("angles"):
            a, a2, b, b2 = (self.rad(v) for v in vals)
            cs = [scenarios.bell_correlation(x, y) for x, y in ((a, b), (a, b2), (a2, b), (a2, b2))]
        else:
            cs = vals
            if any(abs(c) > 1.0 for c in cs):
                raise ValueError("correlations must lie in [-1, 1]")
        r = fine.chsh_joint_feasible(*cs)
        d = r.to_dict()
        d["chsh_variants"] = fine.chsh_sign_variants(*cs)
        self.emit(d)

    def lhv(self, p):
        model = lhv.LhvModel(p["geometry"], p["pairing"])
        theta, phi = self.rad(p["theta"]), self.rad(p["phi"])
        rec = lhv.lhv_correlation_mc(model, theta, phi, p["count"], self.cfg.seed, self.workers)
        d = rec.to_dict()
        d["angles"] = self.out_angles(rec.angles)
        d["angle_unit"] = self.cfg.angle_unit
        d["exact"] = lhv.lhv_correlation_exact(model, theta, phi)
        d["quantum"] = scenarios.bell_correlation(theta, phi) * (
            1 if model.pairing is lhv.Pairing.ANTI_PAIR else -1)
        self.emit(d)

    def optics(self, p):
        kind, i0 = p["kind"], p["i0"]
        angles = [self.rad(a) for a in p["angles"]]
        if p.get("sweep"):
            start, stop, step = (self.rad(x) for x in p["sweep"])
            values = np.arange(start, stop + 0.5 * step, step)
            need = 1 if kind == "cascade" else 2
            if len(angles) != need:
                raise ValueError(f"{kind} sweep takes {need} fixed angle(s)")
            return self.emit(text=optics.sweep_csv(kind, i0, angles, values, self.scale))
        if kind == "cascade":
            if len(angles) != 2:
                raise ValueError("cascade takes theta1 theta2")
            s = optics.pbs_cascade(i0, *angles)
            self.emit({"kind": kind, "angles": p["angles"], "angle_unit": self.cfg.angle_unit,
                       "i0": i0, "i_pp": s.i_pp, "i_pm": s.i_pm, "i_mp": s.i_mp,
                       "i_mm": s.i_mm, "correlation": s.correlation()})
        else:
            if len(angles) != 3:
                raise ValueError("chain takes t1 t2 t3")
            self.emit({"kind": kind, "angles": p["angles"], "angle_unit": self.cfg.angle_unit,
                       "i0": i0, "intensity": optics.three_filter_chain(i0, *angles),
                       "triple_operator_up_z": scenarios.triple_operator_correlator(sa.UP_Z, *angles)})

    def demo_coins(self, p):
        joint = probcore.coin_machine()
        a1, b0 = {0: 1}, {1: -1}
        fc = probcore.factorisation_check(joint, a1, b0)
        cc = probcore.completeness_check(joint, 0, 1)
        self.emit({"joint": {"n": joint.n, "p": list(joint.p)},
                   "p_a1": joint.prob(a1), "p_b0": joint.prob(b0),
                   "p_a1_given_b0": probcore.conditional(joint, 0, 1, 1, -1),
                   "p_ab": fc.p_ab, "product": fc.p_a_p_b, "factorises": fc.factorises,
                   "completeness": {"lhs": cc.lhs, "rhs": cc.rhs, "holds": cc.holds},
                   "correlation": probcore.pairwise_correlation(joint, 0, 1)})


def _common():
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--unit", dest="angle_unit", choices=("deg", "rad"), default="deg")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--format", dest="output", choices=("json", "csv"), default="json")
    c.add_argument("--out", dest="out_path", default="-", help="output file (default stdout)")
    return c


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="bellseq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("correlate", parents=[common], help="correlation for one scenario")
    p.add_argument("scenario", type=lambda s: SCENARIO_ALIASES.get(s, s),
                   choices=[s.value for s in scenarios.Scenario],
                   help="scenario name; bell, sequential and product are accepted as short forms")
    p.add_argument("angles", type=float, nargs="+")
    p.add_argument("--rho", choices=sorted(RHO_CHOICES))
    p.add_argument("--samples", type=int, help="estimate from this many seeded draws")
    p.add_argument("--emit-samples", action="store_true", help="output the raw sample batch")

    p = sub.add_parser("equivalence", parents=[common], help="C_BB vs -C_AB")
    p.add_argument("theta", type=float)
    p.add_argument("phi", type=float)

    p = sub.add_parser("scan-bell", parents=[common], help="three-setting grid scan")
    p.add_argument("--family", choices=("bell_canonical", "bell_paper"), default="bell_canonical")
    p.add_argument("--corr", choices=sorted(CORR_CHOICES), default="singlet")
    p.add_argument("--step", type=float, default=10.0)

    p = sub.add_parser("scan-chsh", parents=[common], help="CHSH grid scan")
    p.add_argument("--corr", choices=sorted(CORR_CHOICES), default="singlet")
    p.add_argument("--step", type=float, default=30.0)

    p = sub.add_parser("maximize", parents=[common], help="largest violation")
    p.add_argument("family", choices=inequalities.FAMILIES)
    p.add_argument("--corr", choices=sorted(CORR_CHOICES), default="singlet")
    p.add_argument("--step", type=float, default=22.5)
    p.add_argument("--refine", type=int, default=10)

    p = sub.add_parser("fine", parents=[common], help="three-setting joint feasibility")
    p.add_argument("angles", type=float, nargs=3)

    p = sub.add_parser("fine-chsh", parents=[common], help="four-setting joint feasibility")
    p.add_argument("values", type=float, nargs=4,
                   help="c_ab c_ab' c_a'b c_a'b' (or a a' b b' with --angles)")
    p.add_argument("--angles", action="store_true", help="values are singlet settings")

    p = sub.add_parser("lhv", parents=[common], help="hidden-variable Monte Carlo")
    p.add_argument("theta", type=float)
    p.add_argument("phi", type=float)
    p.add_argument("--count", type=int, default=100_000)
    p.add_argument("--geometry", choices=[g.value for g in lhv.Geometry], default="planar")
    p.add_argument("--pairing", choices=[g.value for g in lhv.Pairing], default="anti_pair")

    p = sub.add_parser("optics", parents=[common], help="Malus-law intensities")
    p.add_argument("kind", choices=("cascade", "chain"))
    p.add_argument("angles", type=float, nargs="+")
    p.add_argument("--i0", type=float, default=1.0)
    p.add_argument("--sweep", type=float, nargs=3, metavar=("START", "STOP", "STEP"),
                   help="sweep theta2 (cascade) or the middle filter (chain); CSV output")

    sub.add_parser("demo-coins", parents=[common], help="coin-machine factorisation example")
    return parser


GLOBAL_KEYS = ("command", "angle_unit", "seed", "output", "out_path")


def config_from_args(ns):
    d = vars(ns)
    params = {k: v for k, v in d.items() if k not in GLOBAL_KEYS}
    return RunConfig(d["command"], params, d["angle_unit"], d["seed"], d["output"], d["out_path"])


def run(argv=None):
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    cfg = config_from_args(ns)
    if not 0 <= cfg.seed < 2 ** 64:
        print("bellseq: error: seed must be a 64-bit unsigned integer", file=sys.stderr)
        return 2
    runner = Runner(cfg)
    try:
        getattr(runner, cfg.command.replace("-", "_"))(cfg.params)
    except InvariantViolation as e:
        print(f"bellseq: invariant violation: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"bellseq: error: {e}", file=sys.stderr)
        return 2
    return 0


def main():
    sys.exit(run())
