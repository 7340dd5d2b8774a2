"""Batch front-end: build specs/models from JSON, run suites, write reports.

Every run requires an explicit --seed; identical config plus seed gives a
byte-identical report.  Exit status 0 means the run completed (whatever the
scientific verdict); nonzero means the configuration or execution failed,
with a machine-readable error JSON on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bounds as bounds_mod
from . import charfunc, clt, criterion, levy
from .mc import SeedSpec


class ConfigError(ValueError):
    pass


def parse_charfn(text: str) -> charfunc.CharFn:
    """Inline f parameters: "p=1,A=1,B=0,C=0,p_prime=1.4,K0=2"."""
    fields = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ConfigError(f"bad f parameter {part!r}")
        k, v = part.split("=", 1)
        fields[k.strip()] = float(v)
    try:
        return charfunc.CharFn(**fields)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid f parameters: {exc}") from exc


def parse_tseq(text: str) -> tuple:
    """"dyadic:20" -> 2^-n, "quarter:10" -> 4^-n, or a comma list."""
    if ":" in text:
        kind, count = text.split(":", 1)
        n = int(count)
        if kind == "dyadic":
            return tuple(2.0**-i for i in range(1, n + 1))
        if kind == "quarter":
            return tuple(4.0**-i for i in range(1, n + 1))
        raise ConfigError(f"unknown sequence preset {kind!r}")
    vals = tuple(float(x) for x in text.split(","))
    if any(vals[i + 1] >= vals[i] for i in range(len(vals) - 1)):
        raise ConfigError("explicit t sequence must be strictly decreasing")
    return vals


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def _write_report(out_dir: Path, name: str, doc) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    payload = json.dumps(doc, sort_keys=True, separators=(",", ":"), indent=None)
    path.write_text(payload + "\n")
    return path


def _resolved(args, extra: dict) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "func" and v is not None}
    cfg.update(extra)
    return cfg


def cmd_criterion(args) -> int:
    spec = levy.ProcessSpec.from_json(_load_json(args.spec))
    f = parse_charfn(args.f)
    config = criterion.default_config(
        f, replicates=args.replicates, n_s=args.s_points,
        h0=args.h0, ladder_depth=args.ladder_depth,
    )
    report = criterion.run_criterion(
        spec, config, SeedSpec(args.seed), n_jobs=args.jobs
    )
    out = Path(args.out)
    doc = {"config": _resolved(args, {"command": "criterion"}),
           "report": report.to_json()}
    _write_report(out, "criterion_report.json", doc)
    (out / "criterion_matrix.csv").write_text(report.to_csv())
    print(f"verdict: {report.verdict}  sigma_hat: {report.sigma_hat:.6g}")
    return 0


def cmd_subsequence(args) -> int:
    spec = levy.ProcessSpec.from_json(_load_json(args.spec))
    f = parse_charfn(args.f)
    t_seq = parse_tseq(args.tseq)
    report = criterion.subsequence_criterion(
        spec, f, t_seq, args.replicates, SeedSpec(args.seed), n_jobs=args.jobs
    )
    doc = {"config": _resolved(args, {"command": "subsequence"}),
           "report": report.to_json()}
    _write_report(Path(args.out), "subsequence_report.json", doc)
    print(f"liminf proxy: {report.liminf_proxy:.6g}  "
          f"E f(X(1)): {report.ef_x1.mean:.6g}  satisfied: {report.satisfied}")
    return 0


def cmd_negligibility(args) -> int:
    spec = levy.ProcessSpec.from_json(_load_json(args.spec))
    f = parse_charfn(args.f)
    config = criterion.default_config(
        f, replicates=args.replicates, n_s=args.s_points,
        h0=args.h0, ladder_depth=args.ladder_depth,
    )
    profile = criterion.negligibility_profile(
        spec, f, config, SeedSpec(args.seed), n_jobs=args.jobs
    )
    doc = {"config": _resolved(args, {"command": "negligibility"}),
           "report": profile.to_json()}
    _write_report(Path(args.out), "negligibility_report.json", doc)
    print(f"sup moment at h_min: {profile.sup_moment[-1]:.6g}  "
          f"decreasing fraction: {profile.decreasing_fraction:.3f}")
    return 0


def cmd_counterexample(args) -> int:
    f = parse_charfn(args.f)
    t_seq = parse_tseq(args.tseq)
    demo = levy.counterexample(f, t_seq)
    report = criterion.subsequence_criterion(
        demo, f, t_seq, args.replicates, SeedSpec(args.seed), n_jobs=args.jobs
    )
    doc = {"config": _resolved(args, {"command": "counterexample"}),
           "calibration": {"b": demo.b, "k_values": list(demo.k_values)},
           "report": report.to_json()}
    _write_report(Path(args.out), "counterexample_report.json", doc)
    for t, est in zip(report.t_seq, report.moments):
        print(f"t={t:.3e}  E f(t^-1/2 X(t)) = {est.mean:.6f} "
              f"(se {est.std_error:.2e})")
    print(f"E f(X(1)) = {report.ef_x1.mean:.6f}")
    return 0


def cmd_clt(args) -> int:
    model = clt.SequenceModel.from_json(_load_json(args.model))
    ladder = tuple(int(x) for x in args.nladder.split(","))
    config = clt.CltConfig(p=args.p, n_ladder=ladder, K=args.K,
                           replicates=args.replicates)
    report = clt.run_clt(model, config, SeedSpec(args.seed))
    doc = {"config": _resolved(args, {"command": "clt"}), "report": report}
    out = Path(args.out)
    _write_report(out, "clt_report.json", doc)
    rows = ["n,diagnostic,value"]
    for n, v in report["ks"].items():
        rows.append(f"{n},ks,{v!r}")
    for n, v in report["ratio_dev"].items():
        rows.append(f"{n},ratio_dev,{v!r}")
    (out / "clt_diagnostics.csv").write_text("\n".join(rows) + "\n")
    worst_ks = max(report["ks"].values())
    print(f"worst KS along ladder: {worst_ks:.4f}")
    return 0


def cmd_bounds(args) -> int:
    f = parse_charfn(args.f)
    records = []
    for i, (H, family) in enumerate(
        bounds_mod.builtin_kn_family(args.instances, seed=args.seed)
    ):
        res = bounds_mod.klass_nowicki_exact(H, family)
        records.append({"check": "klass_nowicki", "instance": i, **res.to_json()})
    two = ((-2.0, 0.5), (2.0, 0.5))
    res = bounds_mod.burkholder_check([two, two], f)
    records.append({"check": "burkholder", "instance": 0, **res.to_json()})
    est, bound = bounds_mod.vitali_bound_check(lambda s: s, K=2.0, resolution=4096)
    records.append({"check": "vitali", "instance": 0,
                    "estimate": est, "bound": bound})
    doc = {"config": _resolved(args, {"command": "bounds"}), "records": records}
    _write_report(Path(args.out), "bounds_report.json", doc)
    ratios = [r["ratio_low"] for r in records if r["check"] == "klass_nowicki"]
    print(f"klass-nowicki ratio range: [{min(ratios):.4f}, {max(ratios):.4f}]")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fmoment",
        description="increment-moment Brownian tests and CLT diagnostics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_f=True):
        p.add_argument("--seed", type=int, required=True,
                       help="master seed (required; no wall-clock seeding)")
        p.add_argument("--replicates", type=int, default=20_000)
        p.add_argument("--out", default="fmoment_out")
        p.add_argument("--jobs", type=int, default=1)
        if need_f:
            p.add_argument("--f", default="p=1,A=1",
                           help='inline f parameters, e.g. "p=1.3,A=1"')

    p = sub.add_parser("criterion", help="full (s, h) increment-moment matrix")
    p.add_argument("--spec", required=True, help="process spec JSON file")
    p.add_argument("--s-points", type=int, default=32)
    p.add_argument("--h0", type=float, default=0.1)
    p.add_argument("--ladder-depth", type=int, default=8)
    common(p)
    p.set_defaults(func=cmd_criterion)

    p = sub.add_parser("subsequence", help="homogeneous-process subsequence test")
    p.add_argument("--spec", required=True)
    p.add_argument("--tseq", default="dyadic:12")
    common(p)
    p.set_defaults(func=cmd_subsequence)

    p = sub.add_parser("negligibility", help="jump-component decay profile")
    p.add_argument("--spec", required=True)
    p.add_argument("--s-points", type=int, default=16)
    p.add_argument("--h0", type=float, default=0.1)
    p.add_argument("--ladder-depth", type=int, default=8)
    common(p)
    p.set_defaults(func=cmd_negligibility)

    p = sub.add_parser("counterexample", help="restricted non-Gaussian demo")
    p.add_argument("--tseq", default="quarter:10")
    common(p)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("clt", help="self-normalized CLT diagnostics")
    p.add_argument("--model", required=True, help="sequence model JSON file")
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--nladder", default="256,512,1024,2048")
    p.add_argument("--K", type=int, default=2)
    common(p, need_f=False)
    p.set_defaults(func=cmd_clt)

    p = sub.add_parser("bounds", help="inequality bench")
    p.add_argument("--instances", type=int, default=50)
    common(p)
    p.set_defaults(func=cmd_bounds)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code not in (0, None):
            print(json.dumps({"error": "invalid arguments"}), file=sys.stderr)
            return 2
        return 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure, still machine readable
        print(json.dumps({"error": f"{type(exc).__name__}: {exc}"}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
