"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 not lossless / infeasible,
3 numerical failure.
"""
import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import continuous, discrete, io, number_theory, reconstruction, shutter
from .exceptions import (
    BudgetError,
    DimensionError,
    InconsistentStream,
    InsufficientExcitation,
    InsufficientHorizon,
    NotLossless,
    PartialReconstruction,
    PreconditionError,
    UnsupportedSpec,
)
from .signals import MixingSignal, PeriodicVectorSignal, compress, switch_mixer

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_NUMERIC = 0, 1, 2, 3


class Infeasible(Exception):
    """Analysis finished with a negative verdict; carries the report."""

    def __init__(self, report):
        super().__init__("not lossless")
        self.report = report


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if hasattr(obj, "numerator") and not isinstance(obj, (int, bool)):
        return str(obj)
    return obj


def _emit(report, args):
    text = json.dumps(_jsonable(report), indent=2, sort_keys=True)
    print(text)
    if getattr(args, "report", None):
        Path(args.report).write_text(text + "\n")


def _mixer_from_args(args, n=None):
    if getattr(args, "mixer", None):
        return io.read_signal_csv(args.mixer, exact=args.exact, kind="mixer")
    if getattr(args, "switch", None):
        return switch_mixer(args.switch, exact=args.exact)
    if n is not None:
        return switch_mixer(n, exact=args.exact)
    raise PreconditionError("give --mixer FILE or --switch N")


# ---------------------------------------------------------------------------
# subcommands


def cmd_compress(args):
    x = io.read_signal_csv(args.signal, exact=args.exact)
    c = _mixer_from_args(args, None if (args.mixer or args.switch) else x.n)
    horizon = args.horizon or number_theory.lcm(c.m, x.p)
    y = compress(x, c, horizon)
    io.write_stream_csv(args.out, y)
    _emit({"command": "compress", "n": x.n, "m": c.m, "p": x.p, "horizon": horizon,
           "value_kind": x.value_kind, "artifacts": [str(args.out)]}, args)


def _analyze_periodic(args):
    n, p = args.n, args.p
    if args.mixer:
        c = io.read_signal_csv(args.mixer, exact=args.exact, kind="mixer")
        if c.n != n:
            raise DimensionError(f"mixer dimension {c.n} != --n {n}")
        plan = reconstruction.plan_reconstruction(c, p, number_theory.lcm(c.m, p))
        report = {"target": "mixer", "n": n, "m": c.m, "p": p, "lossless": plan.feasible,
                  "plan": plan.to_dict()}
        if c.m >= n:
            rich = reconstruction.check_richness(c, n)
            report["rich"] = rich.rich
            report["richness_witness"] = rich.witness
            report["inequality_verdict"] = number_theory.general_losslessness(n, c.m, p) if rich.rich else None
        return report
    if args.m is not None:
        verdict = number_theory.general_losslessness(n, args.m, p)
        return {"target": "rich-mixer", "n": n, "m": args.m, "p": p, "lossless": verdict,
                "gcd_m_p": number_theory.gcd(args.m, p),
                "note": "verdict assumes a sufficiently rich mixer"}
    cov = number_theory.winding_coverage(n, p)
    plan = reconstruction.plan_reconstruction(switch_mixer(n), p, number_theory.lcm(n, p))
    uncovered = [[i + 1, j] for i, j in sorted(cov.uncovered)]
    return {"target": "switch", "n": n, "p": p, "gcd": number_theory.gcd(n, p),
            "lossless": number_theory.switch_losslessness(n, p),
            "winding_surjective": cov.surjective,
            "uncovered": uncovered,
            "uncovered_entries": [f"x{i}({j})" for i, j in uncovered],
            "plan": plan.to_dict()}


def _analyze_perm(args):
    spec = discrete.PermutationSpec.from_cycles(args.perm, args.n)
    v = discrete.permutation_losslessness(spec)
    return {"target": "permutation", "sigma": spec.to_cycle_string(), "n": spec.n,
            "cycle_lengths": spec.cycle_lengths, "order": spec.order,
            "lossless": v.lossless, "cycle_resonance": discrete.cycle_resonance(spec),
            "witnesses": {k: {"i": i, "j": j, "t": t} for k, (i, j, t) in v.witnesses.items()},
            "missing_channels": list(v.missing)}


def _analyze_alpha(args):
    alpha = io.parse_angle(args.alpha)
    hit = discrete.rotation_resonance(alpha, args.bound)
    report = {"target": "rotation", "alpha_radians": float(alpha), "search_bound": args.bound,
              "resonance": None if hit is None else {"p": hit[0], "q": hit[1],
                                                      "odd_multiple": 2 * hit[0] + 1, "even_multiple": 2 * hit[1]}}
    # the resonance is sufficient only; the rank of the row stack decides
    times = discrete.rotation_solver_times(alpha, 2 * args.bound + 2)
    report["lossless"] = len(times) == 2
    report["solver_times"] = times
    return report


def _analyze_group(args):
    data = json.loads(Path(args.group).read_text())
    spec = io.load_exosystem({"kind": "group", **data})
    hit = discrete.group_resonance_search(spec, candidate_power=args.candidate_power)
    rank = discrete.group_row_rank(spec)
    return {"target": "group", "n": spec.n, "group_tag": spec.group_tag, "T_max": spec.T_max,
            "resonance": None if hit is None else {"power": hit.power, "times": hit.times, "G_prime": hit.G_prime},
            "row_rank": rank, "lossless": rank == spec.n,
            "note": "G' search is capped at T_max; row rank is the operative verdict"}


def _analyze_sensors(args):
    spec = io.load_exosystem(args.sensors)
    per = []
    for i in range(spec.N):
        ok, r = discrete.observability_criterion(spec.A[i], spec.C[i], spec.N)
        per.append({"sensor": i + 1, "observable": ok, "rank": r})
    report = {"target": "sensors", "N": spec.N, "sensors": per}
    if spec.is_rotation_network:
        verdicts = discrete.roundrobin_losslessness(spec)
        for entry, v in zip(per, verdicts):
            entry["angle_criterion"] = v
        report["lossless"] = all(verdicts)
    else:
        report["lossless"] = all(e["observable"] for e in per)
    return report


def cmd_analyze(args):
    targets = [args.n is not None, args.perm is not None, args.alpha is not None,
               args.group is not None, args.sensors is not None]
    if args.perm is not None:
        targets[0] = False
    if sum(targets) != 1:
        raise PreconditionError("choose exactly one analysis target")
    if args.perm is not None:
        report = _analyze_perm(args)
    elif args.n is not None:
        if args.p is None:
            raise PreconditionError("--n needs --p")
        report = _analyze_periodic(args)
    elif args.alpha is not None:
        report = _analyze_alpha(args)
    elif args.group is not None:
        report = _analyze_group(args)
    else:
        report = _analyze_sensors(args)
    report = {"command": "analyze", **report}
    _emit(report, args)
    if not report["lossless"]:
        raise Infeasible(report)


def _write_state(path, x0):
    io.write_signal_csv(path, PeriodicVectorSignal(np.atleast_2d(np.asarray(x0))))


def cmd_reconstruct(args):
    report = {"command": "reconstruct", "artifacts": [str(args.out)]}
    if args.design:
        design_doc = json.loads(Path(args.design).read_text())
        A = io.load_matrix(args.A) if args.A else None
        if A is None:
            raise PreconditionError("continuous reconstruction needs --A")
        design = continuous.design_compressor(A, thetas=design_doc.get("thetas"))
        samples = io.read_samples_csv(args.stream)
        rec = continuous.reconstruct_continuous(samples, design, A)
        _write_state(args.out, rec.x0)
        report.update({"mode": "continuous", "residual": rec.residual,
                       "min_singular_value": rec.min_singular_value, "x0": rec.x0})
    elif args.perm or args.exosystem:
        y = io.read_stream_csv(args.stream, exact=args.exact)
        spec = discrete.PermutationSpec.from_cycles(args.perm, args.n) if args.perm else io.load_exosystem(args.exosystem)
        if isinstance(spec, discrete.PermutationSpec):
            rec = discrete.reconstruct_permutation(y, spec)
            _write_state(args.out, rec.x0)
            report.update({"mode": "permutation", "times": rec.times, "x0": rec.x0})
        elif isinstance(spec, discrete.RotationSpec):
            rec = discrete.reconstruct_rotation(y, spec)
            _write_state(args.out, rec.x0)
            report.update({"mode": "rotation", "times": rec.times, "x0": rec.x0})
        elif isinstance(spec, discrete.GroupSystemSpec):
            rec = discrete.reconstruct_group(y, spec)
            _write_state(args.out, rec.x0)
            report.update({"mode": "group", "times": rec.times, "x0": rec.x0, "residual": rec.residual})
        else:
            rec = discrete.reconstruct_sensor_network(y, spec)
            stacked = np.concatenate([rec.states[i + 1] for i in range(spec.N)])
            _write_state(args.out, stacked)
            report.update({"mode": "sensors", "states": rec.states, "residual": rec.residual})
    else:
        if args.p is None:
            raise PreconditionError("periodic reconstruction needs --p")
        y = io.read_stream_csv(args.stream, exact=args.exact)
        c = _mixer_from_args(args)
        x, res = reconstruction.reconstruct_with_residual(y, c, args.p)
        io.write_signal_csv(args.out, x)
        report.update({"mode": "periodic", "n": c.n, "m": c.m, "p": args.p, "horizon": len(y),
                       "value_kind": x.value_kind, "residual": res})
    _emit(report, args)


def cmd_design(args):
    A = io.load_matrix(args.A)
    thetas = [float(v) for v in args.thetas.split(",")] if args.thetas else None
    design = continuous.design_compressor(A, delta_base=args.delta_base, thetas=thetas)
    count = args.samples or 4 * design.n
    cert = continuous.spanning_certificate(design, A, count, args.dt)
    doc = design.to_dict()
    doc["certificate"] = {"passed": cert.passed, "min_eigenvalue": cert.min_eigenvalue,
                          "threshold": cert.threshold, "sample_count": count,
                          "dt": cert.times[1] - cert.times[0] if len(cert.times) > 1 else None}
    doc["constant_mixer_suffices"] = design.cartan.distinct_nonzero()
    doc["commutation_residual"] = float(np.linalg.norm(A @ design.S - design.S @ A))
    if args.out:
        Path(args.out).write_text(json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n")
        doc = {**doc, "artifacts": [str(args.out)]}
    _emit({"command": "design", **doc}, args)
    if not cert.passed:
        raise Infeasible(doc)


def cmd_simulate_shutter(args):
    if args.rotor:
        seq = shutter.rotor_sequence()
    elif args.frames:
        seq = io.read_frames(args.frames)
    else:
        raise PreconditionError("give --rotor or --frames")
    horizon = args.horizon or number_theory.lcm(seq.n_rows, seq.period)
    stream = shutter.simulate_readout(seq, horizon)
    io.write_readout_csv(args.out, stream)
    _emit({"command": "simulate-shutter", "n_rows": seq.n_rows, "width": seq.width, "p": seq.period,
           "horizon": horizon, "artifacts": [str(args.out)]}, args)


def cmd_deblur(args):
    stream = io.read_readout_csv(args.stream, args.n_rows)
    try:
        seq = shutter.deblur(stream, args.p, max_val=args.max_val)
    except NotLossless as exc:
        report = {"command": "deblur", "lossless": False, "n_rows": stream.n_rows, "p": args.p,
                  "uncovered": exc.uncovered}
        _emit(report, args)
        raise Infeasible(report)
    paths = io.write_frames(args.out, seq)
    schedule = shutter.readout_schedule(stream.n_rows, args.p)
    times = {tau: [schedule[(r, tau)] for r in range(1, stream.n_rows + 1)] for tau in range(args.p)}
    _emit({"command": "deblur", "lossless": True, "n_rows": stream.n_rows, "p": args.p,
           "times_per_phase": times, "artifacts": [str(p) for p in paths]}, args)


# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="periodic-mixing", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--exact", action="store_true", help="exact rational arithmetic")
        p.add_argument("--report", help="also write the JSON report here")

    p = sub.add_parser("compress", help="compress a periodic signal to a scalar stream")
    p.add_argument("signal")
    p.add_argument("mixer_pos", nargs="?", help=argparse.SUPPRESS)
    p.add_argument("--mixer")
    p.add_argument("--switch", type=int)
    p.add_argument("--horizon", type=int)
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("analyze", help="decide losslessness")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--mixer")
    p.add_argument("--perm")
    p.add_argument("--alpha")
    p.add_argument("--bound", type=int, default=100)
    p.add_argument("--group")
    p.add_argument("--candidate-power", type=int)
    p.add_argument("--sensors")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("reconstruct", help="recover a signal from its stream")
    p.add_argument("stream")
    p.add_argument("--p", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--mixer")
    p.add_argument("--switch", type=int)
    p.add_argument("--perm")
    p.add_argument("--exosystem")
    p.add_argument("--design")
    p.add_argument("--A")
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("design", help="design a continuous-time compressor")
    p.add_argument("A")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--delta-base", type=float, default=1.0)
    group.add_argument("--thetas")
    p.add_argument("--samples", type=int)
    p.add_argument("--dt", type=float)
    p.add_argument("--out")
    p.add_argument("--report")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("simulate-shutter", help="simulate a rolling-shutter readout")
    p.add_argument("--frames", nargs="+")
    p.add_argument("--rotor", action="store_true")
    p.add_argument("--horizon", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.set_defaults(func=cmd_simulate_shutter)

    p = sub.add_parser("deblur", help="reassemble frames from a readout stream")
    p.add_argument("stream")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n-rows", type=int)
    p.add_argument("--max-val", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.set_defaults(func=cmd_deblur)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "mixer_pos", None) and not args.mixer:
        args.mixer = args.mixer_pos
    try:
        args.func(args)
    except Infeasible:
        return EXIT_INFEASIBLE
    except (NotLossless, PartialReconstruction, InsufficientHorizon) as exc:
        _emit({"command": args.command, "error": type(exc).__name__, "message": str(exc),
               "uncovered": getattr(exc, "uncovered", None)}, args)
        return EXIT_INFEASIBLE
    except (InconsistentStream, InsufficientExcitation, BudgetError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except PreconditionError as exc:
        if args.command == "design":
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INFEASIBLE
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DimensionError, UnsupportedSpec, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
