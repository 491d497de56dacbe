"""Command line driver for reproducible stability experiments.

Each subcommand resolves its parameters from defaults, then an optional
TOML config file, then explicit flags, and embeds the resolved record plus
its hash in everything it writes.  All randomness flows from one seed
through named substreams, so identical invocations produce identical
outputs byte for byte apart from the timestamp field.

Exit codes: 0 success, 1 a configured acceptance threshold failed, 2 usage
or configuration error.
"""

import argparse
import hashlib
import json
import sys
import time
import zlib
from pathlib import Path

import numpy as np
import tomli

from . import __version__, bounds, plots, recon, sampling, witness
from . import cp as cp_mod
from .core import MeasurementSpace
from .frames import FrameFormatError, SincFrameSpec, load_frame, random_frame, sinc_frame


class UsageError(Exception):
    pass


class ThresholdFailure(Exception):
    pass


def substream(seed, name):
    """Independent integer seed for one named consumer of the run seed."""
    ss = np.random.SeedSequence(seed, spawn_key=(zlib.crc32(name.encode()),))
    return int(ss.generate_state(1, dtype=np.uint64)[0] % (1 << 63))


def config_hash(resolved):
    blob = json.dumps(resolved, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def load_config(path, section):
    if path is None:
        return {}
    try:
        with open(path, "rb") as fh:
            data = tomli.load(fh)
    except OSError as e:
        raise UsageError("cannot read config %s: %s" % (path, e))
    except tomli.TOMLDecodeError as e:
        raise UsageError("config %s does not parse: %s" % (path, e))
    out = {}
    for key in ("seed", "out", "format"):
        if key in data:
            out[key] = data[key]
    sec = data.get(section, {})
    if not isinstance(sec, dict):
        raise UsageError("config section [%s] must be a table" % section)
    out.update(sec)
    return out


def resolve(defaults, config, flags):
    """defaults < config file < explicit flags, with unknown config keys
    rejected so typos surface instead of silently using defaults."""
    known = set(defaults)
    stray = [k for k in config if k not in known]
    if stray:
        raise UsageError(
            "unknown config key%s: %s"
            % ("s" if len(stray) > 1 else "", ", ".join(sorted(stray)))
        )
    out = dict(defaults)
    out.update(config)
    out.update({k: v for k, v in flags.items() if v is not None})
    return out


def parse_int_list(text, what):
    """Range syntax: "1..4" inclusive, or "1,2,4"."""
    text = str(text).strip()
    try:
        if ".." in text:
            a, b = text.split("..")
            lo, hi = int(a), int(b)
            return list(range(lo, hi + 1))
        return [int(t) for t in text.split(",") if t.strip() != ""]
    except ValueError:
        raise UsageError("cannot parse %s range %r" % (what, text))


def parse_p(val):
    if val in ("inf", "Infinity", np.inf):
        return np.inf
    try:
        return float(val)
    except (TypeError, ValueError):
        raise UsageError("p must be a number or 'inf', got %r" % (val,))


def build_frame(params, seed):
    """Frame from config: an explicit file, a sinc model, or random rows."""
    if params.get("frame"):
        try:
            return load_frame(params["frame"])
        except (OSError, FrameFormatError) as e:
            raise UsageError(str(e))
    kind = params.get("frame_kind")
    if kind == "sinc":
        spec = SincFrameSpec(
            m=int(params["m"]),
            step=float(params.get("step", 0.25)),
            window=(int(params["window"]) if params.get("window") else None),
            oversample=int(params.get("oversample", 1)),
        )
        return sinc_frame(spec)
    if kind == "random":
        if not params.get("d") or not params.get("n"):
            raise UsageError("random frame needs d and n")
        return random_frame(
            int(params["d"]),
            int(params["n"]),
            field=params.get("field", "real"),
            seed=substream(seed, "frame.random"),
        )
    raise UsageError("no frame given: pass frame=PATH or frame_kind=sinc|random")


def mspace_for(frame, params):
    p = parse_p(params.get("p", 2.0))
    weights = params.get("weights")
    if isinstance(weights, str):
        weights = [t for t in weights.split(",") if t.strip() != ""]
    if weights is not None:
        weights = np.asarray([float(w) for w in weights])
    return MeasurementSpace(frame.n, p=p, weights=weights)


def now_stamp():
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())


def write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def as_table(payload, prefix=""):
    lines = []
    for key in sorted(payload):
        val = payload[key]
        if isinstance(val, dict):
            lines.append("%s%s:" % (prefix, key))
            lines.extend(as_table(val, prefix + "  "))
        elif isinstance(val, list) and any(isinstance(x, dict) for x in val):
            lines.append("%s%s:" % (prefix, key))
            for i, x in enumerate(val):
                lines.append("%s  [%d]" % (prefix, i))
                lines.extend(as_table(x, prefix + "    "))
        elif isinstance(val, list) and len(val) > 8:
            lines.append("%s%s: [%d values]" % (prefix, key, len(val)))
        else:
            lines.append("%s%s: %s" % (prefix, key, val))
    return lines


def emit(payload, fmt, csv_text=None):
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    elif fmt == "csv":
        if csv_text is None:
            raise UsageError("this command has no csv view; use json or table")
        sys.stdout.write(csv_text)
    else:
        print("\n".join(as_table(payload)))


def _finish(payload, params, out_dir, name, fmt, csv_text=None, figure=None):
    payload["config"] = {
        k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(params.items())
    }
    payload["config_sha256"] = config_hash(payload["config"])
    payload["timestamp"] = now_stamp()
    payload["version"] = __version__
    out_dir.mkdir(parents=True, exist_ok=True)
    write_json(out_dir / ("%s.json" % name), payload)
    if csv_text is not None:
        (out_dir / ("%s.csv" % name)).write_text(csv_text)
    if figure is not None and params.get("figures", True):
        figure(out_dir / ("%s.png" % name))
    emit(payload, fmt, csv_text)


def _jsonable(val):
    if isinstance(val, float) and not np.isfinite(val):
        return "inf" if val > 0 else ("-inf" if val < 0 else "nan")
    return val


def clean_floats(obj):
    """JSON has no infinities; encode them as strings wherever they occur."""
    if isinstance(obj, dict):
        return {k: clean_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean_floats(v) for v in obj]
    return _jsonable(obj)


def _enc_vec(v):
    if np.iscomplexobj(v):
        return [[float(z.real), float(z.imag)] for z in v]
    return [float(t) for t in v]


ANALYZE_DEFAULTS = {
    "frame": None,
    "frame_kind": None,
    "m": None,
    "step": None,
    "window": None,
    "oversample": None,
    "d": None,
    "n": None,
    "field": "real",
    "p": 2.0,
    "weights": None,
    "strategy": "auto",
    "budget": 8,
    "pairs": 10000,
    "bruteforce": "auto",
    "figures": True,
}


def cmd_analyze(params, seed, out_dir, fmt):
    frame = build_frame(params, seed)
    mspace = mspace_for(frame, params)
    bf = params["bruteforce"]
    if isinstance(bf, str) and bf != "auto":
        bf = bf.lower() in ("1", "true", "yes")
    report = bounds.build_report(
        frame,
        mspace,
        strategy=params["strategy"],
        budget=int(params["budget"]),
        pairs=int(params["pairs"]),
        seed=substream(seed, "bounds.report"),
        bruteforce=bf,
    )
    interval = bounds.condition_number(report)
    try:
        verdict = cp_mod.check_cp(frame)
    except bounds.ExhaustiveCapExceeded:
        verdict = cp_mod.check_cp(
            frame, heuristic=True, seed=substream(seed, "cp.scan")
        )
    payload = {
        "report": report.to_dict(),
        "tau": interval.to_dict(),
        "cp": verdict.to_dict(),
    }
    if not verdict.holds:
        x, y = cp_mod.nonuniqueness_pair(verdict, frame)
        payload["nonuniqueness_pair"] = {"x": _enc_vec(x), "y": _enc_vec(y)}
    payload = clean_floats(payload)

    def fig(path):
        plots.report_figure(report, interval, path)

    _finish(payload, params, out_dir, "analyze", fmt, figure=fig)
    return 0


SWEEP_DEFAULTS = {
    "kind": "dimension",
    "m": None,
    "q": None,
    "d": 3,
    "n": None,
    "seeds": 96,
    "step": None,
    "window": None,
    "strategy": "local-search",
    "restarts": None,
    "slope_min": None,
    "tau_spread_max": None,
    "figures": True,
}


def cmd_sweep(params, seed, out_dir, fmt):
    kind = params["kind"]
    template = {}
    if params.get("step"):
        template["step"] = float(params["step"])
    if params.get("window"):
        template["window"] = int(params["window"])
    sigma_seed = substream(seed, "sweep.sigma")
    if kind == "dimension":
        m_range = parse_int_list(params.get("m") or "1..4", "m")
        restarts = int(params["restarts"] or 16)
        result = witness.dimension_sweep(
            m_range,
            spec_template=template,
            strategy=params["strategy"],
            restarts=restarts,
            sigma_seed=sigma_seed,
        )
    elif kind == "oversample":
        if params.get("m") is None:
            raise UsageError("oversample sweep needs m")
        q_range = parse_int_list(params.get("q") or "1,2,4", "q")
        restarts = int(params["restarts"] or 16)
        result = witness.oversample_sweep(
            int(parse_int_list(params["m"], "m")[0]),
            q_range,
            spec_template=template,
            strategy=params["strategy"],
            restarts=restarts,
            sigma_seed=sigma_seed,
        )
    elif kind == "fixed-dimension":
        d = int(params["d"])
        n_range = parse_int_list(params.get("n") or "%d..%d" % (2 * d + 1, 8 * d), "n")
        restarts = int(params["restarts"] or 64)
        result = witness.fixed_dimension_sweep(
            d=d,
            n_range=n_range,
            seeds=range(int(params["seeds"])),
            strategy=params["strategy"],
            restarts=restarts,
            sigma_seed=sigma_seed,
        )
    else:
        raise UsageError("unknown sweep kind %r" % kind)

    payload = clean_floats(result.to_json_dict())
    csv_text = result.to_csv()

    def fig(path):
        plots.sweep_figure(result, path)

    failures = []
    if params["slope_min"] is not None and result.growth_fit is not None:
        if result.growth_fit < float(params["slope_min"]):
            failures.append(
                "growth_fit %.3f below slope_min %.3f"
                % (result.growth_fit, float(params["slope_min"]))
            )
    if params["tau_spread_max"] is not None and "tau_spread" in result.extras:
        if result.extras["tau_spread"] > float(params["tau_spread_max"]):
            failures.append(
                "tau_spread %.3f above tau_spread_max %.3f"
                % (result.extras["tau_spread"], float(params["tau_spread_max"]))
            )
    payload["threshold_failures"] = failures
    _finish(payload, params, out_dir, "sweep", fmt, csv_text=csv_text, figure=fig)
    if failures:
        raise ThresholdFailure("; ".join(failures))
    return 0


DENSITY_DEFAULTS = {
    "expr": None,
    "points_file": None,
    "window": None,
    "b": None,
    "p": 2.0,
    "r_min": None,
    "require_injective": False,
    "figures": True,
}


def cmd_density(params, seed, out_dir, fmt):
    if params["b"] is None:
        raise UsageError("density needs the bandwidth b")
    notices = []
    if params.get("expr"):
        try:
            pts, window = sampling.parse_set_expression(params["expr"])
        except ValueError as e:
            raise UsageError(str(e))
    elif params.get("points_file"):
        try:
            pts, notices = sampling.load_points(params["points_file"])
        except (OSError, ValueError) as e:
            raise UsageError(str(e))
        if params.get("window"):
            w = params["window"]
            if isinstance(w, str):
                w = [float(t) for t in w.split(",")]
            window = (float(w[0]), float(w[1]))
        else:
            pad = max(1.0, 0.05 * (pts[-1] - pts[0])) if len(pts) > 1 else 1.0
            window = (float(pts[0]) - pad, float(pts[-1]) + pad)
            notices.append(
                "window defaulted to the padded point hull [%g, %g]" % window
            )
    else:
        raise UsageError("density needs expr or points_file")
    try:
        sset = sampling.SamplingSet(
            points=pts, window=window, b=float(params["b"]), p=parse_p(params["p"])
        )
        r_min = float(params["r_min"]) if params.get("r_min") else None
        verdict = sampling.phaseless_injectivity_verdict(sset, r_min=r_min)
    except ValueError as e:
        raise UsageError(str(e))
    payload = clean_floats(verdict.to_dict())
    payload["n_points"] = len(pts)
    payload["notices"] = notices

    def fig(path):
        plots.density_figure(sset, verdict, path)

    _finish(payload, params, out_dir, "density", fmt, figure=fig)
    if params.get("require_injective") and verdict.verdict != sampling.INJECTIVE:
        raise ThresholdFailure("verdict is %s" % verdict.verdict)
    return 0


RECON_DEFAULTS = {
    "frame": None,
    "frame_kind": None,
    "m": None,
    "step": None,
    "window": None,
    "oversample": None,
    "d": None,
    "n": None,
    "field": "real",
    "measurements": None,
    "truth": None,
    "restarts": 16,
    "max_iter": 400,
    "tol": 1e-9,
    "p": 2.0,
    "weights": None,
    "require_converged": False,
    "figures": True,
}


def _load_vector(path, field, what):
    try:
        raw = [
            line.strip()
            for line in Path(path).read_text().splitlines()
            if line.strip() and not line.strip().startswith("#")
        ]
        if field == "complex":
            vals = [complex(t.replace(" ", "")) for t in raw]
            return np.array(vals)
        return np.array([float(t) for t in raw])
    except (OSError, ValueError) as e:
        raise UsageError("cannot read %s from %s: %s" % (what, path, e))


def cmd_recon(params, seed, out_dir, fmt):
    frame = build_frame(params, seed)
    if not params.get("measurements"):
        raise UsageError("recon needs a measurements file")
    b = _load_vector(params["measurements"], "real", "measurements")
    truth = None
    if params.get("truth"):
        truth = _load_vector(params["truth"], frame.field, "truth")
    try:
        result = recon.solve(
            frame,
            b,
            restarts=int(params["restarts"]),
            max_iter=int(params["max_iter"]),
            tol=float(params["tol"]),
            truth=truth,
            seed=substream(seed, "recon.init"),
            mspace=mspace_for(frame, params),
        )
    except ValueError as e:
        raise UsageError(str(e))
    payload = clean_floats(result.to_dict())

    def fig(path):
        plots.recon_figure(result, path)

    _finish(payload, params, out_dir, "recon", fmt, figure=fig)
    if params.get("require_converged") and not result.converged:
        raise ThresholdFailure("solver did not converge")
    return 0


CP_DEFAULTS = {
    "frame": None,
    "frame_kind": None,
    "m": None,
    "step": None,
    "window": None,
    "oversample": None,
    "d": None,
    "n": None,
    "field": "real",
    "heuristic": False,
    "samples": 20000,
}


def cmd_cp(params, seed, out_dir, fmt):
    frame = build_frame(params, seed)
    try:
        verdict = cp_mod.check_cp(
            frame,
            heuristic=bool(params["heuristic"]),
            samples=int(params["samples"]),
            seed=substream(seed, "cp.scan"),
        )
    except bounds.ExhaustiveCapExceeded as e:
        raise UsageError(str(e))
    payload = clean_floats(verdict.to_dict())
    if not verdict.holds:
        x, y = cp_mod.nonuniqueness_pair(verdict, frame)
        payload["nonuniqueness_pair"] = {"x": _enc_vec(x), "y": _enc_vec(y)}
    _finish(payload, params, out_dir, "cp", fmt)
    return 0


WITNESS_DEFAULTS = {
    "frame": None,
    "frame_kind": None,
    "m": None,
    "step": None,
    "window": None,
    "oversample": None,
    "d": None,
    "n": None,
    "field": "real",
    "subset": "auto",
    "p": 2.0,
    "weights": None,
    "strategy": "auto",
}


def cmd_witness(params, seed, out_dir, fmt):
    frame = build_frame(params, seed)
    mspace = mspace_for(frame, params)
    subset = params["subset"]
    if subset in (None, "auto"):
        sig = bounds.scp_sigma(
            frame,
            mspace,
            strategy=params["strategy"],
            seed=substream(seed, "witness.sigma"),
        )
        subset = sig.subset
    else:
        if isinstance(subset, str):
            subset = parse_int_list(subset, "subset")
        subset = tuple(int(i) for i in subset)
    try:
        pair = witness.build_witness(
            frame, mspace, subset, seed=substream(seed, "witness.build")
        )
    except ValueError as e:
        raise UsageError(str(e))
    payload = clean_floats(pair.to_dict())
    _finish(payload, params, out_dir, "witness", fmt)
    return 0


COMMANDS = {
    "analyze": (ANALYZE_DEFAULTS, cmd_analyze),
    "sweep": (SWEEP_DEFAULTS, cmd_sweep),
    "density": (DENSITY_DEFAULTS, cmd_density),
    "recon": (RECON_DEFAULTS, cmd_recon),
    "cp": (CP_DEFAULTS, cmd_cp),
    "witness": (WITNESS_DEFAULTS, cmd_witness),
}


def make_parser():
    parser = argparse.ArgumentParser(
        prog="phaselab",
        description="stability laboratory for magnitude-only measurement maps",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (defaults, _) in COMMANDS.items():
        p = sub.add_parser(name)
        p.add_argument("--config", default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("json", "csv", "table"), default=None)
        for key, val in defaults.items():
            if val is True:
                p.add_argument(
                    "--no-" + key.replace("_", "-"),
                    dest=key,
                    action="store_false",
                    default=None,
                )
            elif isinstance(val, bool):
                p.add_argument(
                    "--" + key.replace("_", "-"), action="store_true", default=None
                )
            else:
                p.add_argument("--" + key.replace("_", "-"), default=None)
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    defaults, runner = COMMANDS[args.command]
    try:
        config = load_config(args.config, args.command)
        cfg_seed = config.pop("seed", 0)
        cfg_out = config.pop("out", ".")
        cfg_fmt = config.pop("format", "table")
        seed = args.seed if args.seed is not None else int(cfg_seed)
        out_dir = Path(args.out or cfg_out)
        fmt = args.format or cfg_fmt
        if fmt not in ("json", "csv", "table"):
            raise UsageError("unknown format %r" % fmt)
        flag_vals = {
            k: getattr(args, k) for k in defaults if getattr(args, k, None) is not None
        }
        params = resolve(defaults, config, flag_vals)
        params["seed"] = seed
        return runner(params, seed, out_dir, fmt)
    except UsageError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except ThresholdFailure as e:
        print("threshold failure: %s" % e, file=sys.stderr)
        return 1
    except ValueError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
