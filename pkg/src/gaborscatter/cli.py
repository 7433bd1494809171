"""Command-line front end.

Subcommands:

- ``synth``       render one configured tone to WAV plus an envelope CSV
- ``scatter``     compute scattering features of a WAV (or configured tone)
- ``verify``      run the numerical verification battery, write a report
- ``figures``     emit the reference figure images and their metrics
- ``framebounds`` print the frame bounds of each configured layer

Exit codes: 0 success; 2 bad arguments or configuration; 3 a numerical
check failed (or did not converge); 4 file I/O or format trouble.

Every output is a pure function of the configuration (plus ``--set``/
``--seed`` overrides) and the input files: rerunning a command writes
byte-identical files.  Nothing here timestamps its outputs.
"""

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .bounds import write_reports_csv, format_reports
from .errors import (
    ConvergenceError,
    FormatError,
    GaborScatterError,
    InvalidArgument,
    VerificationFailure,
)
from .gabor import frame_bounds
from .figures import write_figures
from .io import (
    ExperimentConfig,
    default_config,
    load_config,
    read_wav,
    save_features,
    features_to_csv,
    stack_from_specs,
    write_spectrogram,
    write_wav,
)
from .scattering import extract_features, scatter as scatter_tree
from .signal_model import realized_envelope, synthesize


def chain_pad_length(layer_specs) -> int:
    """Smallest length unit every layer's lattice divides into.

    Layer l sees the input subsampled by the earlier hops, so its own
    lattice constraint (a_l and M_l divide its input length) pulls back to
    the original length as prod(a_1..a_{l-1}) * lcm(a_l, M_l).  Padding any
    signal up to a multiple of the lcm of those pullbacks makes the whole
    chain well defined.
    """
    unit = 1
    hops = 1
    for spec in layer_specs:
        unit = math.lcm(unit, hops * math.lcm(int(spec["a"]), int(spec["M"])))
        hops *= int(spec["a"])
    return unit


def _apply_override(data: dict, assignment: str) -> None:
    if "=" not in assignment:
        raise InvalidArgument(
            f"--set expects key=value, got {assignment!r}"
        )
    key, raw = assignment.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw  # bare string convenience: --set out_dir=results
    node = data
    parts = key.split(".")
    for i, part in enumerate(parts[:-1]):
        if isinstance(node, list):
            try:
                node = node[int(part)]
            except (ValueError, IndexError):
                raise InvalidArgument(
                    f"--set path {key!r}: {part!r} does not index the list at "
                    f"{'.'.join(parts[:i]) or 'top level'}"
                ) from None
        elif isinstance(node, dict):
            if part not in node:
                raise InvalidArgument(
                    f"--set path {key!r}: no key {part!r} under "
                    f"{'.'.join(parts[:i]) or 'top level'}"
                )
            node = node[part]
        else:
            raise InvalidArgument(
                f"--set path {key!r}: {'.'.join(parts[:i])} is not a container"
            )
    last = parts[-1]
    if isinstance(node, list):
        try:
            node[int(last)] = value
        except (ValueError, IndexError):
            raise InvalidArgument(
                f"--set path {key!r}: {last!r} does not index a list element"
            ) from None
    elif isinstance(node, dict):
        node[last] = value
    else:
        raise InvalidArgument(f"--set path {key!r}: parent is not a container")


def _load(args) -> ExperimentConfig:
    if args.config is None:
        config = default_config()
    else:
        config = load_config(args.config)
    overrides = list(args.set or [])
    if getattr(args, "seed", None) is not None:
        overrides.append(f"seed={args.seed}")
    if not overrides:
        return config
    data = json.loads(config.to_json())
    for assignment in overrides:
        _apply_override(data, assignment)
    return ExperimentConfig.from_dict(data)


def _out_dir(args, config: ExperimentConfig) -> Path:
    out = Path(args.out) if args.out else Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_synth(args) -> int:
    config = _load(args)
    tone = config.tone(args.tone)
    out = _out_dir(args, config)
    samples = synthesize(tone)
    wav_path = out / f"{args.tone}.wav"
    write_wav(wav_path, samples.real, tone.fs, fmt=args.wav_format)
    t = tone.time_grid()
    env_path = out / f"{args.tone}_envelopes.csv"
    with open(env_path, "w") as fh:
        fh.write("t_s," + ",".join(f"A_{n}" for n in range(1, tone.n_harmonics + 1)) + "\n")
        cols = [realized_envelope(tone, n, t) for n in range(1, tone.n_harmonics + 1)]
        for i in range(t.shape[0]):
            fh.write(f"{t[i]:.9g}," + ",".join(f"{c[i]:.9g}" for c in cols) + "\n")
    print(f"wrote {wav_path} ({tone.n_samples} samples at {tone.fs:g} Hz)")
    print(f"wrote {env_path}")
    return 0


def _cmd_scatter(args) -> int:
    config = _load(args)
    if (args.input is None) == (args.tone is None):
        raise InvalidArgument("scatter needs exactly one of --in or --tone")
    if args.input is not None:
        samples, fs = read_wav(args.input)
        signal = samples.astype(np.complex128)
        stem = Path(args.input).stem
    else:
        tone = config.tone(args.tone)
        signal = synthesize(tone)
        fs = tone.fs
        stem = args.tone

    layer_specs = config.data["omega"]["layers"]
    unit = chain_pad_length(layer_specs)
    length = max(unit, unit * math.ceil(signal.shape[0] / unit))
    if length > signal.shape[0]:
        signal = np.concatenate(
            [signal, np.zeros(length - signal.shape[0], dtype=signal.dtype)]
        )
    omega = stack_from_specs(
        layer_specs, length, normalize=bool(config.data["omega"].get("normalize", False))
    )
    depth = args.depth if args.depth is not None else config.depth
    out = _out_dir(args, config)

    nodes = scatter_tree(signal, omega, depth, budget=config.scatter_budget)
    for level in range(1, depth + 1):
        rows = np.vstack(
            [nodes[path] for path in sorted(p for p in nodes if len(p) == level)]
        )
        write_spectrogram(rows, out / f"{stem}_layer{level}.pgm")

    features = extract_features(signal, omega, depth, budget=config.scatter_budget)
    gsfv_path = out / f"{stem}_features.gsfv"
    save_features(features, gsfv_path)
    features_to_csv(features, out / f"{stem}_features.csv")
    print(
        f"scattered {stem}: {signal.shape[0]} samples at {fs:g} Hz, depth {depth}, "
        f"{len(features.entries)} feature paths"
    )
    print(f"wrote {gsfv_path}")
    return 0


def _cmd_verify(args) -> int:
    from .verification import run_verification

    config = _load(args)
    out = _out_dir(args, config)
    reports = run_verification(config)
    text = format_reports(reports)
    print(text)
    write_reports_csv(reports, out / "verification.csv")
    with open(out / "verification.txt", "w") as fh:
        fh.write(text + "\n")
    print(f"wrote {out / 'verification.csv'}")
    failed = [r for r in reports if not r.passed]
    if failed:
        print(f"{len(failed)} of {len(reports)} checks FAILED", file=sys.stderr)
        return 3
    return 0


def _cmd_figures(args) -> int:
    config = _load(args)
    out = _out_dir(args, config)
    metrics = write_figures(config, out)
    failed = [c["name"] for c in metrics["checks"] if not c["passed"]]
    print(f"wrote figures and metrics.json to {out}")
    if failed:
        print("failed figure checks: " + ", ".join(failed), file=sys.stderr)
        return 3
    return 0


def _cmd_framebounds(args) -> int:
    config = _load(args)
    omega = config.omega()
    for i, layer in enumerate(omega.layers, start=1):
        frame = layer.frame
        lower, upper = frame_bounds(frame)
        w = frame.window
        print(
            f"layer {i}: A={lower:.9g} B={upper:.9g} snug={upper / lower:.6g} "
            f"({w.kind} length {w.length}, a={frame.a}, M={frame.M}, "
            f"L={frame.signal_length})"
        )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaborscatter",
        description="Gabor scattering features, tone synthesis, and the "
        "numerical verification battery.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config path (default: built-in)")
        p.add_argument("--out", help="output directory (default: config out_dir)")
        p.add_argument(
            "--set",
            action="append",
            metavar="KEY=VALUE",
            help="override a config entry by dotted path; value is a JSON "
            "literal (repeatable)",
        )
        p.add_argument("--seed", type=int, help="override the config seed")

    p = sub.add_parser("synth", help="render a configured tone to WAV + envelope CSV")
    common(p)
    p.add_argument("--tone", required=True, help="tone id from the config")
    p.add_argument(
        "--wav-format", choices=("float32", "pcm16"), default="float32",
        help="WAV sample encoding (default float32)",
    )
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("scatter", help="scattering features of a WAV or configured tone")
    common(p)
    p.add_argument("--in", dest="input", help="input WAV (mono)")
    p.add_argument("--tone", help="configured tone id instead of --in")
    p.add_argument("--depth", type=int, help="scattering depth (default: config)")
    p.set_defaults(func=_cmd_scatter)

    p = sub.add_parser("verify", help="run every numerical check; exit 3 on failure")
    common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("figures", help="write the reference figure set")
    common(p)
    p.set_defaults(func=_cmd_figures)

    p = sub.add_parser("framebounds", help="print frame bounds per configured layer")
    common(p)
    p.set_defaults(func=_cmd_framebounds)
    return parser


def run(argv=None) -> int:
    """Parse arguments and run one subcommand; returns the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse prints its own message
        return int(exc.code or 0)
    try:
        return args.func(args)
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 3
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (FormatError, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    except GaborScatterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
