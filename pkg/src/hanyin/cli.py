"""Command-line entry points ``hanyin`` and ``pinyin``.

Exit codes: 0 success, 2 expectation mismatch (``analyze --pinyin``),
1 any error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .config import Config
from .dsp import load_wav, pitch_track, stft, write_wav
from .errors import HanyinError
from .pinyin import parse_pinyin, table_path, table_records
from .report import (EXIT_ERROR, EXIT_OK, analyze, pitch_csv, render_spectrogram,
                     report_csv, report_json)
from .synth import SyllableSynthSpec, synth_syllable, synth_utterance


class _Parser(argparse.ArgumentParser):
    """Usage errors exit 1; 2 is reserved for expectation mismatches."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _write(path, data) -> None:
    mode = "wb" if isinstance(data, bytes) else "w"
    kwargs = {} if isinstance(data, bytes) else {"encoding": "utf-8", "newline": ""}
    with open(path, mode, **kwargs) as fh:
        fh.write(data)


def _print_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, ensure_ascii=False, indent=2) + "\n")


def _config(args) -> Config:
    base = Config.from_json(args.config_file) if args.config_file else Config()
    return Config.from_overrides(args.config or (), base)


# ---- hanyin subcommands --------------------------------------------------

def cmd_analyze(args) -> int:
    report = analyze(args.wav, args.pinyin, _config(args))
    text = report_json(report)
    if args.json:
        _write(args.json, text)
    if args.csv:
        _write(args.csv, report_csv(report))
    if not args.json and not args.csv:
        sys.stdout.write(text)
    return report.exit_code


def cmd_spectrogram(args) -> int:
    fmt = Path(args.output).suffix.lower().lstrip(".")
    if fmt not in ("pgm", "csv"):
        raise ValueError("output must end in .pgm or .csv")
    spec = stft(load_wav(args.wav), args.window, args.hop)
    _write(args.output, render_spectrogram(spec, fmt, args.db_floor))
    return EXIT_OK


def cmd_pitch(args) -> int:
    track = pitch_track(load_wav(args.wav), args.window, args.hop, args.fmin, args.fmax)
    _write(args.output, pitch_csv(track))
    return EXIT_OK


def _load_synth_job(path):
    """A spec file holds one spec object, a list of them, or
    ``{"syllables": [...], "gap_ms": ...}``."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict) and "syllables" in data:
        return [SyllableSynthSpec.from_dict(d) for d in data["syllables"]], data.get("gap_ms", 100.0)
    if isinstance(data, list):
        return [SyllableSynthSpec.from_dict(d) for d in data], 100.0
    return SyllableSynthSpec.from_dict(data), None


def _jsonable_truth(truth: dict) -> dict:
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in truth.items()}


def cmd_synth(args) -> int:
    job, gap = _load_synth_job(args.spec)
    if isinstance(job, list):
        buffer, truths = synth_utterance(job, gap)
        truth = {"syllables": [_jsonable_truth(t) for t in truths], "gap_ms": gap}
    else:
        buffer, t = synth_syllable(job)
        truth = _jsonable_truth(t)
    out = Path(args.output)
    write_wav(out, buffer)
    sidecar = out.with_suffix(".truth.json")
    _write(sidecar, json.dumps(truth, indent=2) + "\n")
    return EXIT_OK


# ---- pinyin subcommands --------------------------------------------------

def cmd_pinyin_parse(args) -> int:
    _print_json(parse_pinyin(args.syllable).to_dict())
    return EXIT_OK


def cmd_pinyin_validate(args) -> int:
    try:
        syl = parse_pinyin(args.syllable)
    except HanyinError as exc:
        _print_json({"input": args.syllable, "valid": False,
                     "error": type(exc).__name__, "message": str(exc)})
        return EXIT_ERROR
    _print_json({"input": args.syllable, "valid": True, "syllable": syl.to_dict()})
    return EXIT_OK


def cmd_pinyin_table(args) -> int:
    if args.raw:
        sys.stdout.write(table_path().read_text(encoding="utf-8"))
    else:
        _print_json([{"initial": i, "final": f, "spelling": s}
                     for i, f, s in table_records()])
    return EXIT_OK


def _add_pinyin_commands(sub) -> None:
    p = sub.add_parser("parse", help="decompose one syllable")
    p.add_argument("syllable")
    p.set_defaults(func=cmd_pinyin_parse)
    p = sub.add_parser("validate", help="check one syllable against the table")
    p.add_argument("syllable")
    p.set_defaults(func=cmd_pinyin_validate)
    p = sub.add_parser("table", help="dump the initial/final table")
    p.add_argument("--raw", action="store_true", help="print the data file instead of JSON")
    p.set_defaults(func=cmd_pinyin_table)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hanyin", description="Mandarin syllable analysis")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="segment and classify a recording")
    p.add_argument("wav")
    p.add_argument("--pinyin", help='expected transcription, e.g. "huá tiě lú dà xué"')
    p.add_argument("--json", help="write the JSON report here instead of stdout")
    p.add_argument("--csv", help="also write a one-row-per-syllable CSV")
    p.add_argument("--config", nargs="*", metavar="KEY=VALUE", help="threshold overrides")
    p.add_argument("--config-file", help="JSON file of threshold overrides")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("spectrogram", help="write a spectrogram as PGM or CSV")
    p.add_argument("wav")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--window", type=int, default=2048)
    p.add_argument("--hop", type=int, default=512)
    p.add_argument("--db-floor", type=float, default=-160.0)
    p.set_defaults(func=cmd_spectrogram)

    p = sub.add_parser("pitch", help="write the EAC pitch track as CSV")
    p.add_argument("wav")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--fmin", type=float, default=50.0)
    p.add_argument("--fmax", type=float, default=500.0)
    p.add_argument("--window", type=int, default=2048)
    p.add_argument("--hop", type=int, default=512)
    p.set_defaults(func=cmd_pitch)

    p = sub.add_parser("pinyin", help="pinyin parsing and table lookup")
    _add_pinyin_commands(p.add_subparsers(dest="pinyin_command", required=True,
                                          parser_class=_Parser))

    p = sub.add_parser("synth", help="render synthetic syllables with ground truth")
    p.add_argument("--spec", required=True, help="JSON spec file")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_synth)
    return parser


def _run(parser: argparse.ArgumentParser, argv) -> int:
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (HanyinError, OSError, ValueError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"{parser.prog}: error: {exc}\n")
        return EXIT_ERROR


def main(argv=None) -> int:
    return _run(build_parser(), argv)


def pinyin_main(argv=None) -> int:
    parser = _Parser(prog="pinyin", description="pinyin syllable tools")
    _add_pinyin_commands(parser.add_subparsers(dest="pinyin_command", required=True,
                                               parser_class=_Parser))
    return _run(parser, argv)


if __name__ == "__main__":
    sys.exit(main())
