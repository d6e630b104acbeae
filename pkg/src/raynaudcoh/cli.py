"""Command-line table generator.

Exit status: 0 on success, 2 for an invalid request, 3 when an internal
invariant fails (for instance the oracle disagreeing with the solver).
"""

from __future__ import annotations

import argparse
import logging
import sys

from .api import FORMATS, TableRequest, format_table, run_table
from .errors import InvariantViolation, RaynaudError

EXIT_OK, EXIT_INVALID, EXIT_INVARIANT = 0, 2, 3

DEFAULTS = {
    "p": "2", "f": "1", "n": "3", "variety": "p1",
    "i_min": "0", "i_max": "5", "r_min": "0", "r_max": "2",
    "mod_pm": None, "format": "text", "oracle": "false",
}


def parse_bool(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def read_config(path: str) -> dict:
    """Plain key = value lines; '#' starts a comment.  Keys may use - or _."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, val = (s.strip() for s in line.split("=", 1))
            key = key.lstrip("-").replace("-", "_")
            if key not in DEFAULTS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = val
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="raynaudcoh",
        description="Tables of H^i(X, Z_p(r)) and H^i(X, Z/p^m(r)) for the point and projective spaces.")
    ap.add_argument("--config", help="key = value file presetting any flag")
    ap.add_argument("--p", help="characteristic of the base field (prime)")
    ap.add_argument("--f", help="degree of the base field over F_p")
    ap.add_argument("--n", help="Witt vector length (precision)")
    ap.add_argument("--variety", help="point, p1 or pN:<N>")
    ap.add_argument("--i-min", dest="i_min")
    ap.add_argument("--i-max", dest="i_max")
    ap.add_argument("--r-min", dest="r_min")
    ap.add_argument("--r-max", dest="r_max")
    ap.add_argument("--mod-pm", dest="mod_pm", help="compute Z/p^m coefficients for this m")
    ap.add_argument("--format", choices=FORMATS)
    ap.add_argument("--oracle", help="cross-check every cell by enumeration (true/false)")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def request_from_args(args: argparse.Namespace) -> TableRequest:
    settings = dict(DEFAULTS)
    if args.config:
        settings.update(read_config(args.config))
    for key in DEFAULTS:
        val = getattr(args, key)
        if val is not None:
            settings[key] = val
    ints = {k: int(settings[k]) for k in ("p", "f", "n", "i_min", "i_max", "r_min", "r_max")}
    mod_pm = settings["mod_pm"]
    return TableRequest(
        variety=settings["variety"], p=ints["p"], f=ints["f"], n=ints["n"],
        i_range=(ints["i_min"], ints["i_max"]), r_range=(ints["r_min"], ints["r_max"]),
        mod_pm=None if mod_pm in (None, "", "none") else int(mod_pm),
        format=settings["format"], oracle=parse_bool(settings["oracle"]))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        req = request_from_args(args)
        cells = run_table(req)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, OSError, RaynaudError) as exc:
        print(f"invalid request: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(format_table(req, cells))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
