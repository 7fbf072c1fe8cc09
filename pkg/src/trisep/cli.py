"""Command-line client for the classification and sweep commands.

By default the commands run in-process through the same layer the HTTP
service uses; ``--server URL`` sends them to a running service instead.
Both paths emit identical bytes.

Exit codes: 0 success, 1 verification/internal failure, 2 domain or usage
error, 3 I/O error.
"""

import argparse
import math
import sys

from . import __version__, commands
from .errors import ConfigError, DomainError, TrisepError
from .service.models import parse_tprime
from .sweeps import Axis

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_DOMAIN = 2
EXIT_IO = 3


def _parse_bool(text):
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def load_config(path):
    """Plain ``key = value`` lines; blank lines and '#' comments ignored.
    Repeated keys accumulate (used by ``grid``)."""
    data = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        data.setdefault(key.strip(), []).append(value.strip())
    return data


class Merger:
    """Flag > config file > default, with unknown config keys rejected."""

    def __init__(self, ns, config_path, known_keys):
        self.ns = ns
        self.cfg = load_config(config_path) if config_path else {}
        unknown = set(self.cfg) - set(known_keys)
        if unknown:
            raise ConfigError("unknown config key(s): " + ", ".join(sorted(unknown)))

    def value(self, key, conv, default=None, required=False):
        flag = getattr(self.ns, key, None)
        if flag is not None:
            return flag
        if key in self.cfg:
            try:
                return conv(self.cfg[key][-1])
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"config key {key}: {exc}") from None
        if required and default is None:
            raise ConfigError(f"missing required parameter --{key}")
        return default

    def grids(self):
        flag = getattr(self.ns, "grid", None)
        raw = flag if flag else self.cfg.get("grid", [])
        axes = [Axis.parse(g) for g in raw]
        if len(axes) > 2:
            raise ConfigError("at most 2 --grid axes are supported")
        return axes


def _http_post(server, path, payload):
    import httpx
    url = server.rstrip("/") + path
    try:
        resp = httpx.post(url, json=payload, timeout=600.0)
    except httpx.HTTPError as exc:
        raise TrisepError(f"cannot reach server {server}: {exc}") from None
    if resp.status_code >= 400:
        try:
            detail = resp.json().get("detail")
        except ValueError:
            detail = resp.text
        if isinstance(detail, dict) and detail.get("kind") == "domain":
            raise DomainError(detail.get("message", "domain error"))
        raise TrisepError(f"server error {resp.status_code}: {detail}")
    return resp.json()


def _tprime_payload(tp):
    return "inf" if math.isinf(tp) else tp


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_classify(ns):
    m = Merger(ns, ns.config, ("eta0p", "eta1p", "nbar", "tprime", "tol"))
    eta0p = m.value("eta0p", float, required=True)
    eta1p = m.value("eta1p", float, required=True)
    nbar = m.value("nbar", float, 0.0)
    tprime = m.value("tprime", parse_tprime, math.inf)
    tol = m.value("tol", float, 1e-9)
    if ns.server:
        data = _http_post(ns.server, "/classify",
                          {"eta0p": eta0p, "eta1p": eta1p, "nbar": nbar,
                           "tprime": _tprime_payload(tprime), "tol": tol})
        print(data["report"])
    else:
        print(commands.classify_point(eta0p, eta1p, nbar, tprime, tol).report)
    return EXIT_OK


def cmd_evolve(ns):
    m = Merger(ns, ns.config, ("eta0p", "eta1p", "nbar", "tmax", "steps",
                               "tol", "jobs", "out"))
    eta0p = m.value("eta0p", float, required=True)
    eta1p = m.value("eta1p", float, required=True)
    nbar = m.value("nbar", float, 0.0)
    tmax = m.value("tmax", float, required=True)
    steps = m.value("steps", int, 201)
    tol = m.value("tol", float, 1e-9)
    jobs = m.value("jobs", int, 1)
    out = m.value("out", str, "evolve.csv")
    if ns.server:
        data = _http_post(ns.server, "/evolve",
                          {"eta0p": eta0p, "eta1p": eta1p, "nbar": nbar,
                           "tmax": tmax, "steps": steps, "tol": tol, "jobs": jobs})
        csv, rows = data["csv"], data["rows"]
    else:
        result = commands.evolve_trace(eta0p, eta1p, nbar, tmax, steps, tol, jobs)
        csv, rows = result.csv, result.rows
    _write_text(out, csv)
    print(f"wrote {rows} rows to {out}")
    return EXIT_OK


def cmd_boundary(ns):
    m = Merger(ns, ns.config, ("eta0p", "eta1p", "grid", "check", "jobs", "out"))
    axes = m.grids()
    if not axes:
        raise ConfigError("boundary requires at least one --grid axis")
    fixed = {}
    for key in ("eta0p", "eta1p"):
        val = m.value(key, float)
        if val is not None:
            fixed[key] = val
    check = m.value("check", _parse_bool, False)
    jobs = m.value("jobs", int, 1)
    out = m.value("out", str, "boundary.csv")
    if ns.server:
        data = _http_post(ns.server, "/boundary", {
            "axes": [{"name": a.name, "start": a.start, "stop": a.stop,
                      "count": a.count} for a in axes],
            "fixed": fixed, "which": ns.which, "check": check, "jobs": jobs})
        csv, rows = data["csv"], data["rows"]
    else:
        result = commands.boundary_sweep(axes, fixed, ns.which, check, jobs)
        csv, rows = result.csv, result.rows
    _write_text(out, csv)
    print(f"wrote {rows} rows to {out}")
    return EXIT_OK


def cmd_figure(ns):
    m = Merger(ns, ns.config, ("jobs", "out"))
    jobs = m.value("jobs", int, 1)
    out = m.value("out", str, f"fig{ns.n}.csv")
    if ns.server:
        data = _http_post(ns.server, "/figure", {"n": ns.n, "jobs": jobs})
        csv, rows, meta = data["csv"], data["rows"], data.get("meta", {})
    else:
        result = commands.figure_data(ns.n, jobs)
        csv, rows, meta = result.csv, result.rows, result.meta
    _write_text(out, csv)
    extra = ""
    if "max_gap" in meta:
        extra = f" (max boundary gap {meta['max_gap']:.6g})"
    print(f"wrote {rows} rows to {out}{extra}")
    return EXIT_OK


def cmd_verify(ns):
    m = Merger(ns, ns.config, ("level",))
    level = m.value("level", str, "quick")
    if level not in ("quick", "full"):
        raise ConfigError(f"level must be quick or full, got {level!r}")
    if ns.server:
        data = _http_post(ns.server, "/verify", {"level": level})
        print(data["report"])
        return EXIT_OK if data["passed"] else EXIT_VERIFY
    report = commands.verification(level)
    print(report.text())
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_serve(ns):
    import uvicorn
    from .service.app import app
    uvicorn.run(app, host=ns.host, port=ns.port)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="trisep",
        description="Separability phase diagrams of three-mode Gaussian states "
                    "under symmetric amplification, damping and thermal noise.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, server=True):
        p.add_argument("--config", help="key = value config file (flags override)")
        if server:
            p.add_argument("--server", help="URL of a running trisep service")

    p = sub.add_parser("classify", help="classify one parameter point")
    common(p)
    p.add_argument("--eta0p", type=float, help="single-mode amplification / damping")
    p.add_argument("--eta1p", type=float, help="inter-mode amplification / damping")
    p.add_argument("--nbar", type=float, help="thermal occupation (default 0)")
    p.add_argument("--tprime", type=parse_tprime,
                   help="rescaled time, number or 'inf' (default inf)")
    p.add_argument("--tol", type=float, help="spectral/feasibility tolerance")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evolve", help="CSV time trace of entries and class")
    common(p)
    p.add_argument("--eta0p", type=float)
    p.add_argument("--eta1p", type=float)
    p.add_argument("--nbar", type=float)
    p.add_argument("--tmax", type=float, help="trace horizon in rescaled time")
    p.add_argument("--steps", type=int, help="number of rows (default 201)")
    p.add_argument("--tol", type=float)
    p.add_argument("--jobs", type=int)
    p.add_argument("--out", help="output CSV path (default evolve.csv)")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("boundary", help="critical-noise boundary sweep CSV")
    common(p)
    p.add_argument("which", nargs="?", default="both",
                   choices=("fullsep", "bisep", "both"))
    p.add_argument("--grid", action="append", metavar="AXIS:MIN:MAX:COUNT",
                   help="sweep axis (repeatable, at most 2)")
    p.add_argument("--eta0p", type=float, help="fixed value when not swept")
    p.add_argument("--eta1p", type=float, help="fixed value when not swept")
    p.add_argument("--check", action="store_const", const=True, default=None,
                   help="add bisection-oracle columns")
    p.add_argument("--jobs", type=int)
    p.add_argument("--out", help="output CSV path (default boundary.csv)")
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("figure", help="reproduce the data of a figure")
    common(p)
    p.add_argument("n", type=int, choices=(1, 2, 3))
    p.add_argument("--jobs", type=int)
    p.add_argument("--out", help="output CSV path (default fig<n>.csv)")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("verify", help="run the self-verification suites")
    common(p)
    p.add_argument("--level", choices=("quick", "full"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("serve", help="run the HTTP service")
    common(p, server=False)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        return ns.func(ns)
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except TrisepError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
