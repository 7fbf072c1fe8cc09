"""Command implementations shared by the HTTP service and the CLI.

Every command returns a structured result carrying the exact CSV text (or
report text) to be emitted, so that in-process and remote callers produce
byte-identical output.
"""

import math
from dataclasses import dataclass, field

from .errors import BracketError, ConfigError, ResonanceError, \
    SingularSystemError, TrisepError
from .evolution import SymmetricFamily, symmetric_entries
from .separability import bisep_boundary, classify_family, fully_sep_boundary
from .oracles import boundary_bisection
from .sweeps import Axis, csv_text, fmt, grid_points, ordered_map
from .verify import fullsep_predicate, ppt_predicate, run_verification

FIGURE_GRID = 101
FIGURE_RANGE = (-2.0, 2.0)
ENTRY_KEYS = ("a", "b", "c", "d", "aprime", "bprime", "cprime", "dprime")


@dataclass(frozen=True)
class ClassifyOutcome:
    eta0p: float
    eta1p: float
    nbar: float
    tprime: float
    zeta0: float
    zeta1: float
    nprime: float
    entries: dict
    ppt: tuple
    min_eigs: tuple
    label: str
    marginal: bool
    method: str
    report: str
    machine_line: str


@dataclass(frozen=True)
class SweepResult:
    columns: tuple
    csv: str
    rows: int
    meta: dict = field(default_factory=dict)


def classify_point(eta0p, eta1p, nbar=0.0, tprime=math.inf, tol=1e-9):
    """Classify one symmetric-family state and render the report."""
    family = SymmetricFamily.from_nbar(eta0p, eta1p, nbar, tprime)
    entries = symmetric_entries(family)
    result = classify_family(family, tol)
    entry_map = {k: getattr(entries, k) for k in ENTRY_KEYS}

    lines = ["symmetric three-mode classification"]
    lines.append(f"  eta0p  = {family.eta0p:.12g}    eta1p = {family.eta1p:.12g}")
    lines.append(f"  nbar   = {family.nbar:.12g}    n' = {family.nprime:.12g}"
                 f"    n'^2 = {family.nprime ** 2:.12g}")
    lines.append(f"  tprime = {family.tprime:.12g}")
    lines.append(f"  zeta0  = {family.zeta0:.12g}    zeta1 = {family.zeta1:.12g}")
    lines.append("  entries: a={a:.12g}  b={b:.12g}  c={c:.12g}  d={d:.12g}".format(**entry_map))
    lines.append("           a'={aprime:.12g}  b'={bprime:.12g}  "
                 "c'={cprime:.12g}  d'={dprime:.12g}".format(**entry_map))
    if result.min_eigs is not None:
        ppt_bits = ", ".join(
            f"mode {j}: {'pass' if ok else 'FAIL'} (min-eig {e:.6g})"
            for j, (ok, e) in enumerate(zip(result.ppt, result.min_eigs), start=1))
    else:
        ppt_bits = ", ".join(
            f"mode {j}: {'pass' if ok else 'FAIL'}"
            for j, ok in enumerate(result.ppt, start=1))
        fs_crit = fully_sep_boundary(family.zeta0, family.zeta1)
        bs_crit = bisep_boundary(family.zeta0, family.zeta1)
        lines.append(f"  critical n'^2: fully-separable {fs_crit:.12g}, "
                     f"ppt {'none (always separable)' if bs_crit is None else format(bs_crit, '.12g')}")
    lines.append("  PPT " + ppt_bits)
    lines.append(f"  class: {result.label.value}    marginal: "
                 f"{'yes' if result.marginal else 'no'}    method: {result.method}")
    machine = ",".join(["machine"] + [fmt(v) for v in (
        family.eta0p, family.eta1p, family.nbar, family.tprime,
        family.zeta0, family.zeta1, family.nprime)]
        + [result.label.value, "1" if result.marginal else "0"])
    lines.append(machine)
    return ClassifyOutcome(
        eta0p=family.eta0p, eta1p=family.eta1p, nbar=family.nbar,
        tprime=family.tprime, zeta0=family.zeta0, zeta1=family.zeta1,
        nprime=family.nprime, entries=entry_map, ppt=result.ppt,
        min_eigs=result.min_eigs, label=result.label.value,
        marginal=result.marginal, method=result.method,
        report="\n".join(lines), machine_line=machine)


def _trace_row(args):
    eta0p, eta1p, nbar, tp, tol = args
    try:
        family = SymmetricFamily.from_nbar(eta0p, eta1p, nbar, tp)
        entries = symmetric_entries(family)
        result = classify_family(family, tol)
        label = result.label.value
        marginal = result.marginal
        vals = (entries.a, entries.b, entries.c, entries.d)
    except ResonanceError:
        label, marginal, vals = "error:resonance", False, (math.nan,) * 4
    except SingularSystemError:
        label, marginal, vals = "error:singular", False, (math.nan,) * 4
    except ValueError:
        label, marginal, vals = "error:nonfinite", False, (math.nan,) * 4
    return (tp, *vals, label, marginal)


def evolve_trace(eta0p, eta1p, nbar=0.0, t_max=5.0, steps=201, tol=1e-9, jobs=1):
    """Uniform rescaled-time trace of the covariance entries and the class."""
    if steps < 2:
        raise ConfigError(f"steps must be >= 2, got {steps}")
    if not t_max > 0:
        raise ConfigError(f"tmax must be positive, got {t_max}")
    tps = [t_max * k / (steps - 1) for k in range(steps)]
    rows = ordered_map(_trace_row,
                       [(eta0p, eta1p, nbar, tp, tol) for tp in tps], jobs)
    columns = ("tprime", "a", "b", "c", "d", "class", "marginal")
    return SweepResult(columns, csv_text(columns, rows), len(rows))


def _nbar_from_crit(crit):
    if crit is None or math.isnan(crit):
        return 0.0
    return 0.5 * (math.sqrt(max(crit, 1.0)) - 1.0)


def _bisect_boundary_checked(z0, z1, crit, predicate_factory):
    """Bisection confirmation of a closed-form threshold; nan when no
    bracket exists (threshold at or below the zero-noise state) or the
    point cannot be classified."""
    if crit is None or math.isnan(crit) or crit <= 1.0 + 1e-6:
        return math.nan
    try:
        return boundary_bisection(predicate_factory(z0, z1), 1.0,
                                  1.5 * crit + 0.5, xtol=1e-6)
    except (BracketError, ResonanceError, SingularSystemError, ValueError):
        return math.nan


def _boundary_row(args):
    point, axes_names, fixed, which, check = args
    params = dict(fixed)
    for name, value in zip(axes_names, point):
        params[name] = value
    eta0p = params.get("eta0p", 0.0)
    eta1p = params.get("eta1p", 0.0)
    z0 = eta0p + 2.0 * eta1p
    z1 = eta0p - eta1p
    row = [eta0p, eta1p, z0, z1]
    fs = bs = None
    if which in ("fullsep", "both"):
        fs = fully_sep_boundary(z0, z1)
        row += [fs, _nbar_from_crit(fs)]
        if check:
            est = _bisect_boundary_checked(z0, z1, fs, fullsep_predicate)
            row += [est, abs(est - fs) if not math.isnan(est) else math.nan]
    if which in ("bisep", "both"):
        bs = bisep_boundary(z0, z1)
        row += [math.nan if bs is None else bs, _nbar_from_crit(bs)]
        if check:
            est = _bisect_boundary_checked(z0, z1, bs, ppt_predicate)
            row += [est, abs(est - bs) if est is not None and not math.isnan(est)
                    and bs is not None else math.nan]
    if which == "both" and bs is not None and bs > fs + 1e-9:
        raise TrisepError(
            f"containment violated at zeta=({z0}, {z1}): ppt threshold {bs} "
            f"exceeds full-separability threshold {fs}")
    return tuple(row)


def boundary_sweep(axes, fixed=None, which="both", check=False, jobs=1):
    """Closed-form boundary thresholds over a 1- or 2-axis grid."""
    if which not in ("fullsep", "bisep", "both"):
        raise ConfigError(f"which must be fullsep, bisep or both, got {which!r}")
    for axis in axes:
        if axis.name not in ("eta0p", "eta1p"):
            raise ConfigError("boundary sweeps support only eta0p/eta1p axes")
    fixed = dict(fixed or {})
    for key in fixed:
        if key not in ("eta0p", "eta1p"):
            raise ConfigError(f"unknown fixed parameter {key!r} for boundary sweep")
    columns = ["eta0p", "eta1p", "zeta0", "zeta1"]
    if which in ("fullsep", "both"):
        columns += ["fullsep_nprime2", "fullsep_nbar"]
        if check:
            columns += ["fullsep_nprime2_bisect", "fullsep_delta"]
    if which in ("bisep", "both"):
        columns += ["bisep_nprime2", "bisep_nbar"]
        if check:
            columns += ["bisep_nprime2_bisect", "bisep_delta"]
    names = [a.name for a in axes]
    work = [(pt, names, fixed, which, check) for pt in grid_points(axes)]
    rows = ordered_map(_boundary_row, work, jobs)
    return SweepResult(tuple(columns), csv_text(columns, rows), len(rows))


def _first_crossing(crit_fn, h_max=2.0, scan=2001):
    """Smallest inter-mode ratio h >= 0 where the threshold reaches the
    zero-noise level (crit >= 1)."""
    def pred(h):
        crit = crit_fn(h)
        return crit is not None and crit >= 1.0
    if pred(0.0):
        return 0.0
    prev = 0.0
    for k in range(1, scan):
        h = h_max * k / (scan - 1)
        if pred(h):
            return boundary_bisection(pred, prev, h, xtol=1e-9)
        prev = h
    raise BracketError(f"no boundary crossing for h in (0, {h_max}]")


def _fig3_row(eta0p):
    def fullsep_crit(h):
        return fully_sep_boundary(eta0p + 2.0 * h, eta0p - h)

    def bisep_crit(h):
        return bisep_boundary(eta0p + 2.0 * h, eta0p - h)

    h_full = _first_crossing(fullsep_crit)
    h_bis = _first_crossing(bisep_crit)
    diff = h_bis - h_full
    return (eta0p, h_full, h_bis, diff, 100.0 * diff)


def figure_data(n, jobs=1):
    """Data behind the three phase-diagram figures.

    1, 2: critical-noise surfaces (full separability / PPT) over the
    (eta0p, eta1p) plane; 3: the two zero-noise boundary curves (upper
    branch eta1p > 0) with their difference and 100x the difference.
    """
    if n not in (1, 2, 3):
        raise ConfigError(f"figure number must be 1, 2 or 3, got {n}")
    lo, hi = FIGURE_RANGE
    if n in (1, 2):
        axes = [Axis("eta0p", lo, hi, FIGURE_GRID), Axis("eta1p", lo, hi, FIGURE_GRID)]
        return boundary_sweep(axes, {}, "fullsep" if n == 1 else "bisep",
                              check=False, jobs=jobs)
    pts = [lo + (hi - lo) * k / (FIGURE_GRID - 1) for k in range(FIGURE_GRID)]
    rows = ordered_map(_fig3_row, pts, jobs)
    max_gap = max(r[3] for r in rows)
    min_gap = min(r[3] for r in rows)
    if min_gap < -1e-12:
        raise TrisepError(f"containment violated: negative boundary gap {min_gap}")
    columns = ("eta0p", "eta1p_fullsep", "eta1p_bisep", "diff", "diff_x100")
    return SweepResult(columns, csv_text(columns, rows), len(rows),
                       meta={"max_gap": max_gap, "min_gap": min_gap})


def verification(level="quick"):
    return run_verification(level)
