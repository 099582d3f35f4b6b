"""Per-pair analysis reports (JSON) and fixed-width tables.

Report values are rounded to 6 significant digits.  The table mirrors the
layout of published results: deltas and sigmas in units of 1e-4 with three
significant digits, and a trailing ``*`` on every delta with |z| > 5.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import OrderedDict

from . import stats
from .counts import sum_tables

REPORT_SCHEMA = "report/1"
UNIT = 1e-4


def sig6(x):
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.6g}")


def group_by_pair(tables) -> "OrderedDict[tuple, list]":
    groups: OrderedDict[tuple, list] = OrderedDict()
    for t in tables:
        groups.setdefault(t.pair, []).append(t)
    return groups


def pair_label(pair) -> str:
    pair = list(pair)
    if len(pair) == 3:
        return "-".join(str(q) for q in pair)
    if len(pair) >= 2:
        return f"{pair[0]}-{pair[-1]}"
    return "-".join(str(q) for q in pair) or "?"


def analyze_pair(tables, m: int = stats.DEFAULT_LOOK_ELSEWHERE, delta_f_mhz=None) -> dict:
    tables = list(tables)
    total = sum_tables(tables)
    entry = {
        "pair": list(total.pair),
        "label": pair_label(total.pair),
        "test": total.test,
        "jobs": len(tables),
        "trials": total.totals.tolist(),
        "delta_f_mhz": sig6(delta_f_mhz),
    }
    names = stats.DELTA_NAMES
    entry["deltas"] = dict(zip(names, map(sig6, stats.delta_p(total))))
    try:
        rep = stats.nosig_report(total, m)
    except stats.ZeroVarianceError as exc:
        entry["status"] = f"degenerate: {exc}"
        for key in ("sigmas", "z", "p_raw", "p_corrected"):
            entry[key] = None
        entry["max_abs_z"] = entry["p_corrected_max"] = None
    else:
        entry["status"] = "ok"
        entry["sigmas"] = dict(zip(names, map(sig6, rep.sigmas)))
        entry["z"] = dict(zip(names, map(sig6, rep.z)))
        entry["p_raw"] = dict(zip(names, map(sig6, rep.p_raw)))
        entry["p_corrected"] = dict(zip(names, map(sig6, rep.p_corrected)))
        entry["max_abs_z"] = sig6(rep.max_abs_z)
        entry["p_corrected_max"] = sig6(rep.p_corrected_max)
    ch = stats.chsh(total)
    entry["chsh"] = sig6(ch.value)
    entry["chsh_sigma"] = sig6(ch.sigma)
    entry["chsh_z"] = sig6(ch.z)
    return entry


def build_report(tables, m: int = stats.DEFAULT_LOOK_ELSEWHERE, freqs_mhz=None, device: str = "") -> dict:
    """Analyse every pair found in ``tables`` (jobs are summed per pair)."""
    freqs_mhz = freqs_mhz or {}
    pairs = []
    for pair, group in group_by_pair(tables).items():
        df = None
        if pair and pair[0] in freqs_mhz and pair[-1] in freqs_mhz:
            df = freqs_mhz[pair[0]] - freqs_mhz[pair[-1]]
        pairs.append(analyze_pair(group, m, df))
    report = {"schema": REPORT_SCHEMA, "device": device, "bonferroni_m": int(m), "pairs": pairs}
    usable = [(p["max_abs_z"], p["delta_f_mhz"]) for p in pairs
              if p["max_abs_z"] is not None and p["delta_f_mhz"] is not None]
    report["freq_correlation"] = sig6(stats.freq_correlation(usable)) if len(usable) >= 3 else None
    return report


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=1, sort_keys=True) + "\n"


def _fmt_delta(value, z) -> str:
    if value is None:
        return "-"
    s = f"{value / UNIT:.3g}"
    if z is not None and abs(z) > stats.SIGNIFICANCE_Z:
        s += "*"
    return s


def render_table(report: dict) -> str:
    """Fixed-width table; deltas and sigmas in units of 1e-4."""
    pairs = report["pairs"]
    with_chsh = any(p["test"] == "a" for p in pairs)
    header = ["A-S-B" if with_chsh else "A-B"]
    if with_chsh:
        header += ["CHSH", "sigma"]
    header += ["dP_0*", "dP_1*", "dP_*0", "dP_*1", "sig_dP", "p_corr", "f_A-B"]
    rows = [header]
    for p in pairs:
        row = [p["label"]]
        if with_chsh:
            row += [f"{p['chsh']:.3g}" if p["chsh"] is not None else "-",
                    f"{p['chsh_sigma'] / UNIT:.2g}" if p["chsh_sigma"] else "-"]
        z = p["z"] or {}
        for name in stats.DELTA_NAMES:
            row.append(_fmt_delta(p["deltas"][name], z.get(name)))
        sig = p["sigmas"]
        row.append(f"{max(sig.values()) / UNIT:.3g}" if sig else "-")
        row.append(f"{p['p_corrected_max']:.2g}" if p["p_corrected_max"] is not None else "-")
        row.append(f"{p['delta_f_mhz']:.2g}" if p["delta_f_mhz"] is not None else "-")
        rows.append(row)
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    lines.append("")
    lines.append(f"units 1e-4; * marks |z| > {stats.SIGNIFICANCE_Z:g}; "
                 f"p_corr = look-elsewhere corrected p of the largest |z| (m = {report['bonferroni_m']})")
    return "\n".join(lines) + "\n"


def per_job_csv(tables) -> str:
    """CSV of the four deltas per (pair, job) for external plotting."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["pair", "job", *("dP_" + n for n in stats.DELTA_NAMES)])
    for pair, group in group_by_pair(tables).items():
        series = stats.per_job(group)
        for job, d in zip(series.jobs, series.deltas):
            w.writerow([pair_label(pair), "" if job is None else job, *(f"{x:.6g}" for x in d)])
    return buf.getvalue()


__all__ = ["analyze_pair", "build_report", "dumps_report", "group_by_pair", "per_job_csv",
           "render_table", "sig6"]

