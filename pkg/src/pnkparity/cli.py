"""Command line front end.

Subcommands: table, period, density, runs, stream, verify.

Exit codes: 0 success, 1 usage error, 2 a check failed, 3 a resource
cap was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

from . import __version__
from .analysis import (
    check_density_implication,
    check_density_lower_bound,
    joint_densities,
    max_even_run,
    nonzero_density,
    odd_density,
    parity_period,
    rows_to_csv,
    rows_to_json,
    summary_row,
)
from .engines import (
    WORD_BITS,
    PartitionParams,
    ResourceLimitError,
    mod_values,
    parity_stream,
    resource_caps,
)
from .period import (
    minimal_period,
    residual_poly,
    structural_bound,
    verify_certificate,
)

EXIT_OK, EXIT_USAGE, EXIT_FAILED, EXIT_RESOURCE = 0, 1, 2, 3

# Published odd densities of p(n, k) for k = 1..10, obtained there by scanning
# 2^(k-1) k! consecutive values.  Ground truth for `table` and `verify`.
PAPER_TABLE: dict[int, Fraction] = {
    k: Fraction(v) for k, v in enumerate(
        ["1", "1/2", "5/12", "11/24", "1/2", "29/60", "23/56", "1/2", "27/56", "1/2"], start=1)
}

ALL_CHECKS = ("table", "period", "density", "runs", "lemma31", "thm12", "thm13", "residual")

# config-file keys and their flag defaults; None means "not given"
DEFAULTS: dict[str, Any] = {
    "k": None,
    "k_max": None,
    "mod": "2",
    "start": 0,
    "count": None,
    "format": "text",
    "out": None,
    "canonical": False,
    "jobs": 1,
    "checks": ",".join(ALL_CHECKS),
    "expected_table": None,
    "max_residues": None,
    "max_exact": None,
    "verify": False,
    "cert": None,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _bool(v) -> bool:
    if isinstance(v, bool):
        return v
    s = str(v).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off", ""):
        return False
    raise UsageError(f"not a boolean: {v!r}")


def read_config(path: str | Path) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment, dashes in keys become underscores."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def _resolve(args: argparse.Namespace) -> dict[str, Any]:
    file_cfg = read_config(args.config) if getattr(args, "config", None) else {}
    cfg = dict(DEFAULTS)
    cfg.update(file_cfg)
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None and val is not False:
            cfg[key] = val
    return cfg


def parse_k_range(spec, k_max=None) -> tuple[int, int]:
    if spec is None:
        if k_max is None:
            raise UsageError("give --k or --k-max")
        return 1, int(k_max)
    s = str(spec)
    for sep in ("..", "-", ":"):
        if sep in s:
            lo, hi = s.split(sep, 1)
            lo, hi = int(lo), int(hi)
            break
    else:
        lo = hi = int(s)
        if k_max is not None:
            hi = int(k_max)
    if lo < 1 or hi < lo:
        raise UsageError(f"bad k range {spec!r}")
    return lo, hi


def parse_moduli(spec) -> list[int]:
    mods = sorted({int(x) for x in str(spec).split(",") if x.strip()})
    if not mods or min(mods) < 2:
        raise UsageError("moduli must be integers >= 2")
    return mods


def parse_table(spec) -> dict[int, Fraction]:
    vals = [Fraction(x.strip()) for x in str(spec).split(",") if x.strip()]
    return {k: v for k, v in enumerate(vals, start=1)}


def _emit(text: str, out: Optional[str], name: str) -> None:
    sys.stdout.write(text)
    if out:
        d = Path(out)
        d.mkdir(parents=True, exist_ok=True)
        (d / name).write_text(text)


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# table


def cmd_table(cfg) -> int:
    k_max = int(cfg["k_max"] or cfg["k"] or 10)
    if k_max < 1:
        raise UsageError("k_max must be >= 1")
    expected = parse_table(cfg["expected_table"]) if cfg["expected_table"] else PAPER_TABLE
    rows = []
    mismatch = False
    for k in range(1, k_max + 1):
        d = odd_density(k)
        ref = expected.get(k)
        if ref is None:
            status = "beyond paper"
        elif ref == d:
            status = "match"
        else:
            status = "MISMATCH"
            mismatch = True
        rows.append({"k": k, "L": parity_period(k), "odd_density": str(d),
                     "paper": None if ref is None else str(ref), "status": status})
    fmt = cfg["format"]
    if fmt == "json":
        text, name = _dumps({"rows": rows, "version": __version__}), "table.json"
    elif fmt == "csv":
        lines = ["k,L,odd_density,paper,status"]
        lines += [f"{r['k']},{r['L']},{r['odd_density']},{r['paper'] or ''},{r['status']}" for r in rows]
        text, name = "\n".join(lines) + "\n", "table.csv"
    else:
        lines = [f"{'k':>3}  {'L':>8}  {'odd density':<12}  {'paper':<8}  status"]
        lines += [f"{r['k']:>3}  {r['L']:>8}  {r['odd_density']:<12}  {r['paper'] or '-':<8}  {r['status']}"
                  for r in rows]
        text, name = "\n".join(lines) + "\n", "table.txt"
    _emit(text, cfg["out"], name)
    return EXIT_FAILED if mismatch else EXIT_OK


# ---------------------------------------------------------------------------
# period


def cmd_period(cfg) -> int:
    if cfg["k"] is None:
        raise UsageError("period needs --k")
    k = int(cfg["k"])
    mods = parse_moduli(cfg["mod"])
    out = Path(cfg["out"] or ".")
    out.mkdir(parents=True, exist_ok=True)
    status = EXIT_OK
    for m in mods:
        L, cert = minimal_period(k, m)
        path = cert.save(out / f"period_k{k}_m{m}.json")
        line = f"k={k} m={m} L={L} bound={structural_bound(k, m).value} certificate={path}"
        if _bool(cfg["verify"]):
            verdict = verify_certificate(path)
            line += " verified" if verdict else f" VERIFICATION FAILED: {verdict.failure}"
            if not verdict:
                status = EXIT_FAILED
        print(line)
    return status


# ---------------------------------------------------------------------------
# density / runs


def cmd_density(cfg) -> int:
    lo, hi = parse_k_range(cfg["k"], cfg["k_max"])
    mods = parse_moduli(cfg["mod"])
    records = []
    for k in range(lo, hi + 1):
        for m in mods:
            if m == 2:
                d, L, kind = odd_density(k), parity_period(k), "odd_density"
            else:
                d, L, kind = nonzero_density(k, m), minimal_period(k, m)[0], "nonzero_density"
            records.append({"k": k, "m": m, "L": L, "kind": kind, "density": str(d)})
    fmt = cfg["format"]
    if fmt == "json":
        text = _dumps(records)
    elif fmt == "csv":
        text = "k,m,L,kind,density\n" + "".join(
            f"{r['k']},{r['m']},{r['L']},{r['kind']},{r['density']}\n" for r in records)
    else:
        text = "".join(
            f"k={r['k']} m={r['m']} L={r['L']} {r['kind']}={r['density']}"
            + ("" if r["m"] == 2 else "  [extension: fraction of n with p(n,k) != 0 mod m]") + "\n"
            for r in records)
    _emit(text, cfg["out"], f"density.{ 'json' if fmt == 'json' else 'csv' if fmt == 'csv' else 'txt'}")
    return EXIT_OK


def cmd_runs(cfg) -> int:
    lo, hi = parse_k_range(cfg["k"], cfg["k_max"])
    reports = [max_even_run(k) for k in range(lo, hi + 1)]
    ok = all(r.attains_bound and r.at_period_end and r.consistent for r in reports)
    fmt = cfg["format"]
    docs = [{"k": r.k, "L": r.period, "max_even_run": r.max_even_run, "bound": r.bound,
             "positions": list(r.positions), "at_period_end": r.at_period_end} for r in reports]
    if fmt == "json":
        text = _dumps(docs)
    elif fmt == "csv":
        text = "k,L,max_even_run,bound,at_period_end\n" + "".join(
            f"{d['k']},{d['L']},{d['max_even_run']},{d['bound']},{str(d['at_period_end']).lower()}\n"
            for d in docs)
    else:
        text = "".join(
            f"k={d['k']} L={d['L']} max_even_run={d['max_even_run']} (bound {d['bound']}) "
            f"starts={d['positions'][:8]} at_period_end={d['at_period_end']}\n" for d in docs)
    _emit(text, cfg["out"], "runs." + ("json" if fmt == "json" else "csv" if fmt == "csv" else "txt"))
    return EXIT_OK if ok else EXIT_FAILED


# ---------------------------------------------------------------------------
# stream


def cmd_stream(cfg) -> int:
    if cfg["k"] is None or cfg["count"] is None:
        raise UsageError("stream needs --k and --count")
    k, start, count = int(cfg["k"]), int(cfg["start"]), int(cfg["count"])
    mods = parse_moduli(cfg["mod"])
    if len(mods) != 1:
        raise UsageError("stream takes a single modulus")
    m = mods[0]
    fmt = cfg["format"]
    header = {"k": k, "m": m, "start": start, "count": count,
              "order": "ascending-n", "word_bits": WORD_BITS,
              # bit i of packed word w holds n = start + WORD_BITS*w + i
              "bit_order": "lsb-first"}
    if m == 2:
        stream = parity_stream(k, start, count)
        values = stream.bits().tolist()
        trailer = {"popcount": stream.popcount()}
    else:
        if fmt == "raw":
            raise UsageError("raw packed output is only defined for m = 2")
        stream = None
        values = mod_values(PartitionParams(k, m), start, count).values.tolist()
        trailer = {"nonzero": sum(1 for v in values if v)}
    stem = f"stream_k{k}_m{m}_{start}_{count}"

    if fmt == "raw":
        blob = (json.dumps(header, sort_keys=True) + "\n").encode() + stream.words.astype("<u8").tobytes()
        if cfg["out"]:
            d = Path(cfg["out"])
            d.mkdir(parents=True, exist_ok=True)
            (d / f"{stem}.bin").write_bytes(blob)
        else:
            sys.stdout.buffer.write(blob)
            sys.stdout.flush()
        return EXIT_OK
    if fmt == "json":
        text = _dumps({**header, **trailer, "values": values})
    elif fmt == "csv":
        text = ("# " + " ".join(f"{a}={b}" for a, b in sorted(header.items())) + "\n"
                + "n,value\n" + "".join(f"{start + i},{v}\n" for i, v in enumerate(values)))
    else:
        sep = "" if m <= 10 else " "
        text = ("# " + " ".join(f"{a}={b}" for a, b in sorted(header.items())) + "\n"
                + sep.join(map(str, values)) + "\n"
                + "# " + " ".join(f"{a}={b}" for a, b in trailer.items()) + "\n")
    _emit(text, cfg["out"], f"{stem}.{'txt' if fmt == 'text' else fmt}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _check(ok: bool, **values) -> dict:
    return {"ok": bool(ok), **values}


def verify_k(k: int, moduli: Sequence[int], checks: Sequence[str],
             expected: dict[int, Fraction], caps: tuple) -> tuple[int, dict, float]:
    """All enabled checks for one k.  Top-level so worker processes can run it."""
    t0 = time.perf_counter()
    with resource_caps(*caps):
        res: dict[str, dict] = {}
        dens = odd_density(k) if set(checks) & {"table", "density", "thm12"} else None
        if "table" in checks and k in expected:
            res["table"] = _check(dens == expected[k], density=str(dens), paper=str(expected[k]))
        if "period" in checks:
            for m in moduli:
                L, cert = minimal_period(k, m)
                bound = structural_bound(k, m).value
                seq = mod_values(PartitionParams(k, m), 0, 2 * L).values
                cert_ok = bool(verify_certificate(cert))
                repeats = bool((seq[:L] == seq[L:]).all())
                res[f"period_m{m}"] = _check(
                    bound % L == 0 and cert_ok and repeats,
                    L=L, bound=bound, divides_bound=bound % L == 0,
                    certificate_ok=cert_ok, stream_repeats=repeats)
        if "density" in checks:
            L = parity_period(k)
            twice = Fraction(parity_stream(k, 0, 2 * L).popcount(), 2 * L)
            naive = Fraction(int(mod_values(PartitionParams(k, 2), 0, L).values.sum()), L)
            res["density"] = _check(dens == twice == naive, density=str(dens), L=L)
        if "runs" in checks:
            r = max_even_run(k)
            res["runs"] = _check(r.attains_bound and r.at_period_end and r.consistent,
                                 max_even_run=r.max_even_run, bound=r.bound,
                                 at_period_end=r.at_period_end)
        if "lemma31" in checks and k >= 2:
            j = joint_densities(k)
            res["lemma31"] = _check(j.balanced and j.total == 1, odd_odd=str(j.odd_odd),
                                    even_odd=str(j.even_odd), odd_even=str(j.odd_even),
                                    even_even=str(j.even_even), period=j.period)
        if "thm12" in checks:
            rec = check_density_implication(k + 1)[-1]
            res["thm12"] = _check(rec.holds, density=str(rec.density),
                                  next_density=str(rec.next_density), premise=rec.premise)
        if "thm13" in checks:
            rec = check_density_lower_bound(k)
            res["thm13"] = _check(rec.holds, density=str(rec.density), bound=str(rec.bound),
                                  min_odd_in_window=rec.min_odd_in_window)
        if "residual" in checks:
            a = residual_poly(k)
            res["residual"] = _check(a.degree_matches, degree=a.degree,
                                     expected_degree=a.expected_degree, L=a.period)
    return k, res, time.perf_counter() - t0


def cmd_verify(cfg) -> int:
    lo, hi = parse_k_range(cfg["k"], cfg["k_max"] or (None if cfg["k"] else 10))
    moduli = parse_moduli(cfg["mod"])
    checks = [c.strip() for c in str(cfg["checks"]).split(",") if c.strip()]
    unknown = set(checks) - set(ALL_CHECKS)
    if unknown:
        raise UsageError(f"unknown checks: {sorted(unknown)}")
    expected = parse_table(cfg["expected_table"]) if cfg["expected_table"] else PAPER_TABLE
    canonical = _bool(cfg["canonical"])
    jobs = int(cfg["jobs"])
    caps = (int(cfg["max_residues"]) if cfg["max_residues"] else None,
            int(cfg["max_exact"]) if cfg["max_exact"] else None)

    ks = list(range(lo, hi + 1))
    if jobs > 1 and len(ks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(verify_k, k, moduli, checks, expected, caps) for k in ks]
            outcomes = [f.result() for f in futures]
    else:
        outcomes = [verify_k(k, moduli, checks, expected, caps) for k in ks]
    outcomes.sort(key=lambda o: o[0])

    cert_results = []
    for path in cfg["cert"] or []:
        verdict = verify_certificate(path)
        cert_results.append({"path": str(path), "ok": bool(verdict), "failure": verdict.failure})

    results = {str(k): res for k, res, _ in outcomes}
    all_ok = all(c["ok"] for res in results.values() for c in res.values())
    all_ok = all_ok and all(c["ok"] for c in cert_results)
    summary = {
        "tool": "pnkparity",
        "version": __version__,
        "config": {"k_range": [lo, hi], "moduli": moduli, "checks": checks,
                   "expected_table": {str(k): str(v) for k, v in sorted(expected.items())}},
        "results": results,
        "certificates": cert_results,
        "all_passed": all_ok,
    }
    if not canonical:
        summary["timings_s"] = {str(k): round(t, 4) for k, _, t in outcomes}
        summary["config"]["jobs"] = jobs

    fmt = cfg["format"]
    out = cfg["out"]
    text = _dumps(summary)
    if out:
        d = Path(out)
        d.mkdir(parents=True, exist_ok=True)
        (d / "summary.json").write_text(text)
        if fmt == "csv" or "density" in checks:
            with resource_caps(*caps):
                rows = [summary_row(k) for k in ks]
            (d / "report.csv").write_text(rows_to_csv(rows))
            (d / "report.json").write_text(rows_to_json(rows))
    if fmt == "json" or not out:
        sys.stdout.write(text)
    else:
        failed = [f"k={k}:{name}" for k, res in results.items() for name, c in res.items() if not c["ok"]]
        print(f"verified k={lo}..{hi} moduli={moduli}: "
              + ("all checks passed" if all_ok else "FAILED " + ", ".join(failed)))
    return EXIT_OK if all_ok else EXIT_FAILED


# ---------------------------------------------------------------------------


COMMANDS = {
    "table": cmd_table,
    "period": cmd_period,
    "density": cmd_density,
    "runs": cmd_runs,
    "stream": cmd_stream,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pnkparity", description="Parity and periods of p(n, k) mod m.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", help="k, or an inclusive range such as 1..10")
    common.add_argument("--k-max", type=int, dest="k_max")
    common.add_argument("--mod", help="modulus, or a comma separated list (default 2)")
    common.add_argument("--start", type=int)
    common.add_argument("--count", type=int)
    common.add_argument("--format", choices=["text", "csv", "json", "raw"])
    common.add_argument("--out", metavar="DIR")
    common.add_argument("--canonical", action="store_true", default=None,
                        help="omit timings and other run-dependent fields")
    common.add_argument("--jobs", type=int, metavar="N")
    common.add_argument("--config", metavar="FILE", help="flat key = value file; flags override it")
    common.add_argument("--max-residues", type=int, dest="max_residues")
    common.add_argument("--max-exact", type=int, dest="max_exact")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    t = sub.add_parser("table", parents=[common], help="reproduce the odd density table")
    t.add_argument("--expected-table", dest="expected_table",
                   help="override the reference densities (comma separated fractions)")
    p = sub.add_parser("period", parents=[common], help="minimal period and certificate")
    p.add_argument("--verify", action="store_true", default=None)
    sub.add_parser("density", parents=[common], help="exact odd densities")
    sub.add_parser("runs", parents=[common], help="longest runs of even values")
    sub.add_parser("stream", parents=[common], help="dump parities or residues")
    v = sub.add_parser("verify", parents=[common], help="run a verification campaign")
    v.add_argument("--checks", help="comma separated subset of " + ",".join(ALL_CHECKS))
    v.add_argument("--expected-table", dest="expected_table",
                   help="override the reference densities (comma separated fractions)")
    v.add_argument("--cert", action="append", metavar="FILE", help="also verify this certificate")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
        with resource_caps(int(cfg["max_residues"]) if cfg["max_residues"] else None,
                           int(cfg["max_exact"]) if cfg["max_exact"] else None):
            return COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"pnkparity: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"pnkparity: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"pnkparity: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
