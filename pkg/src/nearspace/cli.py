"""Command-line front end.

Exit codes: 0 success, 1 verification mismatch, 2 usage or input error.

Defaults can come from a ``key = value`` config file named by ``--config`` or
the ``NEARSPACE_CONFIG`` environment variable; flags always win.  Keys are
the long option names with dashes replaced by underscores (``seed``,
``samples``, ``format``, ``jobs``, ``cap``, ...).
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .counting import brute_count, count_subgroups, count_table
from .errors import NearspaceError
from .genclose import (DEFAULT_CLOSURE_CAP, canonical_gen, find_seed_set, lc_closure, mdim,
                       search_linearity_index, seed_number)
from .nearfield import DicksonPair, build_dickson, dickson_pairs_for_order, nearfield_for_order, validate_axioms
from .nvspace import CanonicalSubgroup
from .verify import load_fixtures, run_verification

CONFIG_ENV = "NEARSPACE_CONFIG"

DEFAULTS = {
    "format": None,
    "output": None,
    "mode": "exhaustive",
    "samples": 10**6,
    "seed": None,
    "jobs": 1,
    "cap": DEFAULT_CLOSURE_CAP,
    "fixtures": None,
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Options resolved from flags, config file and built-in defaults."""

    command: str
    values: dict = field(default_factory=dict)

    def __getattr__(self, name):
        try:
            return self.values[name]
        except KeyError:
            raise AttributeError(name) from None

    def validate(self):
        for key in ("samples", "jobs", "cap"):
            v = self.values.get(key)
            if v is not None and v <= 0:
                raise UsageError(f"--{key} must be positive")
        if self.values.get("random") is not None and self.values.get("seed") is None:
            raise UsageError("a random strategy needs --seed")


def read_config_file(path) -> dict:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


_INT_KEYS = {"samples", "seed", "jobs", "cap", "q", "n", "k", "n_max", "k_max", "dim", "random"}


def resolve_config(args) -> RunConfig:
    values = dict(vars(args))
    path = values.pop("config", None) or os.environ.get(CONFIG_ENV)
    file_values = read_config_file(path) if path else {}
    for key, value in file_values.items():
        if key in values and values[key] is None:
            values[key] = int(value) if key in _INT_KEYS else value
    for key, value in DEFAULTS.items():
        if values.get(key) is None:
            values[key] = value
    cfg = RunConfig(args.command, values)
    cfg.validate()
    return cfg


# -- helpers -----------------------------------------------------------------

def _nearfield(order):
    try:
        return nearfield_for_order(order)
    except NearspaceError as exc:
        raise UsageError(f"--q {order}: {exc}") from exc


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _read_vectors(path, order, n=None):
    data = _read_json(path)
    if isinstance(data, dict):
        data = data.get("vectors")
    if not isinstance(data, list):
        raise UsageError(f"{path}: expected a JSON array of vectors")
    vecs = []
    for v in data:
        if not isinstance(v, list) or not all(isinstance(a, int) and 0 <= a < order for a in v):
            raise UsageError(f"{path}: bad vector {v!r} (element indices must be in [0, {order}))")
        vecs.append(tuple(v))
    dims = {len(v) for v in vecs}
    if n is not None:
        dims.add(n)
    if len(dims) > 1:
        raise UsageError(f"{path}: vectors of different lengths {sorted(dims)}")
    return vecs, (dims.pop() if dims else None)


def _read_subgroup(path, order):
    data = _read_json(path)
    if isinstance(data, dict) and "subgroup" in data:
        data = data["subgroup"]
    try:
        return CanonicalSubgroup.from_json(data, order)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _render_table(table, fmt, dim=None):
    n_max = len(table.rows) - 1
    if dim is not None:
        header = ["n", str(dim)]
        body = [[str(n), str(row[dim])] for n, row in enumerate(table.rows) if n >= dim]
    else:
        header = ["n"] + [str(d) for d in range(n_max + 1)] + ["total"]
        body = [[str(n)] + [str(x) for x in row] + [""] * (n_max - n) + [str(sum(row))]
                for n, row in enumerate(table.rows)]
    if fmt in ("csv", "text"):
        return "\n".join(",".join(r) for r in [header] + body) + "\n"
    if fmt == "markdown":
        lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        lines += ["| " + " | ".join(r) + " |" for r in body]
        return "\n".join(lines) + "\n"
    if dim is not None:
        return _dump({"q": table.q, "dim": dim, "rows": [{"n": int(r[0]), "count": int(r[1])} for r in body]})
    return _dump(table.to_json())


# -- commands ----------------------------------------------------------------

def cmd_nearfield_check(cfg, out):
    try:
        pair = DicksonPair(cfg.q, cfg.n)
        N = build_dickson(pair, validate=None)
        report = validate_axioms(N, cfg.mode, samples=cfg.samples, seed=cfg.seed or 0)
    except NearspaceError as exc:
        raise UsageError(str(exc)) from exc
    if cfg.format == "json":
        out.write(_dump(report.to_dict()))
    else:
        out.write(f"Dickson nearfield q={pair.q} n={pair.n}, order {N.order} ({report.mode}, "
                  f"{report.triples_checked} triples)\n")
        for name, ok in report.to_dict()["checks"].items():
            ce = report.counterexamples.get(name)
            out.write(f"  {'PASS' if ok else 'FAIL'}  {name}{'' if ce is None else f'  counterexample {ce}'}\n")
        w = report.properness_witness
        out.write(f"  proper: {'yes, (a+b)c != ac+bc at ' + str(w) if w else 'no witness'}\n")
    return 0 if report.all_passed else 1


def cmd_count(cfg, out):
    _nearfield_order_check(cfg.q)
    if cfg.dim is not None and not 0 <= cfg.dim <= cfg.n_max:
        raise UsageError("--dim must lie in [0, n-max]")
    out.write(_render_table(count_table(cfg.q, cfg.n_max), cfg.format or "csv", cfg.dim))
    return 0


def _nearfield_order_check(q):
    if not dickson_pairs_for_order(q):
        raise UsageError(f"--q {q} is not the order of a proper Dickson nearfield")


def cmd_brute_count(cfg, out):
    N = _nearfield(cfg.q)
    try:
        got = brute_count(N, cfg.n, jobs=cfg.jobs)
    except (NearspaceError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    want = [count_subgroups(cfg.q, d, cfg.n) for d in range(cfg.n + 1)]
    ok = got == want
    if cfg.format == "json":
        out.write(_dump({"q": cfg.q, "n": cfg.n, "brute": got, "formula": want, "status": "PASS" if ok else "FAIL"}))
    else:
        out.write(f"brute   {got}\nformula {want}\n{'PASS' if ok else 'FAIL'}\n")
    return 0 if ok else 1


def cmd_gen(cfg, out):
    N = _nearfield(cfg.q)
    vecs, n = _read_vectors(cfg.vectors, N.order, cfg.n)
    if n is None:
        raise UsageError("no vectors given; pass --n for the ambient dimension")
    out.write(_dump(canonical_gen(N, vecs, n).to_json()))
    return 0


def cmd_lc_index(cfg, out):
    N = _nearfield(cfg.q)
    vecs, n = _read_vectors(cfg.vectors, N.order, cfg.n)
    if n is None:
        raise UsageError("no vectors given; pass --n for the ambient dimension")
    try:
        trace = lc_closure(N, vecs, n, cap=cfg.cap)
    except NearspaceError as exc:
        raise UsageError(f"{exc}") from exc
    out.write(_dump(trace.to_json(include_elements=cfg.elements)))
    return 0


def cmd_mdim(cfg, out):
    if cfg.q < 2 or cfg.k < 1:
        raise UsageError("need --q >= 2 and --k >= 1")
    value = mdim(cfg.q, cfg.k)
    out.write(_dump({"q": cfg.q, "k": cfg.k, "mdim": value}) if cfg.format == "json" else f"{value}\n")
    return 0


def cmd_seedset(cfg, out):
    N = _nearfield(cfg.q)
    T = _read_subgroup(cfg.subgroup, N.order)
    seeds = find_seed_set(N, T)
    out.write(_dump({"dim": T.dim, "seed_number": seed_number(N.order, T.dim), "vectors": [list(v) for v in seeds]}))
    return 0


def cmd_lc_search(cfg, out):
    N = _nearfield(cfg.q)
    strategy = "random" if cfg.random is not None else "exhaustive"
    report = search_linearity_index(N, range(1, cfg.n_max + 1), range(1, cfg.k_max + 1), strategy,
                                    count=cfg.random, seed=cfg.seed, cap=cfg.cap, jobs=cfg.jobs)
    out.write(_dump({"q": cfg.q, "n_max": cfg.n_max, "k_max": cfg.k_max, "seed": cfg.seed, **report.to_json()}))
    return 0


VERIFY_ORDER = 9


def cmd_verify(cfg, out):
    if cfg.q is not None:
        _nearfield_order_check(cfg.q)
        if cfg.q != VERIFY_ORDER:
            raise UsageError(f"the verification suite is calibrated for order {VERIFY_ORDER}, got --q {cfg.q}")
    try:
        load_fixtures(cfg.fixtures)
    except (OSError, ValueError) as exc:
        raise UsageError(f"fixtures: {exc}") from exc
    as_json = cfg.format == "json"

    def report(check):
        if not as_json:
            out.write(check.line() + "\n")
            out.flush()

    checks = run_verification(cfg.fixtures, slow=cfg.slow, jobs=cfg.jobs, seed=cfg.seed or 0, report=report)
    ok = all(c.passed for c in checks)
    if as_json:
        out.write(_dump({"passed": ok, "checks": [c.to_json() for c in checks]}))
    else:
        out.write(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed\n")
    return 0 if ok else 1


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"key = value defaults file (also ${CONFIG_ENV})")
    common.add_argument("--format", choices=["text", "json", "csv", "markdown"])
    common.add_argument("--output", "-o", help="write to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="nearspace", description="Finite nearfields and R-subgroups of R^n")
    sub = parser.add_subparsers(dest="command", required=True)

    nf = sub.add_parser("nearfield", help="nearfield construction")
    nf_sub = nf.add_subparsers(dest="action", required=True)
    chk = nf_sub.add_parser("check", parents=[common], help="validate the Dickson nearfield for (q, n)")
    chk.add_argument("--q", type=int, required=True, help="prime power base of the Dickson pair")
    chk.add_argument("--n", type=int, required=True, help="Dickson exponent; the order is q**n")
    chk.add_argument("--mode", choices=["exhaustive", "sampled"])
    chk.add_argument("--samples", type=int)
    chk.add_argument("--seed", type=int)
    chk.set_defaults(func=cmd_nearfield_check)

    p = sub.add_parser("count", parents=[common], help="R-subgroup count tables")
    p.add_argument("--q", type=int, required=True, help="nearfield order")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--dim", type=int)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("brute-count", parents=[common], help="recount subgroups by enumeration")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_brute_count)

    p = sub.add_parser("gen", parents=[common], help="canonical form of gen(V)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--vectors", required=True, help="JSON array of vectors of element indices")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("lc-index", parents=[common], help="linear-combination closure trace")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--vectors", required=True)
    p.add_argument("--cap", type=int)
    p.add_argument("--elements", action="store_true", help="include the closure elements")
    p.set_defaults(func=cmd_lc_index)

    p = sub.add_parser("lc-search", parents=[common], help="search for large linearity indices")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--random", type=int, metavar="COUNT")
    p.add_argument("--seed", type=int)
    p.add_argument("--cap", type=int)
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_lc_search)

    p = sub.add_parser("mdim", parents=[common], help="max dimension generated by k vectors")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_mdim)

    p = sub.add_parser("seedset", parents=[common], help="smallest seed set of a subgroup")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--subgroup", required=True, help="subgroup JSON (gen output is accepted)")
    p.set_defaults(func=cmd_seedset)

    p = sub.add_parser("verify", parents=[common], help="run every reproduction check")
    p.add_argument("--q", type=int, help=f"nearfield order (only {VERIFY_ORDER} is supported)")
    p.add_argument("--fixtures", help="alternative table fixture file")
    p.add_argument("--slow", action="store_true", help="include the long-running checks")
    p.add_argument("--jobs", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    func = args.func
    del args.func
    try:
        cfg = resolve_config(args)
        buf = io.StringIO() if cfg.output else sys.stdout
        code = func(cfg, buf)
    except UsageError as exc:
        print(f"nearspace: error: {exc}", file=sys.stderr)
        return 2
    if cfg.output:
        Path(cfg.output).write_text(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
