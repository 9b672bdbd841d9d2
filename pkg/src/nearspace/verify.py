"""End-to-end reproduction checks used by ``nearspace verify``."""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass
from importlib import resources
from itertools import combinations
from pathlib import Path

from .counting import brute_count, count_all, count_subgroups, double_count_check, dowling_whitney
from .genclose import (build_seed_matrix, canonical_gen, find_seed_set, lc_closure, mdim, normalized_vectors,
                       seed_number)
from .nearfield import nearfield_for_order, validate_axioms
from .nvspace import CanonicalSubgroup, enumerate_elements

# the five-coordinate example subgroup over the order-9 nearfield and a seed set of it
EXAMPLE_BASIS = [(1, 0, 0, 1, 0), (0, 1, 1, 0, 0), (0, 0, 0, 0, 1)]
EXAMPLE_SEEDS = [(1, 0, 0, 1, 1), (0, 1, 1, 0, 2)]
LC_EXAMPLE = [(1, 0, 1), (1, 1, 0)]


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name:<28} {self.detail} ({self.seconds:.2f}s)"

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "seconds": round(self.seconds, 3)}


def load_fixtures(path: str | Path | None = None) -> dict:
    if path is None:
        text = resources.files("nearspace").joinpath("data/tables.json").read_text()
    else:
        text = Path(path).read_text()
    data = json.loads(text)
    for key in ("tables", "totals"):
        if key not in data:
            raise ValueError(f"fixture file lacks {key!r}")
    return data


def check_tables(fixtures: dict) -> tuple[bool, str]:
    mismatches = []
    cells = 0
    for q_str, rows in fixtures["tables"].items():
        q = int(q_str)
        for n, row in enumerate(rows):
            for dim, value in enumerate(row):
                cells += 1
                got = count_subgroups(q, dim, n)
                if got != value:
                    mismatches.append(f"q={q} n={n} l={dim}: {got} != {value}")
    for q_str, totals in fixtures["totals"].items():
        q = int(q_str)
        for n, value in enumerate(totals):
            cells += 1
            if count_all(q, n) != value:
                mismatches.append(f"q={q} n={n} total: {count_all(q, n)} != {value}")
    if mismatches:
        return False, "; ".join(mismatches[:5])
    return True, f"{cells} cells"


def check_dowling(fixtures: dict) -> tuple[bool, str]:
    for q_str, rows in fixtures["tables"].items():
        q = int(q_str)
        whitney = dowling_whitney(q - 1, len(rows) - 1)
        for n in range(len(rows)):
            if whitney[n] != [count_subgroups(q, d, n) for d in range(n + 1)]:
                return False, f"q={q} n={n}"
    return True, "Whitney recurrence equals closed form"


def oracle_equivalence(N, cases) -> tuple[bool, str]:
    for V, n in cases:
        T = canonical_gen(N, V, n).subgroup
        if enumerate_elements(N, T) != lc_closure(N, V, n).elements:
            return False, f"mismatch for {V}"
    return True, f"{len(cases)} cases"


def random_cases(q, count, seed, n_max=4, k_max=3):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(1, n_max)
        k = rng.randint(1, k_max)
        out.append(([tuple(rng.randrange(q) for _ in range(n)) for _ in range(k)], n))
    return out


def normalized_pair_cases(q, n):
    return [(list(pair), n) for pair in combinations(normalized_vectors(q, n), 2)]


def check_mdim_construction(N) -> tuple[bool, str]:
    q = N.order
    for k in (2, 3):
        res = canonical_gen(N, build_seed_matrix(N, k))
        if res.dim != mdim(q, k) or res.certificates:
            return False, f"k={k}: dim {res.dim}"
    rows = build_seed_matrix(N, 2)
    for extra in normalized_vectors(q, 2):
        wide = [r + (extra[t],) for t, r in enumerate(rows)]
        if canonical_gen(N, wide).dim > mdim(q, 2):
            return False, f"extra column {extra} raised the dimension"
    return True, f"dims {mdim(q, 2)}, {mdim(q, 3)}"


def check_seed_numbers(N) -> tuple[bool, str]:
    for dim in range(1, 92):
        want = 1 if dim == 1 else 2 if dim <= 10 else 3
        if seed_number(9, dim) != want:
            return False, f"seed_number(9, {dim})"
    S = CanonicalSubgroup.from_basis(N, 5, EXAMPLE_BASIS)
    seeds = find_seed_set(N, S)
    if len(seeds) != 2 or canonical_gen(N, seeds, 5).subgroup != S:
        return False, "seed set of the example subgroup"
    if canonical_gen(N, EXAMPLE_SEEDS, 5).subgroup != S:
        return False, "the listed seed set does not generate the example subgroup"
    return True, f"seed set {seeds}"


def run_verification(fixtures_path=None, slow: bool = False, jobs: int = 1, seed: int = 0, report=None) -> list[Check]:
    """Run every reproduction check; ``report`` is called with each finished Check."""
    checks: list[Check] = []

    def run(name, fn):
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check, not an abort
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        c = Check(name, bool(ok), detail, time.perf_counter() - t0)
        checks.append(c)
        if report:
            report(c)

    fixtures = load_fixtures(fixtures_path)
    run("tables", lambda: check_tables(fixtures))
    run("dowling_recurrence", lambda: check_dowling(fixtures))

    for order in (9, 64) + ((625,) if slow else ()):
        def axioms(order=order):
            N = nearfield_for_order(order)
            mode = "exhaustive" if order < 625 else "sampled"
            r = validate_axioms(N, mode, samples=10**6, seed=seed)
            return r.all_passed and r.proper, f"{mode}, witness {r.properness_witness}, failed {r.failed()}"
        run(f"axioms_{order}", axioms)

    N = nearfield_for_order(9)

    def brute():
        ns = (1, 2, 3, 4) if slow else (1, 2, 3)
        for n in ns:
            got = brute_count(N, n, jobs=jobs)
            want = [count_subgroups(9, d, n) for d in range(n + 1)]
            if got != want:
                return False, f"n={n}: {got} != {want}"
        return True, f"n={list(ns)}"
    run("brute_count", brute)

    def oracle():
        cases = normalized_pair_cases(9, 2) + random_cases(9, 1000 if slow else 200, seed)
        if slow:
            cases += normalized_pair_cases(9, 3)
        return oracle_equivalence(N, cases)
    run("gen_oracle_equivalence", oracle)

    run("mdim_construction", lambda: check_mdim_construction(N))
    run("seed_numbers", lambda: check_seed_numbers(N))

    def lc_example():
        t = lc_closure(N, LC_EXAMPLE)
        return len(t.elements) == 729 and t.index == 2, f"levels {t.levels}, index {t.index}"
    run("linearity_index_example", lc_example)

    def double_count():
        for n, dim in ((1, 1), (2, 1), (2, 2), (3, 2)):
            r = double_count_check(N, n, dim)
            if not r.passed:
                return False, f"(n={n}, l={dim}): {r.counterexample}"
        return True, "all groups have size l! 8^l"
    run("double_counting", double_count)
    return checks
