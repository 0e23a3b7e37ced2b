"""Verification suites: each returns a list of PASS / FAIL / WARN checks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb, log2

from . import constructions as cons
from .cyclic import Cgh, canonical_form
from .engine import (
    enumerate_minimum_saturated,
    enumerate_saturated,
    sat_exact,
    satisfies_weight_hypothesis,
    weight_profile,
)
from .m1 import (
    FullyConsecutive,
    build_H_of_C,
    check_saturated_family,
    consecutive_tuple,
    count_H_of_C,
    find_shiftable,
    cycle_plus_leaves,
    move_delta,
    r_valid_tuples,
    semi_valid_tuples,
    shift_tuple,
    structural_sat,
    thm_formula,
    tuple_from_gaps,
    verify_structure_theorem,
)
from .patterns import ALL_R3, M1r, Pattern

PASS, FAIL, WARN = "PASS", "FAIL", "WARN"

SUITES = (
    "thm11",
    "thm12-lower",
    "thm12-upper",
    "structure",
    "lambda-rho",
    "move-delta",
    "appendix-bounds",
    "table1",
)


@dataclass
class Check:
    name: str
    status: str
    detail: str = ""
    data: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail, "data": self.data}


@dataclass
class SuiteResult:
    suite: str
    checks: list[Check] = field(default_factory=list)
    rows: list[dict] = field(default_factory=list)
    budget_exhausted: bool = False

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "", data: dict | None = None, warn_only: bool = False):
        status = PASS if passed else (WARN if warn_only else FAIL)
        self.checks.append(Check(name, status, detail, data or {}))

    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, WARN: 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "ok": self.ok,
            "counts": self.counts(),
            "checks": [c.to_dict() for c in self.checks],
            "rows": self.rows,
        }


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------


def proven_lower_bound(F: Pattern, n: int) -> float:
    """Lower bounds on sat(n, F) that hold for every n (not only asymptotically)."""
    return {
        "M1": thm_formula(n),
        "M2": n,
        "M3": n * (n - 3),
        "S1": (n - 2) / 3,
        "S2": (n - 2) / 3,
        "S3": n,
        "D1": n * (n - 1) / 6,
        "D2": n * (n - 1) * (n - 2) / (6 * (2 * n - 5)),
    }[F.tag]


def asymptotic_bounds(F: Pattern, n: int) -> tuple[float, float]:
    """Leading terms of the best known lower and upper bounds on sat(n, F)."""
    m3 = comb(n, 3) - comb(n - 3, 3)
    return {
        "M1": (thm_formula(n), thm_formula(n)),
        "M2": (11 * n / 9, 3 * n),
        "M3": (n * n, m3),
        "S1": (n / 2, n),
        "S2": (2 * n / 5, n),
        "S3": (3 * n / 2, 3 * n * log2(n)),
        "D1": (n * n / 6, n * n / 4),
        "D2": (n * n / 12, 5 * n * n / 24),
    }[F.tag]


def construction_size(F: Pattern, n: int) -> int | None:
    H = cons.construction_for(F, n)
    return None if H is None else len(H)


# ---------------------------------------------------------------------------
# helpers shared with the test-suite
# ---------------------------------------------------------------------------


def r2_structure_check(n: int) -> tuple[bool, dict]:
    """Every saturated graph has n edges and is an odd cycle on a tuple plus leaves."""
    G2 = M1r(2)
    families = enumerate_saturated(n, G2)
    shapes = set()
    for L in range(3, n + 1, 2):
        for C in semi_valid_tuples(n, L):
            shapes.add(frozenset(cycle_plus_leaves(n, C)))
    sizes = sorted({len(H) for H in families})
    unmatched = [H.sorted_edges() for H in families if H.edges not in shapes]
    ok = sizes == [n] and not unmatched
    return ok, {"families": len(families), "sizes": sizes, "unmatched": unmatched[:3]}


def random_move_instances(count: int, seed: int = 0, nmax: int = 20):
    """Random ``(C, i, k, r)`` with C r-valid and all three shifts semi-valid."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        r = rng.choice((3, 4))
        n = rng.randint(2 * r, nmax)
        L = rng.choice(range(3, n + 1, 2))
        cuts = sorted(rng.sample(range(1, n), L - 1))
        gaps = [b - a for a, b in zip([0] + cuts, cuts + [n])]
        C = tuple_from_gaps(n, gaps, rng.randrange(n))
        if not C.is_r_valid(r):
            continue
        try:
            i, k = find_shiftable(C)
        except FullyConsecutive:
            continue
        if all(shift_tuple(C, i, k, m).is_semi_valid() for m in (-1, 1)):
            out.append((C, i, k, r))
    return out


def admissible_lengths(n: int, r: int) -> list[int]:
    """``l`` for which both consecutive tuples of length ``2l+1`` and ``2l+3`` are r-valid."""
    out = []
    for ell in range(1, (n - 1) // 2):
        a, b = consecutive_tuple(n, ell), consecutive_tuple(n, ell + 1)
        if a.is_r_valid(r) and b.is_r_valid(r):
            out.append(ell)
    return out


def random_weight_family(n: int, rng: random.Random) -> Cgh:
    """Random 3-cgh covering every vertex where each edge has a vertex of degree at least two."""
    edges: set[tuple[int, ...]] = set()
    covered: set[int] = set()
    greed = rng.random()
    while len(covered) < n:
        u = rng.choice(sorted(set(range(n)) - covered))
        fresh = [v for v in range(n) if v not in covered and v != u]
        others = [v for v in range(n) if v != u]
        pool = fresh if len(fresh) >= 2 and rng.random() < greed else others
        e = tuple(sorted([u] + rng.sample(pool, 2)))
        edges.add(e)
        covered.update(e)
    H = Cgh(n, 3, frozenset(edges))
    deg = H.degrees()
    for e in sorted(H.edges):
        if all(deg[v] == 1 for v in e):
            v = rng.choice(e)
            rest = rng.sample([x for x in range(n) if x not in e], 2)
            f = tuple(sorted([v] + rest))
            edges.add(f)
            for x in f:
                deg[x] += 1
    return Cgh(n, 3, frozenset(edges))


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def _sat(res: SuiteResult, n: int, F: Pattern, budget, threads):
    rep = sat_exact(n, F, budget=budget, threads=threads)
    if not rep.exhaustive:
        res.budget_exhausted = True
    return rep


def suite_thm11(nmax: int = 8, budget=None, threads=None, **_) -> SuiteResult:
    res = SuiteResult("thm11")
    M1 = Pattern("M1")
    for n in range(6, nmax + 1):
        rep = _sat(res, n, M1, budget, threads)
        res.add(
            f"sat(n={n}, M1) = C(n-1,2)+3n-11",
            rep.exhaustive and rep.value == thm_formula(n),
            f"solver {rep.value}, formula {thm_formula(n)}",
            {"exhaustive": rep.exhaustive},
            warn_only=not rep.exhaustive,
        )
        res.add(f"structural_sat(n={n}, 3) = formula", structural_sat(n, 3) == thm_formula(n))
        if n == 6:
            sizes = sorted({len(H) for H in enumerate_saturated(6, M1)})
            res.add("every M1-saturated family at n=6 has 17 edges", sizes == [17], f"sizes {sizes}")
        elif rep.exhaustive and n <= 9:
            classes = enumerate_minimum_saturated(n, M1, value=rep.value)
            star = canonical_form(cons.star_plus(n, 3))
            res.add(
                f"unique minimum class at n={n} is star_plus",
                len(classes) == 1 and classes[0].edges == star.edges,
                f"{len(classes)} rotation classes",
            )
    return res


def suite_thm12_lower(nmax: int = 8, budget=None, threads=None, **_) -> SuiteResult:
    res = SuiteResult("thm12-lower")
    for n in range(6, nmax + 1):
        for F in ALL_R3:
            rep = _sat(res, n, F, budget, threads)
            lb = proven_lower_bound(F, n)
            res.add(
                f"sat(n={n}, {F}) >= lower bound",
                rep.value >= lb if rep.exhaustive else True,
                f"sat {rep.value}, bound {lb:.3f}" + ("" if rep.exhaustive else " (budget exhausted)"),
                {"value": rep.value, "bound": lb, "exhaustive": rep.exhaustive},
                warn_only=not rep.exhaustive,
            )
    return res


def suite_thm12_upper(nmax: int = 8, budget=None, threads=None, **_) -> SuiteResult:
    res = SuiteResult("thm12-upper")
    for n in range(6, nmax + 1):
        for F in ALL_R3:
            size = construction_size(F, n)
            if size is None:
                continue
            rep = _sat(res, n, F, budget, threads)
            res.add(
                f"sat(n={n}, {F}) <= construction size",
                rep.value <= size,
                f"sat {rep.value}, construction {size}",
                {"value": rep.value, "construction": size},
            )
        rep = _sat(res, n, Pattern("M3"), budget, threads)
        m3 = comb(n, 3) - comb(n - 3, 3)
        res.add(f"sat(n={n}, M3) <= C(n,3)-C(n-3,3)", rep.value <= m3, f"sat {rep.value}, bound {m3}")
    for n in range(7, max(nmax, 12) + 1):
        r = cons.construction_report("m2", n)
        res.add(f"m2 construction at n={n} is M2-saturated", r.free and bool(r.saturated))
        res.add(
            f"m2 size at n={n} equals 3n-2",
            r.actual_size == 3 * n - 2,
            f"actual {r.actual_size}, claimed {3 * n - 2}",
            warn_only=True,
        )
    return res


def suite_structure(nmax: int = 8, seed: int = 0, **_) -> SuiteResult:
    res = SuiteResult("structure")
    for n in range(5, min(nmax, 10) + 1):
        ok, data = r2_structure_check(n)
        res.add(f"r=2 saturated graphs at n={n}: n edges, cycle plus leaves", ok, data=data)
    for n in range(6, nmax + 1):
        rep = verify_structure_theorem(n, 3, trials=50, seed=seed, enumerate_tuples=n <= 8, properties=False)
        res.add(f"r=3 structure at n={n}", rep.ok, data=rep.to_dict())
    rep = verify_structure_theorem(8, 4, trials=20, seed=seed, enumerate_tuples=True, properties=False)
    res.add("r=4 structure at n=8", rep.ok, data=rep.to_dict())
    return res


def suite_lambda_rho(seed: int = 0, families: int = 200, **_) -> SuiteResult:
    res = SuiteResult("lambda-rho")
    from .engine import closure
    from .m1 import random_free_seed

    rng = random.Random(seed)
    M1 = Pattern("M1")
    failures = []
    for t in range(families):
        n = 7 + t % 4
        H = closure(random_free_seed(n, M1, rng), M1)
        failures += [f"n={n}: {f}" for f in check_saturated_family(H)]
    res.add(f"properties and round trip on {families} closures (n=7..10)", not failures, data={"failures": failures[:10]})
    for n in (7, 8):
        seen, fails = set(), []
        for C in r_valid_tuples(n, 3):
            H = build_H_of_C(n, 3, C)
            if H.edges in seen:
                continue
            seen.add(H.edges)
            fails += [f"{C}: {f}" for f in check_saturated_family(H)]
        res.add(f"properties and round trip on all H(C), n={n}", not fails, f"{len(seen)} families", {"failures": fails[:10]})
    return res


def suite_move_delta(seed: int = 0, instances: int = 200, **_) -> SuiteResult:
    res = SuiteResult("move-delta")
    bad, not_strict, strict_cases = [], [], 0
    for C, i, k, r in random_move_instances(instances, seed):
        md = move_delta(C, i, k, r)
        if not (md.consistent and md.gap_identity):
            bad.append(f"{C} i={i} k={k} r={r}")
        if C.n >= 3 * r - 4:
            strict_cases += 1
            if not min(md.sizes[-1], md.sizes[1]) < md.sizes[0]:
                not_strict.append(f"{C} i={i} k={k} r={r} sizes={md.sizes}")
    res.add(f"closed forms equal enumeration on {instances} instances", not bad, data={"failures": bad[:10]})
    res.add(
        "some shift strictly decreases |H(C)| when n >= 3r-4",
        not not_strict,
        f"{strict_cases} instances",
        {"failures": not_strict[:10]},
    )
    viol, total = [], 0
    for r in (3, 4):
        for n in range(2 * r, 31):
            for ell in admissible_lengths(n, r):
                total += 1
                a = count_H_of_C(n, r, consecutive_tuple(n, ell))
                b = count_H_of_C(n, r, consecutive_tuple(n, ell + 1))
                if not a < b:
                    viol.append((r, n, ell, a, b))
    res.add("shorter consecutive tuples give fewer edges (r=3,4, n<=30)", not viol, f"{total} cases", {"failures": viol[:10]})
    return res


def suite_appendix_bounds(seed: int = 0, samples: int = 1000, s3_nmax: int = 256, **_) -> SuiteResult:
    res = SuiteResult("appendix-bounds")
    rng = random.Random(seed)
    low, hyp_fail = [], 0
    for _ in range(samples):
        n = rng.randint(10, 20)
        H = random_weight_family(n, rng)
        if not satisfies_weight_hypothesis(H):
            hyp_fail += 1
            continue
        if sum(weight_profile(H).values()) != n or 5 * len(H) < 2 * n:
            low.append((n, len(H)))
    res.add(f"weight bound |H| >= 2n/5 on {samples} random families", not low and not hyp_fail, data={"failures": low[:10]})

    for n in range(7, 13):
        r = cons.construction_report("d1_chords", n)
        res.add(f"d1_chords n={n} saturated with size {cons.d1_size(n)}", r.ok and r.actual_size == cons.d1_size(n))
    for n in range(9, 31):
        r = cons.construction_report("d2_sum", n)
        res.add(f"d2_sum n={n} bands", r.ok, data={**r.checks, "size": r.actual_size, "seed": r.notes["seed_size"]})
        if r.warnings:
            res.add(f"d2_sum n={n} dangerous-pair accounting", False, "; ".join(r.warnings[:3]), warn_only=True)
    over = [n for n in range(3, s3_nmax + 1) if cons.s3_size(n) > cons.s3_log_bound(n)]
    rec = [n for n in range(3, s3_nmax + 1) if cons.s3_size(n) > cons.s3_recursion_bound(n)]
    res.add(f"s3_recursive f(n) <= 3n log2 n for n <= {s3_nmax}", not over, data={"violations": over[:10]})
    res.add(f"s3_recursive obeys the halving recursion for n <= {s3_nmax}", not rec, data={"violations": rec[:10]})
    from .engine import is_free

    seeds = [n for n in range(3, 41) if not is_free(cons.s3_seed(n), cons.S3)]
    res.add("s3 seed is S3-free for n <= 40", not seeds, data={"violations": seeds})
    return res


def suite_table1(nmax: int = 8, budget=None, threads=None, **_) -> SuiteResult:
    res = SuiteResult("table1")
    for F in ALL_R3:
        for n in range(6, nmax + 1):
            rep = _sat(res, n, F, budget, threads)
            lo, hi = asymptotic_bounds(F, n)
            size = construction_size(F, n)
            res.rows.append(
                {
                    "pattern": str(F),
                    "n": n,
                    "sat_exact": rep.value if rep.exhaustive else None,
                    "paper_lower": round(lo, 3),
                    "paper_upper": round(hi, 3),
                    "construction_size": size,
                }
            )
            if size is not None:
                res.add(f"sat(n={n}, {F}) <= construction size", rep.value <= size)
    return res


_RUNNERS = {
    "thm11": suite_thm11,
    "thm12-lower": suite_thm12_lower,
    "thm12-upper": suite_thm12_upper,
    "structure": suite_structure,
    "lambda-rho": suite_lambda_rho,
    "move-delta": suite_move_delta,
    "appendix-bounds": suite_appendix_bounds,
    "table1": suite_table1,
}


def run_suite(suite: str, **options) -> SuiteResult:
    if suite not in _RUNNERS:
        raise KeyError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    options = {k: v for k, v in options.items() if v is not None}
    return _RUNNERS[suite](**options)

