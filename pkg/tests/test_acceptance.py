"""Acceptance gate: one test per criterion, each with a wall-clock budget.

Every test prints a single PASS/FAIL line (visible even under output capture).
Run standalone with ``python3 tests/test_acceptance.py`` for just the lines.
"""

import time

from tiltchar import suites

CRITERIA = [
    (1, "form axioms", 10, lambda: suites.check_form_axioms(pairs=200)),
    (2, "nabla round trip", 10, lambda: suites.check_nabla_roundtrip(pairs=200)),
    (3, "w_r suite", 5, suites.check_w_r),
    (4, "JSF vs rank-one oracle", 5, suites.check_jsf_rank_one),
    (5, "G_r Hom closed form", 60, suites.check_homdim_closed_form),
    (6, "s/t consistency", 30, suites.check_s_t),
    (7, "inductive formulas", 60, suites.check_inductive),
    (8, "reciprocity and -1 anomaly", 30, suites.check_reciprocity),
    (9, "Donkin criterion", 30, suites.check_donkin),
    (10, "SL_5 counterexample", 15 * 60, suites.check_sl5),
]


def _evaluate(number):
    _, name, limit, run = next(c for c in CRITERIA if c[0] == number)
    t0 = time.perf_counter()
    res = run()
    elapsed = time.perf_counter() - t0
    ok = res.ok and elapsed < limit
    line = (f"CRITERION {number:2d} {'PASS' if ok else 'FAIL'} {name}: "
            f"{res.count} checks, {elapsed:.2f}s (limit {limit}s)")
    if res.detail:
        line += f" -- {res.detail}"
    return ok, res, elapsed, limit, line


def _gate(number, capsys):
    ok, res, elapsed, limit, line = _evaluate(number)
    with capsys.disabled():
        print("\n" + line)
    assert res.ok, res.detail
    assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"


def test_criterion_01_form_axioms(capsys):
    _gate(1, capsys)


def test_criterion_02_nabla_round_trip(capsys):
    _gate(2, capsys)


def test_criterion_03_w_r(capsys):
    _gate(3, capsys)


def test_criterion_04_jsf_rank_one(capsys):
    _gate(4, capsys)


def test_criterion_05_homdim_closed_form(capsys):
    _gate(5, capsys)


def test_criterion_06_s_t_consistency(capsys):
    _gate(6, capsys)


def test_criterion_07_inductive(capsys):
    _gate(7, capsys)


def test_criterion_08_reciprocity(capsys):
    _gate(8, capsys)


def test_criterion_09_donkin(capsys):
    _gate(9, capsys)


def test_criterion_10_sl5(capsys):
    _gate(10, capsys)


if __name__ == "__main__":
    failed = 0
    for number, *_ in CRITERIA:
        ok, *_, line = _evaluate(number)
        failed += not ok
        print(line)
    raise SystemExit(1 if failed else 0)
