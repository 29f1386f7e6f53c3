"""Named invariant suites, shared by ``tiltchar verify`` and the test suite.

Each check returns a :class:`CheckResult`; a failing check carries the first
counterexample found.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from .charring import (
    Character,
    NablaExpansion,
    chi,
    dual_character,
    multiply,
    nabla_expand,
    nabla_expand_triangular,
    synthesize,
    tensor_nabla,
    weyl_dimension,
)
from .form import bracket, bracket_via_expansion
from .modchar import (
    Undetermined,
    composition_factors,
    jantzen_sum,
    new_tables,
    require_simple_character,
)
from .rootsys import (
    build_root_system,
    digit_decompose,
    dual_weight,
    in_gamma_r,
    iter_dominant,
    iter_restricted,
    w_r_map,
)
from .stnabla import (
    StNablaContext,
    counterexample_suite,
    donkin_criterion,
    hom_dim_gr,
    reciprocity_check,
    s_direct,
    s_numbers,
    s_recursive,
    s_upper_bound,
    steinberg_good_filtration,
    t_inductive,
    t_lower_bound_check,
    t_numbers,
)


@dataclass
class CheckResult:
    name: str
    ok: bool
    count: int = 0
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        msg = f"{tag} {self.name}: {self.count} checks in {self.seconds:.2f}s"
        return msg + (f" -- {self.detail}" if self.detail else "")


class _Fail(Exception):
    pass


def _run(name: str, body: Callable) -> CheckResult:
    t0 = time.perf_counter()
    counter = [0]

    def expect(cond, what):
        counter[0] += 1
        if not cond:
            raise _Fail(what() if callable(what) else what)

    try:
        detail = body(expect) or ""
        ok = True
    except _Fail as exc:
        ok, detail = False, f"counterexample: {exc}"
    except Undetermined as exc:
        ok, detail = False, f"undetermined: {exc}"
    return CheckResult(name, ok, counter[0], detail, time.perf_counter() - t0)


# -- random characters ------------------------------------------------------------------

def random_character(rng: random.Random, rs, max_coord: int, terms: int = 3,
                     virtual: bool = True) -> Character:
    out = Character(rs, {})
    for _ in range(rng.randint(1, terms)):
        lam = tuple(rng.randint(0, max_coord) for _ in range(rs.rank))
        c = rng.choice([-2, -1, 1, 2, 3]) if virtual else rng.randint(1, 2)
        out = out + chi(rs, lam) * c
    return out


def _corpus(seed: int, pairs: int):
    rng = random.Random(seed)
    a1, a2 = build_root_system("A", 1), build_root_system("A", 2)
    out = []
    for i in range(pairs):
        rs = a1 if i % 2 == 0 else a2
        cap = 12
        m = random_character(rng, rs, cap)
        n = random_character(rng, rs, cap)
        # the tensor factor stays small so the adjunction products stay cheap
        v = random_character(rng, rs, 4 if rs.rank == 1 else 2, terms=2)
        lam = tuple(rng.randint(0, cap) for _ in range(rs.rank))
        mu = tuple(rng.randint(0, cap) for _ in range(rs.rank))
        out.append((rs, m, n, v, lam, mu))
    return out


# -- criterion-level checks -------------------------------------------------------------

def check_form_axioms(pairs: int = 200, seed: int = 7) -> CheckResult:
    def body(expect):
        for rs, m, n, v, lam, mu in _corpus(seed, pairs):
            b = bracket(m, n)
            expect(b == bracket(n, m), lambda: f"symmetry fails for {m!r}, {n!r}")
            expect(bracket(multiply(m, v), n) == bracket(m, multiply(n, dual_character(v))),
                   lambda: f"adjunction fails for {m!r}, {n!r}, {v!r}")
            expect(b == bracket(dual_character(m), dual_character(n)),
                   lambda: f"duality fails for {m!r}, {n!r}")
            expect(bracket(chi(rs, lam), chi(rs, mu)) == (1 if lam == mu else 0),
                   lambda: f"orthonormality fails at {lam}, {mu}")
            expect(bracket(chi(rs, lam), chi(rs, lam)) == 1,
                   lambda: f"norm of chi{lam} is not 1")
    return _run("form axioms", body)


def check_nabla_roundtrip(pairs: int = 200, seed: int = 7) -> CheckResult:
    def body(expect):
        for rs, m, n, v, lam, mu in _corpus(seed, pairs):
            e = nabla_expand(m)
            expect(synthesize(e) == m, lambda: f"synthesis does not invert expansion of {m!r}")
            expect(nabla_expand(synthesize(e)) == e, lambda: f"expansion not stable for {e!r}")
            expect(e == nabla_expand_triangular(m),
                   lambda: f"alternating-sum and triangular expansions differ for {m!r}")
            expect(bracket(m, n) == bracket_via_expansion(m, n),
                   lambda: f"bracket paths differ for {m!r}, {n!r}")
    return _run("nabla round trip", body)


def check_w_r(cases=(("A", 1, (2, 3, 5), 2), ("A", 2, (2, 3, 5), 1))) -> CheckResult:
    def body(expect):
        for t, n, primes, r in cases:
            rs = build_root_system(t, n)
            for p in primes:
                xr = list(iter_restricted(rs, p, r))
                image = set()
                for lam in xr:
                    w = w_r_map(rs, lam, p, r)
                    image.add(w)
                    expect(w_r_map(rs, w, p, r) == lam, lambda: f"w_r^2 != id at {lam}, p={p}")
                    for u in range(r):
                        l0, l1 = digit_decompose(rs, lam, p, u) if u else (rs.zero, lam)
                        want = tuple(a + p ** u * b for a, b in
                                     zip(w_r_map(rs, l0, p, u) if u else rs.zero,
                                         w_r_map(rs, l1, p, r - u)))
                        expect(w == want, lambda: f"digit additivity fails at {lam}, u={u}, p={p}")
                    digits, rest = [], lam
                    for _ in range(r):
                        d, rest = digit_decompose(rs, rest, p, 1)
                        digits.append(d)
                    want = rs.zero
                    for i, d in enumerate(digits):
                        want = tuple(a + p ** i * b for a, b in zip(want, w_r_map(rs, d, p, 1)))
                    expect(w == want, lambda: f"base-p digit formula fails at {lam}, p={p}")
                expect(image == set(xr), lambda: f"w_r(X_r) != X_r for {t}{n}, p={p}")
                # w_r is an involution on all of X_+, not only on X_r
                for lam in iter_dominant(rs, (2 * p ** r,) * n):
                    expect(w_r_map(rs, w_r_map(rs, lam, p, r), p, r) == lam,
                           lambda: f"w_r^2 != id at {lam}, p={p}")
    return _run("w_r properties", body)


def lucas_simple_weights(m: int, p: int) -> list:
    """Weights of L(m) for SL_2: m - 2j with binom(m, j) nonzero mod p."""
    out = []
    for j in range(m + 1):
        a, b, ok = m, j, True
        while a or b:
            if b % p > a % p:
                ok = False
                break
            a, b = a // p, b // p
        if ok:
            out.append(m - 2 * j)
    return out


def check_jsf_rank_one(primes=(2, 3, 5), top: int = 30) -> CheckResult:
    def body(expect):
        rs = build_root_system("A", 1)
        for p in primes:
            table, _ = new_tables(rs, p)
            for m in range(top + 1):
                lm = require_simple_character(table, (m,))
                lucas = {(w,): 1 for w in lucas_simple_weights(m, p)}
                expect(dict(lm.items()) == lucas,
                       lambda: f"L({m}) differs from the binomial oracle for p={p}")
                j = jantzen_sum(rs, (m,), p)
                jf = composition_factors(table, j)
                series = composition_factors(table, NablaExpansion.basis(rs, (m,)))
                below = {k: v for k, v in series.items() if k != (m,)}
                expect(all(v >= 0 for v in jf.values()),
                       lambda: f"JSF({m}) has a negative simple coefficient for p={p}")
                expect(set(jf) == set(below),
                       lambda: f"JSF({m}) support {sorted(jf)} != factors {sorted(below)}, p={p}")
                expect(all(jf[k] >= v for k, v in below.items()),
                       lambda: f"JSF({m}) below composition multiplicities, p={p}")
                expect((not j) == (not below), lambda: f"JSF({m}) zero-ness wrong, p={p}")
            if p > 2:
                edge = 2 * p - 2
                expect(composition_factors(table, NablaExpansion.basis(rs, (edge,)))
                       == {(edge,): 1, (0,): 1},
                       lambda: f"Delta({edge}) != L({edge}) + L(0) for p={p}")
    return _run("JSF vs rank-one oracle", body)


def check_homdim_closed_form(cases=None) -> CheckResult:
    if cases is None:
        cases = [("A", 1, p, r, (3 * p ** r,)) for p in (3, 5) for r in (1, 2)]
        cases.append(("A", 2, 3, 1, (8, 8)))

    def body(expect):
        for t, n, p, r, bound in cases:
            rs = build_root_system(t, n)
            ctx = StNablaContext(rs, p, r)
            q = p ** r
            for nu in iter_dominant(rs, bound):
                got = hom_dim_gr(ctx, rs.zero, chi(rs, nu))
                diff = [x - (q - 1) for x in nu]
                if all(x >= 0 and x % q == 0 for x in diff):
                    want = weyl_dimension(rs, tuple(x // q for x in diff))
                else:
                    want = 0
                expect(got == want, lambda: f"{t}{n} p={p} r={r} nu={nu}: {got} != {want}")
    return _run("G_r Hom closed form", body)


def check_s_t(primes=(3, 5)) -> CheckResult:
    def body(expect):
        rs = build_root_system("A", 1)
        for p in primes:
            ctx = StNablaContext(rs, p)
            for lam in iter_dominant(rs, (p * (p - 1) - 1,)):
                if not in_gamma_r(rs, lam, p, 1):
                    continue
                t = t_numbers(ctx, lam)
                expect(t.status == "complete", lambda: f"t-decomposition partial at {lam}")
                lhs = NablaExpansion(rs, {})
                for nu, n in t.entries.items():
                    lhs = lhs + ctx.tilting(nu) * n
                rhs = tensor_nabla(ctx.tilting(ctx.steinberg), chi(rs, lam))
                expect(lhs == rhs, lambda: f"t-decomposition does not conserve character at {lam}")
                alt = t_numbers(ctx, lam, lam_char=dual_character(chi(rs, dual_weight(rs, lam))))
                expect(alt == t, lambda: f"nabla vs Delta characters give different t at {lam}")
                star = t_numbers(ctx, dual_weight(rs, lam))
                expect(all(star[dual_weight(rs, k)] == v for k, v in t.entries.items()),
                       lambda: f"t duality fails at {lam}")
                s = s_numbers(ctx, lam)
                s_star = s_numbers(ctx, dual_weight(rs, lam))
                memo = {}
                for nu in iter_dominant(rs, (lam[0] + 3 * p,)):
                    sv = s[nu]
                    expect(sv == s_star[dual_weight(rs, nu)], lambda: f"s duality fails {lam},{nu}")
                    expect(sv >= t[tuple(a + b for a, b in zip(ctx.steinberg,
                                                               w_r_map(rs, nu, p, 1)))],
                           lambda: f"s >= t fails at {lam}, {nu}")
                    up = s_upper_bound(ctx, lam, None, nu)
                    direct = s_direct(ctx, lam, None, nu)
                    expect(sv <= up, lambda: f"upper bound fails at lam={lam}, nu={nu}")
                    if sv or steinberg_good_filtration(ctx, nu)[0]:
                        rec = s_recursive(ctx, lam, None, nu, memo)
                        expect(sv == direct == rec,
                               lambda: f"p={p} lam={lam} nu={nu}: s={sv} direct={direct} rec={rec}")
                        expect(direct <= up, lambda: f"direct > upper at {lam}, {nu}")
    return _run("s/t consistency", body)


def check_inductive(primes=(3, 5), r: int = 2, u: int = 1) -> CheckResult:
    def body(expect):
        rs = build_root_system("A", 1)
        applicable = 0
        for p in primes:
            ctx = StNablaContext(rs, p, r)
            q = p ** r
            for lam in iter_dominant(rs, (q * (p - 1) - 1,)):
                t = t_numbers(ctx, lam)
                for nu in iter_dominant(rs, (2 * (q - 1) + lam[0],)):
                    v = t_inductive(ctx, lam, u, nu)
                    if v is not None:
                        applicable += 1
                        expect(v == t[nu], lambda: f"p={p} lam={lam} nu={nu}: {v} != {t[nu]}")
                    chain = t_lower_bound_check(ctx, lam, u, nu)
                    expect(chain is not False, lambda: f"inequality chain fails p={p} {lam} {nu}")
        return f"{applicable} certified instances of the product formula"
    return _run("inductive formulas", body)


def check_reciprocity(p: int = 3, sigma_bound: int = 3, mu_bound: int = 40) -> CheckResult:
    def body(expect):
        rs = build_root_system("A", 1)
        ctx = StNablaContext(rs, p)
        certified = 0
        for lam in iter_restricted(rs, p, 1):
            for sigma in iter_dominant(rs, (sigma_bound,)):
                for mu in iter_dominant(rs, (mu_bound,)):
                    res = reciprocity_check(ctx, lam, sigma, mu)
                    if res.hypotheses_hold:
                        certified += 1
                        expect(res.lhs == res.rhs, lambda: f"{lam},{sigma},{mu}: {res.to_json()}")
        for q in (3, 5):
            rep = counterexample_suite(StNablaContext(rs, q))
            item = rep["checks"][0]
            expect(item.get("value") == -1, lambda: f"p={q}: form at bad weight {item}")
        return f"{certified} certified reciprocity instances"
    return _run("reciprocity and the -1 value", body)


def check_donkin(primes=(2, 3, 5)) -> CheckResult:
    def body(expect):
        rs = build_root_system("A", 1)
        for p in primes:
            ctx = StNablaContext(rs, p)
            for lam in iter_restricted(rs, p, 1):
                v = donkin_criterion(ctx, lam, (4 * p,))
                expect(v.verdict == "consistent-with-DTC", lambda: f"p={p} {lam}: {v.to_json()}")
    return _run("Donkin criterion", body)


def check_sl5() -> CheckResult:
    def body(expect):
        rs = build_root_system("A", 4)
        rep = counterexample_suite(StNablaContext(rs, 5))
        by_name = {c["name"]: c for c in rep["checks"]}
        jsf = by_name["Delta(1,0,0,1) = L(1,0,0,1) + L(0)"]
        expect(jsf.get("ok") is True, lambda: f"JSF check: {jsf}")
        mult = by_name["[nabla(2,3,3,2) : L(5,0,0,5)]"]
        expect(mult.get("ok") is True,
               lambda: f"multiplicity check: {mult} (blocked at {mult.get('blocked')})")
        blocked = [c for c in rep["checks"] if c.get("status") == "undetermined"]
        return "; ".join(f"{c['name']} undetermined, blocked at {c['blocked']}" for c in blocked)
    return _run("SL_5 counterexample", body)


SUITES = {
    "a1-core": lambda: [
        check_w_r(cases=(("A", 1, (2, 3, 5), 2),)),
        check_jsf_rank_one(),
        check_homdim_closed_form([("A", 1, p, 1, (3 * p,)) for p in (3, 5)]),
        check_s_t(),
        check_inductive(primes=(3,)),
        check_reciprocity(sigma_bound=2, mu_bound=24),
        check_donkin(),
    ],
    "form-axioms": lambda: [check_form_axioms(), check_nabla_roundtrip()],
    "sl5-counterexample": lambda: [check_sl5()],
}


def run_suite(name: str) -> list:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name]()
