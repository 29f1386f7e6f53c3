"""The character ring Z[X]^W.

A :class:`Character` keeps the full (orbit-expanded) weight multiplicity
function; a :class:`NablaExpansion` keeps coefficients in the basis of
costandard characters ``chi(lam)``.  Both are immutable by convention.
"""

from __future__ import annotations

import json
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .rootsys import (
    RootSystem,
    add,
    dominance_leq,
    dominant_weights_below,
    dot_normalize,
    dual_weight,
    is_dominant,
    weyl_orbit,
)


def weight_key(w) -> str:
    return "[" + ",".join(str(int(c)) for c in w) + "]"


def parse_weight_key(s: str) -> tuple:
    s = s.strip()
    if s.startswith("[") and s.endswith("]"):
        s = s[1:-1]
    return tuple(int(x) for x in s.split(",") if x.strip() != "")


class Character:
    """A finitely supported W-invariant function X -> Z."""

    __slots__ = ("rs", "mults", "virtual_ok", "_hash")

    def __init__(self, rs: RootSystem, mults: Mapping | None = None, virtual_ok: bool = True):
        self.rs = rs
        self.mults = {tuple(k): int(v) for k, v in (mults or {}).items() if v}
        self.virtual_ok = virtual_ok
        if not virtual_ok and any(v < 0 for v in self.mults.values()):
            raise ValueError("negative multiplicity in a non-virtual character")
        self._hash = None

    # mapping-ish access
    def __getitem__(self, w) -> int:
        return self.mults.get(tuple(w), 0)

    def __iter__(self):
        return iter(self.mults)

    def __len__(self):
        return len(self.mults)

    def items(self):
        return self.mults.items()

    def __bool__(self):
        return bool(self.mults)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.mults
        return isinstance(other, Character) and self.rs == other.rs and self.mults == other.mults

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rs, frozenset(self.mults.items())))
        return self._hash

    def __repr__(self):
        dom = {k: v for k, v in sorted(self.mults.items()) if is_dominant(k)}
        return f"Character({self.rs!r}, dominant part {dom})"

    def _check(self, other):
        if not isinstance(other, Character):
            return NotImplemented
        if other.rs != self.rs:
            raise ValueError(f"mismatched root systems {self.rs} and {other.rs}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out = dict(self.mults)
        for k, v in other.mults.items():
            out[k] = out.get(k, 0) + v
        return Character(self.rs, out, self.virtual_ok or other.virtual_ok)

    def __neg__(self):
        return Character(self.rs, {k: -v for k, v in self.mults.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out = dict(self.mults)
        for k, v in other.mults.items():
            out[k] = out.get(k, 0) - v
        return Character(self.rs, out, True)

    def __mul__(self, other):
        if isinstance(other, int):
            return Character(self.rs, {k: other * v for k, v in self.mults.items()},
                             self.virtual_ok or other < 0)
        return multiply(self, other)

    __rmul__ = __mul__

    def dim(self) -> int:
        return sum(self.mults.values())

    def dominant_support(self) -> list:
        return [k for k in self.mults if is_dominant(k)]

    def twist(self, p: int, r: int = 1) -> "Character":
        return frobenius_twist(self, p, r)

    def dual(self) -> "Character":
        return dual_character(self)

    def is_w_invariant(self) -> bool:
        rs = self.rs
        for k, v in self.mults.items():
            for i in range(rs.rank):
                if self.mults.get(rs.simple_reflection(k, i), 0) != v:
                    return False
        return True

    def to_json(self) -> dict:
        return {weight_key(k): str(v) for k, v in sorted(self.mults.items())}

    @classmethod
    def from_json(cls, rs, data: Mapping) -> "Character":
        return cls(rs, {parse_weight_key(k): int(v) for k, v in data.items()})


class NablaExpansion:
    """Coefficients a_lam in sum_lam a_lam [nabla(lam)], lam dominant."""

    __slots__ = ("rs", "coeffs")

    def __init__(self, rs: RootSystem, coeffs: Mapping | None = None):
        self.rs = rs
        self.coeffs = {tuple(k): int(v) for k, v in (coeffs or {}).items() if v}
        for k in self.coeffs:
            if not is_dominant(k):
                raise ValueError(f"non-dominant weight {k} in a nabla expansion")

    @classmethod
    def basis(cls, rs, lam) -> "NablaExpansion":
        return cls(rs, {tuple(lam): 1})

    def __getitem__(self, w) -> int:
        return self.coeffs.get(tuple(w), 0)

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def items(self):
        return self.coeffs.items()

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        if isinstance(other, Mapping):
            return self.coeffs == {tuple(k): v for k, v in other.items() if v}
        return (isinstance(other, NablaExpansion) and self.rs == other.rs
                and self.coeffs == other.coeffs)

    def __repr__(self):
        return f"NablaExpansion({dict(sorted(self.coeffs.items()))})"

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return NablaExpansion(self.rs, out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) - v
        return NablaExpansion(self.rs, out)

    def __neg__(self):
        return NablaExpansion(self.rs, {k: -v for k, v in self.coeffs.items()})

    def __mul__(self, k: int):
        return NablaExpansion(self.rs, {w: k * v for w, v in self.coeffs.items()})

    __rmul__ = __mul__

    def is_nonnegative(self) -> bool:
        return all(v > 0 for v in self.coeffs.values())

    def top(self):
        """A dominance-maximal weight of the support (largest height, then lex)."""
        rs = self.rs
        return max(self.coeffs, key=lambda w: (rs.height(w), w))

    def dual(self) -> "NablaExpansion":
        return NablaExpansion(self.rs, {dual_weight(self.rs, k): v for k, v in self.coeffs.items()})

    def dim(self) -> int:
        return sum(v * weyl_dimension(self.rs, k) for k, v in self.coeffs.items())

    def to_character(self) -> Character:
        return synthesize(self)

    def to_json(self) -> dict:
        return {weight_key(k): str(v) for k, v in sorted(self.coeffs.items())}

    @classmethod
    def from_json(cls, rs, data: Mapping) -> "NablaExpansion":
        return cls(rs, {parse_weight_key(k): int(v) for k, v in data.items()})


# -- Weyl characters --------------------------------------------------------------

def weyl_dimension(rs: RootSystem, lam) -> int:
    num = Fraction(1)
    for a in rs.positive_roots:
        num *= Fraction(a.pair(lam) + sum(a.coroot), sum(a.coroot))
    assert num.denominator == 1
    return int(num)


@lru_cache(maxsize=2048)
def dominant_multiplicities(rs: RootSystem, lam) -> dict:
    """Freudenthal's recursion: multiplicities of the dominant weights of chi(lam)."""
    lam = tuple(lam)
    rho = rs.rho
    lr = add(lam, rho)
    top = rs.inner(lr, lr)
    mult = {lam: 1}
    roots = rs.positive_roots
    dom = rs.dominant_representative
    for mu in dominant_weights_below(rs, lam)[1:]:
        total = 0
        for a in roots:
            w = a.weight
            nu = add(mu, w)
            # alpha-strings of weights are unbroken, so stop at the first gap;
            # dom(nu) is higher than mu and therefore already known
            while True:
                m = mult.get(dom(nu), 0)
                if not m:
                    break
                total += rs.inner(nu, w) * m
                nu = add(nu, w)
        mr = add(mu, rho)
        den = top - rs.inner(mr, mr)
        value, rem = divmod(2 * total, den)
        assert rem == 0, (lam, mu)
        if value:
            mult[mu] = value
    return mult


@lru_cache(maxsize=1024)
def chi(rs: RootSystem, lam) -> Character:
    """The Weyl character [nabla(lam)] for dominant lam."""
    lam = tuple(lam)
    if not is_dominant(lam):
        raise ValueError(f"chi needs a dominant weight, got {lam}")
    out = {}
    for mu, m in dominant_multiplicities(rs, lam).items():
        for w in weyl_orbit(rs, mu):
            out[w] = m
    return Character(rs, out, virtual_ok=False)


def chi_virtual(rs: RootSystem, lam) -> Character:
    """Weyl character at an arbitrary weight, normalised through the dot action."""
    res = dot_normalize(rs, lam)
    if res is None:
        return Character(rs, {})
    sign, dom = res
    c = chi(rs, dom)
    return c if sign > 0 else -c


def dim(a: Character) -> int:
    return a.dim()


# -- ring operations --------------------------------------------------------------

def multiply(a: Character, b: Character) -> Character:
    if a.rs != b.rs:
        raise ValueError(f"mismatched root systems {a.rs} and {b.rs}")
    if len(a) > len(b):
        a, b = b, a
    out: dict = defaultdict(int)
    bi = list(b.mults.items())
    for x, u in a.mults.items():
        for y, v in bi:
            out[tuple(s + t for s, t in zip(x, y))] += u * v
    return Character(a.rs, out, a.virtual_ok or b.virtual_ok)


def frobenius_twist(a: Character, p: int, r: int = 1) -> Character:
    if r < 1:
        raise ValueError("Frobenius twist needs r >= 1")
    q = p**r
    return Character(a.rs, {tuple(q * c for c in k): v for k, v in a.mults.items()},
                     a.virtual_ok)


def dual_character(a: Character) -> Character:
    return Character(a.rs, {tuple(-c for c in k): v for k, v in a.mults.items()}, a.virtual_ok)


def unit(rs: RootSystem) -> Character:
    return Character(rs, {rs.zero: 1}, virtual_ok=False)


def zero(rs: RootSystem) -> Character:
    return Character(rs, {})


def linear_combination(rs: RootSystem, terms: Iterable) -> Character:
    """sum of coefficient * character over (coefficient, character) pairs."""
    out: dict = defaultdict(int)
    for c, ch in terms:
        if c:
            for k, v in ch.mults.items():
                out[k] += c * v
    return Character(rs, out)


def synthesize(e: NablaExpansion) -> Character:
    return linear_combination(e.rs, ((v, chi(e.rs, k)) for k, v in e.items()))


# -- nabla-basis extraction ----------------------------------------------------------

def _maximal_dominant(rs, weights) -> list:
    dom = sorted(set(weights), key=lambda w: -rs.height(w))
    maxi = []
    for w in dom:
        if not any(dominance_leq(rs, w, m) for m in maxi):
            maxi.append(w)
    return maxi


def nabla_candidates(rs: RootSystem, a: Character) -> set:
    """Dominant weights that can carry a nonzero nabla coefficient of a."""
    cands = set()
    for m in _maximal_dominant(rs, a.dominant_support()):
        cands.update(dominant_weights_below(rs, m))
    return cands


def nabla_coefficient(a: Character, lam) -> int:
    """a_lam = sum_w (-1)^l(w) mults(lam + rho - w rho)."""
    lam = tuple(lam)
    get = a.mults.get
    return sum(sign * get(tuple(x + y for x, y in zip(lam, shift)), 0)
               for shift, sign in a.rs.rho_shifts)


def nabla_expand(a: Character) -> NablaExpansion:
    rs = a.rs
    return NablaExpansion(rs, {lam: nabla_coefficient(a, lam) for lam in nabla_candidates(rs, a)})


def nabla_expand_triangular(a: Character) -> NablaExpansion:
    """Reference path: peel off chi of a highest dominant weight until nothing is left."""
    rs = a.rs
    residual = dict(a.mults)
    out = {}
    while residual:
        top = max((k for k in residual if is_dominant(k)), key=lambda w: (rs.height(w), w))
        c = residual[top]
        out[top] = c
        for k, v in chi(rs, top).mults.items():
            nv = residual.get(k, 0) - c * v
            if nv:
                residual[k] = nv
            else:
                residual.pop(k, None)
    return NablaExpansion(rs, out)


def tensor_nabla(e: NablaExpansion, b: Character) -> NablaExpansion:
    """nabla expansion of (sum a_lam chi(lam)) * b, by Brauer-Klimyk.

    chi(lam) * b = sum over weights xi of b of b(xi) chi_virtual(lam + xi).
    """
    rs = e.rs
    out: dict = defaultdict(int)
    bi = list(b.mults.items())
    for lam, c in e.coeffs.items():
        for xi, m in bi:
            res = dot_normalize(rs, tuple(x + y for x, y in zip(lam, xi)))
            if res is not None:
                out[res[1]] += res[0] * c * m
    return NablaExpansion(rs, out)


def expansion_of(x) -> NablaExpansion:
    return x if isinstance(x, NablaExpansion) else nabla_expand(x)


def character_of(x) -> Character:
    return x if isinstance(x, Character) else synthesize(x)


def dumps(x) -> str:
    return json.dumps(x.to_json(), sort_keys=True)
