"""Root systems, weights and Weyl groups.

Weights are tuples of integers in fundamental-weight coordinates, so for
``lam = (c_1, ..., c_n)`` we have ``<lam, alpha_i^vee> = c_i``.  The Cartan
matrix is stored with ``C[i][j] = <alpha_j, alpha_i^vee>``, which makes the
simple root ``alpha_j`` the j-th column of ``C``.
"""

from __future__ import annotations

import threading
from collections import deque
from fractions import Fraction
from functools import lru_cache
from math import factorial, sqrt
from typing import Iterator, Optional, Sequence

Weight = tuple  # tuple[int, ...]

SUPPORTED_TYPES = "ABCDEFG"


class UnsupportedType(ValueError):
    pass


def cartan_matrix(cartan_type: str, rank: int) -> list[list[int]]:
    t = cartan_type.upper()
    n = rank
    ok = {
        "A": n >= 1,
        "B": n >= 2,
        "C": n >= 2,
        "D": n >= 3,
        "E": n == 6,
        "F": n == 4,
        "G": n == 2,
    }
    if t not in ok or not ok[t]:
        raise UnsupportedType(f"unsupported Cartan type {cartan_type}{rank}")
    C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j, cij=-1, cji=-1):
        C[i][j] = cij
        C[j][i] = cji

    if t in "ABC":
        for i in range(n - 1):
            link(i, i + 1)
        if t == "B":
            # alpha_n short
            C[n - 1][n - 2] = -2
        elif t == "C":
            # alpha_n long
            C[n - 2][n - 1] = -2
    elif t == "D":
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif t == "E":
        # Bourbaki numbering 1-3-4-5-6 with 2 attached to 4
        for i, j in [(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)]:
            link(i, j)
    elif t == "F":
        link(0, 1)
        link(2, 3)
        link(1, 2, cij=-1, cji=-2)
    elif t == "G":
        # alpha_1 short, alpha_2 long
        link(0, 1, cij=-3, cji=-1)
    return C


def _weyl_order(t: str, n: int) -> int:
    return {
        "A": factorial(n + 1),
        "B": 2**n * factorial(n),
        "C": 2**n * factorial(n),
        "D": 2 ** (n - 1) * factorial(n),
        "E": 51840,
        "F": 1152,
        "G": 12,
    }[t]


def _inverse(C: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(C)
    M = [[Fraction(C[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return [row[n:] for row in M]


def _symmetrizer(C) -> list[int]:
    """Integers d_i with d_i C[i][j] = d_j C[j][i]; d_i = (alpha_i, alpha_i)/2."""
    n = len(C)
    d: list[Optional[Fraction]] = [None] * n
    d[0] = Fraction(1)
    todo = [0]
    while todo:
        i = todo.pop()
        for j in range(n):
            if C[i][j] != 0 and d[j] is None:
                d[j] = d[i] * C[i][j] / C[j][i]
                todo.append(j)
    den = 1
    for x in d:
        den = den * x.denominator // _gcd(den, x.denominator)
    ints = [int(x * den) for x in d]
    g = 0
    for x in ints:
        g = _gcd(g, x)
    return [x // g for x in ints]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


class PositiveRoot:
    __slots__ = ("index", "weight", "root_coords", "coroot", "height", "norm2")

    def __init__(self, index, weight, root_coords, coroot, norm2):
        self.index = index
        self.weight = weight
        self.root_coords = root_coords
        self.coroot = coroot
        self.height = sum(root_coords)
        self.norm2 = norm2

    def pair(self, lam) -> int:
        """<lam, alpha^vee>."""
        return sum(k * c for k, c in zip(self.coroot, lam))

    def __repr__(self):
        return f"PositiveRoot({self.weight}, root_coords={self.root_coords})"


class RootSystem:
    """Immutable Cartan and Weyl data for one (type, rank).

    Build through :func:`build_root_system`, which caches instances.
    """

    def __init__(self, cartan_type: str, rank: int):
        t = cartan_type.upper()
        self.cartan_type = t
        self.rank = rank
        C = cartan_matrix(t, rank)
        self.cartan_matrix = tuple(tuple(r) for r in C)
        self._cinv = _inverse(C)
        self.symmetrizer = tuple(_symmetrizer(C))
        n = rank
        # (lam, mu) = c_lam . D . C^{-1} . c_mu, scaled to integers
        G = [[self.symmetrizer[i] * self._cinv[i][j] for j in range(n)] for i in range(n)]
        den = 1
        for row in G:
            for x in row:
                den = den * x.denominator // _gcd(den, x.denominator)
        self._gram = tuple(tuple(int(x * den) for x in row) for row in G)
        self._gram_scale = den
        self.simple_roots = tuple(tuple(C[i][j] for i in range(n)) for j in range(n))
        self._height_vec = tuple(sum(self._cinv[i][j] for i in range(n)) for j in range(n))

        self.positive_roots = self._make_positive_roots()
        self.rho = (1,) * n
        short = min(a.norm2 for a in self.positive_roots)
        self.alpha0 = max((a for a in self.positive_roots if a.norm2 == short),
                          key=lambda a: a.height)
        self.coxeter_number = self.alpha0.pair(self.rho) + 1
        self._lock = threading.Lock()
        self._weyl = None
        self._rho_shifts = None
        self._orbit_cache: dict = {}

    # -- construction helpers -------------------------------------------------
    def _make_positive_roots(self) -> tuple:
        n = self.rank
        d = self.symmetrizer
        C = self.cartan_matrix
        seen = set()
        queue = deque(self.simple_roots)
        roots = []
        while queue:
            a = queue.popleft()
            if a in seen:
                continue
            seen.add(a)
            roots.append(a)
            for i in range(n):
                b = self.simple_reflection(a, i)
                if b not in seen:
                    queue.append(b)
        out = []
        for a in roots:
            m = self.root_coordinates(a)
            if m is None or any(x < 0 for x in m):
                continue
            norm2 = sum(m[i] * m[j] * d[i] * C[i][j] for i in range(n) for j in range(n))
            da = Fraction(norm2, 2)
            coroot = []
            for i in range(n):
                k = m[i] * d[i] / da
                assert k.denominator == 1
                coroot.append(int(k))
            out.append((a, tuple(m), tuple(coroot), norm2))
        out.sort(key=lambda x: (sum(x[1]), x[1]))
        return tuple(PositiveRoot(i, *x) for i, x in enumerate(out))

    # -- basic linear algebra ------------------------------------------------
    def __repr__(self):
        return f"RootSystem({self.cartan_type}{self.rank})"

    def __eq__(self, other):
        return (isinstance(other, RootSystem) and self.cartan_type == other.cartan_type
                and self.rank == other.rank)

    def __hash__(self):
        return hash((self.cartan_type, self.rank))

    def __reduce__(self):
        return build_root_system, (self.cartan_type, self.rank)

    @property
    def zero(self) -> Weight:
        return (0,) * self.rank

    def simple_reflection(self, lam, i: int) -> Weight:
        c = lam[i]
        if c == 0:
            return tuple(lam)
        C = self.cartan_matrix
        return tuple(x - c * C[j][i] for j, x in enumerate(lam))

    def root_coordinates(self, lam) -> Optional[tuple]:
        """Coefficients of lam over the simple roots, or None if not integral."""
        out = []
        for row in self._cinv:
            x = sum(a * b for a, b in zip(row, lam))
            if x.denominator != 1:
                return None
            out.append(int(x))
        return tuple(out)

    def height(self, lam) -> Fraction:
        return sum((h * c for h, c in zip(self._height_vec, lam)), Fraction(0))

    def inner(self, lam, mu) -> int:
        """W-invariant form, scaled by a fixed positive integer."""
        return sum(lam[i] * g * mu[j] for i, row in enumerate(self._gram)
                   for j, g in enumerate(row))

    def norm(self, lam) -> float:
        """Euclidean length with respect to the true (unscaled) form."""
        return sqrt(self.inner(lam, lam) / self._gram_scale)

    def pairing(self, lam, alpha_index: int) -> int:
        """<lam, alpha^vee> for the positive root with the given index."""
        if not 0 <= alpha_index < len(self.positive_roots):
            raise IndexError(f"positive root index {alpha_index} out of range")
        return self.positive_roots[alpha_index].pair(lam)

    @property
    def num_positive_roots(self) -> int:
        return len(self.positive_roots)

    # -- Weyl group ------------------------------------------------------------
    def _build_weyl(self):
        n = self.rank
        ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        # an element is determined by its image of rho
        elems = [(ident, 0)]
        index = {self.rho: 0}
        queue = deque([0])
        while queue:
            k = queue.popleft()
            M, ell = elems[k]
            for i in range(n):
                # s_i * M: apply s_i to each column
                cols = [tuple(M[r][c] for r in range(n)) for c in range(n)]
                new_cols = [self.simple_reflection(col, i) for col in cols]
                N = tuple(tuple(new_cols[c][r] for c in range(n)) for r in range(n))
                img = _apply(N, self.rho)
                if img not in index:
                    index[img] = len(elems)
                    elems.append((N, ell + 1))
                    queue.append(index[img])
        return tuple(elems)

    @property
    def weyl_group(self) -> tuple:
        """All elements as (matrix on weight coordinates, length)."""
        if self._weyl is None:
            with self._lock:
                if self._weyl is None:
                    self._weyl = self._build_weyl()
        return self._weyl

    @property
    def weyl_order(self) -> int:
        return len(self.weyl_group)

    @property
    def longest_element_index(self) -> int:
        top = self.num_positive_roots
        return next(i for i, (_, ell) in enumerate(self.weyl_group) if ell == top)

    @property
    def w0(self):
        return self.weyl_group[self.longest_element_index][0]

    @property
    def rho_shifts(self) -> tuple:
        """Pairs ((rho - w(rho)), (-1)^l(w)) over the whole Weyl group."""
        if self._rho_shifts is None:
            rho = self.rho
            out = []
            for M, ell in self.weyl_group:
                wr = _apply(M, rho)
                out.append((tuple(a - b for a, b in zip(rho, wr)), -1 if ell % 2 else 1))
            self._rho_shifts = tuple(out)
        return self._rho_shifts

    def act(self, w_index: int, lam) -> Weight:
        return _apply(self.weyl_group[w_index][0], lam)

    # -- weights ----------------------------------------------------------------
    def check_weight(self, lam) -> Weight:
        lam = tuple(int(x) for x in lam)
        if len(lam) != self.rank:
            raise ValueError(f"weight {lam} has length {len(lam)}, expected {self.rank}")
        return lam

    def dominant_representative(self, lam) -> Weight:
        lam = tuple(lam)
        while True:
            for i, c in enumerate(lam):
                if c < 0:
                    lam = self.simple_reflection(lam, i)
                    break
            else:
                return lam


def _apply(M, lam) -> Weight:
    return tuple(sum(a * b for a, b in zip(row, lam)) for row in M)


@lru_cache(maxsize=None)
def build_root_system(cartan_type: str, rank: int) -> RootSystem:
    rs = RootSystem(cartan_type, rank)
    if rs.cartan_type in "ABCDG" or rank <= 4:
        assert rs.weyl_order == _weyl_order(rs.cartan_type, rank)
    return rs


# -- weight predicates and maps -------------------------------------------------

def is_dominant(lam) -> bool:
    return all(c >= 0 for c in lam)


def is_restricted(lam, p: int, r: int = 1) -> bool:
    q = p**r
    return all(0 <= c < q for c in lam)


def add(a, b) -> Weight:
    return tuple(x + y for x, y in zip(a, b))


def sub(a, b) -> Weight:
    return tuple(x - y for x, y in zip(a, b))


def scale(k: int, a) -> Weight:
    return tuple(k * x for x in a)


def pairing(rs: RootSystem, lam, alpha_index: int) -> int:
    return rs.pairing(lam, alpha_index)


def dominance_leq(rs: RootSystem, lam, mu) -> bool:
    """lam <= mu, i.e. mu - lam is a non-negative integral sum of positive roots."""
    m = rs.root_coordinates(sub(mu, lam))
    return m is not None and all(x >= 0 for x in m)


def dual_weight(rs: RootSystem, lam) -> Weight:
    return tuple(-x for x in _apply(rs.w0, lam))


def weyl_orbit(rs: RootSystem, lam) -> frozenset:
    dom = rs.dominant_representative(lam)
    cached = rs._orbit_cache.get(dom)
    if cached is not None:
        return cached
    seen = {dom}
    stack = [dom]
    while stack:
        x = stack.pop()
        for i in range(rs.rank):
            if x[i] != 0:
                y = rs.simple_reflection(x, i)
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    orbit = frozenset(seen)
    rs._orbit_cache[dom] = orbit
    return orbit


def dot_normalize(rs: RootSystem, lam):
    """Return None if lam + rho is singular, else (sign, w.lam) with w.lam dominant."""
    x = tuple(c + 1 for c in lam)
    sign = 1
    while True:
        for i, c in enumerate(x):
            if c < 0:
                x = rs.simple_reflection(x, i)
                sign = -sign
                break
        else:
            break
    if any(c == 0 for c in x):
        return None
    return sign, tuple(c - 1 for c in x)


def dot_action(rs: RootSystem, w_index: int, lam) -> Weight:
    rho = rs.rho
    return sub(rs.act(w_index, add(lam, rho)), rho)


def digit_decompose(rs: RootSystem, lam, p: int, r: int = 1):
    """Split a dominant weight as lam_0 + p^r lam_1 with lam_0 restricted."""
    if not is_dominant(lam):
        raise ValueError(f"digit decomposition needs a dominant weight, got {lam}")
    q = p**r
    return tuple(c % q for c in lam), tuple(c // q for c in lam)


def in_gamma_r(rs: RootSystem, lam, p: int, r: int) -> bool:
    return is_dominant(lam) and rs.alpha0.pair(lam) < p**r * (p - rs.coxeter_number + 1)


def w_r_map(rs: RootSystem, lam, p: int, r: int) -> Weight:
    """(p^r - 1) rho - lam_0^* + p^r lam_1."""
    q = p**r
    lam0, lam1 = digit_decompose(rs, lam, p, r)
    d0 = dual_weight(rs, lam0)
    return tuple((q - 1) - a + q * b for a, b in zip(d0, lam1))


def hat_weight(rs: RootSystem, lam, p: int, r: int) -> Weight:
    """2 (p^r - 1) rho - lam^* for a restricted weight lam."""
    if not is_restricted(lam, p, r):
        raise ValueError(f"{lam} is not {r}-restricted for p={p}")
    q = p**r
    return tuple(2 * (q - 1) - a for a in dual_weight(rs, lam))


def steinberg_weight(rs: RootSystem, p: int, r: int) -> Weight:
    return ((p**r) - 1,) * rs.rank


def dominant_weights_below(rs: RootSystem, lam) -> tuple:
    """All dominant mu <= lam, sorted by decreasing height.

    Every dominant mu < lam is reachable from lam through dominant weights by
    subtracting positive roots (Stembridge), so a downward search suffices.
    """
    return _dominant_below(rs, tuple(lam))


@lru_cache(maxsize=4096)
def _dominant_below(rs, lam):
    seen = {lam}
    stack = [lam]
    roots = [a.weight for a in rs.positive_roots]
    while stack:
        x = stack.pop()
        for a in roots:
            y = sub(x, a)
            if y not in seen and is_dominant(y):
                seen.add(y)
                stack.append(y)
    return tuple(sorted(seen, key=lambda w: (-rs.height(w), tuple(-c for c in w))))


def iter_dominant(rs: RootSystem, bound) -> Iterator[Weight]:
    """Dominant weights with every coordinate <= the corresponding bound entry."""
    def rec(prefix, i):
        if i == rs.rank:
            yield tuple(prefix)
            return
        for c in range(bound[i] + 1):
            yield from rec(prefix + [c], i + 1)
    yield from rec([], 0)


def iter_restricted(rs: RootSystem, p: int, r: int = 1) -> Iterator[Weight]:
    return iter_dominant(rs, ((p**r) - 1,) * rs.rank)


def dominant_in_ball(rs: RootSystem, radius: float) -> list:
    """Dominant mu with |mu + rho| <= radius, with a small relative slack."""
    lim = radius * (1 + 1e-12) + 1e-12
    rho = rs.rho
    out = []
    if rs.norm(rho) > lim:
        return out
    seen = {rs.zero}
    stack = [rs.zero]
    while stack:
        mu = stack.pop()
        out.append(mu)
        for i in range(rs.rank):
            nu = mu[:i] + (mu[i] + 1,) + mu[i + 1:]
            # |nu + rho| increases along fundamental weights, so pruning is safe
            if nu not in seen and rs.norm(add(nu, rho)) <= lim:
                seen.add(nu)
                stack.append(nu)
    out.sort()
    return out


# -- strong linkage -------------------------------------------------------------

_link_lock = threading.Lock()
_link_cache: dict = {}


def strongly_linked(rs: RootSystem, lam, mu, p: int) -> bool:
    """lam ↑ mu: mu reached from lam by upward dot reflections in p-multiple walls.

    Searches downward from mu through every weight xi with lam <= xi <= mu,
    a finite set, applying s_{alpha, np} . xi = xi - (<xi + rho, alpha^vee> - np) alpha.
    """
    lam, mu = tuple(lam), tuple(mu)
    key = (rs, lam, mu, p)
    hit = _link_cache.get(key)
    if hit is not None:
        return hit
    result = _strong_link_search(rs, lam, mu, p)
    with _link_lock:
        _link_cache[key] = result
    return result


def _strong_link_search(rs, lam, mu, p) -> bool:
    if lam == mu:
        return True
    if not dominance_leq(rs, lam, mu):
        return False
    ht_lam = rs.height(lam)
    seen = {mu}
    stack = [mu]
    while stack:
        xi = stack.pop()
        gap = rs.height(xi) - ht_lam
        for a in rs.positive_roots:
            s = a.pair(xi) + sum(a.coroot)  # <xi + rho, alpha^vee>
            k = s % p or p
            while k * a.height <= gap:
                eta = tuple(x - k * y for x, y in zip(xi, a.weight))
                if eta == lam:
                    return True
                if eta not in seen and dominance_leq(rs, lam, eta):
                    seen.add(eta)
                    stack.append(eta)
                k += p
    return False
