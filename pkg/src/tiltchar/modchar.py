"""Simple and tilting characters in characteristic p.

Characters of simple and indecomposable tilting modules are kept in
:class:`CharTable` caches as nabla expansions, each tagged with where it came
from.  Rank one is closed form.  In higher rank a simple character is derived
from the Jantzen sum formula when that is conclusive, and tilting characters
come from user tables, simplicity of nabla(lam), or Donkin's tensor product
theorem.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .charring import (
    Character,
    NablaExpansion,
    chi,
    frobenius_twist,
    nabla_expand,
    parse_weight_key,
    synthesize,
    tensor_nabla,
    weight_key,
)
from .rootsys import (
    RootSystem,
    build_root_system,
    digit_decompose,
    dominance_leq,
    dot_normalize,
    in_gamma_r,
    is_dominant,
    is_restricted,
    steinberg_weight,
)

CLOSED_FORM = "closed-form"
JSF_DETERMINED = "jsf-determined"
USER_SUPPLIED = "user-supplied"
UNDETERMINED = "undetermined"
PROVENANCES = (CLOSED_FORM, JSF_DETERMINED, USER_SUPPLIED, UNDETERMINED)


class Undetermined(Exception):
    """A needed simple or tilting character could not be determined."""

    def __init__(self, kind: str, weight, reason: str = ""):
        self.kind = kind
        self.weight = tuple(weight)
        self.reason = reason
        msg = f"{kind} character at {list(self.weight)} is undetermined"
        super().__init__(msg + (f": {reason}" if reason else ""))


class InvariantViolation(RuntimeError):
    pass


class TableError(ValueError):
    pass


@dataclass
class TableEntry:
    expansion: Optional[NablaExpansion]
    provenance: str
    reason: str = ""
    blocked_by: Optional[tuple] = None


class CharTable:
    """Cache of simple or tilting characters for one (root system, p)."""

    def __init__(self, kind: str, rs: RootSystem, p: int, entries: Optional[dict] = None):
        if kind not in ("simple", "tilting"):
            raise ValueError(f"unknown table kind {kind!r}")
        self.kind = kind
        self.rs = rs
        self.p = p
        self.entries: dict = dict(entries or {})
        self._chars: dict = {}
        self._truncated: dict = {}
        self._lock = threading.Lock()

    def __contains__(self, lam):
        return tuple(lam) in self.entries

    def get(self, lam) -> Optional[TableEntry]:
        return self.entries.get(tuple(lam))

    def put(self, lam, expansion, provenance, reason="", blocked_by=None) -> TableEntry:
        lam = tuple(lam)
        with self._lock:
            old = self.entries.get(lam)
            if old is not None and old.provenance != UNDETERMINED:
                return old
            entry = TableEntry(expansion, provenance, reason, blocked_by)
            self.entries[lam] = entry
            return entry

    def character(self, lam) -> Character:
        lam = tuple(lam)
        c = self._chars.get(lam)
        if c is None:
            entry = self.entries.get(lam)
            if entry is None or entry.expansion is None:
                raise Undetermined(self.kind, lam, "no table entry")
            c = synthesize(entry.expansion)
            self._chars[lam] = c
        return c

    def determined(self) -> dict:
        return {k: e for k, e in self.entries.items() if e.provenance != UNDETERMINED}

    # -- file format ---------------------------------------------------------------
    def to_json(self) -> dict:
        rows = []
        for lam in sorted(self.determined()):
            e = self.entries[lam]
            rows.append({
                "weight": list(lam),
                "provenance": e.provenance,
                "nabla_coeffs": {weight_key(k): v for k, v in sorted(e.expansion.items())},
            })
        return {"type": self.rs.cartan_type, "rank": self.rs.rank, "p": self.p,
                "kind": self.kind, "entries": rows}

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), sort_keys=True, indent=1) + "\n")

    @classmethod
    def from_json(cls, data: dict, default_provenance: str = USER_SUPPLIED) -> "CharTable":
        try:
            rs = build_root_system(str(data["type"]), int(data["rank"]))
            table = cls(str(data["kind"]), rs, int(data["p"]))
            rows = data["entries"]
        except (KeyError, TypeError, ValueError) as exc:
            raise TableError(f"malformed table header: {exc}") from exc
        for row in rows:
            try:
                lam = rs.check_weight(row["weight"])
                coeffs = {rs.check_weight(parse_weight_key(k)): int(v)
                          for k, v in row["nabla_coeffs"].items()}
                prov = row.get("provenance", default_provenance)
            except (KeyError, TypeError, ValueError) as exc:
                raise TableError(f"malformed table entry {row!r}: {exc}") from exc
            if prov not in PROVENANCES or prov == UNDETERMINED:
                raise TableError(f"bad provenance {prov!r} at {list(lam)}")
            e = NablaExpansion(rs, coeffs)
            validate_entry(table.kind, rs, lam, e)
            table.entries[lam] = TableEntry(e, prov)
        return table

    @classmethod
    def load(cls, path) -> "CharTable":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise TableError(f"{path}: not valid JSON ({exc})") from exc
        return cls.from_json(data)

    def merge(self, other: "CharTable") -> None:
        if (other.kind, other.rs, other.p) != (self.kind, self.rs, self.p):
            raise TableError("cannot merge tables for different (kind, root system, p)")
        for lam, e in other.determined().items():
            mine = self.entries.get(lam)
            if mine is not None and mine.expansion is not None and mine.expansion != e.expansion:
                raise TableError(f"conflicting {self.kind} entries for {list(lam)}")
            self.put(lam, e.expansion, e.provenance)


def validate_entry(kind: str, rs: RootSystem, lam, e: NablaExpansion) -> None:
    if not is_dominant(lam):
        raise TableError(f"entry weight {list(lam)} is not dominant")
    if e[lam] != 1:
        raise TableError(f"{kind} entry {list(lam)}: top coefficient is {e[lam]}, expected 1")
    for k in e:
        if not dominance_leq(rs, k, lam):
            raise TableError(f"{kind} entry {list(lam)}: {list(k)} is not below the top weight")
    if kind == "tilting" and not e.is_nonnegative():
        raise TableError(f"tilting entry {list(lam)} has a negative nabla coefficient")


# -- Jantzen sum formula ---------------------------------------------------------------

def p_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def jantzen_sum(rs: RootSystem, lam, p: int) -> NablaExpansion:
    """sum_{i>0} [Delta(lam)^i] in the nabla basis.

    sum over alpha > 0 and 0 < n < <lam + rho, alpha^vee> with p | n of
    v_p(n) chi(s_{alpha,n} . lam), where s_{alpha,n} . lam =
    lam - (<lam + rho, alpha^vee> - n) alpha.
    """
    lam = tuple(lam)
    if not is_dominant(lam):
        raise ValueError(f"Jantzen sum needs a dominant weight, got {lam}")
    out: dict = {}
    for a in rs.positive_roots:
        s = a.pair(lam) + sum(a.coroot)
        for n in range(p, s, p):
            mu = tuple(x - (s - n) * y for x, y in zip(lam, a.weight))
            res = dot_normalize(rs, mu)
            if res is None:
                continue
            sign, dom = res
            out[dom] = out.get(dom, 0) + sign * p_valuation(n, p)
    return NablaExpansion(rs, out)


# -- simple characters -----------------------------------------------------------------

def _top_key(rs):
    return lambda w: (rs.height(w), w)


def simple_expansion(table: CharTable, lam) -> Optional[NablaExpansion]:
    """[L(lam)] as a nabla expansion, or None when undetermined."""
    try:
        return _simple(table, tuple(lam))
    except Undetermined:
        return None


def simple_character(table: CharTable, lam) -> Optional[Character]:
    if simple_expansion(table, lam) is None:
        return None
    return table.character(lam)


def require_simple(table: CharTable, lam) -> NablaExpansion:
    return _simple(table, tuple(lam))


def require_simple_character(table: CharTable, lam) -> Character:
    _simple(table, tuple(lam))
    return table.character(lam)


def _simple(table: CharTable, lam) -> NablaExpansion:
    if table.kind != "simple":
        raise ValueError("simple characters need a simple table")
    if not is_dominant(lam):
        raise ValueError(f"simple character needs a dominant weight, got {lam}")
    entry = table.get(lam)
    if entry is not None:
        if entry.expansion is None:
            raise Undetermined("simple", entry.blocked_by or lam, entry.reason)
        return entry.expansion
    rs, p = table.rs, table.p
    if not is_restricted(lam, p):
        lam0, lam1 = digit_decompose(rs, lam, p, 1)
        try:
            e0 = _simple(table, lam0)
            _simple(table, lam1)
        except Undetermined as exc:
            table.put(lam, None, UNDETERMINED, str(exc), exc.weight)
            raise
        twisted = frobenius_twist(table.character(lam1), p, 1)
        e = tensor_nabla(e0, twisted)
        prov = (CLOSED_FORM if table.get(lam0).provenance == CLOSED_FORM
                and table.get(lam1).provenance == CLOSED_FORM else JSF_DETERMINED)
        return table.put(lam, e, prov).expansion
    if rs.rank == 1 or in_gamma_r(rs, lam, p, 0):
        # rank one: nabla(m) is simple for m < p; Gamma_0 weights have simple nabla
        return table.put(lam, NablaExpansion.basis(rs, lam), CLOSED_FORM).expansion
    jsf = jantzen_sum(rs, lam, p)
    if not jsf:
        return table.put(lam, NablaExpansion.basis(rs, lam), JSF_DETERMINED).expansion
    try:
        factors = composition_factors(table, jsf)
    except Undetermined as exc:
        table.put(lam, None, UNDETERMINED, str(exc), exc.weight)
        raise
    if any(c < 0 for c in factors.values()):
        raise InvariantViolation(f"Jantzen sum at {lam} has a negative simple coefficient")
    if any(c > 1 for c in factors.values()):
        bad = sorted(k for k, c in factors.items() if c > 1)
        reason = f"Jantzen sum coefficient > 1 at {[list(k) for k in bad]}"
        table.put(lam, None, UNDETERMINED, reason, lam)
        raise Undetermined("simple", lam, reason)
    e = NablaExpansion.basis(rs, lam)
    for nu in factors:
        e = e - _simple(table, nu)
    return table.put(lam, e, JSF_DETERMINED).expansion


def truncated_simple(table: CharTable, lam, floor) -> NablaExpansion:
    """The part of [L(lam)] at weights >= floor.

    Only composition factors of Delta(lam) above floor matter here, so the
    Jantzen rule needs coefficients in {0, 1} only at those weights.
    """
    lam, floor = tuple(lam), tuple(floor)
    rs = table.rs
    if not dominance_leq(rs, floor, lam):
        return NablaExpansion(rs, {})
    entry = table.get(lam)
    if entry is not None and entry.expansion is not None:
        return _cut(entry.expansion, floor)
    key = (lam, floor)
    hit = table._truncated.get(key)
    if hit is not None:
        if isinstance(hit, Undetermined):
            raise hit
        return hit
    if (not is_restricted(lam, table.p) or table.rs.rank == 1
            or in_gamma_r(rs, lam, table.p, 0) or lam == floor):
        if lam == floor:
            out = NablaExpansion.basis(rs, lam)
        else:
            out = _cut(_simple(table, lam), floor)
        table._truncated[key] = out
        return out
    try:
        factors = composition_factors(table, jantzen_sum(rs, lam, table.p), above=floor)
    except Undetermined as exc:
        table._truncated[key] = exc
        raise
    if any(c < 0 for c in factors.values()):
        raise InvariantViolation(f"Jantzen sum at {lam} has a negative simple coefficient")
    bad = sorted(k for k, c in factors.items() if c > 1)
    if bad:
        exc = Undetermined("simple", lam, f"Jantzen sum coefficient > 1 at {[list(k) for k in bad]}")
        table._truncated[key] = exc
        raise exc
    out = NablaExpansion.basis(rs, lam)
    for nu in factors:
        out = out - truncated_simple(table, nu, floor)
    table._truncated[key] = out
    return out


def _cut(e: NablaExpansion, floor) -> NablaExpansion:
    rs = e.rs
    return NablaExpansion(rs, {k: v for k, v in e.items() if dominance_leq(rs, floor, k)})


def composition_factors(table: CharTable, e: NablaExpansion, above=None) -> dict:
    """Coefficients of e in the basis of simple characters.

    With ``above`` set, only simples L(nu) with above <= nu are resolved, which
    is all that is needed for the coefficient at ``above``.
    """
    rs = table.rs
    residual = dict(e.coeffs)
    if above is not None:
        above = tuple(above)
        residual = {k: v for k, v in residual.items() if dominance_leq(rs, above, k)}
    out = {}
    key = _top_key(rs)
    while residual:
        nu = max(residual, key=key)
        c = residual[nu]
        out[nu] = c
        simple = _simple(table, nu) if above is None else truncated_simple(table, nu, above)
        for k, v in simple.items():
            nv = residual.get(k, 0) - c * v
            if nv:
                residual[k] = nv
            else:
                residual.pop(k, None)
    return out


def composition_multiplicity(table: CharTable, e: NablaExpansion, nu) -> int:
    """[M : L(nu)] for a character M given by its nabla expansion."""
    return composition_factors(table, e, above=nu).get(tuple(nu), 0)


# -- tilting characters ---------------------------------------------------------------

def st_char(rs: RootSystem, p: int, r: int = 1) -> Character:
    if r < 1:
        raise ValueError("Steinberg module needs r >= 1")
    return chi(rs, steinberg_weight(rs, p, r))


def donkin_conjecture_known(rs: RootSystem, p: int) -> bool:
    return p >= 2 * rs.coxeter_number - 2


def tilting_expansion(table: CharTable, lam, assume_donkin: bool = False) -> Optional[NablaExpansion]:
    try:
        return _tilting(table, tuple(lam), assume_donkin)
    except Undetermined:
        return None


def tilting_character(table: CharTable, lam, assume_donkin: bool = False) -> Optional[Character]:
    if tilting_expansion(table, lam, assume_donkin) is None:
        return None
    return table.character(lam)


def require_tilting(table: CharTable, lam, assume_donkin: bool = False) -> NablaExpansion:
    return _tilting(table, tuple(lam), assume_donkin)


def require_tilting_character(table: CharTable, lam, assume_donkin: bool = False) -> Character:
    _tilting(table, tuple(lam), assume_donkin)
    return table.character(lam)


def _tilting(table: CharTable, lam, assume_donkin: bool) -> NablaExpansion:
    if table.kind != "tilting":
        raise ValueError("tilting characters need a tilting table")
    if not is_dominant(lam):
        raise ValueError(f"tilting character needs a dominant weight, got {lam}")
    entry = table.get(lam)
    if entry is not None and entry.expansion is not None:
        return entry.expansion
    rs, p = table.rs, table.p
    if rs.rank == 1:
        return table.put(lam, _rank_one_tilting(table, lam[0]), CLOSED_FORM).expansion
    if in_gamma_r(rs, lam, p, 0):
        return table.put(lam, NablaExpansion.basis(rs, lam), CLOSED_FORM).expansion
    if not jantzen_sum(rs, lam, p):
        # Delta(lam) simple, so nabla(lam) = Delta(lam) is tilting
        return table.put(lam, NablaExpansion.basis(rs, lam), JSF_DETERMINED).expansion
    shifted = tuple(c - (p - 1) for c in lam)
    if is_dominant(shifted):
        lam0, lam1 = digit_decompose(rs, shifted, p, 1)
        if any(lam1):
            if not (assume_donkin or donkin_conjecture_known(rs, p)):
                reason = "Donkin tensor product extension needs p >= 2h-2 or --assume-donkin"
                table.put(lam, None, UNDETERMINED, reason, lam)
                raise Undetermined("tilting", lam, reason)
            base = tuple(c + p - 1 for c in lam0)
            e0 = _tilting(table, base, assume_donkin)
            _tilting(table, lam1, assume_donkin)
            e = tensor_nabla(e0, frobenius_twist(table.character(lam1), p, 1))
            prov = (USER_SUPPLIED if USER_SUPPLIED in (table.get(base).provenance,
                                                       table.get(lam1).provenance)
                    else JSF_DETERMINED)
            return table.put(lam, e, prov).expansion
    reason = "no closed form and no table entry"
    table.put(lam, None, UNDETERMINED, reason, lam)
    raise Undetermined("tilting", lam, reason)


def _rank_one_tilting(table: CharTable, m: int) -> NablaExpansion:
    rs, p = table.rs, table.p
    if m <= p - 1:
        return NablaExpansion.basis(rs, (m,))
    if m <= 2 * p - 2:
        return NablaExpansion(rs, {(m,): 1, (2 * p - 2 - m,): 1})
    m0 = p - 1 + (m - (p - 1)) % p
    m1 = (m - m0) // p
    e0 = _tilting(table, (m0,), False)
    _tilting(table, (m1,), False)
    return tensor_nabla(e0, frobenius_twist(table.character((m1,)), p, 1))


# -- decomposition into tilting modules ------------------------------------------------

@dataclass
class DecompositionResult:
    multiplicities: dict
    residual: NablaExpansion
    status: str
    blocked_by: Optional[tuple] = None
    reason: str = ""
    notes: list = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return self.status == "complete"


def decompose_into_tiltings(table: CharTable, c, assume_donkin: bool = False) -> DecompositionResult:
    """Peel indecomposable tilting characters off a tilting character c."""
    rs = table.rs
    e = c if isinstance(c, NablaExpansion) else None
    if e is None:
        e = nabla_expand(c)
    residual = dict(e.coeffs)
    mults: dict = {}
    key = _top_key(rs)
    while residual:
        nu = max(residual, key=key)
        n = residual[nu]
        if n < 0:
            raise InvariantViolation(
                f"negative multiplicity {n} for T({list(nu)}): input is not tilting "
                "or a table entry is wrong")
        try:
            t = _tilting(table, nu, assume_donkin)
        except Undetermined as exc:
            return DecompositionResult(mults, NablaExpansion(rs, residual), "partial",
                                       exc.weight, str(exc))
        mults[nu] = n
        for k, v in t.items():
            nv = residual.get(k, 0) - n * v
            if nv:
                residual[k] = nv
            else:
                residual.pop(k, None)
    return DecompositionResult(mults, NablaExpansion(rs, {}), "complete")


def new_tables(rs: RootSystem, p: int):
    return CharTable("simple", rs, p), CharTable("tilting", rs, p)
