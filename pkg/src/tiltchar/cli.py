"""Command-line front end.

Exit status: 0 success, 1 malformed input or unmet precondition, 2 result
undetermined, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import fcntl
import json
import os
import sys
from contextlib import contextmanager
from pathlib import Path

from .charring import (
    Character,
    NablaExpansion,
    chi,
    frobenius_twist,
    multiply,
    nabla_expand,
    parse_weight_key,
    weight_key,
)
from .form import bracket
from .modchar import (
    CharTable,
    InvariantViolation,
    TableError,
    Undetermined,
    decompose_into_tiltings,
    donkin_conjecture_known,
    jantzen_sum,
    st_char,
)
from .rootsys import UnsupportedType, build_root_system
from .stnabla import (
    PreconditionError,
    StNablaContext,
    d_numbers,
    donkin_criterion,
    hom_dim_gfq,
    hom_dim_gr,
    p_numbers,
    reciprocity_check,
    s_numbers,
    t_numbers,
)
from .suites import SUITES, run_suite

CACHE_ENV = "TILTCHAR_CACHE_DIR"


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def parse_weight(text: str, rank: int) -> tuple:
    try:
        w = tuple(int(x) for x in text.replace(" ", "").strip("[]()").split(","))
    except ValueError:
        raise InputError(f"cannot parse weight {text!r}") from None
    if len(w) != rank:
        raise InputError(f"weight {text!r} has {len(w)} coordinates, rank is {rank}")
    return w


# -- cache --------------------------------------------------------------------------------

def cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or str(Path.home() / ".cache")
    return Path(base) / "tiltchar"


def _cache_file(root: Path, rs, p: int, kind: str) -> Path:
    return root / f"{rs.cartan_type}{rs.rank}_p{p}_{kind}.json"


@contextmanager
def _locked(root: Path):
    root.mkdir(parents=True, exist_ok=True)
    with open(root / ".lock", "w") as fh:
        fcntl.flock(fh, fcntl.LOCK_EX)
        try:
            yield
        finally:
            fcntl.flock(fh, fcntl.LOCK_UN)


def load_cached(root: Path, table: CharTable) -> None:
    path = _cache_file(root, table.rs, table.p, table.kind)
    if path.exists():
        with _locked(root):
            table.merge(CharTable.load(path))


def save_cached(root: Path, table: CharTable) -> None:
    path = _cache_file(root, table.rs, table.p, table.kind)
    with _locked(root):
        if path.exists():
            # append-only: keep whatever is already on disk
            table.merge(CharTable.load(path))
        tmp = path.with_suffix(".tmp")
        table.save(tmp)
        tmp.replace(path)


# -- output -------------------------------------------------------------------------------

def _sort_key(k: str):
    try:
        return (0, parse_weight_key(k), "")
    except ValueError:
        return (1, (), k)


def canonical(obj):
    """Plain JSON data with dict keys sorted, weight keys lexicographically."""
    if isinstance(obj, dict):
        return {str(k): canonical(obj[k]) for k in sorted(obj, key=lambda k: _sort_key(str(k)))}
    if isinstance(obj, (list, tuple)):
        return [canonical(x) for x in obj]
    return obj


def _weights_to_keys(d: dict) -> dict:
    return {weight_key(k): int(v) for k, v in d.items()}


def emit(result, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(canonical(result), indent=1) + "\n")
        return
    rows = result.get("entries") if isinstance(result, dict) else None
    if isinstance(rows, dict):
        for k in sorted(rows, key=lambda k: _sort_key(k)):
            out.write(f"{k}\t{rows[k]}\n")
    else:
        for k, v in canonical(result).items():
            out.write(f"{k}\t{json.dumps(v) if isinstance(v, (dict, list)) else v}\n")


# -- character references ---------------------------------------------------------------

def resolve_char(ref: str, ctx: StNablaContext) -> Character:
    """chi:1,0 / L:1,0 / T:1,0 / St, optionally twisted with @r (e.g. chi:1,0@1)."""
    rs = ctx.rs
    twist = 0
    if "@" in ref:
        ref, tw = ref.rsplit("@", 1)
        try:
            twist = int(tw)
        except ValueError:
            raise InputError(f"bad twist in {ref!r}") from None
    kind, _, arg = ref.partition(":")
    kind = kind.strip()
    if kind == "St":
        c = st_char(rs, ctx.p, ctx.r)
    elif kind in ("chi", "L", "T"):
        if not arg:
            raise InputError(f"character reference {ref!r} needs a weight")
        w = parse_weight(arg, rs.rank)
        if kind == "chi":
            c = chi(rs, w)
        elif kind == "L":
            c = ctx.simple_char(w)
        else:
            c = ctx.tilting_char(w)
    else:
        raise InputError(f"unknown character reference {ref!r} (use chi:, L:, T: or St)")
    return frobenius_twist(c, ctx.p, twist) if twist else c


def _expansion_json(e: NablaExpansion) -> dict:
    return _weights_to_keys(dict(e.items()))


# -- commands ------------------------------------------------------------------------------

def _one_weight(args, ctx):
    return parse_weight(args.weight, ctx.rs.rank)


def cmd_char(args, ctx):
    c = resolve_char(args.ref, ctx)
    return {"kind": "character", "entries": _weights_to_keys(dict(c.items())), "dim": c.dim()}


def cmd_expand(args, ctx):
    c = resolve_char(args.ref, ctx)
    return {"kind": "nabla-expansion", "entries": _expansion_json(nabla_expand(c))}


def cmd_form(args, ctx):
    return {"kind": "form", "value": bracket(resolve_char(args.a, ctx), resolve_char(args.b, ctx))}


def cmd_jsf(args, ctx):
    lam = _one_weight(args, ctx)
    return {"kind": "jantzen-sum", "weight": list(lam),
            "entries": _expansion_json(jantzen_sum(ctx.rs, lam, ctx.p))}


def _table_entry(args, ctx, table, fetch):
    lam = _one_weight(args, ctx)
    e = fetch(lam)
    entry = table.get(lam)
    return {"kind": table.kind, "weight": list(lam), "provenance": entry.provenance,
            "entries": _expansion_json(e)}


def cmd_simple(args, ctx):
    return _table_entry(args, ctx, ctx.simple_table, ctx.simple)


def cmd_tilting(args, ctx):
    return _table_entry(args, ctx, ctx.tilting_table, ctx.tilting)


def cmd_tensor_decompose(args, ctx):
    c = resolve_char(args.refs[0], ctx)
    for ref in args.refs[1:]:
        c = multiply(c, resolve_char(ref, ctx))
    res = decompose_into_tiltings(ctx.tilting_table, c, ctx.assume_donkin)
    out = {"kind": "tilting-decomposition", "entries": _weights_to_keys(res.multiplicities),
           "status": res.status}
    if not res.complete:
        out["residual"] = _expansion_json(res.residual)
        out["blocked"] = list(res.blocked_by)
        out["reason"] = res.reason
    return out


def _lam(args, ctx):
    return parse_weight(args.lam, ctx.rs.rank)


def _mu(args, ctx):
    return parse_weight(args.mu, ctx.rs.rank) if args.mu else None


def cmd_t_numbers(args, ctx):
    return t_numbers(ctx, _lam(args, ctx), _mu(args, ctx)).to_json()


def cmd_s_numbers(args, ctx):
    return s_numbers(ctx, _lam(args, ctx), _mu(args, ctx)).to_json()


def cmd_d_numbers(args, ctx):
    return d_numbers(ctx, _lam(args, ctx)).to_json()


def cmd_p_numbers(args, ctx):
    return p_numbers(ctx, _lam(args, ctx)).to_json()


def _target(args, ctx):
    if args.target_chi is not None:
        return chi(ctx.rs, parse_weight(args.target_chi, ctx.rs.rank))
    if args.target is not None:
        return resolve_char(args.target, ctx)
    raise InputError("give --target-chi WEIGHT or --target CHARREF")


def cmd_homdim_gr(args, ctx):
    return {"kind": "homdim-gr", "params": ctx.params(),
            "value": hom_dim_gr(ctx, _lam(args, ctx), _target(args, ctx))}


def cmd_homdim_gfq(args, ctx):
    return {"kind": "homdim-gfq", "params": ctx.params(),
            "value": hom_dim_gfq(ctx, _lam(args, ctx), _target(args, ctx))}


def cmd_reciprocity(args, ctx):
    rk = ctx.rs.rank
    res = reciprocity_check(ctx, _lam(args, ctx), parse_weight(args.sigma, rk),
                            parse_weight(args.mu, rk))
    return dict(res.to_json(), kind="reciprocity")


def cmd_donkin_check(args, ctx):
    bound = parse_weight(args.bound, ctx.rs.rank)
    return dict(donkin_criterion(ctx, _lam(args, ctx), bound).to_json(), kind="donkin-check")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="tiltchar", description="Characters of tilting and simple modules "
                 "in positive characteristic, and Steinberg tensor product multiplicities.")
    ap.add_argument("--type", dest="cartan_type", help="Cartan type (A-G)")
    ap.add_argument("--rank", type=int)
    ap.add_argument("--p", type=int, help="the prime")
    ap.add_argument("--r", type=int, default=1, help="Frobenius power (q = p^r)")
    ap.add_argument("--assume-donkin", action="store_true",
                    help="assume Donkin's tilting conjecture where p < 2h-2")
    ap.add_argument("--table", action="append", default=[],
                    help="JSON character table to load (repeatable)")
    ap.add_argument("--output", choices=("json", "tsv"), default="json")
    ap.add_argument("--no-cache", action="store_true", help="do not read or write the cache")
    ap.add_argument("--cache-dir", help=f"cache directory (default ${CACHE_ENV} or XDG cache)")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, *weights, help=None):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=fn)
        for w in weights:
            sp.add_argument(w)
        return sp

    add("char", cmd_char, "ref", help="weight multiplicities of a character")
    add("expand", cmd_expand, "ref", help="nabla expansion of a character")
    add("form", cmd_form, "a", "b", help="the bilinear form [[a, b]]")
    add("jsf", cmd_jsf, "weight", help="Jantzen sum in the nabla basis")
    add("simple", cmd_simple, "weight", help="simple character L(weight)")
    add("tilting", cmd_tilting, "weight", help="tilting character T(weight)")
    sp = sub.add_parser("tensor-decompose", help="decompose a product of tilting characters")
    sp.add_argument("refs", nargs="+")
    sp.set_defaults(func=cmd_tensor_decompose)
    for name, fn in (("t-numbers", cmd_t_numbers), ("s-numbers", cmd_s_numbers)):
        sp = add(name, fn)
        sp.add_argument("--lambda", dest="lam", required=True)
        sp.add_argument("--mu")
    for name, fn in (("d-numbers", cmd_d_numbers), ("p-numbers", cmd_p_numbers)):
        add(name, fn).add_argument("--lambda", dest="lam", required=True)
    for name, fn in (("homdim-gr", cmd_homdim_gr), ("homdim-gfq", cmd_homdim_gfq)):
        sp = add(name, fn)
        sp.add_argument("--lambda", dest="lam", required=True)
        sp.add_argument("--target-chi")
        sp.add_argument("--target", help="character reference such as L:4 or St")
    sp = add("reciprocity", cmd_reciprocity)
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--sigma", required=True)
    sp.add_argument("--mu", required=True)
    sp = add("donkin-check", cmd_donkin_check)
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--bound", required=True)
    sp = sub.add_parser("verify", help="run a named invariant suite")
    sp.add_argument("--suite", required=True, choices=sorted(SUITES))
    sp.set_defaults(func=None)
    return ap


def _verify(args, out, err) -> int:
    results = run_suite(args.suite)
    for res in results:
        out.write(res.line() + "\n")
    failed = [r for r in results if not r.ok]
    if failed:
        err.write(f"first failure: {failed[0].name}: {failed[0].detail}\n")
        return 3
    return 0


def _context(args) -> StNablaContext:
    if not (args.cartan_type and args.rank and args.p):
        raise InputError("--type, --rank and --p are required for this command")
    rs = build_root_system(args.cartan_type.upper(), args.rank)
    ctx = StNablaContext(rs, args.p, args.r, assume_donkin=args.assume_donkin)
    for path in args.table:
        t = CharTable.load(path)
        if t.rs != rs or t.p != args.p:
            raise TableError(f"{path}: table is for {t.rs} p={t.p}, not {rs} p={args.p}")
        (ctx.simple_table if t.kind == "simple" else ctx.tilting_table).merge(t)
    return ctx


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "verify":
        return _verify(args, out, err)
    root = Path(args.cache_dir) if args.cache_dir else cache_dir()
    try:
        ctx = _context(args)
        if not args.no_cache:
            load_cached(root, ctx.simple_table)
            load_cached(root, ctx.tilting_table)
        result = args.func(args, ctx)
    except Undetermined as exc:
        err.write(f"undetermined: {exc}\n")
        return 2
    except InvariantViolation as exc:
        err.write(f"invariant violation: {exc}\n")
        return 3
    except (InputError, TableError, PreconditionError, UnsupportedType, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return 1
    if not args.no_cache:
        try:
            save_cached(root, ctx.simple_table)
            # tilting entries derived under the conjecture flag stay out of the cache
            if not args.assume_donkin or donkin_conjecture_known(ctx.rs, ctx.p):
                save_cached(root, ctx.tilting_table)
        except OSError as exc:
            err.write(f"warning: could not write cache: {exc}\n")
    emit(result, args.output, out)
    if isinstance(result, dict) and result.get("status") == "partial":
        blocked = result.get("blocked") or []
        err.write(f"undetermined: result is partial, blocked at {blocked}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
