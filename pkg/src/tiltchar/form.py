"""The bilinear form [[M, N]] on Z[X]^W.

[[M, N]] is the coefficient of [nabla(0)] in [M][N^*].  It is evaluated by a
single alternating sum over W, reading the multiplicity function of the
product only at the |W| weights rho - w(rho), each obtained as one slice of
the convolution.
"""

from __future__ import annotations

from .charring import Character, NablaExpansion, chi, dual_character, multiply, nabla_expand


def _product_mult(a: Character, b: Character, zeta) -> int:
    # multiplicity of zeta in a * dual(b) = sum_eta a(eta) b(eta - zeta)
    if len(a) <= len(b):
        get = b.mults.get
        return sum(u * get(tuple(x - z for x, z in zip(eta, zeta)), 0)
                   for eta, u in a.mults.items())
    get = a.mults.get
    return sum(v * get(tuple(x + z for x, z in zip(kappa, zeta)), 0)
               for kappa, v in b.mults.items())


def bracket(a: Character, b: Character) -> int:
    if a.rs != b.rs:
        raise ValueError(f"mismatched root systems {a.rs} and {b.rs}")
    return sum(sign * _product_mult(a, b, shift) for shift, sign in a.rs.rho_shifts)


def bracket_via_expansion(a: Character, b: Character) -> int:
    """Composite path: full nabla expansion of a * dual(b), read at 0."""
    return nabla_expand(multiply(a, dual_character(b)))[a.rs.zero]


def bracket_nabla(e: NablaExpansion, f: NablaExpansion) -> int:
    """The form on nabla expansions; the chi(lam) are orthonormal."""
    if len(e) > len(f):
        e, f = f, e
    return sum(v * f[k] for k, v in e.items())


def gf_multiplicity(a: Character, lam) -> int:
    """[[a, nabla(lam)]]; the good filtration multiplicity when a has one."""
    return bracket(a, chi(a.rs, tuple(lam)))
