"""Bounded formulas for the graphs of the flat coding operations.

Every formula uses only bounded quantifiers, the constant ``omega`` and the
``plus`` atom.  Each comes with the direct computation it should agree with
on transitive domains.
"""

from __future__ import annotations

import itertools
from typing import Callable, Dict, Tuple

from ..errors import UnknownFormulaName
from ..flatcode import concat, f_pair0, f_pair1, flat_pair, lh, s_fn
from ..kernel import HFSet, nat
from .syntax import (
    OMEGA,
    BoundedExists,
    BoundedForall,
    Eq,
    Formula,
    Implies,
    Mem,
    Not,
    Plus,
    conj,
    disj,
)


class _Names:
    def __init__(self):
        self.counter = itertools.count()

    def __call__(self, base: str) -> str:
        return f"{base}_{next(self.counter)}"


def _ex(v, bound, body):
    return BoundedExists(v, bound, body)


def _all(v, bound, body):
    return BoundedForall(v, bound, body)


def _empty(z: str, fresh: _Names) -> Formula:
    w = fresh("w")
    return _all(w, z, Not(Eq(w, w)))


def _subset(a: str, b: str, fresh: _Names) -> Formula:
    w = fresh("w")
    return _all(w, a, Mem(w, b))


def _succ(z: str, y: str, fresh: _Names) -> Formula:
    """y = z ∪ {z}"""
    w = fresh("w")
    return conj(Mem(z, y), _subset(z, y, fresh), _all(w, y, disj(Mem(w, z), Eq(w, z))))


def _has_double(m: str, y: str, fresh: _Names) -> Formula:
    """2m ∈ y"""
    z = fresh("z")
    return _ex(z, y, Plus(m, m, z))


def _s_graph(x: str, y: str, fresh: _Names) -> Formula:
    z = fresh("z")
    natural = Implies(Mem(x, OMEGA), _ex(z, y, conj(Plus(x, x, z), _succ(z, y, fresh))))
    other = Implies(Not(Mem(x, OMEGA)), Eq(y, x))
    return conj(natural, other)


def _f0_graph(a: str, b: str, fresh: _Names) -> Formula:
    x, y, x2, y2 = fresh("x"), fresh("y"), fresh("x"), fresh("y")
    return conj(
        _all(x, a, _ex(y, b, _s_graph(x, y, fresh))),
        _all(y2, b, _ex(x2, a, _s_graph(x2, y2, fresh))),
    )


def _f1_graph(a: str, b: str, fresh: _Names) -> Formula:
    x, y, x2, y2, z = fresh("x"), fresh("y"), fresh("x"), fresh("y"), fresh("z")
    return conj(
        _all(x, a, _ex(y, b, _s_graph(x, y, fresh))),
        _ex(z, b, _empty(z, fresh)),
        _all(y2, b, disj(_empty(y2, fresh), _ex(x2, a, _s_graph(x2, y2, fresh)))),
    )


def _pair_graph(a: str, b: str, c: str, fresh: _Names) -> Formula:
    x, y, e, e1, e2, x2, y2 = (fresh(n) for n in ("x", "y", "e", "e", "e", "x", "y"))
    return conj(
        _all(x, a, _ex(e1, c, _f0_graph(x, e1, fresh))),
        _all(y, b, _ex(e2, c, _f1_graph(y, e2, fresh))),
        _all(e, c, disj(_ex(x2, a, _f0_graph(x2, e, fresh)), _ex(y2, b, _f1_graph(y2, e, fresh)))),
    )


def _free_index(m: str, sigma: str, fresh: _Names) -> Formula:
    """no member of sigma contains 2m"""
    y = fresh("y")
    return _all(y, sigma, Not(_has_double(m, y, fresh)))


def _lh_graph(sigma: str, n: str, fresh: _Names) -> Formula:
    m, k, m2 = fresh("m"), fresh("k"), fresh("m")
    least = conj(
        Mem(m, OMEGA),
        _succ(m, n, fresh),
        _free_index(m, sigma, fresh),
        _all(k, m, Not(_free_index(k, sigma, fresh))),
    )
    no_least = _all(m2, OMEGA, Not(_free_index(m2, sigma, fresh)))
    return conj(
        Implies(_empty(sigma, fresh), _empty(n, fresh)),
        Implies(conj(Not(_empty(sigma, fresh)), Not(no_least)), _ex(m, n, least)),
        Implies(conj(Not(_empty(sigma, fresh)), no_least), _empty(n, fresh)),
    )


def _g_graph(y: str, g: str, fresh: _Names) -> Formula:
    """g is the least n with 2n ∉ y (g ranges over omega at the call site)"""
    k = fresh("k")
    return conj(Not(_has_double(g, y, fresh)), _all(k, g, _has_double(k, y, fresh)))


def _shift_graph(m: str, y: str, x: str, fresh: _Names) -> Formula:
    """x = y ∪ {2k : k < m + g(y)}"""
    g, top, k, w, k2 = fresh("g"), fresh("t"), fresh("k"), fresh("w"), fresh("k")
    return _ex(
        g,
        OMEGA,
        _ex(
            top,
            OMEGA,
            conj(
                _g_graph(y, g, fresh),
                Plus(m, g, top),
                _subset(y, x, fresh),
                _all(k, top, _has_double(k, x, fresh)),
                _all(w, x, disj(Mem(w, y), _ex(k2, top, Plus(k2, k2, w)))),
            ),
        ),
    )


def _concat_graph(sigma: str, tau: str, ups: str, fresh: _Names) -> Formula:
    m, y, x, x2, y2 = fresh("m"), fresh("y"), fresh("x"), fresh("x"), fresh("y")
    return _ex(
        m,
        OMEGA,
        conj(
            _lh_graph(sigma, m, fresh),
            _subset(sigma, ups, fresh),
            _all(y, tau, _ex(x, ups, _shift_graph(m, y, x, fresh))),
            _all(x2, ups, disj(Mem(x2, sigma), _ex(y2, tau, _shift_graph(m, y2, x2, fresh)))),
        ),
    )


_BUILDERS: Dict[str, Tuple[Tuple[str, ...], Callable]] = {
    "s_graph": (("x", "y"), _s_graph),
    "f0_graph": (("a", "b"), _f0_graph),
    "f1_graph": (("a", "b"), _f1_graph),
    "pair_graph": (("a", "b", "c"), _pair_graph),
    "lh_graph": (("sigma", "n"), _lh_graph),
    "concat_graph": (("sigma", "tau", "ups"), _concat_graph),
}

BUILTIN_NAMES = tuple(_BUILDERS)


def builtin_arguments(name: str) -> Tuple[str, ...]:
    if name not in _BUILDERS:
        raise UnknownFormulaName(f"no builtin formula named {name!r}; known: {', '.join(BUILTIN_NAMES)}")
    return _BUILDERS[name][0]


def builtin_formula(name: str) -> Formula:
    args = builtin_arguments(name)
    return _BUILDERS[name][1](*args, _Names())


def _lh_rel(sigma: HFSet, n: HFSet) -> bool:
    return n is nat(lh(sigma))


DIRECT: Dict[str, Callable[..., bool]] = {
    "s_graph": lambda x, y: s_fn(x) is y,
    "f0_graph": lambda a, b: f_pair0(a) is b,
    "f1_graph": lambda a, b: f_pair1(a) is b,
    "pair_graph": lambda a, b, c: flat_pair(a, b) is c,
    "lh_graph": _lh_rel,
    "concat_graph": lambda s, t, u: concat(s, t) is u,
}


def direct_relation(name: str) -> Callable[..., bool]:
    builtin_arguments(name)
    return DIRECT[name]

