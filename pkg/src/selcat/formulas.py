"""Positive existential formulas over unary function symbols e_k.

Terms are variables or applications ``e_k(t)``; formulas are equalities,
disequalities, conjunctions and existential quantifiers with an optional
disequality guard ``(exists z != g)``. The text form is a parenthesised
prefix notation::

    (exists z0 x (= (e 3 z0) x))

where the third slot is the guard term, or ``_`` when there is none.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Union


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Apply:
    fn: int
    arg: "Term"


Term = Union[Var, Apply]


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Neq:
    left: Term
    right: Term


@dataclass(frozen=True)
class And:
    parts: tuple = ()


@dataclass(frozen=True)
class Exists:
    var: str
    guard: Term | None
    body: "Formula"


Formula = Union[Eq, Neq, And, Exists]

TRUE = And(())
_RESERVED = {"e", "and", "exists", "=", "!=", "_"}


def conj(*parts: Formula) -> Formula:
    """Conjunction with nested conjunctions flattened; one part is returned as is."""
    flat = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, And) else (p,))
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def term_vars(t: Term) -> frozenset[str]:
    while isinstance(t, Apply):
        t = t.arg
    return frozenset((t.name,))


def free_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, (Eq, Neq)):
        return term_vars(phi.left) | term_vars(phi.right)
    if isinstance(phi, And):
        return frozenset().union(*(free_vars(p) for p in phi.parts))
    inner = free_vars(phi.body) - {phi.var}
    return inner | (term_vars(phi.guard) if phi.guard is not None else frozenset())


def all_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, (Eq, Neq)):
        return term_vars(phi.left) | term_vars(phi.right)
    if isinstance(phi, And):
        return frozenset().union(*(all_vars(p) for p in phi.parts))
    out = all_vars(phi.body) | {phi.var}
    return out | (term_vars(phi.guard) if phi.guard is not None else frozenset())


def symbols(phi: Formula) -> frozenset[int]:
    def of_term(t):
        out = set()
        while isinstance(t, Apply):
            out.add(t.fn)
            t = t.arg
        return out

    if isinstance(phi, (Eq, Neq)):
        return frozenset(of_term(phi.left) | of_term(phi.right))
    if isinstance(phi, And):
        return frozenset().union(*(symbols(p) for p in phi.parts))
    g = of_term(phi.guard) if phi.guard is not None else set()
    return symbols(phi.body) | g


def term_size(t: Term) -> int:
    n = 1
    while isinstance(t, Apply):
        n += 1
        t = t.arg
    return n


def size(phi: Formula) -> int:
    if isinstance(phi, (Eq, Neq)):
        return 1 + term_size(phi.left) + term_size(phi.right)
    if isinstance(phi, And):
        return 1 + sum(size(p) for p in phi.parts)
    return 1 + (term_size(phi.guard) if phi.guard is not None else 0) + size(phi.body)


def depth(phi: Formula) -> int:
    """Quantifier nesting depth."""
    if isinstance(phi, (Eq, Neq)):
        return 0
    if isinstance(phi, And):
        return max((depth(p) for p in phi.parts), default=0)
    return 1 + depth(phi.body)


def subst_term(t: Term, name: str, repl: Term) -> Term:
    if isinstance(t, Var):
        return repl if t.name == name else t
    return Apply(t.fn, subst_term(t.arg, name, repl))


def _fresh(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    k = 0
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


def substitute(phi: Formula, name: str, repl: Term) -> Formula:
    """Capture-avoiding substitution of ``repl`` for free ``name``."""
    if isinstance(phi, Eq):
        return Eq(subst_term(phi.left, name, repl), subst_term(phi.right, name, repl))
    if isinstance(phi, Neq):
        return Neq(subst_term(phi.left, name, repl), subst_term(phi.right, name, repl))
    if isinstance(phi, And):
        return And(tuple(substitute(p, name, repl) for p in phi.parts))
    guard = subst_term(phi.guard, name, repl) if phi.guard is not None else None
    if phi.var == name:
        return Exists(phi.var, guard, phi.body)
    var, body = phi.var, phi.body
    if var in term_vars(repl):
        var = _fresh(var.rstrip("0123456789") or "z", all_vars(body) | term_vars(repl) | {name})
        body = substitute(body, phi.var, Var(var))
    return Exists(var, guard, substitute(body, name, repl))


def instantiate(phi: Formula, repl: Term, name: str = "x") -> Formula:
    """phi(t): substitute a term for the distinguished free variable."""
    return substitute(phi, name, repl)


# -- text form -------------------------------------------------------------

def term_text(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    return f"(e {t.fn} {term_text(t.arg)})"


def to_text(phi: Formula) -> str:
    if isinstance(phi, Eq):
        return f"(= {term_text(phi.left)} {term_text(phi.right)})"
    if isinstance(phi, Neq):
        return f"(!= {term_text(phi.left)} {term_text(phi.right)})"
    if isinstance(phi, And):
        return "(and" + "".join(" " + to_text(p) for p in phi.parts) + ")"
    g = term_text(phi.guard) if phi.guard is not None else "_"
    return f"(exists {phi.var} {g} {to_text(phi.body)})"


_TOKEN = re.compile(r"\(|\)|[^\s()]+")


class ParseError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at offset {position}")
        self.position = position


def parse(text: str) -> Formula:
    tokens = [(m.group(), m.start()) for m in _TOKEN.finditer(text)]
    pos = 0

    def peek():
        if pos >= len(tokens):
            raise ParseError("unexpected end of input", len(text))
        return tokens[pos]

    def take(expected=None):
        nonlocal pos
        tok, at = peek()
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", at)
        pos += 1
        return tok, at

    def term():
        tok, at = take()
        if tok == "(":
            take("e")
            k, kat = take()
            if not k.isdigit():
                raise ParseError(f"function index must be a natural, found {k!r}", kat)
            arg = term()
            take(")")
            return Apply(int(k), arg)
        if tok in _RESERVED or tok == ")":
            raise ParseError(f"expected a term, found {tok!r}", at)
        return Var(tok)

    def formula():
        take("(")
        head, at = take()
        if head in ("=", "!="):
            left, right = term(), term()
            take(")")
            return Eq(left, right) if head == "=" else Neq(left, right)
        if head == "and":
            parts = []
            while peek()[0] != ")":
                parts.append(formula())
            take(")")
            return And(tuple(parts))
        if head == "exists":
            var, vat = take()
            if var in _RESERVED or var in "()":
                raise ParseError(f"bad bound variable {var!r}", vat)
            if peek()[0] == "_":
                take()
                guard = None
            else:
                guard = term()
            body = formula()
            take(")")
            return Exists(var, guard, body)
        raise ParseError(f"unknown connective {head!r}", at)

    phi = formula()
    if pos != len(tokens):
        raise ParseError("trailing input", tokens[pos][1])
    return phi


# -- enumeration -----------------------------------------------------------

@lru_cache(maxsize=None)
def _terms(scope: tuple, syms: tuple, n: int) -> tuple:
    if n == 1:
        return tuple(Var(v) for v in scope)
    return tuple(Apply(k, t) for k in syms for t in _terms(scope, syms, n - 1))


@lru_cache(maxsize=None)
def _formulas(scope: tuple, syms: tuple, n: int, nbound: int) -> tuple:
    out = []
    if n == 1:
        out.append(TRUE)
    for ls in range(1, n - 1):
        for left in _terms(scope, syms, ls):
            for right in _terms(scope, syms, n - 1 - ls):
                out.append(Eq(left, right))
                out.append(Neq(left, right))
    for s1 in range(2, n - 2):
        for f in _formulas(scope, syms, s1, nbound):
            for g in _formulas(scope, syms, n - 1 - s1, nbound):
                out.append(And((f, g)))
    z = f"z{nbound}"
    inner = scope + (z,)
    if n >= 2:
        out.extend(Exists(z, None, body) for body in _formulas(inner, syms, n - 1, nbound + 1))
    for gs in range(1, n - 1):
        for g in _terms(scope, syms, gs):
            out.extend(Exists(z, g, body)
                       for body in _formulas(inner, syms, n - 1 - gs, nbound + 1))
    return tuple(out)


def enumerate_formulas(syms: Iterable[int], max_size: int, free: tuple = ("x",)) -> list:
    """All formulas of size <= max_size in Goedel order: by size, then by text.

    A formula's Goedel code is its position in the returned list.
    """
    syms = tuple(sorted(set(syms)))
    out = []
    for n in range(1, max_size + 1):
        layer = _formulas(tuple(free), syms, n, 0)
        out.extend(sorted(set(layer), key=to_text))
    return out
