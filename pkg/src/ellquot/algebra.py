"""Exact arithmetic kernel: sparse multivariate polynomials over Q.

Polynomials are stored in a sparse distributed form (exponent vector ->
coefficient) over an ordered tuple of variable names.  Scalars are
:class:`fractions.Fraction`.  The univariate routines (gcd, Yun's squarefree
decomposition, gcd-free bases, valuations at places) work on dense
coefficient lists internally.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Rational = Fraction
Scalar = Union[int, Fraction]

__all__ = [
    "Rational",
    "MultiPoly",
    "Place",
    "PolyError",
    "PolyParseError",
    "UnknownVariableError",
    "NegativeExponentError",
    "DivisionError",
    "ContextError",
    "NotUnivariateError",
    "SplitPlaceError",
    "parse_poly",
    "poly_arith",
    "univariate_gcd",
    "squarefree_decomposition",
    "gcd_free_basis",
    "valuation",
    "specialize",
    "poly_sqrt",
]


class PolyError(ValueError):
    """Base class for kernel errors."""


class PolyParseError(PolyError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownVariableError(PolyParseError):
    pass


class NegativeExponentError(PolyParseError):
    pass


class DivisionError(PolyError):
    """Exact division left a nonzero remainder."""


class ContextError(PolyError):
    """Two variable contexts cannot be merged."""


class NotUnivariateError(PolyError):
    pass


class SplitPlaceError(PolyError):
    """The roots of a place behave non-uniformly; refine with gcd_free_basis."""


def _frac(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"not an exact scalar: {c!r}")


def _merge_vars(a: tuple[str, ...], b: tuple[str, ...]) -> tuple[str, ...]:
    if a == b:
        return a
    shared_a = [v for v in a if v in b]
    shared_b = [v for v in b if v in a]
    if shared_a != shared_b:
        raise ContextError(f"variable orders {a} and {b} disagree on shared names")
    return a + tuple(v for v in b if v not in a)


def _grlex_key(exp: tuple[int, ...]) -> tuple:
    return (sum(exp), exp)


class MultiPoly:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("_vars", "_terms", "_hash")

    def __init__(self, variables: Iterable[str] = (), terms: Mapping[tuple[int, ...], Scalar] | None = None):
        vs = tuple(variables)
        if len(set(vs)) != len(vs):
            raise ContextError(f"repeated variable in {vs}")
        clean: dict[tuple[int, ...], Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != len(vs):
                raise ContextError(f"exponent {exp} does not match variables {vs}")
            if any(e < 0 for e in exp):
                raise PolyError(f"negative exponent in {exp}")
            c = _frac(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self._vars = vs
        self._terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, c: Scalar, variables: Iterable[str] = ()) -> "MultiPoly":
        vs = tuple(variables)
        return cls(vs, {(0,) * len(vs): c})

    @classmethod
    def var(cls, name: str, variables: Iterable[str] | None = None) -> "MultiPoly":
        vs = tuple(variables) if variables is not None else (name,)
        if name not in vs:
            raise UnknownVariableError(f"unknown variable {name!r}", 0)
        exp = tuple(1 if v == name else 0 for v in vs)
        return cls(vs, {exp: 1})

    @classmethod
    def from_dense(cls, coeffs: Sequence[Scalar], var: str) -> "MultiPoly":
        return cls((var,), {(i,): c for i, c in enumerate(coeffs) if c})

    # -- basic accessors ------------------------------------------------
    @property
    def variables(self) -> tuple[str, ...]:
        return self._vars

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def items(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in canonical (descending graded-lex) order."""
        return sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise PolyError(f"{self} is not constant")
        return next(iter(self._terms.values()), Fraction(0))

    def used_variables(self) -> tuple[str, ...]:
        used = set()
        for exp in self._terms:
            used.update(v for v, e in zip(self._vars, exp) if e)
        return tuple(v for v in self._vars if v in used)

    def degree(self, var: str | None = None) -> int:
        """Degree in ``var`` (total degree if None); -1 for the zero polynomial."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(e) for e in self._terms)
        if var not in self._vars:
            return 0
        i = self._vars.index(var)
        return max(e[i] for e in self._terms)

    def leading_term(self) -> tuple[tuple[int, ...], Fraction]:
        if not self._terms:
            raise PolyError("zero polynomial has no leading term")
        exp = max(self._terms, key=_grlex_key)
        return exp, self._terms[exp]

    def leading_coefficient(self) -> Fraction:
        return self.leading_term()[1]

    # -- context handling ------------------------------------------------
    def with_variables(self, variables: Iterable[str]) -> "MultiPoly":
        vs = tuple(variables)
        if vs == self._vars:
            return self
        missing = [v for v in self.used_variables() if v not in vs]
        if missing:
            raise ContextError(f"{missing} used but absent from {vs}")
        idx = [self._vars.index(v) if v in self._vars else None for v in vs]
        new = {}
        for exp, c in self._terms.items():
            new[tuple(exp[i] if i is not None else 0 for i in idx)] = c
        return MultiPoly(vs, new)

    def _coerce(self, other) -> tuple["MultiPoly", "MultiPoly"]:
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(other, self._vars)
        if not isinstance(other, MultiPoly):
            return NotImplemented, NotImplemented
        vs = _merge_vars(self._vars, other._vars)
        return self.with_variables(vs), other.with_variables(vs)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        new = dict(a._terms)
        for exp, c in b._terms.items():
            s = new.get(exp, Fraction(0)) + c
            if s:
                new[exp] = s
            else:
                new.pop(exp, None)
        return MultiPoly(a._vars, new)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self._vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return b + (-a)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MultiPoly(self._vars)
            return MultiPoly(self._vars, {e: c * other for e, c in self._terms.items()})
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        new: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in a._terms.items():
            for e2, c2 in b._terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                new[e] = new.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(a._vars, new)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise PolyError(f"exponent must be a nonnegative integer, got {k!r}")
        result = MultiPoly.constant(1, self._vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c: Scalar) -> "MultiPoly":
        return self * _frac(c)

    def exact_div(self, q: "MultiPoly") -> "MultiPoly":
        """Return r with r*q == self; DivisionError if q does not divide."""
        if isinstance(q, (int, Fraction)):
            q = MultiPoly.constant(q, self._vars)
        p, q = self._coerce(q)
        if q.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lq, cq = q.leading_term()
        rem = dict(p._terms)
        out: dict[tuple[int, ...], Fraction] = {}
        while rem:
            lp = max(rem, key=_grlex_key)
            if any(x < y for x, y in zip(lp, lq)):
                raise DivisionError(f"{q} does not divide {self}")
            m = tuple(x - y for x, y in zip(lp, lq))
            c = rem[lp] / cq
            out[m] = c
            for e, d in q._terms.items():
                k = tuple(x + y for x, y in zip(m, e))
                s = rem.get(k, Fraction(0)) - c * d
                if s:
                    rem[k] = s
                else:
                    rem.pop(k, None)
        return MultiPoly(p._vars, out)

    def divides(self, p: "MultiPoly") -> bool:
        try:
            p.exact_div(self)
        except DivisionError:
            return False
        return True

    def derivative(self, var: str) -> "MultiPoly":
        if var not in self._vars:
            return MultiPoly(self._vars)
        i = self._vars.index(var)
        new = {}
        for e, c in self._terms.items():
            if e[i]:
                new[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
        return MultiPoly(self._vars, new)

    def specialize(self, assignment: Mapping[str, Scalar]) -> "MultiPoly":
        """Substitute rational values; assigned variables leave the context."""
        for name in assignment:
            if name not in self._vars:
                raise ContextError(f"{name!r} not in context {self._vars}")
        keep = [i for i, v in enumerate(self._vars) if v not in assignment]
        vals = [(i, _frac(assignment[v])) for i, v in enumerate(self._vars) if v in assignment]
        new: dict[tuple[int, ...], Fraction] = {}
        for e, c in self._terms.items():
            for i, x in vals:
                if e[i]:
                    c = c * x ** e[i]
            if c:
                k = tuple(e[i] for i in keep)
                new[k] = new.get(k, Fraction(0)) + c
        return MultiPoly(tuple(self._vars[i] for i in keep), new)

    def substitute(self, mapping: Mapping[str, "MultiPoly | Scalar"]) -> "MultiPoly":
        """Replace variables by polynomials (simultaneous substitution)."""
        subs = {}
        for name, val in mapping.items():
            if name not in self._vars:
                raise ContextError(f"{name!r} not in context {self._vars}")
            subs[name] = val if isinstance(val, MultiPoly) else MultiPoly.constant(val)
        rest = tuple(v for v in self._vars if v not in subs)
        ctx = rest
        for val in subs.values():
            ctx = _merge_vars(ctx, tuple(v for v in val._vars if v not in ctx or v in rest))
        subs = {k: v.with_variables(ctx) for k, v in subs.items()}
        powers: dict[tuple[str, int], MultiPoly] = {}

        def power(name, k):
            key = (name, k)
            if key not in powers:
                powers[key] = subs[name] ** k
            return powers[key]

        result = MultiPoly(ctx)
        rest_idx = {v: ctx.index(v) for v in rest}
        for e, c in self._terms.items():
            mono = [0] * len(ctx)
            term = MultiPoly(ctx, {tuple(mono): c})
            for v, k in zip(self._vars, e):
                if not k:
                    continue
                if v in subs:
                    term = term * power(v, k)
                else:
                    mono[rest_idx[v]] += k
            if any(mono):
                term = term * MultiPoly(ctx, {tuple(mono): 1})
            result = result + term
        return result

    # -- univariate views --------------------------------------------------
    def to_dense(self, var: str) -> list[Fraction]:
        """Coefficients low-to-high; requires the polynomial to involve only ``var``."""
        others = [v for v in self.used_variables() if v != var]
        if others:
            raise NotUnivariateError(f"{self} involves {others} besides {var!r}")
        if not self._terms:
            return []
        i = self._vars.index(var) if var in self._vars else None
        deg = max(e[i] for e in self._terms) if i is not None else 0
        out = [Fraction(0)] * (deg + 1)
        for e, c in self._terms.items():
            out[e[i] if i is not None else 0] = c
        return out

    def coefficients_in(self, var: str) -> dict[int, "MultiPoly"]:
        """Split as sum of c_k * var^k with c_k free of var."""
        if var not in self._vars:
            return {0: self} if self._terms else {}
        i = self._vars.index(var)
        parts: dict[int, dict] = {}
        for e, c in self._terms.items():
            parts.setdefault(e[i], {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: MultiPoly(self._vars, t) for k, t in parts.items()}

    # -- comparison and display ------------------------------------------
    def _canon(self) -> frozenset:
        out = []
        for e, c in self._terms.items():
            out.append((tuple(sorted((v, k) for v, k in zip(self._vars, e) if k)), c))
        return frozenset(out)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._canon() == other._canon()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._canon())
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for exp, c in self.items():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self._vars, exp) if k
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            if not pieces:
                pieces.append(body if sign == "+" else f"-{body}")
            else:
                pieces.append(f"{sign} {body}")
        return " ".join(pieces)

    def __repr__(self):
        return f"MultiPoly({self._vars!r}, {str(self)!r})"


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PolyParseError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: tuple[str, ...]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.vars = variables

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            raise PolyParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def parse(self) -> MultiPoly:
        result = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise PolyParseError(f"unexpected token {val!r}", pos)
        return result

    def expr(self) -> MultiPoly:
        result = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> MultiPoly:
        result = self.unary()
        while self.peek()[1] in ("*", "/"):
            op, pos = self.take()[1:]
            rhs = self.unary()
            if op == "*":
                result = result * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise PolyParseError("division only by a nonzero constant", pos)
                result = result * (1 / rhs.constant_value())
        return result

    def unary(self) -> MultiPoly:
        val = self.peek()[1]
        if val in ("+", "-"):
            self.take()
            inner = self.unary()
            return -inner if val == "-" else inner
        return self.power()

    def power(self) -> MultiPoly:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.peek()
            paren = val == "("
            if paren:
                self.take()
                kind, val, pos = self.peek()
            if val == "-":
                raise NegativeExponentError("negative exponent", pos)
            if kind != "num":
                raise PolyParseError("exponent must be a nonnegative integer", pos)
            self.take()
            if paren:
                self.expect(")")
            base = base ** int(val)
            if self.peek()[1] == "^":
                raise PolyParseError("chained exponents need parentheses", self.peek()[2])
        return base

    def atom(self) -> MultiPoly:
        kind, val, pos = self.take()
        if kind == "num":
            return MultiPoly.constant(int(val), self.vars)
        if kind == "name":
            if val not in self.vars:
                raise UnknownVariableError(f"unknown variable {val!r}", pos)
            return MultiPoly.var(val, self.vars)
        if val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise PolyParseError(f"unexpected {val or 'end of input'!r}", pos)


def parse_poly(text: str, variables: Sequence[str]) -> MultiPoly:
    """Parse ``text`` into a polynomial over the given ordered variables."""
    return _Parser(text, tuple(variables)).parse()


def poly_arith(op: str, p: MultiPoly, q: MultiPoly) -> MultiPoly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "exact_div":
        return p.exact_div(q)
    raise ValueError(f"unknown operation {op!r}")


def specialize(p: MultiPoly, assignment: Mapping[str, Scalar]) -> MultiPoly:
    return p.specialize(assignment)


# ---------------------------------------------------------------------------
# dense univariate helpers (coefficient lists, low degree first)

def _trim(a: list[Fraction]) -> list[Fraction]:
    while a and not a[-1]:
        a.pop()
    return a


def _u_sub(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _u_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _u_divmod(a, b):
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lb = b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        c = a[-1] / lb
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] -= c * y
        _trim(a)
    return _trim(q), a


def _u_monic(a):
    if not a:
        return []
    lc = a[-1]
    return [c / lc for c in a]


def _u_gcd(a, b):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _u_divmod(a, b)[1]
    return _u_monic(a)


def _u_deriv(a):
    return _trim([a[i] * i for i in range(1, len(a))])


def _u_exact(a, b):
    q, r = _u_divmod(a, b)
    if r:
        raise DivisionError("nonzero remainder")
    return q


def _dense(p: MultiPoly, var: str) -> list[Fraction]:
    return _trim(p.to_dense(var))


def univariate_gcd(p: MultiPoly, q: MultiPoly, var: str) -> MultiPoly:
    """Monic gcd of two univariate polynomials in ``var``."""
    return MultiPoly.from_dense(_u_gcd(_dense(p, var), _dense(q, var)), var)


def _yun(a: list[Fraction]) -> list[tuple[list[Fraction], int]]:
    a = _u_monic(a)
    da = _u_deriv(a)
    b = _u_gcd(a, da)
    c = _u_exact(a, b)
    d = _u_sub(_u_exact(da, b), _u_deriv(c))
    out = []
    i = 1
    while len(c) > 1:
        g = _u_gcd(c, d)
        if len(g) > 1:
            out.append((g, i))
        c = _u_exact(c, g)
        d = _u_sub(_u_exact(d, g), _u_deriv(c))
        i += 1
    return out


def squarefree_decomposition(p: MultiPoly, var: str) -> list[tuple[MultiPoly, int]]:
    """Yun decomposition: p = lc(p) * prod(f_i ** m_i), f_i monic squarefree coprime."""
    a = _dense(p, var)
    if not a:
        raise PolyError("squarefree decomposition of the zero polynomial")
    if len(a) == 1:
        return []
    parts = sorted(_yun(a), key=lambda fm: (-fm[1], _basis_key(fm[0])))
    return [(MultiPoly.from_dense(f, var), m) for f, m in parts]


def _basis_key(f: list[Fraction]):
    return (len(f), tuple((abs(c), c) for c in f))


def gcd_free_basis(polys: Sequence[MultiPoly], var: str) -> tuple[list[MultiPoly], list[list[int]]]:
    """Pairwise coprime monic squarefree basis with exponent matrix."""
    dense = []
    for p in polys:
        a = _dense(p, var)
        if not a:
            raise PolyError("gcd-free basis of the zero polynomial")
        dense.append(a)
    pool = [f for a in dense for f, _ in _yun(a)]
    basis: list[list[Fraction]] = []
    for f in pool:
        pending = [f]
        while pending:
            g = pending.pop()
            if len(g) <= 1:
                continue
            for idx, b in enumerate(basis):
                h = _u_gcd(g, b)
                if len(h) > 1:
                    del basis[idx]
                    pending.extend([h, _u_exact(b, h), _u_exact(g, h)])
                    break
            else:
                basis.append(g)
    basis.sort(key=_basis_key)
    exps = []
    for a in dense:
        row = []
        for b in basis:
            k = 0
            while True:
                q, r = _u_divmod(a, b)
                if r:
                    break
                a, k = q, k + 1
            row.append(k)
        exps.append(row)
    return [MultiPoly.from_dense(b, var) for b in basis], exps


# ---------------------------------------------------------------------------
# places

@dataclass(frozen=True)
class Place:
    """A point packet of P^1: Finite(monic squarefree poly) or Infinity."""

    var: str
    poly: MultiPoly | None = None

    def __post_init__(self):
        if self.poly is None:
            return
        a = _dense(self.poly, self.var)
        if len(a) < 2:
            raise PolyError(f"place polynomial {self.poly} must be nonconstant")
        if a[-1] != 1:
            raise PolyError(f"place polynomial {self.poly} must be monic")
        if len(_u_gcd(a, _u_deriv(a))) > 1:
            raise PolyError(f"place polynomial {self.poly} must be squarefree")
        object.__setattr__(self, "poly", MultiPoly.from_dense(a, self.var))

    @classmethod
    def finite(cls, poly: MultiPoly | str, var: str) -> "Place":
        if isinstance(poly, str):
            poly = parse_poly(poly, [var])
        return cls(var, poly)

    @classmethod
    def infinity(cls, var: str) -> "Place":
        return cls(var, None)

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree(self.var)

    def __str__(self):
        return "inf" if self.poly is None else str(self.poly)

    def sort_key(self):
        if self.poly is None:
            return (1, ())
        return (0, _basis_key(_dense(self.poly, self.var)))


def valuation(p: MultiPoly, place: Place) -> int:
    """Order of vanishing of ``p`` along a finite place."""
    if place.poly is None:
        raise ValueError("valuation needs a finite place")
    a = _dense(p, place.var)
    if not a:
        raise PolyError("valuation of the zero polynomial")
    g = _dense(place.poly, place.var)
    k = 0
    while True:
        q, r = _u_divmod(a, g)
        if r:
            break
        a, k = q, k + 1
    if len(_u_gcd(a, g)) > 1:
        raise SplitPlaceError(f"roots of {place.poly} have non-uniform order in {p}")
    return k


def poly_sqrt(p: MultiPoly, var: str) -> MultiPoly | None:
    """Square root of a univariate polynomial, or None if p is not a square in Q[var]."""
    a = _dense(p, var)
    if not a:
        return MultiPoly((var,))
    lc = a[-1]
    rl = _rational_sqrt(lc)
    if rl is None:
        return None
    root = [rl]
    for f, m in _yun(a):
        if m % 2:
            return None
        for _ in range(m // 2):
            root = _u_mul(root, f)
    return MultiPoly.from_dense(root, var)


def _rational_sqrt(c: Fraction) -> Fraction | None:
    from math import isqrt

    if c < 0:
        return None
    n, d = c.numerator, c.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None
