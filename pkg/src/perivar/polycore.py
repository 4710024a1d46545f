"""Exact multivariate polynomial arithmetic over arbitrary-precision integers.

A polynomial is a dict mapping packed exponent keys to nonzero int
coefficients, over an ordered tuple of symbol names.  Exponents are packed
16 bits per symbol, first symbol in the highest bits, so plain integer
comparison of keys is lexicographic order and (total degree, key) is graded
lex.  Monomial multiplication is integer addition of keys.

Everything here is immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Union[int, float, complex, Fraction]

_BITS = 16
_MASK = (1 << _BITS) - 1
_EXP_LIMIT = 1 << (_BITS - 1)  # top bit of each field is a borrow guard


class PolyError(Exception):
    """Base class for polynomial arithmetic errors."""


class SymbolMismatchError(PolyError):
    """Operands are defined over different symbol tuples."""


class InexactDivisionError(PolyError):
    """Requested exact division has no exact quotient."""


class GcdFailure(PolyError):
    """Neither the heuristic nor the fallback gcd succeeded."""


def _guard_mask(nsym: int) -> int:
    m = 0
    for i in range(nsym):
        m |= _EXP_LIMIT << (_BITS * i)
    return m


class MultiPoly:
    """Sparse exact polynomial in ZZ[symbols]."""

    __slots__ = ("symbols", "_terms")

    def __init__(self, symbols: Iterable[str], terms: Mapping[tuple, int] | None = None):
        self.symbols = tuple(symbols)
        packed = {}
        if terms:
            n = len(self.symbols)
            for exp, coef in terms.items():
                coef = int(coef)
                if coef == 0:
                    continue
                if len(exp) != n:
                    raise PolyError(f"exponent vector {exp} does not match {n} symbols")
                key = 0
                for e in exp:
                    if e < 0 or e >= _EXP_LIMIT:
                        raise PolyError(f"exponent {e} out of supported range")
                    key = (key << _BITS) | e
                packed[key] = packed.get(key, 0) + coef
                if packed[key] == 0:
                    del packed[key]
        self._terms = packed

    @classmethod
    def _raw(cls, symbols: tuple, packed: dict) -> "MultiPoly":
        p = object.__new__(cls)
        p.symbols = symbols
        p._terms = packed
        return p

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, symbols) -> "MultiPoly":
        return cls._raw(tuple(symbols), {})

    @classmethod
    def const(cls, symbols, value: int) -> "MultiPoly":
        value = int(value)
        symbols = tuple(symbols)
        return cls._raw(symbols, {0: value} if value else {})

    @classmethod
    def var(cls, symbols, name: str) -> "MultiPoly":
        symbols = tuple(symbols)
        i = symbols.index(name)
        key = 1 << (_BITS * (len(symbols) - 1 - i))
        return cls._raw(symbols, {key: 1})

    @classmethod
    def variables(cls, names: str) -> tuple:
        """Return the generators of ZZ[names], e.g. ``a, b = MultiPoly.variables("a b")``."""
        symbols = tuple(names.split())
        return tuple(cls.var(symbols, s) for s in symbols)

    # ------------------------------------------------------------------
    # inspection

    def _unpack(self, key: int) -> tuple:
        n = len(self.symbols)
        return tuple((key >> (_BITS * (n - 1 - i))) & _MASK for i in range(n))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    def constant_value(self) -> int:
        if self.is_zero:
            return 0
        if not self.is_constant:
            raise PolyError("not a constant polynomial")
        return self._terms[0]

    def total_degree(self) -> int:
        if not self._terms:
            return 0
        return max(sum(self._unpack(k)) for k in self._terms)

    def num_terms(self) -> int:
        return len(self._terms)

    def terms_list(self) -> list:
        """All (exponent tuple, coefficient) pairs, graded-lex descending."""
        keys = sorted(self._terms, key=self._grlex_key, reverse=True)
        return [(self._unpack(k), self._terms[k]) for k in keys]

    def _grlex_key(self, key: int) -> tuple:
        return (sum(self._unpack(key)), key)

    def leading(self) -> tuple:
        """(packed key, coefficient) of the graded-lex leading term."""
        if not self._terms:
            raise PolyError("zero polynomial has no leading term")
        k = max(self._terms, key=self._grlex_key)
        return k, self._terms[k]

    def max_coeff(self) -> int:
        return max((abs(c) for c in self._terms.values()), default=0)

    # ------------------------------------------------------------------
    # ring operations

    def _check(self, other: "MultiPoly"):
        if self.symbols != other.symbols:
            raise SymbolMismatchError(f"{self.symbols} vs {other.symbols}")

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.is_constant and self.constant_value() == other
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.symbols == other.symbols and self._terms == other._terms

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.symbols, {k: -c for k, c in self._terms.items()})

    def __add__(self, other) -> "MultiPoly":
        if isinstance(other, int):
            other = MultiPoly.const(self.symbols, other)
        self._check(other)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        for k, c in b.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return MultiPoly._raw(self.symbols, out)

    __radd__ = __add__

    def __sub__(self, other) -> "MultiPoly":
        if isinstance(other, int):
            other = MultiPoly.const(self.symbols, other)
        return self.__add__(other.__neg__())

    def __rsub__(self, other) -> "MultiPoly":
        return (-self).__add__(other)

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, int):
            if other == 0:
                return MultiPoly.zero(self.symbols)
            return MultiPoly._raw(self.symbols, {k: c * other for k, c in self._terms.items()})
        self._check(other)
        a, b = self._terms, other._terms
        if not a or not b:
            return MultiPoly.zero(self.symbols)
        if len(a) < len(b):
            a, b = b, a
        out = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                s = get(k, 0) + ca * cb
                if s:
                    out[k] = s
                else:
                    del out[k]
        return MultiPoly._raw(self.symbols, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise PolyError("negative power")
        result = MultiPoly.const(self.symbols, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # ------------------------------------------------------------------
    # content, normalization

    def content(self) -> int:
        """Positive gcd of the integer coefficients (0 for the zero polynomial)."""
        if not self._terms:
            return 0
        # seed with the smallest coefficient so the accumulator collapses
        # quickly; gcd(small, huge) is a single cheap reduction
        vals = list(self._terms.values())
        g = min(vals, key=lambda c: abs(c).bit_length())
        for c in vals:
            g = math.gcd(g, c)
            if g == 1:
                return 1
        return abs(g)

    def primitive(self) -> "MultiPoly":
        g = self.content()
        if g <= 1:
            return self
        return MultiPoly._raw(self.symbols, {k: c // g for k, c in self._terms.items()})

    def normalized(self) -> "MultiPoly":
        """Primitive part with positive leading (graded-lex) coefficient."""
        if self.is_zero:
            return self
        p = self.primitive()
        if p.leading()[1] < 0:
            p = -p
        return p

    # ------------------------------------------------------------------
    # evaluation / substitution

    def evaluate(self, values: Mapping[str, Scalar]) -> complex:
        """Numeric evaluation; every symbol must be bound to a number."""
        vals = []
        for s in self.symbols:
            if s not in values:
                raise PolyError(f"symbol {s!r} unbound")
            vals.append(complex(values[s]))
        n = len(self.symbols)
        total = 0j
        for key, coef in self._terms.items():
            term = complex(coef)
            for i in range(n):
                e = (key >> (_BITS * (n - 1 - i))) & _MASK
                if e:
                    term *= vals[i] ** e
            total += term
        return total

    def evaluate_exact(self, values: Mapping[str, int]) -> int:
        """Exact evaluation at an all-integer point."""
        vals = [int(values[s]) for s in self.symbols]
        n = len(self.symbols)
        total = 0
        for key, coef in self._terms.items():
            term = coef
            for i in range(n):
                e = (key >> (_BITS * (n - 1 - i))) & _MASK
                if e:
                    term *= vals[i] ** e
            total += term
        return total

    def substitute(self, bindings: Mapping[str, object]):
        """Exact composition (MultiPoly bindings) or numeric evaluation.

        If every binding value is a plain number the result is a complex
        number.  Otherwise all polynomial values must share one symbol set;
        symbols of ``self`` missing from ``bindings`` are retained when the
        target symbol set carries a symbol of the same name.
        """
        if all(isinstance(v, (int, float, complex, Fraction)) for v in bindings.values()):
            return self.evaluate(bindings)
        target = None
        for v in bindings.values():
            if isinstance(v, MultiPoly):
                if target is None:
                    target = v.symbols
                elif v.symbols != target:
                    raise SymbolMismatchError("bindings use mixed symbol sets")
        full = {}
        for s in self.symbols:
            v = bindings.get(s)
            if v is None:
                if s in target:
                    v = MultiPoly.var(target, s)
                else:
                    raise PolyError(f"symbol {s!r} unbound and absent from target symbols")
            elif isinstance(v, int):
                v = MultiPoly.const(target, v)
            elif not isinstance(v, MultiPoly):
                raise PolyError("bindings must be all numeric or all exact")
            full[s] = v
        n = len(self.symbols)
        out = MultiPoly.zero(target)
        powers = {s: {0: MultiPoly.const(target, 1)} for s in self.symbols}

        def power(s, e):
            cache = powers[s]
            if e not in cache:
                cache[e] = cache[e - 1] * full[s] if e - 1 in cache else full[s] ** e
            return cache[e]

        for key, coef in self._terms.items():
            term = MultiPoly.const(target, coef)
            for i in range(n):
                e = (key >> (_BITS * (n - 1 - i))) & _MASK
                if e:
                    term = term * power(self.symbols[i], e)
            out = out + term
        return out

    # ------------------------------------------------------------------
    # display / serialization

    def __repr__(self) -> str:
        return f"MultiPoly({' '.join(self.symbols) or '()'}: {self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exp, coef in self.terms_list():
            factors = []
            for s, e in zip(self.symbols, exp):
                if e == 1:
                    factors.append(s)
                elif e > 1:
                    factors.append(f"{s}^{e}")
            mono = "*".join(factors)
            if not mono:
                body = str(abs(coef))
            elif abs(coef) == 1:
                body = mono
            else:
                body = f"{abs(coef)}*{mono}"
            parts.append(("- " if coef < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def to_json_dict(self) -> dict:
        return {
            "symbols": list(self.symbols),
            "terms": [{"exp": list(exp), "coef": str(coef)} for exp, coef in self.terms_list()],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "MultiPoly":
        terms = {tuple(t["exp"]): int(t["coef"]) for t in data["terms"]}
        return cls(data["symbols"], terms)


# ----------------------------------------------------------------------
# division


def _monomial_quotient(ka: int, kb: int, guard: int):
    d = ka - kb
    if d < 0 or (d & guard):
        return None
    return d


def exact_div(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Exact quotient in ZZ[symbols]; raises InexactDivisionError otherwise.

    Iterated graded-lex leading-term elimination.  For a genuinely exact
    division each step peels one quotient term, so the loop length equals
    the quotient's term count.
    """
    f._check(g)
    if g.is_zero:
        raise InexactDivisionError("division by zero polynomial")
    if f.is_zero:
        return MultiPoly.zero(f.symbols)
    if g.is_constant:
        gc = g.constant_value()
        out = {}
        for k, c in f._terms.items():
            q, r = divmod(c, gc)
            if r:
                raise InexactDivisionError("coefficient not divisible")
            out[k] = q
        return MultiPoly._raw(f.symbols, out)

    import heapq

    guard = _guard_mask(len(f.symbols))
    gk, gc = g.leading()
    g_items = list(g._terms.items())
    rem = dict(f._terms)
    deg = f._grlex_key
    heap = [(-d, -k) for k, d in ((k, deg(k)[0]) for k in rem)]
    heapq.heapify(heap)
    quot = {}
    while heap:
        nd, nk = heapq.heappop(heap)
        k = -nk
        c = rem.get(k)
        if c is None:
            continue  # stale entry
        qk = _monomial_quotient(k, gk, guard)
        if qk is None:
            raise InexactDivisionError("leading monomial not divisible")
        qc, r = divmod(c, gc)
        if r:
            raise InexactDivisionError("leading coefficient not divisible")
        quot[qk] = qc
        for tk, tc in g_items:
            key = qk + tk
            s = rem.get(key, 0) - qc * tc
            if s:
                if key not in rem:
                    heapq.heappush(heap, (-deg(key)[0], -key))
                rem[key] = s
            else:
                rem.pop(key, None)
    if rem:
        raise InexactDivisionError("nonzero remainder")
    return MultiPoly._raw(f.symbols, quot)


def divides(g: MultiPoly, f: MultiPoly) -> bool:
    try:
        exact_div(f, g)
        return True
    except InexactDivisionError:
        return False


def div_rational(f: MultiPoly, g: MultiPoly):
    """Exact division in QQ[symbols]: returns (scale, quotient) with
    f = scale * quotient * g, quotient primitive.  Gauss' lemma reduces the
    question to exact integer division of primitive parts."""
    if g.is_zero:
        raise InexactDivisionError("division by zero polynomial")
    if f.is_zero:
        return Fraction(0), MultiPoly.zero(f.symbols)
    cf, cg = f.content(), g.content()
    q = exact_div(f.primitive(), g.primitive())
    cq = q.content()
    return Fraction(cf * cq, cg), q.primitive()


# ----------------------------------------------------------------------
# gcd: heuristic with integer evaluation, subresultant PRS fallback


def _eval_last(f: MultiPoly, xi: int) -> MultiPoly:
    """Substitute the last symbol by the integer xi (exactly)."""
    syms = f.symbols[:-1]
    pows = {0: 1}
    e_max = 0
    for k in f._terms:
        e = k & _MASK
        if e > e_max:
            e_max = e
    for e in range(1, e_max + 1):
        pows[e] = pows[e - 1] * xi
    out = {}
    for k, c in f._terms.items():
        key = k >> _BITS
        s = out.get(key, 0) + c * pows[k & _MASK]
        if s:
            out[key] = s
        else:
            del out[key]
    return MultiPoly._raw(syms, out)


def _interpolate_last(h: MultiPoly, xi: int, symbols: tuple) -> MultiPoly:
    """Rebuild a polynomial in the last symbol from its xi-adic image."""
    out = {}
    cur = dict(h._terms)
    e = 0
    half = xi // 2
    while cur:
        nxt = {}
        for k, c in cur.items():
            rest, d = divmod(c, xi)
            if d > half:
                d -= xi
                rest += 1
            if d:
                out[(k << _BITS) | e] = d
            if rest:
                nxt[k] = rest
        cur = nxt
        e += 1
        if e >= _EXP_LIMIT:
            raise GcdFailure("xi-adic interpolation ran away")
    return MultiPoly._raw(symbols, out)


def _heugcd(f: MultiPoly, g: MultiPoly, depth: int = 0) -> MultiPoly:
    """Heuristic gcd of nonzero polynomials, primitive result.

    Evaluates the last symbol at a large integer, recurses, and lifts the
    integer gcd back; a candidate is accepted only after exact trial
    divisions, so a returned value is always a true common divisor.
    """
    if not f.symbols:
        return MultiPoly.const((), math.gcd(f.constant_value(), g.constant_value()))
    if f.is_constant or g.is_constant:
        return MultiPoly.const(f.symbols, 1)
    xi = 2 * min(f.max_coeff(), g.max_coeff()) + 29
    for _ in range(6):
        fe = _eval_last(f, xi)
        ge = _eval_last(g, xi)
        if not fe.is_zero and not ge.is_zero:
            if not fe.symbols:
                he = MultiPoly.const((), math.gcd(fe.constant_value(), ge.constant_value()))
            else:
                he = _heugcd(fe.primitive(), ge.primitive(), depth + 1)
                he = he * math.gcd(fe.content(), ge.content())
            cand = _interpolate_last(he, xi, f.symbols).primitive()
            if not cand.is_zero and divides(cand, f) and divides(cand, g):
                return cand
        xi = xi * 73794 // 27011 + 3
    raise GcdFailure("heuristic gcd did not stabilize")


def _coeff_split(f: MultiPoly):
    """View f as a dense list in its first symbol, coefficients over the rest."""
    shift = _BITS * (len(f.symbols) - 1)
    rest_syms = f.symbols[1:]
    mask = (1 << shift) - 1
    deg = 0
    for k in f._terms:
        e = k >> shift
        if e > deg:
            deg = e
    coeffs = [dict() for _ in range(deg + 1)]
    for k, c in f._terms.items():
        coeffs[k >> shift][k & mask] = c
    return [MultiPoly._raw(rest_syms, d) for d in coeffs]


def _coeff_join(coeffs, symbols: tuple) -> MultiPoly:
    shift = _BITS * (len(symbols) - 1)
    out = {}
    for e, poly in enumerate(coeffs):
        for k, c in poly._terms.items():
            out[(e << shift) | k] = c
    return MultiPoly._raw(symbols, out)


def _gcd_full(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Gcd including the shared integer content (internal helper)."""
    if f.is_zero:
        return g if g.leading()[1] > 0 else -g
    if g.is_zero:
        return f if f.leading()[1] > 0 else -f
    ci = math.gcd(f.content(), g.content())
    if f.is_constant or g.is_constant:
        return MultiPoly.const(f.symbols, ci)
    return gcd(f, g) * ci


def _poly_content(coeffs) -> MultiPoly:
    """Full gcd of a list of coefficient polynomials (content in the main symbol)."""
    live = [c for c in coeffs if not c.is_zero]
    g = live[0]
    for c in live[1:]:
        g = _gcd_full(g, c)
        if g.is_constant and abs(g.constant_value()) == 1:
            break
    return g if g.leading()[1] > 0 else -g


def _prem(F: list, G: list):
    """Pseudo-remainder lc(G)^(degF-degG+1) * F mod G, dense in the main symbol."""
    dG = len(G) - 1
    lc = G[-1]
    R = list(F)
    n = len(F) - len(G) + 1
    while True:
        dR = len(R) - 1
        if dR < dG or not R:
            break
        top = R[-1]
        n -= 1
        R = [r * lc for r in R[:-1]]
        for i in range(dG):
            R[dR - dG + i] = R[dR - dG + i] - top * G[i]
        while R and R[-1].is_zero:
            R.pop()
    if n > 0 and R:
        scale = lc ** n
        R = [r * scale for r in R]
    return R


def _prs_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Primitive-PRS gcd on the first symbol, recursing on the remaining
    symbols for contents.  Slower than the heuristic but unconditionally
    exact: every remainder is reduced by its full content, so no divisor
    bookkeeping can go wrong."""
    syms = f.symbols
    F, G = _coeff_split(f), _coeff_split(g)
    if len(F) < len(G):
        F, G = G, F
    cont_f, cont_g = _poly_content(F), _poly_content(G)
    F = [exact_div(c, cont_f) if not c.is_zero else c for c in F]
    G = [exact_div(c, cont_g) if not c.is_zero else c for c in G]
    cont = _gcd_full(cont_f, cont_g)
    while True:
        R = _prem(F, G)
        if not R:
            Gc = _poly_content(G)
            result = _coeff_join([exact_div(c, Gc) if not c.is_zero else c for c in G], syms)
            break
        if len(R) == 1:
            result = MultiPoly.const(syms, 1)
            break
        Rc = _poly_content(R)
        F, G = G, [exact_div(c, Rc) if not c.is_zero else c for c in R]
    # lift the content (over the trailing symbols) back into the full ring:
    # trailing symbols occupy the low exponent fields, so keys carry over
    cont_full = MultiPoly._raw(syms, dict(cont._terms))
    result = (cont_full * result.normalized()).normalized()
    if not (divides(result, f) and divides(result, g)):
        raise GcdFailure("polynomial remainder sequence produced a non-divisor")
    return result


def _is_homogeneous(f: MultiPoly):
    degs = {sum(f._unpack(k)) for k in f._terms}
    return f.total_degree() if len(degs) == 1 else None


def _strip_monomial(f: MultiPoly):
    """Largest monomial dividing every term; returns (exponents, quotient)."""
    n = len(f.symbols)
    mins = None
    for k in f._terms:
        exp = f._unpack(k)
        mins = list(exp) if mins is None else [min(a, b) for a, b in zip(mins, exp)]
        if not any(mins):
            return tuple(mins), f
    shift = 0
    for e in mins:
        shift = (shift << _BITS) | e
    return tuple(mins), MultiPoly._raw(f.symbols, {k - shift: c for k, c in f._terms.items()})


def _dehomogenize_last(f: MultiPoly) -> MultiPoly:
    return MultiPoly._raw(f.symbols[:-1], _eval_last(f, 1)._terms)


def _rehomogenize_last(f: MultiPoly, degree: int, symbols: tuple) -> MultiPoly:
    out = {}
    for k, c in f._terms.items():
        d = sum(f._unpack(k))
        out[(k << _BITS) | (degree - d)] = c
    return MultiPoly._raw(symbols, out)


def _gcd_core(fp: MultiPoly, gp: MultiPoly) -> MultiPoly:
    """Primitive gcd of primitive nonconstant polynomials.

    Homogeneous inputs are dehomogenized first: dropping one recursion level
    of the heuristic gcd cuts the integer blow-up at the deepest evaluations,
    which dominates the cost.  The lift back is unique because a homogeneous
    gcd of monomial-free inputs is monomial-free itself.
    """
    df, dg = _is_homogeneous(fp), _is_homogeneous(gp)
    if len(fp.symbols) > 1 and df is not None and dg is not None:
        mf, f1 = _strip_monomial(fp)
        mg, g1 = _strip_monomial(gp)
        shared = [min(a, b) for a, b in zip(mf, mg)]
        if f1.is_constant or g1.is_constant:
            if any(shared):
                return MultiPoly(fp.symbols, {tuple(shared): 1})
            return MultiPoly.const(fp.symbols, 1)
        fd = _dehomogenize_last(f1)
        gd = _dehomogenize_last(g1)
        try:
            hd = _heugcd(fd.primitive(), gd.primitive())
        except GcdFailure:
            hd = _prs_gcd(fd.primitive(), gd.primitive())
        h = _rehomogenize_last(hd, hd.total_degree(), fp.symbols)
        if any(shared):
            h = h * MultiPoly(fp.symbols, {tuple(shared): 1})
        # the dehomogenized gcd can pick up spurious factors only if it fails
        # to divide the originals; fall back to the direct route then
        if divides(h.primitive(), fp) and divides(h.primitive(), gp):
            return h.primitive()
    try:
        return _heugcd(fp, gp)
    except GcdFailure:
        return _prs_gcd(fp, gp)


def gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """A greatest common divisor, normalized to content 1 with positive
    leading coefficient.  Integer contents of the inputs are deliberately
    dropped; a gcd is only defined up to a unit anyway and downstream factor
    extraction works with primitive polynomials."""
    f._check(g)
    if f.is_zero and g.is_zero:
        raise PolyError("gcd(0, 0) undefined")
    if f.is_zero:
        return g.normalized()
    if g.is_zero:
        return f.normalized()
    if f.is_constant or g.is_constant:
        return MultiPoly.const(f.symbols, 1)
    return _gcd_core(f.primitive(), g.primitive()).normalized()


def gcd_many(polys: Iterable[MultiPoly]) -> MultiPoly:
    polys = [p for p in polys if not p.is_zero]
    if not polys:
        raise PolyError("gcd of all-zero family undefined")
    g = polys[0].normalized()
    for p in polys[1:]:
        if g.is_constant:
            break
        g = gcd(g, p)
    return g


def wedge(g: MultiPoly, g_n: MultiPoly, gp: MultiPoly, gp_n: MultiPoly) -> MultiPoly:
    """Antisymmetric bracket g*gp_n - gp*g_n."""
    return g * gp_n - gp * g_n


# ----------------------------------------------------------------------
# exact restriction to a line; cheap degree probes for gcd structure


def restrict_to_line(f: MultiPoly, slopes: Sequence[int], offsets: Sequence[int]) -> list:
    """Exact coefficients of t -> f(slope*t + offset), ascending in t."""

    def umul(u, v):
        out = [0] * (len(u) + len(v) - 1)
        for i, x in enumerate(u):
            if x:
                for j, y in enumerate(v):
                    if y:
                        out[i + j] += x * y
        return out

    cache = {}

    def upow(i, e):
        key = (i, e)
        if key not in cache:
            if e == 0:
                res = [1]
            elif e == 1:
                res = [offsets[i], slopes[i]]
            else:
                half = upow(i, e // 2)
                res = umul(half, half)
                if e % 2:
                    res = umul(res, [offsets[i], slopes[i]])
            cache[key] = res
        return cache[key]

    n = len(f.symbols)
    total = [0]
    for key, coef in f._terms.items():
        term = [coef]
        for i in range(n):
            e = (key >> (_BITS * (n - 1 - i))) & _MASK
            if e:
                term = umul(term, upow(i, e))
        if len(term) > len(total):
            total, term = term, total
        for i, v in enumerate(term):
            total[i] += v
    while total and total[-1] == 0:
        total.pop()
    return total


def int_poly_gcd(u: list, v: list) -> list:
    """Primitive gcd of dense integer univariate polynomials (primitive PRS)."""

    def prim(w):
        g = 0
        for x in w:
            g = math.gcd(g, x)
        if g in (0, 1):
            return list(w)
        return [x // g for x in w]

    u, v = prim(u), prim(v)
    if len(u) < len(v):
        u, v = v, u
    while v:
        du, dv = len(u) - 1, len(v) - 1
        lc = v[-1]
        r = list(u)
        for _ in range(du - dv + 1):
            dr = len(r) - 1
            if dr < dv or not r:
                break
            top = r[-1]
            r = [x * lc for x in r[:-1]]
            for i in range(dv):
                r[dr - dv + i] -= top * v[i]
            while r and r[-1] == 0:
                r.pop()
        u, v = v, prim(r)
    return prim(u)


# ----------------------------------------------------------------------
# quadratic extension ZZ[symbols][p] / (p^2 - rel_lin*p - rel_const)


class QuadExtPoly:
    """Element base + ext*p with p reduced by p^2 = rel_lin*p + rel_const."""

    __slots__ = ("base", "ext", "rel_lin", "rel_const")

    def __init__(self, base: MultiPoly, ext: MultiPoly, rel_lin: MultiPoly, rel_const: MultiPoly):
        base._check(ext)
        base._check(rel_lin)
        base._check(rel_const)
        self.base = base
        self.ext = ext
        self.rel_lin = rel_lin
        self.rel_const = rel_const

    def _like(self, base, ext) -> "QuadExtPoly":
        return QuadExtPoly(base, ext, self.rel_lin, self.rel_const)

    def _coerce(self, other) -> "QuadExtPoly":
        if isinstance(other, QuadExtPoly):
            return other
        if isinstance(other, int):
            other = MultiPoly.const(self.base.symbols, other)
        if isinstance(other, MultiPoly):
            return self._like(other, MultiPoly.zero(other.symbols))
        raise PolyError(f"cannot coerce {other!r}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuadExtPoly):
            return NotImplemented
        return self.base == other.base and self.ext == other.ext

    def __neg__(self) -> "QuadExtPoly":
        return self._like(-self.base, -self.ext)

    def __add__(self, other) -> "QuadExtPoly":
        o = self._coerce(other)
        return self._like(self.base + o.base, self.ext + o.ext)

    __radd__ = __add__

    def __sub__(self, other) -> "QuadExtPoly":
        return self.__add__(self._coerce(other).__neg__())

    def __mul__(self, other) -> "QuadExtPoly":
        o = self._coerce(other)
        cross = self.ext * o.ext
        base = self.base * o.base + cross * self.rel_const
        ext = self.base * o.ext + self.ext * o.base + cross * self.rel_lin
        return self._like(base, ext)

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return self.base.is_zero and self.ext.is_zero

    def substitute_numeric(self, bindings: Mapping[str, Scalar], p_value: complex) -> complex:
        return self.base.evaluate(bindings) + complex(p_value) * self.ext.evaluate(bindings)

    def __repr__(self) -> str:
        return f"QuadExtPoly(({self.base}) + ({self.ext})*p)"
