"""Exact sparse linear algebra over graded bases.

Everything downstream (axiom checking, brackets, bordism evaluation)
reduces to finite rational linear combinations of basis terms.  A term is
either a single basis element or a flat tuple of them (tensor factors).
Coefficients are exact rationals; floats are rejected outright so that
every identity verified by this package is exact, never approximate.

Basis elements are any hashable objects exposing ``degree`` (an int) and
``sort_key()`` (a tuple used for the canonical term order).  The concrete
basis types live in their own modules; ``BasisSymbol`` below is the plain
named generator used by dialgebras.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "ArityError",
    "BasisSymbol",
    "FormalSum",
    "Rational",
    "SpaceMismatchError",
    "StructureTensor",
    "UnknownSymbolError",
    "apply_tensor_map",
    "as_rational",
    "combine",
    "format_rational",
    "permute_graded",
    "swap_graded",
    "tensor",
]

Rational = Fraction


class SpaceMismatchError(ValueError):
    """Operands live over different spaces (arity or basis kind differ)."""


class ArityError(ValueError):
    """A tensor map was applied to a sum of the wrong tensor arity."""


class UnknownSymbolError(ValueError):
    """A term mentions a basis symbol the map's space does not declare."""


def as_rational(value):
    """Coerce *value* to an exact Fraction.  Floats are refused."""
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not allowed; "
                        "pass Fraction, int, or a 'p/q' string")
    return Fraction(value)


def format_rational(value):
    """Render a rational as ``p/q``, denominator always explicit."""
    q = as_rational(value)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class BasisSymbol:
    """A named basis element with an integer degree."""

    name: str
    degree: int = 0

    def sort_key(self):
        return (self.name,)

    def __str__(self):
        return self.name


def _components(term):
    """A term as a tuple of basis elements (bare elements wrap to length 1)."""
    return term if isinstance(term, tuple) else (term,)


def _element_key(element):
    key = getattr(element, "sort_key", None)
    if key is None:
        raise TypeError(f"{element!r} is not a basis element (no sort_key)")
    return (type(element).__name__,) + tuple(key())


def term_key(term):
    """Canonical ordering key for a term; tuples compare factor by factor."""
    return tuple(_element_key(b) for b in _components(term))


def term_degree(term):
    """Total degree of a term, additive over tensor factors."""
    return sum(b.degree for b in _components(term))


def _normalize_term(term):
    # length-1 tuples collapse to the bare element so arity-1 sums have a
    # single canonical representation
    if isinstance(term, tuple) and len(term) == 1:
        return term[0]
    return term


class FormalSum:
    """A finite rational linear combination of basis terms.

    Immutable by convention: every operation returns a new sum.  Zero
    coefficients are never stored, all terms of one sum share the same
    tensor arity, and equality is structural.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=()):
        data = {}
        items = terms.items() if hasattr(terms, "items") else terms
        for term, coeff in items:
            c = coeff if isinstance(coeff, Fraction) else as_rational(coeff)
            if not c:
                continue
            term = _normalize_term(term)
            acc = data.get(term)
            if acc is None:
                data[term] = c
            else:
                acc = acc + c
                if acc:
                    data[term] = acc
                else:
                    del data[term]
        arities = {len(_components(t)) for t in data}
        if len(arities) > 1:
            raise SpaceMismatchError("space mismatch: mixed tensor arities in one sum")
        self._terms = data

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def term(cls, basis, coeff=1):
        return cls(((basis, coeff),))

    @property
    def is_zero(self):
        return not self._terms

    @property
    def arity(self):
        """Tensor arity shared by all terms, or None for the zero sum."""
        for t in self._terms:
            return len(_components(t))
        return None

    def coefficient(self, term):
        return self._terms.get(_normalize_term(term), Fraction(0))

    def items(self):
        """Terms with coefficients, in the canonical sorted order."""
        return sorted(self._terms.items(), key=lambda kv: term_key(kv[0]))

    def iterterms(self):
        """Unordered (term, coefficient) view for hot paths."""
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __neg__(self):
        return FormalSum((t, -c) for t, c in self._terms.items())

    def __add__(self, other):
        if not isinstance(other, FormalSum):
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        data = dict(self._terms)
        for t, c in other._terms.items():
            acc = data.get(t)
            if acc is None:
                data[t] = c
            else:
                acc = acc + c
                if acc:
                    data[t] = acc
                else:
                    del data[t]
        out = FormalSum.zero()
        arities = {len(_components(t)) for t in data}
        if len(arities) > 1:
            raise SpaceMismatchError("space mismatch: mixed tensor arities in one sum")
        out._terms = data
        return out

    def __sub__(self, other):
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self + (-other)

    def __rmul__(self, scalar):
        c = as_rational(scalar)
        if not c:
            return FormalSum.zero()
        return FormalSum((t, c * v) for t, v in self._terms.items())

    def scale(self, scalar):
        return self.__rmul__(scalar)

    def tensor(self, other):
        return tensor(self, other)

    def __repr__(self):
        if not self._terms:
            return "FormalSum()"
        bits = []
        for t, c in self.items():
            label = " (x) ".join(str(b) for b in _components(t))
            bits.append(f"{format_rational(c)}*{label}")
        return "FormalSum(" + " + ".join(bits) + ")"

    def __str__(self):
        if not self._terms:
            return "(empty)"
        bits = []
        for t, c in self.items():
            label = " (x) ".join(str(b) for b in _components(t))
            bits.append(f"{format_rational(c)} {label}")
        return " + ".join(bits)


def _space_signature(v):
    for t in v._terms:
        comps = _components(t)
        return (len(comps), frozenset(type(b) for b in comps))
    return None


def combine(v, w, c, d):
    """The linear combination c*v + d*w, with a same-space check.

    Raises SpaceMismatchError when the operands visibly live over
    different spaces (different arity or different basis kinds); the zero
    sum is compatible with everything.
    """
    if not isinstance(v, FormalSum) or not isinstance(w, FormalSum):
        raise TypeError("combine expects two FormalSum operands")
    sv, sw = _space_signature(v), _space_signature(w)
    if sv is not None and sw is not None and sv != sw:
        raise SpaceMismatchError("space mismatch")
    return as_rational(c) * v + as_rational(d) * w


def tensor(v, w):
    """Graded tensor product; factor tuples concatenate flat."""
    if v.is_zero or w.is_zero:
        return FormalSum.zero()
    data = {}
    for t1, c1 in v._terms.items():
        k1 = _components(t1)
        for t2, c2 in w._terms.items():
            data[k1 + _components(t2)] = c1 * c2
    out = FormalSum.zero()
    out._terms = data
    return out


def swap_graded(v):
    """The Koszul swap on 2-tensors: b1 (x) b2 -> (-1)^(|b1||b2|) b2 (x) b1."""
    data = {}
    for t, c in v._terms.items():
        if not (isinstance(t, tuple) and len(t) == 2):
            raise ArityError("swap_graded requires 2-tensor terms")
        x, y = t
        sign = -1 if (x.degree % 2) and (y.degree % 2) else 1
        key = (y, x)
        acc = data.get(key)
        data[key] = sign * c if acc is None else acc + sign * c
    return FormalSum(data)


def permute_graded(v, perm):
    """Permute tensor factors with Koszul signs.

    ``perm[i]`` names the old position that moves to new position ``i``.
    A transposition of two odd factors contributes a sign of -1; the
    general sign is the product over inversions of odd-degree pairs.
    """
    perm = tuple(perm)
    data = {}
    for t, c in v._terms.items():
        comps = _components(t)
        if len(comps) != len(perm):
            raise ArityError("permutation length does not match tensor arity")
        sign = 1
        for i in range(len(perm)):
            for j in range(i + 1, len(perm)):
                if perm[i] > perm[j]:
                    if (comps[perm[i]].degree % 2) and (comps[perm[j]].degree % 2):
                        sign = -sign
        key = _normalize_term(tuple(comps[p] for p in perm))
        acc = data.get(key)
        data[key] = sign * c if acc is None else acc + sign * c
    return FormalSum(data)


class StructureTensor:
    """Structure constants of a linear map V^(x)m -> V^(x)n.

    The map is stored sparsely: for each input tuple of basis symbols, a
    row of output tuples with rational coefficients.  Missing rows are
    zero; symbols outside the declared basis are an error, which keeps
    "zero entry" and "typo" distinguishable.
    """

    def __init__(self, symbols, in_arity, out_arity, entries, degree_shift=0):
        self.symbols = tuple(symbols)
        self._symbol_set = frozenset(self.symbols)
        if len(self._symbol_set) != len(self.symbols):
            raise ValueError("duplicate basis symbols")
        self.in_arity = int(in_arity)
        self.out_arity = int(out_arity)
        if self.in_arity < 1 or self.out_arity < 1:
            raise ValueError("arities must be at least 1")
        self.degree_shift = int(degree_shift)
        clean = {}
        for key, row in entries.items():
            key = _components(key)
            if len(key) != self.in_arity:
                raise ArityError(f"input tuple {key} has arity {len(key)}, "
                                 f"expected {self.in_arity}")
            self._check_symbols(key)
            row_items = row.items() if hasattr(row, "items") else row
            clean_row = {}
            for out, coeff in row_items:
                out = _components(out)
                if len(out) != self.out_arity:
                    raise ArityError(f"output tuple {out} has arity {len(out)}, "
                                     f"expected {self.out_arity}")
                self._check_symbols(out)
                c = as_rational(coeff)
                if not c:
                    continue
                clean_row[out] = clean_row.get(out, Fraction(0)) + c
            clean_row = {o: c for o, c in clean_row.items() if c}
            if clean_row:
                clean[key] = clean_row
        self._entries = clean

    def _check_symbols(self, syms):
        for s in syms:
            if s not in self._symbol_set:
                raise UnknownSymbolError(f"unknown basis symbol {s!r}")

    def row(self, key):
        """The output row for one input tuple (empty dict when zero)."""
        key = _components(key)
        if len(key) != self.in_arity:
            raise ArityError("arity mismatch")
        self._check_symbols(key)
        return dict(self._entries.get(key, ()))

    def rows(self):
        return self._entries.items()

    def homogeneity_violations(self):
        """Entries breaking deg(out) = deg(in) + shift, as readable strings."""
        bad = []
        for key, row in self._entries.items():
            din = sum(s.degree for s in key)
            for out in row:
                dout = sum(s.degree for s in out)
                if dout != din + self.degree_shift:
                    bad.append(f"{'*'.join(map(str, key))} -> "
                               f"{'*'.join(map(str, out))}: "
                               f"degree {dout} != {din} + {self.degree_shift}")
        return bad

    def apply(self, v):
        """Apply the map to a FormalSum of matching arity."""
        if not isinstance(v, FormalSum):
            raise TypeError("apply_tensor_map expects a FormalSum")
        if v.is_zero:
            return FormalSum.zero()
        if v.arity != self.in_arity:
            raise ArityError(f"arity mismatch: sum has arity {v.arity}, "
                             f"map expects {self.in_arity}")
        data = {}
        for term, c in v._terms.items():
            key = _components(term)
            self._check_symbols(key)
            row = self._entries.get(key)
            if not row:
                continue
            for out, c2 in row.items():
                t = _normalize_term(out)
                acc = data.get(t)
                val = c * c2
                data[t] = val if acc is None else acc + val
        return FormalSum(data)

    def __eq__(self, other):
        if not isinstance(other, StructureTensor):
            return NotImplemented
        return (self.symbols == other.symbols
                and self.in_arity == other.in_arity
                and self.out_arity == other.out_arity
                and self.degree_shift == other.degree_shift
                and self._entries == other._entries)

    def __repr__(self):
        return (f"StructureTensor(in={self.in_arity}, out={self.out_arity}, "
                f"entries={len(self._entries)}, shift={self.degree_shift})")


def apply_tensor_map(tensor_map, v):
    """Functional spelling of StructureTensor.apply."""
    return tensor_map.apply(v)
