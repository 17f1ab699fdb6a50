"""Finite-dimensional dialgebras and their axiom suite.

A dialgebra is a graded space carrying a product ``V (x) V -> V`` and a
coproduct ``V -> V (x) V`` with no compatibility assumed.  Both maps are
stored as structure constants over a finite basis.  Every structure
axiom and every compatibility is checked exhaustively over basis tuples,
which is complete by multilinearity; a failing check always carries a
witness tuple together with both evaluated sides.  ``classify`` places a
dialgebra into the six-cell table
{associative, commutative, lie} x {module, derivation}
and reports Hopf compatibility separately.

Sign conventions: the symmetry axioms (commutativity, cocommutativity,
skew-symmetry, co-skew-symmetry, the cojacobi rotations) apply Koszul
signs through the graded swap, so they reduce to unsigned checks on
even-degree bases.  The compatibility formulas are implemented literally
without Koszul signs; ``check("derivation", signed=True)`` enables the
signed variant ``v(a.b) = (va).b + (-1)^(deg a * shift_v) a.(vb)`` for
experimentation on graded examples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .linear import (
    BasisSymbol,
    FormalSum,
    StructureTensor,
    UnknownSymbolError,
    as_rational,
    format_rational,
    permute_graded,
    swap_graded,
    tensor,
)
from .textio import FormatError, iter_statements

__all__ = [
    "AXIOM_NAMES",
    "AxiomReport",
    "CELL_AXIOMS",
    "Classification",
    "Dialgebra",
    "Witness",
    "check",
    "check_all",
    "classify",
    "dual_numbers",
    "dual_numbers_mutated",
    "grouplike_line",
    "matrix_square",
    "one_basis_lie",
    "parse_dialgebra",
    "serialize_dialgebra",
    "zero_dialgebra",
]


@dataclass(frozen=True)
class Witness:
    """A basis tuple where an axiom's two sides disagree."""

    inputs: tuple
    lhs: FormalSum
    rhs: FormalSum
    detail: str

    def describe(self):
        names = ", ".join(str(s) for s in self.inputs)
        return f"({names}): {self.detail}"


@dataclass(frozen=True)
class AxiomReport:
    axiom: str
    holds: bool
    witness: Witness | None = None


class Dialgebra:
    """A finite basis with product and coproduct structure constants."""

    def __init__(self, name, symbols, product, coproduct, unit=None):
        self.name = str(name)
        self.symbols = tuple(symbols)
        if not self.symbols:
            raise ValueError("a dialgebra needs at least one basis symbol")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("duplicate basis symbols")
        if not isinstance(product, StructureTensor) or not isinstance(coproduct, StructureTensor):
            raise TypeError("product and coproduct must be StructureTensor values")
        if (product.in_arity, product.out_arity) != (2, 1):
            raise ValueError("product must map V(x)V -> V")
        if (coproduct.in_arity, coproduct.out_arity) != (1, 2):
            raise ValueError("coproduct must map V -> V(x)V")
        if set(product.symbols) != set(self.symbols) or set(coproduct.symbols) != set(self.symbols):
            raise ValueError("structure tensors must be declared over the dialgebra basis")
        bad = product.homogeneity_violations() + coproduct.homogeneity_violations()
        if bad:
            raise ValueError("structure constants break degree homogeneity: " + "; ".join(bad))
        self.product = product
        self.coproduct = coproduct
        if unit is not None and unit not in self.symbols:
            raise ValueError(f"unit {unit!r} is not a basis symbol")
        self.unit = unit

    # -- evaluation ----------------------------------------------------

    def _as_sum(self, a):
        if isinstance(a, FormalSum):
            return a
        if a in set(self.symbols):
            return FormalSum.term(a)
        raise UnknownSymbolError(f"unknown basis symbol {a!r}")

    def multiply(self, a, b):
        """The bilinear product a.b."""
        prod = tensor(self._as_sum(a), self._as_sum(b))
        if prod.is_zero:
            return FormalSum.zero()
        return self.product.apply(prod)

    def comultiply(self, a):
        """The linear coproduct v(a), a sum of 2-tensors."""
        a = self._as_sum(a)
        if a.is_zero:
            return FormalSum.zero()
        return self.coproduct.apply(a)

    def product_of_pair_sum(self, t):
        """Apply the product to a sum of 2-tensors."""
        if t.is_zero:
            return FormalSum.zero()
        return self.product.apply(t)

    # -- module actions on V (x) V -------------------------------------

    def act_left(self, a, t):
        """Associative outer action a.(x (x) y) = (a.x) (x) y."""
        out = FormalSum.zero()
        for term, c in t.iterterms():
            x, y = term
            out = out + c * tensor(self.multiply(a, x), FormalSum.term(y))
        return out

    def act_right(self, t, b):
        """Associative outer action (x (x) y).b = x (x) (y.b)."""
        out = FormalSum.zero()
        for term, c in t.iterterms():
            x, y = term
            out = out + c * tensor(FormalSum.term(x), self.multiply(y, b))
        return out

    def lie_act_left(self, a, t):
        """Lie module action a.(x (x) y) = [a,x] (x) y + x (x) [a,y]."""
        out = FormalSum.zero()
        for term, c in t.iterterms():
            x, y = term
            out = out + c * tensor(self.multiply(a, x), FormalSum.term(y))
            out = out + c * tensor(FormalSum.term(x), self.multiply(a, y))
        return out

    def lie_act_right(self, t, b):
        """Right Lie action (x (x) y).b = -b.(x (x) y)."""
        return -self.lie_act_left(b, t)

    def pairwise_multiply(self, s, t):
        """Componentwise product on V (x) V with the Koszul sign:
        (x (x) y).(x' (x) y') = (-1)^(deg y * deg x') (x.x') (x) (y.y')."""
        out = FormalSum.zero()
        for t1, c1 in s.iterterms():
            x, y = t1
            for t2, c2 in t.iterterms():
                u, v = t2
                sign = -1 if (y.degree % 2) and (u.degree % 2) else 1
                out = out + (sign * c1 * c2) * tensor(self.multiply(x, u), self.multiply(y, v))
        return out

    def handle(self, a):
        """The handle operator: product composed with coproduct."""
        return self.product_of_pair_sum(self.comultiply(a))

    # -- axiom checks ---------------------------------------------------

    def check(self, axiom, signed=False):
        return check(self, axiom, signed=signed)

    def check_all(self, signed=False):
        return check_all(self, signed=signed)

    def classify(self):
        return classify(self)

    def __repr__(self):
        return f"Dialgebra({self.name!r}, dim={len(self.symbols)})"


# -- individual axiom checkers ------------------------------------------
#
# Each checker walks basis tuples in declaration order and returns an
# AxiomReport; the first failing tuple becomes the witness.


def _passed(name):
    return AxiomReport(name, True, None)


def _failed(name, inputs, lhs, rhs, detail):
    return AxiomReport(name, False, Witness(tuple(inputs), lhs, rhs, detail))


def _check_associativity(D, signed):
    for a in D.symbols:
        for b in D.symbols:
            for c in D.symbols:
                lhs = D.multiply(D.multiply(a, b), c)
                rhs = D.multiply(a, D.multiply(b, c))
                if lhs != rhs:
                    return _failed("associativity", (a, b, c), lhs, rhs,
                                   "(a.b).c != a.(b.c)")
    return _passed("associativity")


def _coproduct_then_left(D, a):
    """(v (x) id) v(a)."""
    out = FormalSum.zero()
    for (x, y), c in D.comultiply(a).iterterms():
        out = out + c * tensor(D.comultiply(x), FormalSum.term(y))
    return out


def _coproduct_then_right(D, a):
    """(id (x) v) v(a)."""
    out = FormalSum.zero()
    for (x, y), c in D.comultiply(a).iterterms():
        out = out + c * tensor(FormalSum.term(x), D.comultiply(y))
    return out


def _check_coassociativity(D, signed):
    for a in D.symbols:
        lhs = _coproduct_then_left(D, a)
        rhs = _coproduct_then_right(D, a)
        if lhs != rhs:
            return _failed("coassociativity", (a,), lhs, rhs,
                           "(v(x)id)v(a) != (id(x)v)v(a)")
    return _passed("coassociativity")


def _check_commutativity(D, signed):
    for a in D.symbols:
        for b in D.symbols:
            sign = -1 if (a.degree % 2) and (b.degree % 2) else 1
            lhs = D.multiply(a, b)
            rhs = sign * D.multiply(b, a)
            if lhs != rhs:
                return _failed("commutativity", (a, b), lhs, rhs,
                               "a.b != (-1)^(|a||b|) b.a")
    return _passed("commutativity")


def _check_cocommutativity(D, signed):
    for a in D.symbols:
        va = D.comultiply(a)
        swapped = swap_graded(va) if va else va
        if swapped != va:
            return _failed("cocommutativity", (a,), swapped, va,
                           "swap v(a) != v(a)")
    return _passed("cocommutativity")


def _check_skew_symmetry(D, signed):
    for a in D.symbols:
        for b in D.symbols:
            sign = -1 if (a.degree % 2) and (b.degree % 2) else 1
            lhs = sign * D.multiply(b, a)
            rhs = -D.multiply(a, b)
            if lhs != rhs:
                return _failed("skew-symmetry", (a, b), lhs, rhs,
                               "(-1)^(|a||b|) [b,a] != -[a,b]")
    return _passed("skew-symmetry")


def _check_co_skew_symmetry(D, signed):
    for a in D.symbols:
        va = D.comultiply(a)
        swapped = swap_graded(va) if va else va
        if swapped != -va:
            return _failed("co-skew-symmetry", (a,), swapped, -va,
                           "swap d(a) != -d(a)")
    return _passed("co-skew-symmetry")


def _check_jacobi(D, signed):
    for a in D.symbols:
        for b in D.symbols:
            for c in D.symbols:
                total = (D.multiply(D.multiply(a, b), c)
                         + D.multiply(D.multiply(b, c), a)
                         + D.multiply(D.multiply(c, a), b))
                if total:
                    return _failed("jacobi", (a, b, c), total, FormalSum.zero(),
                                   "[[a,b],c] + [[b,c],a] + [[c,a],b] != 0")
    return _passed("jacobi")


def _check_cojacobi(D, signed):
    for a in D.symbols:
        once = _coproduct_then_left(D, a)
        if once.is_zero:
            continue
        total = once + permute_graded(once, (2, 0, 1)) + permute_graded(once, (1, 2, 0))
        if total:
            return _failed("cojacobi", (a,), total, FormalSum.zero(),
                           "(id + rot + rot^2)(d(x)id)d(a) != 0")
    return _passed("cojacobi")


def _check_derivation(D, signed):
    shift = D.coproduct.degree_shift
    for a in D.symbols:
        for b in D.symbols:
            lhs = D.comultiply(D.multiply(a, b))
            sign = -1 if signed and (a.degree % 2) and (shift % 2) else 1
            rhs = D.act_right(D.comultiply(a), b) + sign * D.act_left(a, D.comultiply(b))
            if lhs != rhs:
                return _failed("derivation", (a, b), lhs, rhs,
                               "v(a.b) != (va).b + a.(vb)")
    return _passed("derivation")


def _check_module(D, signed):
    for a in D.symbols:
        for b in D.symbols:
            mid = D.comultiply(D.multiply(a, b))
            left = D.act_right(D.comultiply(a), b)
            right = D.act_left(a, D.comultiply(b))
            if mid != left:
                return _failed("module", (a, b), mid, left,
                               "v(a.b) != (va).b")
            if mid != right:
                return _failed("module", (a, b), mid, right,
                               "v(a.b) != a.(vb)")
    return _passed("module")


def _check_lie_module(D, signed):
    for a in D.symbols:
        for b in D.symbols:
            mid = D.comultiply(D.multiply(a, b))
            left = D.lie_act_right(D.comultiply(a), b)
            right = D.lie_act_left(a, D.comultiply(b))
            if mid != left:
                return _failed("lie-module", (a, b), mid, left,
                               "d([a,b]) != (da).b")
            if mid != right:
                return _failed("lie-module", (a, b), mid, right,
                               "d([a,b]) != a.(db)")
    return _passed("lie-module")


def _check_drinfeld(D, signed):
    for a in D.symbols:
        for b in D.symbols:
            lhs = D.comultiply(D.multiply(a, b))
            rhs = D.lie_act_left(a, D.comultiply(b)) - D.lie_act_left(b, D.comultiply(a))
            if lhs != rhs:
                return _failed("drinfeld", (a, b), lhs, rhs,
                               "d([a,b]) != a.d(b) - b.d(a)")
    return _passed("drinfeld")


def _check_hopf(D, signed):
    for a in D.symbols:
        for b in D.symbols:
            lhs = D.comultiply(D.multiply(a, b))
            rhs = D.pairwise_multiply(D.comultiply(a), D.comultiply(b))
            if lhs != rhs:
                return _failed("hopf", (a, b), lhs, rhs,
                               "v(a.b) != v(a).v(b)")
    return _passed("hopf")


def _check_unit(D, signed):
    if D.unit is None:
        raise ValueError("no unit declared for this dialgebra")
    u = D.unit
    for a in D.symbols:
        want = FormalSum.term(a)
        left = D.multiply(u, a)
        if left != want:
            return _failed("unit", (u, a), left, want, "u.a != a")
        right = D.multiply(a, u)
        if right != want:
            return _failed("unit", (a, u), right, want, "a.u != a")
    return _passed("unit")


_CHECKERS = {
    "associativity": _check_associativity,
    "coassociativity": _check_coassociativity,
    "commutativity": _check_commutativity,
    "cocommutativity": _check_cocommutativity,
    "skew-symmetry": _check_skew_symmetry,
    "co-skew-symmetry": _check_co_skew_symmetry,
    "jacobi": _check_jacobi,
    "cojacobi": _check_cojacobi,
    "module": _check_module,
    "derivation": _check_derivation,
    "lie-module": _check_lie_module,
    "drinfeld": _check_drinfeld,
    "hopf": _check_hopf,
    "unit": _check_unit,
}

AXIOM_NAMES = tuple(_CHECKERS)


def check(D, axiom, signed=False):
    """Run one named axiom check; unknown names are an error."""
    try:
        checker = _CHECKERS[axiom]
    except KeyError:
        known = ", ".join(AXIOM_NAMES)
        raise ValueError(f"unknown axiom {axiom!r}; known axioms: {known}") from None
    return checker(D, signed)


def check_all(D, signed=False):
    """All applicable axiom reports, keyed by name, in a fixed order.

    The unit laws are included only when a unit is declared.
    """
    names = [n for n in AXIOM_NAMES if n != "unit" or D.unit is not None]
    return {n: check(D, n, signed=signed) for n in names}


# -- six-cell classification ----------------------------------------------

CELL_AXIOMS = {
    ("associative", "module"): ("associativity", "coassociativity", "module"),
    ("associative", "derivation"): ("associativity", "coassociativity", "derivation"),
    ("commutative", "module"): ("associativity", "commutativity", "coassociativity",
                                "cocommutativity", "module"),
    ("commutative", "derivation"): ("associativity", "commutativity", "coassociativity",
                                    "cocommutativity", "derivation"),
    ("lie", "module"): ("skew-symmetry", "co-skew-symmetry", "jacobi",
                        "cojacobi", "lie-module"),
    ("lie", "derivation"): ("skew-symmetry", "co-skew-symmetry", "jacobi",
                            "cojacobi", "drinfeld"),
}


@dataclass(frozen=True)
class Classification:
    cells: frozenset
    hopf: bool
    reports: dict = field(compare=False)

    def cell_names(self):
        return sorted(f"({row}, {col})" for row, col in self.cells)


def classify(D):
    """Every cell of the six-cell table whose full axiom set holds."""
    reports = check_all(D)
    cells = frozenset(cell for cell, names in CELL_AXIOMS.items()
                      if all(reports[n].holds for n in names))
    return Classification(cells=cells, hopf=reports["hopf"].holds, reports=reports)


# -- stock dialgebras ------------------------------------------------------


def _symbols(names, degree=0):
    return tuple(BasisSymbol(n, degree) for n in names)


def dual_numbers():
    """The unital commutative Frobenius dialgebra on {e, x} with x.x = 0.

    The coproduct is the diagonal induced by the nondegenerate pairing
    <e,x> = <x,e> = 1, <e,e> = <x,x> = 0.
    """
    e, x = _symbols(("e", "x"))
    product = StructureTensor((e, x), 2, 1, {
        (e, e): {(e,): 1},
        (e, x): {(x,): 1},
        (x, e): {(x,): 1},
    })
    coproduct = StructureTensor((e, x), 1, 2, {
        (e,): {(e, x): 1, (x, e): 1},
        (x,): {(x, x): 1},
    })
    return Dialgebra("dual-numbers", (e, x), product, coproduct, unit=e)


def dual_numbers_mutated():
    """dual_numbers with the coproduct of x corrupted to e (x) e.

    Breaks module compatibility (witness (x, x)) and degrades the
    induced bordism evaluation to decomposition-dependence.
    """
    e, x = _symbols(("e", "x"))
    product = StructureTensor((e, x), 2, 1, {
        (e, e): {(e,): 1},
        (e, x): {(x,): 1},
        (x, e): {(x,): 1},
    })
    coproduct = StructureTensor((e, x), 1, 2, {
        (e,): {(e, x): 1, (x, e): 1},
        (x,): {(e, e): 1},
    })
    return Dialgebra("dual-numbers-mutated", (e, x), product, coproduct, unit=e)


def matrix_square():
    """The 2x2 matrix units with the trace-pairing coproduct.

    Associative and module-compatible but neither commutative nor
    cocommutative: the stock noncommutative Frobenius example for the
    planar (open-sector) bordism evaluator.
    """
    syms = _symbols(("e11", "e12", "e21", "e22"))
    e11, e12, e21, e22 = syms
    idx = {e11: (1, 1), e12: (1, 2), e21: (2, 1), e22: (2, 2)}
    by_idx = {v: k for k, v in idx.items()}
    prod_entries = {}
    for a in syms:
        for b in syms:
            (i, j), (k, l) = idx[a], idx[b]
            if j == k:
                prod_entries[(a, b)] = {(by_idx[(i, l)],): 1}
    # dual basis for <u,v> = tr(uv): e11<->e11, e12<->e21, e22<->e22
    dual = {e11: e11, e12: e21, e21: e12, e22: e22}
    coprod_entries = {}
    for a in syms:
        row = {}
        for b in syms:
            (i, j), (k, l) = idx[a], idx[b]
            if j == k:
                key = (by_idx[(i, l)], dual[b])
                row[key] = row.get(key, 0) + 1
        coprod_entries[(a,)] = row
    product = StructureTensor(syms, 2, 1, prod_entries)
    coproduct = StructureTensor(syms, 1, 2, coprod_entries)
    return Dialgebra("matrix-square", syms, product, coproduct)


def zero_dialgebra(names=("z",)):
    """Zero product and zero coproduct: every equation holds as 0 = 0."""
    syms = _symbols(names)
    product = StructureTensor(syms, 2, 1, {})
    coproduct = StructureTensor(syms, 1, 2, {})
    return Dialgebra("zero", syms, product, coproduct)


def one_basis_lie():
    """One generator with zero bracket and zero cobracket."""
    syms = _symbols(("p",))
    product = StructureTensor(syms, 2, 1, {})
    coproduct = StructureTensor(syms, 1, 2, {})
    return Dialgebra("one-basis-lie", syms, product, coproduct)


def grouplike_line():
    """One idempotent p with the group-like coproduct v(p) = p (x) p.

    Hopf and module compatibility hold; derivation fails at (p, p)
    because the right side doubles.
    """
    (p,) = _symbols(("p",))
    product = StructureTensor((p,), 2, 1, {(p, p): {(p,): 1}})
    coproduct = StructureTensor((p,), 1, 2, {(p,): {(p, p): 1}})
    return Dialgebra("grouplike-line", (p,), product, coproduct, unit=p)


# -- text format -----------------------------------------------------------
#
#   dialgebra <name>
#   basis <symbol> deg <int>          (order significant)
#   unit <symbol>                     (optional)
#   shift prod <int> / shift coprod <int>   (optional, default 0)
#   prod <s1> <s2> -> <s3> : <p>/<q>  (omitted triples are zero)
#   coprod <s1> -> <s2> <s3> : <p>/<q>


def _parse_rational(token, lineno):
    try:
        return as_rational(token if "/" in token else int(token))
    except (ValueError, ZeroDivisionError):
        raise FormatError(lineno, f"bad rational {token!r}") from None


def parse_dialgebra(text):
    name = None
    order = []
    degrees = {}
    unit_name = None
    shifts = {"prod": 0, "coprod": 0}
    prod_rows = {}
    coprod_rows = {}

    def symbol(tok, lineno):
        if tok not in degrees:
            raise FormatError(lineno, f"unknown basis symbol {tok!r}")
        return BasisSymbol(tok, degrees[tok])

    for lineno, tokens in iter_statements(text):
        head = tokens[0]
        if name is None:
            if head != "dialgebra" or len(tokens) != 2:
                raise FormatError(lineno, "expected header 'dialgebra <name>'")
            name = tokens[1]
            continue
        if head == "dialgebra":
            raise FormatError(lineno, "duplicate 'dialgebra' header")
        if head == "basis":
            if len(tokens) != 4 or tokens[2] != "deg":
                raise FormatError(lineno, "expected 'basis <symbol> deg <int>'")
            sym = tokens[1]
            if sym in degrees:
                raise FormatError(lineno, f"duplicate basis symbol {sym!r}")
            try:
                degrees[sym] = int(tokens[3])
            except ValueError:
                raise FormatError(lineno, f"bad degree {tokens[3]!r}") from None
            order.append(sym)
        elif head == "unit":
            if len(tokens) != 2:
                raise FormatError(lineno, "expected 'unit <symbol>'")
            if unit_name is not None:
                raise FormatError(lineno, "duplicate 'unit' line")
            symbol(tokens[1], lineno)
            unit_name = tokens[1]
        elif head == "shift":
            if len(tokens) != 3 or tokens[1] not in shifts:
                raise FormatError(lineno, "expected 'shift prod|coprod <int>'")
            try:
                shifts[tokens[1]] = int(tokens[2])
            except ValueError:
                raise FormatError(lineno, f"bad shift {tokens[2]!r}") from None
        elif head == "prod":
            if len(tokens) != 7 or tokens[3] != "->" or tokens[5] != ":":
                raise FormatError(lineno, "expected 'prod <s1> <s2> -> <s3> : <p>/<q>'")
            key = (symbol(tokens[1], lineno), symbol(tokens[2], lineno))
            out = (symbol(tokens[4], lineno),)
            coeff = _parse_rational(tokens[6], lineno)
            row = prod_rows.setdefault(key, {})
            row[out] = row.get(out, Fraction(0)) + coeff
        elif head == "coprod":
            if len(tokens) != 7 or tokens[2] != "->" or tokens[5] != ":":
                raise FormatError(lineno, "expected 'coprod <s1> -> <s2> <s3> : <p>/<q>'")
            key = (symbol(tokens[1], lineno),)
            out = (symbol(tokens[3], lineno), symbol(tokens[4], lineno))
            coeff = _parse_rational(tokens[6], lineno)
            row = coprod_rows.setdefault(key, {})
            row[out] = row.get(out, Fraction(0)) + coeff
        else:
            raise FormatError(lineno, f"unknown statement {head!r}")

    if name is None:
        raise FormatError(1, "missing 'dialgebra <name>' header")
    if not order:
        raise FormatError(1, "no basis symbols declared")
    syms = tuple(BasisSymbol(n, degrees[n]) for n in order)
    product = StructureTensor(syms, 2, 1, prod_rows, degree_shift=shifts["prod"])
    coproduct = StructureTensor(syms, 1, 2, coprod_rows, degree_shift=shifts["coprod"])
    unit = BasisSymbol(unit_name, degrees[unit_name]) if unit_name is not None else None
    return Dialgebra(name, syms, product, coproduct, unit=unit)


def serialize_dialgebra(D):
    """Canonical text: declaration-order basis, sorted structure lines."""
    index = {s: i for i, s in enumerate(D.symbols)}
    lines = [f"dialgebra {D.name}"]
    for s in D.symbols:
        lines.append(f"basis {s.name} deg {s.degree}")
    if D.unit is not None:
        lines.append(f"unit {D.unit.name}")
    lines.append(f"shift prod {D.product.degree_shift}")
    lines.append(f"shift coprod {D.coproduct.degree_shift}")
    prod_lines = []
    for key, row in D.product.rows():
        for out, coeff in row.items():
            rank = (index[key[0]], index[key[1]], index[out[0]])
            prod_lines.append((rank, f"prod {key[0].name} {key[1].name} -> "
                                     f"{out[0].name} : {format_rational(coeff)}"))
    coprod_lines = []
    for key, row in D.coproduct.rows():
        for out, coeff in row.items():
            rank = (index[key[0]], index[out[0]], index[out[1]])
            coprod_lines.append((rank, f"coprod {key[0].name} -> "
                                       f"{out[0].name} {out[1].name} : {format_rational(coeff)}"))
    lines.extend(text for _, text in sorted(prod_lines))
    lines.extend(text for _, text in sorted(coprod_lines))
    return "\n".join(lines) + "\n"
