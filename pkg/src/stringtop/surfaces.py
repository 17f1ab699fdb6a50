"""Closed strings on a surface: cyclic words, linked pairs, bracket, cobracket.

A compact oriented surface with nonempty boundary deformation-retracts to
a rose with one vertex, so free homotopy classes of loops are reduced
cyclic words in the free group on the edge letters.  The only datum the
surface contributes is the ribbon structure: the cyclic order of the 2n
edge-ends around the vertex (``SurfaceSymbol``), which determines genus
and boundary count and, crucially, the circular order of geodesic rays
in the universal cover.

The bracket resolves transversal crossings of two loops and the
cobracket splits a loop at its self-crossings.  Both reduce to the
``linked`` test on a pair of marked positions: lift the two loops to
lines in the universal-cover tree through a common vertex and ask
whether the four ends alternate around the circle at infinity.  Rays are
compared letter by letter; two rays entering the same edge are ordered,
at the far vertex, by the symbol's cyclic order read starting after the
inverse of the traveled letter.  Because the ends' circular order is a
property of the two *lines*, alternation alone would report the same
geometric crossing once for every vertex the two lines share; a pair is
therefore counted only at the canonical vertex where the first word's
forward ray departs along an edge-end used by neither ray of the second
word.  With that rule every crossing is reported at exactly one position
pair whether the lines meet at a single vertex or overlap along a
segment in either direction.

Trivial (empty-word) classes are dropped from all outputs: constant
loops are killed, so the bracket and cobracket act on the reduced space
of nontrivial classes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations_with_replacement

from .dialgebra import AxiomReport, Witness
from .linear import FormalSum, permute_graded, swap_graded, tensor
from .textio import DEFAULT_SEED

__all__ = [
    "CyclicWord",
    "LinearWord",
    "Ray",
    "SurfaceSymbol",
    "UNLINKED",
    "bialgebra_suite",
    "bracket",
    "cobracket",
    "cyclic_word",
    "enumerate_cyclic_words",
    "erase_mark",
    "inverse_letter",
    "letters_to_str",
    "lie_act",
    "linked",
    "mark_all",
    "intersection_count",
    "parse_letters",
    "random_cyclic_word",
    "reduce_cyclic",
    "strand",
    "surface_from_symbol",
]

UNLINKED = 0

# Letters are ints: generator i is 2i (written a, b, c, ...) and its
# inverse is 2i+1 (written A, B, C, ...), so x ^ 1 inverts and the int
# order realizes the fixed letter order a < A < b < B < ... used for
# canonical rotations.


def parse_letters(text):
    """Decode a word like 'aabA' to a tuple of letter codes."""
    out = []
    for ch in text:
        if "a" <= ch <= "z":
            out.append(2 * (ord(ch) - 97))
        elif "A" <= ch <= "Z":
            out.append(2 * (ord(ch) - 65) + 1)
        else:
            raise ValueError(f"bad letter {ch!r} (want a-z or A-Z)")
    return tuple(out)


def letters_to_str(letters):
    return "".join(chr((97 if x % 2 == 0 else 65) + x // 2) for x in letters)


def inverse_letter(x):
    return x ^ 1


@dataclass(frozen=True)
class CyclicWord:
    """A cyclically reduced word stored in its canonical rotation."""

    letters: tuple

    degree = 0

    def sort_key(self):
        return (len(self.letters), self.letters)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return letters_to_str(self.letters)

    def rotation(self, p):
        """The linear word read from position p around the loop."""
        return self.letters[p:] + self.letters[:p]


@dataclass(frozen=True)
class LinearWord:
    """A marked (based) word: a cyclic word with a chosen start."""

    letters: tuple

    degree = 0

    def sort_key(self):
        return (len(self.letters), self.letters)

    def __str__(self):
        return "[" + letters_to_str(self.letters) + "]"


def reduce_cyclic(letters):
    """Cyclically reduce; the canonical CyclicWord, or None for the
    trivial class."""
    if isinstance(letters, str):
        letters = parse_letters(letters)
    stack = []
    for x in letters:
        if stack and stack[-1] == (x ^ 1):
            stack.pop()
        else:
            stack.append(x)
    lo, hi = 0, len(stack)
    while hi - lo >= 2 and stack[lo] == (stack[hi - 1] ^ 1):
        lo += 1
        hi -= 1
    core = tuple(stack[lo:hi])
    if not core:
        return None
    best = min(core[i:] + core[:i] for i in range(len(core)))
    return CyclicWord(best)


def cyclic_word(text):
    """Parse a nontrivial cyclic word; trivial input is an error."""
    w = reduce_cyclic(text)
    if w is None:
        raise ValueError(f"word {text!r} reduces to the trivial class")
    return w


class SurfaceSymbol:
    """The cyclic order of the 2n edge-ends around the rose vertex."""

    PRESETS = {
        "torus-1": "a,b,A,B",   # genus 1, one boundary circle
        "pants": "a,A,b,B",     # genus 0, three boundary circles
    }

    def __init__(self, order):
        if isinstance(order, str):
            parts = order.split(",") if "," in order else list(order)
            letters = []
            for part in parts:
                part = part.strip()
                got = parse_letters(part)
                if len(got) != 1:
                    raise ValueError(f"bad edge-end token {part!r}")
                letters.append(got[0])
            order = letters
        self.order = tuple(order)
        count = len(self.order)
        if count == 0 or count % 2:
            raise ValueError("the cyclic order must list 2n edge-ends")
        n = count // 2
        if sorted(self.order) != list(range(2 * n)):
            raise ValueError("the cyclic order must use each letter of "
                             f"a..{chr(96 + n)} and each inverse exactly once")
        self.rank = n
        pos = [0] * (2 * n)
        for k, x in enumerate(self.order):
            pos[x] = k
        self._pos = pos
        # _after[t][y]: the rank of continuation y among rays that just
        # traveled the edge t, i.e. the cyclic order read starting after
        # inverse(t).  y = inverse(t) never occurs on a reduced ray.
        self._after = [[(pos[y] - pos[t ^ 1]) % count for y in range(count)]
                       for t in range(count)]
        succ = {self.order[k]: self.order[(k + 1) % count] for k in range(count)}
        seen = set()
        cycles = 0
        for start in self.order:
            if start in seen:
                continue
            cycles += 1
            h = start
            while h not in seen:
                seen.add(h)
                h = succ[h ^ 1]
        self.boundary_count = cycles
        if (n + 1 - cycles) % 2:
            raise ValueError("inconsistent ribbon data: odd Euler defect")
        self.genus = (n + 1 - cycles) // 2
        if self.genus < 0:
            raise ValueError("inconsistent ribbon data: negative genus")
        self._bracket_cache = {}
        self._cobracket_cache = {}

    @classmethod
    def preset(cls, name):
        try:
            return cls(cls.PRESETS[name])
        except KeyError:
            known = ", ".join(sorted(cls.PRESETS))
            raise ValueError(f"unknown surface preset {name!r}; presets: {known}") from None

    def letters(self):
        return tuple(range(2 * self.rank))

    def validate_word(self, w):
        for x in w.letters:
            if x >= 2 * self.rank:
                raise ValueError(f"word {w} uses letters outside this "
                                 f"rank-{self.rank} surface")
        return w

    def __repr__(self):
        return f"SurfaceSymbol({letters_to_str(self.order)}, g={self.genus}, b={self.boundary_count})"


def surface_from_symbol(order):
    """(genus, boundary count) of the thickened rose with this ribbon order."""
    sym = order if isinstance(order, SurfaceSymbol) else SurfaceSymbol(order)
    return (sym.genus, sym.boundary_count)


@dataclass(frozen=True)
class Ray:
    """An infinite reduced ray from the vertex: a marked word read
    forward from the mark, or inverted backward from it."""

    word: tuple
    pos: int
    forward: bool

    def letter(self, i):
        n = len(self.word)
        if self.forward:
            return self.word[(self.pos + i) % n]
        return self.word[(self.pos - 1 - i) % n] ^ 1


def strand(w, p, direction):
    """The forward or backward ray of w at position p."""
    if direction not in ("forward", "backward"):
        raise ValueError("direction must be 'forward' or 'backward'")
    if not 0 <= p < len(w.letters):
        raise ValueError(f"position {p} out of range for {w}")
    return Ray(w.letters, p, direction == "forward")


def _compare_rays(sym, r1, r2):
    """-1 or +1 by the circular order at the vertex; 0 when the rays are
    identical as infinite words (periodicity makes the bound exact)."""
    bound = len(r1.word) + len(r2.word) + 1
    x, y = r1.letter(0), r2.letter(0)
    if x != y:
        return -1 if sym._pos[x] < sym._pos[y] else 1
    for i in range(1, bound):
        prev = x
        x, y = r1.letter(i), r2.letter(i)
        if x != y:
            return -1 if sym._after[prev][x] < sym._after[prev][y] else 1
    return 0


def linked(sym, pair1, pair2):
    """Crossing test for two marked loops sharing the base vertex.

    pair1 = (forward, backward) rays of the first loop, pair2 of the
    second.  Returns +1 or -1 for a transversal crossing counted at this
    vertex, or UNLINKED (0).  A crossing is counted only where the first
    loop's forward ray departs along an edge-end used by neither ray of
    the second loop, so a crossing whose lifted lines share a segment is
    reported at exactly one vertex of that segment.
    """
    f1, b1 = pair1
    f2, b2 = pair2
    head = f1.letter(0)
    if head == f2.letter(0) or head == b2.letter(0):
        return UNLINKED
    rays = (f1, f2, b1, b2)
    less = [[False] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(i + 1, 4):
            c = _compare_rays(sym, rays[i], rays[j])
            if c == 0:
                return UNLINKED
            less[i][j] = c < 0
            less[j][i] = c > 0
    order = [0, 1, 2, 3]
    order.sort(key=lambda i: sum(less[j][i] for j in range(4)))
    k = order.index(0)
    pattern = tuple(order[(k + m) % 4] for m in range(4))
    if pattern == (0, 1, 2, 3):
        return 1
    if pattern == (0, 3, 2, 1):
        return -1
    return UNLINKED


def _rays_at(word, p):
    return (Ray(word, p, True), Ray(word, p, False))


def _as_state(sym, value):
    if isinstance(value, FormalSum):
        for term, _ in value.iterterms():
            sym.validate_word(term)
        return value
    if isinstance(value, CyclicWord):
        sym.validate_word(value)
        return FormalSum.term(value)
    if isinstance(value, str):
        return FormalSum.term(sym.validate_word(cyclic_word(value)))
    raise TypeError(f"expected a cyclic word or state sum, got {value!r}")


def _basis_bracket(sym, u, v):
    key = (u.letters, v.letters)
    hit = sym._bracket_cache.get(key)
    if hit is not None:
        return hit
    acc = {}
    for p in range(len(u.letters)):
        pair1 = _rays_at(u.letters, p)
        for q in range(len(v.letters)):
            s = linked(sym, pair1, _rays_at(v.letters, q))
            if s:
                w = reduce_cyclic(u.rotation(p) + v.rotation(q))
                if w is not None:
                    acc[w] = acc.get(w, 0) + s
    out = FormalSum(acc)
    sym._bracket_cache[key] = out
    return out


def bracket(sym, left, right):
    """The crossing-resolution bracket, bilinear over state sums.

    On basis words it sums, over linked position pairs, the sign times
    the class of the loop that follows the first word from its mark and
    then the second from its mark; trivial classes are dropped.
    """
    left = _as_state(sym, left)
    right = _as_state(sym, right)
    acc = {}
    for u, cu in left.iterterms():
        for v, cv in right.iterterms():
            for t, c in _basis_bracket(sym, u, v).iterterms():
                val = acc.get(t)
                val = cu * cv * c if val is None else val + cu * cv * c
                if val:
                    acc[t] = val
                elif t in acc:
                    del acc[t]
    return FormalSum(acc)


def _cyclic_slice(letters, p, q):
    return letters[p:q] if p < q else letters[p:] + letters[:q]


def _basis_cobracket(sym, w):
    hit = sym._cobracket_cache.get(w.letters)
    if hit is not None:
        return hit
    n = len(w.letters)
    acc = {}
    for p in range(n):
        pair1 = _rays_at(w.letters, p)
        for q in range(n):
            if p == q:
                continue
            s = linked(sym, pair1, _rays_at(w.letters, q))
            if s:
                first = reduce_cyclic(_cyclic_slice(w.letters, p, q))
                second = reduce_cyclic(_cyclic_slice(w.letters, q, p))
                if first is not None and second is not None:
                    key = (first, second)
                    acc[key] = acc.get(key, 0) + s
    out = FormalSum(acc)
    sym._cobracket_cache[w.letters] = out
    return out


def cobracket(sym, state):
    """The self-crossing splitting, a sum of 2-tensors of classes.

    On a basis word it sums, over ordered linked position pairs (p, q),
    the sign times (class of the p-to-q arc) (x) (class of the q-to-p
    arc); terms with a trivial factor are dropped.
    """
    state = _as_state(sym, state)
    acc = {}
    for w, cw in state.iterterms():
        for t, c in _basis_cobracket(sym, w).iterterms():
            val = acc.get(t)
            val = cw * c if val is None else val + cw * c
            if val:
                acc[t] = val
            elif t in acc:
                del acc[t]
    return FormalSum(acc)


def intersection_count(sym, u, v):
    """Number of linked position pairs: the crossing-count diagnostic.

    For distinct words this counts ordered (p, q) pairs, one per
    transversal crossing; a word against itself counts each self-crossing
    once (both orderings are reported, so the ordered count is halved).
    """
    sym.validate_word(u)
    sym.validate_word(v)
    total = 0
    if u == v:
        n = len(u.letters)
        for p in range(n):
            pair1 = _rays_at(u.letters, p)
            for q in range(n):
                if p != q and linked(sym, pair1, _rays_at(u.letters, q)):
                    total += 1
        return total // 2
    for p in range(len(u.letters)):
        pair1 = _rays_at(u.letters, p)
        for q in range(len(v.letters)):
            if linked(sym, pair1, _rays_at(v.letters, q)):
                total += 1
    return total


def mark_all(w):
    """Sum of all marked rotations of w; periodic words pick up
    multiplicity (a period-d word of length n has n marks on d images)."""
    return FormalSum((LinearWord(w.rotation(p)), 1) for p in range(len(w.letters)))


def erase_mark(value):
    """Forget marks: each linear word maps to its reduced cyclic class,
    trivial classes to zero; extended linearly."""
    if isinstance(value, LinearWord):
        value = FormalSum.term(value)
    acc = {}
    for t, c in value.iterterms():
        w = reduce_cyclic(t.letters)
        if w is not None:
            acc[w] = acc.get(w, 0) + c
    return FormalSum(acc)


# -- populations -----------------------------------------------------------


def enumerate_cyclic_words(sym, max_len):
    """All cyclic reduced words of length 1..max_len, canonically sorted."""
    alphabet = sym.letters()
    found = set()

    def grow(prefix, length):
        if len(prefix) == length:
            if length == 1 or prefix[-1] != (prefix[0] ^ 1):
                core = tuple(prefix)
                found.add(min(core[i:] + core[:i] for i in range(length)))
            return
        for x in alphabet:
            if prefix and x == (prefix[-1] ^ 1):
                continue
            prefix.append(x)
            grow(prefix, length)
            prefix.pop()

    for length in range(1, max_len + 1):
        grow([], length)
    return [CyclicWord(t) for t in sorted(found, key=lambda t: (len(t), t))]


def random_cyclic_word(sym, rng, max_len, min_len=1):
    """A uniform-ish random cyclic reduced word, canonical form."""
    alphabet = sym.letters()
    length = rng.randint(min_len, max_len)
    while True:
        word = [rng.choice(alphabet)]
        for _ in range(length - 1):
            word.append(rng.choice([x for x in alphabet if x != (word[-1] ^ 1)]))
        if length == 1 or (word[-1] != (word[0] ^ 1)):
            w = reduce_cyclic(word)
            if w is not None:
                return w


# -- the Lie bialgebra suite -------------------------------------------------


def lie_act(sym, x, t):
    """The action of a class on 2-tensors:
    x.(u (x) v) = [x,u] (x) v + u (x) [x,v]."""
    out = FormalSum.zero()
    for (u, v), c in t.iterterms():
        out = out + c * tensor(bracket(sym, x, FormalSum.term(u)), FormalSum.term(v))
        out = out + c * tensor(FormalSum.term(u), bracket(sym, x, FormalSum.term(v)))
    return out


def _cobracket_then_left(sym, state):
    """(cobracket (x) id) after cobracket."""
    out = FormalSum.zero()
    for (u, v), c in cobracket(sym, state).iterterms():
        du = _basis_cobracket(sym, u)
        if du:
            out = out + c * tensor(du, FormalSum.term(v))
    return out


@dataclass
class BialgebraSuiteResult:
    surface: SurfaceSymbol
    word_count: int
    sample_count: int
    reports: dict

    @property
    def ok(self):
        return all(r.holds for r in self.reports.values())


def bialgebra_suite(sym, max_len=4, samples=200, random_max_len=8, seed=DEFAULT_SEED):
    """Antisymmetry, Jacobi, co-antisymmetry, cojacobi, and the cocycle
    compatibility, checked exactly.

    Each law runs exhaustively over all cyclic reduced words of length
    <= max_len - unordered tuples suffice because every law is checked
    together with the antisymmetries, which transport it across argument
    orderings by bilinearity - and then on `samples` seeded random tuples
    of words of length <= random_max_len.
    """
    words = enumerate_cyclic_words(sym, max_len)
    rng = random.Random(seed)
    reports = {}

    def rand_word():
        return random_cyclic_word(sym, rng, random_max_len)

    def run(name, detail, population, law):
        for inputs in population:
            lhs, rhs = law(*inputs)
            if lhs != rhs:
                reports[name] = AxiomReport(name, False,
                                            Witness(tuple(inputs), lhs, rhs, detail))
                return
        reports[name] = AxiomReport(name, True, None)

    def pairs():
        yield from combinations_with_replacement(words, 2)
        for _ in range(samples):
            yield (rand_word(), rand_word())

    def triples():
        yield from combinations_with_replacement(words, 3)
        for _ in range(samples):
            yield (rand_word(), rand_word(), rand_word())

    def singles():
        yield from ((w,) for w in words)
        for _ in range(samples):
            yield (rand_word(),)

    run("antisymmetry", "[a,b] != -[b,a]", pairs(),
        lambda a, b: (bracket(sym, a, b), -bracket(sym, b, a)))

    run("jacobi", "[[a,b],c] + [[b,c],a] + [[c,a],b] != 0", triples(),
        lambda a, b, c: (bracket(sym, bracket(sym, a, b), c)
                         + bracket(sym, bracket(sym, b, c), a)
                         + bracket(sym, bracket(sym, c, a), b),
                         FormalSum.zero()))

    run("co-antisymmetry", "swap d(a) != -d(a)", singles(),
        lambda a: ((lambda d: (swap_graded(d) if d else d, -d))(cobracket(sym, a))))

    def cojacobi_law(a):
        once = _cobracket_then_left(sym, a)
        if once.is_zero:
            return (once, FormalSum.zero())
        total = once + permute_graded(once, (2, 0, 1)) + permute_graded(once, (1, 2, 0))
        return (total, FormalSum.zero())

    run("cojacobi", "(id + rot + rot^2)(d(x)id)d(a) != 0", singles(), cojacobi_law)

    run("drinfeld", "d([a,b]) != a.d(b) - b.d(a)", pairs(),
        lambda a, b: (cobracket(sym, bracket(sym, a, b)),
                      lie_act(sym, a, cobracket(sym, b))
                      - lie_act(sym, b, cobracket(sym, a))))

    return BialgebraSuiteResult(surface=sym, word_count=len(words),
                                sample_count=samples, reports=reports)
