"""Endpoint algebra for alternating words of indexed variables.

A word over positive indices is *alternating* when adjacent letters differ
and every interior letter is a strict local extremum.  The algebra here
forgets everything about an alternating word except its endpoints and the
directions of its first and last steps.  Two kinds of symbols result:

    T(i)            a bare one-letter word,
    S(i, a, b, j)   the class of alternating words from letter i (leaving
                    with step direction a) to letter j (arriving with step
                    direction b), where a, b are UP or DOWN.

An :class:`Element` is a finitely supported combination of symbols with
nonnegative exact rational coefficients.  The symmetric bracket
{A, B} = AB + BA descends to this quotient, which is what makes exhaustive
searches over commutator monomials tractable: norms that only count
alternating mass are exactly representable here.

Symbols are plain tuples: ``(0, i, j, a, b)`` for S and ``(1, i)`` for T,
so the fixed total order used for canonical serialization is simply tuple
order (all S symbols sorted by (i, j, a, b), then all T symbols by i).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .rationals import format_rat, normalize_rat, parse_rat

UP = 0
DOWN = 1

_ARROW_CHARS = ("U", "D")

Symbol = tuple


class UndefinedSourceError(KeyError):
    """A projection was applied to an element outside the map's domain."""


def opposite(arrow: int) -> int:
    return 1 - arrow


def span(i: int, first: int, last: int, j: int) -> Symbol:
    """Symbol S(i, first, last, j); i == j is allowed."""
    if i < 1 or j < 1:
        raise ValueError("indices must be positive")
    if first not in (UP, DOWN) or last not in (UP, DOWN):
        raise ValueError("arrows must be UP or DOWN")
    return (0, i, j, first, last)


def single(i: int) -> Symbol:
    """Symbol T(i), a one-letter word."""
    if i < 1:
        raise ValueError("indices must be positive")
    return (1, i)


def symbol_indices(sym: Symbol) -> tuple:
    return (sym[1], sym[2]) if sym[0] == 0 else (sym[1],)


def _format_symbol(sym: Symbol) -> str:
    if sym[0] == 0:
        return f"S({sym[1]},{_ARROW_CHARS[sym[3]]},{_ARROW_CHARS[sym[4]]},{sym[2]})"
    return f"T({sym[1]})"


def format_symbol(sym: Symbol) -> str:
    return _format_symbol(sym)


def parse_symbol(text: str) -> Symbol:
    return _parse_symbol(text)


class Element:
    """Nonnegative rational combination of symbols, canonically stored.

    Instances behave as immutable values: zero coefficients are dropped at
    construction, equality and hashing go through a sorted canonical key,
    and every operation returns a fresh Element.
    """

    __slots__ = ("_c", "_key", "_hash")

    def __init__(self, coeffs: dict | None = None, *, _trusted: bool = False):
        if coeffs is None:
            coeffs = {}
        if not _trusted:
            clean = {}
            for sym, value in coeffs.items():
                value = normalize_rat(value)
                if value < 0:
                    raise ValueError(f"negative coefficient for {sym}: {value}")
                if value != 0:
                    clean[sym] = value
            coeffs = clean
        self._c = coeffs
        self._key = None
        self._hash = None

    @staticmethod
    def zero() -> "Element":
        return _ZERO

    @staticmethod
    def from_terms(terms: Iterable[tuple]) -> "Element":
        acc: dict = {}
        for sym, value in terms:
            acc[sym] = acc.get(sym, 0) + value
        return Element(acc)

    # -- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self._c

    def coeff(self, sym: Symbol):
        return self._c.get(sym, 0)

    def coeffs(self) -> dict:
        return dict(self._c)

    def terms(self) -> list:
        """Terms in the canonical symbol order."""
        return sorted(self._c.items())

    def __len__(self) -> int:
        return len(self._c)

    def key(self) -> tuple:
        if self._key is None:
            self._key = tuple(
                (sym, normalize_rat(value)) for sym, value in sorted(self._c.items())
            )
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __repr__(self) -> str:
        return f"Element({format_element(self)})"

    # -- norms and supports -----------------------------------------------

    def alt_norm(self):
        """Total coefficient mass (every symbol stands for alternating words)."""
        return normalize_rat(sum(self._c.values()))

    def forw_norm(self):
        """Mass of words not starting with an ascent: T(i) plus S(i,D,·,·)."""
        total = 0
        for sym, value in self._c.items():
            if sym[0] == 1 or sym[3] == DOWN:
                total += value
        return normalize_rat(total)

    def support(self) -> frozenset:
        idx = set()
        for sym in self._c:
            if sym[0] == 0:
                idx.add(sym[1])
                idx.add(sym[2])
            else:
                idx.add(sym[1])
        return frozenset(idx)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        acc = dict(self._c)
        for sym, value in other._c.items():
            acc[sym] = acc.get(sym, 0) + value
        return Element(acc)

    def scale(self, factor) -> "Element":
        factor = normalize_rat(factor)
        if factor < 0:
            raise ValueError("only nonnegative scaling is defined")
        if factor == 0:
            return _ZERO
        return Element({sym: normalize_rat(value * factor) for sym, value in self._c.items()},
                       _trusted=True)

    def __mul__(self, factor) -> "Element":
        return self.scale(factor)

    __rmul__ = __mul__

    # -- structural operations ----------------------------------------------

    def project(self, mapping) -> "Element":
        """Rewrite every endpoint through a monotone map; colliding symbols add.

        Raises UndefinedSourceError when the support is not contained in the
        map's domain.  Both norms are invariant: arrows are untouched and no
        mass is created or lost.
        """
        table = mapping.as_dict() if isinstance(mapping, MonotoneMap) else dict(mapping)
        acc: dict = {}
        try:
            for sym, value in self._c.items():
                if sym[0] == 0:
                    new = (0, table[sym[1]], table[sym[2]], sym[3], sym[4])
                else:
                    new = (1, table[sym[1]])
                acc[new] = acc.get(new, 0) + value
        except KeyError as exc:
            raise UndefinedSourceError(f"index {exc.args[0]} not in map domain") from exc
        return Element(acc)

    def regularize(self) -> "Element":
        """Apply the unique order isomorphism of the support onto {1..k}."""
        supp = sorted(self.support())
        if supp == list(range(1, len(supp) + 1)):
            return self
        table = {idx: pos for pos, idx in enumerate(supp, start=1)}
        return self.project(table)

    def is_regular(self) -> bool:
        supp = self.support()
        return supp == frozenset(range(1, len(supp) + 1))

    def clean(self) -> "Element":
        """Drop every equal-endpoint S(i,·,·,i); T symbols are kept."""
        acc = {sym: value for sym, value in self._c.items()
               if sym[0] == 1 or sym[1] != sym[2]}
        if len(acc) == len(self._c):
            return self
        return Element(acc, _trusted=True)

    def is_clean(self) -> bool:
        return all(sym[0] == 1 or sym[1] != sym[2] for sym in self._c)

    def leq(self, other: "Element") -> bool:
        """Coefficient-wise comparison (the downward order of the cone)."""
        oc = other._c
        for sym, value in self._c.items():
            if value > oc.get(sym, 0):
                return False
        return True

    def restrict_symbols(self, symbols) -> "Element":
        """Keep only the listed coordinates (used to shrink LP rows)."""
        acc = {sym: self._c[sym] for sym in symbols if sym in self._c}
        return Element(acc, _trusted=True)

    def clip_support(self, indices) -> "Element":
        """Zero every symbol with an endpoint outside `indices`."""
        allowed = frozenset(indices)
        acc = {}
        for sym, value in self._c.items():
            if sym[0] == 0:
                if sym[1] in allowed and sym[2] in allowed:
                    acc[sym] = value
            elif sym[1] in allowed:
                acc[sym] = value
        if len(acc) == len(self._c):
            return self
        return Element(acc, _trusted=True)


_ZERO = Element({})


@dataclass(frozen=True)
class ScaledElement:
    """An element together with a quarter-exponent q.

    The pair (elem, q) denotes the real-coefficient element 6^{-q/4}·elem.
    q is deliberately never auto-normalized: it records which normalized
    family a value came from.  Value equality therefore compares q mod 4
    and reconciles the remaining rational power of 6.
    """

    elem: Element
    q: int

    def value_eq(self, other: "ScaledElement") -> bool:
        if self.elem.is_zero() and other.elem.is_zero():
            return True
        if (self.q - other.q) % 4 != 0:
            return False
        shift = (other.q - self.q) // 4
        # 6^{-q/4} elem == 6^{-q'/4} elem'  <=>  elem' == 6^{(q'-q)/4} elem
        if shift >= 0:
            return other.elem == self.elem.scale(6**shift)
        return self.elem == other.elem.scale(6**(-shift))

    def alt_norm(self):
        return (self.elem.alt_norm(), self.q)

    def forw_norm(self):
        return (self.elem.forw_norm(), self.q)


# -- words ------------------------------------------------------------------


def word_is_alternating(word: Sequence[int]) -> bool:
    """Adjacent letters differ and no interior letter lies between its
    neighbours; equivalently all steps are nonzero with alternating signs."""
    n = len(word)
    if n == 0:
        return False
    last_dir = None
    for k in range(n - 1):
        if word[k] == word[k + 1]:
            return False
        direction = UP if word[k + 1] > word[k] else DOWN
        if direction == last_dir:
            return False
        last_dir = direction
    return True


def abstract_word(word: Sequence[int]) -> Element:
    """Image of one word in the endpoint algebra (zero if not alternating)."""
    if len(word) == 0:
        raise ValueError("words are nonempty")
    if any(i < 1 for i in word):
        raise ValueError("letters must be positive indices")
    if len(word) == 1:
        return Element({(1, word[0]): 1}, _trusted=True)
    if not word_is_alternating(word):
        return _ZERO
    first = UP if word[1] > word[0] else DOWN
    last = UP if word[-1] > word[-2] else DOWN
    return Element({(0, word[0], word[-1], first, last): 1}, _trusted=True)


# -- the symmetric bracket ----------------------------------------------------

# T(i) acts under the bracket as S(i,U,D,i) + S(i,D,U,i); the expansion is
# precomputed per element before pairing.


def _bracket_forms(coeffs: dict) -> list:
    forms = []
    for sym, value in coeffs.items():
        if sym[0] == 0:
            forms.append((sym[1], sym[2], sym[3], sym[4], value))
        else:
            i = sym[1]
            forms.append((i, i, UP, DOWN, value))
            forms.append((i, i, DOWN, UP, value))
    return forms


def _jacobi_dict(ca: dict, cb: dict) -> dict:
    fa = _bracket_forms(ca)
    fb = _bracket_forms(cb)
    acc: dict = {}
    for ia, ja, a1, a2, va in fa:
        for ib, jb, b1, b2, vb in fb:
            # u then v: join step ja -> ib
            if ib != ja:
                need = DOWN if ib > ja else UP  # opposite of the join direction
                if a2 == need and b1 == need:
                    key = (0, ia, jb, a1, b2)
                    acc[key] = acc.get(key, 0) + va * vb
            # v then u: join step jb -> ia
            if ia != jb:
                need = DOWN if ia > jb else UP
                if b2 == need and a1 == need:
                    key = (0, ib, ja, b1, a2)
                    acc[key] = acc.get(key, 0) + va * vb
    return {sym: value for sym, value in acc.items() if value != 0}


def jacobi(a: Element, b: Element) -> Element:
    """Symmetric bracket {A,B} = AB + BA on the endpoint algebra."""
    return Element(_jacobi_dict(a._c, b._c), _trusted=True)


def scaled_jacobi(a: ScaledElement, b: ScaledElement) -> ScaledElement:
    """Bracket of normalized values; quarter-exponents add."""
    return ScaledElement(jacobi(a.elem, b.elem), a.q + b.q)


# -- monotone maps -------------------------------------------------------------


@dataclass(frozen=True)
class MonotoneMap:
    """A finite nondecreasing map of positive indices.

    pairs is a tuple of (source, target) with sources strictly increasing
    and targets nondecreasing.  The map is a relabeling exactly when the
    targets are strictly increasing.
    """

    pairs: tuple

    def __post_init__(self):
        last_s = 0
        last_t = 0
        for s, t in self.pairs:
            if s <= last_s:
                raise ValueError("sources must be strictly increasing")
            if t < last_t:
                raise ValueError("targets must be nondecreasing")
            if s < 1 or t < 1:
                raise ValueError("indices must be positive")
            last_s, last_t = s, t

    @staticmethod
    def from_lists(sources: Sequence[int], targets: Sequence[int]) -> "MonotoneMap":
        if len(sources) != len(targets):
            raise ValueError("source and target lists differ in length")
        return MonotoneMap(tuple(zip(sources, targets)))

    @staticmethod
    def identity_on(indices) -> "MonotoneMap":
        return MonotoneMap(tuple((i, i) for i in sorted(indices)))

    def as_dict(self) -> dict:
        return dict(self.pairs)

    def domain(self) -> frozenset:
        return frozenset(s for s, _ in self.pairs)

    def targets(self) -> tuple:
        return tuple(t for _, t in self.pairs)

    def apply(self, i: int) -> int:
        for s, t in self.pairs:
            if s == i:
                return t
        raise UndefinedSourceError(f"index {i} not in map domain")

    def is_injective(self) -> bool:
        ts = self.targets()
        return all(ts[k] < ts[k + 1] for k in range(len(ts) - 1))

    def compose(self, inner: "MonotoneMap") -> "MonotoneMap":
        """self ∘ inner; defined when inner's targets lie in self's domain."""
        table = self.as_dict()
        try:
            pairs = tuple((s, table[t]) for s, t in inner.pairs)
        except KeyError as exc:
            raise UndefinedSourceError(f"index {exc.args[0]} not in map domain") from exc
        return MonotoneMap(pairs)


def regularizing_map(support) -> MonotoneMap:
    return MonotoneMap(tuple((idx, pos) for pos, idx in enumerate(sorted(support), 1)))


def enumerate_monotone_maps(src, ambient, mode: str = "injective",
                            gaps: bool = False) -> list:
    """All monotone maps from `src` into the chain `ambient`, realizably.

    Without gaps the targets are restricted to `ambient`.  With gaps the
    chain is augmented by the slots of N* around the ambient indices: below
    the first element, between consecutive elements, and above the last.
    Gap room is what N* actually provides (t1-1 below, t_{k+1}-t_k-1 in the
    interior, unbounded above); injective maps consume one unit of room per
    source while general maps share one canonical fresh value per gap.
    Hence every relabeling/projection of N* appears here up to the order
    type of its interleaving with the ambient chain, and nothing
    unrealizable is produced.

    Gap targets are named canonically: interior and below gaps count up to
    the next ambient element, the unbounded top gap uses ambient_max + k.
    """
    if mode not in ("injective", "general"):
        raise ValueError("mode must be 'injective' or 'general'")
    sources = sorted(src)
    amb = sorted(ambient)
    injective = mode == "injective"
    m = len(amb)
    if not gaps and m == 0:
        return [] if sources else [MonotoneMap(())]

    # slots: even index 2g = gap g (before amb[g]); odd index 2t+1 = amb[t]
    def gap_room(g: int) -> float:
        if not gaps:
            return 0
        if g == 0:
            return (amb[0] - 1) if m else float("inf")
        if g == m:
            return float("inf")
        return amb[g] - amb[g - 1] - 1

    results = []
    n = len(sources)
    assignment = [0] * n

    def emit():
        pairs = []
        pos = 0
        while pos < n:
            slot = assignment[pos]
            block_end = pos
            while block_end < n and assignment[block_end] == slot:
                block_end += 1
            count = block_end - pos
            if slot % 2 == 1:
                values = [amb[slot // 2]] * count
            else:
                g = slot // 2
                if g == m:  # unbounded top gap, fresh names above the chain
                    base = amb[-1] if m else 0
                    values = ([base + 1 + k for k in range(count)]
                              if injective else [base + 1] * count)
                else:  # bounded gap below amb[g]; room was checked in walk()
                    upper = amb[g]
                    values = ([upper - count + k for k in range(count)]
                              if injective else [upper - 1] * count)
            for k in range(count):
                pairs.append((sources[pos + k], values[k]))
            pos = block_end
        results.append(MonotoneMap(tuple(pairs)))

    def walk(pos: int, min_slot: int, used_room: dict):
        if pos == n:
            emit()
            return
        for slot in range(min_slot, 2 * m + 1):
            if slot % 2 == 1:  # ambient element
                assignment[pos] = slot
                walk(pos + 1, slot + 1 if injective else slot, used_room)
            else:
                if not gaps:
                    continue
                g = slot // 2
                room = gap_room(g)
                if injective:
                    if used_room.get(g, 0) + 1 > room:
                        continue
                    assignment[pos] = slot
                    used_room[g] = used_room.get(g, 0) + 1
                    walk(pos + 1, slot, used_room)
                    used_room[g] -= 1
                else:
                    if room < 1:
                        continue
                    assignment[pos] = slot
                    walk(pos + 1, slot, used_room)

    walk(0, 0, {})
    results.sort(key=lambda f: f.pairs)
    return results


# -- canonical text form -------------------------------------------------------


def format_element(elem: Element) -> str:
    if elem.is_zero():
        return "0"
    return " + ".join(f"{format_rat(v)} {_format_symbol(sym)}" for sym, v in elem.terms())


def format_scaled(scaled: ScaledElement) -> str:
    """One-line canonical form: `q=<int> : <terms>` with terms in symbol order."""
    return f"q={scaled.q} : {format_element(scaled.elem)}"


def _parse_symbol(text: str) -> Symbol:
    text = text.strip()
    if text.startswith("S(") and text.endswith(")"):
        parts = [p.strip() for p in text[2:-1].split(",")]
        if len(parts) != 4:
            raise ValueError(f"malformed span symbol: {text!r}")
        i, a, b, j = parts
        try:
            first = _ARROW_CHARS.index(a)
            last = _ARROW_CHARS.index(b)
        except ValueError:
            raise ValueError(f"bad arrow in {text!r}") from None
        return span(int(i), first, last, int(j))
    if text.startswith("T(") and text.endswith(")"):
        return single(int(text[2:-1]))
    raise ValueError(f"malformed symbol: {text!r}")


def parse_element(text: str) -> Element:
    text = text.strip()
    if text == "0":
        return _ZERO
    acc: dict = {}
    for chunk in text.split(" + "):
        chunk = chunk.strip()
        head, _, symtext = chunk.partition(" ")
        value = parse_rat(head)
        sym = _parse_symbol(symtext)
        acc[sym] = acc.get(sym, 0) + value
    return Element(acc)


def parse_scaled(line: str) -> ScaledElement:
    line = line.strip()
    if not line.startswith("q="):
        raise ValueError(f"canonical element line must start with q=: {line!r}")
    qpart, _, rest = line.partition(":")
    q = int(qpart[2:].strip())
    return ScaledElement(parse_element(rest), q)


# -- convenience used across modules -------------------------------------------


def elements_equal_mod_relabel(a: Element, b: Element) -> bool:
    return a.regularize() == b.regularize()


def symbols_over(indices) -> list:
    """Every symbol whose endpoints lie in `indices`, in canonical order."""
    idx = sorted(indices)
    syms = [(0, i, j, a, b)
            for i in idx for j in idx
            for a in (UP, DOWN) for b in (UP, DOWN)]
    syms.extend((1, i) for i in idx)
    return sorted(syms)
