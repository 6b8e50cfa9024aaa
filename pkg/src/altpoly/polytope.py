"""Hull operations for downward-closed convex hulls of elements.

The hulls of interest are conv(dec S): convex combinations of the downward
(coefficient-wise) closure of a finite generator list S, optionally closed
under relabelings (injective monotone index maps) or projections (general
monotone maps).  Membership of x only constrains the coordinates where x
is nonzero, so every LP here is posed on x's own symbols; columns are
generator images restricted to those rows, deduplicated.  Yes-verdicts
carry convex-combination witnesses; No-verdicts carry a nonnegative
separating functional together with a bound dominating *all* columns of
the closure, which a verifier rechecks by re-enumerating columns (no LP
required).

Relabel closures admit more columns than the generators themselves: a wide
generator relabeled partly outside the target support contributes its
clipped shadow.  Patterns are enumerated realizably (the room between
target indices is what the positive integers actually provide) and priced
lazily: membership starts from a small promising column set and grows it
along Farkas violations until a witness or a globally valid refutation is
reached.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from . import lp as lpmod
from .algebra import (
    Element,
    ScaledElement,
    enumerate_monotone_maps,
    format_scaled,
    parse_scaled,
)
from .rationals import normalize_rat, rat


class AmbientError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSet:
    """Deduplicated nonzero generators at a common quarter-exponent.

    Denotes conv(dec({6^{-q/4} g})) unless a closure mode wraps it.
    """

    ambient: frozenset
    q: int
    gens: tuple

    def __post_init__(self):
        seen = set()
        for g in self.gens:
            if g.is_zero():
                raise ValueError("zero element cannot be a generator")
            if not g.support() <= self.ambient:
                raise AmbientError(f"generator support {sorted(g.support())} "
                                   f"outside ambient {sorted(self.ambient)}")
            key = g.key()
            if key in seen:
                raise ValueError("generators must be pairwise distinct")
            seen.add(key)

    @staticmethod
    def make(ambient, q: int, gens: Iterable[Element]) -> "GeneratorSet":
        dedup = {}
        for g in gens:
            if not g.is_zero():
                dedup.setdefault(g.key(), g)
        ordered = tuple(dedup[k] for k in sorted(dedup))
        return GeneratorSet(frozenset(ambient), q, ordered)

    def serialize(self) -> str:
        k = max(self.ambient) if self.ambient else 0
        if self.ambient != frozenset(range(1, k + 1)):
            raise ValueError("file format requires a chain-shaped ambient {1..k}")
        lines = [f"ambient={k} q={self.q} count={len(self.gens)}"]
        lines.extend(format_scaled(ScaledElement(g, self.q)) for g in self.gens)
        return "\n".join(lines) + "\n"

    @staticmethod
    def deserialize(text: str) -> "GeneratorSet":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = dict(part.split("=") for part in lines[0].split())
        k, q, count = int(head["ambient"]), int(head["q"]), int(head["count"])
        gens = []
        for line in lines[1:]:
            scaled = parse_scaled(line)
            if scaled.q != q:
                raise ValueError("generator line q disagrees with header")
            gens.append(scaled.elem)
        if len(gens) != count:
            raise ValueError("generator count disagrees with header")
        return GeneratorSet.make(range(1, k + 1), q, gens)


@dataclass(frozen=True)
class HullWitness:
    """x + slack = sum of lambda-weighted generators, lambdas on the simplex."""

    lambdas: tuple  # ((Element, coeff), ...)
    slack: Element

    def verify(self, x: Element) -> bool:
        total = rat(0)
        acc = Element.zero()
        for elem, coeff in self.lambdas:
            if coeff < 0:
                return False
            total += coeff
            acc = acc + elem.scale(coeff)
        if total != 1:
            return False
        return x.leq(acc) and acc == x + self.slack


@dataclass(frozen=True)
class HullRefutation:
    """Nonnegative functional separating x from every column of the hull:
    functional . x > bound >= functional . c for all columns c."""

    functional: tuple  # ((symbol, coeff), ...)
    bound: object

    def score(self, elem: Element):
        return sum((coeff * elem.coeff(sym) for sym, coeff in self.functional), rat(0))

    def verify(self, x: Element, columns: Iterable[Element]) -> bool:
        if any(coeff < 0 for _, coeff in self.functional):
            return False
        if not self.score(x) > self.bound:
            return False
        return all(self.score(c) <= self.bound for c in columns)


# -- pattern enumeration ------------------------------------------------------


def _partial_relabel_patterns(sources: list, targets: list) -> Iterator[dict]:
    """Realizable partial strictly-increasing maps sources -> targets.

    A source left out of the pattern is sent by the underlying relabeling
    to a positive integer outside the target support, so a block of hidden
    sources between two chosen targets needs that much room among the
    non-target integers in between (above the last choice the room is
    unbounded, below the first it is what sits under it).  Empty patterns
    are skipped: their columns are zero.
    """
    tset = set(targets)
    n = len(sources)
    tn = len(targets)
    assignment: dict = {}

    def room(lower: int, upper: int) -> int:
        full = upper - lower - 1
        inside = sum(1 for t in tset if lower < t < upper)
        return full - inside

    def rec(si: int, ti_min: int, last_target: int, pending: int):
        if si == n:
            if assignment:
                yield dict(assignment)
            return
        src = sources[si]
        yield from rec(si + 1, ti_min, last_target, pending + 1)
        for ti in range(ti_min, tn):
            t = targets[ti]
            if room(last_target, t) < pending:
                continue
            assignment[src] = t
            yield from rec(si + 1, ti + 1, t, 0)
            del assignment[src]

    yield from rec(0, 0, 0, 0)


def _total_monotone_maps(sources: list, targets: list) -> Iterator[dict]:
    """All nondecreasing total maps sources -> targets."""
    n = len(sources)
    tn = len(targets)
    if n == 0:
        yield {}
        return
    if tn == 0:
        return
    assignment: dict = {}

    def rec(si: int, ti_min: int):
        if si == n:
            yield dict(assignment)
            return
        src = sources[si]
        for ti in range(ti_min, tn):
            assignment[src] = targets[ti]
            yield from rec(si + 1, ti)
        del assignment[src]

    yield from rec(0, 0)


def _apply_pattern(gen: Element, pattern: dict) -> Element:
    """Project through a (possibly partial) map; symbols leaving it are clipped."""
    acc: dict = {}
    for sym, value in gen.coeffs().items():
        if sym[0] == 0:
            ti = pattern.get(sym[1])
            tj = pattern.get(sym[2])
            if ti is None or tj is None:
                continue
            new = (0, ti, tj, sym[3], sym[4])
        else:
            ti = pattern.get(sym[1])
            if ti is None:
                continue
            new = (1, ti)
        acc[new] = acc.get(new, 0) + value
    return Element(acc)


# -- column sources -----------------------------------------------------------


class ExplicitColumns:
    """The generator list itself as the column set."""

    def __init__(self, gens: Sequence[Element]):
        self.gens = list(gens)

    def initial(self, x: Element) -> list:
        return self.gens

    def all_columns(self) -> Iterator[Element]:
        return iter(self.gens)


class PoolColumns:
    """Indexed explicit column list, optionally excluding one element."""

    def __init__(self, columns: list, rowindex: dict | None = None, exclude_key=None):
        self.columns = columns
        self.rowindex = _index_columns(columns) if rowindex is None else rowindex
        self.exclude_key = exclude_key

    def _ok(self, col: Element) -> bool:
        return self.exclude_key is None or col.key() != self.exclude_key

    def initial(self, x: Element) -> list:
        rows = sorted(((len(self.rowindex.get(sym, ())), sym) for sym in x.coeffs()),
                      key=lambda kv: kv[0])
        chosen: dict = {}
        for _, sym in rows[:6]:
            for idx, _ in self.rowindex.get(sym, ()):
                chosen[idx] = chosen.get(idx, 0) + 1
        ranked = sorted(chosen, key=lambda idx: (-chosen[idx], idx))
        return [c for c in (self.columns[i] for i in ranked[:800]) if self._ok(c)]

    def all_columns(self) -> Iterator[Element]:
        if self.exclude_key is None:
            return iter(self.columns)
        return (c for c in self.columns if c.key() != self.exclude_key)

    def scored_columns(self, functional) -> Iterator:
        """(column, functional.column) for columns with nonzero score,
        accumulated row-wise; columns untouched by the functional score 0."""
        scores: dict = {}
        for sym, y in functional:
            for idx, val in self.rowindex.get(sym, ()):
                scores[idx] = scores.get(idx, 0) + y * val
        for idx in sorted(scores):
            col = self.columns[idx]
            if self._ok(col):
                yield col, scores[idx]

    def dominating_column(self, x: Element):
        """A single column >= x, if one exists (cheap witness)."""
        best_sym = None
        best_len = None
        for sym in x.coeffs():
            entries = self.rowindex.get(sym, ())
            if best_len is None or len(entries) < best_len:
                best_len = len(entries)
                best_sym = sym
        if best_sym is None:
            return None
        need = x.coeff(best_sym)
        for idx, value in self.rowindex.get(best_sym, ()):
            col = self.columns[idx]
            if value >= need and self._ok(col) and x.leq(col):
                return col
        return None

    def best_single_scale(self, x: Element):
        """(scale, column) maximizing min_sym col[sym]/x[sym]; (0, None) if none."""
        rows = sorted(x.coeffs().items(),
                      key=lambda kv: len(self.rowindex.get(kv[0], ())))
        if not rows:
            return rat(0), None
        first_sym, first_val = rows[0]
        best = rat(0)
        best_col = None
        for idx, value in self.rowindex.get(first_sym, ()):
            col = self.columns[idx]
            if not self._ok(col):
                continue
            scale = rat(value) / rat(first_val)
            if scale <= best:
                continue
            for sym, xv in rows[1:]:
                cv = col.coeff(sym)
                if cv == 0:
                    scale = rat(0)
                    break
                s = rat(cv) / rat(xv)
                if s < scale:
                    scale = s
                    if scale <= best:
                        break
            if scale > best:
                best = scale
                best_col = col
        return best, best_col


def _index_columns(columns: list) -> dict:
    rowindex: dict = {}
    for idx, col in enumerate(columns):
        for sym, value in col.coeffs().items():
            rowindex.setdefault(sym, []).append((idx, value))
    return rowindex


class RelabelPool(PoolColumns):
    """All clipped relabel/projection columns of a generator list into a
    fixed target support, materialized once."""

    def __init__(self, gens: Sequence[Element], target_supp, mode: str,
                 clean: bool = False):
        if mode not in ("relab", "proj"):
            raise ValueError("mode must be 'relab' or 'proj'")
        targets = sorted(target_supp)
        dedup: dict = {}
        for gen in sorted(gens, key=Element.key):
            sources = sorted(gen.support())
            if mode == "relab":
                patterns = _partial_relabel_patterns(sources, targets)
            else:
                patterns = _total_monotone_maps(sources, targets)
            for pattern in patterns:
                col = _apply_pattern(gen, pattern)
                if clean:
                    col = col.clean()
                if not col.is_zero():
                    dedup.setdefault(col.key(), col)
        super().__init__([dedup[k] for k in sorted(dedup)])


# -- membership ---------------------------------------------------------------


def _restrict_key(col: Element, rows: list) -> tuple:
    return tuple((i, col.coeff(sym)) for i, (sym, _) in enumerate(rows)
                 if col.coeff(sym) != 0)


def _membership_lp(rows: list, reps: list):
    cons = []
    for i, (sym, value) in enumerate(rows):
        coeffs = {}
        for j, (_, key) in enumerate(reps):
            for ri, cv in key:
                if ri == i:
                    coeffs[j] = cv
        cons.append(lpmod.Constraint.make(coeffs, lpmod.GREATER, value))
    cons.append(lpmod.Constraint.make({j: 1 for j in range(len(reps))}, lpmod.EQUAL, 1))
    return lpmod.LinearProgram.make(len(reps), cons, {}, "max")


def _witness_from_primal(x: Element, reps: list, primal) -> HullWitness:
    lams = []
    acc = Element.zero()
    for j, (col, _) in enumerate(reps):
        lam = normalize_rat(primal[j])
        if lam != 0:
            lams.append((col, lam))
            acc = acc + col.scale(lam)
    slack_coeffs = acc.coeffs()
    for sym, value in x.coeffs().items():
        slack_coeffs[sym] = slack_coeffs.get(sym, 0) - value
    witness = HullWitness(tuple(lams), Element(slack_coeffs))
    if not witness.verify(x):
        raise lpmod.LpInternalError("hull witness failed verification")
    return witness


def _refutation_from_farkas(rows: list, farkas) -> HullRefutation:
    functional = []
    for (sym, _), y in zip(rows, farkas):
        y = normalize_rat(y)
        if y < 0:
            raise lpmod.LpInternalError("negative multiplier on a >= row")
        if y != 0:
            functional.append((sym, y))
    mu = farkas[len(rows)]
    return HullRefutation(tuple(functional), normalize_rat(-mu))


_PRICE_BATCH = 400


def conv_dec_member(x: Element, source) -> HullWitness | HullRefutation:
    """Decide x in conv dec of the source's columns, with certificate.

    Pricing loop: solve on the current restricted column set; a Farkas
    refutation is only final once no column of the full closure beats its
    bound, otherwise the violators join the LP and it runs again.
    """
    if x.is_zero():
        for col in source.all_columns():
            return HullWitness(((col, rat(1)),), col)
        return HullRefutation((), rat(-1))

    if hasattr(source, "dominating_column"):
        col = source.dominating_column(x)
        if col is not None:
            slack = Element({sym: value - x.coeff(sym)
                             for sym, value in col.coeffs().items()})
            return HullWitness(((col, rat(1)),), slack)

    rows = sorted(x.coeffs().items())
    reps: list = []
    seen_keys: set = set()
    for col in source.initial(x):
        key = _restrict_key(col, rows)
        if key and key not in seen_keys:
            seen_keys.add(key)
            reps.append((col, key))

    while True:
        if reps:
            outcome = lpmod.solve(_membership_lp(rows, reps))
            if isinstance(outcome, lpmod.Optimal):
                return _witness_from_primal(x, reps, outcome.primal)
            refutation = _refutation_from_farkas(rows, outcome.farkas)
        else:
            refutation = HullRefutation(tuple((sym, rat(1)) for sym, _ in rows), rat(0))
        added = 0
        if hasattr(source, "scored_columns"):
            # bound >= 0 and columns are nonnegative, so only columns the
            # functional touches can beat it; score them row-wise
            candidates = ((col, score) for col, score in
                          source.scored_columns(refutation.functional))
        else:
            candidates = ((col, refutation.score(col)) for col in source.all_columns())
        for col, score in candidates:
            if score > refutation.bound:
                key = _restrict_key(col, rows)
                if key not in seen_keys:
                    seen_keys.add(key)
                    reps.append((col, key))
                    added += 1
                    if added >= _PRICE_BATCH:
                        break
        if added == 0:
            return refutation


@dataclass(frozen=True)
class ScaleResult:
    """Exact maximum of {c : c.w in hull} with both-sided certificates."""

    value: object
    witness: HullWitness | None  # witness for value.w when value > 0
    functional: tuple  # dual prices (<= 0) on w's rows
    convexity_price: object

    def column_feasible(self, col: Element) -> bool:
        score = sum((coeff * col.coeff(sym) for sym, coeff in self.functional), rat(0))
        return score + self.convexity_price >= 0


def conv_dec_scale(w: Element, source) -> ScaleResult:
    """Exact maximum c with c.w in conv dec of the source's columns."""
    if w.is_zero():
        raise ValueError("scaling target must be nonzero")
    rows = sorted(w.coeffs().items())
    reps: list = []
    seen_keys: set = set()

    def add(col: Element) -> bool:
        key = _restrict_key(col, rows)
        if key and key not in seen_keys:
            seen_keys.add(key)
            reps.append((col, key))
            return True
        return False

    for col in source.initial(w):
        add(col)
    if not reps:
        for col in source.all_columns():
            if add(col) and len(reps) >= _PRICE_BATCH:
                break
    if not reps:
        # no column overlaps w at all: only c = 0 is feasible
        return ScaleResult(rat(0), None, (), rat(0))

    while True:
        if not reps:
            result = ScaleResult(rat(0), None, (), rat(0))
        else:
            cons = []
            for i, (sym, value) in enumerate(rows):
                coeffs = {0: -value}
                for j, (_, key) in enumerate(reps):
                    for ri, cv in key:
                        if ri == i:
                            coeffs[j + 1] = cv
                cons.append(lpmod.Constraint.make(coeffs, lpmod.GREATER, 0))
            cons.append(lpmod.Constraint.make(
                {j + 1: 1 for j in range(len(reps))}, lpmod.EQUAL, 1))
            prog = lpmod.LinearProgram.make(1 + len(reps), cons, {0: 1}, "max")
            outcome = lpmod.solve(prog)
            if not isinstance(outcome, lpmod.Optimal):
                raise lpmod.LpInternalError("critical scale LP must have an optimum")
            duals = outcome.dual
            functional = tuple((sym, normalize_rat(duals[i]))
                               for i, (sym, _) in enumerate(rows) if duals[i] != 0)
            result = ScaleResult(normalize_rat(outcome.value), None, functional,
                                 normalize_rat(duals[len(rows)]))
        added = 0
        if hasattr(source, "scored_columns"):
            # dual constraint for a column c is functional.c + price >= 0;
            # price equals the current optimum >= 0, so zero-scored columns
            # never violate and row-wise scoring is complete
            candidates = source.scored_columns(result.functional)
            for col, score in candidates:
                if score + result.convexity_price < 0 and add(col):
                    added += 1
                    if added >= _PRICE_BATCH:
                        break
        else:
            for col in source.all_columns():
                if not result.column_feasible(col) and add(col):
                    added += 1
                    if added >= _PRICE_BATCH:
                        break
        if added:
            continue
        witness = None
        if reps and result.value > 0:
            witness = _witness_from_primal(w.scale(result.value), reps,
                                           outcome.primal[1:])
        return ScaleResult(result.value, witness, result.functional,
                           result.convexity_price)


# -- public operations ----------------------------------------------------------


def hull_member(x: Element, G: GeneratorSet) -> HullWitness | HullRefutation:
    """Membership of x in conv dec of G's generators (same scale assumed)."""
    if not x.support() <= G.ambient:
        raise AmbientError("target support escapes the ambient")
    return conv_dec_member(x, ExplicitColumns(G.gens))


def critical_scale(w: Element, G: GeneratorSet):
    """Largest rational c with c.w inside conv dec of G's generators."""
    if not w.support() <= G.ambient:
        raise AmbientError("target support escapes the ambient")
    return conv_dec_scale(w, ExplicitColumns(G.gens)).value


def minimal_generators(G: GeneratorSet) -> GeneratorSet:
    return minimal_generators_certified(G)[0]


def minimal_generators_certified(G: GeneratorSet):
    """Iteratively drop any generator inside the hull of the others.

    Returns (minimal set, certificates): per removed generator a witness in
    terms of the survivors at removal time, per kept generator the final
    refutation.  The surviving set is independent of removal order, which
    the test suite checks by shuffling.
    """
    survivors = list(G.gens)
    certs: dict = {}
    changed = True
    while changed:
        changed = False
        for idx, cand in enumerate(survivors):
            others = survivors[:idx] + survivors[idx + 1:]
            verdict = conv_dec_member(cand, ExplicitColumns(others))
            if isinstance(verdict, HullWitness):
                certs[cand.key()] = ("removed", verdict)
                survivors.pop(idx)
                changed = True
                break
    for cand in survivors:
        others = [g for g in survivors if g is not cand]
        verdict = conv_dec_member(cand, ExplicitColumns(others))
        if isinstance(verdict, HullWitness):
            raise lpmod.LpInternalError("minimal set still contains a redundant generator")
        certs[cand.key()] = ("kept", verdict)
    return GeneratorSet.make(G.ambient, G.q, survivors), certs


def clip(G: GeneratorSet, J) -> GeneratorSet:
    """Restrict the hull to the coordinates over J (zero symbols that leave)."""
    J = frozenset(J)
    if not J <= G.ambient:
        raise AmbientError("clip set escapes the ambient")
    return GeneratorSet.make(J, G.q, (g.clip_support(J) for g in G.gens))


def projection_closure(G: GeneratorSet, k: int) -> GeneratorSet:
    """All projections of the generators into {1..k}, deduplicated."""
    if k < 1:
        raise ValueError("k must be positive")
    targets = list(range(1, k + 1))
    dedup: dict = {}
    for g in G.gens:
        sources = sorted(g.support())
        for pattern in _total_monotone_maps(sources, targets):
            img = g.project(pattern)
            dedup.setdefault(img.key(), img)
    return GeneratorSet.make(range(1, k + 1), G.q, dedup.values())


def regular_projections(elem: Element) -> list:
    """Projections of one element onto supports of shape {1..k} (surjective)."""
    sources = sorted(elem.support())
    out = []
    for k in range(1, len(sources) + 1):
        for pattern in _total_monotone_maps(sources, list(range(1, k + 1))):
            if len(set(pattern.values())) == k:
                out.append(elem.project(pattern))
    return out


def relabel_columns(G: GeneratorSet, target_supp, mode: str) -> GeneratorSet:
    """The complete clipped column set for rgen/pgen membership over target_supp.

    Built through the gap-augmented monotone map enumeration; the pool used
    by the fast paths must and does agree with this set exactly.
    """
    modes = {"relab": "injective", "proj": "general"}
    if mode not in modes:
        raise ValueError("mode must be 'relab' or 'proj'")
    target_supp = frozenset(target_supp)
    dedup: dict = {}
    for g in G.gens:
        for f in enumerate_monotone_maps(g.support(), target_supp, modes[mode], gaps=True):
            img = g.project(f).clip_support(target_supp)
            if not img.is_zero():
                dedup.setdefault(img.key(), img)
    return GeneratorSet.make(target_supp, G.q, dedup.values())


def hull_pool(G: GeneratorSet, target_supp, mode: str, clean: bool = False) -> RelabelPool:
    """Pool-backed column source over target_supp (the relabel_columns set)."""
    return RelabelPool(G.gens, target_supp, mode, clean=clean)


# -- extremal hierarchies ---------------------------------------------------------


@dataclass(frozen=True)
class Hierarchy:
    levels: tuple  # levels[k-1] = regular extremal elements with supp in {1..k}
    m: int


def extremal_by_class(G: GeneratorSet, K: int, clean: bool = False,
                      progress=None) -> list:
    """Per support class {1..j}: regular closure elements out of reach of the
    hull of all the other projections into {1..j}.

    Cleaning is applied after projecting when requested (the cleaned
    hierarchy); classes[j-1] is the sorted tuple of extremal elements with
    support exactly {1..j}.
    """
    classes = []
    for j in range(1, K + 1):
        targets = list(range(1, j + 1))
        dedup: dict = {}
        for g in G.gens:
            sources = sorted(g.support())
            for pattern in _total_monotone_maps(sources, targets):
                img = g.project(pattern)
                if clean:
                    img = img.clean()
                if not img.is_zero():
                    dedup.setdefault(img.key(), img)
        family = [dedup[k] for k in sorted(dedup)]
        full_supp = frozenset(targets)
        candidates = [e for e in family if e.support() == full_supp]
        rowindex = _index_columns(family)
        extremal = []
        for i, cand in enumerate(candidates):
            pool = PoolColumns(family, rowindex, exclude_key=cand.key())
            if pool.dominating_column(cand) is None:
                verdict = conv_dec_member(cand, pool)
                if isinstance(verdict, HullRefutation):
                    extremal.append(cand)
            if progress is not None:
                progress(j, i + 1, len(candidates))
        classes.append(tuple(sorted(extremal, key=Element.key)))
    return classes


def ext_hierarchy(G: GeneratorSet, K: int) -> Hierarchy:
    """Regular extremal sets of the projection closures into {1..k}, k <= K.

    Extremality of a regular element only depends on the columns projected
    into its own support chain, so the level sets are cumulative unions of
    the per-class computations and the chain never loses elements; the
    small-instance tests recompute levels naively to confirm.
    """
    max_supp = max((len(g.support()) for g in G.gens), default=0)
    if K < max_supp:
        raise ValueError(f"K={K} below the maximum generator support {max_supp}")
    classes = extremal_by_class(G, K)
    levels = []
    acc: list = []
    for j in range(K):
        acc.extend(classes[j])
        levels.append(tuple(sorted(acc, key=Element.key)))
    m = 0
    for j in range(K):
        if classes[j]:
            m = j + 1
    return Hierarchy(tuple(levels), m)


def ext_plus_zero(G: GeneratorSet, I) -> set:
    """Union over J subset of I of the minimal generators of the clipped hulls."""
    from itertools import combinations

    I = sorted(frozenset(I))
    out: dict = {}
    for size in range(0, len(I) + 1):
        for J in combinations(I, size):
            clipped = clip(G, J)
            if not clipped.gens:
                continue
            for g in minimal_generators(clipped).gens:
                out.setdefault(g.key(), g)
    return set(out.values())


def top_filter(E, cleaned: bool = False) -> set:
    """Keep the projection-maximal elements of E.

    x is removed when some y in E projects (and, in cleaned mode, cleans)
    onto it, except for the trivial identity of x onto itself.  In cleaned
    mode the maps may also park blocks of indices outside the target
    support; whole blocks share one value there, since any symbol reaching
    across distinct parked values would survive cleaning and escape.
    """
    elems = sorted({e.key(): e for e in E}.values(), key=Element.key)
    keys = {e.key(): e for e in elems}
    supports = sorted({e.support() for e in elems}, key=lambda s: (len(s), sorted(s)))
    topped = set()
    map_cache: dict = {}
    for y in elems:
        ysupp = y.support()
        for tsupp in supports:
            if len(tsupp) > len(ysupp):
                continue
            cache_key = (tuple(sorted(ysupp)), tuple(sorted(tsupp)))
            maps = map_cache.get(cache_key)
            if maps is None:
                maps = enumerate_monotone_maps(ysupp, tsupp, "general", gaps=cleaned)
                map_cache[cache_key] = maps
            for f in maps:
                img = y.project(f)
                if cleaned:
                    img = img.clean()
                hit = keys.get(img.key())
                if hit is None:
                    continue
                identity = (img == y and all(s == t for s, t in f.pairs))
                if not identity:
                    topped.add(img.key())
    return {e for e in elems if e.key() not in topped}


# -- scale-reconciled containment ---------------------------------------------------


@dataclass(frozen=True)
class MemberVerdict:
    """Membership of 6^{-delta_q/4}.elem in a closure, exactly certified."""

    member: bool
    delta_q: int
    witness: HullWitness | None
    refutation: HullRefutation | None
    scale: ScaleResult | None  # present when the irrational route was used
    shortcut: str | None = None


def _scale_power_ok(c, delta_q: int) -> bool:
    # c >= 6^{-delta_q/4}  <=>  c^4 * 6^{delta_q} >= 1, decided in Q
    return (rat(c)**4) * (rat(6)**delta_q) >= 1


def member_at_scale(elem: Element, delta_q: int, source) -> MemberVerdict:
    """Decide 6^{-delta_q/4}.elem in the source's conv-dec closure exactly.

    For delta_q divisible by 4 the factor is rational and membership is a
    single certified LP.  Otherwise the best rational scale c* is computed
    and compared with 6^{-delta_q/4} by fourth powers; equality of the two
    is impossible for rational c*, so the comparison decides membership
    (the hull is downward closed, so feasibility at c* covers every smaller
    scale).
    """
    if elem.is_zero():
        return MemberVerdict(True, delta_q, HullWitness((), Element.zero()),
                             None, None, "zero")
    if delta_q % 4 == 0:
        t = delta_q // 4
        target = elem.scale(rat(1, 6**t) if t >= 0 else 6**(-t))
        verdict = conv_dec_member(target, source)
        if isinstance(verdict, HullWitness):
            return MemberVerdict(True, delta_q, verdict, None, None)
        return MemberVerdict(False, delta_q, None, verdict, None)

    if hasattr(source, "best_single_scale"):
        hint, col = source.best_single_scale(elem)
        if col is not None and hint > 0 and _scale_power_ok(hint, delta_q):
            scaled = elem.scale(hint)
            slack = Element({sym: value - scaled.coeff(sym)
                             for sym, value in col.coeffs().items()})
            witness = HullWitness(((col, rat(1)),), slack)
            partial = ScaleResult(normalize_rat(hint), witness, (), None)
            return MemberVerdict(True, delta_q, witness, None, partial, "single-column")

    result = conv_dec_scale(elem, source)
    if _scale_power_ok(result.value, delta_q):
        return MemberVerdict(True, delta_q, result.witness, None, result)
    return MemberVerdict(False, delta_q, None, None, result)


@dataclass(frozen=True)
class ContainsResult:
    contained: bool
    verdicts: tuple  # ((generator, MemberVerdict), ...) until first failure
    failing: Element | None


def hull_contains(A: GeneratorSet, B: GeneratorSet, mode: str) -> ContainsResult:
    """Is every generator of A (as a value) inside the mode-closure of B?

    Quarter-exponents are reconciled: the target for generator g of A is
    6^{-(A.q - B.q)/4}.g against B's relabel (rgen) or projection (pgen)
    closure columns over g's support.
    """
    modename = {"rgen": "relab", "pgen": "proj"}[mode]
    delta_q = A.q - B.q
    verdicts = []
    pools: dict = {}
    for g in A.gens:
        supp = frozenset(g.support())
        pool = pools.get(supp)
        if pool is None:
            pool = RelabelPool(B.gens, supp, modename)
            pools[supp] = pool
        verdict = member_at_scale(g, delta_q, pool)
        verdicts.append((g, verdict))
        if not verdict.member:
            return ContainsResult(False, tuple(verdicts), g)
    return ContainsResult(True, tuple(verdicts), None)
