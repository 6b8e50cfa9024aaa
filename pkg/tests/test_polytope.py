import random

import pytest
from hypothesis import given, settings, strategies as st

from altpoly.algebra import DOWN, Element, UP, jacobi, single, span
from altpoly.polytope import (
    AmbientError,
    ExplicitColumns,
    GeneratorSet,
    HullRefutation,
    HullWitness,
    clip,
    conv_dec_member,
    conv_dec_scale,
    critical_scale,
    ext_hierarchy,
    ext_plus_zero,
    extremal_by_class,
    hull_contains,
    hull_member,
    hull_pool,
    member_at_scale,
    minimal_generators,
    minimal_generators_certified,
    projection_closure,
    regular_projections,
    relabel_columns,
    top_filter,
)
from altpoly.rationals import rat

A_SYM = span(1, UP, UP, 2)
B_SYM = span(2, DOWN, DOWN, 1)
C_SYM = span(1, DOWN, UP, 2)
AMBIENT = frozenset({1, 2})


def vec(a, b, c=0):
    return Element({A_SYM: a, B_SYM: b, C_SYM: c})


def gset(*vectors, q=0, ambient=AMBIENT):
    return GeneratorSet.make(ambient, q, vectors)


def fm_feasible(rows):
    """Fourier-Motzkin feasibility of {row . y >= rhs}, y free, exact.

    Independent oracle for the hull LPs: rows encode both the domination
    inequalities and the simplex constraints (as two inequalities), with
    lambda >= 0 rows included explicitly.
    """
    rows = [([rat(c) for c in coeffs], rat(rhs)) for coeffs, rhs in rows]
    nvars = len(rows[0][0]) if rows else 0
    for var in range(nvars):
        pos, neg, rest = [], [], []
        for coeffs, rhs in rows:
            c = coeffs[var]
            if c > 0:
                pos.append((coeffs, rhs))
            elif c < 0:
                neg.append((coeffs, rhs))
            else:
                rest.append((coeffs, rhs))
        new = rest
        for pcoe, prhs in pos:
            for ncoe, nrhs in neg:
                cp, cn = pcoe[var], -ncoe[var]
                coeffs = [cn * a + cp * b for a, b in zip(pcoe, ncoe)]
                new.append((coeffs, cn * prhs + cp * nrhs))
        rows = new
    return all(rhs <= 0 for _, rhs in rows)


def oracle_member(x, gens):
    """x in conv dec(gens) via Fourier-Motzkin over the lambda variables."""
    symbols = sorted({s for g in gens for s in g.coeffs()} | set(x.coeffs()))
    rows = []
    n = len(gens)
    for sym in symbols:
        rows.append(([g.coeff(sym) for g in gens], x.coeff(sym)))
    ones = [rat(1)] * n
    rows.append((ones, rat(1)))
    rows.append(([-c for c in ones], rat(-1)))
    for j in range(n):
        unit = [rat(0)] * n
        unit[j] = rat(1)
        rows.append((unit, rat(0)))
    return fm_feasible(rows)


class TestHullMember:
    def test_generator_is_member(self):
        G = gset(vec(1, 1), vec(2, 0))
        w = hull_member(vec(1, 1), G)
        assert isinstance(w, HullWitness) and w.verify(vec(1, 1))

    def test_midpoint_member(self):
        G = gset(vec(1, 1), vec(2, 0))
        w = hull_member(vec(1, 0), G)
        assert isinstance(w, HullWitness)

    def test_outside_with_functional(self):
        G = gset(vec(1, 1), vec(2, 0))
        no = hull_member(vec(3, 0), G)
        assert isinstance(no, HullRefutation)
        assert no.verify(vec(3, 0), G.gens)
        assert not no.verify(vec(1, 0), G.gens)

    def test_ambient_guard(self):
        G = gset(vec(1, 1))
        with pytest.raises(AmbientError):
            hull_member(Element({span(3, UP, UP, 4): 1}), G)

    def test_zero_member_iff_nonempty(self):
        assert isinstance(hull_member(Element.zero(), gset(vec(1, 0))), HullWitness)
        empty = GeneratorSet.make(AMBIENT, 0, ())
        assert isinstance(hull_member(Element.zero(), empty), HullRefutation)


class TestCriticalScale:
    def test_diagonal(self):
        G = gset(vec(2, 0), vec(0, 2))
        assert critical_scale(vec(1, 1), G) == 1

    def test_generator_at_least_one(self):
        G = gset(vec(1, 1))
        assert critical_scale(vec(1, 1), G) >= 1

    def test_disjoint_support_scale_zero(self):
        G = gset(vec(0, 0, 1))
        assert critical_scale(vec(1, 0), G) == 0

    def test_homogeneous(self):
        G = gset(vec(1, 1), vec(2, 0))
        w = vec(1, 2)
        base = conv_dec_scale(w, ExplicitColumns(G.gens)).value
        for t in (rat(1, 2), 2, rat(5, 3)):
            assert conv_dec_scale(w.scale(t), ExplicitColumns(G.gens)).value == base / t


class TestMinimalGenerators:
    def test_singleton(self):
        G = gset(vec(1, 1))
        assert minimal_generators(G).gens == G.gens

    def test_redundant_midpoint(self):
        G = gset(vec(1, 1), vec(1, 0), vec(2, 0))
        assert set(minimal_generators(G).gens) == {vec(1, 1), vec(2, 0)}

    def test_certificates(self):
        G = gset(vec(1, 1), vec(1, 0), vec(2, 0))
        minimal, certs = minimal_generators_certified(G)
        assert certs[vec(1, 0).key()][0] == "removed"
        assert certs[vec(1, 0).key()][1].verify(vec(1, 0))
        for kept in minimal.gens:
            kind, refutation = certs[kept.key()]
            assert kind == "kept"
            others = [g for g in minimal.gens if g != kept]
            assert refutation.verify(kept, others)

    def test_order_independence(self):
        rng = random.Random(42)
        pool = [vec(rat(a), rat(b), rat(c))
                for a, b, c in [(2, 0, 0), (0, 2, 0), (1, 1, 0), (1, 0, 1),
                                (2, 1, 0), (0, 1, 1), (1, 1, 1)]]
        for _ in range(6):
            chosen = rng.sample(pool, rng.randint(2, len(pool)))
            baseline = set(minimal_generators(gset(*chosen)).gens)
            for _ in range(4):
                rng.shuffle(chosen)
                assert set(minimal_generators(gset(*chosen)).gens) == baseline

    def test_hull_preserved_vs_oracle(self):
        rng = random.Random(7)
        for _ in range(12):
            gens = [vec(rat(rng.randint(0, 3)), rat(rng.randint(0, 3)),
                        rat(rng.randint(0, 2))) for _ in range(rng.randint(1, 5))]
            gens = [g for g in gens if not g.is_zero()]
            if not gens:
                continue
            G = gset(*gens)
            minimal = minimal_generators(G)
            for probe in G.gens:
                assert oracle_member(probe, list(minimal.gens))
            # LP verdicts agree with the independent oracle on random probes
            for _ in range(4):
                x = vec(rat(rng.randint(0, 4), 2), rat(rng.randint(0, 4), 2))
                got = conv_dec_member(x, ExplicitColumns(list(G.gens)))
                assert isinstance(got, HullWitness) == oracle_member(x, list(G.gens))


class TestClipAndClosure:
    def test_clip_annihilates_cross_symbols(self):
        e12 = jacobi(Element({single(1): 1}), Element({single(2): 1}))
        assert clip(gset(e12), {1}).gens == ()

    def test_clip_keeps_inside(self):
        e = Element({span(1, UP, UP, 1): 1, span(1, UP, UP, 2): 1})
        clipped = clip(gset(e), {1})
        assert clipped.gens == (Element({span(1, UP, UP, 1): 1}),)

    def test_clip_full_is_identity(self):
        G = gset(vec(1, 2))
        assert clip(G, AMBIENT).gens == G.gens

    def test_projection_closure_counts(self):
        e12 = jacobi(Element({single(1): 1}), Element({single(2): 1}))
        G = gset(e12)
        assert len(projection_closure(G, 1).gens) == 1
        assert len(projection_closure(G, 2).gens) == 3
        assert projection_closure(GeneratorSet.make(AMBIENT, 0, ()), 2).gens == ()

    def test_regular_projections(self):
        e12 = jacobi(Element({single(1): 1}), Element({single(2): 1}))
        projs = regular_projections(e12)
        assert len(projs) == 2


class TestRelabelColumns:
    def test_matches_pool_fast_path(self):
        e = jacobi(jacobi(Element({single(1): 1}), Element({single(3): 1})),
                   Element({single(2): 1}))
        G = GeneratorSet.make(frozenset({1, 2, 3}), 0, [e])
        for target in ({1, 2}, {2, 3}, {1, 2, 3}, {2, 4}):
            cols = relabel_columns(G, target, "relab")
            pool = hull_pool(G, target, "relab")
            assert {c.key() for c in cols.gens} == \
                   {c.key() for c in pool.columns}, target

    def test_proj_pool_spans_the_gap_columns(self):
        # the projection pool keeps only total-map columns; every clipped
        # gap-pattern column of the full enumeration is dominated by one
        e = jacobi(jacobi(Element({single(1): 1}), Element({single(3): 1})),
                   Element({single(2): 1}))
        G = GeneratorSet.make(frozenset({1, 2, 3}), 0, [e])
        for target in ({1, 2}, {2, 3}, {1, 2, 3}, {2, 4}):
            cols = relabel_columns(G, target, "proj")
            pool = hull_pool(G, target, "proj")
            pool_keys = {c.key() for c in pool.columns}
            assert pool_keys <= {c.key() for c in cols.gens}, target
            for extra in cols.gens:
                if extra.key() not in pool_keys:
                    assert any(extra.leq(p) for p in pool.columns), (target, extra)

    def test_wide_generator_contributes_clipped_shadow(self):
        e = jacobi(jacobi(Element({single(1): 1}), Element({single(3): 1})),
                   Element({single(2): 1}))
        G = GeneratorSet.make(frozenset({1, 2, 3}), 0, [e])
        cols = relabel_columns(G, {1, 2}, "relab")
        supports = {tuple(sorted(c.support())) for c in cols.gens}
        assert (1, 2) in supports

    def test_proj_contains_projection_closure(self):
        e12 = jacobi(Element({single(1): 1}), Element({single(2): 1}))
        G = gset(e12)
        cols = {c.key() for c in relabel_columns(G, {1, 2}, "proj").gens}
        for g in projection_closure(G, 2).gens:
            assert g.key() in cols


class TestHierarchy:
    def test_matches_naive_levels(self):
        e12 = jacobi(Element({single(1): 1}), Element({single(2): 1}))
        e13 = jacobi(jacobi(Element({single(1): 1}), Element({single(3): 1})),
                     Element({single(2): 1}))
        G = GeneratorSet.make(frozenset({1, 2, 3}), 0, [e12, e13])
        hierarchy = ext_hierarchy(G, 3)
        for k in range(1, 4):
            closure = projection_closure(G, k)
            naive = {g.key() for g in minimal_generators(closure).gens
                     if g.is_regular()}
            assert naive == {g.key() for g in hierarchy.levels[k - 1]}, k
        assert hierarchy.m == 3

    def test_monotone_chain(self):
        e13 = jacobi(jacobi(Element({single(1): 1}), Element({single(3): 1})),
                     Element({single(2): 1}))
        G = GeneratorSet.make(frozenset({1, 2, 3}), 0, [e13])
        hierarchy = ext_hierarchy(G, 3)
        previous = set()
        for level in hierarchy.levels:
            current = {g.key() for g in level}
            assert previous <= current
            previous = current

    def test_precondition(self):
        e13 = jacobi(jacobi(Element({single(1): 1}), Element({single(3): 1})),
                     Element({single(2): 1}))
        G = GeneratorSet.make(frozenset({1, 2, 3}), 0, [e13])
        with pytest.raises(ValueError):
            ext_hierarchy(G, 2)


class TestExtPlusZero:
    def test_empty_index_set(self):
        assert ext_plus_zero(gset(vec(1, 1)), set()) == set()

    def test_monotone_in_index_set(self):
        rng = random.Random(3)
        for _ in range(6):
            gens = [vec(rat(rng.randint(0, 2)), rat(rng.randint(0, 2)),
                        rat(rng.randint(0, 2))) for _ in range(3)]
            gens = [g for g in gens if not g.is_zero()]
            if not gens:
                continue
            G = gset(*gens)
            small = ext_plus_zero(G, {1})
            big = ext_plus_zero(G, {1, 2})
            assert small <= big


class TestTopFilter:
    def test_collapse_is_topped(self):
        e12 = jacobi(Element({single(1): 1}), Element({single(2): 1}))
        collapsed = e12.project({1: 1, 2: 1})
        assert top_filter({e12, collapsed}) == {e12}

    def test_incomparable_untouched(self):
        a = vec(1, 0)
        b = vec(0, 1)
        assert top_filter({a, b}) == {a, b}

    def test_cleaned_mode_sees_parked_blocks(self):
        e12 = jacobi(Element({single(1): 1}), Element({single(2): 1}))
        cleaned_collapse = e12.project({1: 1, 2: 1}).clean()
        assert cleaned_collapse.is_zero()
        e13 = jacobi(jacobi(Element({single(1): 1}), Element({single(3): 1})),
                     Element({single(2): 1}))
        image = e13.project({1: 1, 2: 2, 3: 3})
        assert top_filter({e13, image}, cleaned=True) == {e13}


class TestHullContains:
    def test_reflexive(self):
        e12 = jacobi(Element({single(1): 1}), Element({single(2): 1}))
        G = gset(e12, q=2)
        for mode in ("rgen", "pgen"):
            assert hull_contains(G, G, mode).contained

    def test_scale_reconciled(self):
        e12 = jacobi(Element({single(1): 1}), Element({single(2): 1}))
        lo = gset(e12, q=2)
        hi = gset(e12.scale(6), q=6)
        assert hull_contains(lo, hi, "pgen").contained
        assert hull_contains(hi, lo, "pgen").contained

    def test_strict_failure_detected(self):
        e12 = jacobi(Element({single(1): 1}), Element({single(2): 1}))
        big = gset(e12.scale(2), q=2)
        small = gset(e12, q=2)
        res = hull_contains(big, small, "pgen")
        assert not res.contained and res.failing == e12.scale(2)


class TestMemberAtScale:
    def test_rational_route(self):
        e = vec(1, 1)
        pool = hull_pool(gset(e.scale(6)), AMBIENT, "proj")
        verdict = member_at_scale(e.scale(6), 4, pool)  # target /6 = e <= e*6
        assert verdict.member and verdict.delta_q == 4

    def test_irrational_route(self):
        e = vec(1, 1)
        pool = hull_pool(gset(e), AMBIENT, "proj")
        # 6^{-1/4} e is inside dec of e, 6^{+1/4} e is not
        assert member_at_scale(e, 1, pool).member
        assert not member_at_scale(e, -1, pool).member

    def test_critical_value_witness(self):
        e = vec(1, 1)
        pool = hull_pool(gset(e), AMBIENT, "proj")
        verdict = member_at_scale(e, 1, pool)
        assert verdict.scale is None or verdict.scale.value >= rat(1)
        assert verdict.witness is not None


# -- randomized LP-vs-oracle agreement ---------------------------------------------

small = st.integers(min_value=0, max_value=3)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(small, small, small), min_size=1, max_size=5),
       st.tuples(small, small, small))
def test_membership_agrees_with_fourier_motzkin(gen_coords, probe):
    gens = [vec(rat(a), rat(b), rat(c)) for a, b, c in gen_coords]
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return
    x = vec(rat(probe[0]), rat(probe[1]), rat(probe[2]))
    got = conv_dec_member(x, ExplicitColumns(gens))
    want = oracle_member(x, gens)
    assert isinstance(got, HullWitness) == want
