import json

import pytest

from altpoly import pipeline
from altpoly.algebra import Element, format_element, parse_element, single, jacobi
from altpoly.cache import Cache, content_key
from altpoly.polytope import GeneratorSet
from altpoly.rationals import Q6, rat


@pytest.fixture(scope="module")
def reg():
    return pipeline.Registry()


@pytest.fixture()
def nocache():
    return Cache(None)


class TestRegistry:
    def test_family_sizes(self, reg):
        assert len(reg.system(5).gens) == 8
        assert len(reg.system(6).gens) == 16
        assert len(reg.system(12).gens) == 15

    def test_extension_rule(self, reg):
        G13 = reg.system(13)
        G9 = reg.system(9)
        assert G13.q == 13
        assert len(G13.gens) == len(G9.gens)
        scaled = {g.scale(6).key() for g in G9.gens}
        assert {g.key() for g in G13.gens} == scaled
        assert reg.base_n(19) == 15
        assert reg.base_n(14) == 10
        with pytest.raises(ValueError):
            reg.base_n(0)

    def test_r_tables(self, reg):
        r, rf = reg.r_tables(16)
        assert [r[n] for n in range(1, 10)] == [1, 2, 4, 6, 8, 14, 24, 36, 56]
        assert r[12] == 216 and r[13] == 336 and r[14] == 504 and r[16] == 1296
        assert [rf[n] for n in range(1, 8)] == [1, 1, 2, 3, 6, 7, 14]


class TestTables:
    def test_check_tables_to_30(self, reg):
        report = pipeline.check_tables(reg, 30)
        assert report.passed
        values = {case["n"]: case["r"] for case in report.cases}
        assert values[10] == 84 and values[30] == 14 * 6**6


class TestCanonical:
    def test_small_cardinalities(self, reg, nocache):
        for n, want in [(2, (2, 1, 1)), (3, (4, 3, 1)), (4, (6, 3, 2))]:
            systems = pipeline.canonical_systems(reg, n, nocache)
            got = (len(systems.full.gens), len(systems.reduced.gens),
                   len(systems.top.gens))
            assert got == want, n

    def test_top_equals_uncleaned_top(self, reg, nocache):
        from altpoly.polytope import top_filter

        for n in (2, 3, 4, 5):
            systems = pipeline.canonical_systems(reg, n, nocache)
            uncleaned = top_filter(systems.full.gens, cleaned=False)
            assert {g.key() for g in uncleaned} == \
                   {g.key() for g in systems.top.gens}, n

    def test_cache_round_trip(self, reg, tmp_path):
        cache = Cache(tmp_path)
        first = pipeline.canonical_systems(reg, 3, cache)
        second = pipeline.canonical_systems(reg, 3, cache)
        assert first.full.gens == second.full.gens
        assert first.m == second.m == 3

    def test_top_matches_bundled(self, reg, nocache):
        report = pipeline.check_gen(reg, nocache, 3)
        assert report.passed

    def test_m_at_most_max_support(self, reg, nocache):
        for n in (2, 3, 4, 5):
            systems = pipeline.canonical_systems(reg, n, nocache)
            K = max(len(g.support()) for g in reg.system(n).gens)
            assert systems.m <= K


class TestClosureSmoke:
    def test_small_sweep_passes(self, reg, disk_cache):
        report = pipeline.check_closure(reg, disk_cache, 5)
        assert report.passed
        assert report.summary["cases"] > 400

    def test_case_stream_is_deterministic(self, reg):
        first = [(key, format_element(t), base, dq, K)
                 for (key, t, base, dq, K) in pipeline.closure_cases(reg, 4)]
        second = [(key, format_element(t), base, dq, K)
                  for (key, t, base, dq, K) in pipeline.closure_cases(reg, 4)]
        assert first == second
        bases = {base + dq for (_, _, base, dq, _) in first}
        assert bases  # quarter-exponent sums drive the closure index

    def test_base_pair_reaches_reduced_top(self, reg, disk_cache):
        # bracketing the two smallest generators lands on the two-variable one
        from altpoly.polytope import RelabelPool, member_at_scale

        x1 = reg.entry((1, 1))
        pa = x1.elem.project({1: 1})
        pb = x1.elem.project({1: 2})
        target = jacobi(pa, pb)
        cr2 = pipeline.extended_reduced_system(reg, 2, disk_cache)
        pool = RelabelPool(cr2.gens, {1, 2}, "relab")
        verdict = member_at_scale(target, 0, pool)
        assert verdict.member


class TestVerdictJson:
    def test_witness_round_trip(self, reg, disk_cache):
        from altpoly.polytope import RelabelPool, member_at_scale

        G = reg.system(2)
        pool = RelabelPool(G.gens, {1, 2}, "proj")
        target = G.gens[0]
        verdict = member_at_scale(target, 0, pool)
        blob = pipeline.verdict_json(verdict)
        assert blob["member"]
        assert pipeline._recheck_member_verdict(target, blob)
        # tampering breaks the recheck
        blob_bad = json.loads(json.dumps(blob))
        first = parse_element(blob_bad["witness"]["lambdas"][0][0])
        blob_bad["witness"]["lambdas"][0][0] = format_element(first.scale(rat(1, 2)))
        assert not pipeline._recheck_member_verdict(target, blob_bad)


class TestMixedScale:
    def test_sqrt6_membership(self):
        # target = 6^{-1/2} * 2e must be found under columns {e} at gap 2
        e = Element({single(1): 1})
        out = pipeline._mixed_member(e.scale(2), 2, [(e, 0)])
        assert not out["member"]  # 2/sqrt(6) > 1 escapes dec{e}
        out = pipeline._mixed_member(e.scale(2), 2, [(e.scale(1), 0), (e.scale(2), -2)])
        assert out["member"]

    def test_factor_exponents(self):
        e = Element({single(1): 1})
        # gap 4: rational factor 6; gap -2: factor 1/sqrt6
        out = pipeline._mixed_member(e.scale(6), -4, [(e, 0)])
        assert out["member"]  # target 6^{1} * 6 e? gap = -4: factor 6^{-1}: e <= e
        out = pipeline._mixed_member(e, 2, [(e, 0)])
        assert out["member"]  # factor sqrt6 >= 1


class TestRnChains:
    def test_single_link(self, reg, disk_cache):
        from altpoly.polytope import RelabelPool, member_at_scale

        G2 = reg.system(2)
        G6 = reg.system(6)
        g = G2.gens[0]
        pool = RelabelPool(G6.gens, g.support(), "proj")
        assert member_at_scale(g, 2 - 6, pool).member
        # strictness: some 6-family generator escapes the 2-family closure
        escaped = False
        for h in G6.gens:
            pool = RelabelPool(G2.gens, h.support(), "proj")
            if not member_at_scale(h, 6 - 2, pool).member:
                escaped = True
                break
        assert escaped
