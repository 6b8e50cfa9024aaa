import hashlib

import pytest

from altpoly import genfile
from altpoly.algebra import DOWN, Element, UP, single, span
from altpoly.genfile import GenfileError, elaborate, parse, serialize

def bundled_text():
    return genfile._data_text("generators.alt")


def test_parse_base_and_bracket():
    defs = parse("R[1][1] = X(1)\n"
                 "R[2][1] = PI [1,2] JC( PI [1] R[1][1], PI [2] R[1][1] )\n")
    assert len(defs) == 2
    assert defs[0].expr.is_base()
    assert defs[1].expr.targets == (1, 2)


def test_parse_errors():
    with pytest.raises(GenfileError):
        parse("R[2][1] = PI [2,1] JC( PI [1] R[1][1], PI [2] R[1][1] )")  # outer order
    with pytest.raises(GenfileError):
        parse("R[2][1] = PI [1,2] JC( PI [2,1] R[1][1], PI [3] R[1][1] )")  # inner order
    with pytest.raises(GenfileError):
        parse("R[2][1] = PI [1,2] JC( PI [1] R[1][1], PI [1] R[1][1] )")  # overlap
    with pytest.raises(GenfileError):
        parse("R[1][1] = X(1)\nR[1][1] = X(1)")  # duplicate
    with pytest.raises(GenfileError):
        parse("R[1][1] = bogus")


def test_elaborate_base_and_first_bracket():
    table = elaborate(parse(
        "R[1][1] = X(1)\n"
        "R[2][1] = PI [1,2] JC( PI [1] R[1][1], PI [2] R[1][1] )\n"))
    base = table.value(1, 1)
    assert base.q == 1 and base.elem == Element({single(1): 1})
    r21 = table.value(2, 1)
    assert r21.q == 2
    assert r21.elem == Element({span(1, UP, UP, 2): 1, span(2, DOWN, DOWN, 1): 1})


def test_elaborate_errors():
    with pytest.raises(GenfileError):  # undefined reference
        elaborate(parse("R[2][1] = PI [1,2] JC( PI [1] R[1][1], PI [2] R[1][1] )"))
    with pytest.raises(GenfileError):  # target length mismatch
        elaborate(parse("R[1][1] = X(1)\n"
                        "R[2][1] = PI [1,2] JC( PI [1,2] R[1][1], PI [3] R[1][1] )"))
    with pytest.raises(GenfileError):  # cycle
        elaborate(parse(
            "R[1][1] = X(1)\n"
            "R[4][1] = PI [1,2] JC( PI [1] R[1][1], PI [2] R[4][2] )\n"
            "R[4][2] = PI [1,2] JC( PI [1] R[1][1], PI [2] R[4][1] )\n"))


def test_serialize_round_trip():
    text = bundled_text()
    table = elaborate(parse(text))
    canonical = serialize(table)
    again = elaborate(parse(canonical))
    assert serialize(again) == canonical
    assert again.values.keys() == table.values.keys()
    for name, value in table.values.items():
        assert again.values[name].elem == value.elem
        assert again.values[name].q == value.q


def test_bundled_checksum():
    digest = hashlib.sha256(bundled_text().encode()).hexdigest()
    assert digest == ("93d32f0940a22566ee2f63663ba5a296"
                  "a4b4df6637591525a6fcc574087fd1ae"), digest


@pytest.fixture(scope="module")
def table():
    return genfile.load_bundled_table()


class TestBundledInvariants:
    def test_entry_count(self, table):
        canonical = [n for n in table.order if n[1] < genfile.ALTERNATE_INDEX]
        assert len(canonical) == 261
        assert len(table.order) == 263  # plus two alternate presentations

    def test_quarter_exponent_equals_family_index(self, table):
        for (n, i), value in table.values.items():
            if i < genfile.ALTERNATE_INDEX:
                assert value.q == n, (n, i)

    def test_support_matches_outer_targets(self, table):
        for name, value in table.values.items():
            expr = table.defs[name]
            if expr.is_base():
                assert value.elem.support() == {1}
            else:
                assert value.elem.support() == set(expr.targets), name

    def test_entries_are_clean_with_integer_mass(self, table):
        for (n, i), value in table.values.items():
            if i >= genfile.ALTERNATE_INDEX:
                continue
            assert value.elem.is_clean(), (n, i)
            mass = value.elem.alt_norm()
            assert mass == int(mass), (n, i)

    def test_alternate_presentations_agree(self, table):
        meta = genfile.load_bundled_systems()
        for alt, (canon, _) in meta["alternates"].items():
            assert table.value(*alt).value_eq(table.value(*canon)), (alt, canon)

    def test_part_sizes(self, table):
        by_family = {}
        for (n, i) in table.order:
            if i < genfile.ALTERNATE_INDEX:
                by_family[n] = by_family.get(n, 0) + 1
        assert by_family == {1: 1, 2: 1, 3: 1, 4: 2, 5: 8, 6: 15, 7: 28, 8: 31,
                             9: 81, 10: 8, 11: 67, 12: 8, 15: 10}

    def test_systems_meta_shapes(self, table):
        meta = genfile.load_bundled_systems()
        sizes = {n: len(v) for n, v in meta["systems"].items()}
        assert sizes == {1: 1, 2: 1, 3: 1, 4: 2, 5: 8, 6: 16, 7: 29, 8: 33,
                         9: 89, 10: 21, 11: 86, 12: 15, 15: 96}
        assert len(meta["asymptotic"]["odd"]) == 29
        assert len(meta["asymptotic"]["even"]) == 13
        for members in meta["systems"].values():
            for name in members:
                assert name in table.values
