import pytest
from hypothesis import given, settings, strategies as st

from altpoly import lp
from altpoly.rationals import Q6, rat


def test_simple_max():
    prog = lp.LinearProgram.make(2, [({0: 1, 1: 2}, lp.LESS, 2)], {0: 1, 1: 1}, "max")
    out = lp.solve(prog)
    assert isinstance(out, lp.Optimal)
    assert out.value == 2 and tuple(out.primal) == (2, 0)


def test_infeasible_with_farkas():
    prog = lp.LinearProgram.make(1, [({0: 1}, lp.LESS, -1)], {}, "max")
    out = lp.solve(prog)
    assert isinstance(out, lp.Infeasible)
    assert lp.verify_certificate(prog, out)


def test_unbounded_with_ray():
    prog = lp.LinearProgram.make(2, [({0: 1, 1: -1}, lp.LESS, 1)], {0: 1}, "max")
    out = lp.solve(prog)
    assert isinstance(out, lp.Unbounded)
    assert lp.verify_certificate(prog, out)


def test_domination_instance():
    # lambda on the simplex with (1,0) <= l1(1,1) + l2(2,0)
    prog = lp.LinearProgram.make(2, [
        ({0: 1, 1: 2}, lp.GREATER, 1),
        ({0: 1}, lp.GREATER, 0),
        ({0: 1, 1: 1}, lp.EQUAL, 1)], {}, "max")
    out = lp.solve(prog)
    assert isinstance(out, lp.Optimal)


def test_min_sense_duality():
    prog = lp.LinearProgram.make(3, [
        ({0: 1, 1: 1, 2: 1}, lp.EQUAL, 4),
        ({0: 1, 1: -1}, lp.GREATER, -2),
        ({1: 1, 2: 2}, lp.LESS, 6)], {0: 3, 1: 1, 2: 2}, "min")
    out = lp.solve(prog)
    assert isinstance(out, lp.Optimal)
    assert out.value == 6


def test_tampered_certificates_fail():
    prog = lp.LinearProgram.make(2, [({0: 1, 1: 2}, lp.LESS, 2)], {0: 1, 1: 1}, "max")
    out = lp.solve(prog)
    worse = lp.Optimal(out.value, (out.primal[0] + 1,) + out.primal[1:], out.dual)
    assert not lp.verify_certificate(prog, worse)
    prog2 = lp.LinearProgram.make(1, [({0: 1}, lp.LESS, -1)], {}, "max")
    bad = lp.Infeasible((rat(1),))
    assert not lp.verify_certificate(prog2, bad)


def test_validation_errors():
    with pytest.raises(ValueError):
        lp.LinearProgram.make(0, [], {}, "max")
    with pytest.raises(ValueError):
        lp.LinearProgram.make(1, [({3: 1}, lp.LESS, 1)], {}, "max")
    with pytest.raises(ValueError):
        lp.LinearProgram.make(1, [], {0: 1}, "upward")


def test_dump_is_plain_text():
    prog = lp.LinearProgram.make(2, [({0: rat(1, 3)}, lp.LESS, rat(7, 2))], {1: 2}, "min")
    text = prog.dump()
    assert "1/3" in text and "7/2" in text and "." not in text


def test_q6_program():
    s6 = Q6.sqrt6()
    prog = lp.LinearProgram.make(1, [({0: 1}, lp.LESS, s6)], {0: 1}, "max")
    out = lp.solve(prog)
    assert out.value == s6
    prog = lp.LinearProgram.make(
        2, [({0: 1, 1: s6}, lp.GREATER, 3), ({0: 1, 1: 1}, lp.EQUAL, 1)], {}, "max")
    assert isinstance(lp.solve(prog), lp.Infeasible)


def test_determinism():
    prog = lp.LinearProgram.make(3, [
        ({0: 1, 1: 1}, lp.LESS, 3),
        ({1: 1, 2: 1}, lp.LESS, 3),
        ({0: 1, 2: 1}, lp.LESS, 3)], {0: 1, 1: 1, 2: 1}, "max")
    outs = {lp.solve(prog) for _ in range(5)}
    assert len(outs) == 1


small_rats = st.fractions(min_value=-4, max_value=4, max_denominator=4)


@st.composite
def programs(draw):
    nv = draw(st.integers(min_value=1, max_value=4))
    nc = draw(st.integers(min_value=1, max_value=4))
    cons = []
    for _ in range(nc):
        row = {j: rat(c.numerator, c.denominator)
               for j, c in enumerate(draw(st.lists(small_rats, min_size=nv, max_size=nv)))}
        rel = draw(st.sampled_from((lp.LESS, lp.EQUAL, lp.GREATER)))
        rhs = draw(small_rats)
        cons.append((row, rel, rat(rhs.numerator, rhs.denominator)))
    obj = {j: rat(c.numerator, c.denominator)
           for j, c in enumerate(draw(st.lists(small_rats, min_size=nv, max_size=nv)))}
    sense = draw(st.sampled_from(("max", "min")))
    return lp.LinearProgram.make(nv, cons, obj, sense)


@settings(max_examples=120, deadline=None)
@given(programs())
def test_solve_always_certifies(prog):
    out = lp.solve(prog)  # solve() re-verifies internally; must not raise
    assert lp.verify_certificate(prog, out)


@settings(max_examples=60, deadline=None)
@given(programs(), st.fractions(min_value="1/3", max_value=3, max_denominator=5))
def test_feasibility_is_scale_invariant(prog, factor):
    factor = rat(factor.numerator, factor.denominator)
    scaled_rows = []
    for con in prog.constraints:
        coeffs = {v: c * factor for v, c in con.coeffs}
        scaled_rows.append((coeffs, con.relation, con.rhs * factor))
    scaled = lp.LinearProgram.make(prog.num_vars, scaled_rows,
                                   dict(prog.objective), prog.sense)
    out1 = lp.solve(prog)
    out2 = lp.solve(scaled)
    assert isinstance(out1, lp.Infeasible) == isinstance(out2, lp.Infeasible)
