from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greedyharmonic.targets import (ExactRational, NamedU, SqrtCombo, Tau0,
                                    parse_rational_literal, parse_target)


def test_parse_rational_literal():
    assert parse_rational_literal("3/4") == Fraction(3, 4)
    assert parse_rational_literal("-7") == Fraction(-7)
    assert parse_rational_literal("0.125") == Fraction(1, 8)
    assert parse_rational_literal("-2.50") == Fraction(-5, 2)
    for bad in ("", "1/2/3", "1.2.3", "pi", ".5", "1e3"):
        with pytest.raises(ValueError):
            parse_rational_literal(bad)


def test_parse_target_kinds():
    t = parse_target("22/7")
    assert isinstance(t, ExactRational) and t.value == Fraction(22, 7)
    t = parse_target("0.39876")
    assert isinstance(t, ExactRational)
    assert t.value == Fraction(39876, 100000)

    t = parse_target("u:2:1")
    assert isinstance(t, NamedU) and (t.k, t.m, t.offset) == (2, 1, 0)
    t = parse_target("u:2:0+7/3")
    assert (t.k, t.m, t.offset) == (2, 0, Fraction(7, 3))
    t = parse_target("u:3:2-1/2")
    assert (t.k, t.m, t.offset) == (3, 2, Fraction(-1, 2))

    t = parse_target("tau0")
    assert isinstance(t, Tau0) and t.offset == 0
    t = parse_target("tau0+1/6")
    assert t.offset == Fraction(1, 6)

    t = parse_target("sqrt:1:2,2:5")
    assert isinstance(t, SqrtCombo)
    assert t.terms == ((Fraction(1), 2), (Fraction(2), 5))
    t = parse_target("sqrt:-1/3:7+2/9")
    assert t.terms == ((Fraction(-1, 3), 7),)
    assert t.offset == Fraction(2, 9)


def test_parse_target_rejects_malformed():
    for bad in ("", "u:2", "u:a:b", "tau0x", "sqrt:", "sqrt:1",
                "sqrt:1:4", "sqrt:0:2", "sqrt:1:2,1:2", "bogus"):
        with pytest.raises(ValueError):
            parse_target(bad)


def test_named_u_normalizes_phase():
    assert NamedU(2, 7).m == 3
    assert parse_target("u:2:7").describe() == "u:2:3"


def test_describe_round_trip():
    for text in ("u:2:0+7/3", "tau0", "tau0-1/6", "sqrt:1:2,2:5+1/4"):
        t = parse_target(text)
        again = parse_target(t.describe())
        assert type(again) is type(t)
        assert again.describe() == t.describe()


def test_sqrt_combo_validation():
    with pytest.raises(ValueError):
        SqrtCombo(())
    with pytest.raises(ValueError):
        SqrtCombo(((Fraction(1), 12),))  # 12 = 4*3 is not square-free
    with pytest.raises(ValueError):
        SqrtCombo(((Fraction(0), 2),))
    with pytest.raises(ValueError):
        SqrtCombo(((Fraction(1), 2), (Fraction(2), 2)))


def test_exact_rational_enclosure_is_tight():
    t = ExactRational(Fraction(-355, 113))
    assert t.is_rational and t.exact_value() == Fraction(-355, 113)
    ball = t.enclosure(128)
    assert ball.contains(Fraction(-355, 113))
    assert ball.radius() <= Fraction(1, 1 << 126)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([64, 96, 128, 192]))
def test_enclosure_radius_contract(prec):
    for target in (SqrtCombo(((Fraction(1), 2), (Fraction(2), 5))),
                   NamedU(2, 0, Fraction(1)),
                   Tau0(Fraction(-1, 3))):
        ball = target.enclosure(prec)
        assert ball.radius() <= Fraction(1, 1 << (prec - 2))
        assert target.exact_value() is None
        assert not target.is_rational


def test_sqrt_combo_encloses_known_value():
    t = parse_target("sqrt:1:2,2:5")
    ball = t.enclosure(96)
    # sqrt(2) + 2 sqrt(5) = 5.88634951737...
    assert ball.lo_fraction() > Fraction(58863495173, 10 ** 10)
    assert ball.hi_fraction() < Fraction(58863495174, 10 ** 10)


def test_enclosures_nest_under_higher_precision():
    t = NamedU(3, 2)
    coarse = t.enclosure(64)
    fine = t.enclosure(256)
    assert coarse.lo_fraction() <= fine.lo_fraction()
    assert fine.hi_fraction() <= coarse.hi_fraction()
