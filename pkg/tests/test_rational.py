from fractions import Fraction

import pytest

from cyclift.errors import DomainError
from cyclift.rational import format_rational, parse_rational


def test_format():
    assert format_rational(3) == "3"
    assert format_rational(-7) == "-7"
    assert format_rational(Fraction(1, 2)) == "1/2"
    assert format_rational(Fraction(-9, 4)) == "-9/4"
    assert format_rational(Fraction(6, 3)) == "2"


def test_parse():
    assert parse_rational("3") == 3
    assert parse_rational("-7") == -7
    assert parse_rational("1/2") == Fraction(1, 2)
    assert parse_rational("-9/4") == Fraction(-9, 4)
    assert parse_rational("4/2") == 2
    assert isinstance(parse_rational("4/2"), int)


def test_round_trip():
    for x in (0, 5, -3, Fraction(22, 7), Fraction(-1, 1000)):
        assert parse_rational(format_rational(x)) == x


@pytest.mark.parametrize("bad", ["", "x", "1/0", "1/2/3", "1.5", "2 /3"])
def test_parse_rejects(bad):
    with pytest.raises(DomainError):
        parse_rational(bad)
