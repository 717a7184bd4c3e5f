import pytest

from prewitt.errors import ParseError
from prewitt.parsing import parse_element, tokenize, variables_in
from prewitt.rings import PolyRing, ZZ, Zmod


def test_expansion_and_precedence():
    R = PolyRing("X,Y")
    assert parse_element("(X+Y)^3", R) == parse_element("X^3 + 3*X^2*Y + 3*X*Y^2 + Y^3", R)
    assert parse_element("2*X^2", R) == parse_element("2*(X*X)", R)
    assert parse_element("-X^2", R) == -parse_element("X^2", R)
    assert parse_element("X - Y - X", R) == -R.gen("Y")


def test_scalars():
    assert parse_element("3*5 - 2", ZZ) == ZZ.from_int(13)
    assert parse_element("10", Zmod(9)) == Zmod(9).from_int(1)
    assert parse_element("2^10", Zmod(9)).value == 1024 % 9
    with pytest.raises(ParseError):
        parse_element("t", ZZ)


@pytest.mark.parametrize("bad", ["", "(", "x)", "x^-1", "x^", "1 $ 2", "x x"])
def test_rejects_malformed(bad):
    with pytest.raises(ParseError):
        parse_element(bad, PolyRing("x"))


def test_parse_error_is_value_error():
    assert issubclass(ParseError, ValueError)


def test_variables_in_order_of_use():
    assert variables_in("y*x + y^2 - z") == ["y", "x", "z"]
    assert variables_in("3 + 4") == []
    assert tokenize("x**2")[1] == ("op", "^")
