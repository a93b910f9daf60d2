import pytest

from sumsetlab.pipeline import fg_table

# listed values, copied from the source text
LISTING = {1: (1, 2), 2: (1, 2, 2, 4), 3: (1, 2, 2, 4, 2, 4, 4, 8)}


def test_listed_values():
    table = fg_table(3)
    for a, row in LISTING.items():
        assert table.row(a) == row
    assert table.g(1, 2) == 2


def _plain_f(a, b):
    if a == 1:
        return b
    if b % 2:
        return _plain_f(a - 1, (b + 1) // 2)
    return 2 * _plain_f(a, b - 1)


@pytest.mark.parametrize("a", range(1, 13))
def test_properties_up_to_12(a):
    table = fg_table(12)
    for b in range(1, 2 ** a + 1):
        v, g = table.f(a, b), table.g(a, b)
        assert v == _plain_f(a, b)
        assert v & (v - 1) == 0 and v.bit_length() - 1 <= a
        assert 2 ** (g - 1) == v and g <= a + 1
        if b % 2 == 0:
            assert v == 2 * table.f(a, b - 1)
            assert g == table.g(a, b - 1) + 1


def test_bounds():
    table = fg_table(2)
    with pytest.raises(IndexError):
        table.f(3, 1)
    with pytest.raises(IndexError):
        table.f(2, 5)
    with pytest.raises(ValueError):
        fg_table(0)
