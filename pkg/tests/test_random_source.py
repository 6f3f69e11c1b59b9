import pytest

from app.engine import RandomSource
from app.errors import RandomRangeError


def test_same_seed_same_sequence():
    a, b = RandomSource(7), RandomSource(7)
    assert [a.uniform(0, 10) for _ in range(20)] == [b.uniform(0, 10) for _ in range(20)]


def test_different_seeds_differ():
    assert RandomSource(1).uniform(0, 1) != RandomSource(2).uniform(0, 1)


def test_uniform_stays_in_range():
    rng = RandomSource(3)
    values = [rng.uniform(2.0, 5.0) for _ in range(1000)]
    assert all(2.0 <= v < 5.0 for v in values)


def test_degenerate_range_returns_bound():
    assert RandomSource(1).uniform(4.0, 4.0) == 4.0


def test_inverted_range_rejected():
    with pytest.raises(RandomRangeError):
        RandomSource(1).uniform(5.0, 1.0)
    with pytest.raises(ValueError):
        RandomSource(1).uniform_array(5.0, 1.0, 3)


def test_choice_pair_is_distinct():
    rng = RandomSource(11)
    for _ in range(200):
        a, b = rng.choice_pair(list(range(5)))
        assert a != b
        assert 0 <= a < 5 and 0 <= b < 5
