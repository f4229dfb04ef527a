import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynla.errors import NotPrime, ZeroInverse
from dynla.gf import DEFAULT_PRIME, Field, Rng, is_prime


def test_default_prime_is_mersenne_31():
    assert DEFAULT_PRIME == 2147483647
    assert is_prime(DEFAULT_PRIME)


def test_small_and_composite_moduli():
    Field(5)
    Field(101)
    for bad in (1, 4, 6, 9, 2147483646):
        with pytest.raises(NotPrime):
            Field(bad)


def test_arithmetic_small_prime():
    f = Field(7)
    assert f.add(3, 5) == 1
    assert f.mul(3, 5) == 1
    assert f.inv(3) == 5
    assert f.inv(6) == 6
    assert f.inv(1) == 1
    with pytest.raises(ZeroInverse):
        f.inv(0)


def test_identities():
    f = Field(101)
    for a in range(101):
        assert f.add(a, 0) == a
        assert f.mul(a, 1) == a
        assert f.mul(a, 0) == 0
        assert f.add(a, f.neg(a)) == 0


def test_inverse_exhaustive_small():
    for p in (5, 7, 101):
        f = Field(p)
        for a in range(1, p):
            assert f.mul(a, f.inv(a)) == 1


@settings(max_examples=50)
@given(st.integers(0, DEFAULT_PRIME - 1), st.integers(0, DEFAULT_PRIME - 1),
       st.integers(0, DEFAULT_PRIME - 1))
def test_field_axioms_random(a, b, c):
    f = Field(DEFAULT_PRIME)
    assert f.add(a, b) == f.add(b, a)
    assert f.mul(a, b) == f.mul(b, a)
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    if a:
        assert f.mul(a, f.inv(a)) == 1


def test_rng_determinism():
    a = Rng(12345)
    b = Rng(12345)
    assert [a.next_u64() for _ in range(1000)] == [b.next_u64() for _ in range(1000)]


def test_rng_spawn_independent_and_deterministic():
    parent = Rng(7)
    c1 = parent.spawn(1)
    c2 = parent.spawn(2)
    c1_again = Rng(7).spawn(1)
    s1 = [c1.next_u64() for _ in range(100)]
    assert s1 == [c1_again.next_u64() for _ in range(100)]
    assert s1 != [c2.next_u64() for _ in range(100)]


def test_sample_statistics():
    f = Field(DEFAULT_PRIME)
    rng = Rng(99)
    n = 100_000
    total = sum(rng.sample(f) for _ in range(n))
    mean = total / n
    assert abs(mean - (f.p - 1) / 2) < 0.01 * f.p


def test_sample_nonzero_never_zero():
    f = Field(5)
    rng = Rng(1)
    assert all(1 <= rng.sample_nonzero(f) < 5 for _ in range(100_000))


def test_randrange_bounds_and_coverage():
    rng = Rng(3)
    seen = {rng.randrange(10) for _ in range(1000)}
    assert seen == set(range(10))
