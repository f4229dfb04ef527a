"""Prime field arithmetic and deterministic seedable randomness.

Field elements are plain Python ints in ``[0, p)``.  The default modulus is
the Mersenne prime ``2**31 - 1`` so that products of two elements fit in a
signed 64-bit integer, which lets the rest of the package keep matrices in
``numpy.int64`` arrays and reduce lazily.
"""

from __future__ import annotations

from .errors import NotPrime, ZeroInverse

DEFAULT_PRIME = 2147483647  # 2**31 - 1
MIN_PRIME = 5

_MASK64 = (1 << 64) - 1


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all 64-bit inputs."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """Arithmetic in GF(p) for a prime ``p >= 5``."""

    __slots__ = ("p",)

    def __init__(self, p: int = DEFAULT_PRIME):
        if p < MIN_PRIME or not is_prime(p):
            raise NotPrime(f"modulus must be a prime >= {MIN_PRIME}, got {p}")
        self.p = p

    def normalize(self, a: int) -> int:
        return a % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroInverse("0 has no multiplicative inverse")
        return pow(a, self.p - 2, self.p)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        return pow(a % self.p, e, self.p)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("Field", self.p))

    def __repr__(self) -> str:
        return f"Field({self.p})"


def _splitmix64(state: int) -> tuple[int, int]:
    """One step of the splitmix64 generator: (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


class Rng:
    """Deterministic, platform-independent random generator (splitmix64).

    The same seed always yields the same sequence; ``spawn(i)`` derives an
    independent child stream from ``hash(parent_seed, i)`` so that
    sub-structures can be re-seeded reproducibly.
    """

    __slots__ = ("seed", "_state")

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self._state = self.seed

    def next_u64(self) -> int:
        self._state, out = _splitmix64(self._state)
        return out

    def spawn(self, index: int) -> "Rng":
        """Child generator with seed derived from (parent seed, index)."""
        _, mixed = _splitmix64((self.seed ^ (index * 0xD1B54A32D192ED03)) & _MASK64)
        return Rng(mixed)

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n) via rejection sampling."""
        if n <= 0:
            raise ValueError("randrange bound must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def sample(self, field: Field) -> int:
        """Uniform field element in [0, p)."""
        return self.randrange(field.p)

    def sample_nonzero(self, field: Field) -> int:
        """Uniform field element in [1, p)."""
        return 1 + self.randrange(field.p - 1)

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]
