"""Small finite fields GF(p^f) with tabulated arithmetic."""

from __future__ import annotations

from functools import lru_cache
from itertools import product


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_factors(n: int) -> list[int]:
    """Prime factors of ``n`` with multiplicity, ascending."""
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def big_omega(n: int) -> int:
    """Number of prime factors of ``n`` counted with multiplicity."""
    return len(prime_factors(n))


def least_root_of_unity(p: int, q: int) -> int:
    """Least residue of multiplicative order exactly ``p`` modulo the prime ``q``."""
    if (q - 1) % p:
        raise ValueError(f"{p} does not divide {q}-1")
    for g in range(2, q):
        c = pow(g, (q - 1) // p, q)
        if c != 1:
            break
    # the subgroup of order p is unique, so scan it for its least generator
    roots = {pow(c, k, q) for k in range(1, p)}
    return min(roots)


class GF:
    """The field with ``p**f`` elements.

    Elements are ints whose base-``p`` digits are polynomial coefficients
    (least significant first) modulo a fixed monic irreducible polynomial.
    """

    def __init__(self, p: int, f: int = 1):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if f < 1:
            raise ValueError("degree must be positive")
        self.p, self.f = p, f
        self.size = p**f
        self.modulus = self._irreducible()
        n = self.size
        self.add_tab = [[self._add(a, b) for b in range(n)] for a in range(n)]
        self.mul_tab = [[self._mul(a, b) for b in range(n)] for a in range(n)]
        self.neg_tab = [self._neg(a) for a in range(n)]
        self.primitive = self._primitive()

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.f})"

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.f):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds) -> int:
        out = 0
        for d in reversed(ds):
            out = out * self.p + d
        return out

    def _add(self, a, b):
        return self._undigits([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def _neg(self, a):
        return self._undigits([(-x) % self.p for x in self._digits(a)])

    def _polymul(self, a, b, mod):
        p, f = self.p, self.f
        x, y = self._digits(a), self._digits(b)
        prod = [0] * (2 * f - 1)
        for i, u in enumerate(x):
            for j, v in enumerate(y):
                prod[i + j] = (prod[i + j] + u * v) % p
        # reduce by the monic modulus (coefficients of degree < f given in mod)
        for k in range(len(prod) - 1, f - 1, -1):
            t = prod[k]
            if t:
                prod[k] = 0
                for i, m in enumerate(mod):
                    prod[k - f + i] = (prod[k - f + i] - t * m) % p
        return self._undigits(prod[:f])

    def _mul(self, a, b):
        return self._polymul(a, b, self.modulus)

    def _irreducible(self):
        p, f = self.p, self.f
        if f == 1:
            return (0,)
        n = p**f
        for coeffs in product(range(p), repeat=f):
            if coeffs[0] == 0:
                continue
            # a field iff there are no zero divisors
            if all(self._polymul(a, b, coeffs) for a in range(1, n) for b in range(1, n)):
                return coeffs
        raise AssertionError("no irreducible polynomial found")

    def add(self, a, b):
        return self.add_tab[a][b]

    def sub(self, a, b):
        return self.add_tab[a][self.neg_tab[b]]

    def mul(self, a, b):
        return self.mul_tab[a][b]

    def neg(self, a):
        return self.neg_tab[a]

    def mult_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        k, x = 1, a
        while x != 1:
            x = self.mul(x, a)
            k += 1
        return k

    def _primitive(self) -> int:
        if self.size == 2:
            return 1
        for a in range(2, self.size):
            if self.mult_order(a) == self.size - 1:
                return a
        raise AssertionError("no primitive element")

    def power(self, a: int, k: int) -> int:
        if a == 0:
            return 0 if k > 0 else 1
        out = 1
        for _ in range(k % (self.size - 1)):
            out = self.mul(out, a)
        return out


@lru_cache(maxsize=None)
def field(p: int, f: int = 1) -> GF:
    return GF(p, f)
