"""Exact coefficient rings.

Every ring exposes the same small protocol used by the matrix code:
arithmetic, a Euclidean-style norm for pivot selection, an extended gcd
returning an invertible 2x2 transform, annihilators, and canonical
associates.  Elements are plain Python values (ints, fractions, tuples).
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import RingError


def _xgcd_int(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


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
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def factorize(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class Ring:
    """Base protocol.  Subclasses override the arithmetic hooks."""

    is_domain = True
    is_pid = True

    # identity and equality of rings
    def key(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Ring) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return self.name()

    def name(self) -> str:
        raise NotImplementedError

    # elements
    @property
    def zero(self):
        return self.from_int(0)

    @property
    def one(self):
        return self.from_int(1)

    def from_int(self, n: int):
        raise NotImplementedError

    def canon(self, a):
        return a

    def add(self, a, b):
        return self.canon(a + b)

    def sub(self, a, b):
        return self.canon(a - b)

    def neg(self, a):
        return self.canon(-a)

    def mul(self, a, b):
        return self.canon(a * b)

    def is_zero(self, a) -> bool:
        return a == self.zero

    def eq(self, a, b) -> bool:
        return self.canon(a) == self.canon(b)

    def power(self, a, k: int):
        r = self.one
        for _ in range(k):
            r = self.mul(r, a)
        return r

    # Euclidean structure
    def norm(self, a) -> int:
        raise NotImplementedError

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def inv(self, a):
        q = self.exact_div(self.one, a)
        if q is None:
            raise RingError(f"{self.fmt(a)} is not a unit in {self.name()}")
        return q

    def exact_div(self, a, b):
        """Return q with q*b = a, or None."""
        raise NotImplementedError

    def xgcd(self, a, b):
        """Return (g, s, t, u, v) with s*a + t*b = g, u*a + v*b = 0 and
        s*v - t*u a unit."""
        if self.is_zero(a):
            return b, self.zero, self.one, self.one, self.zero
        if self.is_zero(b):
            return a, self.one, self.zero, self.zero, self.one
        g, s, t = self._xgcd(a, b)
        u = self.neg(self.exact_div(b, g))
        v = self.exact_div(a, g)
        return g, s, t, u, v

    def _xgcd(self, a, b):
        raise NotImplementedError

    def ann(self, a):
        """Generator of the annihilator ideal of a."""
        return self.one if self.is_zero(a) else self.zero

    def assoc(self, a):
        """Return (c, u) with u a unit and c = u*a the canonical associate."""
        raise NotImplementedError

    # literals
    def fmt(self, a) -> str:
        return str(a)

    def to_literal(self, a):
        return str(a)

    def from_literal(self, lit):
        return self.canon(self.from_int(int(lit)))

    def to_json(self) -> dict:
        raise NotImplementedError

    def module_symbol(self) -> str:
        return self.name()

    def torsion_symbol(self, d) -> str:
        return f"{self.name()}/({d})"


class Integers(Ring):
    def key(self):
        return ("Z",)

    def name(self):
        return "Z"

    def from_int(self, n):
        return int(n)

    def is_zero(self, a):
        return a == 0

    def norm(self, a):
        return abs(a)

    def is_unit(self, a):
        return a in (1, -1)

    def exact_div(self, a, b):
        if b == 0:
            return 0 if a == 0 else None
        q, r = divmod(a, b)
        return q if r == 0 else None

    def _xgcd(self, a, b):
        return _xgcd_int(a, b)

    def assoc(self, a):
        return (-a, -1) if a < 0 else (a, 1)

    def to_json(self):
        return {"kind": "Z"}

    def torsion_symbol(self, d):
        return f"Z/{d}"


class IntegersMod(Ring):
    is_domain = False
    is_pid = False

    def __init__(self, m: int):
        if m < 2:
            raise RingError("modulus must be at least 2")
        self.m = m

    def key(self):
        return ("Zmod", self.m)

    def name(self):
        return f"Z/{self.m}"

    def from_int(self, n):
        return int(n) % self.m

    def canon(self, a):
        return a % self.m

    def is_zero(self, a):
        return a % self.m == 0

    def norm(self, a):
        a %= self.m
        return 0 if a == 0 else gcd(a, self.m)

    def is_unit(self, a):
        return gcd(a % self.m, self.m) == 1

    def exact_div(self, a, b):
        m = self.m
        a %= m
        b %= m
        g = gcd(b, m)
        if a % g:
            return None
        mg = m // g
        if mg == 1:
            return 0
        return (a // g) * pow(b // g, -1, mg) % mg

    def _xgcd(self, a, b):
        g, s, t = _xgcd_int(a % self.m, b % self.m)
        return g % self.m, s % self.m, t % self.m

    def xgcd(self, a, b):
        a %= self.m
        b %= self.m
        if a == 0:
            return b, 0, 1, 1, 0
        if b == 0:
            return a, 1, 0, 0, 1
        g, s, t = _xgcd_int(a, b)
        return g % self.m, s % self.m, t % self.m, (-b // g) % self.m, (a // g) % self.m

    def ann(self, a):
        return (self.m // gcd(a % self.m, self.m)) % self.m

    def assoc(self, a):
        m = self.m
        a %= m
        if a == 0:
            return 0, 1
        g = gcd(a, m)
        mg = m // g
        u = pow((a // g) % mg, -1, mg) if mg > 1 else 1
        while gcd(u, m) != 1:
            u += mg
        return g, u % m

    def to_json(self):
        return {"kind": "Zmod", "m": self.m}

    def module_symbol(self):
        return f"(Z/{self.m})"

    def torsion_symbol(self, d):
        return f"Z/{d}"


class PrimeField(Ring):
    def __init__(self, p: int, root: int | None = None):
        if not is_prime(p):
            raise RingError(f"{p} is not prime")
        self.p = p
        self.root = None if root is None else root % p

    def key(self):
        return ("F", self.p, self.root)

    def name(self):
        return f"F{self.p}"

    def from_int(self, n):
        return int(n) % self.p

    def canon(self, a):
        return a % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def norm(self, a):
        return 0 if a % self.p == 0 else 1

    def is_unit(self, a):
        return a % self.p != 0

    def exact_div(self, a, b):
        if b % self.p == 0:
            return 0 if a % self.p == 0 else None
        return a * pow(b, -1, self.p) % self.p

    def _xgcd(self, a, b):
        return a % self.p, 1, 0

    def assoc(self, a):
        a %= self.p
        if a == 0:
            return 0, 1
        return 1, pow(a, -1, self.p)

    def root_order(self) -> int | None:
        if self.root is None or self.root == 0:
            return None
        k, r = 1, self.root
        while r != 1:
            r = r * self.root % self.p
            k += 1
        return k

    def to_json(self):
        d = {"kind": "F", "p": self.p}
        if self.root is not None:
            d["q"] = self.root
        return d

    def torsion_symbol(self, d):
        return "0"


# minimal relations zeta^2 = c1*zeta + c0 for the quadratic cases
_CYCLO = {3: (-1, -1), 4: (-1, 0), 6: (-1, 1)}


class CyclotomicIntegers(Ring):
    """Z[zeta_n] for n in {2, 3, 4, 6}; elements are coefficient tuples."""

    def __init__(self, n: int):
        if n not in (2, 3, 4, 6):
            raise RingError("cyclotomic order must be one of 2, 3, 4, 6")
        self.n = n
        self.deg = 1 if n == 2 else 2

    def key(self):
        return ("cyclotomic", self.n)

    def name(self):
        return f"Z[z{self.n}]"

    def from_int(self, k):
        return (int(k),) if self.deg == 1 else (int(k), 0)

    def canon(self, a):
        return tuple(int(c) for c in a)

    def zeta(self):
        return (-1,) if self.deg == 1 else (0, 1)

    def is_zero(self, a):
        return all(c == 0 for c in a)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        if self.deg == 1:
            return (a[0] * b[0],)
        c0, c1 = _CYCLO[self.n]
        a0, a1 = a
        b0, b1 = b
        z2 = a1 * b1
        return (a0 * b0 + c0 * z2, a0 * b1 + a1 * b0 + c1 * z2)

    def conj(self, a):
        if self.deg == 1:
            return a
        # conjugate of zeta is zeta^{-1} = trace - zeta, trace = c1
        c1 = _CYCLO[self.n][1]
        a0, a1 = a
        return (a0 + a1 * c1, -a1)

    def norm(self, a):
        return abs(self.mul(a, self.conj(a))[0])

    def units(self):
        z = self.zeta()
        out, u = [], self.one
        for _ in range(self.n):
            out.append(u)
            out.append(self.neg(u))
            u = self.mul(u, z)
        return sorted(set(out))

    def is_unit(self, a):
        return self.norm(a) == 1

    def exact_div(self, a, b):
        if self.is_zero(b):
            return self.zero if self.is_zero(a) else None
        nb = self.norm(b)
        num = self.mul(a, self.conj(b))
        if any(c % nb for c in num):
            return None
        return tuple(c // nb for c in num)

    def divmod(self, a, b):
        nb = self.norm(b)
        num = self.mul(a, self.conj(b))
        q = tuple((2 * c + nb) // (2 * nb) for c in num)
        r = self.sub(a, self.mul(q, b))
        return q, r

    def _xgcd(self, a, b):
        r0, r1 = a, b
        s0, s1 = self.one, self.zero
        t0, t1 = self.zero, self.one
        while not self.is_zero(r1):
            q, r = self.divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, self.sub(s0, self.mul(q, s1))
            t0, t1 = t1, self.sub(t0, self.mul(q, t1))
        return r0, s0, t0

    def assoc(self, a):
        if self.is_zero(a):
            return a, self.one
        def rank(c):
            c1 = c[1] if self.deg == 2 else 0
            return (c1 == 0, c[0] > 0, c1 >= 0, c[0] >= c1, c)

        return max(((self.mul(u, a), u) for u in self.units()), key=lambda p: rank(p[0]))

    def fmt(self, a):
        if self.deg == 1:
            return str(a[0])
        a0, a1 = a
        if a1 == 0:
            return str(a0)
        z = f"z{self.n}"
        t = z if a1 == 1 else f"-{z}" if a1 == -1 else f"{a1}*{z}"
        if a0 == 0:
            return t
        return f"{a0}+{t}".replace("+-", "-")

    def to_literal(self, a):
        return [str(c) for c in a]

    def from_literal(self, lit):
        if isinstance(lit, (int, str)):
            return self.from_int(int(lit))
        vals = [int(c) for c in lit]
        if len(vals) != self.deg:
            raise RingError(f"expected {self.deg} coefficients")
        return tuple(vals)

    def to_json(self):
        return {"kind": "cyclotomic", "N": self.n}


class LocalizedIntegers(Ring):
    """Z[1/S]: fractions whose denominators involve only primes of S."""

    def __init__(self, inverted):
        inv = sorted(set(int(s) for s in inverted))
        if not inv or any(s == 0 for s in inv):
            raise RingError("inverted set must be nonempty and avoid 0")
        self.inverted = tuple(inv)
        self.primes = tuple(sorted({p for s in inv for p in prime_factors(s)}))

    def key(self):
        return ("localized", self.primes)

    def name(self):
        return "Z[1/" + ",".join(str(p) for p in self.primes) + "]" if self.primes else "Z"

    def from_int(self, n):
        return Fraction(int(n))

    def strip(self, n: int) -> int:
        """Positive part of n coprime to the inverted primes."""
        n = abs(n)
        for p in self.primes:
            while n and n % p == 0:
                n //= p
        return n

    def canon(self, a):
        a = Fraction(a)
        if self.strip(a.denominator) != 1:
            raise RingError(f"{a} does not lie in {self.name()}")
        return a

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a == 0

    def norm(self, a):
        return 0 if a == 0 else self.strip(a.numerator)

    def is_unit(self, a):
        return a != 0 and self.strip(a.numerator) == 1

    def exact_div(self, a, b):
        if b == 0:
            return Fraction(0) if a == 0 else None
        q = Fraction(a) / Fraction(b)
        return q if self.strip(q.denominator) == 1 else None

    def _xgcd(self, a, b):
        al, bl = self.strip(a.numerator), self.strip(b.numerator)
        ua, ub = a / al, b / bl
        g, s, t = _xgcd_int(al, bl)
        return Fraction(g), Fraction(s) / ua, Fraction(t) / ub

    def assoc(self, a):
        if a == 0:
            return Fraction(0), Fraction(1)
        al = self.strip(a.numerator)
        return Fraction(al), Fraction(al) / a

    def fmt(self, a):
        return str(a)

    def to_literal(self, a):
        return [str(a.numerator), str(a.denominator)]

    def from_literal(self, lit):
        if isinstance(lit, (int, str)):
            return self.canon(Fraction(int(lit)))
        num, den = lit
        return self.canon(Fraction(int(num), int(den)))

    def to_json(self):
        return {"kind": "localized", "inverted": list(self.inverted)}

    def torsion_symbol(self, d):
        return f"Z/{d}"


ZZ = Integers()


def ring_from_json(doc) -> Ring:
    if isinstance(doc, str):
        doc = {"kind": doc}
    kind = doc.get("kind")
    if kind == "Z":
        return ZZ
    if kind == "Zmod":
        return IntegersMod(int(doc["m"]))
    if kind == "F":
        return PrimeField(int(doc["p"]), doc.get("q"))
    if kind == "cyclotomic":
        return CyclotomicIntegers(int(doc["N"]))
    if kind == "localized":
        return LocalizedIntegers(doc["inverted"])
    raise RingError(f"unknown ring kind {kind!r}")
