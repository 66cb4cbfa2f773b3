"""Exact coefficient arithmetic.

Four scalar domains are supported: arbitrary-precision rationals, integers,
prime fields F_p, and small extension fields F_{p^k} with a deterministically
chosen irreducible modulus.  Each ring operates on plain immutable "raw"
values (Fraction, int, or tuples of residues); the Scalar wrapper pairs a raw
value with its ring and adds operator syntax plus the textual encodings used
in reports and JSON.  Nothing here ever rounds.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class RingMismatch(Exception):
    """Operands (or an embedding request) involve incompatible rings."""


class DivisionByZero(ZeroDivisionError):
    """Division or inversion by the zero element."""


class NotAField(Exception):
    """Inverse requested in a ring without division (the integers)."""


class DenominatorDivisibleByP(Exception):
    """A rational whose denominator is divisible by p has no image in F_p."""


class BoundExceeded(Exception):
    """A brute-force search was asked to exceed its configured bound."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# Modulus search for extension fields.

IRREDUCIBLE_SEARCH_BOUND = 1 << 20

# Multiplication tables are only built for fields at most this large.
_TABLE_MAX_ORDER = 1 << 16


def _poly_deg(coeffs) -> int:
    for i in range(len(coeffs) - 1, -1, -1):
        if coeffs[i]:
            return i
    return -1


def _poly_rem(num, den, p):
    """Remainder of num modulo a monic den over F_p (lists, low degree first)."""
    num = [c % p for c in num]
    dn = _poly_deg(den)
    while _poly_deg(num) >= dn:
        shift = _poly_deg(num) - dn
        factor = num[_poly_deg(num)]
        for i in range(dn + 1):
            num[shift + i] = (num[shift + i] - factor * den[i]) % p
    return num[: _poly_deg(num) + 1]


def _is_irreducible(coeffs, p) -> bool:
    """Exhaustive trial division; coeffs monic, low degree first."""
    k = len(coeffs) - 1
    if k == 1:
        return True
    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            den = list(tail) + [1]
            if not _poly_rem(list(coeffs), den, p):
                return False
    return True


def find_irreducible(p: int, k: int, bound: int = IRREDUCIBLE_SEARCH_BOUND) -> tuple:
    """First monic irreducible of degree k over F_p, as a low-degree-first
    coefficient tuple of length k+1.

    Candidates are enumerated by counting upward in base p with the constant
    coefficient as the least significant digit, so the result is canonical:
    (5, 2) gives x^2 + 2 and (2, 2) gives x^2 + x + 1.
    """
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if k < 1:
        raise ValueError("degree must be at least 1")
    if p ** k > bound:
        raise BoundExceeded(f"modulus search over {p}^{k} elements exceeds bound {bound}")
    for idx in range(p ** k):
        coeffs = []
        rest = idx
        for _ in range(k):
            coeffs.append(rest % p)
            rest //= p
        candidate = tuple(coeffs) + (1,)
        if _is_irreducible(candidate, p):
            return candidate
    raise AssertionError("unreachable: irreducibles of every degree exist")


# ---------------------------------------------------------------------------
# Rings.


class Ring:
    """Interface shared by all coefficient rings.

    Subclasses implement arithmetic on raw values.  Raw values are always
    immutable and hashable; ``sort_key`` gives the deterministic order used
    for canonical orbit representatives and report sorting.
    """

    is_field = False
    characteristic = 0
    order = None  # number of elements; None when infinite

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotAField(f"{self!r} has no division")

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        acc = self.one()
        base = a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def is_negative(self, a) -> bool:
        """Whether the rendered form carries a leading minus sign."""
        return False

    def render(self, a) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def sort_key(self, a):
        return a

    def elements(self):
        raise TypeError(f"{self!r} is not finite")


class RationalRing(Ring):
    """The rationals; raw values are Fraction (lowest terms, positive denominator)."""

    is_field = True

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if not a:
            raise DivisionByZero("1/0 over Q")
        return 1 / a

    def div(self, a, b):
        if not b:
            raise DivisionByZero("division by zero over Q")
        return a / b

    def is_negative(self, a):
        return a < 0

    def render(self, a):
        return str(a)

    def parse(self, text):
        return Fraction(text)

    def __eq__(self, other):
        return isinstance(other, RationalRing)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class IntegerRing(Ring):
    """The integers; raw values are int.  Division is refused."""

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return int(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_negative(self, a):
        return a < 0

    def render(self, a):
        return str(a)

    def parse(self, text):
        return int(text)

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("ZZ")

    def __repr__(self):
        return "ZZ"


QQ = RationalRing()
ZZ = IntegerRing()


class PrimeField(Ring):
    """F_p; raw values are ints in [0, p)."""

    is_field = True

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"p must be prime, got {p}")
        self.p = p
        self.characteristic = p
        self.order = p

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise DivisionByZero(f"1/0 over F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def render(self, a):
        return str(a % self.p)

    def parse(self, text):
        return int(text) % self.p

    def elements(self):
        return iter(range(self.p))

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"GF({self.p})"


class ExtensionField(Ring):
    """F_{p^k} as F_p[x] modulo a monic irreducible.

    Raw values are length-k tuples of residues, low degree first.  The
    modulus defaults to the canonical one from find_irreducible, so two
    fields with the same (p, k) are interchangeable.  Small fields get a
    lazily built discrete-log table to keep exhaustive enumeration fast.
    """

    is_field = True

    def __init__(self, p: int, k: int, modulus: tuple = None,
                 search_bound: int = IRREDUCIBLE_SEARCH_BOUND):
        if not is_prime(p):
            raise ValueError(f"p must be prime, got {p}")
        if k < 1:
            raise ValueError("extension degree must be at least 1")
        if modulus is None:
            modulus = find_irreducible(p, k, search_bound)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k, low degree first")
        self.p = p
        self.k = k
        self.modulus = modulus
        self.characteristic = p
        self.order = p ** k
        self._log = None
        self._exp = None

    def zero(self):
        return (0,) * self.k

    def one(self):
        return (1,) + (0,) * (self.k - 1)

    def from_int(self, n):
        return (n % self.p,) + (0,) * (self.k - 1)

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def _mul_conv(self, a, b):
        p, k, mod = self.p, self.k, self.modulus
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for i in range(2 * k - 2, k - 1, -1):
            c = prod[i] % p
            if c:
                for j in range(k):
                    prod[i - k + j] -= c * mod[j]
            prod[i] = 0
        return tuple(c % p for c in prod[:k])

    def _tables(self):
        if self._exp is None:
            one = self.one()
            for g in self.elements():
                if g == self.zero():
                    continue
                powers = [one]
                x = g
                while x != one:
                    powers.append(x)
                    x = self._mul_conv(x, g)
                if len(powers) == self.order - 1:
                    self._exp = powers
                    self._log = {v: i for i, v in enumerate(powers)}
                    break
        return self._log, self._exp

    def mul(self, a, b):
        if self.order <= _TABLE_MAX_ORDER:
            log, exp = self._tables()
            if a not in log or b not in log:  # either factor is zero
                return self.zero()
            return exp[(log[a] + log[b]) % (self.order - 1)]
        return self._mul_conv(a, b)

    def inv(self, a):
        if a == self.zero():
            raise DivisionByZero(f"1/0 over {self!r}")
        if self.order <= _TABLE_MAX_ORDER:
            log, exp = self._tables()
            return exp[(-log[a]) % (self.order - 1)]
        return self.pow(a, self.order - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == self.zero():
            return self.one() if e == 0 else self.zero()
        if self.order <= _TABLE_MAX_ORDER:
            log, exp = self._tables()
            return exp[(log[a] * e) % (self.order - 1)]
        return super().pow(a, e)

    def render(self, a):
        return ",".join(str(c) for c in a)

    def parse(self, text):
        parts = tuple(int(c) % self.p for c in text.split(","))
        if len(parts) != self.k:
            raise ValueError(f"expected {self.k} residues, got {text!r}")
        return parts

    def elements(self):
        # Tuple-lexicographic order; the generator search above relies on
        # this being deterministic.
        return itertools.product(range(self.p), repeat=self.k)

    def __eq__(self, other):
        return (isinstance(other, ExtensionField) and other.p == self.p
                and other.k == self.k and other.modulus == self.modulus)

    def __hash__(self):
        return hash(("Fpk", self.p, self.k, self.modulus))

    def __getstate__(self):
        # Log tables are rebuilt on demand; keep pickles small for workers.
        return (self.p, self.k, self.modulus)

    def __setstate__(self, state):
        self.p, self.k, self.modulus = state
        self.characteristic = self.p
        self.order = self.p ** self.k
        self._log = None
        self._exp = None

    def __repr__(self):
        return f"GF({self.p}^{self.k})"


def GF(p: int, k: int = 1, modulus: tuple = None) -> Ring:
    """Finite field with p^k elements (PrimeField when k == 1)."""
    if k == 1:
        if modulus is not None:
            raise ValueError("modulus only applies to proper extensions")
        return PrimeField(p)
    return ExtensionField(p, k, modulus)


# ---------------------------------------------------------------------------
# Reduction and coercion between rings.


def reduce_fraction(a: Fraction, p: int) -> int:
    """Image of a rational in F_p; the denominator must be a unit mod p."""
    if a.denominator % p == 0:
        raise DenominatorDivisibleByP(f"{a} has no image in F_{p}")
    return a.numerator * pow(a.denominator, -1, p) % p


def coerce(value, src: Ring, dst: Ring):
    """Map a raw value along the canonical embedding src -> dst.

    Supported embeddings: identity, Z -> anything, Q -> F_p / F_{p^k}
    (reduction, which may fail on the denominator), F_p -> F_{p^k}.
    """
    if src == dst:
        return value
    if isinstance(src, IntegerRing):
        if isinstance(dst, RationalRing):
            return Fraction(value)
        return dst.from_int(value)
    if isinstance(src, RationalRing):
        if isinstance(dst, PrimeField):
            return reduce_fraction(value, dst.p)
        if isinstance(dst, ExtensionField):
            return dst.from_int(reduce_fraction(value, dst.p))
    if isinstance(src, PrimeField) and isinstance(dst, ExtensionField) and dst.p == src.p:
        return dst.from_int(value)
    raise RingMismatch(f"no embedding {src!r} -> {dst!r}")


# ---------------------------------------------------------------------------
# Scalars.


@dataclass(frozen=True)
class Scalar:
    """A raw value tagged with its ring; arithmetic refuses mixed rings."""

    ring: Ring
    value: object

    def _peer(self, other):
        if isinstance(other, int):
            return Scalar(self.ring, self.ring.from_int(other))
        if not isinstance(other, Scalar):
            return NotImplemented
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")
        return other

    def __add__(self, other):
        other = self._peer(other)
        if other is NotImplemented:
            return other
        return Scalar(self.ring, self.ring.add(self.value, other.value))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._peer(other)
        if other is NotImplemented:
            return other
        return Scalar(self.ring, self.ring.sub(self.value, other.value))

    def __mul__(self, other):
        other = self._peer(other)
        if other is NotImplemented:
            return other
        return Scalar(self.ring, self.ring.mul(self.value, other.value))

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.ring, self.ring.neg(self.value))

    def __truediv__(self, other):
        other = self._peer(other)
        if other is NotImplemented:
            return other
        return Scalar(self.ring, self.ring.div(self.value, other.value))

    def __pow__(self, e: int):
        return Scalar(self.ring, self.ring.pow(self.value, e))

    def inv(self):
        return Scalar(self.ring, self.ring.inv(self.value))

    @property
    def is_zero(self):
        return self.value == self.ring.zero()

    def __str__(self):
        return self.ring.render(self.value)

    @classmethod
    def parse(cls, ring: Ring, text: str) -> "Scalar":
        return cls(ring, ring.parse(text))


def reduce_mod_p(a: Scalar, p: int) -> Scalar:
    """Reduce a rational or integer Scalar into F_p."""
    field = PrimeField(p)
    if isinstance(a.ring, RationalRing):
        return Scalar(field, reduce_fraction(a.value, p))
    if isinstance(a.ring, IntegerRing):
        return Scalar(field, a.value % p)
    raise RingMismatch(f"reduce_mod_p expects a rational or integer scalar, got {a.ring!r}")
