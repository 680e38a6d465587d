"""Semidirect products of cyclic groups.

Three families are supported, all with elements stored as tuples of residues:

* ``cyclic``  -- ``m x_a n``: pairs ``[x, y]``, ``x`` mod ``m``, ``y`` mod ``n``,
  with ``[x, y][u, v] = [x + u, y*a^u + v]``.
* ``square``  -- ``m x_sigma n^2``: triples ``[c, d, e]`` where the row vector
  ``[d, e]`` is acted on by powers of a 2x2 matrix ``sigma`` over ``Z_n``.
* ``doubled`` -- ``[m x_a n]^2``: quadruples, the base group acting on a copy of
  itself by conjugation.

Groups are validated once (``validate``) and are immutable afterwards.  Each
carries a power table of length ``m`` so every exponent is a table lookup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence, Union

import numpy as np

from .errors import (
    BadParameter,
    CoordinateOutOfRange,
    IndexOutOfRange,
    NotAUnit,
    OrderMismatch,
)

Element = tuple  # tuple[int, ...]

FAMILIES = ("cyclic", "square", "doubled")
FAMILY_CODE = {"cyclic": 0, "square": 1, "doubled": 2}


def multiplicative_order(a: int, n: int) -> int:
    """Order of the unit ``a`` in ``(Z/nZ)^*``; ``n`` must be >= 2."""
    a %= n
    if math.gcd(a, n) != 1:
        raise NotAUnit(f"{a} is not a unit mod {n}")
    k, x = 1, a
    while x != 1 % n:
        x = x * a % n
        k += 1
    return k


def _matmul2(p, q, n):
    return (
        (p[0] * q[0] + p[1] * q[2]) % n,
        (p[0] * q[1] + p[1] * q[3]) % n,
        (p[2] * q[0] + p[3] * q[2]) % n,
        (p[2] * q[1] + p[3] * q[3]) % n,
    )


class Group:
    """Common machinery: ranges, indexing, orders, power and word evaluation."""

    family: str
    m: int
    n: int
    radices: tuple
    order: int

    @property
    def arity(self) -> int:
        return len(self.radices)

    @property
    def identity(self) -> Element:
        return (0,) * self.arity

    def check(self, g: Sequence[int]) -> Element:
        g = tuple(int(c) for c in g)
        if len(g) != self.arity or any(not 0 <= c < r for c, r in zip(g, self.radices)):
            raise CoordinateOutOfRange(f"{list(g)} is not an element of {self.name}")
        return g

    def reduce(self, g: Sequence[int]) -> Element:
        """Canonical residues for arbitrary integer coordinates."""
        if len(g) != self.arity:
            raise CoordinateOutOfRange(f"{list(g)} has wrong arity for {self.name}")
        return tuple(int(c) % r for c, r in zip(g, self.radices))

    def index(self, g: Sequence[int]) -> int:
        i = 0
        for c, r in zip(self.check(g), self.radices):
            i = i * r + c
        return i

    def unindex(self, i: int) -> Element:
        i = int(i)
        if not 0 <= i < self.order:
            raise IndexOutOfRange(f"index {i} outside [0, {self.order})")
        coords = []
        for r in reversed(self.radices):
            i, c = divmod(i, r)
            coords.append(c)
        return tuple(reversed(coords))

    def power(self, g: Element, k: int) -> Element:
        if k < 0:
            g, k = self.inverse(g), -k
        result, base = self.identity, g
        while k:
            if k & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            k >>= 1
        return result

    def element_order(self, g: Sequence[int]) -> int:
        g = self.check(g)
        e = self.identity
        x, k = g, 1
        while x != e:
            x = self.multiply(x, g)
            k += 1
            assert k <= self.order, f"order of {g} exceeds |G|"
        return k

    def is_involution(self, g: Element) -> bool:
        return g != self.identity and self.multiply(g, g) == self.identity

    def evaluate(self, word: Sequence[tuple[Element, int]]) -> Element:
        """Product of ``g**k`` over the (generator, exponent) pairs of ``word``."""
        result = self.identity
        for g, k in word:
            result = self.multiply(result, self.power(g, k))
        return result

    def check_presentation(self) -> dict[str, bool]:
        """Evaluate every defining relator; map relator name to 'is identity'."""
        e = self.identity
        return {name: self.evaluate(word) == e for name, word in self.relators().items()}

    def random_element(self, rng: np.random.Generator) -> Element:
        return self.unindex(int(rng.integers(self.order)))

    # subclass hooks
    def multiply(self, g: Element, h: Element) -> Element:
        raise NotImplementedError

    def inverse(self, g: Element) -> Element:
        raise NotImplementedError

    def relators(self) -> dict[str, list]:
        raise NotImplementedError

    def kernel_table(self) -> np.ndarray:
        """Power table as an ``(m, 4)`` int64 array for the BFS kernels."""
        raise NotImplementedError

    @property
    def is_abelian(self) -> bool:
        raise NotImplementedError

    @property
    def family_code(self) -> int:
        return FAMILY_CODE[self.family]

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class CyclicGroup(Group):
    """``m x_a n``; ``powers[k] = a**k mod n``."""

    m: int
    n: int
    a: int
    powers: tuple = field(init=False, repr=False, compare=False)

    family = "cyclic"

    def __post_init__(self):
        m, n = int(self.m), int(self.n)
        if m < 1 or n < 2:
            raise BadParameter(f"need m >= 1 and n >= 2, got m={m}, n={n}")
        a = int(self.a) % n
        if math.gcd(a, n) != 1:
            raise NotAUnit(f"a={a} is not a unit mod {n}")
        if pow(a, m, n) != 1:
            raise OrderMismatch(
                f"order of {a} mod {n} is {multiplicative_order(a, n)}, which does not divide m={m}"
            )
        p = [1] * m
        for k in range(1, m):
            p[k] = p[k - 1] * a % n
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "powers", tuple(p))

    @property
    def radices(self):
        return (self.m, self.n)

    @property
    def order(self):
        return self.m * self.n

    @property
    def name(self):
        return f"{self.m} x_{self.a} {self.n}"

    @property
    def is_abelian(self):
        return self.a == 1

    def multiply(self, g, h):
        x, y = self.check(g)
        u, v = self.check(h)
        return ((x + u) % self.m, (y * self.powers[u] + v) % self.n)

    def inverse(self, g):
        x, y = self.check(g)
        xi = -x % self.m
        # a^{-x} = a^{m-x}
        return (xi, -y * self.powers[xi] % self.n)

    def relators(self):
        x, y = (1, 0), (0, 1)
        return {
            "x^m": [(x, self.m)],
            "y^n": [(y, self.n)],
            "x^-1 y x y^-a": [(x, -1), (y, 1), (x, 1), (y, -self.a)],
        }

    def kernel_table(self):
        t = np.zeros((self.m, 4), dtype=np.int64)
        t[:, 0] = self.powers
        return t

    def to_json(self):
        return {"family": "cyclic", "m": self.m, "n": self.n, "a": self.a}


@dataclass(frozen=True)
class SquareGroup(Group):
    """``m x_sigma n^2``; ``sigma = ((x, y), (z, t))`` sends ``[1,0]`` to ``[x,y]``
    and ``[0,1]`` to ``[z,t]``.  Vectors are rows, so ``[d, e]`` maps to
    ``[d, e] @ sigma``.  ``powers[k]`` is ``sigma**k`` flattened row-major."""

    m: int
    n: int
    sigma: tuple
    powers: tuple = field(init=False, repr=False, compare=False)

    family = "square"

    def __post_init__(self):
        m, n = int(self.m), int(self.n)
        if m < 1 or n < 2:
            raise BadParameter(f"need m >= 1 and n >= 2, got m={m}, n={n}")
        try:
            (x, y), (z, t) = self.sigma
        except (TypeError, ValueError):
            raise BadParameter(f"sigma must be a 2x2 matrix, got {self.sigma!r}") from None
        s = (int(x) % n, int(y) % n, int(z) % n, int(t) % n)
        det = (s[0] * s[3] - s[1] * s[2]) % n
        if math.gcd(det, n) != 1:
            raise NotAUnit(f"det(sigma)={det} is not a unit mod {n}")
        ident = (1, 0, 0, 1)
        p = [ident]
        for _ in range(1, m):
            p.append(_matmul2(p[-1], s, n))
        if _matmul2(p[-1], s, n) != ident:
            raise OrderMismatch(f"order of sigma mod {n} does not divide m={m}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "sigma", ((s[0], s[1]), (s[2], s[3])))
        object.__setattr__(self, "powers", tuple(p))

    @property
    def radices(self):
        return (self.m, self.n, self.n)

    @property
    def order(self):
        return self.m * self.n * self.n

    @property
    def name(self):
        return f"{self.m} x_sigma {self.n}^2 sigma={[list(r) for r in self.sigma]}"

    @property
    def is_abelian(self):
        return self.sigma == ((1, 0), (0, 1))

    def _act(self, d, e, k):
        p = self.powers[k]
        return (d * p[0] + e * p[2]) % self.n, (d * p[1] + e * p[3]) % self.n

    def multiply(self, g, h):
        c, d, e = self.check(g)
        f, gg, hh = self.check(h)
        d2, e2 = self._act(d, e, f)
        return ((c + f) % self.m, (d2 + gg) % self.n, (e2 + hh) % self.n)

    def inverse(self, g):
        c, d, e = self.check(g)
        ci = -c % self.m
        d2, e2 = self._act(d, e, ci)
        return (ci, -d2 % self.n, -e2 % self.n)

    def relators(self):
        a, b, c = (1, 0, 0), (0, 1, 0), (0, 0, 1)
        (x, y), (z, t) = self.sigma
        return {
            "a^m": [(a, self.m)],
            "b^n": [(b, self.n)],
            "c^n": [(c, self.n)],
            "b c b^-1 c^-1": [(b, 1), (c, 1), (b, -1), (c, -1)],
            "a^-1 b a c^-y b^-x": [(a, -1), (b, 1), (a, 1), (c, -y), (b, -x)],
            "a^-1 c a c^-t b^-z": [(a, -1), (c, 1), (a, 1), (c, -t), (b, -z)],
        }

    def kernel_table(self):
        return np.array(self.powers, dtype=np.int64).reshape(self.m, 4)

    def to_json(self):
        return {"family": "square", "m": self.m, "n": self.n, "sigma": [list(r) for r in self.sigma]}


@dataclass(frozen=True)
class DoubledGroup(Group):
    """``[m x_a n]^2``: pairs ``(g, h)`` of base elements with
    ``(g1, h1)(g2, h2) = (g1 g2, g2^-1 h1 g2 h2)``, flattened to quadruples."""

    base: CyclicGroup

    family = "doubled"

    def __post_init__(self):
        if not isinstance(self.base, CyclicGroup):
            raise BadParameter("doubled group needs a cyclic base group")

    @property
    def m(self):
        return self.base.m

    @property
    def n(self):
        return self.base.n

    @property
    def a(self):
        return self.base.a

    @property
    def powers(self):
        return self.base.powers

    @property
    def radices(self):
        return (self.m, self.n, self.m, self.n)

    @property
    def order(self):
        return self.base.order**2

    @property
    def name(self):
        return f"[{self.m} x_{self.a} {self.n}]^2"

    @property
    def is_abelian(self):
        return self.base.is_abelian

    def multiply(self, g, h):
        x1, x2, x3, x4 = self.check(g)
        y1, y2, y3, y4 = self.check(h)
        m, n, p = self.m, self.n, self.powers
        z3 = (x3 + y3) % m
        return (
            (x1 + y1) % m,
            (x2 * p[y1] + y2) % n,
            z3,
            (x4 * p[(y1 + y3) % m] + y2 * p[y3] - y2 * p[z3] + y4) % n,
        )

    def inverse(self, g):
        x1, x2, x3, x4 = self.check(g)
        b = self.base
        gi = b.inverse((x1, x2))
        # (g, h)^-1 = (g^-1, g h^-1 g^-1)
        k = b.multiply(b.multiply((x1, x2), b.inverse((x3, x4))), gi)
        return gi + k

    def relators(self):
        r, s, t, u = (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)
        m, n, a = self.m, self.n, self.a
        return {
            "r^m": [(r, m)],
            "s^n": [(s, n)],
            "r^-1 s r s^-a": [(r, -1), (s, 1), (r, 1), (s, -a)],
            "t^m": [(t, m)],
            "u^n": [(u, n)],
            "t^-1 u t u^-a": [(t, -1), (u, 1), (t, 1), (u, -a)],
            "r^-1 t r t^-1": [(r, -1), (t, 1), (r, 1), (t, -1)],
            "s^-1 t s u^-1 t^-1 u": [(s, -1), (t, 1), (s, 1), (u, -1), (t, -1), (u, 1)],
            "r^-1 u r u^-a": [(r, -1), (u, 1), (r, 1), (u, -a)],
            "s^-1 u s u^-1": [(s, -1), (u, 1), (s, 1), (u, -1)],
        }

    def kernel_table(self):
        return self.base.kernel_table()

    def to_json(self):
        return {"family": "doubled", "m": self.m, "n": self.n, "a": self.a}


GroupSpec = Union[CyclicGroup, SquareGroup, DoubledGroup]


def _int(d: Mapping, key: str) -> int:
    try:
        v = d[key]
    except KeyError:
        raise BadParameter(f"group spec is missing {key!r}") from None
    if isinstance(v, bool) or not isinstance(v, int):
        raise BadParameter(f"{key!r} must be an integer, got {v!r}")
    return v


def validate(spec: Any) -> GroupSpec:
    """Build a validated group from a JSON-style mapping (or pass a group through)."""
    if isinstance(spec, Group):
        return spec
    if not isinstance(spec, Mapping):
        raise BadParameter(f"group spec must be an object, got {type(spec).__name__}")
    family = spec.get("family")
    if family == "cyclic":
        return CyclicGroup(_int(spec, "m"), _int(spec, "n"), _int(spec, "a"))
    if family == "doubled":
        return DoubledGroup(CyclicGroup(_int(spec, "m"), _int(spec, "n"), _int(spec, "a")))
    if family == "square":
        sigma = spec.get("sigma")
        if (
            not isinstance(sigma, (list, tuple))
            or len(sigma) != 2
            or any(not isinstance(r, (list, tuple)) or len(r) != 2 for r in sigma)
        ):
            raise BadParameter(f"sigma must be [[x, y], [z, t]], got {sigma!r}")
        return SquareGroup(_int(spec, "m"), _int(spec, "n"), tuple(tuple(r) for r in sigma))
    raise BadParameter(f"unknown family {family!r}; expected one of {FAMILIES}")
