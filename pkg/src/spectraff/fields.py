"""Exact arithmetic in prime fields F_p, base fields F_q = F_{p^r}, and
extensions F_{q^n}, including the Frobenius map and the relative norm.

Representation. An element of F_{p^r} is a tuple of r residues mod p in the
polynomial basis, low coefficient first; an element of F_{q^n} is a tuple of
n base-field elements. Every element carries an integer encoding (base-p
digit expansion of its coefficients, low digit first), which fixes a total
order on the field. The order is used for vertex indexing and to make all
deterministic choices below reproducible:

* the modulus polynomial is the lexicographically smallest monic irreducible
  (coefficients compared low degree first);
* the distinguished generator nu is the smallest primitive element in
  encoding order.

Towers are represented literally as F_p -> F_{p^r} -> F_{(p^r)^n}; there is
no flattening shortcut, so the Frobenius x -> x^q and the norm relative to
F_q mean exactly what they should.

Characteristic 2 is rejected everywhere. Field sizes are capped by
config.MAX_FIELD_SIZE.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .config import MAX_FIELD_SIZE


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# polynomials over Z/p, coefficient lists low degree first
# ---------------------------------------------------------------------------

def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(p: int, a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pdivmod(p: int, a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    # b must be nonzero; works for any leading coefficient
    rem = list(a)
    _ptrim(rem)
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    quot = [0] * max(len(rem) - db, 0)
    while len(rem) - 1 >= db and rem:
        shift = len(rem) - 1 - db
        c = rem[-1] * inv_lead % p
        quot[shift] = c
        for i, bi in enumerate(b):
            rem[shift + i] = (rem[shift + i] - c * bi) % p
        _ptrim(rem)
    return _ptrim(quot), rem


def _p_is_irreducible(p: int, poly: Sequence[int]) -> bool:
    """Trial division by every monic polynomial of degree at most deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            divisor = list(tail) + [1]
            _, rem = _pdivmod(p, poly, divisor)
            if not rem:
                return False
    return True


def _first_irreducible_mod_p(p: int, r: int) -> tuple[int, ...]:
    for tail in itertools.product(range(p), repeat=r):
        poly = list(tail) + [1]
        if _p_is_irreducible(p, poly):
            return tuple(poly)
    raise AssertionError(f"no monic irreducible of degree {r} over F_{p}")


# ---------------------------------------------------------------------------
# base field F_q = F_{p^r}
# ---------------------------------------------------------------------------

class FqElement:
    """Element of F_{p^r} in canonical (fully reduced) form.

    Equality is coefficient-wise; elements hash, so they can key dicts and
    populate sets.
    """

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: "FieldCtx", coeffs: tuple[int, ...]):
        self.ctx = ctx
        self.coeffs = coeffs

    @property
    def encoding(self) -> int:
        e = 0
        for c in reversed(self.coeffs):
            e = e * self.ctx.p + c
        return e

    def literal(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other: "FqElement") -> "FqElement":
        return self.ctx.add(self, other)

    def __sub__(self, other: "FqElement") -> "FqElement":
        return self.ctx.sub(self, other)

    def __mul__(self, other: "FqElement") -> "FqElement":
        return self.ctx.mul(self, other)

    def __neg__(self) -> "FqElement":
        return self.ctx.neg(self)

    def __pow__(self, e: int) -> "FqElement":
        return self.ctx.pow(self, e)

    def inverse(self) -> "FqElement":
        return self.ctx.inv(self)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FqElement)
            and self.ctx.p == other.ctx.p
            and self.ctx.r == other.ctx.r
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.ctx.p, self.ctx.r, self.coeffs))

    def __repr__(self) -> str:
        return f"Fq({self.ctx.q};{self.literal()})"


class FieldCtx:
    """Arithmetic context for F_q with q = p^r.

    Immutable after construction; all operations are pure, so a context can
    be shared freely across threads.
    """

    def __init__(self, p: int, r: int, modulus: Optional[tuple[int, ...]]):
        self.p = p
        self.r = r
        self.q = p ** r
        # monic, degree r, low coefficient first; None in the prime case
        self.modulus = modulus
        self.nu: FqElement = self._find_primitive()
        self._elements: Optional[list[FqElement]] = None

    # -- construction helpers ------------------------------------------------

    def zero(self) -> FqElement:
        return FqElement(self, (0,) * self.r)

    def one(self) -> FqElement:
        return FqElement(self, (1,) + (0,) * (self.r - 1))

    def from_int(self, n: int) -> FqElement:
        """The image of the integer n under Z -> F_q (constant polynomial)."""
        return FqElement(self, (n % self.p,) + (0,) * (self.r - 1))

    def from_coeffs(self, coeffs: Iterable[int]) -> FqElement:
        cs = tuple(c % self.p for c in coeffs)
        if len(cs) != self.r:
            raise ValueError(f"expected {self.r} coefficients, got {len(cs)}")
        return FqElement(self, cs)

    def decode(self, e: int) -> FqElement:
        if not 0 <= e < self.q:
            raise ValueError(f"encoding {e} out of range for F_{self.q}")
        cs = []
        for _ in range(self.r):
            cs.append(e % self.p)
            e //= self.p
        return FqElement(self, tuple(cs))

    def elements(self) -> list[FqElement]:
        """All field elements in encoding order (cached)."""
        if self._elements is None:
            self._elements = [self.decode(e) for e in range(self.q)]
        return self._elements

    # -- arithmetic ------------------------------------------------------------

    def add(self, a: FqElement, b: FqElement) -> FqElement:
        p = self.p
        return FqElement(self, tuple((x + y) % p for x, y in zip(a.coeffs, b.coeffs)))

    def sub(self, a: FqElement, b: FqElement) -> FqElement:
        p = self.p
        return FqElement(self, tuple((x - y) % p for x, y in zip(a.coeffs, b.coeffs)))

    def neg(self, a: FqElement) -> FqElement:
        p = self.p
        return FqElement(self, tuple((-x) % p for x in a.coeffs))

    def mul(self, a: FqElement, b: FqElement) -> FqElement:
        if self.r == 1:
            return FqElement(self, (a.coeffs[0] * b.coeffs[0] % self.p,))
        prod = _pmul(self.p, a.coeffs, b.coeffs)
        _, rem = _pdivmod(self.p, prod, self.modulus)
        rem += [0] * (self.r - len(rem))
        return FqElement(self, tuple(rem))

    def pow(self, a: FqElement, e: int) -> FqElement:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one()
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: FqElement) -> FqElement:
        if a.is_zero():
            raise ZeroDivisionError("inversion of zero")
        return self.pow(a, self.q - 2)

    def is_square(self, a: FqElement) -> bool:
        """Euler criterion; zero counts as a square."""
        if a.is_zero():
            return True
        return self.pow(a, (self.q - 1) // 2) == self.one()

    # -- deterministic generator ----------------------------------------------

    def _find_primitive(self) -> FqElement:
        order = self.q - 1
        checks = [order // ell for ell in _prime_factors(order)]
        for e in range(1, self.q):
            cand = self.decode(e)
            if all(self.pow(cand, c) != self.one() for c in checks):
                return cand
        raise AssertionError("multiplicative group has no generator?")

    # -- misc -------------------------------------------------------------------

    def descriptor(self) -> dict:
        return {
            "p": self.p,
            "r": self.r,
            "modulus_coeffs": list(self.modulus) if self.modulus else None,
        }

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldCtx) and (self.p, self.r) == (other.p, other.r)

    def __hash__(self) -> int:
        return hash((self.p, self.r))

    def __repr__(self) -> str:
        return f"FieldCtx(q={self.q})"


@lru_cache(maxsize=None)
def build_field(p: int, r: int = 1) -> FieldCtx:
    """Deterministic context for F_{p^r}.

    The modulus is the lexicographically smallest monic irreducible of
    degree r over F_p and nu the smallest primitive element in encoding
    order, so repeated builds agree bit for bit across runs and machines.
    """
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if p == 2:
        raise ValueError("characteristic 2 is not supported")
    if r < 1:
        raise ValueError("extension degree must be at least 1")
    if p ** r > MAX_FIELD_SIZE:
        raise ValueError(f"field size {p ** r} exceeds cap {MAX_FIELD_SIZE}")
    modulus = None if r == 1 else _first_irreducible_mod_p(p, r)
    return FieldCtx(p, r, modulus)


@lru_cache(maxsize=None)
def field_from_order(q: int) -> FieldCtx:
    """F_q for a prime power q, factoring q = p^r."""
    if q < 3:
        raise ValueError(f"q = {q} is not an odd prime power")
    p = min(_prime_factors(q))
    r = 0
    m = q
    while m % p == 0:
        m //= p
        r += 1
    if m != 1:
        raise ValueError(f"q = {q} is not a prime power")
    return build_field(p, r)


# ---------------------------------------------------------------------------
# extension F_{q^n} over F_q
# ---------------------------------------------------------------------------

class ExtElement:
    """Element of F_{q^n}: n base-field coefficients, low first, canonical."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: "ExtCtx", coeffs: tuple[FqElement, ...]):
        self.ctx = ctx
        self.coeffs = coeffs

    @property
    def encoding(self) -> int:
        q = self.ctx.base.q
        e = 0
        for c in reversed(self.coeffs):
            e = e * q + c.encoding
        return e

    def literal(self) -> str:
        return ",".join(str(d) for c in self.coeffs for d in c.coeffs)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __add__(self, other: "ExtElement") -> "ExtElement":
        return self.ctx.add(self, other)

    def __sub__(self, other: "ExtElement") -> "ExtElement":
        return self.ctx.sub(self, other)

    def __mul__(self, other: "ExtElement") -> "ExtElement":
        return self.ctx.mul(self, other)

    def __neg__(self) -> "ExtElement":
        return self.ctx.neg(self)

    def __pow__(self, e: int) -> "ExtElement":
        return self.ctx.pow(self, e)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExtElement)
            and self.ctx.signature() == other.ctx.signature()
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.ctx.signature(), self.coeffs))

    def __repr__(self) -> str:
        return f"Ext({self.ctx.base.q}^{self.ctx.n};{self.literal()})"


class ExtCtx:
    """Context for F_{q^n} over a base FieldCtx, n >= 2."""

    def __init__(self, base: FieldCtx, n: int, modulus: tuple[FqElement, ...]):
        self.base = base
        self.n = n
        self.order = base.q ** n
        self.modulus = modulus  # n+1 base-field coefficients, monic, low first
        self._norm_enc: Optional[np.ndarray] = None

    def signature(self) -> tuple[int, int, int]:
        return (self.base.p, self.base.r, self.n)

    def zero(self) -> ExtElement:
        z = self.base.zero()
        return ExtElement(self, (z,) * self.n)

    def one(self) -> ExtElement:
        return ExtElement(self, (self.base.one(),) + (self.base.zero(),) * (self.n - 1))

    def embed(self, c: FqElement) -> ExtElement:
        """The image of a base-field element under F_q -> F_{q^n}."""
        return ExtElement(self, (c,) + (self.base.zero(),) * (self.n - 1))

    def from_coeffs(self, coeffs: Sequence[FqElement]) -> ExtElement:
        if len(coeffs) != self.n:
            raise ValueError(f"expected {self.n} coefficients, got {len(coeffs)}")
        return ExtElement(self, tuple(coeffs))

    def decode(self, e: int) -> ExtElement:
        if not 0 <= e < self.order:
            raise ValueError(f"encoding {e} out of range for F_{self.order}")
        q = self.base.q
        cs = []
        for _ in range(self.n):
            cs.append(self.base.decode(e % q))
            e //= q
        return ExtElement(self, tuple(cs))

    def add(self, a: ExtElement, b: ExtElement) -> ExtElement:
        return ExtElement(self, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    def sub(self, a: ExtElement, b: ExtElement) -> ExtElement:
        return ExtElement(self, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def neg(self, a: ExtElement) -> ExtElement:
        return ExtElement(self, tuple(-x for x in a.coeffs))

    def mul(self, a: ExtElement, b: ExtElement) -> ExtElement:
        base = self.base
        zero = base.zero()
        prod = [zero] * (2 * self.n - 1)
        for i, ai in enumerate(a.coeffs):
            if ai.is_zero():
                continue
            for j, bj in enumerate(b.coeffs):
                prod[i + j] = prod[i + j] + ai * bj
        # reduce by the monic modulus
        for k in range(len(prod) - 1, self.n - 1, -1):
            c = prod[k]
            if c.is_zero():
                continue
            for i in range(self.n):
                prod[k - self.n + i] = prod[k - self.n + i] - c * self.modulus[i]
        return ExtElement(self, tuple(prod[: self.n]))

    def pow(self, a: ExtElement, e: int) -> ExtElement:
        if e < 0:
            raise ValueError("negative exponents not supported in F_{q^n}")
        result = self.one()
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    # -- Frobenius and norm -----------------------------------------------------

    def frobenius(self, x: ExtElement) -> ExtElement:
        """The automorphism x -> x^q generating Gal(F_{q^n}/F_q)."""
        return self.pow(x, self.base.q)

    def norm(self, x: ExtElement) -> FqElement:
        """Product of the Frobenius conjugates of x; norm of zero is zero.

        Lands in F_q: for x != 0 it equals x^((q^n-1)/(q-1)), is
        multiplicative, and takes every value of F_q* equally often.
        """
        acc = x
        prod = x
        for _ in range(self.n - 1):
            acc = self.frobenius(acc)
            prod = self.mul(prod, acc)
        if any(not c.is_zero() for c in prod.coeffs[1:]):
            raise AssertionError("norm left the base field; modulus corrupt?")
        return prod.coeffs[0]

    def norm_enc_table(self) -> np.ndarray:
        """Base-field encoding of the norm, indexed by element encoding."""
        if self._norm_enc is None:
            tab = np.empty(self.order, dtype=np.int32)
            for e in range(self.order):
                tab[e] = self.norm(self.decode(e)).encoding
            self._norm_enc = tab
        return self._norm_enc

    def descriptor(self) -> dict:
        d = self.base.descriptor()
        d["n"] = self.n
        d["ext_modulus_coeffs"] = [list(c.coeffs) for c in self.modulus]
        return d

    def __repr__(self) -> str:
        return f"ExtCtx({self.base.q}^{self.n})"


def _fq_poly_divmod(base: FieldCtx, a: list[FqElement], b: list[FqElement]):
    rem = list(a)
    while rem and rem[-1].is_zero():
        rem.pop()
    db = len(b) - 1
    inv_lead = base.inv(b[-1])
    while rem and len(rem) - 1 >= db:
        shift = len(rem) - 1 - db
        c = rem[-1] * inv_lead
        for i, bi in enumerate(b):
            rem[shift + i] = rem[shift + i] - c * bi
        while rem and rem[-1].is_zero():
            rem.pop()
    return rem  # only the remainder is needed


def _fq_is_irreducible(base: FieldCtx, poly: list[FqElement]) -> bool:
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for tail_enc in itertools.product(range(base.q), repeat=d):
            divisor = [base.decode(e) for e in tail_enc] + [base.one()]
            if not _fq_poly_divmod(base, poly, divisor):
                return False
    return True


@lru_cache(maxsize=None)
def build_ext(p: int, r: int, n: int) -> ExtCtx:
    """Deterministic context for F_{q^n} over F_q, q = p^r, n >= 2.

    The modulus is the lexicographically smallest monic irreducible of
    degree n over F_q, coefficients compared low degree first in encoding
    order.
    """
    base = build_field(p, r)
    if n < 2:
        raise ValueError("extension degree n must be at least 2")
    if base.q ** n > MAX_FIELD_SIZE:
        raise ValueError(f"field size {base.q ** n} exceeds cap {MAX_FIELD_SIZE}")
    for tail_enc in itertools.product(range(base.q), repeat=n):
        poly = [base.decode(e) for e in tail_enc] + [base.one()]
        if _fq_is_irreducible(base, poly):
            return ExtCtx(base, n, tuple(poly))
    raise AssertionError(f"no monic irreducible of degree {n} over F_{base.q}")


def ext_from_order(q: int, n: int) -> ExtCtx:
    base = field_from_order(q)
    return build_ext(base.p, base.r, n)


# ---------------------------------------------------------------------------
# element literals
# ---------------------------------------------------------------------------

def parse_fq_literal(ctx: FieldCtx, text: str) -> FqElement:
    """Parse 'c0,c1,...' (low coefficient first); a bare integer also works."""
    parts = [int(tok) for tok in str(text).split(",")]
    if len(parts) == 1:
        return ctx.from_int(parts[0])
    return ctx.from_coeffs(parts)


def parse_ext_literal(ext: ExtCtx, text: str) -> ExtElement:
    digits = [int(tok) for tok in str(text).split(",")]
    r, n = ext.base.r, ext.n
    if len(digits) == 1:
        # single integer: read as an encoding-style constant in the base field
        return ext.embed(ext.base.from_int(digits[0]))
    if len(digits) != r * n:
        raise ValueError(f"expected {r * n} digits, got {len(digits)}")
    coeffs = [ext.base.from_coeffs(digits[i * r:(i + 1) * r]) for i in range(n)]
    return ext.from_coeffs(coeffs)


# ---------------------------------------------------------------------------
# vectorized arithmetic on integer encodings
#
# Encodings of F_{p^r} elements, of vectors in F_q^d, and of F_{q^n} elements
# are all base-p digit strings, and addition is digitwise mod p.  These
# helpers let graph builders work on whole numpy arrays of encodings.
# ---------------------------------------------------------------------------

def enc_digits(p: int, width: int, arr: np.ndarray) -> np.ndarray:
    arr = np.asarray(arr, dtype=np.int64)
    out = np.empty(arr.shape + (width,), dtype=np.int64)
    rest = arr
    for k in range(width):
        out[..., k] = rest % p
        rest = rest // p
    return out


def enc_from_digits(p: int, digits: np.ndarray) -> np.ndarray:
    powers = p ** np.arange(digits.shape[-1], dtype=np.int64)
    return (digits * powers).sum(axis=-1)


def enc_add(p: int, width: int, a, b) -> np.ndarray:
    da = enc_digits(p, width, a)
    db = enc_digits(p, width, b)
    return enc_from_digits(p, (da + db) % p)


def enc_sub(p: int, width: int, a, b) -> np.ndarray:
    da = enc_digits(p, width, a)
    db = enc_digits(p, width, b)
    return enc_from_digits(p, (da - db) % p)


def enc_neg(p: int, width: int, a) -> np.ndarray:
    da = enc_digits(p, width, a)
    return enc_from_digits(p, (-da) % p)
