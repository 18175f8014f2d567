"""Exact arithmetic in finite fields GF(p^e).

An element of GF(p^e) is stored as an integer code in [0, q): the element
with polynomial-basis coefficients (c0, c1, ..., c_{e-1}) has code
sum(c_i * p**i).  Codes are canonical, so two elements are equal exactly
when their codes are equal, and the code doubles as the serialization
format used by the JSON/CSV exports.

Multiplication, inversion and powers go through discrete-log tables over a
fixed generator of the multiplicative group; addition is digit-wise modulo
p (a plain XOR in characteristic 2).  Everything is exact integer
arithmetic -- there is no floating point anywhere.  For fields with
q <= 512, dense lookup tables are built as well, and both the scalar
operations and the numpy array operations use them.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

#: Hard cap on constructible field orders.  The greedy constructor touches
#: q^2 + 1 candidate planes, so this keeps every table and enumeration small.
MAX_FIELD_ORDER = 1 << 16

_DENSE_TABLE_MAX = 512


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _digits(n: int, p: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        out.append(n % p)
        n //= p
    return out


def _poly_divmod(num: Sequence[int], den: Sequence[int], p: int):
    """Quotient and remainder of little-endian coefficient lists over GF(p)."""
    num = [c % p for c in num]
    dd = len(den) - 1
    inv_lead = pow(den[-1], p - 2, p)
    quot = [0] * max(len(num) - dd, 1)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c == 0:
            continue
        f = (c * inv_lead) % p
        quot[i - dd] = f
        for j in range(dd + 1):
            num[i - dd + j] = (num[i - dd + j] - f * den[j]) % p
    rem = num[:dd] if dd > 0 else [0]
    return quot, rem


def _is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(modulus) - 1
    if deg == 1:
        return True
    if modulus[0] == 0:
        return False
    for d in range(1, deg // 2 + 1):
        for low in range(p**d):
            den = _digits(low, p, d) + [1]
            _, rem = _poly_divmod(modulus, den, p)
            if all(c == 0 for c in rem):
                return False
    return True


def _default_modulus(p: int, e: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree e, ordering lower coefficients
    by their integer encoding.  Deterministic, so unspecified moduli give
    bit-reproducible fields."""
    if e == 1:
        return (0, 1)
    for low in range(p**e):
        cand = tuple(_digits(low, p, e)) + (1,)
        if _is_irreducible(cand, p):
            return cand
    raise ArithmeticError(f"no irreducible polynomial of degree {e} over GF({p})")


class FieldSpec:
    """Immutable description of GF(p^e) together with its arithmetic tables.

    Scalar operations (``add``, ``mul``, ...) act on integer codes; the
    ``arr_*`` variants act element-wise on numpy integer arrays and
    broadcast like the underlying numpy operations.
    """

    def __init__(self, p: int, e: int = 1, modulus: Optional[Sequence[int]] = None):
        if not isinstance(p, int) or isinstance(p, bool) or not _is_prime(p):
            raise ValueError(f"characteristic must be a prime integer, got {p!r}")
        if not isinstance(e, int) or isinstance(e, bool) or e < 1:
            raise ValueError(f"extension degree must be an integer >= 1, got {e!r}")
        q = p**e
        if q > MAX_FIELD_ORDER:
            raise ValueError(f"field order {q} exceeds the configured cap {MAX_FIELD_ORDER}")
        if modulus is None:
            modulus = _default_modulus(p, e)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != e + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree e, given as e+1 coefficients")
            if e == 1:
                modulus = (0, 1)  # prime field: the modulus is ignored
            elif not _is_irreducible(modulus, p):
                raise ValueError(f"modulus {list(modulus)} is reducible over GF({p})")
        self.p = p
        self.e = e
        self.q = q
        self.modulus = tuple(modulus)
        self._ppow = tuple(p**i for i in range(e + 1))
        self._build_tables()
        self._zero = FieldElement(self, 0)
        self._one = FieldElement(self, 1)

    # -- construction of the tables -------------------------------------

    def _mul_poly(self, a: int, b: int) -> int:
        """Bootstrap multiplication: polynomial product reduced modulo the
        modulus.  Only used to build the log/exp tables."""
        p, e = self.p, self.e
        if e == 1:
            return (a * b) % p
        ca = _digits(a, p, e)
        cb = _digits(b, p, e)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        mod = self.modulus
        for i in range(2 * e - 2, e - 1, -1):
            c = prod[i] % p
            if c:
                for j in range(e):
                    prod[i - e + j] -= c * mod[j]
        return sum((prod[i] % p) * self._ppow[i] for i in range(e))

    def _pow_poly(self, a: int, n: int) -> int:
        r = 1
        while n:
            if n & 1:
                r = self._mul_poly(r, a)
            a = self._mul_poly(a, a)
            n >>= 1
        return r

    def _find_generator(self) -> int:
        m = self.q - 1
        fac = []
        t, f = m, 2
        while f * f <= t:
            if t % f == 0:
                fac.append(f)
                while t % f == 0:
                    t //= f
            f += 1
        if t > 1:
            fac.append(t)
        for g in range(2, self.q):
            if all(self._pow_poly(g, m // f) != 1 for f in fac):
                return g
        raise ArithmeticError("no multiplicative generator found")

    def _add_slow(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        if p == 2:
            return a ^ b
        if e == 1:
            return (a + b) % p
        out = 0
        for i in range(e):
            pw = self._ppow[i]
            out += ((a // pw % p) + (b // pw % p)) % p * pw
        return out

    def _neg_slow(self, a: int) -> int:
        p, e = self.p, self.e
        if p == 2:
            return a
        if e == 1:
            return (p - a) % p
        out = 0
        for i in range(e):
            pw = self._ppow[i]
            out += (p - (a // pw % p)) % p * pw
        return out

    def _mul_slow(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def _build_tables(self) -> None:
        q = self.q
        g = 1 if q == 2 else self._find_generator()
        exp = [0] * (q - 1)
        log = [0] * q
        cur = 1
        for i in range(q - 1):
            exp[i] = cur
            log[cur] = i
            cur = self._mul_poly(cur, g)
        if cur != 1:
            raise ArithmeticError("generator order check failed")
        self.generator = g
        self._exp = exp + exp  # doubled so scalar products need no reduction
        self._log = log
        self._exp_np = np.asarray(exp, dtype=np.int32)
        self._log_np = np.asarray(log, dtype=np.int32)
        if q <= _DENSE_TABLE_MAX:
            add = [0] * (q * q)
            mul = [0] * (q * q)
            for a in range(q):
                base = a * q
                for b in range(q):
                    add[base + b] = self._add_slow(a, b)
                    mul[base + b] = self._mul_slow(a, b)
            neg = [self._neg_slow(a) for a in range(q)]
            sub = [add[a * q + neg[b]] for a in range(q) for b in range(q)]
            inv = [0] + [exp[(q - 1 - log[a]) % (q - 1)] for a in range(1, q)]
            self._ADD, self._SUB, self._MUL = add, sub, mul
            self._NEG, self._INV = neg, inv
            self._ADD_NP = np.asarray(add, dtype=np.int32).reshape(q, q)
            self._SUB_NP = np.asarray(sub, dtype=np.int32).reshape(q, q)
            self._MUL_NP = np.asarray(mul, dtype=np.int32).reshape(q, q)
            self._NEG_NP = np.asarray(neg, dtype=np.int32)
            self._INV_NP = np.asarray(inv, dtype=np.int32)
            self._dense = True
        else:
            self._dense = False

    # -- scalar operations on codes --------------------------------------

    def add(self, a: int, b: int) -> int:
        if self._dense:
            return self._ADD[a * self.q + b]
        return self._add_slow(a, b)

    def sub(self, a: int, b: int) -> int:
        if self._dense:
            return self._SUB[a * self.q + b]
        return self._add_slow(a, self._neg_slow(b))

    def neg(self, a: int) -> int:
        if self._dense:
            return self._NEG[a]
        return self._neg_slow(a)

    def mul(self, a: int, b: int) -> int:
        if self._dense:
            return self._MUL[a * self.q + b]
        return self._mul_slow(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        if self._dense:
            return self._INV[a]
        q = self.q
        return self._exp[(q - 1 - self._log[a]) % (q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n == 0:
                return 1
            if n < 0:
                raise ZeroDivisionError("0 has no multiplicative inverse")
            return 0
        m = self.q - 1
        return self._exp[(self._log[a] * n) % m]

    # -- vectorized operations on numpy arrays of codes ------------------

    def arr_add(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int32)
        b = np.asarray(b, dtype=np.int32)
        if self._dense:
            return self._ADD_NP[a, b]
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.e == 1:
            return (a + b) % self.p
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int32)
        for i in range(self.e):
            pw = self._ppow[i]
            out += (a // pw % self.p + b // pw % self.p) % self.p * pw
        return out

    def arr_neg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int32)
        if self._dense:
            return self._NEG_NP[a]
        if self.p == 2:
            return a.copy()
        if self.e == 1:
            return (self.p - a) % self.p
        out = np.zeros(a.shape, dtype=np.int32)
        for i in range(self.e):
            pw = self._ppow[i]
            out += (self.p - a // pw % self.p) % self.p * pw
        return out

    def arr_sub(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int32)
        b = np.asarray(b, dtype=np.int32)
        if self._dense:
            return self._SUB_NP[a, b]
        return self.arr_add(a, self.arr_neg(b))

    def arr_mul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int32)
        b = np.asarray(b, dtype=np.int32)
        if self._dense:
            return self._MUL_NP[a, b]
        mask = (a == 0) | (b == 0)
        prod = self._exp_np[(self._log_np[a] + self._log_np[b]) % (self.q - 1)]
        return np.where(mask, 0, prod).astype(np.int32)

    def arr_inv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int32)
        if (a == 0).any():
            raise ZeroDivisionError("0 has no multiplicative inverse")
        if self._dense:
            return self._INV_NP[a]
        return self._exp_np[(self.q - 1 - self._log_np[a]) % (self.q - 1)]

    # -- element construction and inspection ------------------------------

    def element(self, x) -> "FieldElement":
        """Wrap an integer code (or pass a FieldElement through)."""
        if isinstance(x, FieldElement):
            if x.field != self:
                raise ValueError("element belongs to a different field")
            return x
        return FieldElement(self, x)

    def from_coeffs(self, coeffs: Iterable[int]) -> "FieldElement":
        coeffs = list(coeffs)
        if len(coeffs) > self.e:
            raise ValueError(f"at most {self.e} coefficients expected")
        code = sum((c % self.p) * self._ppow[i] for i, c in enumerate(coeffs))
        return FieldElement(self, code)

    def coeffs(self, code: int) -> tuple[int, ...]:
        return tuple(_digits(code, self.p, self.e))

    @property
    def zero(self) -> "FieldElement":
        return self._zero

    @property
    def one(self) -> "FieldElement":
        return self._one

    def elements(self):
        return (FieldElement(self, c) for c in range(self.q))

    def poly_str(self, code: int) -> str:
        if self.e == 1:
            return str(code)
        terms = []
        for i in reversed(range(self.e)):
            c = code // self._ppow[i] % self.p
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                coeff = "" if c == 1 else str(c)
                power = "a" if i == 1 else f"a^{i}"
                terms.append(coeff + power)
        return "+".join(terms) if terms else "0"

    # -- value semantics ---------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.modulus))

    def __repr__(self) -> str:
        if self.e == 1:
            return f"GF({self.q})"
        mod = "+".join(
            ("x^%d" % i if i > 1 else "x") if c == 1 else f"{c}" + ("" if i == 0 else ("x" if i == 1 else f"x^{i}"))
            for i, c in reversed(list(enumerate(self.modulus)))
            if c
        )
        return f"GF({self.q}; {mod})"


class FieldElement:
    """A single field element: an owner field plus a canonical integer code.

    Arithmetic operators accept either another element of the same field or
    a plain integer code.
    """

    __slots__ = ("field", "code")

    def __init__(self, field: FieldSpec, code: int):
        code = int(code)
        if not 0 <= code < field.q:
            raise ValueError(f"code {code} out of range for {field!r}")
        self.field = field
        self.code = code

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("operands belong to different fields")
            return other.code
        if isinstance(other, int) and not isinstance(other, bool):
            if not 0 <= other < self.field.q:
                raise ValueError(f"code {other} out of range for {self.field!r}")
            return other
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.code, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(b, self.code))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.div(self.code, b))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.div(b, self.code))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.code, n))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int) and not isinstance(other, bool):
            return self.code == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.code))

    def __int__(self) -> int:
        return self.code

    def __bool__(self) -> bool:
        return self.code != 0

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.code)

    def __repr__(self) -> str:
        return f"F{self.field.q}({self.field.poly_str(self.code)})"


def field_create(p: int, e: int = 1, modulus: Optional[Sequence[int]] = None) -> FieldSpec:
    """Create a validated GF(p^e).

    ``modulus`` is given as e+1 little-endian coefficients and must be monic
    and irreducible; when omitted, the deterministic default is used.
    """
    return FieldSpec(p, e, modulus)


_ARITH_OPS = ("add", "sub", "mul", "div")


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Apply one of add/sub/mul/div to two elements of the same field."""
    if not isinstance(a, FieldElement) or not isinstance(b, FieldElement):
        raise TypeError("field_arith expects FieldElement operands")
    if a.field != b.field:
        raise ValueError("operands belong to different fields")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}; expected one of {_ARITH_OPS}")
