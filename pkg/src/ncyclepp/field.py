"""Arithmetic in GF(p^n) with deterministic construction.

Elements are stored as integer indices in [0, p^n): the base-p digits of the
index, least significant first, are the coordinates in the polynomial basis
1, x, ..., x^(n-1) modulo a monic irreducible polynomial over GF(p).

Construction is deterministic:

* the modulus, when not supplied, is the first monic irreducible degree-n
  polynomial in increasing order of the integer whose base-p digits (least
  significant digit = constant term) are the non-leading coefficients;
* the multiplicative generator is the first element, scanning indices
  1, 2, 3, ..., whose order is exactly p^n - 1.

Multiplication, powering and inversion run on precomputed discrete-log
tables, so the whole field is materialized at construction time.  A size cap
(default 2^24 elements) keeps that tractable.
"""
from __future__ import annotations

import math
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    BadParams,
    CapExceeded,
    CtxMismatch,
    DivisionByZero,
    InvalidSubfield,
    NotDivisor,
    NotIrreducible,
    NotPrime,
)

DEFAULT_CAP = 1 << 24

# columns processed per block when applying a linear map to the exp table
_BLOCK = 1 << 18


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


def _factorize(m: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization by trial division, as ((prime, multiplicity), ...)."""
    out = []
    f = 2
    while f * f <= m:
        if m % f == 0:
            e = 0
            while m % f == 0:
                m //= f
                e += 1
            out.append((f, e))
        f += 1 if f == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


# ---------------------------------------------------------------------------
# dense polynomials over GF(p): lists of ints, constant term first, trimmed
# ---------------------------------------------------------------------------

def _ptrim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    if not a:
        a.append(0)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                r[i + j] = (r[i + j] + x * y) % p
    return _ptrim(r)


def _pmod(a: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    # mod must be monic
    a = list(a)
    dm = len(mod) - 1
    while len(a) - 1 >= dm and a != [0]:
        lead = a[-1]
        if lead:
            off = len(a) - 1 - dm
            for i, c in enumerate(mod):
                a[off + i] = (a[off + i] - lead * c) % p
        a.pop()
        _ptrim(a)
    return _ptrim(a)


def _pmulmod(a, b, mod, p) -> list[int]:
    return _pmod(_pmul(a, b, p), mod, p)


def _ppowmod(base, e: int, mod, p) -> list[int]:
    r = [1]
    b = _pmod(list(base), mod, p)
    while e:
        if e & 1:
            r = _pmulmod(r, b, mod, p)
        b = _pmulmod(b, b, mod, p)
        e >>= 1
    return r


def _pgcd(a, b, p) -> list[int]:
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b != [0]:
        # make b monic so _pmod applies
        inv = pow(b[-1], p - 2, p)
        bm = [(c * inv) % p for c in b]
        a, b = bm, _pmod(a, bm, p)
    return a


def _is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Irreducibility of a monic polynomial over GF(p).

    Uses the gcd test: f of degree n is irreducible iff x^(p^n) == x (mod f)
    and gcd(x^(p^(n/r)) - x, f) is constant for every prime r | n.
    """
    n = len(coeffs) - 1
    if n == 1:
        return True
    x = [0, 1]
    t = x
    powers = {}
    for i in range(1, n + 1):
        t = _ppowmod(t, p, coeffs, p)
        powers[i] = t
    if powers[n] != x:
        return False
    for r, _ in _factorize(n):
        u = list(powers[n // r])
        while len(u) < 2:
            u.append(0)
        u[1] = (u[1] - 1) % p  # subtract x
        g = _pgcd(coeffs, _ptrim(u), p)
        if len(g) > 1:
            return False
    return True


def _first_irreducible(p: int, n: int) -> list[int]:
    """First monic irreducible of degree n, low coefficients ordered as the
    base-p digits of an increasing counter (constant term least significant)."""
    for c in range(p ** n):
        coeffs = []
        v = c
        for _ in range(n):
            coeffs.append(v % p)
            v //= p
        coeffs.append(1)
        if _is_irreducible(coeffs, p):
            return coeffs
    raise NotIrreducible(f"no irreducible of degree {n} over GF({p})")  # pragma: no cover


class FieldCtx:
    """Immutable description of GF(p^n) plus precomputed tables.

    Do not instantiate directly; use make_field().  Attribute caches are
    filled lazily but never change an observable value.
    """

    def __init__(self, p: int, n: int, modulus: list[int], cap: int):
        self.p = p
        self.n = n
        self.order = p ** n
        self.modulus = tuple(modulus)
        self.cap = cap
        self.order_factorization = _factorize(self.order - 1)
        self.key = (p, n, self.modulus)
        self._p_pows = [p ** i for i in range(n)]
        self._gen_idx = self._find_generator()
        self._build_tables()
        self._exp_list: Optional[list[int]] = None
        self._log_list: Optional[list[int]] = None
        self._subfield_cache: dict[int, np.ndarray] = {}
        self._tr1: Optional[np.ndarray] = None

    # -- construction helpers ------------------------------------------------

    def _decode(self, idx: int) -> list[int]:
        out = []
        for _ in range(self.n):
            out.append(idx % self.p)
            idx //= self.p
        return out

    def _encode(self, coords: Sequence[int]) -> int:
        v = 0
        for c, pw in zip(coords, self._p_pows):
            v += (c % self.p) * pw
        return v

    def _cmul(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        r = _pmulmod(list(a), list(b), list(self.modulus), self.p)
        return r + [0] * (self.n - len(r))

    def _cpow(self, a: Sequence[int], e: int) -> list[int]:
        r = [1] + [0] * (self.n - 1)
        b = list(a)
        while e:
            if e & 1:
                r = self._cmul(r, b)
            b = self._cmul(b, b)
            e >>= 1
        return r

    def _find_generator(self) -> int:
        q1 = self.order - 1
        if q1 == 1:
            return 1
        checks = [q1 // r for r, _ in self.order_factorization]
        one = [1] + [0] * (self.n - 1)
        for idx in range(1, self.order):
            a = self._decode(idx)
            if all(self._cpow(a, e) != one for e in checks):
                return idx
        raise NcycleInternal("no generator found")  # pragma: no cover

    def _mul_matrix(self, coords: Sequence[int]) -> np.ndarray:
        """n x n matrix over GF(p) of multiplication by the given element."""
        cols = []
        cur = list(coords)
        for _ in range(self.n):
            cols.append(cur)
            cur = self._cmul(cur, [0, 1] + [0] * (self.n - 2)) if self.n > 1 else [0]
        return np.array(cols, dtype=np.int64).T

    def _decode_vec(self, idx: np.ndarray) -> np.ndarray:
        digs = np.empty((self.n, idx.shape[0]), dtype=np.int64)
        v = idx.astype(np.int64, copy=True)
        for i in range(self.n):
            digs[i] = v % self.p
            v //= self.p
        return digs

    def _encode_vec(self, digs: np.ndarray) -> np.ndarray:
        pw = np.array(self._p_pows, dtype=np.int64)
        return pw @ digs

    def _build_tables(self) -> None:
        q1 = self.order - 1
        if q1 < 1:
            raise BadParams("field must have at least 2 elements")
        exp = np.empty(q1, dtype=np.int64)
        exp[0] = 1
        g = self._decode(self._gen_idx)
        filled = 1
        while filled < q1:
            take = min(filled, q1 - filled)
            mat = self._mul_matrix(self._cpow(g, filled))
            for start in range(0, take, _BLOCK):
                stop = min(start + _BLOCK, take)
                digs = self._decode_vec(exp[start:stop])
                exp[filled + start: filled + stop] = self._encode_vec((mat @ digs) % self.p)
            filled += take
        log = np.full(self.order, -1, dtype=np.int64)
        log[exp] = np.arange(q1, dtype=np.int64)
        if int(np.count_nonzero(log == -1)) != 1:  # only the zero element has no log
            raise NcycleInternal("generator order check failed")  # pragma: no cover
        self._exp = exp
        self._log = log

    # -- scalar index arithmetic ----------------------------------------------

    def _lists(self) -> tuple[list[int], list[int]]:
        if self._exp_list is None:
            self._exp_list = self._exp.tolist()
            self._log_list = self._log.tolist()
        return self._exp_list, self._log_list

    def add_idx(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.n == 1:
            return (a + b) % self.p
        out, pw = 0, 1
        for _ in range(self.n):
            out += ((a + b) % self.p) * pw
            a //= self.p
            b //= self.p
            pw *= self.p
        return out

    def neg_idx(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.n == 1:
            return (-a) % self.p
        out, pw = 0, 1
        for _ in range(self.n):
            out += ((-a) % self.p) * pw
            a //= self.p
            pw *= self.p
        return out

    def sub_idx(self, a: int, b: int) -> int:
        return self.add_idx(a, self.neg_idx(b))

    def mul_idx(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        el, ll = self._lists()
        return el[(ll[a] + ll[b]) % (self.order - 1)]

    def inv_idx(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        el, ll = self._lists()
        return el[(-ll[a]) % (self.order - 1)]

    def pow_idx(self, a: int, e: int) -> int:
        """a^e with pow(0, 0) = 1; negative e inverts a nonzero base."""
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise DivisionByZero("negative power of zero")
            return 0
        el, ll = self._lists()
        q1 = self.order - 1
        return el[(ll[a] * (e % q1)) % q1]

    def frob_idx(self, a: int, sub_degree: int, i: int = 1) -> int:
        if self.n % sub_degree != 0:
            raise InvalidSubfield(f"{sub_degree} does not divide {self.n}")
        return self.pow_idx(a, self.p ** (sub_degree * i))

    def trace_idx(self, a: int, sub_degree: int) -> int:
        if self.n % sub_degree != 0:
            raise InvalidSubfield(f"{sub_degree} does not divide {self.n}")
        m = self.n // sub_degree
        acc, t = a, a
        for _ in range(m - 1):
            t = self.frob_idx(t, sub_degree, 1)
            acc = self.add_idx(acc, t)
        return acc

    # -- vector index arithmetic (numpy int64 arrays) --------------------------

    def varange(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.n == 1:
            return (a + b) % self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        pw = 1
        for i in range(self.n):
            out += ((a // pw + b // pw) % self.p) * pw
            pw *= self.p
        return out

    def vneg(self, a: np.ndarray) -> np.ndarray:
        if self.p == 2:
            return a.copy() if isinstance(a, np.ndarray) else a
        if self.n == 1:
            return (-a) % self.p
        out = np.zeros(np.shape(a), dtype=np.int64)
        pw = 1
        for i in range(self.n):
            out += ((-(a // pw)) % self.p) * pw
            pw *= self.p
        return out

    def vsub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        nz = (a != 0) & (b != 0)
        q1 = self.order - 1
        la = self._log[np.broadcast_to(a, out.shape)[nz]]
        lb = self._log[np.broadcast_to(b, out.shape)[nz]]
        out[nz] = self._exp[(la + lb) % q1]
        return out

    def vpow(self, a: np.ndarray, e: int) -> np.ndarray:
        """Elementwise a^e; e == 0 gives all ones (pow(0,0) = 1)."""
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones(a.shape, dtype=np.int64)
        if e < 0:
            raise DivisionByZero("negative vector exponent")
        q1 = self.order - 1
        er = e % q1
        out = np.zeros(a.shape, dtype=np.int64)
        nz = a != 0
        out[nz] = self._exp[(self._log[a[nz]] * er) % q1]
        return out

    def vfrob(self, a: np.ndarray, sub_degree: int, i: int = 1) -> np.ndarray:
        if self.n % sub_degree != 0:
            raise InvalidSubfield(f"{sub_degree} does not divide {self.n}")
        return self.vpow(a, self.p ** (sub_degree * i))

    def vtrace(self, a: np.ndarray, sub_degree: int) -> np.ndarray:
        if self.n % sub_degree != 0:
            raise InvalidSubfield(f"{sub_degree} does not divide {self.n}")
        m = self.n // sub_degree
        acc = np.asarray(a, dtype=np.int64).copy()
        t = a
        for _ in range(m - 1):
            t = self.vfrob(t, sub_degree, 1)
            acc = self.vadd(acc, t)
        return acc

    # -- cached structure ------------------------------------------------------

    def tr1_table(self) -> np.ndarray:
        """Absolute trace to GF(p), per element index, as small ints."""
        if self._tr1 is None:
            self._tr1 = self.vtrace(self.varange(), 1)
        return self._tr1

    def subfield_indices(self, sub_degree: int) -> np.ndarray:
        """Sorted indices of the GF(p^sub_degree) subfield (Frobenius fixed set)."""
        if sub_degree not in self._subfield_cache:
            if self.n % sub_degree != 0:
                raise InvalidSubfield(f"{sub_degree} does not divide {self.n}")
            allv = self.varange()
            mask = self.vfrob(allv, sub_degree, 1) == allv
            idxs = np.flatnonzero(mask).astype(np.int64)
            if idxs.shape[0] != self.p ** sub_degree:  # pragma: no cover
                raise InvalidSubfield("subfield size mismatch")
            self._subfield_cache[sub_degree] = idxs
        return self._subfield_cache[sub_degree]

    def mu_indices(self, ell: int) -> np.ndarray:
        """Indices of the order-ell subgroup, ordered by generator power."""
        q1 = self.order - 1
        if ell < 1 or q1 % ell != 0:
            raise NotDivisor(f"{ell} does not divide {q1}")
        step = q1 // ell
        return self._exp[np.arange(ell, dtype=np.int64) * step]

    # -- elements and literals --------------------------------------------------

    def element(self, i: int) -> "FieldElement":
        if not 0 <= i < self.order:
            raise BadParams(f"element index {i} out of range for order {self.order}")
        return FieldElement(self, int(i))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    @property
    def generator(self) -> "FieldElement":
        return FieldElement(self, self._gen_idx)

    def from_literal(self, text: str) -> "FieldElement":
        """Parse an element literal: a plain index or 'g^k'."""
        t = text.strip()
        if t.startswith("g^"):
            k = int(t[2:])
            q1 = self.order - 1
            return FieldElement(self, int(self._exp[k % q1]))
        if t == "g":
            return self.generator
        try:
            v = int(t)
        except ValueError:
            raise BadParams(f"bad element literal {text!r}") from None
        if not 0 <= v < self.order:
            raise BadParams(f"element literal {v} out of range [0, {self.order})")
        return FieldElement(self, v)

    def to_json_dict(self) -> dict:
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus)}

    def __repr__(self) -> str:
        return f"FieldCtx(GF({self.p}^{self.n}))"


class NcycleInternal(RuntimeError):
    """Internal consistency failure (should be unreachable)."""


class FieldElement:
    """An element of a FieldCtx, identified by its integer index.

    Supports +, -, *, /, unary -, ** and equality.  Mixing elements of
    contexts with different (p, n, modulus) raises CtxMismatch.
    """

    __slots__ = ("ctx", "i")

    def __init__(self, ctx: FieldCtx, i: int):
        self.ctx = ctx
        self.i = i

    def _peer(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.ctx.key != self.ctx.key:
                raise CtxMismatch(f"{self.ctx} vs {other.ctx}")
            return other.i
        if isinstance(other, int):
            # small rational integers embed via the prime subfield
            return other % self.ctx.p
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        j = self._peer(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.add_idx(self.i, j))

    __radd__ = __add__

    def __sub__(self, other):
        j = self._peer(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.sub_idx(self.i, j))

    def __rsub__(self, other):
        j = self._peer(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.sub_idx(j, self.i))

    def __mul__(self, other):
        j = self._peer(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.mul_idx(self.i, j))

    __rmul__ = __mul__

    def __truediv__(self, other):
        j = self._peer(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.mul_idx(self.i, self.ctx.inv_idx(j)))

    def __rtruediv__(self, other):
        j = self._peer(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.mul_idx(j, self.ctx.inv_idx(self.i)))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg_idx(self.i))

    def __pow__(self, e: int):
        if e < 0:
            return FieldElement(self.ctx, self.ctx.pow_idx(self.ctx.inv_idx(self.i), -e))
        return FieldElement(self.ctx, self.ctx.pow_idx(self.i, e))

    def inv(self) -> "FieldElement":
        return FieldElement(self.ctx, self.ctx.inv_idx(self.i))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx.key == other.ctx.key and self.i == other.i
        if isinstance(other, int):
            # ints compare through the prime-subfield embedding
            return self.i == other % self.ctx.p
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.key, self.i))

    def __bool__(self):
        return self.i != 0

    def __int__(self):
        return self.i

    def literal(self) -> str:
        return str(self.i)

    def __repr__(self):
        return f"F{self.ctx.order}({self.i})"


def make_field(p: int, n: int, modulus: Optional[Sequence[int]] = None,
               cap: Optional[int] = None) -> FieldCtx:
    """Construct GF(p^n).

    modulus, when given, is the full coefficient list of a monic irreducible
    degree-n polynomial over GF(p), constant term first.  When omitted the
    deterministic search described in the module docstring is used.
    """
    cap = DEFAULT_CAP if cap is None else cap
    if not isinstance(p, int) or not _is_prime(p):
        raise NotPrime(f"p = {p} is not prime")
    if not isinstance(n, int) or n < 1:
        raise BadParams(f"extension degree must be >= 1, got {n}")
    if p ** n > cap:
        raise CapExceeded(f"field size {p}^{n} exceeds cap {cap}")
    if modulus is None:
        coeffs = _first_irreducible(p, n)
    else:
        coeffs = [int(c) % p for c in modulus]
        if len(coeffs) != n + 1 or coeffs[-1] != 1:
            raise BadParams("modulus must be monic of degree n")
        if not _is_irreducible(coeffs, p):
            raise NotIrreducible(f"modulus {list(modulus)} is reducible over GF({p})")
    return FieldCtx(p, n, coeffs, cap)


# ---------------------------------------------------------------------------
# module-level operations on elements
# ---------------------------------------------------------------------------

def field_pow(a: FieldElement, e: int) -> FieldElement:
    """a^e for e >= 0, with pow(0, 0) = 1."""
    if e < 0:
        raise BadParams("exponent must be non-negative")
    return FieldElement(a.ctx, a.ctx.pow_idx(a.i, e))


def frobenius(a: FieldElement, sub_degree: int, i: int = 1) -> FieldElement:
    """a^(q^i) where q = p^sub_degree."""
    return FieldElement(a.ctx, a.ctx.frob_idx(a.i, sub_degree, i))


def trace(a: FieldElement, sub_degree: int) -> FieldElement:
    """Trace of a onto GF(p^sub_degree)."""
    return FieldElement(a.ctx, a.ctx.trace_idx(a.i, sub_degree))


def subfield_members(ctx: FieldCtx, sub_degree: int) -> set[FieldElement]:
    """The subfield GF(p^sub_degree) as a set of elements."""
    return {FieldElement(ctx, int(i)) for i in ctx.subfield_indices(sub_degree)}


def subgroup_mu(ctx: FieldCtx, ell: int) -> list[FieldElement]:
    """The multiplicative subgroup of order ell, as generator powers."""
    return [FieldElement(ctx, int(i)) for i in ctx.mu_indices(ell)]
