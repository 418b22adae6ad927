"""Sparse polynomials over a field context and materialized permutation maps.

Polynomials are canonical sparse sums c*x^e with strictly increasing
exponents and no zero coefficients.  Maps over the field are materialized as
full image tables (numpy int64 indices), so composition, inversion, iterated
application, and cycle analysis all reduce to array gathers.
"""
from __future__ import annotations

import ast
import operator
from dataclasses import dataclass
from math import lcm
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import BadParams, CapExceeded, CtxMismatch, NotPermutation
from .field import FieldCtx, FieldElement


# ---------------------------------------------------------------------------
# integer expressions (used for exponents given on the command line)
# ---------------------------------------------------------------------------

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.FloorDiv: operator.floordiv,
    ast.Mod: operator.mod,
    ast.Pow: operator.pow,
}


def eval_int_expr(text: str, variables: Mapping[str, int] | None = None) -> int:
    """Evaluate an integer expression like ``(q^2+q+1)*45``.

    Supports + - * // % ** and parentheses; ``^`` is accepted as a synonym
    for exponentiation.  Only names present in ``variables`` may appear.
    """
    env = dict(variables or {})
    src = text.replace("^", "**")

    def walk(node: ast.AST) -> int:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name):
            if node.id in env:
                return env[node.id]
            raise BadParams(f"unknown name {node.id!r} in expression {text!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -walk(node.operand)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](walk(node.left), walk(node.right))
        raise BadParams(f"unsupported syntax in expression {text!r}")

    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise BadParams(f"cannot parse expression {text!r}") from exc
    try:
        return walk(tree)
    except (ZeroDivisionError, ValueError) as exc:
        raise BadParams(f"cannot evaluate expression {text!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# sparse polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SparsePoly:
    """Canonical sparse polynomial: terms are (coefficient index, exponent)."""

    ctx: FieldCtx
    terms: tuple[tuple[int, int], ...]

    @staticmethod
    def make(ctx: FieldCtx, terms: Iterable[tuple[int, int]]) -> "SparsePoly":
        merged: dict[int, int] = {}
        for c, e in terms:
            c, e = int(c), int(e)
            if not 0 <= c < ctx.order:
                raise BadParams(f"coefficient index {c} out of range")
            if e < 0:
                raise BadParams(f"negative exponent {e}")
            merged[e] = ctx.add_idx(merged.get(e, 0), c)
        out = tuple((c, e) for e, c in sorted(merged.items()) if c != 0)
        return SparsePoly(ctx, out)

    @staticmethod
    def monomial(ctx: FieldCtx, e: int, coeff: int = 1) -> "SparsePoly":
        return SparsePoly.make(ctx, [(coeff, e)])

    @staticmethod
    def from_text(ctx: FieldCtx, text: str,
                  env: Mapping[str, int] | None = None) -> "SparsePoly":
        """Parse ``c*x^e + ...``; coefficients are element literals (ints or
        g^k), exponents are integer expressions over ``env``."""
        src = text.replace(" ", "")
        chunks: list[str] = []
        depth, start = 0, 0
        for pos, ch in enumerate(src):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch in "+-" and depth == 0 and pos > start:
                chunks.append(src[start:pos])
                start = pos if ch == "-" else pos + 1
        chunks.append(src[start:])
        terms: list[tuple[int, int]] = []
        for chunk in chunks:
            if not chunk:
                continue
            negate = chunk.startswith("-")
            if negate:
                chunk = chunk[1:]
            if not chunk:
                raise BadParams(f"dangling sign in {text!r}")
            if "*" in chunk:
                cpart, _, xpart = chunk.partition("*")
            elif chunk.startswith("x"):
                cpart, xpart = "1", chunk
            else:
                cpart, xpart = chunk, ""
            coeff = ctx.from_literal(cpart).i
            if negate:
                coeff = ctx.neg_idx(coeff)
            if xpart == "":
                exp = 0
            elif xpart == "x":
                exp = 1
            elif xpart.startswith("x^"):
                exp = eval_int_expr(xpart[2:], env)
            else:
                raise BadParams(f"bad term {chunk!r} in {text!r}")
            terms.append((coeff, exp))
        return SparsePoly.make(ctx, terms)

    def to_text(self) -> str:
        """Render as "c*x^e" terms joined by "+" (constants as bare "c")."""
        if not self.terms:
            return "0"
        return "+".join(str(c) if e == 0 else f"{c}*x^{e}"
                        for c, e in self.terms)

    def degree(self) -> int:
        return self.terms[-1][1] if self.terms else 0

    def eval_idx(self, i: int) -> int:
        acc = 0
        for c, e in self.terms:
            acc = self.ctx.add_idx(acc, self.ctx.mul_idx(c, self.ctx.pow_idx(i, e)))
        return acc

    def eval_vec(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        acc = np.zeros(xs.shape, dtype=np.int64)
        for c, e in self.terms:
            t = self.ctx.vpow(xs, e)
            if c != 1:
                t = self.ctx.vmul(np.int64(c), t)
            acc = self.ctx.vadd(acc, t)
        return acc

    def __call__(self, a: FieldElement) -> FieldElement:
        if a.ctx.key != self.ctx.key:
            raise CtxMismatch("element from a different field")
        return self.ctx.element(self.eval_idx(a.i))

    def coefficient_conjugate(self, sub_degree: int, i: int = 1) -> "SparsePoly":
        """Apply x -> x^(q^i), q = p^sub_degree, to every coefficient."""
        return SparsePoly(self.ctx, tuple(
            (self.ctx.frob_idx(c, sub_degree, i), e) for c, e in self.terms))

    def is_additive(self) -> bool:
        """True when every exponent is a power of the characteristic, which
        makes the induced map additive."""
        p = self.ctx.p
        for _, e in self.terms:
            if e == 0:
                return False
            while e % p == 0:
                e //= p
            if e != 1:
                return False
        return True

    def coeffs_in_subfield(self, sub_degree: int) -> bool:
        return all(self.ctx.frob_idx(c, sub_degree, 1) == c for c, _ in self.terms)

    def to_json(self) -> dict:
        return {"terms": [[c, e] for c, e in self.terms], "text": self.to_text()}


# ---------------------------------------------------------------------------
# symbolic combination (map-preserving)
# ---------------------------------------------------------------------------

POLY_TERM_CAP = 4096


def map_exp(ctx: FieldCtx, e: int) -> int:
    """Reduce a positive exponent mod (field size - 1) while keeping it
    positive, so x^e and the reduced monomial agree at 0 as well."""
    if e == 0:
        return 0
    return (e - 1) % (ctx.order - 1) + 1


def _merged(ctx: FieldCtx, raw: Iterable[tuple[int, int]]) -> SparsePoly:
    terms = [(c, map_exp(ctx, e)) for c, e in raw]
    if len(terms) > POLY_TERM_CAP:
        raise CapExceeded(f"symbolic expansion grew past {POLY_TERM_CAP} terms")
    return SparsePoly.make(ctx, terms)


def poly_add(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    if f.ctx.key != g.ctx.key:
        raise CtxMismatch("polynomials over different fields")
    return _merged(f.ctx, (*f.terms, *g.terms))


def poly_mul(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    if f.ctx.key != g.ctx.key:
        raise CtxMismatch("polynomials over different fields")
    ctx = f.ctx
    raw = [(ctx.mul_idx(c1, c2), e1 + e2)
           for c1, e1 in f.terms for c2, e2 in g.terms]
    return _merged(ctx, raw)


def poly_pow(f: SparsePoly, e: int) -> SparsePoly:
    if e < 0:
        raise BadParams("negative polynomial power")
    acc = SparsePoly.make(f.ctx, [(1, 0)])
    base = f
    while e:
        if e & 1:
            acc = poly_mul(acc, base)
        e >>= 1
        if e:
            base = poly_mul(base, base)
    return acc


def poly_compose(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    """f(g(x)) as a polynomial inducing the same map as the composite."""
    if f.ctx.key != g.ctx.key:
        raise CtxMismatch("polynomials over different fields")
    ctx = f.ctx
    acc = SparsePoly(ctx, ())
    for c, e in f.terms:
        term = poly_pow(g, e) if e else SparsePoly.make(ctx, [(1, 0)])
        acc = poly_add(acc, poly_mul(SparsePoly.make(ctx, [(c, 0)]), term))
    return acc


def poly_frob(f: SparsePoly, k: int) -> SparsePoly:
    """f(x)^(p^k): coefficients to the p^k, exponents scaled by p^k."""
    if k < 0:
        raise BadParams("negative Frobenius power")
    ctx = f.ctx
    t = pow(ctx.p, k)
    raw = [(ctx.pow_idx(c, t), e * t) for c, e in f.terms]
    return _merged(ctx, raw)


# ---------------------------------------------------------------------------
# materialized maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NotBijective:
    """Evidence that an image table is not a bijection."""

    missing: int                  # smallest index with no preimage
    collision: tuple[int, int]    # two distinct inputs with the same image

    def describe(self) -> str:
        a, b = self.collision
        return f"not a bijection: inputs {a} and {b} collide, {self.missing} unreached"


@dataclass(frozen=True)
class PermMap:
    """A bijection of the field, stored as an image table."""

    ctx: FieldCtx
    images: np.ndarray

    def apply_idx(self, i: int) -> int:
        return int(self.images[i])

    def __call__(self, a: FieldElement) -> FieldElement:
        if a.ctx.key != self.ctx.key:
            raise CtxMismatch("element from a different field")
        return self.ctx.element(int(self.images[a.i]))

    def fixed_point_count(self) -> int:
        return int(np.count_nonzero(self.images == self.ctx.varange()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PermMap):
            return NotImplemented
        return self.ctx.key == other.ctx.key and bool(
            np.array_equal(self.images, other.images))

    def __hash__(self) -> int:  # pragma: no cover - maps are not dict keys
        return hash((self.ctx.key, self.images.tobytes()))


def as_images(ctx: FieldCtx, fn) -> np.ndarray:
    """Materialize fn over the whole field; fn may be a SparsePoly, a
    vectorized index function, or a precomputed table."""
    if isinstance(fn, SparsePoly):
        return fn.eval_vec(ctx.varange())
    if isinstance(fn, PermMap):
        return fn.images
    if isinstance(fn, np.ndarray):
        if fn.shape != (ctx.order,):
            raise BadParams("image table has the wrong length")
        return fn.astype(np.int64)
    out = np.asarray(fn(ctx.varange()), dtype=np.int64)
    if out.shape != (ctx.order,):
        raise BadParams("map did not return one image per field element")
    return out


def as_vector_fn(ctx: FieldCtx, fn) -> Callable[[np.ndarray], np.ndarray]:
    """Adapt a SparsePoly, PermMap, image table, or callable to a function
    on index arrays, so criteria can re-evaluate maps on subsets."""
    if isinstance(fn, SparsePoly):
        return fn.eval_vec
    if isinstance(fn, PermMap):
        return lambda xs: fn.images[xs]
    if isinstance(fn, np.ndarray):
        table = fn.astype(np.int64)
        return lambda xs: table[xs]
    return lambda xs: np.asarray(fn(xs), dtype=np.int64)


def perm_from_images(ctx: FieldCtx, images: np.ndarray) -> PermMap | NotBijective:
    images = np.asarray(images, dtype=np.int64)
    counts = np.bincount(images, minlength=ctx.order)
    if counts.max(initial=0) <= 1 and len(counts) == ctx.order:
        return PermMap(ctx, images)
    missing = int(np.flatnonzero(counts == 0)[0])
    dup = int(np.flatnonzero(counts > 1)[0])
    pre = np.flatnonzero(images == dup)[:2]
    return NotBijective(missing, (int(pre[0]), int(pre[1])))


def perm_from_fn(ctx: FieldCtx, fn) -> PermMap | NotBijective:
    return perm_from_images(ctx, as_images(ctx, fn))


def require_perm(ctx: FieldCtx, fn) -> PermMap:
    got = perm_from_fn(ctx, fn)
    if isinstance(got, NotBijective):
        raise NotPermutation(got.describe())
    return got


def identity_perm(ctx: FieldCtx) -> PermMap:
    return PermMap(ctx, ctx.varange())


def compose(f: PermMap, g: PermMap) -> PermMap:
    """f after g."""
    if f.ctx.key != g.ctx.key:
        raise CtxMismatch("maps over different fields")
    return PermMap(f.ctx, f.images[g.images])


def invert(f: PermMap) -> PermMap:
    inv = np.empty_like(f.images)
    inv[f.images] = f.ctx.varange()
    return PermMap(f.ctx, inv)


def functional_power(f: PermMap, k: int) -> PermMap:
    """k-fold composition of f with itself; negative k uses the inverse."""
    if k < 0:
        return functional_power(invert(f), -k)
    r = f.ctx.varange()
    b = f.images
    while k:
        if k & 1:
            r = b[r]
        b = b[b]
        k >>= 1
    return PermMap(f.ctx, r)


# ---------------------------------------------------------------------------
# cycle analysis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CycleReport:
    """Cycle decomposition summary of a full-field map."""

    bijective: bool
    order: int | None
    cycle_type: tuple[tuple[int, int], ...]   # (length, count), ascending
    fixed_points: int

    def to_json(self) -> dict:
        return {
            "bijective": self.bijective,
            "order": self.order,
            "cycle_type": [[l, c] for l, c in self.cycle_type],
            "fixed_points": self.fixed_points,
        }


def cycle_structure(pm: PermMap) -> CycleReport:
    imgs = pm.images.tolist()
    q = len(imgs)
    seen = bytearray(q)
    counts: dict[int, int] = {}
    for start in range(q):
        if seen[start]:
            continue
        length = 0
        t = start
        while not seen[t]:
            seen[t] = 1
            t = imgs[t]
            length += 1
        counts[length] = counts.get(length, 0) + 1
    order = 1
    for length in counts:
        order = lcm(order, length)
    ctype = tuple(sorted(counts.items()))
    return CycleReport(True, order, ctype, counts.get(1, 0))


def cycle_report_for_fn(ctx: FieldCtx, fn) -> CycleReport:
    """Cycle report for an arbitrary map; non-bijections get order None."""
    got = perm_from_fn(ctx, fn)
    if isinstance(got, NotBijective):
        images = as_images(ctx, fn)
        fixed = int(np.count_nonzero(images == ctx.varange()))
        return CycleReport(False, None, (), fixed)
    return cycle_structure(got)


def perm_order(pm: PermMap) -> int:
    return cycle_structure(pm).order


def is_ncycle(pm: PermMap, n: int) -> bool:
    """True when the map's order divides n (the identity passes for all n)."""
    if n < 1:
        raise BadParams("n must be a positive integer")
    return n % perm_order(pm) == 0
