"""Brute-force ground truth and randomized cross-validation.

exhaustive_verdict re-derives bijectivity and cycle structure from nothing
but the evaluated image table (a visited-bitmap walk plus an n-fold
composition replay as a second opinion), deliberately sharing no code with
the permutation module beyond field arithmetic, so agreement between the
algebraic criteria and this module is a genuine two-implementation check.
cross_check runs both sides on one constructed instance; random_family_fuzz
drives many seeded trials mixing valid, invalid and perturbed parameter
tuples through the constructors and the criteria.
"""
from __future__ import annotations

import json
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache
from time import perf_counter
from typing import Callable, Optional

import numpy as np

from .criteria import (
    RsParams, ShiftParams, additive_criterion, rs_triple_criterion,
    shift_criterion, xh_lambda_criterion,
)
from .errors import (
    BadParams, CapExceeded, DegenerateH, HValueNotRootOfUnity,
    HypothesisViolated, InvalidSpec, KernelViolation, NotDivisor,
    NotPermutation, NotSurjective, PrereqNotNcycle,
)
from .families import (
    FamilyInstance, build_additive, build_jieguo, build_rs_2to3m, build_shift,
    build_trace_theta, build_xh_lambda, build_xq_h_alpha, lambda_spec,
    lambda_vector_fn, search_k_2to3m, solve_jieguo_congruences,
)
from .field import FieldCtx, NcycleInternal, make_field
from .polyperm import PermMap, SparsePoly
from .walsh import WALSH_CAP, walsh_involution_test

# errors a constructor may legitimately raise on a bad parameter tuple
REJECTABLE = (BadParams, InvalidSpec, NotDivisor, NotPermutation,
              KernelViolation, DegenerateH, HValueNotRootOfUnity)
# errors a criterion raises when its statement does not apply to the input
HYPOTHESIS_ERRORS = (HypothesisViolated, PrereqNotNcycle, NotPermutation,
                     NotSurjective, NotDivisor)

EVAL_CHUNK = 1 << 15


@lru_cache(maxsize=None)
def _field(p: int, n: int) -> FieldCtx:
    return make_field(p, n)


# ---------------------------------------------------------------------------
# exhaustive verdicts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OracleVerdict:
    """Ground truth for one map: bijectivity, exact permutation order, and
    a yes/no answer per requested cycle length.  order is None when the map
    is not a bijection.  elapsed is wall time in seconds and is kept out of
    to_json so reports stay byte-stable."""

    bijective: bool
    order: Optional[int]
    is_ncycle_at: dict
    cycle_type: dict
    domain_size: int
    elapsed: float

    def to_json(self) -> dict:
        return {
            "bijective": self.bijective,
            "order": self.order,
            "is_ncycle_at": {str(n): bool(v)
                             for n, v in sorted(self.is_ncycle_at.items())},
            "cycle_type": {str(k): int(v)
                           for k, v in sorted(self.cycle_type.items())},
            "domain_size": self.domain_size,
        }


def _vector_fn(ctx: FieldCtx, f) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(f, SparsePoly):
        if f.ctx.key != ctx.key:
            raise BadParams("polynomial belongs to a different field")
        return f.eval_vec
    if isinstance(f, PermMap):
        if f.ctx.key != ctx.key:
            raise BadParams("permutation belongs to a different field")
        return lambda v: f.images[v]
    if isinstance(f, np.ndarray):
        table = np.asarray(f, dtype=np.int64)
        if table.shape != (ctx.order,):
            raise BadParams(f"image table must have length {ctx.order}")
        return lambda v: table[v]
    if callable(f):
        return f
    raise BadParams(f"cannot evaluate a {type(f).__name__} as a map")


def _image_table(ctx: FieldCtx, fn, threads: Optional[int]) -> np.ndarray:
    xs = ctx.varange()
    if not threads or threads <= 1 or ctx.order <= EVAL_CHUNK:
        out = np.asarray(fn(xs), dtype=np.int64)
        if out.shape != xs.shape:
            raise BadParams("map did not return one image per point")
    else:
        out = np.empty(ctx.order, dtype=np.int64)
        starts = range(0, ctx.order, EVAL_CHUNK)

        def work(lo: int) -> None:
            hi = min(lo + EVAL_CHUNK, ctx.order)
            out[lo:hi] = fn(xs[lo:hi])

        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, starts))
    if out.size and (out.min() < 0 or out.max() >= ctx.order):
        raise BadParams("map produced values outside the field")
    return out


def _compose_power(imgs: np.ndarray, n: int) -> np.ndarray:
    result = np.arange(len(imgs), dtype=np.int64)
    base = imgs
    while n:
        if n & 1:
            result = base[result]
        base = base[base]
        n >>= 1
    return result


def exhaustive_verdict(ctx: FieldCtx, f, ns, threads: Optional[int] = None,
                       cap: Optional[int] = None) -> OracleVerdict:
    """Evaluate f on the whole field and answer, for each n in ns, whether
    f is an n-cycle permutation.  Cycle lengths come from a visited-bitmap
    walk over the image table; each answer is re-derived by direct n-fold
    composition and the two must agree."""
    t0 = perf_counter()
    limit = ctx.cap if cap is None else cap
    if ctx.order > limit:
        raise CapExceeded(f"field size {ctx.order} exceeds cap {limit}")
    ns = sorted({int(n) for n in ns})
    if ns and ns[0] < 1:
        raise BadParams("cycle lengths must be positive")
    imgs = _image_table(ctx, _vector_fn(ctx, f), threads)
    bijective = bool(np.bincount(imgs, minlength=ctx.order).max() == 1)
    if not bijective:
        return OracleVerdict(False, None, {n: False for n in ns}, {},
                             ctx.order, perf_counter() - t0)
    table = imgs.tolist()
    seen = bytearray(ctx.order)
    cycle_type: dict[int, int] = {}
    for start in range(ctx.order):
        if seen[start]:
            continue
        length = 0
        cur = start
        while not seen[cur]:
            seen[cur] = 1
            cur = table[cur]
            length += 1
        cycle_type[length] = cycle_type.get(length, 0) + 1
    order = math.lcm(*cycle_type)
    answers: dict[int, bool] = {}
    ident = np.arange(ctx.order, dtype=np.int64)
    for n in ns:
        direct = bool(np.array_equal(_compose_power(imgs, n), ident))
        if direct != (n % order == 0):
            raise NcycleInternal("cycle walk disagrees with direct composition")
        answers[n] = direct
    return OracleVerdict(True, order, answers, cycle_type, ctx.order,
                         perf_counter() - t0)


# ---------------------------------------------------------------------------
# criterion vs oracle on one instance
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CrossCheckReport:
    """Two-sided verdict on one instance.  status is AGREE when the bound
    criterion and the exhaustive answer at claimed_n coincide (in either
    truth value), DISAGREE when they differ, HYPOTHESIS_FAILED when the
    criterion refused to rule because its hypotheses do not hold."""

    family: str
    claimed_n: int
    status: str
    criterion_holds: Optional[bool]
    oracle_is_ncycle: bool
    oracle: OracleVerdict
    walsh_checked: bool = False
    detail: str = ""

    @property
    def agree(self) -> bool:
        return self.status == "AGREE"

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "claimed_n": self.claimed_n,
            "status": self.status,
            "criterion_holds": self.criterion_holds,
            "oracle_is_ncycle": self.oracle_is_ncycle,
            "oracle": self.oracle.to_json(),
            "walsh_checked": self.walsh_checked,
            "detail": self.detail,
        }


def cross_check(instance: FamilyInstance,
                threads: Optional[int] = None,
                walsh: bool = True) -> CrossCheckReport:
    """Run the instance's bound criterion and the exhaustive verdict and
    compare.  For involution claims on fields within the Walsh cap the
    spectral test runs as a third opinion (skipped above the cap); a
    contradiction from any side is a DISAGREE."""
    ver = exhaustive_verdict(instance.ctx, instance.fn, [instance.claimed_n],
                             threads=threads)
    truth = ver.is_ncycle_at[instance.claimed_n]
    try:
        crit = bool(instance.criterion().holds)
    except HYPOTHESIS_ERRORS as exc:
        return CrossCheckReport(instance.family, instance.claimed_n,
                                "HYPOTHESIS_FAILED", None, truth, ver,
                                detail=str(exc))
    status = "AGREE" if crit == truth else "DISAGREE"
    detail = "" if status == "AGREE" else "criterion contradicts brute force"
    walsh_checked = False
    if (walsh and instance.claimed_n == 2 and ver.bijective
            and instance.ctx.order <= WALSH_CAP):
        flag, _ = walsh_involution_test(instance.ctx, instance.fn)
        walsh_checked = True
        if flag != (2 % ver.order == 0):
            status = "DISAGREE"
            detail = "spectral involution verdict contradicts the cycle walk"
    return CrossCheckReport(instance.family, instance.claimed_n, status, crit,
                            truth, ver, walsh_checked, detail)


# ---------------------------------------------------------------------------
# seeded fuzzing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FuzzTrial:
    index: int
    kind: str
    field: str
    params: dict
    outcome: str
    detail: str = ""

    _PASS = {
        "valid": ("agree", "agree_false"),
        "invalid": ("rejected",),
        "perturbed": ("agree", "agree_false", "hypothesis_failed"),
    }

    @property
    def ok(self) -> bool:
        return self.outcome in self._PASS[self.kind]

    @property
    def compared(self) -> bool:
        """True when both a criterion verdict and an oracle verdict were
        produced and matched against each other."""
        return self.outcome in ("agree", "agree_false", "disagree")

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "kind": self.kind,
            "field": self.field,
            "params": self.params,
            "outcome": self.outcome,
            "ok": self.ok,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class FuzzSummary:
    family: str
    seed: int
    trials: tuple = dataclass_field(default=())

    @property
    def failures(self) -> tuple:
        return tuple(t for t in self.trials if not t.ok)

    @property
    def disagreements(self) -> tuple:
        return tuple(t for t in self.trials if t.outcome == "disagree")

    @property
    def comparisons(self) -> int:
        return sum(1 for t in self.trials if t.compared)

    def counts(self) -> dict:
        out: dict[str, int] = {}
        for t in self.trials:
            out[t.outcome] = out.get(t.outcome, 0) + 1
        return dict(sorted(out.items()))

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "seed": self.seed,
            "trials": len(self.trials),
            "comparisons": self.comparisons,
            "counts": self.counts(),
            "failures": len(self.failures),
        }

    def to_json_lines(self) -> list[str]:
        lines = [json.dumps(t.to_json(), sort_keys=True) for t in self.trials]
        lines.append(json.dumps({"summary": self.to_json()}, sort_keys=True))
        return lines


def _run_build(kind: str, build: Callable[[], FamilyInstance]):
    """Execute one constructor attempt and classify the outcome."""
    if kind == "invalid":
        try:
            build()
        except REJECTABLE as exc:
            return "rejected", type(exc).__name__
        return "accepted_invalid", "constructor accepted a bad tuple"
    try:
        inst = build()
    except REJECTABLE as exc:
        return "build_error", f"{type(exc).__name__}: {exc}"
    rep = cross_check(inst, walsh=False)
    if rep.status == "DISAGREE":
        return "disagree", rep.detail
    if rep.status == "HYPOTHESIS_FAILED":
        return "hypothesis_failed", rep.detail
    return ("agree" if rep.criterion_holds else "agree_false"), ""


def _pick_kind(rng: random.Random, perturbed: bool = True) -> str:
    r = rng.random()
    if r < 0.2:
        return "invalid"
    if perturbed and r < 0.5:
        return "perturbed"
    return "valid"


def _gfname(ctx: FieldCtx) -> str:
    return f"GF({ctx.p}^{ctx.n})"


def _subfield_generator(ctx: FieldCtx, sub_degree: int) -> int:
    q = ctx.p ** sub_degree
    return ctx.pow_idx(ctx.generator.i, (ctx.order - 1) // (q - 1))


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def _random_poly(ctx: FieldCtx, rng: random.Random, max_terms: int,
                 max_exp: int, nonzero: bool = True) -> SparsePoly:
    terms = [(rng.randrange(1, ctx.order), rng.randrange(0, max_exp + 1))
             for _ in range(rng.randrange(1, max_terms + 1))]
    poly = SparsePoly.make(ctx, terms)
    if nonzero and not poly.terms:
        poly = SparsePoly.monomial(ctx, rng.randrange(0, max_exp + 1))
    return poly


def _perturbed_xh(ctx: FieldCtx, rng: random.Random,
                  sub_degree: int) -> tuple[dict, FamilyInstance]:
    """Root-of-unity twist shape with a random (not necessarily primitive,
    not necessarily order-n) scale factor; the bound criterion still applies
    whenever the twisted image map stays a bijection, and the verdict is an
    honest maybe-no."""
    q = ctx.p ** sub_degree
    choices = [n for n in _divisors(q - 1) if n >= 2]
    n = rng.choice(choices)
    subgen = _subfield_generator(ctx, sub_degree)
    theta = ctx.pow_idx(subgen, rng.randrange(0, q - 1))
    spec = lambda_spec(ctx, "lambda1", n, sub_degree)
    lam_fn = lambda_vector_fn(spec, ctx)
    h = SparsePoly.make(ctx, [(1, 0), (theta, (q - 1) // n),
                              (ctx.neg_idx(1), q - 1)])
    k = SparsePoly.monomial(ctx, n)
    fn = lambda xs: ctx.vmul(xs, h.eval_vec(lam_fn(xs)))
    inst = FamilyInstance(
        family="xh_lambda", ctx=ctx,
        params={"variant": "perturbed_theta", "theta": theta, "n": n,
                "sub_degree": sub_degree},
        claimed_n=n, poly=None, fn=fn, map_form="x*h(lambda(x))",
        check=lambda: xh_lambda_criterion(ctx, h, lam_fn, k, n))
    return inst.params, inst


def _sample_xh(rng: random.Random, index: int, variant: str) -> FuzzTrial:
    pool = [(5, 2, 1), (7, 2, 1)] if variant != "involution_cor" else \
        [(5, 2, 1), (7, 2, 1), (3, 4, 1), (3, 4, 2)]
    p, deg, sub = rng.choice(pool)
    ctx = _field(p, deg)
    q = p ** sub
    kind = _pick_kind(rng)
    if kind == "perturbed":
        params, inst = _perturbed_xh(ctx, rng, sub)
        outcome, detail = _run_build("valid-shape", lambda: inst)
        return FuzzTrial(index, "perturbed", _gfname(ctx), params,
                         outcome, detail)
    if kind == "invalid":
        if variant == "involution_cor":
            ctx2 = _field(2, 4)
            params = {"variant": variant, "p": 2}
            build = lambda: build_xh_lambda(ctx2, variant, sub_degree=1)
        elif variant == "theta_cor":
            bad = rng.choice(("theta_one", "n_nondiv", "theta_outside"))
            if bad == "theta_one":
                params = {"variant": variant, "n": 2, "theta": 1}
                build = lambda: build_xh_lambda(ctx, variant, sub_degree=sub,
                                                n=2, theta=1)
            elif bad == "n_nondiv":
                n = q  # never divides q - 1
                params = {"variant": variant, "n": n}
                build = lambda: build_xh_lambda(ctx, variant, sub_degree=sub,
                                                n=n, theta=1)
            else:
                theta = ctx.generator.i  # order Q-1, outside GF(q)
                params = {"variant": variant, "n": 2, "theta": theta}
                build = lambda: build_xh_lambda(ctx, variant, sub_degree=sub,
                                                n=2, theta=theta)
        else:  # abc_cor
            a, b, c = rng.choice(((2, 1, 1), (1, 1, 1), (1, 3, 0)))
            params = {"variant": variant, "a": a, "b": b, "c": c}
            build = lambda: build_xh_lambda(ctx, variant, sub_degree=sub,
                                            a=a, b=b, c=c)
        outcome, detail = _run_build("invalid", build)
        return FuzzTrial(index, "invalid", _gfname(ctx), params,
                         outcome, detail)
    lam = rng.choice(("lambda1", "lambda2"))
    if variant == "involution_cor":
        params = {"variant": variant, "lambda": lam, "sub_degree": sub}
        build = lambda: build_xh_lambda(ctx, variant, sub_degree=sub, lam=lam)
    elif variant == "theta_cor":
        n = rng.choice(_divisors(q - 1))
        theta = ctx.pow_idx(_subfield_generator(ctx, sub), (q - 1) // n)
        params = {"variant": variant, "lambda": "lambda1", "n": n,
                  "theta": theta}
        build = lambda: build_xh_lambda(ctx, variant, sub_degree=sub,
                                        n=n, theta=theta)
    else:  # abc_cor, only solvable when -1 is a square mod p
        ctx = _field(5, 2)
        a, b = rng.choice(((1, 3), (2, 4), (3, 1), (4, 2)))
        c = rng.choice((1, 2, 3))  # 4c = 0 mod 4 for every c in [1, q-2]
        params = {"variant": variant, "a": a, "b": b, "c": c}
        build = lambda: build_xh_lambda(ctx, variant, sub_degree=1,
                                        a=a, b=b, c=c)
    outcome, detail = _run_build("valid", build)
    return FuzzTrial(index, "valid", _gfname(ctx), params, outcome, detail)


_ADDITIVE_POOL = [(3, 2, 1), (3, 4, 1), (3, 4, 2), (2, 6, 1), (2, 6, 2),
                  (2, 6, 3), (5, 2, 1), (7, 2, 1), (2, 9, 3)]


def _sample_additive(rng: random.Random, index: int) -> FuzzTrial:
    p, deg, sub = rng.choice(_ADDITIVE_POOL)
    ctx = _field(p, deg)
    q = p ** sub
    m = deg // sub
    kind = _pick_kind(rng)
    if kind == "perturbed":
        g = _random_poly(ctx, rng, max_terms=4, max_exp=ctx.order - 1)
        psi = SparsePoly.make(ctx, [(ctx.neg_idx(1), 1), (1, q)])
        phi = SparsePoly.monomial(ctx, 1)
        n = rng.choice((2, 3, p))
        fn = lambda xs: ctx.vadd(xs, g.eval_vec(psi.eval_vec(xs)))
        inst = FamilyInstance(
            family="additive", ctx=ctx,
            params={"variant": "random_g", "g": g.to_text(), "n": n,
                    "sub_degree": sub},
            claimed_n=n, poly=None, fn=fn, map_form="x + g(x^q - x)",
            check=lambda: additive_criterion(ctx, phi, psi, g, n))
        outcome, detail = _run_build("valid-shape", lambda: inst)
        return FuzzTrial(index, "perturbed", _gfname(ctx), inst.params,
                         outcome, detail)
    if kind == "invalid":
        bad = rng.choice(("psi_shape", "psi_kernel", "bad_s", "bad_c",
                          "bad_tower"))
        if bad == "psi_shape":
            params = {"variant": "trace_g1", "psi": "x^2"}
            build = lambda: build_additive(ctx, "trace_g1", sub_degree=sub,
                                           psi="1*x^2")
        elif bad == "psi_kernel":
            params = {"variant": "trace_g1", "psi": f"x^{q}"}
            build = lambda: build_additive(ctx, "trace_g1", sub_degree=sub,
                                           psi=f"1*x^{q}")
        elif bad == "bad_s":
            s = (ctx.order - 1) // (q - 1) + 1
            params = {"variant": "power_g2", "s": s}
            build = lambda: build_additive(ctx, "power_g2", sub_degree=sub,
                                           s=s)
        elif bad == "bad_c":
            params = {"variant": "c_trace_q2", "c": 0}
            build = lambda: build_additive(ctx, "c_trace_q2", sub_degree=sub,
                                           c=0)
        else:
            badsub = sub if m == 3 else rng.choice(
                [d for d in _divisors(deg) if deg // d != 3])
            params = {"variant": "xq_g_trace", "sub_degree": badsub}
            if m == 3:
                outside = next(i for i in range(1, ctx.order)
                               if ctx.trace_idx(i, sub) != 0)
                build = lambda: build_additive(
                    ctx, "xq_g_trace", sub_degree=sub,
                    g=SparsePoly.make(ctx, [(outside, 1)]))
            else:
                build = lambda: build_additive(ctx, "xq_g_trace",
                                               sub_degree=badsub, g="1*x^1")
        outcome, detail = _run_build("invalid", build)
        return FuzzTrial(index, "invalid", _gfname(ctx), params,
                         outcome, detail)
    variants = ["trace_g1", "power_g2"]
    if m == 2:
        variants.append("c_trace_q2")
    if m == 3:
        variants.append("xq_g_trace")
    variant = rng.choice(variants)
    if variant == "trace_g1":
        H = _random_poly(ctx, rng, max_terms=3, max_exp=4)
        params = {"variant": variant, "H": H.to_text(), "sub_degree": sub}
        build = lambda: build_additive(ctx, variant, sub_degree=sub, H=H)
    elif variant == "power_g2":
        H = _random_poly(ctx, rng, max_terms=3, max_exp=4)
        s = rng.randrange(1, 4) * (ctx.order - 1) // (q - 1)
        params = {"variant": variant, "H": H.to_text(), "s": s,
                  "sub_degree": sub}
        build = lambda: build_additive(ctx, variant, sub_degree=sub, H=H, s=s)
    elif variant == "c_trace_q2":
        roots = [i for i in range(1, ctx.order)
                 if ctx.add_idx(i, ctx.frob_idx(i, sub, 1)) == 0]
        c = rng.choice(roots)
        s = rng.randrange(0, 8)
        params = {"variant": variant, "c": c, "s": s, "sub_degree": sub}
        build = lambda: build_additive(ctx, variant, sub_degree=sub, c=c, s=s)
    else:
        kernel = [i for i in range(ctx.order) if ctx.trace_idx(i, sub) == 0]
        terms = [(rng.choice(kernel), rng.randrange(0, 4))
                 for _ in range(rng.randrange(1, 4))]
        g = SparsePoly.make(ctx, terms)
        params = {"variant": variant, "g": g.to_text(), "sub_degree": sub}
        build = lambda: build_additive(ctx, variant, sub_degree=sub, g=g)
    outcome, detail = _run_build("valid", build)
    return FuzzTrial(index, "valid", _gfname(ctx), params, outcome, detail)


_SHIFT_POOL = [(3, 2, 1), (3, 4, 1), (2, 6, 1), (2, 6, 2), (5, 2, 1)]


def _sample_shift(rng: random.Random, index: int) -> FuzzTrial:
    p, deg, sub = rng.choice(_SHIFT_POOL)
    ctx = _field(p, deg)
    q = p ** sub
    m = deg // sub
    i = rng.randrange(1, m)
    delta = rng.randrange(0, ctx.order)
    kind = _pick_kind(rng)
    if kind == "perturbed":
        g = _random_poly(ctx, rng, max_terms=4, max_exp=ctx.order - 1)
        n = rng.choice((2, 3, p))
        qi = q ** i

        def fn(xs, g=g, qi_sub=sub, qi_i=i, d=delta):
            shifted = ctx.vadd(ctx.vsub(ctx.vfrob(xs, qi_sub, qi_i), xs),
                               np.int64(d))
            return ctx.vadd(xs, g.eval_vec(shifted))

        inst = FamilyInstance(
            family="shift", ctx=ctx,
            params={"variant": "random_g", "g": g.to_text(), "i": i,
                    "delta": delta, "n": n, "sub_degree": sub},
            claimed_n=n, poly=None, fn=fn,
            map_form=f"x + g(x^{qi} - x + delta)",
            check=lambda: shift_criterion(ctx, g,
                                          ShiftParams(i, delta, sub), n))
        outcome, detail = _run_build("valid-shape", lambda: inst)
        return FuzzTrial(index, "perturbed", _gfname(ctx), inst.params,
                         outcome, detail)
    if kind == "invalid":
        bad = rng.choice(("i_zero", "i_full", "bad_s", "zero_h"))
        if bad == "i_zero":
            params = {"variant": "power_g2", "i": 0}
            build = lambda: build_shift(ctx, "power_g2", i=0, delta=delta,
                                        sub_degree=sub, s=1)
        elif bad == "i_full":
            params = {"variant": "power_g2", "i": m}
            build = lambda: build_shift(ctx, "power_g2", i=m, delta=delta,
                                        sub_degree=sub, s=1)
        elif bad == "bad_s":
            g = math.gcd(q ** i - 1, ctx.order - 1)
            s = (ctx.order - 1) // g + 1
            params = {"variant": "power_g2", "i": i, "s": s}
            build = lambda: build_shift(ctx, "power_g2", i=i, delta=delta,
                                        sub_degree=sub, s=s)
        else:
            params = {"variant": "power_g2", "i": i, "H": "0"}
            g = math.gcd(q ** i - 1, ctx.order - 1)
            s = (ctx.order - 1) // g
            build = lambda: build_shift(ctx, "power_g2", i=i, delta=delta,
                                        sub_degree=sub, s=s, H="0")
        outcome, detail = _run_build("invalid", build)
        return FuzzTrial(index, "invalid", _gfname(ctx), params,
                         outcome, detail)
    gcd = math.gcd(q ** i - 1, ctx.order - 1)
    s = rng.randrange(1, 4) * (ctx.order - 1) // gcd
    if p != 2 and m % i == 0 and rng.random() < 0.5:
        params = {"variant": "trace_g1", "i": i, "delta": delta,
                  "sub_degree": sub}
        build = lambda: build_shift(ctx, "trace_g1", i=i, delta=delta,
                                    sub_degree=sub)
    else:
        params = {"variant": "power_g2", "i": i, "delta": delta, "s": s,
                  "sub_degree": sub}
        build = lambda: build_shift(ctx, "power_g2", i=i, delta=delta,
                                    sub_degree=sub, s=s)
    outcome, detail = _run_build("valid", build)
    return FuzzTrial(index, "valid", _gfname(ctx), params, outcome, detail)


def _perturbed_rs(ctx: FieldCtx, rng: random.Random, r: int, s: int,
                  family: str, outer_exp: int) -> FamilyInstance:
    """Random trinomial h in the x^r * h(x^s) shape; the total criterion
    applies to any h, so every draw yields a genuine verdict."""
    ell = (ctx.order - 1) // s
    e1, e2 = rng.randrange(1, ell), rng.randrange(1, ell)
    c1, c2 = rng.randrange(1, ctx.order), rng.randrange(1, ctx.order)
    h = SparsePoly.make(ctx, [(1, 0), (c1, e1), (c2, e2)])
    fn = lambda xs: ctx.vmul(ctx.vpow(xs, outer_exp),
                             h.eval_vec(ctx.vpow(xs, s)))
    return FamilyInstance(
        family=family, ctx=ctx,
        params={"variant": "random_h", "h": h.to_text(), "r": r, "s": s},
        claimed_n=3, poly=None, fn=fn, map_form=f"x^{outer_exp}*h(x^{s})",
        check=lambda: rs_triple_criterion(ctx, h, RsParams(r, s)))


def _sample_rs2to3m(rng: random.Random, index: int) -> FuzzTrial:
    ctx = _field(2, 9)
    kind = _pick_kind(rng)
    if kind == "perturbed":
        inst = _perturbed_rs(ctx, rng, 1, 73, "rs2to3m", 1)
        outcome, detail = _run_build("valid-shape", lambda: inst)
        return FuzzTrial(index, "perturbed", _gfname(ctx), inst.params,
                         outcome, detail)
    if kind == "invalid":
        q, k = rng.choice(((64, 44), (16, 45), (8, 4), (8, 11)))
        params = {"q": q, "k": k}
        build = lambda: build_rs_2to3m(q, k, ctx=ctx if q == 8 else None)
        outcome, detail = _run_build("invalid", build)
        return FuzzTrial(index, "invalid", _gfname(ctx), params,
                         outcome, detail)
    k = rng.choice(search_k_2to3m(8))
    params = {"q": 8, "k": k}
    build = lambda: build_rs_2to3m(8, k, ctx=ctx)
    outcome, detail = _run_build("valid", build)
    return FuzzTrial(index, "valid", _gfname(ctx), params, outcome, detail)


def _sample_jieguo(rng: random.Random, index: int) -> FuzzTrial:
    ctx = _field(2, 12)
    kind = _pick_kind(rng)
    if kind == "perturbed":
        inst = _perturbed_rs(ctx, rng, 1, 63, "jieguo", 1)
        outcome, detail = _run_build("valid-shape", lambda: inst)
        return FuzzTrial(index, "perturbed", _gfname(ctx), inst.params,
                         outcome, detail)
    if kind == "invalid":
        pairs = set(solve_jieguo_congruences(64))
        while True:
            t, m = rng.randrange(0, 65), rng.randrange(0, 65)
            if (t, m) not in pairs:
                break
        params = {"q": 64, "t": t, "m": m}
        build = lambda: build_jieguo(64, t, m, ctx=ctx)
        outcome, detail = _run_build("invalid", build)
        return FuzzTrial(index, "invalid", _gfname(ctx), params,
                         outcome, detail)
    t, m = rng.choice(solve_jieguo_congruences(64))
    params = {"q": 64, "t": t, "m": m}
    build = lambda: build_jieguo(64, t, m, ctx=ctx)
    outcome, detail = _run_build("valid", build)
    return FuzzTrial(index, "valid", _gfname(ctx), params, outcome, detail)


def _sample_xq_h_alpha(rng: random.Random, index: int) -> FuzzTrial:
    q = 4  # the map lives over GF(q^3); larger q leaves the fuzz budget
    ctx = _field(2, 6)
    kind = _pick_kind(rng)
    if kind == "perturbed":
        inst = _perturbed_rs(ctx, rng, q, q - 1, "xq_h_alpha", q)
        outcome, detail = _run_build("valid-shape", lambda: inst)
        return FuzzTrial(index, "perturbed", _gfname(ctx), inst.params,
                         outcome, detail)
    if kind == "invalid":
        bad = rng.choice(("odd_tower", "zero", "not_root"))
        if bad == "odd_tower":
            params = {"q": 8, "alpha": 1}
            build = lambda: build_xq_h_alpha(8, 1)
        elif bad == "zero":
            params = {"q": q, "alpha": 0}
            build = lambda: build_xq_h_alpha(q, 0, ctx=ctx)
        else:
            notroot = next(i for i in range(2, ctx.order)
                           if ctx.pow_idx(i, 3) != 1)
            params = {"q": q, "alpha": notroot}
            build = lambda: build_xq_h_alpha(q, notroot, ctx=ctx)
        outcome, detail = _run_build("invalid", build)
        return FuzzTrial(index, "invalid", _gfname(ctx), params,
                         outcome, detail)
    subgen = ctx.pow_idx(ctx.generator.i, (ctx.order - 1) // (q - 1))
    cube = ctx.pow_idx(subgen, (q - 1) // 3)
    alpha = rng.choice((1, cube, ctx.mul_idx(cube, cube)))
    params = {"q": q, "alpha": alpha}
    build = lambda: build_xq_h_alpha(q, alpha, ctx=ctx)
    outcome, detail = _run_build("valid", build)
    return FuzzTrial(index, "valid", _gfname(ctx), params, outcome, detail)


def _sample_trace_theta(rng: random.Random, index: int) -> FuzzTrial:
    ctx = _field(2, 6)
    kind = _pick_kind(rng, perturbed=False)
    if kind == "invalid":
        bad = rng.choice(("odd_tower", "theta_one"))
        if bad == "odd_tower":
            params = {"q": 8, "theta": None}
            build = lambda: build_trace_theta(8)
        else:
            params = {"q": 4, "theta": 1}
            build = lambda: build_trace_theta(4, 1, ctx=ctx)
        outcome, detail = _run_build("invalid", build)
        return FuzzTrial(index, "invalid", _gfname(ctx), params,
                         outcome, detail)
    cube = ctx.pow_idx(ctx.generator.i, 21)
    theta = rng.choice((cube, ctx.mul_idx(cube, cube), None))
    params = {"q": 4, "theta": theta}
    build = lambda: build_trace_theta(4, theta, ctx=ctx)
    outcome, detail = _run_build("valid", build)
    return FuzzTrial(index, "valid", _gfname(ctx), params, outcome, detail)


FUZZ_FAMILIES: dict[str, Callable[[random.Random, int], FuzzTrial]] = {
    "involution_cor": lambda rng, i: _sample_xh(rng, i, "involution_cor"),
    "theta_cor": lambda rng, i: _sample_xh(rng, i, "theta_cor"),
    "abc_cor": lambda rng, i: _sample_xh(rng, i, "abc_cor"),
    "additive": _sample_additive,
    "shift": _sample_shift,
    "rs2to3m": _sample_rs2to3m,
    "jieguo": _sample_jieguo,
    "xq_h_alpha": _sample_xq_h_alpha,
    "trace_theta": _sample_trace_theta,
}


def random_family_fuzz(family_id: str, seed: int, trials: int) -> FuzzSummary:
    """Run seeded randomized trials for one family: valid tuples must build
    and cross-check AGREE, invalid tuples must be rejected by the
    constructor, perturbed instances must still produce matching verdicts
    from the criterion and the brute-force oracle."""
    if family_id not in FUZZ_FAMILIES:
        raise BadParams(f"unknown family {family_id!r}; choose from "
                        f"{sorted(FUZZ_FAMILIES)}")
    if trials < 0:
        raise BadParams("trials must be nonnegative")
    sampler = FUZZ_FAMILIES[family_id]
    rng = random.Random(seed)
    return FuzzSummary(family_id, seed,
                       tuple(sampler(rng, i) for i in range(trials)))
