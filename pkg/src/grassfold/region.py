"""Regions D_n(K) on which a nonzero polynomial is bounded away from zero.

D_n(K) = {t_1 >= K, t_j >= K exp(t_(j-1))}.  Exponentials are bounded with
``decimal``: its ``exp`` is correctly rounded, so one ulp either side gives a
certified enclosure.  Comparisons refine the working precision until they
separate.
"""

from __future__ import annotations

import decimal
import math
import random
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

from .errors import PreconditionError, SchemaError
from .exactlin import as_rational, format_rational

POLY_SCHEMA = "grassfold.poly/1"
SPEC_SCHEMA = "grassfold.region/1"
START_PREC = 40
MAX_PREC = 5000


# --- polynomials -------------------------------------------------------------


@dataclass(frozen=True)
class PolyQ:
    """Sparse polynomial with rational coefficients in t_1..t_n."""

    n: int
    terms: tuple  # ((exponents, coefficient), ...) sorted, no zero coefficients

    @classmethod
    def of(cls, n: int, terms) -> "PolyQ":
        acc = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for e, c in items:
            e = tuple(int(v) for v in e)
            if len(e) != n or any(v < 0 for v in e):
                raise PreconditionError(f"exponent vector {e} does not fit {n} variables")
            acc[e] = acc.get(e, Fraction(0)) + as_rational(c)
        return cls(n, tuple(sorted((e, c) for e, c in acc.items() if c != 0)))

    @classmethod
    def constant(cls, n: int, c) -> "PolyQ":
        return cls.of(n, {(0,) * n: c})

    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, point) -> Fraction:
        pt = [as_rational(v) for v in point]
        return sum((c * math.prod(t**k for t, k in zip(pt, e)) for e, c in self.terms), Fraction(0))

    def degree_in(self, var: int) -> int:
        return max((e[var] for e, _ in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def abs_sum(self) -> Fraction:
        return sum((abs(c) for _, c in self.terms), Fraction(0))

    def drop_last(self) -> "PolyQ":
        """Same polynomial in n-1 variables (must not involve t_n)."""
        if self.degree_in(self.n - 1):
            raise PreconditionError("polynomial involves the last variable")
        return PolyQ.of(self.n - 1, [(e[:-1], c) for e, c in self.terms])

    def coefficients_in_last(self) -> list:
        """[a_0, ..., a_d] as polynomials in the first n-1 variables."""
        d = self.degree_in(self.n - 1)
        parts = [dict() for _ in range(d + 1)]
        for e, c in self.terms:
            parts[e[-1]][e[:-1]] = c
        return [PolyQ.of(self.n - 1, p) for p in parts]

    def to_json(self) -> dict:
        return {
            "schema": POLY_SCHEMA,
            "n": self.n,
            "terms": [{"exp": list(e), "coef": format_rational(c)} for e, c in self.terms],
        }

    @classmethod
    def from_json(cls, obj, where="") -> "PolyQ":
        if not isinstance(obj, dict) or obj.get("schema", POLY_SCHEMA) != POLY_SCHEMA:
            raise SchemaError(where + "/schema", f"expected {POLY_SCHEMA!r}")
        n = obj.get("n")
        if not isinstance(n, int) or n < 0:
            raise SchemaError(where + "/n", "expected a nonnegative integer")
        terms = obj.get("terms")
        if not isinstance(terms, list):
            raise SchemaError(where + "/terms", "expected a list")
        out = []
        for k, t in enumerate(terms):
            try:
                e = t["exp"]
                if not (isinstance(e, list) and all(isinstance(v, int) and v >= 0 for v in e) and len(e) == n):
                    raise ValueError("bad exponent vector")
                out.append((tuple(e), as_rational(t["coef"])))
            except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
                raise SchemaError(f"{where}/terms/{k}", str(exc)) from None
        if len({e for e, _ in out}) != len(out):
            raise SchemaError(where + "/terms", "repeated exponent vector")
        if any(c == 0 for _, c in out):
            raise SchemaError(where + "/terms", "zero coefficient")
        return cls.of(n, out)


@dataclass(frozen=True)
class RegionSpec:
    n: int
    K: Fraction
    C: Fraction

    def __post_init__(self):
        if not (self.K > 1 and self.C > 0):
            raise PreconditionError("need K > 1 and C > 0")

    def to_json(self) -> dict:
        return {"schema": SPEC_SCHEMA, "n": self.n, "K": format_rational(self.K), "C": format_rational(self.C)}

    @classmethod
    def from_json(cls, obj, where="") -> "RegionSpec":
        if not isinstance(obj, dict) or obj.get("schema", SPEC_SCHEMA) != SPEC_SCHEMA:
            raise SchemaError(where + "/schema", f"expected {SPEC_SCHEMA!r}")
        try:
            return cls(int(obj["n"]), as_rational(obj["K"]), as_rational(obj["C"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError, PreconditionError) as exc:
            raise SchemaError(where, f"bad region spec: {exc}") from None


# --- certified exponentials --------------------------------------------------


def _ctx(prec: int, rounding=decimal.ROUND_HALF_EVEN) -> decimal.Context:
    return decimal.Context(prec=prec, rounding=rounding, Emax=decimal.MAX_EMAX, Emin=decimal.MIN_EMIN, traps=[decimal.InvalidOperation, decimal.DivisionByZero])


def enclose(x, prec: int) -> tuple:
    """Decimal interval [lo, hi] containing the rational (or Decimal) ``x``."""
    if isinstance(x, Decimal):
        return _ctx(prec, decimal.ROUND_FLOOR).plus(x), _ctx(prec, decimal.ROUND_CEILING).plus(x)
    x = as_rational(x)
    num, den = Decimal(x.numerator), Decimal(x.denominator)
    return _ctx(prec, decimal.ROUND_FLOOR).divide(num, den), _ctx(prec, decimal.ROUND_CEILING).divide(num, den)


def exp_bounds(lo: Decimal, hi: Decimal, prec: int) -> tuple:
    """Certified [e^lo, e^hi] (exp is correctly rounded, so widen by one ulp)."""
    c = _ctx(prec)
    return c.next_minus(c.exp(lo)), c.next_plus(c.exp(hi))


def _mul(a: tuple, b: tuple, prec: int) -> tuple:
    lo_c, hi_c = _ctx(prec, decimal.ROUND_FLOOR), _ctx(prec, decimal.ROUND_CEILING)
    prods_lo = [lo_c.multiply(x, y) for x in a for y in b]
    prods_hi = [hi_c.multiply(x, y) for x in a for y in b]
    return min(prods_lo), max(prods_hi)


def _add(a: tuple, b: tuple, prec: int) -> tuple:
    return _ctx(prec, decimal.ROUND_FLOOR).add(a[0], b[0]), _ctx(prec, decimal.ROUND_CEILING).add(a[1], b[1])


def _compare(a_of, b_of) -> int:
    """Sign of a - b for interval-valued callables of the precision."""
    prec = START_PREC
    while prec <= MAX_PREC:
        a, b = a_of(prec), b_of(prec)
        if a[0] > b[1]:
            return 1
        if a[1] < b[0]:
            return -1
        prec *= 2
    raise ArithmeticError("comparison did not separate at maximal precision")


def region_contains(point, spec: RegionSpec) -> bool:
    """Exact membership of a rational (or Decimal) point in D_n(K)."""
    if len(point) != spec.n:
        raise PreconditionError(f"expected {spec.n} coordinates")
    if spec.n == 0:
        return True
    t1 = point[0]
    if (Fraction(t1) if isinstance(t1, Decimal) else as_rational(t1)) < spec.K:
        return False
    for j in range(1, spec.n):
        prev, cur = point[j - 1], point[j]

        def rhs(prec, prev=prev):
            lo, hi = enclose(prev, prec)
            return _mul(enclose(spec.K, prec), exp_bounds(lo, hi, prec), prec)

        if _compare(lambda prec, cur=cur: enclose(cur, prec), rhs) < 0:
            return False
    return True


# --- find_K ------------------------------------------------------------------


def _cauchy(coeffs) -> Fraction:
    """1 + max |a_j / a_d| for a univariate coefficient list (low degree first)."""
    d = len(coeffs) - 1
    return 1 + max((abs(coeffs[j] / coeffs[d]) for j in range(d)), default=Fraction(0))


def _exp_dominates(K: int, M: Fraction, L: int) -> bool:
    """Certify K e^K >= (M + 1) K^L."""
    lo, _ = exp_bounds(Decimal(K), Decimal(K), START_PREC)
    lhs = Fraction(lo) * K
    return lhs >= (M + 1) * Fraction(K) ** L


def find_K(f: PolyQ) -> RegionSpec:
    """(K, C) with |f| >= C on D_n(K), following the induction on the last variable."""
    if f.is_zero():
        raise PreconditionError("f = 0 has no region")
    K, C = _find(f)
    return RegionSpec(f.n, Fraction(K), C)


def _find(f: PolyQ):
    if f.total_degree() == 0:
        return 2, abs(f.terms[0][1])
    if f.degree_in(f.n - 1) == 0:
        return _find(f.drop_last())
    if f.n == 1:
        d = f.degree_in(0)
        coeffs = [Fraction(0)] * (d + 1)
        for e, c in f.terms:
            coeffs[e[0]] = c
        R = _cauchy(coeffs)
        K = max(2, math.floor(R) + 1)
        return K, abs(coeffs[d]) * (K - R) ** d
    a = f.coefficients_in_last()
    d = len(a) - 1
    K, Cd = _find(a[d])
    lower = [p for p in a[:d] if not p.is_zero()]
    A = max((p.abs_sum() for p in lower), default=Fraction(0))
    L = max((p.total_degree() for p in lower), default=0)
    M = 1 + A / Cd
    # roots satisfy |theta| <= M s^L with s = t_(n-1); need y - |theta| >= s^L
    K = max(K, L)
    while not _exp_dominates(K, M, L):
        K += 1
    return K, Cd * Fraction(K) ** (L * d)


# --- sampling and witnesses --------------------------------------------------


def sample_region(rng: random.Random, n: int, K, prec: int = START_PREC, u_max: int = 4, grid: int = 4) -> list:
    """t_1 = K + u_1, t_j = K * upper(e^(t_(j-1))) + u_j with u on a grid in [0, u_max]."""
    K = as_rational(K)
    hi = _ctx(prec, decimal.ROUND_CEILING)
    out = []
    for j in range(n):
        u = Fraction(rng.randint(0, u_max * grid), grid)
        if j == 0:
            out.append(K + u)
            continue
        lo_p, hi_p = enclose(out[-1], prec)
        e_hi = exp_bounds(lo_p, hi_p, prec)[1]
        Kd = enclose(K, prec)[1]
        out.append(hi.add(hi.multiply(Kd, e_hi), Decimal(u.numerator) / Decimal(u.denominator)))
    return out


def eval_interval(f: PolyQ, point, prec: int) -> tuple:
    """Certified enclosure of f(point); coordinates must be positive."""
    box = [enclose(v, prec) for v in point]
    total = (Decimal(0), Decimal(0))
    for e, c in f.terms:
        term = enclose(c, prec)
        for iv, k in zip(box, e):
            for _ in range(k):
                term = _mul(term, iv, prec)
        total = _add(total, term, prec)
    return total


def abs_enclosure(f: PolyQ, point, C: Fraction | None = None) -> tuple:
    """Enclosure of |f(point)|, refined until its position relative to C is decided."""
    prec = START_PREC
    while True:
        lo, hi = eval_interval(f, point, prec)
        if lo >= 0:
            a = (lo, hi)
        elif hi <= 0:
            a = (-hi, -lo)
        else:
            a = (Decimal(0), max(-lo, hi))
        c_lo, c_hi = enclose(C, prec) if C is not None else (None, None)
        decided = C is None or a[0] >= c_hi or a[1] < c_lo
        if decided or prec >= MAX_PREC:
            return a, decided
        prec *= 2


@dataclass(frozen=True)
class WitnessReport:
    samples: int
    min_lower: Decimal
    violations: int
    undecided: int
    worst_point: tuple

    @property
    def violation(self) -> bool:
        return self.violations > 0

    def to_json(self) -> dict:
        return {
            "schema": "grassfold.region-witness/1",
            "samples": self.samples,
            "min_lower_bound": str(self.min_lower),
            "violations": self.violations,
            "undecided": self.undecided,
            "violation": self.violation,
            "worst_point": [str(v) for v in self.worst_point],
        }


def region_witness(f: PolyQ, spec: RegionSpec, samples: int = 1000, seed: int = 0) -> WitnessReport:
    """Minimum of |f| over a seeded sample of D_n(K); flags samples with |f| < C."""
    if f.n != spec.n:
        raise PreconditionError("polynomial and spec have different dimensions")
    if spec.n > 3:
        raise PreconditionError("sampled points are representable only for n <= 3")
    rng = random.Random(f"witness:{seed}")
    best, worst = None, ()
    bad = undecided = 0
    for _ in range(samples):
        pt = sample_region(rng, spec.n, spec.K)
        (lo, hi), decided = abs_enclosure(f, pt, spec.C)
        if not decided:
            undecided += 1
        elif hi < enclose(spec.C, START_PREC)[0]:
            bad += 1
        if best is None or lo < best:
            best, worst = lo, tuple(pt)
    return WitnessReport(samples, best if best is not None else Decimal(0), bad, undecided, worst)


# --- simplicial compatibility ------------------------------------------------


@dataclass(frozen=True)
class Tower:
    """Symbolic point of D_(m)(K): t_0 = base, t_j = K e^(t_(j-1)) + u_j exactly.

    Coordinates beyond the first few are far too large to write down, so a
    deleted tuple is checked through the defining relations: for a pair
    (t_a, t_b) with b > a, t_b = K e^(t_(b-1)) + u_b >= K e^(t_a) holds as soon
    as t_(b-1) >= t_a, and t_k >= t_l for k >= l follows from
    K e^t + u >= K (1 + t) > t for t >= 0.
    """

    K: Fraction
    base: Fraction
    u: tuple

    def __len__(self):
        return 1 + len(self.u)

    def numeric_prefix(self, limit: int = 3) -> list:
        """Rational point with t_j = K * upper(e^(t_(j-1))) + u_j for the leading coordinates."""
        prec = 2 * START_PREC
        up = _ctx(prec, decimal.ROUND_CEILING)
        out = [self.base]
        for j in range(1, min(len(self), limit)):
            lo, hi = enclose(out[-1], prec)
            e_hi = exp_bounds(lo, hi, prec)[1]
            out.append(up.add(up.multiply(enclose(self.K, prec)[1], e_hi), enclose(self.u[j - 1], prec)[1]))
        return out

    def indices_in_region(self, idx) -> bool:
        """Whether the subsequence of coordinates ``idx`` lies in D_len(idx)(K)."""
        idx = list(idx)
        if not idx:
            return True
        if any(b <= a for a, b in zip(idx, idx[1:])):
            return False
        first = idx[0]
        if first == 0:
            ok = self.base >= self.K
        else:
            ok = self.base >= 0  # t_first >= K e^(t_(first-1)) >= K
        if not ok:
            return False
        for a, b in zip(idx, idx[1:]):
            # need t_(b-1) >= t_a, true iff b - 1 >= a by monotonicity
            if b - 1 < a:
                return False
        return True


def region_face_check(p: int, q: int, K, samples: int = 100, seed: int = 0, near_boundary: bool = False) -> bool:
    """Deleting any coordinate maps sampled points of D^p_q(K) into D^p_(q-1)(K).

    Points have p + q + 1 coordinates t_0..t_(p+q).  Leading coordinates are
    also checked numerically with :func:`region_contains` when representable.
    """
    K = as_rational(K)
    if not K > 1:
        raise PreconditionError("need K > 1")
    if q < 1:
        raise PreconditionError("face maps need q >= 1")
    m = p + q + 1
    rng = random.Random(f"faces:{p}:{q}:{seed}")
    for _ in range(samples):
        base = K + (0 if near_boundary else Fraction(rng.randint(0, 16), 4))
        u = tuple(Fraction(0) if near_boundary else Fraction(rng.randint(0, 16), 4) for _ in range(m - 1))
        tw = Tower(K, base, u)
        if not tw.indices_in_region(range(m)):
            return False
        for i in range(m):
            rest = [j for j in range(m) if j != i]
            if not tw.indices_in_region(rest):
                return False
            # numeric cross-check on the representable prefix of the deleted tuple
            prefix = tw.numeric_prefix(3)
            pts = [prefix[j] for j in rest if j < len(prefix)]
            if pts and not region_contains(pts, RegionSpec(len(pts), K, Fraction(1))):
                return False
    return True
