"""Central arrangements: flats, Poincare polynomials and fiber-type certificates.

A projective configuration in P^m is handled through its cone, the central
arrangement in F^(m+1) cut out by the same linear forms.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from ..errors import PreconditionError, SchemaError
from ..exactlin import as_rational, dot, format_rational, nullspace_rows, rref_rows
from ..projgeom import canonical_vector, project_vector, projection_coordinate
from .linear import LinearConfiguration

CENTRAL_SCHEMA = "grassfold.central/1"


@dataclass(frozen=True)
class CentralArrangement:
    dim: int
    normals: tuple

    @classmethod
    def of(cls, dim: int, normals) -> "CentralArrangement":
        vs = {canonical_vector(v) for v in normals}
        if any(len(v) != dim for v in vs):
            raise PreconditionError("normal vector of the wrong length")
        return cls(dim, tuple(sorted(vs, key=_vkey)))

    @classmethod
    def cone(cls, h: LinearConfiguration) -> "CentralArrangement":
        return cls.of(h.ambient + 1, [s.normal for s in h.hyperplanes()])

    @classmethod
    def boolean(cls, n: int) -> "CentralArrangement":
        return cls.of(n, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def braid(cls, n: int) -> "CentralArrangement":
        rows = []
        for i, j in itertools.combinations(range(n), 2):
            v = [0] * n
            v[i], v[j] = 1, -1
            rows.append(v)
        return cls.of(n, rows)

    def __len__(self):
        return len(self.normals)

    def to_json(self) -> dict:
        return {
            "schema": CENTRAL_SCHEMA,
            "dim": self.dim,
            "normals": [[format_rational(c) for c in v] for v in self.normals],
        }

    @classmethod
    def from_json(cls, obj, where="") -> "CentralArrangement":
        if not isinstance(obj, dict) or obj.get("schema", CENTRAL_SCHEMA) != CENTRAL_SCHEMA:
            raise SchemaError(where + "/schema", f"expected {CENTRAL_SCHEMA!r}")
        try:
            dim = int(obj["dim"])
            normals = [[as_rational(c) for c in v] for v in obj["normals"]]
            return cls.of(dim, normals)
        except (KeyError, TypeError, ValueError, ZeroDivisionError, PreconditionError) as exc:
            raise SchemaError(where, f"bad arrangement: {exc}") from None


def _vkey(v):
    return tuple((c.numerator, c.denominator) for c in v)


def _as_central(h) -> CentralArrangement:
    if isinstance(h, CentralArrangement):
        return h
    if isinstance(h, LinearConfiguration):
        return CentralArrangement.cone(h)
    raise TypeError("expected a CentralArrangement or LinearConfiguration")


def _reduce(v, rows, pivots):
    v = list(v)
    for row, pc in zip(rows, pivots):
        f = v[pc]
        if f != 0:
            v = [a - f * b for a, b in zip(v, row)]
    return v


def flats(arr) -> dict:
    """Map each flat (as the bitmask of hyperplanes containing it) to its rank."""
    a = _as_central(arr)
    N = a.normals
    k = len(N)
    out = {0: 0}
    rows_of = {0: ([], [])}
    frontier = [0]
    while frontier:
        nxt = []
        for mask in frontier:
            rows, piv = rows_of[mask]
            done = mask
            for h in range(k):
                if done >> h & 1:
                    continue
                nrows, npiv = rref_rows(list(rows) + [N[h]], a.dim)
                cl = 0
                for g in range(k):
                    if mask >> g & 1 or g == h or not any(_reduce(N[g], nrows, npiv)):
                        cl |= 1 << g
                done |= cl
                if cl not in out:
                    out[cl] = len(npiv)
                    rows_of[cl] = (nrows, npiv)
                    nxt.append(cl)
        frontier = nxt
    return out


def poincare_polynomial(arr) -> list:
    """Coefficients (low degree first) of sum over flats of mu(X) (-t)^rank(X)."""
    fl = flats(arr)
    order = sorted(fl, key=lambda m: (fl[m], m))
    mu = {}
    for m in order:
        if m == 0:
            mu[m] = 1
            continue
        mu[m] = -sum(mu[t] for t in order if fl[t] < fl[m] and t & ~m == 0)
    deg = max(fl.values())
    coeffs = [0] * (deg + 1)
    for m, r in fl.items():
        coeffs[r] += mu[m] * (-1) ** r
    return coeffs


def whitney_poincare(arr) -> list:
    """Independent oracle: sum over all subsets S of (-1)^|S| (-t)^rank(S)."""
    a = _as_central(arr)
    coeffs = [0] * (a.dim + 1)
    for r in range(len(a.normals) + 1):
        for S in itertools.combinations(a.normals, r):
            rk = len(rref_rows(list(S), a.dim)[1]) if S else 0
            coeffs[rk] += (-1) ** r * (-1) ** rk
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def factor_poincare(coeffs) -> list | None:
    """Positive integers b with prod(1 + b t) equal to the polynomial, or ``None``."""
    c = list(coeffs)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    if c[0] != 1:
        return None
    # g(s) = s^d pi(1/s) is monic with roots -b
    g = c[:]  # coefficient of s^(d-k) is c[k]; g as high-degree-first list
    bs = []
    while len(g) > 1:
        const = g[-1]
        if const <= 0:
            return None
        found = None
        for b in _divisors(const):
            if _eval_high_first(g, -b) == 0:
                found = b
                break
        if found is None:
            return None
        bs.append(found)
        g = _synthetic_div(g, -found)
    return sorted(bs)


def _divisors(n: int):
    n = abs(n)
    return [d for d in range(1, n + 1) if n % d == 0]


def _eval_high_first(g, x):
    acc = 0
    for a in g:
        acc = acc * x + a
    return acc


def _synthetic_div(g, r):
    out = [g[0]]
    for a in g[1:-1]:
        out.append(a + out[-1] * r)
    return out


def expand_factors(bs) -> list:
    out = [1]
    for b in bs:
        nxt = [0] * (len(out) + 1)
        for i, a in enumerate(out):
            nxt[i] += a
            nxt[i + 1] += a * b
        out = nxt
    return out


# --- fiber type --------------------------------------------------------------


@dataclass(frozen=True)
class FiberStage:
    dim: int
    normals: tuple
    center: tuple
    fiber_count: int

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "normals": [[format_rational(c) for c in v] for v in self.normals],
            "center": [format_rational(c) for c in self.center],
            "fiber_count": self.fiber_count,
        }

    @classmethod
    def from_json(cls, obj) -> "FiberStage":
        return cls(
            int(obj["dim"]),
            tuple(tuple(Fraction(c) for c in v) for v in obj["normals"]),
            tuple(Fraction(c) for c in obj["center"]),
            int(obj["fiber_count"]),
        )


@dataclass(frozen=True)
class FiberTypeCertificate:
    chain: tuple
    base_dim: int
    base_normals: tuple

    def exponents(self) -> list:
        """Fiber point counts, top stage first, plus the rank-1 tail if present."""
        tail = [len(self.base_normals)] if self.base_dim == 1 and self.base_normals else []
        return [s.fiber_count for s in self.chain] + tail

    def to_json(self) -> dict:
        return {
            "chain": [s.to_json() for s in self.chain],
            "base": {
                "dim": self.base_dim,
                "normals": [[format_rational(c) for c in v] for v in self.base_normals],
            },
        }

    @classmethod
    def from_json(cls, obj) -> "FiberTypeCertificate":
        base = obj["base"]
        return cls(
            tuple(FiberStage.from_json(s) for s in obj["chain"]),
            int(base["dim"]),
            tuple(tuple(Fraction(c) for c in v) for v in base["normals"]),
        )


@dataclass(frozen=True)
class Refutation:
    dimension: int
    centers_tried: int

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "centers_tried": self.centers_tried}


def _check_c(normals, c):
    """Split into (vertical, nonvertical) and test condition (c) exactly."""
    vertical, nonvert = [], []
    for a in normals:
        (vertical if dot(a, c) == 0 else nonvert).append(a)
    vset = set(vertical)
    for a1, a2 in itertools.combinations(nonvert, 2):
        s1, s2 = dot(a1, c), dot(a2, c)
        beta = tuple(x / s1 - y / s2 for x, y in zip(a1, a2))
        if not any(beta) or canonical_vector(beta) not in vset:
            return vertical, nonvert, False
    return vertical, nonvert, True


def _quotient(vertical, c):
    k = projection_coordinate(c)
    out = set()
    for a in vertical:
        out.add(canonical_vector(a[:k] + a[k + 1:]))
    return tuple(sorted(out, key=_vkey)), k


def _candidate_centers(normals, n, preferred):
    seen = set()

    def fresh(v):
        if not any(v):
            return False
        cv = canonical_vector(v)
        if cv in seen:
            return False
        seen.add(cv)
        return True

    for v in preferred:
        if fresh(v):
            yield canonical_vector(v)
    # lines of the arrangement (rank n-1 flats)
    for S in itertools.combinations(normals, n - 1):
        ker = nullspace_rows(list(S), n)
        if len(ker) == 1 and fresh(ker[0]):
            yield canonical_vector(ker[0])
    for v in nullspace_rows(list(normals), n):
        if fresh(v):
            yield canonical_vector(v)
    for i in range(n):
        e = tuple(Fraction(int(i == j)) for j in range(n))
        if fresh(e):
            yield e


def is_fiber_type(arr, preferred=()):
    """Search for a projection chain; return ``(True, certificate)`` or ``(False, refutation)``.

    ``preferred`` lists candidate centers (in the arrangement's coordinates)
    that are tried first; they are carried down the chain by projection.
    """
    a = _as_central(arr)
    memo = {}
    tried = [0]
    deepest = [a.dim]

    def search(normals, n, pref):
        key = (n, normals)
        if key in memo:
            return memo[key]
        if n <= 1:
            memo[key] = ()
            return ()
        result = None
        for c in _candidate_centers(normals, n, pref):
            tried[0] += 1
            vertical, nonvert, ok = _check_c(normals, c)
            if not ok:
                continue
            quot, k = _quotient(vertical, c)
            sub_pref = []
            for v in pref:
                w = project_vector(v, c, k)
                if any(w):
                    sub_pref.append(w)
            rest = search(quot, n - 1, sub_pref)
            if rest is not None:
                result = (FiberStage(n, normals, c, len(nonvert)),) + rest
                break
        if result is None:
            deepest[0] = min(deepest[0], n)
        memo[key] = result
        return result

    pref = [tuple(Fraction(x) for x in v) for v in preferred]
    chain = search(a.normals, a.dim, pref)
    if chain is None:
        return False, Refutation(deepest[0], tried[0])
    if chain:
        last = chain[-1]
        vertical = [v for v in last.normals if dot(v, last.center) == 0]
        base_normals, _ = _quotient(vertical, last.center)
        base_dim = last.dim - 1
    else:
        base_normals, base_dim = a.normals, a.dim
    return True, FiberTypeCertificate(chain, base_dim, base_normals)


def verify_fiber_certificate(arr, cert: FiberTypeCertificate, samples: int = 3, seed: int = 0) -> bool:
    """Replay conditions (a)-(c) along the chain, plus sampled fiber counts."""
    a = _as_central(arr)
    rng = random.Random(seed)
    normals, n = a.normals, a.dim
    for st in cert.chain:
        if st.dim != n or tuple(st.normals) != tuple(normals):
            return False
        c = st.center
        if not any(c):
            return False
        vertical, nonvert, ok = _check_c(normals, c)
        if not ok or len(nonvert) != st.fiber_count:
            return False
        k = projection_coordinate(c)
        for _ in range(samples):
            w = [Fraction(rng.randint(-50, 50), rng.randint(1, 7)) for _ in range(n)]
            w[k] = Fraction(0)
            if any(dot(v, w) == 0 for v in vertical):
                continue
            roots = {-dot(al, w) / dot(al, c) for al in nonvert}
            if len(roots) != st.fiber_count:
                return False
        normals, _ = _quotient(vertical, c)
        n -= 1
    if n != cert.base_dim or tuple(normals) != tuple(cert.base_normals):
        return False
    return n <= 1
