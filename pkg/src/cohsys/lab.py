"""Monte-Carlo stability lab for explicit coherent systems (E, V).

E = O(a_1) + ... + O(a_n) is split; a section of E is a vector of binary
forms and is stored as the concatenation of their coefficient vectors
(the coefficient of x^(a_i - j) y^j at offset off_i + j). V is a k-row
integer matrix in these coordinates.

A candidate subsystem is the image of a sheaf map
phi: O(b_1) + ... + O(b_n1) -> E, entry (i, j) a form of degree a_i - b_j.
Its sections are phi(H^0), and k1 = dim(V cap phi(H^0)). Subsheaves are
not saturated: saturating only raises d1 and keeps V1, so an unsaturated
violation is already a violation.

Negative b_j are never sampled: an O(b) factor with b < 0 has no sections
and only lowers the slope, so dropping it can only help a destabiliser.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from .core import INF, ExtRat, alpha_slope, as_rat, decompose, fmt_ext, h0_split
from .linalg import PRIME, bareiss_det, bareiss_rank, batch_rank_modp

COEFF_BOUND = 10_000
MAX_REDRAWS = 32
CHUNK = 2048


class LabError(ValueError):
    pass


@dataclass(frozen=True)
class SplitBundle:
    degrees: Tuple[int, ...]

    def __post_init__(self):
        degs = tuple(int(x) for x in self.degrees)
        if list(degs) != sorted(degs, reverse=True):
            raise ValueError("splitting degrees must be nonincreasing")
        object.__setattr__(self, "degrees", degs)

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def degree(self) -> int:
        return sum(self.degrees)

    @property
    def h0(self) -> int:
        return h0_split(self.degrees)

    @property
    def offsets(self) -> Tuple[int, ...]:
        out, pos = [], 0
        for a in self.degrees:
            out.append(pos)
            pos += max(0, a + 1)
        return tuple(out)

    @property
    def is_generic(self) -> bool:
        return not self.degrees or self.degrees[0] <= self.degrees[-1] + 1


@dataclass(frozen=True)
class SectionSystem:
    bundle: SplitBundle
    basis: Tuple[Tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.basis)

    @property
    def type(self) -> Tuple[int, int, int]:
        return (self.bundle.rank, self.bundle.degree, self.k)

    def to_dict(self) -> dict:
        return {"degrees": list(self.bundle.degrees), "basis": [list(r) for r in self.basis]}


@dataclass(frozen=True)
class HomSample:
    sub_degrees: Tuple[int, ...]
    # matrix[i][j] = coefficients of the form of degree a_i - b_j (empty if negative)
    matrix: Tuple[Tuple[Tuple[int, ...], ...], ...]
    injective: bool

    def to_dict(self) -> dict:
        return {
            "sub_degrees": list(self.sub_degrees),
            "matrix": [[list(e) for e in row] for row in self.matrix],
            "injective": self.injective,
        }


@dataclass(frozen=True)
class AlphaRange:
    """Set of alpha > 0 on which a subsystem destabilises."""

    lo: Fraction
    hi: ExtRat
    lo_closed: bool
    hi_closed: bool

    def __contains__(self, alpha) -> bool:
        alpha = as_rat(alpha)
        if alpha <= 0:
            return False
        above = alpha > self.lo or (self.lo_closed and alpha == self.lo)
        below = self.hi is INF or alpha < self.hi or (self.hi_closed and alpha == self.hi)
        return above and below

    def __str__(self):
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{fmt_ext(self.lo)},{fmt_ext(self.hi)}{right}"


@dataclass(frozen=True)
class Violation:
    n1: int
    d1: int
    k1: int
    alpha_range: AlphaRange
    sub_slope: Fraction
    slope: Fraction
    hom: HomSample

    def to_dict(self) -> dict:
        return {
            "type": [self.n1, self.d1, self.k1],
            "alpha_range": str(self.alpha_range),
            "sub_slope": fmt_ext(self.sub_slope),
            "slope": fmt_ext(self.slope),
            "hom": self.hom.to_dict(),
        }


@dataclass
class LabReport:
    system: SectionSystem
    alpha: Fraction
    budget: int
    seed: int
    violations: List[Violation] = field(default_factory=list)
    samples: Dict[Tuple[int, ...], int] = field(default_factory=dict)
    degenerate: Dict[Tuple[int, ...], int] = field(default_factory=dict)
    near_miss_checks: int = 0

    def to_dict(self) -> dict:
        n, d, k = self.system.type
        return {
            "system": {"n": n, "d": d, "k": k, **self.system.to_dict()},
            "alpha": fmt_ext(self.alpha),
            "budget": self.budget,
            "seed": self.seed,
            "violations": [v.to_dict() for v in self.violations],
            "samples": {",".join(map(str, b)): c for b, c in self.samples.items()},
            "degenerate": {",".join(map(str, b)): c for b, c in self.degenerate.items() if c},
            "near_miss_checks": self.near_miss_checks,
            "note": "subsheaves are not saturated; saturation can only strengthen a violation",
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


# ------------------------------------------------------------ systems

def generic_bundle(n: int, d: int) -> SplitBundle:
    if n < 1:
        raise ValueError("n must be >= 1")
    a, t = decompose(n, d)
    return SplitBundle((a,) * (n - t) + (a - 1,) * t)


def _rng(seed, *salt) -> np.random.Generator:
    return np.random.default_rng([int(seed) & 0xFFFFFFFF, *(int(s) + 1000 for s in salt)])


def sample_system(n: int, d: int, k: int, seed: int) -> SectionSystem:
    bundle = generic_bundle(n, d)
    h0 = bundle.h0
    if k > h0:
        raise LabError(f"k = {k} exceeds h0(E) = {h0}")
    rng = _rng(seed, 0)
    for _ in range(MAX_REDRAWS):
        rows = rng.integers(-COEFF_BOUND, COEFF_BOUND + 1, size=(k, h0)).tolist()
        if bareiss_rank(rows) == k:
            return SectionSystem(bundle, tuple(tuple(r) for r in rows))
    raise LabError(f"no rank-{k} draw in {MAX_REDRAWS} attempts")


def _section_forms(bundle: SplitBundle, row: Sequence[int]) -> List[List[int]]:
    out = []
    for a, off in zip(bundle.degrees, bundle.offsets):
        out.append(list(row[off:off + max(0, a + 1)]))
    return out


def _binary_form_poly(coeffs: Sequence[int], deg: int, x):
    # y = 1 chart: sum c_j x^(deg - j)
    return sum(int(c) * x ** (deg - j) for j, c in enumerate(coeffs))


def evaluation_surjective(sys: SectionSystem, rng: np.random.Generator) -> bool:
    """Does V (x) O -> E surject? Certified by two random combinations of
    maximal minors having no common zero on P^1 (a False may be unlucky)."""
    bundle = sys.bundle
    n, k = bundle.rank, sys.k
    if k < n:
        return False
    d = bundle.degree
    x = sympy.Symbol("x")
    cols = [_section_forms(bundle, row) for row in sys.basis]
    forms = []
    for _ in range(2):
        r = rng.integers(-50, 51, size=(k, n)).tolist()
        values = []
        for pt in range(d + 1):
            mat = [[0] * n for _ in range(n)]
            for i, a in enumerate(bundle.degrees):
                ev = [sum(int(c) * pt ** (a - j) for j, c in enumerate(cols[s][i])) for s in range(k)]
                for jj in range(n):
                    mat[i][jj] = sum(ev[s] * r[s][jj] for s in range(k))
            values.append((pt, bareiss_det(mat)))
        forms.append(sympy.Poly(sympy.interpolate(values, x), x))
    f1, f2 = forms
    if f1.is_zero or f2.is_zero:
        return False
    if f1.degree() < d and f2.degree() < d:
        return False  # common zero at the point at infinity
    return sympy.gcd(f1, f2).degree() == 0


def quotient_construct(n: int, d: int, k: int, seed: int) -> SectionSystem:
    """(E, V) with V (x) O -> E surjective and V = image of constant sections."""
    if k <= n:
        raise LabError("quotient construction needs k > n")
    if d <= 0:
        raise LabError("quotient construction needs d > 0")
    bundle = generic_bundle(n, d)
    if k > bundle.h0:
        raise LabError(f"k = {k} exceeds h0(E) = {bundle.h0}")
    rng = _rng(seed, 1)
    for _ in range(MAX_REDRAWS):
        rows = rng.integers(-COEFF_BOUND, COEFF_BOUND + 1, size=(k, bundle.h0)).tolist()
        if bareiss_rank(rows) != k:
            continue
        sys = SectionSystem(bundle, tuple(tuple(r) for r in rows))
        if evaluation_surjective(sys, rng):
            return sys
    raise LabError(f"no surjective presentation found in {MAX_REDRAWS} attempts")


# ----------------------------------------------------------- subtypes

def _fits(sub: Sequence[int], degrees: Sequence[int]) -> bool:
    # a generic map is injective iff each threshold count fits
    return all(
        sum(1 for b in sub if b >= c) <= sum(1 for a in degrees if a >= c)
        for c in set(sub)
    )


def subtype_catalog(bundle: SplitBundle, k: int, alpha) -> List[Tuple[int, ...]]:
    """Degree lists whose most optimistic subsystem could reach the slope."""
    alpha = as_rat(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    n = bundle.rank
    if n <= 1 or not bundle.degrees:
        return []
    target = alpha_slope(n, bundle.degree, k, alpha)
    top = max(bundle.degrees[0], 0)
    out = []
    for n1 in range(1, n):
        for sub in itertools.combinations_with_replacement(range(top, -1, -1), n1):
            if not _fits(sub, bundle.degrees):
                continue
            k1 = min(k, h0_split(sub))
            if alpha_slope(n1, sum(sub), k1, alpha) >= target:
                out.append(tuple(sub))
    return out


def _sub_offsets(sub: Sequence[int]) -> List[int]:
    out, pos = [], 0
    for b in sub:
        out.append(pos)
        pos += b + 1
    return out


def _image_rows_batch(bundle: SplitBundle, sub: Sequence[int], coeffs: Dict) -> np.ndarray:
    """Sections phi(H^0(E1)) for a batch of homs, as (B, h0(E1), h0(E))."""
    some = next(iter(coeffs.values()))
    bsz = some.shape[0]
    h0e = bundle.h0
    out = np.zeros((bsz, h0_split(sub), h0e), dtype=np.int64)
    soff = _sub_offsets(sub)
    for j, b in enumerate(sub):
        for e in range(b + 1):
            row = soff[j] + e
            for i, (a, off) in enumerate(zip(bundle.degrees, bundle.offsets)):
                deg = a - b
                if deg < 0:
                    continue
                out[:, row, off + e: off + e + deg + 1] = coeffs[(i, j)]
    return out


def _image_rows_exact(bundle: SplitBundle, hom: HomSample) -> List[List[int]]:
    sub = hom.sub_degrees
    rows = []
    for j, b in enumerate(sub):
        for e in range(b + 1):
            row = [0] * bundle.h0
            for i, (a, off) in enumerate(zip(bundle.degrees, bundle.offsets)):
                for r, c in enumerate(hom.matrix[i][j]):
                    row[off + e + r] = int(c)
            rows.append(row)
    return rows


def _draw_coeffs(rng, bundle: SplitBundle, sub: Sequence[int], size: int) -> Dict:
    coeffs = {}
    for i, a in enumerate(bundle.degrees):
        for j, b in enumerate(sub):
            if a - b >= 0:
                coeffs[(i, j)] = rng.integers(-COEFF_BOUND, COEFF_BOUND + 1, size=(size, a - b + 1))
    return coeffs


def _eval_batch(bundle, sub, coeffs, point: int) -> np.ndarray:
    bsz = next(iter(coeffs.values())).shape[0]
    out = np.zeros((bsz, bundle.rank, len(sub)), dtype=np.int64)
    for (i, j), c in coeffs.items():
        deg = c.shape[1] - 1
        powers = np.array([pow(point, deg - r, PRIME) for r in range(deg + 1)], dtype=np.int64)
        out[:, i, j] = ((c % PRIME) * powers[None, :] % PRIME).sum(axis=1) % PRIME
    return out


def hom_from_coeffs(bundle: SplitBundle, sub: Sequence[int], coeffs: Dict, idx: int) -> HomSample:
    matrix = tuple(
        tuple(tuple(int(x) for x in coeffs[(i, j)][idx]) if (i, j) in coeffs else ()
              for j in range(len(sub)))
        for i in range(bundle.rank)
    )
    return HomSample(tuple(sub), matrix, is_injective_exact(bundle, tuple(sub), matrix))


def is_injective_exact(bundle: SplitBundle, sub, matrix) -> bool:
    """Generic rank n1, certified at an integer point (a miss is possible
    only in the False direction)."""
    n1 = len(sub)
    for pt in (2, 3, 5, 7, 11):
        vals = [
            [sum(int(c) * pt ** (len(matrix[i][j]) - 1 - r) for r, c in enumerate(matrix[i][j]))
             for j in range(n1)]
            for i in range(bundle.rank)
        ]
        if bareiss_rank(vals) == n1:
            return True
    return False


def intersection_dim(sys: SectionSystem, hom: HomSample) -> int:
    """dim(V cap phi(H^0(E1))), exact."""
    if not hom.injective:
        raise LabError("sheaf map is not injective")
    urows = _image_rows_exact(sys.bundle, hom)
    rank = bareiss_rank([list(r) for r in sys.basis] + urows)
    k1 = sys.k + len(urows) - rank
    assert k1 >= sys.k - (sys.bundle.h0 - len(urows))
    return k1


def destabilizing_range(n: int, d: int, k: int, n1: int, d1: int, k1: int) -> Optional[AlphaRange]:
    """alpha > 0 with mu_alpha(n1,d1,k1) >= mu_alpha(n,d,k), or None."""
    c0 = n * d1 - n1 * d
    c1 = n * k1 - n1 * k
    if c1 > 0:
        lo = Fraction(-c0, c1)
        if lo <= 0:
            return AlphaRange(Fraction(0), INF, False, False)
        return AlphaRange(lo, INF, True, False)
    if c1 < 0:
        hi = Fraction(c0, -c1)
        if hi <= 0:
            return None
        return AlphaRange(Fraction(0), hi, False, True)
    return AlphaRange(Fraction(0), INF, False, False) if c0 >= 0 else None


def _quotient_map_modp(sys: SectionSystem) -> np.ndarray:
    """Integer h0 x (h0-k) matrix Q with ker(Q^T) = V, reduced mod p.

    rank [V; U] = k + rank(U Q), so only the smaller product is ranked.
    """
    null = sympy.Matrix([list(r) for r in sys.basis]).nullspace()
    cols = []
    for vec in null:
        den = sympy.ilcm(*[sympy.fraction(x)[1] for x in vec])
        cols.append([int(x * den) % PRIME for x in vec])
    return np.array(cols, dtype=np.int64).T.reshape(sys.bundle.h0, len(cols))


def _mulmod(u: np.ndarray, q: np.ndarray) -> np.ndarray:
    # |u| <= 10^4 and q < 2^31, so each row of sums stays far below 2^63
    assert q.shape[0] * COEFF_BOUND * PRIME < 1 << 62
    return np.matmul(u, q) % PRIME


def _exact_batch(sys: SectionSystem, sub, coeffs, size: int):
    """Injectivity and k1 for every sample in rational arithmetic only."""
    inj = np.zeros(size, dtype=bool)
    k1s = np.full(size, -1, dtype=np.int64)
    for idx in range(size):
        hom = hom_from_coeffs(sys.bundle, sub, coeffs, idx)
        if hom.injective:
            inj[idx] = True
            k1s[idx] = intersection_dim(sys, hom)
    return inj, k1s


def violation_search(sys: SectionSystem, alpha, budget: int, seed: int,
                     exact: bool = False) -> LabReport:
    """Sample injective homs per catalog subtype; report exact violations.

    The default path ranks batches over F_p and re-verifies hits exactly;
    ``exact=True`` does all linear algebra over the rationals (slow).

    Sampling for a subtype stops at its first confirmed violation. An empty
    result is evidence of alpha-stability, not a proof.
    """
    alpha = as_rat(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    bundle = sys.bundle
    n, d, k = sys.type
    slope = alpha_slope(n, d, k, alpha)
    report = LabReport(sys, alpha, budget, seed)
    qmap = _quotient_map_modp(sys)
    for sub in subtype_catalog(bundle, k, alpha):
        n1, d1, h1 = len(sub), sum(sub), h0_split(sub)
        # smallest k1 that violates at this alpha
        need = None
        for k1 in range(0, min(k, h1) + 1):
            if alpha_slope(n1, d1, k1, alpha) >= slope:
                need = k1
                break
        rng = _rng(seed, len(sub), *sub)
        drawn = degenerate = 0
        found = None
        while drawn < budget and found is None:
            size = min(CHUNK, budget - drawn)
            coeffs = _draw_coeffs(rng, bundle, sub, size)
            if exact:
                inj, k1s = _exact_batch(sys, sub, coeffs, size)
            else:
                point = int(rng.integers(2, PRIME - 1))
                inj = batch_rank_modp(_eval_batch(bundle, sub, coeffs, point)) == n1
                urows = _image_rows_batch(bundle, sub, coeffs)
                if qmap.shape[1]:
                    k1s = h1 - batch_rank_modp(_mulmod(urows, qmap))
                else:
                    k1s = np.full(size, h1, dtype=np.int64)
            # rank mod p <= rank over Q, so k1s >= the exact k1 >= this bound
            assert np.all(k1s[inj] >= k - (bundle.h0 - h1))
            drawn += size
            degenerate += int((~inj).sum())
            for idx in np.nonzero(inj & (k1s >= need))[0] if need is not None else []:
                hom = hom_from_coeffs(bundle, sub, coeffs, int(idx))
                if not hom.injective:
                    continue
                k1 = intersection_dim(sys, hom)
                if alpha_slope(n1, d1, k1, alpha) < slope:
                    continue
                rng_ = destabilizing_range(n, d, k, n1, d1, k1)
                assert rng_ is not None and alpha in rng_
                found = Violation(n1, d1, k1, rng_, alpha_slope(n1, d1, k1, alpha), slope, hom)
                break
            if not exact and found is None and need is not None:
                # a near miss cannot hide a violation (rank mod p <= rank over Q);
                # one exact recomputation per chunk audits the fast path anyway
                near = np.nonzero(inj & (k1s == need - 1))[0]
                if near.size:
                    hom = hom_from_coeffs(bundle, sub, coeffs, int(near[0]))
                    if hom.injective:
                        report.near_miss_checks += 1
                        assert intersection_dim(sys, hom) <= need - 1
        report.samples[tuple(sub)] = drawn
        report.degenerate[tuple(sub)] = degenerate
        if found is not None:
            report.violations.append(found)
    return report
