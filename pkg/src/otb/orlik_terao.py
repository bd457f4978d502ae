"""The Orlik-Terao algebra of a line arrangement.

For forms a_1..a_d the ideal I in Q[y_1..y_d] is generated by the circuit
relations; the algebra C(A) = R/I is also the image of the substitution
y_k -> l_k := (a_1*...*a_d)/a_k, which gives a Groebner-free membership
test: a homogeneous g lies in I iff g(l_1,...,l_d) expands to zero.

Graded slices of I are echelonized exactly; the quotient monomial basis of
each slice carries the multiplication-by-variable maps that the Koszul
strand computations consume.  Dimensions in degrees past the exact window
are certified at two independent primes via the substitution matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .arrangement import Arrangement, poincare_polynomial
from .circuits import Circuit, circuit_relation, enumerate_circuits
from .exact import (MODP_PRIMES, MPoly, RatMatrix, SparseReducer,
                    modp_rank, monomials_of_degree, solve)


# ---------------------------------------------------------------------------
# Presentation


def l_forms(arr: Arrangement) -> list:
    """l_i = (product of all forms) / (form i), degree d-1 in (x,y,z),
    computed by prefix/suffix products."""
    lins = [MPoly.linear_form(f) for f in arr.forms]
    d = len(lins)
    pre = [MPoly.constant(3, 1)]
    for q in lins:
        pre.append(pre[-1] * q)
    suf = [MPoly.constant(3, 1)]
    for q in reversed(lins):
        suf.append(suf[-1] * q)
    suf.reverse()
    return [pre[i] * suf[i + 1] for i in range(d)]


class GradedPiece:
    """Degree-j slice: ambient monomials of R_j, an exact echelon basis of
    I_j, and the complement monomial basis of C(A)_j."""

    def __init__(self, degree: int, monomials: list, reducer: SparseReducer):
        self.degree = degree
        self.monomials = monomials
        self.index = {m: k for k, m in enumerate(monomials)}
        self.reducer = reducer
        self.ideal_dim = reducer.rank
        self.quotient_cols = reducer.nonpivot_columns()
        self.quotient_basis = [monomials[c] for c in self.quotient_cols]
        self.quotient_index = {c: k for k, c in enumerate(self.quotient_cols)}

    @property
    def quotient_dim(self) -> int:
        return len(self.quotient_cols)

    def reduce_vector(self, vec: dict) -> dict:
        """Image in C(A)_j of a vector over ambient monomial indices, as a
        dict over quotient-basis positions."""
        res = self.reducer.reduce(vec)
        return {self.quotient_index[c]: v for c, v in res.items()}


class OTPresentation:
    """Circuit generators, l-forms, and cached graded data."""

    def __init__(self, arr: Arrangement, max_circuit_size: int | None = None):
        self.arrangement = arr
        self.d = arr.d
        self.circuits = enumerate_circuits(arr, max_circuit_size)
        self.generators = [circuit_relation(c) for c in self.circuits]
        self.l = l_forms(arr)
        self._pieces: dict[int, GradedPiece] = {}
        self._mult: dict[int, list] = {}

    # degree window where the exact echelon is kept (the Koszul strands and
    # the theta-quotients need the structure, not just dimensions)
    def exact_degree_limit(self) -> int:
        return 5 if self.d <= 6 else 3

    def graded_piece(self, j: int) -> GradedPiece:
        if j in self._pieces:
            return self._pieces[j]
        monos = monomials_of_degree(self.d, j)
        red = SparseReducer(len(monos))
        if j >= 2:
            prev = self.graded_piece(j - 1)
            index = {m: k for k, m in enumerate(monos)}
            for row in prev.reducer.pivot_rows.values():
                for s in range(self.d):
                    shifted = {}
                    for c, v in row.items():
                        m = list(prev.monomials[c])
                        m[s] += 1
                        shifted[index[tuple(m)]] = v
                    red.add(shifted)
            for g in self.generators:
                if g.degree() == j:
                    red.add({index[e]: c for e, c in g.terms.items()})
        piece = GradedPiece(j, monos, red)
        self._pieces[j] = piece
        return piece

    def multiplication_maps(self, q: int) -> list:
        """For each variable s, the map C(A)_q -> C(A)_{q+1} as a list of
        sparse columns (dict target-position -> coefficient), one column per
        quotient basis element of degree q."""
        if q in self._mult:
            return self._mult[q]
        src = self.graded_piece(q)
        dst = self.graded_piece(q + 1)
        maps = []
        for s in range(self.d):
            cols = []
            for m in src.quotient_basis:
                e = list(m)
                e[s] += 1
                cols.append(dst.reduce_vector({dst.index[tuple(e)]: Fraction(1)}))
            maps.append(cols)
        self._mult[q] = maps
        return maps

    def ideal_dimension(self, j: int) -> int:
        if j <= 1:
            return 0
        if j <= self.exact_degree_limit():
            return self.graded_piece(j).ideal_dim
        return comb(self.d - 1 + j, j) - substitution_quotient_dim(self, j)

    def quotient_dimension(self, j: int) -> int:
        return comb(self.d - 1 + j, j) - self.ideal_dimension(j)


def b2_dimensions(pres: OTPresentation, j: int) -> int:
    """dim C(A)_j = dim R_j - dim I_j."""
    return pres.quotient_dimension(j)


# ---------------------------------------------------------------------------
# Substitution-matrix dimensions (dual-prime certified)


@lru_cache(maxsize=None)
def _shift_tables(degree: int):
    """Index maps sending a monomial of S_degree to its product with x, y, z
    inside the degree+1 monomial list."""
    src = monomials_of_degree(3, degree)
    dst = {m: k for k, m in enumerate(monomials_of_degree(3, degree + 1))}
    tables = []
    for axis in range(3):
        tab = np.empty(len(src), dtype=np.int64)
        for k, m in enumerate(src):
            e = list(m)
            e[axis] += 1
            tab[k] = dst[tuple(e)]
        tables.append(tab)
    return tables


def _times_linear_form(vec: np.ndarray, degree: int, form, p: int) -> np.ndarray:
    out = np.zeros(len(monomials_of_degree(3, degree + 1)), dtype=np.int64)
    tables = _shift_tables(degree)
    for axis in range(3):
        c = form[axis] % p
        if c:
            out[tables[axis]] += c * vec  # each shift table is injective
    return out % p


def _substitution_rows(pres: OTPresentation, j: int, p: int) -> np.ndarray:
    """Rows: images of all degree-j monomials of R under y_k -> l_k, as
    coefficient vectors in S_{j(d-1)}, mod p.  Prefix products are shared
    along the lexicographic enumeration of exponent vectors."""
    d = pres.d
    forms = pres.arrangement.forms
    target_dim = len(monomials_of_degree(3, j * (d - 1)))
    nrows = comb(d - 1 + j, j)
    rows = np.zeros((nrows, target_dim), dtype=np.int64)
    counter = [0]

    def times_l(vec: np.ndarray, degree: int, i: int) -> np.ndarray:
        for k, f in enumerate(forms):
            if k == i:
                continue
            vec = _times_linear_form(vec, degree, f, p)
            degree += 1
        return vec

    def rec(var: int, remaining: int, prod: np.ndarray, degree: int):
        if var == d - 1:
            q, deg = prod, degree
            for _ in range(remaining):
                q = times_l(q, deg, var)
                deg += d - 1
            rows[counter[0], :] = q
            counter[0] += 1
            return
        for e in range(remaining, -1, -1):
            q, deg = prod, degree
            for _ in range(e):
                q = times_l(q, deg, var)
                deg += d - 1
            rec(var + 1, remaining - e, q, deg)

    rec(0, j, np.ones(1, dtype=np.int64), 0)
    if counter[0] != nrows:
        raise AssertionError("monomial enumeration mismatch")
    return rows


def substitution_quotient_dim(pres: OTPresentation, j: int) -> int:
    """dim C(A)_j as the rank of the substitution matrix, certified by
    agreement at two primes (rank mod p never exceeds the rational rank)."""
    got = []
    for p in MODP_PRIMES:
        got.append(modp_rank(_substitution_rows(pres, j, p), p))
        if len(got) == 2:
            break
    if got[0] != got[1]:
        raise ArithmeticError("substitution rank differs between primes; "
                              "enlarge the prime list")
    return got[0]


# ---------------------------------------------------------------------------
# Terao Hilbert series


@dataclass(frozen=True)
class TeraoSeries:
    h_polynomial: tuple     # numerator over (1-t)^3
    coefficients: tuple     # Taylor coefficients through the requested degree


def terao_series(arr: Arrangement, upto: int = 5) -> TeraoSeries:
    """Hilbert series of C(A): substitute t/(1-t) into the Poincare
    polynomial; returns the numerator h over (1-t)^3 and the expansion."""
    c = poincare_polynomial(arr).coefficients
    # numerator: sum c_k t^k (1-t)^(3-k); degree 3 coefficient cancels
    h = [0, 0, 0, 0]
    for k, ck in enumerate(c):
        # (1-t)^(3-k) expansion
        for i in range(3 - k + 1):
            h[k + i] += ck * comb(3 - k, i) * (-1) ** i
    if h[3] != 0:
        raise ArithmeticError("h-polynomial has degree > 2")
    hpoly = tuple(h[:3])
    coeffs = tuple(sum(hpoly[i] * comb(j - i + 2, 2)
                       for i in range(3) if j - i >= 0)
                   for j in range(upto + 1))
    return TeraoSeries(h_polynomial=hpoly, coefficients=coeffs)


def multiplicity(arr: Arrangement) -> int:
    """h(1): the degree of the image surface, and the colength that the
    Artinian reduction of C(A) must attain."""
    return sum(terao_series(arr, 0).h_polynomial)


# ---------------------------------------------------------------------------
# Membership by substitution


def membership(pres: OTPresentation, g: MPoly) -> bool:
    """Exact ideal membership: homogeneous g is in I iff its pullback under
    y_k -> l_k vanishes identically."""
    if g.nvars != pres.d:
        raise ValueError("polynomial lives in the wrong ring")
    if not g.is_homogeneous():
        raise ValueError("membership test is per-degree; g must be homogeneous")
    return g.compose(pres.l).is_zero()


# ---------------------------------------------------------------------------
# Hilbert-Burch matrix


class HilbertBurchError(AssertionError):
    """The bidiagonal matrix failed its syzygy/minor verification."""


def hilbert_burch_psi(arr: Arrangement, verify: bool = True) -> list:
    """The d x (d-1) bidiagonal matrix with entry (i,i) = a_i and
    (i+1,i) = -a_{i+1}; columns are syzygies of (l_1..l_d) and the maximal
    minor deleting row i equals (-1)^(d-i) l_i (verified symbolically)."""
    d = arr.d
    lins = [MPoly.linear_form(f) for f in arr.forms]
    zero = MPoly.zero(3)
    psi = [[zero] * (d - 1) for _ in range(d)]
    for j in range(d - 1):
        psi[j][j] = lins[j]
        psi[j + 1][j] = -lins[j + 1]
    if verify:
        ls = l_forms(arr)
        for j in range(d - 1):
            dot = MPoly.zero(3)
            for i in range(d):
                if not psi[i][j].is_zero():
                    dot = dot + psi[i][j] * ls[i]
            if not dot.is_zero():
                raise HilbertBurchError("column %d is not a syzygy" % j)
        from .exact import mpoly_det
        for i in range(d):
            sub = [psi[r] for r in range(d) if r != i]
            minor = mpoly_det(sub)
            expect = ls[i] if (d - 1 - i) % 2 == 0 else -ls[i]
            if minor != expect:
                raise HilbertBurchError("minor %d is not +-l_%d" % (i, i))
    return psi


# ---------------------------------------------------------------------------
# Jacobian ideal and the gradient map


def defining_polynomial(arr: Arrangement) -> MPoly:
    total = MPoly.constant(3, 1)
    for f in arr.forms:
        total = total * MPoly.linear_form(f)
    return total


def jacobian_containment(arr: Arrangement) -> bool:
    """Whether each partial of the defining polynomial lies in the span of
    the l_i (the degree d-1 slice of the ideal they generate)."""
    alpha = defining_polynomial(arr)
    ls = l_forms(arr)
    monos = monomials_of_degree(3, arr.d - 1)
    index = {m: k for k, m in enumerate(monos)}
    cols = []
    for l in ls:
        v = [Fraction(0)] * len(monos)
        for e, c in l.terms.items():
            v[index[e]] = c
        cols.append(v)
    m = RatMatrix([[cols[j][r] for j in range(arr.d)] for r in range(len(monos))])
    for axis in range(3):
        part = alpha.derivative(axis)
        b = [Fraction(0)] * len(monos)
        for e, c in part.terms.items():
            b[index[e]] = c
        if solve(m, b) is None:
            return False
    return True


def gradient_degree(arr: Arrangement) -> int:
    """Degree of the gradient map of the defining polynomial:
    (sum of the Mobius values of the rank-two flats) - d + 1."""
    return arr.sum_mu() - arr.d + 1
