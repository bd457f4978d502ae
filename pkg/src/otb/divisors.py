"""Divisors on the blowup of the plane at the singular points of an
arrangement, and exact section counts via fat-point ideals.

A class m E_0 - sum a_p E_p is stored as the integer m together with the
multiplicities a_p on the rank-two flats.  The intersection pairing is
E_0^2 = 1, E_p^2 = -1, mixed products zero; the canonical class is
-3 E_0 + sum E_p.  Sections of a class with nonnegative coefficients are
the degree-m forms vanishing to order >= a_p at each p, computed exactly
from the matrix of derivative conditions (redundant rows are harmless:
only the rank enters).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .arrangement import Arrangement, FlatPoint
from .exact import (MPoly, RatMatrix, kernel_basis, monomials_of_degree,
                    primitive_vector)


class DivisorClass:
    """mE_0 - sum mults[p] E_p; componentwise arithmetic."""

    def __init__(self, m: int, mults: dict):
        self.m = int(m)
        self.mults = {p: int(v) for p, v in mults.items() if int(v) != 0}

    def mult(self, p: FlatPoint) -> int:
        return self.mults.get(p, 0)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        out = dict(self.mults)
        for p, v in other.mults.items():
            out[p] = out.get(p, 0) + v
        return DivisorClass(self.m + other.m, out)

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        out = dict(self.mults)
        for p, v in other.mults.items():
            out[p] = out.get(p, 0) - v
        return DivisorClass(self.m - other.m, out)

    def __rmul__(self, c: int) -> "DivisorClass":
        return DivisorClass(c * self.m, {p: c * v for p, v in self.mults.items()})

    def __eq__(self, other):
        return isinstance(other, DivisorClass) and self.m == other.m \
            and self.mults == other.mults

    def __repr__(self):
        return "DivisorClass(m=%d, %d points)" % (self.m, len(self.mults))


def exceptional(p: FlatPoint) -> DivisorClass:
    """E_p as a class (note the sign convention: mult -1)."""
    return DivisorClass(0, {p: -1})


def line_class() -> DivisorClass:
    return DivisorClass(1, {})


def canonical_class(arr: Arrangement) -> DivisorClass:
    return DivisorClass(-3, {p: -1 for p in arr.flats})


def pairing(d1: DivisorClass, d2: DivisorClass) -> int:
    total = d1.m * d2.m
    for p, v in d1.mults.items():
        total -= v * d2.mults.get(p, 0)
    return total


def riemann_roch_chi(arr: Arrangement, div: DivisorClass) -> int:
    """(D^2 - D.K)/2 + 1; integral for every integral class."""
    k = canonical_class(arr)
    num = pairing(div, div) - pairing(div, k)
    if num % 2:
        raise ArithmeticError("Riemann-Roch numerator is odd")
    return num // 2 + 1


def divisor_DA(arr: Arrangement) -> DivisorClass:
    """(d-1) E_0 - sum mu(p) E_p, the class cut out by the l_i."""
    return DivisorClass(arr.d - 1, {p: p.mu for p in arr.flats})


@dataclass
class SectionSpace:
    degree: int
    basis: list            # MPoly in (x, y, z), primitive integer vectors
    dimension: int
    conditions_shape: tuple  # (rows, cols) of the condition matrix


def vanishing_condition_rows(point, order: int, degree: int) -> list:
    """Rows imposing vanishing to order >= `order` at the point on the
    space of degree-`degree` forms: every partial derivative of total order
    < `order`, evaluated at a primitive representative.  Rows may be
    redundant; callers use ranks."""
    monos = monomials_of_degree(3, degree)
    pt = [Fraction(v) for v in point]
    rows = []
    for alpha in range(order):
        for a in range(alpha + 1):
            for b in range(alpha - a + 1):
                c = alpha - a - b
                row = []
                for m in monos:
                    if m[0] < a or m[1] < b or m[2] < c:
                        row.append(Fraction(0))
                        continue
                    coeff = Fraction(1)
                    for e, k in zip(m, (a, b, c)):
                        for t in range(k):
                            coeff *= e - t
                    val = coeff
                    for e, k, x in zip(m, (a, b, c), pt):
                        val *= x ** (e - k)
                    row.append(val)
                rows.append(row)
    return rows


def h0_fatpoints(arr: Arrangement, div: DivisorClass) -> SectionSpace:
    """Exact global sections of a class with m >= 0 and all a_p >= 0: the
    degree-m slice of the intersection of the fat-point ideals."""
    if div.m < 0:
        raise ValueError("not a fat-point divisor: negative degree")
    for p, v in div.mults.items():
        if v < 0:
            raise ValueError("not a fat-point divisor: negative multiplicity "
                             "at %s" % (p.point,))
    monos = monomials_of_degree(3, div.m)
    rows = []
    for p, v in sorted(div.mults.items(), key=lambda kv: kv[0].point):
        rows.extend(vanishing_condition_rows(p.point, v, div.m))
    if not rows:
        basis = [MPoly.monomial(3, m) for m in monos]
        return SectionSpace(div.m, basis, len(monos), (0, len(monos)))
    mat = RatMatrix(rows)
    ker = kernel_basis(mat)
    basis = []
    for c in range(ker.ncols):
        vec = primitive_vector([ker.rows[r][c] for r in range(len(monos))])
        basis.append(MPoly(3, {m: v for m, v in zip(monos, vec) if v}))
    return SectionSpace(div.m, basis, ker.ncols, (len(rows), len(monos)))


def h0_h1(arr: Arrangement, div: DivisorClass):
    """(h^0, h^1) with h^1 read off as h^0 - chi; valid because h^2 vanishes
    for the m >= -2 range in play (Serre duality against the canonical
    class)."""
    if div.m < -2:
        raise ValueError("h^2 is not forced to vanish for m < -2")
    sections = h0_fatpoints(arr, div)
    chi = riemann_roch_chi(arr, div)
    return sections.dimension, sections.dimension - chi


@dataclass
class NetSplit:
    A_div: DivisorClass
    B_div: DivisorClass
    h0A_lower: int
    h0B_lower: int | None    # km - C(m+1, 2) for a net, else None


def net_split(arr: Arrangement, cert) -> NetSplit:
    """Split D_A = A + B along a verified multinet certificate: A has the
    base-locus multiplicities n_p, B is the residual."""
    a_div = DivisorClass(cert.m, {p: cert.n_p[p] for p in cert.Z})
    b_div = divisor_DA(arr) - a_div
    for p, v in b_div.mults.items():
        if v < 0:
            raise ValueError("residual divisor has negative multiplicity at "
                             "%s" % (p.point,))
    bound = cert.k * cert.m - comb(cert.m + 1, 2) if cert.is_net else None
    return NetSplit(A_div=a_div, B_div=b_div, h0A_lower=2, h0B_lower=bound)
