"""Central line arrangements in the projective plane.

An arrangement is an ordered list of defining linear forms in (x, y, z),
normalized to primitive integer vectors with positive leading entry.  From
the forms we compute the rank-two flats (intersection points with their
incidence sets and Mobius values) and the Poincare polynomial of the
complement of the central cone in C^3.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .exact import RatMatrix, primitive_vector, rank


class ArrangementError(ValueError):
    pass


BUILTIN_FORMS = {
    # A3 braid arrangement, projected from the SL(4) reflection planes.
    "braid-a3": [(1, 0, 0), (0, 1, 0), (0, 0, 1),
                 (1, -1, 0), (1, 0, -1), (0, 1, -1)],
    # The two 9_3 configurations of Hilbert--Cohn-Vossen.
    "9_3_1": [(1, 0, 0), (0, 1, 0), (0, 0, 1),
              (1, -1, 0), (0, 1, -1), (1, -1, -1),
              (2, 1, 1), (2, 1, -1), (2, -5, 1)],
    "9_3_2": [(1, 0, 0), (0, 1, 0), (0, 0, 1),
              (1, 1, 0), (0, 1, 1), (1, 0, 3),
              (1, 2, 1), (1, 2, 3), (2, 3, 3)],
    # B3 reflection arrangement.
    "b3": [(1, 0, 0), (0, 1, 0), (0, 0, 1),
           (1, -1, 0), (1, 1, 0), (1, 0, -1),
           (1, 0, 1), (0, 1, -1), (0, 1, 1)],
    # Four planes with a single dependency.
    "ex-2-4": [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)],
}


@dataclass(frozen=True)
class FlatPoint:
    """A rank-two flat: a point where at least two lines meet."""

    point: tuple          # primitive integer representative
    lines: tuple          # sorted 0-based indices of incident lines

    @property
    def mu(self) -> int:
        return len(self.lines) - 1


@dataclass(frozen=True)
class PoincarePoly:
    """P(M, t) of the central cone in C^3; degree three."""

    coefficients: tuple   # (1, d, sum mu, sum mu - d + 1)

    def projective_coefficients(self) -> tuple:
        """Coefficients of P(M,t)/(1+t), the projective complement."""
        c = self.coefficients
        out = []
        carry = 0
        for a in c[:-1]:
            out.append(a - carry)
            carry = out[-1]
        if c[-1] != carry:
            raise ArithmeticError("Poincare polynomial not divisible by 1+t")
        return tuple(out)

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coefficients):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append("%dt" % c if c != 1 else "t")
            else:
                parts.append("%dt^%d" % (c, k) if c != 1 else "t^%d" % k)
        return "+".join(parts) if parts else "0"


class Arrangement:
    """d >= 3 pairwise distinct lines whose forms span the dual space."""

    def __init__(self, forms, name=None):
        normalized = [primitive_vector(f) for f in forms]
        if len(normalized) < 3:
            raise ArrangementError("need at least 3 lines")
        seen = {}
        for i, f in enumerate(normalized):
            if f in seen:
                raise ArrangementError(
                    "duplicate line: forms %d and %d are proportional"
                    % (seen[f] + 1, i + 1))
            seen[f] = i
        if rank(RatMatrix(normalized)) < 3:
            raise ArrangementError("non-essential arrangement: forms do not "
                                   "span the dual space")
        self.forms = normalized
        self.name = name
        self.d = len(normalized)
        self._flats = None

    def __repr__(self):
        label = self.name or "?"
        return "Arrangement(%s, d=%d)" % (label, self.d)

    @property
    def flats(self):
        if self._flats is None:
            self._flats = compute_flats(self)
        return self._flats

    def flat_of_point(self, point) -> FlatPoint:
        pt = primitive_vector(point)
        for f in self.flats:
            if f.point == pt:
                return f
        raise KeyError("not a rank-two flat: %s" % (pt,))

    def sum_mu(self) -> int:
        return sum(f.mu for f in self.flats)


def builtin(name: str) -> Arrangement:
    if name not in BUILTIN_FORMS:
        raise ArrangementError("unknown builtin %r (have: %s)"
                               % (name, ", ".join(sorted(BUILTIN_FORMS))))
    return Arrangement(BUILTIN_FORMS[name], name=name)


def parse_arrangement(source: str) -> Arrangement:
    """Builtin name, or the JSON file format of the command line tool:
    {"name": str, "forms": [[q, q, q], ...]} with entries integers or
    "p/q" strings."""
    if source in BUILTIN_FORMS:
        return builtin(source)
    try:
        data = json.loads(source)
    except json.JSONDecodeError as e:
        raise ArrangementError("not a builtin name and not valid JSON: %s" % e)
    if not isinstance(data, dict) or "forms" not in data:
        raise ArrangementError('arrangement JSON needs a "forms" key')
    forms = []
    for row in data["forms"]:
        if len(row) != 3:
            raise ArrangementError("each form needs exactly 3 coefficients")
        try:
            forms.append([Fraction(str(v)) for v in row])
        except (ValueError, ZeroDivisionError) as e:
            raise ArrangementError("malformed rational %r: %s" % (row, e))
    return Arrangement(forms, name=data.get("name"))


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def compute_flats(arr: Arrangement) -> list:
    """All pairwise intersection points, deduplicated, with full incidence
    sets, sorted by canonical point representative."""
    points = {}
    for i in range(arr.d):
        for j in range(i + 1, arr.d):
            p = _cross(arr.forms[i], arr.forms[j])
            p = primitive_vector(p)
            points.setdefault(p, set()).update((i, j))
    flats = []
    for p in sorted(points):
        incident = tuple(sorted(
            i for i in range(arr.d)
            if sum(c * x for c, x in zip(arr.forms[i], p)) == 0))
        flats.append(FlatPoint(point=p, lines=incident))
    return flats


def poincare_polynomial(arr: Arrangement) -> PoincarePoly:
    """P(M,t) via the Mobius recursion on the rank <= 3 lattice: the bottom
    element, the lines, the rank-two flats, and the center."""
    mu_lines = {i: -1 for i in range(arr.d)}
    mu_points = {}
    for f in arr.flats:
        mu_points[f] = -(1 + sum(mu_lines[i] for i in f.lines))
    mu_top = -(1 + sum(mu_lines.values()) + sum(mu_points.values()))
    c0 = 1
    c1 = -sum(mu_lines.values())
    c2 = sum(mu_points.values())
    c3 = -mu_top
    poly = PoincarePoly(coefficients=(c0, c1, c2, c3))
    poly.projective_coefficients()  # asserts divisibility by (1+t)
    return poly
