"""Degree-two Orlik-Solomon algebra, the H^1 resonance oracle, neighborly
partitions, multinets, the Cartan-matrix block test, and the assembly of
the first resonance variety.

The resonance variety is represented on the hyperplane sum(a) = 0 only (the
complex is exact off it).  Local components come from flats with three or
more lines; essential components come from verified multinet certificates,
and every reported component is confirmed by the H^1 oracle at two sample
points before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, factorial, gcd

from .arrangement import Arrangement, FlatPoint
from .exact import (RatMatrix, SparseReducer, primitive_vector, rank, rref,
                    seeded_rng)


class MultinetError(ValueError):
    """A multinet condition failed; the message names the condition and a
    witness (block pair, point, or line)."""


# ---------------------------------------------------------------------------
# Orlik-Solomon algebra in degrees <= 2


class OS2:
    """A^1 = Q^d and A^2 = wedge^2 / relations d(e_ijk) over concurrent
    triples; dim A^2 equals the sum of the Mobius values of the flats."""

    def __init__(self, arr: Arrangement):
        self.arrangement = arr
        d = arr.d
        self.pairs = list(combinations(range(d), 2))
        self.pair_index = {t: k for k, t in enumerate(self.pairs)}
        red = SparseReducer(len(self.pairs))
        for f in arr.flats:
            if f.mu < 2:
                continue
            for (i, j, k) in combinations(f.lines, 3):
                red.add({self.pair_index[(j, k)]: Fraction(1),
                         self.pair_index[(i, k)]: Fraction(-1),
                         self.pair_index[(i, j)]: Fraction(1)})
        self.reducer = red
        self.quotient_cols = red.nonpivot_columns()
        self.quotient_pos = {c: t for t, c in enumerate(self.quotient_cols)}
        self.dim2 = len(self.quotient_cols)

    def wedge(self, a, b) -> dict:
        """a wedge b in the A^2 quotient basis."""
        vec: dict = {}
        for (i, j) in self.pairs:
            c = a[i] * b[j] - a[j] * b[i]
            if c:
                vec[self.pair_index[(i, j)]] = c
        res = self.reducer.reduce(vec)
        return {self.quotient_pos[c]: v for c, v in res.items()}

    def multiplication_matrix(self, a) -> RatMatrix:
        """Matrix of (a wedge -): A^1 -> A^2, one column per line."""
        d = self.arrangement.d
        cols = []
        for j in range(d):
            b = [Fraction(0)] * d
            b[j] = Fraction(1)
            cols.append(self.wedge(a, b))
        rows = [[cols[j].get(r, Fraction(0)) for j in range(d)]
                for r in range(self.dim2)]
        return RatMatrix(rows)

    def h1_dimension(self, a) -> int:
        a = [Fraction(x) for x in a]
        if all(v == 0 for v in a):
            raise ValueError("a must be nonzero")
        if sum(a) != 0:
            # the complex is exact off the diagonal hyperplane
            return 0
        m = self.multiplication_matrix(a)
        ker_dim = self.arrangement.d - rank(m)
        return ker_dim - 1


def h1_dimension(arr: Arrangement, a) -> int:
    """dim H^1(A, a) for a in the sum-zero hyperplane: the kernel of the
    multiplication A^1 -> A^2 minus the image of A^0."""
    return OS2(arr).h1_dimension(a)


# ---------------------------------------------------------------------------
# Components


@dataclass
class ResonanceComponent:
    kind: str                  # "local" | "essential"
    vectors: tuple             # spanning vectors, primitive integers
    projective_dimension: int
    provenance: object         # FlatPoint or MultinetCertificate
    oracle_values: tuple = ()  # observed H^1 dimensions at the sample points

    def span_key(self):
        red, _ = rref([list(map(Fraction, v)) for v in self.vectors])
        return tuple(tuple(row) for row in red)


def local_components(arr: Arrangement) -> list:
    """One component per flat with mu >= 2: the sum-zero slice of the
    coordinate subspace of the lines through the flat."""
    out = []
    for f in arr.flats:
        if f.mu < 2:
            continue
        base = f.lines[0]
        vecs = []
        for i in f.lines[1:]:
            v = [0] * arr.d
            v[base] = 1
            v[i] = -1
            vecs.append(tuple(v))
        out.append(ResonanceComponent(
            kind="local", vectors=tuple(vecs),
            projective_dimension=f.mu - 1, provenance=f))
    return out


# ---------------------------------------------------------------------------
# Neighborly partitions


def is_neighborly(arr: Arrangement, partition) -> bool:
    """The neighborly-partition condition: for every rank-two flat Y
    and block pi, mu(Y) <= |Y meet pi| forces Y inside pi."""
    blocks = [frozenset(b) for b in partition]
    seen = set()
    for b in blocks:
        if b & seen:
            raise ValueError("blocks overlap")
        seen |= b
    if seen != set(range(arr.d)):
        raise ValueError("blocks do not cover every line")
    for f in arr.flats:
        y = frozenset(f.lines)
        mu = len(y) - 1
        for b in blocks:
            if mu <= len(y & b) and not y <= b:
                return False
    return True


# ---------------------------------------------------------------------------
# Multinets


@dataclass
class MultinetCertificate:
    blocks: tuple             # tuple of sorted tuples of line indices
    weights: tuple            # weight per line, positive integers
    k: int
    m: int
    Z: tuple                  # FlatPoints of the base locus
    n_p: dict                 # FlatPoint -> point weight
    connected: bool           # condition (4): full multinet vs weak

    @property
    def is_net(self) -> bool:
        return all(w == 1 for w in self.weights)

    def block_of_line(self, i: int) -> int:
        for bi, b in enumerate(self.blocks):
            if i in b:
                return bi
        raise KeyError(i)

    def describe(self) -> str:
        kind = "net" if self.is_net else ("multinet" if self.connected
                                          else "weak multinet")
        return "(%d,%d)-%s, blocks %s" % (
            self.k, self.m, kind,
            " | ".join(",".join(str(i + 1) for i in b) for b in self.blocks))


def verify_multinet(arr: Arrangement, blocks, weights) -> MultinetCertificate:
    """Check the weak-multinet conditions and the weighted count identities;
    the connectivity condition is recorded on the certificate rather than
    enforced.  Failures raise MultinetError naming condition and witness."""
    blocks = tuple(tuple(sorted(b)) for b in blocks)
    k = len(blocks)
    if k < 3:
        raise MultinetError("need at least 3 blocks, got %d" % k)
    covered = [i for b in blocks for i in b]
    if sorted(covered) != list(range(arr.d)):
        raise MultinetError("blocks are not a partition of the lines")
    w = list(weights)
    if len(w) != arr.d or any(int(x) <= 0 or int(x) != x for x in w):
        raise MultinetError("weights must assign a positive integer to "
                            "every line")
    w = [int(x) for x in w]
    block_of = {}
    for bi, b in enumerate(blocks):
        for i in b:
            block_of[i] = bi
    block_weights = [sum(w[i] for i in b) for b in blocks]
    m = block_weights[0]
    for bi, bw in enumerate(block_weights):
        if bw != m:
            raise MultinetError(
                "condition (1) fails: blocks 1 and %d have weights %d and %d"
                % (bi + 1, m, bw))
    # base locus: flats meeting at least two blocks.  Condition (2) -- all
    # cross-block intersections lie in Z -- holds by this construction.
    Z = []
    for f in arr.flats:
        if len({block_of[i] for i in f.lines}) >= 2:
            Z.append(f)
    n_p = {}
    for f in Z:
        per_block = [sum(w[i] for i in f.lines if block_of[i] == bi)
                     for bi in range(k)]
        if len(set(per_block)) != 1:
            lo = per_block.index(min(per_block))
            hi = per_block.index(max(per_block))
            raise MultinetError(
                "condition (3) fails at %s: blocks %d and %d carry weights "
                "%d and %d" % (f.point, lo + 1, hi + 1,
                               per_block[lo], per_block[hi]))
        n_p[f] = per_block[0]
    zset = set(Z)
    # condition (4): within each block, lines are connected through
    # intersections away from Z
    connected = True
    flat_of_pair = {}
    for f in arr.flats:
        for (i, j) in combinations(f.lines, 2):
            flat_of_pair[(i, j)] = f
    for b in blocks:
        if len(b) <= 1:
            continue
        adj = {i: set() for i in b}
        for (i, j) in combinations(b, 2):
            if flat_of_pair[(i, j)] not in zset:
                adj[i].add(j)
                adj[j].add(i)
        seen = {b[0]}
        stack = [b[0]]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if len(seen) != len(b):
            connected = False
    # weighted count identities
    if sum(w) != k * m:
        raise MultinetError("count identity fails: total weight %d != k*m"
                            % sum(w))
    if sum(v * v for v in n_p.values()) != m * m:
        raise MultinetError("count identity fails: sum n_p^2 = %d != m^2 = %d"
                            % (sum(v * v for v in n_p.values()), m * m))
    for i in range(arr.d):
        s = sum(n_p[f] for f in Z if i in f.lines)
        if s != m:
            raise MultinetError(
                "count identity fails on line %d: sum of n_p over the base "
                "locus is %d, not m = %d" % (i + 1, s, m))
    return MultinetCertificate(blocks=blocks, weights=tuple(w), k=k, m=m,
                               Z=tuple(Z), n_p=n_p, connected=connected)


def _partitions_with_block_weight(d: int, k: int, w, m: int):
    """Canonical k-colorings (line 0 in block 0, blocks in order of first
    appearance) with every block weight exactly m."""
    assignment = [0] * d
    totals = [0] * k

    def rec(i: int, used: int):
        if i == d:
            if used == k:
                yield tuple(assignment)
            return
        remaining = d - i
        if k - used > remaining:
            return
        top = min(used + 1, k)
        for b in range(top):
            if totals[b] + w[i] > m:
                continue
            assignment[i] = b
            totals[b] += w[i]
            yield from rec(i + 1, max(used, b + 1))
            totals[b] -= w[i]

    yield from rec(0, 0)


def search_multinets(arr: Arrangement, k: int, max_weight: int = 1) -> list:
    """All weak-multinet certificates with k blocks and primitive weight
    vectors bounded by max_weight, up to block permutation."""
    d = arr.d
    if k ** d // factorial(k) > 10 ** 9:
        raise ValueError("partition search space too large; restrict d or k")
    found = []
    weight_vectors = [[1] * d] if max_weight == 1 else _weight_vectors(d, max_weight)
    for w in weight_vectors:
        total = sum(w)
        if total % k:
            continue
        m = total // k
        for coloring in _partitions_with_block_weight(d, k, w, m):
            blocks = [[] for _ in range(k)]
            for i, b in enumerate(coloring):
                blocks[b].append(i)
            try:
                cert = verify_multinet(arr, blocks, w)
            except MultinetError:
                continue
            found.append(cert)
    return found


def _weight_vectors(d: int, max_weight: int):
    out = []

    def rec(prefix):
        if len(prefix) == d:
            g = 0
            for v in prefix:
                g = gcd(g, v)
            if g == 1:
                out.append(list(prefix))
            return
        for v in range(1, max_weight + 1):
            rec(prefix + [v])

    rec([])
    return out


# ---------------------------------------------------------------------------
# Cartan-matrix block test


@dataclass
class CartanBlock:
    lines: tuple
    matrix: list            # the restricted Q block, integer rows
    classification: str     # "affine" | "finite" | "indefinite"
    kernel_vector: tuple | None


@dataclass
class CartanReport:
    blocks: list
    excluded_lines: tuple   # lines with no point in Z
    affine_count: int
    criterion: bool         # >= 3 affine blocks and nothing else

    def partition(self) -> list:
        return [b.lines for b in self.blocks]


def symmetric_inertia(mat) -> tuple:
    """(positive, negative, zero) inertia of a symmetric rational matrix by
    exact congruence reduction."""
    a = [[Fraction(x) for x in row] for row in mat]
    n = len(a)
    pos = neg = zero = 0
    alive = list(range(n))
    while alive:
        piv = next((i for i in alive if a[i][i] != 0), None)
        if piv is not None:
            v = a[piv][piv]
            if v > 0:
                pos += 1
            else:
                neg += 1
            others = [i for i in alive if i != piv]
            for i in others:
                f = a[i][piv] / v
                if f:
                    for j in others:
                        a[i][j] -= f * a[piv][j]
            alive = others
            continue
        off = next(((i, j) for i in alive for j in alive
                    if j > i and a[i][j] != 0), None)
        if off is None:
            zero += len(alive)
            break
        i0, j0 = off
        # hyperbolic pair: inertia (+1, -1), then eliminate both rows
        pos += 1
        neg += 1
        b = a[i0][j0]
        others = [i for i in alive if i not in (i0, j0)]
        for i in others:
            ci, cj = a[i][i0], a[i][j0]
            if ci or cj:
                for j in others:
                    a[i][j] -= (ci * a[j0][j] + cj * a[i0][j]) / b
        alive = others
    return pos, neg, zero


def cartan_test(arr: Arrangement, Z) -> CartanReport:
    """Form Q = J^t J - E from the point-line incidence of the chosen base
    locus, split it into connected blocks on the lines meeting Z, and
    classify each block (affine / finite / indefinite)."""
    zlist = list(Z)
    if not zlist:
        raise ValueError("Z must be nonempty")
    d = arr.d
    incident = [i for i in range(d)
                if any(i in f.lines for f in zlist)]
    q = [[sum(1 for f in zlist if i in f.lines and j in f.lines) - 1
          for j in range(d)] for i in range(d)]
    # connected components of the support graph on the incident lines
    seen = set()
    blocks = []
    for start in incident:
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in incident:
                if v not in comp and q[u][v] != 0:
                    comp.add(v)
                    stack.append(v)
        seen |= comp
        blocks.append(tuple(sorted(comp)))
    blocks.sort()
    out = []
    affine = 0
    for lines in blocks:
        sub = [[q[i][j] for j in lines] for i in lines]
        pos, negv, zerov = symmetric_inertia(sub)
        kernel_vec = None
        if negv == 0 and zerov == 0:
            cls = "finite"
        elif negv == 0 and zerov == 1:
            from .exact import kernel_basis
            kb = kernel_basis(RatMatrix(sub))
            vec = primitive_vector([kb.rows[r][0] for r in range(len(lines))])
            if all(v > 0 for v in vec):
                kernel_vec = vec
                cls = "affine"
                affine += 1
            else:
                cls = "indefinite"
        else:
            cls = "indefinite"
        out.append(CartanBlock(lines=lines, matrix=sub, classification=cls,
                               kernel_vector=kernel_vec))
    excluded = tuple(i for i in range(d) if i not in set(incident))
    criterion = affine >= 3 and all(b.classification == "affine" for b in out)
    return CartanReport(blocks=out, excluded_lines=excluded,
                        affine_count=affine, criterion=criterion)


# ---------------------------------------------------------------------------
# Assembly of R^1


def _sample_in_span(vectors, rng, tries: int = 5):
    for _ in range(tries):
        coeffs = [rng.randint(-7, 7) for _ in vectors]
        a = [Fraction(0)] * len(vectors[0])
        for c, v in zip(coeffs, vectors):
            if c:
                for i, x in enumerate(v):
                    a[i] += c * x
        if any(a):
            return a
    raise RuntimeError("could not sample a nonzero point of the component")


def resonance_components(arr: Arrangement, max_weight: int = 2,
                         search_k=(3, 4)) -> list:
    """Local components plus one essential component per multinet (full
    multinets only), deduplicated by span, each verified by the H^1 oracle
    at two distinct sample points."""
    os2 = OS2(arr)
    comps = list(local_components(arr))
    certs = []
    for k in search_k:
        certs.extend(c for c in search_multinets(arr, k, max_weight)
                     if c.connected)
    for cert in certs:
        us = []
        for b in cert.blocks:
            u = [0] * arr.d
            for i in b:
                u[i] = cert.weights[i]
            us.append(u)
        vecs = []
        for i in range(1, cert.k):
            vecs.append(tuple(a - b for a, b in zip(us[0], us[i])))
        comps.append(ResonanceComponent(
            kind="essential", vectors=tuple(vecs),
            projective_dimension=cert.k - 2, provenance=cert))
    # dedup by row space; drop spans contained in a larger span
    comps = _dedup_components(comps)
    rng = seeded_rng("resonance-oracle:%s" % (arr.name or arr.d))
    verified = []
    for comp in comps:
        need = 1 if comp.kind == "local" else (
            comp.provenance.k - 2 if isinstance(comp.provenance,
                                                MultinetCertificate) else 1)
        values = []
        seen_samples = set()
        while len(values) < 2:
            a = _sample_in_span(comp.vectors, rng)
            key = tuple(a)
            if key in seen_samples:
                continue
            seen_samples.add(key)
            h1 = os2.h1_dimension(a)
            if h1 < need:
                raise ArithmeticError(
                    "component rejected by H^1 oracle at %s (got %d, need "
                    ">= %d)" % (a, h1, need))
            values.append(h1)
        comp.oracle_values = tuple(values)
        verified.append(comp)
    return verified


def _dedup_components(comps: list) -> list:
    """Deduplicate by row space; drop any span strictly contained in
    another component's span."""
    uniq = {}
    for c in comps:
        uniq.setdefault(c.span_key(), c)
    items = list(uniq.values())
    dims = {id(c): len(c.span_key()) for c in items}
    keep = []
    for c in items:
        contained = False
        for other in items:
            if other is c or dims[id(other)] <= dims[id(c)]:
                continue
            rows = [list(map(Fraction, v)) for v in other.vectors] \
                + [list(map(Fraction, v)) for v in c.vectors]
            if rank(RatMatrix(rows)) == dims[id(other)]:
                contained = True
                break
        if not contained:
            keep.append(c)
    return keep
