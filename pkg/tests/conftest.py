"""Shared test fixtures: independent brute-force oracles (subgroup catalogs,
group closures, abelian invariants) and the zoo of small groups.

Everything here is deliberately written from scratch against first principles
(enumeration, BFS closure, counting) so that package results are checked along
a second route.
"""

import random
from itertools import product as cartesian
import pytest

from hspsim.groups import PermutationBackend, TableBackend, UnitsBackend


# ---------------------------------------------------------------------------
# Independent subgroup catalog over Z_q^n (q = m^k)


def tri_contains(rows, vec):
    """Forward-substitution membership in the column lattice of a lower
    triangular basis."""
    n = len(rows)
    c = [0] * n
    for i in range(n):
        r = vec[i] - sum(rows[i][j] * c[j] for j in range(i))
        if r % rows[i][i]:
            return False
        c[i] = r // rows[i][i]
    return True


def enumerate_subgroup_hnfs(m, n, k=1):
    """All subgroups of Z_{m^k}^n, each as the row tuple of its triangular
    basis: generated directly in normal form and filtered by the requirement
    that the lattice contain q*Z^n."""
    q = m**k
    divs = [d for d in range(1, q + 1) if q % d == 0]
    out = []

    def rec(i, rows):
        if i == n:
            for j in range(n):
                e = [q if t == j else 0 for t in range(n)]
                if not tri_contains(rows, e):
                    return
            out.append(tuple(tuple(r) for r in rows))
            return
        for d in divs:
            for off in cartesian(*([range(d)] * i)):
                rows.append(list(off) + [d] + [0] * (n - 1 - i))
                rec(i + 1, rows)
                rows.pop()

    rec(0, [])
    return out


def lattice_points(rows, q, n):
    """The subgroup as a frozenset of vectors mod q, enumerated from scratch by
    closing the basis columns under addition."""
    gens = [tuple(rows[i][j] % q for i in range(n)) for j in range(n)]
    seen = {(0,) * n}
    frontier = [(0,) * n]
    while frontier:
        v = frontier.pop()
        for g in gens:
            w = tuple((a + b) % q for a, b in zip(v, g))
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return frozenset(seen)


# ---------------------------------------------------------------------------
# Independent group brute force


def closure(mul, gens, identity):
    """BFS closure of a generator list under multiplication."""
    seen = {identity}
    frontier = [identity]
    while frontier:
        v = frontier.pop()
        for g in gens:
            for w in (mul(v, g), mul(g, v)):
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
    return seen


def brute_inverse(mul, elements, identity, x):
    for y in elements:
        if mul(x, y) == identity:
            return y
    raise AssertionError("no inverse found")


def brute_commutator_subgroup(mul, elements, identity):
    elems = list(elements)
    inv = {x: brute_inverse(mul, elems, identity, x) for x in elems}
    comms = {
        mul(mul(inv[a], inv[b]), mul(a, b)) for a in elems for b in elems
    }
    return closure(mul, list(comms), identity)


def brute_derived_chain(mul, elements, identity):
    chain = [frozenset(elements)]
    while len(chain[-1]) > 1:
        nxt = frozenset(brute_commutator_subgroup(mul, chain[-1], identity))
        if nxt == chain[-1]:
            raise AssertionError("derived chain stalled above the trivial group")
        chain.append(nxt)
    return chain


def brute_element_order(mul, identity, x):
    k = 1
    y = x
    while y != identity:
        y = mul(y, x)
        k += 1
    return k


def brute_abelian_invariants(mul, elements, identity):
    """Invariant factors of a finite abelian group, derived purely by counting
    solutions of x^(p^j) = 1 for each prime."""
    n = len(elements)
    factors_by_prime = {}
    rem = n
    p = 2
    primes = []
    while rem > 1:
        if rem % p == 0:
            primes.append(p)
            while rem % p == 0:
                rem //= p
        p += 1
    for p in primes:
        counts = [1]
        j = 1
        while True:
            e = p**j
            c = 0
            for x in elements:
                y = identity
                for _ in range(e):
                    y = mul(y, x)
                if y == identity:
                    c += 1
            counts.append(c)
            if c == counts[-2]:
                counts.pop()
                break
            j += 1
        # number of cyclic p-power factors of order >= p^j
        exps = []
        for j in range(1, len(counts)):
            ratio = counts[j] // counts[j - 1]
            mult = 0
            while ratio > 1:
                ratio //= p
                mult += 1
            exps.append(mult)
        peaks = exps  # peaks[j-1] = number of cyclic factors with exponent >= j
        factors = []
        for j in range(len(peaks), 0, -1):
            at_least_j = peaks[j - 1]
            at_least_next = peaks[j] if j < len(peaks) else 0
            factors.extend([p**j] * (at_least_j - at_least_next))
        factors_by_prime[p] = sorted(factors)
    # combine prime powers into an invariant factor chain (largest last)
    width = max((len(v) for v in factors_by_prime.values()), default=0)
    invariants = []
    for slot in range(width):
        f = 1
        for p, lst in factors_by_prime.items():
            pad = width - len(lst)
            if slot >= pad:
                f *= lst[slot - pad]
        invariants.append(f)
    return [f for f in invariants if f > 1]


# ---------------------------------------------------------------------------
# The group zoo


def perm_mul(a, b):
    return tuple(a[b[i]] for i in range(len(a)))


def make_s3():
    return PermutationBackend(3, [(1, 0, 2), (1, 2, 0)]), 6


def make_d4():
    # rotation by one step and a reflection on 4 points
    return PermutationBackend(4, [(1, 2, 3, 0), (3, 2, 1, 0)]), 2


def make_a4():
    return PermutationBackend(4, [(1, 2, 0, 3), (1, 0, 3, 2)]), 6


def make_d6():
    return PermutationBackend(6, [(1, 2, 3, 4, 5, 0), (5, 4, 3, 2, 1, 0)]), 6


def make_a5():
    return PermutationBackend(5, [(1, 2, 3, 4, 0), (1, 2, 0, 3, 4)]), 30


def make_q8():
    # quaternion group as a multiplication table over 1,-1,i,-i,j,-j,k,-k
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]

    def norm(sign, base):
        if base.startswith("-"):
            sign, base = -sign, base[1:]
        return sign, base

    def mul(a, b):
        sa, xa = norm(1, a)
        sb, xb = norm(1, b)
        s = sa * sb
        table = {
            ("1", "1"): (1, "1"),
            ("1", "i"): (1, "i"),
            ("1", "j"): (1, "j"),
            ("1", "k"): (1, "k"),
            ("i", "1"): (1, "i"),
            ("j", "1"): (1, "j"),
            ("k", "1"): (1, "k"),
            ("i", "i"): (-1, "1"),
            ("j", "j"): (-1, "1"),
            ("k", "k"): (-1, "1"),
            ("i", "j"): (1, "k"),
            ("j", "i"): (-1, "k"),
            ("j", "k"): (1, "i"),
            ("k", "j"): (-1, "i"),
            ("k", "i"): (1, "j"),
            ("i", "k"): (-1, "j"),
        }
        s2, base = table[(xa, xb)]
        s *= s2
        return names.index(base) if s == 1 else names.index("-" + base)

    table = [[mul(names[i], names[j]) for j in range(8)] for i in range(8)]
    return TableBackend(table, [names.index("i"), names.index("j")]), 2


def make_heisenberg3():
    """Upper unitriangular 3x3 matrices over F_3: (a, b, c) with
    (a,b,c)*(a',b',c') = (a+a', b+b', c+c'+a*b')."""

    def idx(a, b, c):
        return (a * 3 + b) * 3 + c

    table = [[0] * 27 for _ in range(27)]
    for a in range(3):
        for b in range(3):
            for c in range(3):
                for a2 in range(3):
                    for b2 in range(3):
                        for c2 in range(3):
                            table[idx(a, b, c)][idx(a2, b2, c2)] = idx(
                                (a + a2) % 3, (b + b2) % 3, (c + c2 + a * b2) % 3
                            )
    return TableBackend(table, [idx(1, 0, 0), idx(0, 1, 0)]), 3


def make_units15():
    return UnitsBackend(15, [2, 14]), 2


def make_units35():
    return UnitsBackend(35, [2, 34]), 12


def make_z7_table():
    """Cyclic group of order 7 as an addition table; its generator has order 7,
    coprime to the working modulus 2."""
    table = [[(i + j) % 7 for j in range(7)] for i in range(7)]
    return TableBackend(table, [1]), 2


def make_z6xz4():
    def idx(a, b):
        return a * 4 + b

    table = [[0] * 24 for _ in range(24)]
    for a in range(6):
        for b in range(4):
            for a2 in range(6):
                for b2 in range(4):
                    table[idx(a, b)][idx(a2, b2)] = idx((a + a2) % 6, (b + b2) % 4)
    return TableBackend(table, [idx(1, 0), idx(0, 1)]), 12


ZOO = {
    "S3": (make_s3, 6),
    "D4": (make_d4, 8),
    "Q8": (make_q8, 8),
    "A4": (make_a4, 12),
    "D6": (make_d6, 12),
    "Heis3": (make_heisenberg3, 27),
    "U15": (make_units15, 8),
    "U35": (make_units35, 24),
}


def backend_elements(backend):
    """Closure of the backend's generators under its own multiplication."""
    arith_identity = None
    if backend.generators:
        # derive the identity from a generator the long way to stay independent
        x = backend.generators[0]
        seen = [x]
        y = backend.mul(x, x)
        while y != x:
            seen.append(y)
            y = backend.mul(y, x)
        arith_identity = seen[-1]
    else:
        arith_identity = backend.identity_code()
    return closure(backend.mul, backend.generators, arith_identity), arith_identity


@pytest.fixture
def rng():
    return random.Random(20240817)
