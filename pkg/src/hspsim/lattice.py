"""Exact integer linear algebra for subgroups of Z_{m^k}^n.

A subgroup is represented by the Hermite-normal-form basis of its preimage
lattice in Z^n (the lattice always contains m^k * Z^n, hence has full rank).
Smith normal form with multipliers supplies duality, invariant factors and the
divide-by-m lifting used when reducing exponent-k instances to exponent 1.

All entries are Python ints, so nothing here ever rounds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product as _cartesian
from math import gcd, prod


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) = a*x + b*y and g >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, row-major, arbitrary-precision entries."""

    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("matrix dimensions must be positive")
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError("ragged matrix data")

    @classmethod
    def from_rows(cls, rows) -> "IntMatrix":
        data = tuple(tuple(int(x) for x in row) for row in rows)
        return cls(len(data), len(data[0]) if data else 0, data)

    @classmethod
    def from_columns(cls, cols) -> "IntMatrix":
        cols = [list(c) for c in cols]
        n = len(cols[0])
        return cls.from_rows([[c[i] for c in cols] for i in range(n)])

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries) -> "IntMatrix":
        entries = list(entries)
        n = len(entries)
        return cls.from_rows(
            [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]
        )

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.data)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ot = other.transpose().data
        return IntMatrix.from_rows(
            [[sum(a * b for a, b in zip(row, col)) for col in ot] for row in self.data]
        )

    def mat_vec(self, v) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise ValueError("shape mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.data)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        a = [list(row) for row in self.data]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and self.det() in (1, -1)

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.data]

    def __str__(self):
        return "\n".join(" ".join(str(x) for x in row) for row in self.data)


# ---------------------------------------------------------------------------
# Matrix text / JSON formats


def parse_matrix_text(text: str) -> IntMatrix:
    """First line "rows cols", then rows of space-separated integers."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("matrix header must be 'rows cols'")
    rows, cols = int(head[0]), int(head[1])
    if len(lines) != rows + 1:
        raise ValueError(f"expected {rows} data rows, found {len(lines) - 1}")
    data = []
    for ln in lines[1:]:
        row = [int(tok) for tok in ln.split()]
        if len(row) != cols:
            raise ValueError("row width mismatch")
        data.append(row)
    return IntMatrix.from_rows(data)


def format_matrix_text(mat: IntMatrix) -> str:
    return f"{mat.rows} {mat.cols}\n" + str(mat)


def matrix_to_json(mat: IntMatrix) -> dict:
    return {"rows": mat.rows, "cols": mat.cols, "data": mat.to_lists()}


def matrix_from_json(obj) -> IntMatrix:
    if isinstance(obj, str):
        obj = json.loads(obj)
    mat = IntMatrix.from_rows(obj["data"])
    if mat.rows != obj["rows"] or mat.cols != obj["cols"]:
        raise ValueError("matrix JSON dimensions disagree with data")
    return mat


# ---------------------------------------------------------------------------
# Normal forms


def hermite_normal_form(mat: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Column-style Hermite normal form.

    Returns (H, U) with H = mat @ U, U unimodular, H lower triangular with
    positive diagonal pivots, off-diagonal entries reduced into [0, pivot),
    and zero columns gathered on the right.
    """
    n, s = mat.rows, mat.cols
    cols = [list(c) for c in mat.columns()]
    ucols = [[1 if i == j else 0 for i in range(s)] for j in range(s)]

    def combine(p: int, j: int, row: int) -> None:
        a, b = cols[p][row], cols[j][row]
        cp, cj = cols[p], cols[j]
        up, uj = ucols[p], ucols[j]
        if b % a == 0:
            q = b // a
            for i in range(n):
                cj[i] -= q * cp[i]
            for i in range(s):
                uj[i] -= q * up[i]
            return
        g, x, y = xgcd(a, b)
        au, bu = a // g, b // g
        for i in range(n):
            cp[i], cj[i] = x * cp[i] + y * cj[i], -bu * cp[i] + au * cj[i]
        for i in range(s):
            up[i], uj[i] = x * up[i] + y * uj[i], -bu * up[i] + au * uj[i]

    pivot = 0
    for row in range(n):
        if pivot >= s:
            break
        for j in range(pivot, s):
            if cols[j][row] == 0:
                continue
            if cols[pivot][row] == 0:
                cols[pivot], cols[j] = cols[j], cols[pivot]
                ucols[pivot], ucols[j] = ucols[j], ucols[pivot]
            elif j != pivot:
                combine(pivot, j, row)
        d = cols[pivot][row]
        if d == 0:
            continue
        if d < 0:
            cols[pivot] = [-x for x in cols[pivot]]
            ucols[pivot] = [-x for x in ucols[pivot]]
            d = -d
        for j in range(pivot):
            q = cols[j][row] // d
            if q:
                cj, cp = cols[j], cols[pivot]
                for i in range(n):
                    cj[i] -= q * cp[i]
                uj, up = ucols[j], ucols[pivot]
                for i in range(s):
                    uj[i] -= q * up[i]
        pivot += 1

    H = IntMatrix.from_columns(cols)
    U = IntMatrix.from_columns(ucols)
    return H, U


def _smith_with_inverse(mat: IntMatrix):
    """Smith normal form with multipliers and the inverse left multiplier.

    Returns (S, L, R, Linv) with S = L @ mat @ R, L and R unimodular and
    Linv = L^{-1}, maintained exactly alongside the row operations.
    """
    n, s = mat.rows, mat.cols
    a = [list(row) for row in mat.data]
    L = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    Linv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    R = [[1 if i == j else 0 for j in range(s)] for i in range(s)]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        L[i], L[j] = L[j], L[i]
        for r in Linv:
            r[i], r[j] = r[j], r[i]

    def col_swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in R:
            r[i], r[j] = r[j], r[i]

    def row_combine(i, j, t):
        # When the pivot divides the target, subtract a multiple (the pivot row
        # stays put); otherwise apply the 2x2 unimodular transform from xgcd,
        # which strictly shrinks the pivot.  Mixing transforms in the divisible
        # case can cycle, so the split is what guarantees termination.
        p, q_ = a[i][t], a[j][t]
        if q_ % p == 0:
            q = q_ // p
            for M in (a, L):
                ri, rj = M[i], M[j]
                for c in range(len(rj)):
                    rj[c] -= q * ri[c]
            for r in Linv:
                r[i] += q * r[j]
            return
        g, x, y = xgcd(p, q_)
        au, bu = p // g, q_ // g
        for M in (a, L):
            ri, rj = M[i], M[j]
            for c in range(len(ri)):
                ri[c], rj[c] = x * ri[c] + y * rj[c], -bu * ri[c] + au * rj[c]
        # Linv multiplies by the inverse transform on the right:
        # inverse of [[x, y], [-bu, au]] is [[au, -y], [bu, x]] (det = 1)
        for r in Linv:
            r[i], r[j] = au * r[i] + bu * r[j], -y * r[i] + x * r[j]

    def col_combine(i, j, t):
        p, q_ = a[t][i], a[t][j]
        if q_ % p == 0:
            q = q_ // p
            for M in (a, R):
                for r in M:
                    r[j] -= q * r[i]
            return
        g, x, y = xgcd(p, q_)
        au, bu = p // g, q_ // g
        for M in (a, R):
            for r in M:
                r[i], r[j] = x * r[i] + y * r[j], -bu * r[i] + au * r[j]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        L[i] = [-x for x in L[i]]
        for r in Linv:
            r[i] = -r[i]

    rank = min(n, s)
    for t in range(rank):
        # find a nonzero pivot in the trailing block
        pr = pc = -1
        for i in range(t, n):
            for j in range(t, s):
                if a[i][j]:
                    pr, pc = i, j
                    break
            if pr >= 0:
                break
        if pr < 0:
            break
        if pr != t:
            row_swap(t, pr)
        if pc != t:
            col_swap(t, pc)
        while True:
            for i in range(t + 1, n):
                if a[i][t]:
                    row_combine(t, i, t)
            if any(a[t][j] for j in range(t + 1, s)):
                for j in range(t + 1, s):
                    if a[t][j]:
                        col_combine(t, j, t)
                continue
            # divisibility sweep: pivot must divide the trailing block
            d = a[t][t]
            witness = None
            for i in range(t + 1, n):
                for j in range(t + 1, s):
                    if a[i][j] % d:
                        witness = i
                        break
                if witness is not None:
                    break
            if witness is None:
                break
            ri, rt = a[witness], a[t]
            for c in range(s):
                rt[c] += ri[c]
            lw, lt = L[witness], L[t]
            for c in range(n):
                lt[c] += lw[c]
            for r in Linv:
                r[witness] -= r[t]
        if a[t][t] < 0:
            negate_row(t)

    S = IntMatrix.from_rows(a)
    return S, IntMatrix.from_rows(L), IntMatrix.from_rows(R), IntMatrix.from_rows(Linv)


def smith_normal_form(mat: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: (S, L, R) with S = L @ mat @ R, L and R unimodular,
    nonzero entries d_1 | d_2 | ... on the leading diagonal positions."""
    S, L, R, _ = _smith_with_inverse(mat)
    return S, L, R


# ---------------------------------------------------------------------------
# Subgroup representation


@dataclass(frozen=True)
class SubgroupRep:
    """A subgroup of Z_{m^k}^n as the HNF basis of its preimage lattice in Z^n."""

    m: int
    k: int
    n: int
    hnf: IntMatrix

    def __post_init__(self):
        m, k, n, H = self.m, self.k, self.n, self.hnf
        if m < 2 or k < 1 or n < 1:
            raise ValueError("need m >= 2, k >= 1, n >= 1")
        if H.rows != n or H.cols != n:
            raise ValueError("HNF basis must be n x n")
        q = m**k
        for i in range(n):
            if H.data[i][i] <= 0:
                raise ValueError("diagonal entries must be positive")
            for j in range(i + 1, n):
                if H.data[i][j] != 0:
                    raise ValueError("basis must be lower triangular")
            for j in range(i):
                if not (0 <= H.data[i][j] < H.data[i][i]):
                    raise ValueError("off-diagonal entries must be reduced")
        for i in range(n):
            vec = tuple(q if j == i else 0 for j in range(n))
            if _solve_lower_triangular(H, vec) is None:
                raise ValueError("lattice must contain m^k * Z^n")
        if (q**n) % H.det() != 0:
            raise ValueError("lattice determinant must divide m^(k*n)")

    @property
    def modulus(self) -> int:
        return self.m**self.k

    def det(self) -> int:
        return self.hnf.det()


def _solve_lower_triangular(H: IntMatrix, vec) -> tuple[int, ...] | None:
    """Integer coefficients c with H @ c = vec, or None if none exist."""
    n = H.rows
    c = [0] * n
    for i in range(n):
        r = vec[i] - sum(H.data[i][j] * c[j] for j in range(i))
        q, rem = divmod(r, H.data[i][i])
        if rem:
            return None
        c[i] = q
    return tuple(c)


def subgroup_from_generators(gens, m: int, k: int, n: int) -> SubgroupRep:
    """Subgroup generated by the given vectors (mod m^k), as its canonical rep.

    Generators already inside the accumulated lattice are filtered by a cheap
    triangular solve, so feeding a whole subgroup's element list stays linear
    in its size rather than cubic.
    """
    q = m**k
    basis = [[q if j == i else 0 for j in range(n)] for i in range(n)]
    pending = []
    for g in gens:
        vec = tuple(int(x) % q for x in g)
        if len(vec) != n:
            raise ValueError("generator length mismatch")
        if _solve_lower_triangular_rows(basis, vec) is None:
            pending.append(vec)
            if len(pending) >= n:
                basis = _hnf_rows(basis, pending, n)
                pending = []
    if pending:
        basis = _hnf_rows(basis, pending, n)
    return SubgroupRep(m, k, n, IntMatrix.from_rows(basis))


def _solve_lower_triangular_rows(rows, vec) -> tuple[int, ...] | None:
    n = len(rows)
    c = [0] * n
    for i in range(n):
        r = vec[i] - sum(rows[i][j] * c[j] for j in range(i))
        q, rem = divmod(r, rows[i][i])
        if rem:
            return None
        c[i] = q
    return tuple(c)


def _hnf_rows(basis_rows, extra_cols, n) -> list[list[int]]:
    cols = [tuple(row[i] for row in basis_rows) for i in range(n)]
    cols = list(extra_cols) + cols
    H, _ = hermite_normal_form(IntMatrix.from_columns(cols))
    return [list(row[:n]) for row in H.data]


def trivial_subgroup(m: int, k: int, n: int) -> SubgroupRep:
    return SubgroupRep(m, k, n, IntMatrix.diagonal([m**k] * n))


def full_subgroup(m: int, k: int, n: int) -> SubgroupRep:
    return SubgroupRep(m, k, n, IntMatrix.identity(n))


def subgroup_order(rep: SubgroupRep) -> int:
    """Number of elements: m^(k*n) divided by the basis determinant."""
    q, r = divmod(rep.modulus**rep.n, rep.det())
    if r:
        raise ArithmeticError("invariant violation: determinant does not divide m^(k*n)")
    return q


def contains_element(rep: SubgroupRep, x) -> bool:
    """True iff x (mod m^k) lies in the subgroup."""
    if len(x) != rep.n:
        raise ValueError("vector length mismatch")
    return _solve_lower_triangular(rep.hnf, tuple(int(v) for v in x)) is not None


def coset_representative(rep: SubgroupRep, x) -> tuple[int, ...]:
    """Canonical representative of x + A inside the fundamental box of the basis."""
    H = rep.hnf
    r = [int(v) for v in x]
    for i in range(rep.n):
        q = r[i] // H.data[i][i]
        if q:
            for ii in range(i, rep.n):
                r[ii] -= q * H.data[ii][i]
    return tuple(r)


def enumerate_elements(rep: SubgroupRep):
    """All elements of the subgroup, as vectors reduced mod m^k."""
    q = rep.modulus
    H = rep.hnf
    ranges = [range(q // H.data[i][i]) for i in range(rep.n)]
    cols = H.columns()
    for ts in _cartesian(*ranges):
        v = [0] * rep.n
        for t, col in zip(ts, cols):
            if t:
                for i in range(rep.n):
                    v[i] += t * col[i]
        yield tuple(x % q for x in v)


def equal_or_witness(a: SubgroupRep, b: SubgroupRep) -> tuple[int, ...] | None:
    """For a <= b: None when equal, else a vector of b not in a.

    The witness is the leftmost basis column of b whose diagonal entry is
    smaller than the matching entry of a's basis.
    """
    if (a.m, a.k, a.n) != (b.m, b.k, b.n):
        raise ValueError("mismatched ambient groups")
    for col in a.hnf.columns():
        if not contains_element(b, col):
            raise ValueError("precondition violated: first subgroup is not contained in second")
    if a.hnf == b.hnf:
        return None
    for j in range(a.n):
        if b.hnf.data[j][j] < a.hnf.data[j][j]:
            w = tuple(v % b.modulus for v in b.hnf.column(j))
            return w
    raise AssertionError("proper containment without a smaller diagonal entry")


def join(a: SubgroupRep, vectors) -> SubgroupRep:
    """Smallest subgroup containing a and the given vectors."""
    return subgroup_from_generators(list(a.hnf.columns()) + list(vectors), a.m, a.k, a.n)


def perp_subgroup(rep: SubgroupRep) -> SubgroupRep:
    """The subgroup of all y with (x, y) = 0 mod m for every x in the input.

    Defined for exponent k = 1 only; computed through the Smith form of the
    basis, which turns the congruence system diagonal.
    """
    if rep.k != 1:
        raise ValueError("orthogonal complement is defined modulo m (k = 1) only")
    m = rep.m
    S, L, _, _ = _smith_with_inverse(rep.hnf)
    d = [S.data[i][i] for i in range(rep.n)]
    Lt = L.transpose()
    cols = []
    for i in range(rep.n):
        scale = m // gcd(d[i], m)
        cols.append(tuple(scale * Lt.data[r][i] for r in range(rep.n)))
    return subgroup_from_generators(cols, m, 1, rep.n)


def lift_by_m(rep: SubgroupRep) -> SubgroupRep:
    """The subgroup of all x with m*x in the input subgroup."""
    S, _, _, Linv = _smith_with_inverse(rep.hnf)
    d = [S.data[i][i] for i in range(rep.n)]
    cols = []
    for i in range(rep.n):
        scale = d[i] // gcd(d[i], rep.m)
        cols.append(tuple(scale * Linv.data[r][i] for r in range(rep.n)))
    return subgroup_from_generators(cols, rep.m, rep.k, rep.n)


@dataclass(frozen=True)
class SectionMap:
    """Classical map Z_m^n -> Z_{m^k}^n whose composition with the quotient by a
    fixed subgroup is a surjective homomorphism onto (divide-by-m lift)/(subgroup).

    Coordinates are taken in the Smith basis of the subgroup's lattice: each
    input digit is replaced by its least positive residue modulo gcd(d_i, m),
    stretched by d_i/gcd(d_i, m), and mapped back through the inverse left
    multiplier.
    """

    m: int
    k: int
    n: int
    diag: tuple[int, ...]
    linv: IntMatrix

    def __call__(self, x) -> tuple[int, ...]:
        if len(x) != self.n:
            raise ValueError("vector length mismatch")
        q = self.m**self.k
        y = []
        for xi, di in zip(x, self.diag):
            g = gcd(di, self.m)
            r = int(xi) % g
            if r == 0:
                r = g
            y.append(r * (di // g))
        out = self.linv.mat_vec(y)
        return tuple(v % q for v in out)


def section_map(rep: SubgroupRep, lifted: SubgroupRep | None = None) -> SectionMap:
    """Build the transversal map for one divide-by-m reduction round."""
    S, _, _, Linv = _smith_with_inverse(rep.hnf)
    d = tuple(S.data[i][i] for i in range(rep.n))
    sm = SectionMap(rep.m, rep.k, rep.n, d, Linv)
    if lifted is not None:
        for i in range(rep.n):
            img = sm(tuple(1 if j == i else 0 for j in range(rep.n)))
            if not contains_element(lifted, img):
                raise AssertionError("section image escapes the lifted subgroup")
    return sm


# ---------------------------------------------------------------------------
# Invariant factors


@dataclass(frozen=True)
class AbelianDecomposition:
    """Cyclic decomposition: factors m_1 | m_2 | ... (each > 1) and exponent rows
    expressing the new generators in terms of the originals."""

    nprime: int
    factors: tuple[int, ...]
    generator_matrix: IntMatrix | None

    def __post_init__(self):
        if self.nprime != len(self.factors):
            raise ValueError("factor count mismatch")
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a:
                raise ValueError("factors must form a divisibility chain")

    def group_order(self) -> int:
        return prod(self.factors) if self.factors else 1

    def factors_decreasing(self) -> tuple[int, ...]:
        """The same chain listed largest-first (the other common convention)."""
        return tuple(reversed(self.factors))


def invariant_factor_decomposition(relations: IntMatrix, n: int) -> AbelianDecomposition:
    """Decompose Z^n modulo the column lattice of a full-rank relation matrix.

    The Smith diagonal gives the invariant factors; the new generators are read
    off the columns of the inverse left multiplier (each column is the exponent
    vector of one new generator in terms of the originals).
    """
    if relations.rows != n:
        raise ValueError("relation matrix must have n rows")
    S, _, _, Linv = _smith_with_inverse(relations)
    diag = [S.data[i][i] if i < S.cols else 0 for i in range(n)]
    if any(d == 0 for d in diag):
        raise ValueError("relations do not define a finite group (zero invariant factor)")
    factors = []
    gen_rows = []
    for i, d in enumerate(diag):
        if d > 1:
            factors.append(d)
            gen_rows.append([Linv.data[r][i] for r in range(n)])
    if not factors:
        return AbelianDecomposition(0, (), None)
    return AbelianDecomposition(
        len(factors), tuple(factors), IntMatrix.from_rows(gen_rows)
    )
