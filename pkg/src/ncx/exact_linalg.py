"""Exact matrices, Smith normal form, kernels, solving and subquotients.

Everything downstream reduces to the routines in this file.  Matrices are
immutable; their Smith decomposition is cached on first use.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ContainmentViolation, NotSolvable, RingError
from .rings import ZZ, LocalizedIntegers, Ring


class Matrix:
    """Immutable rows x cols matrix over a ring."""

    __slots__ = ("ring", "nrows", "ncols", "rows", "_snf")

    def __init__(self, ring: Ring, rows, nrows=None, ncols=None, trusted=False):
        rows = [list(r) for r in rows]
        if nrows is None:
            nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise RingError("entry count does not match the declared shape")
        if not trusted:
            rows = [[ring.canon(x) for x in r] for r in rows]
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        self.rows = tuple(tuple(r) for r in rows)
        self._snf = None

    # constructors
    @classmethod
    def zeros(cls, ring, m, n):
        z = ring.zero
        return cls(ring, [[z] * n for _ in range(m)], m, n, trusted=True)

    @classmethod
    def identity(cls, ring, n):
        z, o = ring.zero, ring.one
        return cls(ring, [[o if i == j else z for j in range(n)] for i in range(n)], n, n, trusted=True)

    @classmethod
    def from_ints(cls, ring, rows, nrows=None, ncols=None):
        return cls(ring, [[ring.from_int(x) if isinstance(x, int) else x for x in r] for r in rows], nrows, ncols)

    @classmethod
    def diag(cls, ring, entries, m=None, n=None):
        k = len(entries)
        m = k if m is None else m
        n = k if n is None else n
        out = [[ring.zero] * n for _ in range(m)]
        for i, e in enumerate(entries):
            out[i][i] = e
        return cls(ring, out, m, n)

    @classmethod
    def column(cls, ring, entries):
        return cls(ring, [[e] for e in entries], len(entries), 1)

    @classmethod
    def hstack(cls, ring, mats, nrows=None):
        mats = list(mats)
        if nrows is None:
            if not mats:
                raise RingError("hstack of nothing needs an explicit row count")
            nrows = mats[0].nrows
        rows = [[] for _ in range(nrows)]
        for M in mats:
            if M.nrows != nrows:
                raise RingError("row counts differ in hstack")
            for i in range(nrows):
                rows[i].extend(M.rows[i])
        return cls(ring, rows, nrows, sum(M.ncols for M in mats), trusted=True)

    @classmethod
    def vstack(cls, ring, mats, ncols=None):
        mats = list(mats)
        if ncols is None:
            if not mats:
                raise RingError("vstack of nothing needs an explicit column count")
            ncols = mats[0].ncols
        rows = []
        for M in mats:
            if M.ncols != ncols:
                raise RingError("column counts differ in vstack")
            rows.extend(M.rows)
        return cls(ring, rows, len(rows), ncols, trusted=True)

    @classmethod
    def block_diag(cls, ring, mats):
        m = sum(M.nrows for M in mats)
        n = sum(M.ncols for M in mats)
        out = [[ring.zero] * n for _ in range(m)]
        r = c = 0
        for M in mats:
            for i in range(M.nrows):
                out[r + i][c:c + M.ncols] = M.rows[i]
            r += M.nrows
            c += M.ncols
        return cls(ring, out, m, n, trusted=True)

    @classmethod
    def blocks(cls, ring, grid, row_sizes, col_sizes):
        """Assemble from a grid of blocks; None stands for a zero block."""
        m, n = sum(row_sizes), sum(col_sizes)
        out = [[ring.zero] * n for _ in range(m)]
        r = 0
        for bi, rs in enumerate(row_sizes):
            c = 0
            for bj, cs in enumerate(col_sizes):
                B = grid[bi][bj]
                if B is not None:
                    if (B.nrows, B.ncols) != (rs, cs):
                        raise RingError(f"block ({bi},{bj}) has shape {B.shape}, expected {(rs, cs)}")
                    for i in range(rs):
                        out[r + i][c:c + cs] = B.rows[i]
                c += cs
            r += rs
        return cls(ring, out, m, n, trusted=True)

    # basic protocol
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.shape == other.shape
                and self.ring == other.ring and self.rows == other.rows)

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        f = self.ring.fmt
        body = "; ".join(" ".join(f(x) for x in r) for r in self.rows)
        return f"Matrix<{self.nrows}x{self.ncols} over {self.ring.name()}>[{body}]"

    def is_zero(self):
        z = self.ring.is_zero
        return all(z(x) for r in self.rows for x in r)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise RingError(f"cannot multiply {self.shape} by {other.shape}")
        R = self.ring
        add, mul, isz = R.add, R.mul, R.is_zero
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if not isz(a)]
            row = []
            for c in cols:
                acc = R.zero
                for k, a in nz:
                    b = c[k]
                    if not isz(b):
                        acc = add(acc, mul(a, b))
                row.append(acc)
            out.append(row)
        return Matrix(R, out, self.nrows, other.ncols, trusted=True)

    def __add__(self, other):
        if self.shape != other.shape:
            raise RingError("shape mismatch in addition")
        add = self.ring.add
        return Matrix(self.ring, [[add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      self.nrows, self.ncols, trusted=True)

    def __neg__(self):
        neg = self.ring.neg
        return Matrix(self.ring, [[neg(a) for a in r] for r in self.rows], self.nrows, self.ncols, trusted=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        mul = self.ring.mul
        return Matrix(self.ring, [[mul(c, a) for a in r] for r in self.rows], self.nrows, self.ncols, trusted=True)

    @property
    def T(self):
        return Matrix(self.ring, [list(c) for c in zip(*self.rows)] if self.nrows else [[] for _ in range(self.ncols)],
                      self.ncols, self.nrows, trusted=True)

    def col(self, j):
        return Matrix(self.ring, [[r[j]] for r in self.rows], self.nrows, 1, trusted=True)

    def select_cols(self, idx):
        idx = list(idx)
        return Matrix(self.ring, [[r[j] for j in idx] for r in self.rows], self.nrows, len(idx), trusted=True)

    def select_rows(self, idx):
        idx = list(idx)
        return Matrix(self.ring, [self.rows[i] for i in idx], len(idx), self.ncols, trusted=True)

    def nonzero_cols(self):
        isz = self.ring.is_zero
        keep = [j for j in range(self.ncols) if any(not isz(r[j]) for r in self.rows)]
        return self.select_cols(keep)

    def to_literal(self):
        return [[self.ring.to_literal(x) for x in r] for r in self.rows]

    def over(self, ring):
        """Reinterpret integer entries in another ring."""
        return Matrix(ring, [[ring.from_literal(self.ring.to_literal(x)) for x in r] for r in self.rows],
                      self.nrows, self.ncols)


def kron(A: Matrix, B: Matrix) -> Matrix:
    R = A.ring
    mul = R.mul
    rows = []
    for ra in A.rows:
        for rb in B.rows:
            rows.append([mul(a, b) for a in ra for b in rb])
    return Matrix(R, rows, A.nrows * B.nrows, A.ncols * B.ncols, trusted=True)


# ---------------------------------------------------------------- Smith form

def _snf_lists(A: Matrix):
    R = A.ring
    m, n = A.shape
    W = [list(r) for r in A.rows]
    U = [[R.one if i == j else R.zero for j in range(m)] for i in range(m)]
    V = [[R.one if i == j else R.zero for j in range(n)] for i in range(n)]
    add, mul, isz, norm = R.add, R.mul, R.is_zero, R.norm

    def row_combo(M, i, k, s, t, u, v):
        # row_i, row_k <- s*row_i + t*row_k, u*row_i + v*row_k
        ri, rk = M[i], M[k]
        M[i] = [add(mul(s, a), mul(t, b)) for a, b in zip(ri, rk)]
        M[k] = [add(mul(u, a), mul(v, b)) for a, b in zip(ri, rk)]

    def col_combo(M, i, k, s, t, u, v):
        for r in M:
            a, b = r[i], r[k]
            r[i] = add(mul(s, a), mul(t, b))
            r[k] = add(mul(u, a), mul(v, b))

    one, zero = R.one, R.zero
    for k in range(min(m, n)):
        best = None
        for i in range(k, m):
            Wi = W[i]
            for j in range(k, n):
                x = Wi[j]
                if not isz(x):
                    key = (norm(x), i, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            break
        _, pi, pj = best
        if pi != k:
            W[k], W[pi] = W[pi], W[k]
            U[k], U[pi] = U[pi], U[k]
        if pj != k:
            for M in (W, V):
                for r in M:
                    r[k], r[pj] = r[pj], r[k]
        while True:
            dirty = False
            for i in range(k + 1, m):
                b = W[i][k]
                if isz(b):
                    continue
                a = W[k][k]
                q = R.exact_div(b, a)
                if q is not None:
                    nq = R.neg(q)
                    row_combo(W, i, k, one, nq, zero, one)
                    row_combo(U, i, k, one, nq, zero, one)
                else:
                    g, s, t, u, v = R.xgcd(a, b)
                    # new row_k = s*row_k + t*row_i ; new row_i = u*row_k + v*row_i
                    row_combo(W, k, i, s, t, u, v)
                    row_combo(U, k, i, s, t, u, v)
                    dirty = True
            for j in range(k + 1, n):
                b = W[k][j]
                if isz(b):
                    continue
                a = W[k][k]
                q = R.exact_div(b, a)
                if q is not None:
                    nq = R.neg(q)
                    col_combo(W, j, k, one, nq, zero, one)
                    col_combo(V, j, k, one, nq, zero, one)
                else:
                    g, s, t, u, v = R.xgcd(a, b)
                    col_combo(W, k, j, s, t, u, v)
                    col_combo(V, k, j, s, t, u, v)
                    dirty = True
            if dirty:
                continue
            if any(not isz(W[i][k]) for i in range(k + 1, m)):
                continue
            a = W[k][k]
            bad = None
            for i in range(k + 1, m):
                for j in range(k + 1, n):
                    if R.exact_div(W[i][j], a) is None:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_combo(W, k, bad, one, one, zero, one)
            row_combo(U, k, bad, one, one, zero, one)
        c, u = R.assoc(W[k][k])
        if not R.eq(u, one):
            W[k] = [mul(u, x) for x in W[k]]
            U[k] = [mul(u, x) for x in U[k]]
    return U, W, V


@dataclass(frozen=True)
class SmithForm:
    U: Matrix
    D: Matrix
    V: Matrix

    @property
    def diagonal(self):
        return [self.D[i, i] for i in range(min(self.D.shape))]


def smith_normal_form(A: Matrix) -> SmithForm:
    """Return (U, D, V) with U*A*V = D diagonal and a divisibility chain.

    Pivot rule: smallest nonzero norm, ties to the lowest (row, col).
    """
    if A._snf is None:
        R = A.ring
        U, W, V = _snf_lists(A)
        m, n = A.shape
        A._snf = SmithForm(Matrix(R, U, m, m, trusted=True), Matrix(R, W, m, n, trusted=True),
                           Matrix(R, V, n, n, trusted=True))
    return A._snf


def solve(A: Matrix, B: Matrix):
    """Return X with A*X = B, or None when no solution exists."""
    R = A.ring
    m, n = A.shape
    if B.nrows != m:
        raise RingError("right-hand side has the wrong height")
    if n == 0:
        return Matrix.zeros(R, 0, B.ncols) if B.is_zero() else None
    F = smith_normal_form(A)
    UB = F.U @ B
    Y = [[R.zero] * B.ncols for _ in range(n)]
    r = min(m, n)
    for i in range(m):
        for c in range(B.ncols):
            b = UB[i, c]
            if i < r:
                q = R.exact_div(b, F.D[i, i])
                if q is None:
                    return None
                Y[i][c] = q
            elif not R.is_zero(b):
                return None
    return F.V @ Matrix(R, Y, n, B.ncols, trusted=True)


def field_rank(A: Matrix) -> int:
    """Rank over a prime field by plain elimination (no transforms kept)."""
    p = A.ring.p
    rows = [list(r) for r in A.rows]
    rank, col = 0, 0
    m, n = A.nrows, A.ncols
    while rank < m and col < n:
        piv = next((i for i in range(rank, m) if rows[i][col] % p), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        prow = [x * inv % p for x in rows[rank]]
        rows[rank] = prow
        for i in range(rank + 1, m):
            c = rows[i][col] % p
            if c:
                rows[i] = [(x - c * y) % p for x, y in zip(rows[i], prow)]
        rank += 1
        col += 1
    return rank


def in_span(A: Matrix, B: Matrix) -> bool:
    return solve(A, B) is not None


def kernel_basis(A: Matrix) -> Matrix:
    """Columns generating ker(A); saturated and independent over a PID."""
    R = A.ring
    m, n = A.shape
    if n == 0:
        return Matrix.zeros(R, 0, 0)
    if m == 0:
        return Matrix.identity(R, n)
    F = smith_normal_form(A)
    cols = []
    for j in range(n):
        a = R.ann(F.D[j, j]) if j < m else R.one
        if R.is_zero(a):
            continue
        c = F.V.col(j)
        cols.append(c if R.eq(a, R.one) else c.scale(a))
    if not cols:
        return Matrix.zeros(R, n, 0)
    return Matrix.hstack(R, cols)


def image_basis(A: Matrix) -> Matrix:
    """Independent columns spanning the image of A (over a PID)."""
    R = A.ring
    F = smith_normal_form(A)
    Uinv = solve(F.U, Matrix.identity(R, A.nrows))
    cols = []
    for i in range(min(A.shape)):
        d = F.D[i, i]
        if R.is_zero(d):
            break
        cols.append(Uinv.col(i).scale(d))
    if not cols:
        return Matrix.zeros(R, A.nrows, 0)
    return Matrix.hstack(R, cols)


def inverse(A: Matrix) -> Matrix:
    X = solve(A, Matrix.identity(A.ring, A.nrows))
    if X is None or A.nrows != A.ncols:
        raise NotSolvable("matrix is not invertible")
    return X


# ------------------------------------------------------- canonical modules

@dataclass(frozen=True)
class CanonicalFG:
    """R^free_rank plus cyclic torsion R/(d_1) + ... with d_1 | d_2 | ..."""

    ring: Ring
    free_rank: int
    invariant_factors: tuple = ()

    def is_zero(self):
        return self.free_rank == 0 and not self.invariant_factors

    def __str__(self):
        return self.render()

    def render(self):
        R = self.ring
        parts = []
        if self.free_rank:
            parts.append(f"{R.module_symbol()}^{self.free_rank}")
        for d in self.invariant_factors:
            parts.append(R.torsion_symbol(R.fmt(d)))
        return " + ".join(parts) if parts else "0"

    def order(self):
        """Cardinality for finite modules over the integers, else None."""
        if self.free_rank:
            return None
        o = 1
        for d in self.invariant_factors:
            o *= int(d)
        return o

    def to_json(self):
        R = self.ring
        return {"free_rank": self.free_rank,
                "invariant_factors": [R.to_literal(d) for d in self.invariant_factors]}


def _classify_diag(R: Ring, diag, ngens):
    free = ngens - len(diag)
    factors = []
    for d in diag:
        if R.is_zero(d):
            free += 1
        elif not R.is_unit(d):
            factors.append(R.assoc(d)[0])
    return CanonicalFG(R, free, tuple(factors))


def classify_cokernel(A: Matrix) -> CanonicalFG:
    """Invariant-factor decomposition of coker(A) = R^rows / image(A)."""
    R = A.ring
    if A.ncols == 0 or A.nrows == 0:
        return CanonicalFG(R, A.nrows, ())
    F = smith_normal_form(A)
    return _classify_diag(R, F.diagonal, A.nrows)


class FPModule:
    """Finitely presented module R^ngens / image(relations)."""

    def __init__(self, ring: Ring, ngens: int, relations: Matrix | None = None):
        if relations is None:
            relations = Matrix.zeros(ring, ngens, 0)
        if relations.nrows != ngens:
            raise RingError("relation matrix must have one row per generator")
        if relations.ring != ring:
            raise RingError("relations live over a different ring")
        self.ring = ring
        self.ngens = ngens
        self.relations = relations
        self._cls = None

    @classmethod
    def free(cls, ring, n):
        return cls(ring, n)

    @classmethod
    def cyclic(cls, ring, d):
        return cls(ring, 1, Matrix(ring, [[d]], 1, 1))

    @classmethod
    def from_factors(cls, ring, free_rank, factors):
        n = free_rank + len(factors)
        rel = Matrix.diag(ring, [ring.canon(d) for d in factors], n, len(factors))
        # torsion generators first, then free ones
        return cls(ring, n, rel)

    def classify(self) -> CanonicalFG:
        if self._cls is None:
            self._cls = classify_cokernel(self.relations)
        return self._cls

    def is_zero(self):
        return self.classify().is_zero()

    def __repr__(self):
        return f"FPModule({self.classify().render()})"

    def direct_sum(self, other: "FPModule") -> "FPModule":
        return direct_sum([self, other])

    def contains(self, v: Matrix) -> bool:
        """True if the columns of v lie in the relation span (are zero in M)."""
        if self.relations.ncols == 0:
            return v.is_zero()
        return in_span(self.relations, v)

    def to_json(self):
        return {"gens": self.ngens, "relations": self.relations.to_literal()}


def direct_sum(mods) -> FPModule:
    mods = list(mods)
    if not mods:
        raise RingError("direct sum of nothing needs a ring")
    R = mods[0].ring
    return FPModule(R, sum(M.ngens for M in mods), Matrix.block_diag(R, [M.relations for M in mods]))


def zero_module(R):
    return FPModule(R, 0)


class Subquotient:
    """The module span(num) / span(den) inside a free ambient module.

    The presentation uses the columns of ``num`` as generators; ``coords``
    expresses ambient vectors of the numerator in those generators.
    """

    def __init__(self, ring: Ring, ambient: int, num: Matrix, den: Matrix):
        self.ring = ring
        self.ambient = ambient
        self.num = num
        self.den = den
        ker = kernel_basis(num)
        if den.ncols:
            cd = solve(num, den)
            if cd is None:
                raise ContainmentViolation("denominator is not contained in the numerator span")
        else:
            cd = Matrix.zeros(ring, num.ncols, 0)
        rel = Matrix.hstack(ring, [ker, cd], nrows=num.ncols)
        self.module = FPModule(ring, num.ncols, rel)

    def coords(self, v: Matrix) -> Matrix:
        if v.ncols == 0:
            return Matrix.zeros(self.ring, self.num.ncols, 0)
        c = solve(self.num, v)
        if c is None:
            raise ContainmentViolation("vector does not lie in the numerator")
        return c

    def classify(self):
        return self.module.classify()


def subquotient(ambient_gens: int, numerator: Matrix, denominator: Matrix) -> CanonicalFG:
    """Classify span(numerator) / span(denominator) inside R^ambient_gens."""
    if numerator.nrows != ambient_gens or denominator.nrows != ambient_gens:
        raise RingError("generators must live in the ambient module")
    return Subquotient(numerator.ring, ambient_gens, numerator, denominator).classify()


# ----------------------------------------------------------- module maps

def map_kernel(F: Matrix, src: FPModule, tgt: FPModule) -> Matrix:
    """Generators (in src's generator coordinates) of the kernel of F."""
    R = F.ring
    big = Matrix.hstack(R, [F, tgt.relations], nrows=tgt.ngens)
    K = kernel_basis(big)
    return K.select_rows(range(src.ngens)) if K.ncols else Matrix.zeros(R, src.ngens, 0)


def is_well_defined(F: Matrix, src: FPModule, tgt: FPModule) -> bool:
    if src.relations.ncols == 0:
        return True
    return tgt.contains(F @ src.relations)


def is_injective(F, src, tgt) -> bool:
    K = map_kernel(F, src, tgt)
    return K.ncols == 0 or src.contains(K)


def is_surjective(F, src, tgt) -> bool:
    R = F.ring
    if tgt.ngens == 0:
        return True
    big = Matrix.hstack(R, [F, tgt.relations], nrows=tgt.ngens)
    return in_span(big, Matrix.identity(R, tgt.ngens))


def is_iso(F, src, tgt) -> bool:
    return is_injective(F, src, tgt) and is_surjective(F, src, tgt)


def is_zero_map(F, src, tgt) -> bool:
    return tgt.contains(F)


def exact_at(F: Matrix, A: FPModule, B: FPModule, G: Matrix, C: FPModule) -> bool:
    """Exactness of A --F--> B --G--> C at B."""
    R = B.ring
    if F.ncols and not C.contains(G @ F):
        return False
    K = map_kernel(G, B, C)
    if K.ncols == 0:
        return True
    big = Matrix.hstack(R, [F, B.relations], nrows=B.ngens)
    return in_span(big, K)


def localize_module(M: FPModule, S) -> FPModule:
    """Read the presentation of a module over the integers in Z[1/S]."""
    if M.ring != ZZ:
        raise RingError("localization is defined here for modules over the integers")
    L = LocalizedIntegers(S)
    return FPModule(L, M.ngens, M.relations.over(L))
