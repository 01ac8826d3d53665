"""Bounded N-complexes of finitely presented modules.

A complex stores one FPModule per degree in [lo, hi] and the matrices of
its differentials on generators.  Amplitude cohomology, disks, suspension,
cones, homotopies, truncations and long exact sequences live here.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import NotExactInput, RingError
from .rings import PrimeField
from .exact_linalg import (CanonicalFG, field_rank, FPModule, Matrix, Subquotient, direct_sum, exact_at,
                           is_injective, is_iso, is_surjective, kernel_basis, kron, solve)


class NComplex:
    def __init__(self, N: int, ring, lo: int, modules, diffs=None):
        if N < 2:
            raise RingError("N must be at least 2")
        modules = list(modules)
        self.N = N
        self.ring = ring
        self.lo = lo
        self.hi = lo + len(modules) - 1
        self._mods = modules
        if diffs is None:
            diffs = [Matrix.zeros(ring, modules[i + 1].ngens, modules[i].ngens) for i in range(len(modules) - 1)]
        diffs = list(diffs)
        if len(diffs) != max(len(modules) - 1, 0):
            raise RingError("need one differential between each pair of adjacent degrees")
        for i, D in enumerate(diffs):
            if D.shape != (modules[i + 1].ngens, modules[i].ngens):
                raise RingError(f"differential at degree {lo + i} has shape {D.shape}")
        self._diffs = diffs
        self._sq = {}

    @classmethod
    def zero(cls, N, ring):
        return cls(N, ring, 0, [FPModule(ring, 0)])

    @classmethod
    def free(cls, N, ring, lo, mats):
        """Complex of free modules from a list of differential matrices."""
        mats = list(mats)
        if mats:
            ranks = [mats[0].ncols] + [M.nrows for M in mats]
        else:
            raise RingError("use NComplex.zero or give at least one matrix")
        return cls(N, ring, lo, [FPModule(ring, r) for r in ranks], mats)

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def module(self, n) -> FPModule:
        if self.lo <= n <= self.hi:
            return self._mods[n - self.lo]
        return FPModule(self.ring, 0)

    def gens(self, n) -> int:
        return self.module(n).ngens

    def rel(self, n) -> Matrix:
        return self.module(n).relations

    def diff(self, n) -> Matrix:
        if self.lo <= n < self.hi:
            return self._diffs[n - self.lo]
        return Matrix.zeros(self.ring, self.gens(n + 1), self.gens(n))

    def composite(self, n, k) -> Matrix:
        """d^{n+k-1} ... d^n as a matrix, identity when k = 0."""
        M = Matrix.identity(self.ring, self.gens(n))
        for j in range(k):
            M = self.diff(n + j) @ M
        return M

    def is_free(self):
        return all(M.relations.ncols == 0 for M in self._mods)

    def ranks(self):
        return {n: self.gens(n) for n in self.degrees()}

    def __repr__(self):
        return f"NComplex(N={self.N}, {self.ring.name()}, degrees {self.lo}..{self.hi}, ranks {list(self.ranks().values())})"

    def trimmed(self):
        """Drop zero-generator modules at both ends of the support."""
        lo, hi = self.lo, self.hi
        while lo < hi and self.gens(lo) == 0:
            lo += 1
        while hi > lo and self.gens(hi) == 0:
            hi -= 1
        if (lo, hi) == (self.lo, self.hi):
            return self
        return NComplex(self.N, self.ring, lo, [self.module(n) for n in range(lo, hi + 1)],
                        [self.diff(n) for n in range(lo, hi)])

    def reindexed(self, lo, hi):
        """Same complex with an explicit (possibly padded) support."""
        return NComplex(self.N, self.ring, lo, [self.module(n) for n in range(lo, hi + 1)],
                        [self.diff(n) for n in range(lo, hi)])

    def negated(self):
        return NComplex(self.N, self.ring, self.lo, self._mods, [-D for D in self._diffs])

    def direct_sum(self, other: "NComplex") -> "NComplex":
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        R = self.ring
        mods = [direct_sum([self.module(n), other.module(n)]) for n in range(lo, hi + 1)]
        diffs = [Matrix.block_diag(R, [self.diff(n), other.diff(n)]) for n in range(lo, hi)]
        return NComplex(self.N, R, lo, mods, diffs)

    # cohomology ---------------------------------------------------------
    def cycles(self, n, t) -> Matrix:
        """Generators of Z^n_t inside the generators of X^n."""
        P = self.composite(n, t)
        rel = self.rel(n + t)
        big = Matrix.hstack(self.ring, [P, rel], nrows=P.nrows)
        K = kernel_basis(big)
        g = self.gens(n)
        return K.select_rows(range(g)) if K.ncols else Matrix.zeros(self.ring, g, 0)

    def boundaries(self, n, t) -> Matrix:
        """Generators of B^n_t together with the relations of X^n."""
        B = self.composite(n - t, t)
        return Matrix.hstack(self.ring, [B, self.rel(n)], nrows=self.gens(n))

    def cohomology_sq(self, n, t) -> Subquotient:
        key = (n, t)
        if key not in self._sq:
            if not 1 <= t <= self.N - 1:
                raise RingError("amplitude t must lie in 1..N-1")
            self._sq[key] = Subquotient(self.ring, self.gens(n), self.cycles(n, t),
                                        self.boundaries(n, self.N - t))
        return self._sq[key]


def validate(X: NComplex) -> dict:
    """Check d^N = 0 and compatibility with relations; never raises."""
    violations = []
    for n in range(X.lo, X.hi + 1):
        src = X.module(n)
        if src.relations.ncols and not X.module(n + 1).contains(X.diff(n) @ src.relations):
            violations.append({"degree": n, "kind": "relations"})
    for n in range(X.lo - X.N, X.hi + 1):
        P = X.composite(n, X.N)
        if P.ncols and P.nrows and not X.module(n + X.N).contains(P):
            violations.append({"degree": n, "kind": "dN"})
    violations.sort(key=lambda v: (v["degree"], v["kind"]))
    return {"valid": not violations, "violations": violations,
            "first_violation": violations[0]["degree"] if violations else None}


def cohomology(X: NComplex, n: int, t: int) -> CanonicalFG:
    """H^n_t = Z^n_t / B^n_{N-t}, classified."""
    if isinstance(X.ring, PrimeField) and X.is_free():
        # dimension count is enough over a field
        g = X.gens(n)
        dim = g - field_rank(X.composite(n, t)) - field_rank(X.composite(n - X.N + t, X.N - t))
        return CanonicalFG(X.ring, dim, ())
    return X.cohomology_sq(n, t).classify()


def cohomology_table(X: NComplex, window=None) -> dict:
    lo, hi = window if window is not None else (X.lo, X.hi)
    return {(n, t): cohomology(X, n, t) for n in range(lo, hi + 1) for t in range(1, X.N)}


def nonzero_table(X: NComplex, window=None) -> dict:
    return {k: v for k, v in cohomology_table(X, window).items() if not v.is_zero()}


def render_table(table: dict) -> dict:
    return {f"H^{n}_{t}": v.render() for (n, t), v in sorted(table.items())}


def is_acyclic(X: NComplex) -> bool:
    return all(v.is_zero() for v in cohomology_table(X).values())


def disk(M: FPModule, j: int, t: int, N: int) -> NComplex:
    """t copies of M in degrees j-t+1..j joined by identities."""
    if not 1 <= t <= N:
        raise RingError("disk length must be in 1..N")
    R = M.ring
    return NComplex(N, R, j - t + 1, [M] * t, [Matrix.identity(R, M.ngens)] * (t - 1))


def ring_disk(R, N, j=0, t=1):
    return disk(FPModule(R, 1), j, t, N)


# suspension and cones -------------------------------------------------

def _sum_module(X, degs):
    return direct_sum([X.module(k) for k in degs]) if degs else FPModule(X.ring, 0)


def suspend(X: NComplex, direction: int = 1) -> NComplex:
    """Sigma X (direction +1) or its inverse (direction -1)."""
    N, R = X.N, X.ring
    if direction == 1:
        lo, hi = X.lo - N + 1, X.hi - 1

        def comps(n):
            return [n + c for c in range(1, N)]
    elif direction == -1:
        lo, hi = X.lo + 1, X.hi + N - 1

        def comps(n):
            return [n - N + 1 + c for c in range(N - 1)]
    else:
        raise RingError("direction must be +1 or -1")
    if hi < lo:
        return NComplex.zero(N, R)
    mods = [_sum_module(X, comps(n)) for n in range(lo, hi + 1)]
    diffs = []
    for n in range(lo, hi):
        src, tgt = comps(n), comps(n + 1)
        grid = [[None] * (N - 1) for _ in range(N - 1)]
        if direction == 1:
            for r in range(N - 2):
                grid[r][r + 1] = Matrix.identity(R, X.gens(tgt[r]))
            for c in range(N - 1):
                grid[N - 2][c] = -X.composite(src[c], N - 1 - c)
        else:
            for r in range(N - 2):
                grid[r][0] = -X.composite(src[0], r + 1)
                grid[r][r + 1] = Matrix.identity(R, X.gens(tgt[r]))
            grid[N - 2][0] = -X.composite(src[0], N - 1)
        diffs.append(Matrix.blocks(R, grid, [X.gens(k) for k in tgt], [X.gens(k) for k in src]))
    return NComplex(N, R, lo, mods, diffs)


def suspend_power(X: NComplex, k: int) -> NComplex:
    for _ in range(abs(k)):
        X = suspend(X, 1 if k > 0 else -1)
    return X


@dataclass
class ChainMap:
    source: NComplex
    target: NComplex
    comps: dict  # degree -> Matrix (target gens x source gens)

    def at(self, n) -> Matrix:
        M = self.comps.get(n)
        if M is None:
            return Matrix.zeros(self.source.ring, self.target.gens(n), self.source.gens(n))
        return M

    def degrees(self):
        return range(min(self.source.lo, self.target.lo), max(self.source.hi, self.target.hi) + 1)

    def check(self) -> list:
        """Degrees where commutation or well-definedness fails."""
        X, Y = self.source, self.target
        bad = []
        for n in self.degrees():
            F = self.at(n)
            if F.shape != (Y.gens(n), X.gens(n)):
                bad.append(n)
                continue
            if X.rel(n).ncols and not Y.module(n).contains(F @ X.rel(n)):
                bad.append(n)
                continue
            lhs = self.at(n + 1) @ X.diff(n) - Y.diff(n) @ F
            if lhs.ncols and lhs.nrows and not Y.module(n + 1).contains(lhs):
                bad.append(n)
        return bad

    def is_valid(self):
        return not self.check()

    def __sub__(self, other):
        return ChainMap(self.source, self.target, {n: self.at(n) - other.at(n) for n in self.degrees()})

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self after other."""
        degs = set(self.degrees()) | set(other.degrees())
        return ChainMap(other.source, self.target, {n: self.at(n) @ other.at(n) for n in degs})


def identity_map(X: NComplex) -> ChainMap:
    return ChainMap(X, X, {n: Matrix.identity(X.ring, X.gens(n)) for n in X.degrees()})


def scalar_map(X: NComplex, c) -> ChainMap:
    return ChainMap(X, X, {n: Matrix.identity(X.ring, X.gens(n)).scale(c) for n in X.degrees()})


def zero_map(X: NComplex, Y: NComplex) -> ChainMap:
    return ChainMap(X, Y, {})


def cone(f: ChainMap) -> NComplex:
    """C(f)^n = Y^n + X^{n+1} + ... + X^{n+N-1} with the block differential."""
    X, Y = f.source, f.target
    N, R = X.N, X.ring
    lo, hi = min(Y.lo, X.lo - N + 1), max(Y.hi, X.hi - 1)

    def sizes(n):
        return [Y.gens(n)] + [X.gens(n + c) for c in range(1, N)]

    mods = [direct_sum([Y.module(n)] + [X.module(n + c) for c in range(1, N)]) for n in range(lo, hi + 1)]
    diffs = []
    for n in range(lo, hi):
        grid = [[None] * N for _ in range(N)]
        grid[0][0] = Y.diff(n)
        grid[0][1] = f.at(n + 1)
        for r in range(1, N - 1):
            grid[r][r + 1] = Matrix.identity(R, X.gens(n + 1 + r))
        for c in range(1, N):
            grid[N - 1][c] = -X.composite(n + c, N - c)
        diffs.append(Matrix.blocks(R, grid, sizes(n + 1), sizes(n)))
    return NComplex(N, R, lo, mods, diffs)


def cone_inclusion(f: ChainMap, C: NComplex) -> ChainMap:
    """The triangle map Y -> C(f)."""
    Y, R = f.target, f.target.ring
    comps = {}
    for n in C.degrees():
        rows = C.gens(n)
        M = Matrix.zeros(R, rows, Y.gens(n))
        if Y.gens(n):
            M = Matrix.vstack(R, [Matrix.identity(R, Y.gens(n)), Matrix.zeros(R, rows - Y.gens(n), Y.gens(n))])
        comps[n] = M
    return ChainMap(Y, C, comps)


def cone_projection(f: ChainMap, C: NComplex) -> ChainMap:
    """The triangle map C(f) -> Sigma X."""
    X, R = f.source, f.source.ring
    SX = suspend(X, 1)
    comps = {}
    for n in C.degrees():
        y = f.target.gens(n)
        s = SX.gens(n)
        comps[n] = Matrix.hstack(R, [Matrix.zeros(R, s, y), Matrix.identity(R, s)], nrows=s)
    return ChainMap(C, SX, comps)


def cone_map(f: ChainMap, f2: ChainMap, beta: ChainMap, alpha: ChainMap) -> ChainMap:
    """Map C(f) -> C(f2) induced by beta on targets and alpha on sources.

    Requires beta o f = f2 o alpha.
    """
    C1, C2 = cone(f), cone(f2)
    N, R = f.source.N, f.source.ring
    comps = {}
    for n in set(C1.degrees()) | set(C2.degrees()):
        blocks = [beta.at(n)] + [alpha.at(n + c) for c in range(1, N)]
        comps[n] = Matrix.block_diag(R, blocks)
    return ChainMap(C1, C2, comps)


# homotopies -----------------------------------------------------------

@dataclass
class Homotopy:
    maps: dict  # degree m -> Matrix for s^m : X^m -> Y^{m-N+1}

    def at(self, m, X, Y):
        M = self.maps.get(m)
        if M is None:
            return Matrix.zeros(X.ring, Y.gens(m - X.N + 1), X.gens(m))
        return M


def homotopy_sum(X: NComplex, Y: NComplex, s: Homotopy, n: int) -> Matrix:
    """sum_i d^{N-1-i} s^{n+i} d^i at degree n."""
    N = X.N
    acc = Matrix.zeros(X.ring, Y.gens(n), X.gens(n))
    for i in range(N):
        A = Y.composite(n + i - N + 1, N - 1 - i)
        B = X.composite(n, i)
        acc = acc + A @ s.at(n + i, X, Y) @ B
    return acc


def check_homotopy(f: ChainMap, s: Homotopy, g: ChainMap | None = None) -> bool:
    """True if g - f equals the homotopy sum (g = 0 checks f ~ 0 with sign)."""
    X, Y = f.source, f.target
    for n in f.degrees():
        target = f.at(n) if g is None else g.at(n) - f.at(n)
        diff = homotopy_sum(X, Y, s, n) - target
        if diff.ncols and diff.nrows and not Y.module(n).contains(diff):
            return False
    return True


def _place(big, r0, c0, M):
    for i, row in enumerate(M.rows):
        big[r0 + i][c0:c0 + M.ncols] = row


def null_homotopy(f: ChainMap) -> Homotopy | None:
    """Solve f^n = sum_i d^{N-1-i} s^{n+i} d^i exactly, or return None."""
    X, Y = f.source, f.target
    N, R = X.N, X.ring
    unknown = {}
    off = 0
    for m in X.degrees():
        rows, cols = Y.gens(m - N + 1), X.gens(m)
        if rows and cols:
            unknown[m] = (off, rows, cols)
            off += rows * cols
    n_s = off
    eqs = []  # (row offset, height) blocks
    slack = []
    erow = 0
    blocks = []
    for n in f.degrees():
        gy, gx = Y.gens(n), X.gens(n)
        if not (gy and gx):
            continue
        terms = []
        for i in range(N):
            m = n + i
            if m not in unknown:
                continue
            A = Y.composite(n + i - N + 1, N - 1 - i)
            B = X.composite(n, i)
            terms.append((m, kron(B.T, A)))
        rhs = f.at(n)
        relY = Y.rel(n)
        blocks.append((erow, gy * gx, terms, relY, gx, rhs))
        erow += gy * gx
    wd = []
    for m, (o, rows, cols) in unknown.items():
        relX = X.rel(m)
        if relX.ncols:
            wd.append((erow, rows * relX.ncols, m, kron(relX.T, Matrix.identity(R, rows)), Y.rel(m - N + 1), relX.ncols))
            erow += rows * relX.ncols
    n_slack = sum(b[3].ncols * b[4] for b in blocks) + sum(w[4].ncols * w[5] for w in wd)
    width = n_s + n_slack
    big = [[R.zero] * width for _ in range(erow)]
    rhs = [[R.zero] for _ in range(erow)]
    so = n_s
    for r0, h, terms, relY, gx, F in blocks:
        for m, K in terms:
            o = unknown[m][0]
            for i, row in enumerate(K.rows):
                tgt = big[r0 + i]
                for j, x in enumerate(row):
                    if not R.is_zero(x):
                        tgt[o + j] = R.add(tgt[o + j], x)
        if relY.ncols:
            S = kron(Matrix.identity(R, gx), relY)
            _place(big, r0, so, S)
            so += S.ncols
        vec = [F[i, j] for j in range(F.ncols) for i in range(F.nrows)]
        for i, v in enumerate(vec):
            rhs[r0 + i][0] = v
    for r0, h, m, K, relT, k in wd:
        _place(big, r0, unknown[m][0], K)
        if relT.ncols:
            S = kron(Matrix.identity(R, k), relT)
            _place(big, r0, so, S)
            so += S.ncols
    if erow == 0:
        return Homotopy({})
    A = Matrix(R, big, erow, width, trusted=True)
    sol = solve(A, Matrix(R, rhs, erow, 1, trusted=True))
    if sol is None:
        return None
    maps = {}
    for m, (o, rows, cols) in unknown.items():
        vals = [sol[o + k, 0] for k in range(rows * cols)]
        maps[m] = Matrix(R, [[vals[j * rows + i] for j in range(cols)] for i in range(rows)], rows, cols, trusted=True)
    s = Homotopy(maps)
    if not check_homotopy(ChainMap(X, Y, {n: -f.at(n) for n in f.degrees()}), s, ChainMap(X, Y, {})):
        raise RingError("internal error: homotopy solution fails verification")
    return s


def chain_map_basis(X: NComplex, Y: NComplex) -> list:
    """Generators of the module of chain maps X -> Y (free modules only)."""
    R = X.ring
    degs = sorted(set(X.degrees()) | set(Y.degrees()))
    unknown, off = {}, 0
    for n in degs:
        r, c = Y.gens(n), X.gens(n)
        if r and c:
            unknown[n] = (off, r, c)
            off += r * c
    if not (X.is_free() and Y.is_free()):
        raise RingError("chain map search needs free modules")
    rows = []
    for n in degs:
        # f^{n+1} d_X^n - d_Y^n f^n = 0
        gy, gx = Y.gens(n + 1), X.gens(n)
        if not (gy and gx):
            continue
        block = [[R.zero] * off for _ in range(gy * gx)]
        if n + 1 in unknown:
            _place(block, 0, unknown[n + 1][0], kron(X.diff(n).T, Matrix.identity(R, gy)))
        if n in unknown:
            K = -kron(Matrix.identity(R, gx), Y.diff(n))
            o = unknown[n][0]
            for i, row in enumerate(K.rows):
                for j, x in enumerate(row):
                    block[i][o + j] = R.add(block[i][o + j], x)
        rows.extend(block)
    if off == 0:
        return []
    A = Matrix(R, rows, len(rows), off, trusted=True) if rows else Matrix.zeros(R, 0, off)
    K = kernel_basis(A)
    out = []
    for j in range(K.ncols):
        comps = {}
        for n, (o, r, c) in unknown.items():
            comps[n] = Matrix(R, [[K[o + jj * r + i, j] for jj in range(c)] for i in range(r)], r, c, trusted=True)
        out.append(ChainMap(X, Y, comps))
    return out


# quasi-isomorphisms -----------------------------------------------------

def induced_map(f: ChainMap, n: int, t: int) -> Matrix:
    """Matrix of H^n_t(f) in the generators of the two subquotients."""
    sx = f.source.cohomology_sq(n, t)
    sy = f.target.cohomology_sq(n, t)
    img = f.at(n) @ sx.num
    return sy.coords(img)


def is_quasi_iso(f: ChainMap) -> dict:
    """Decide quasi-isomorphism by induced maps and by cone acyclicity."""
    X, Y = f.source, f.target
    failures = []
    lo = min(X.lo, Y.lo)
    hi = max(X.hi, Y.hi)
    for n in range(lo, hi + 1):
        for t in range(1, X.N):
            F = induced_map(f, n, t)
            if not is_iso(F, X.cohomology_sq(n, t).module, Y.cohomology_sq(n, t).module):
                failures.append((n, t))
    by_induced = not failures
    C = cone(f)
    bad_cone = [k for k, v in cohomology_table(C).items() if not v.is_zero()]
    by_cone = not bad_cone
    return {"quasi_iso": by_induced and by_cone, "by_induced": by_induced, "by_cone": by_cone,
            "agree": by_induced == by_cone, "failures": failures, "cone_nonzero": sorted(bad_cone)}


# truncations -----------------------------------------------------------

def _restrict(X, degs, lo, hi):
    R = X.ring
    mods = [X.module(n) if n in degs else FPModule(R, 0) for n in range(lo, hi + 1)]
    diffs = []
    for n in range(lo, hi):
        if n in degs and n + 1 in degs:
            diffs.append(X.diff(n))
        else:
            diffs.append(Matrix.zeros(R, mods[n + 1 - lo].ngens, mods[n - lo].ngens))
    return NComplex(X.N, R, lo, mods, diffs)


def truncate(X: NComplex, flavor: str, side: str, index: int):
    """Stupid or smart truncation.

    stupid/above keeps degrees > index, stupid/below keeps degrees <= index.
    smart/below is sigma_{<= index}, built from the kernels Z^{index-j}_{j+1};
    smart/above is sigma_{>= index}, built from the cokernels C^{index+j}_{j+1}.
    Returns the truncated complex together with its comparison map to or from X.
    """
    N, R = X.N, X.ring
    if flavor == "stupid":
        if side == "above":
            if index >= X.hi:
                return NComplex.zero(N, R), None
            lo = max(X.lo, index + 1)
            T = _restrict(X, set(range(lo, X.hi + 1)), lo, X.hi)
            inc = ChainMap(T, X, {n: Matrix.identity(R, X.gens(n)) for n in T.degrees()})
            return T, inc
        if side == "below":
            if index < X.lo:
                return NComplex.zero(N, R), None
            hi = min(X.hi, index)
            T = _restrict(X, set(range(X.lo, hi + 1)), X.lo, hi)
            proj = ChainMap(X, T, {n: Matrix.identity(R, X.gens(n)) for n in T.degrees()})
            return T, proj
        raise RingError("side must be 'above' or 'below'")
    if flavor != "smart":
        raise RingError("flavor must be 'stupid' or 'smart'")
    n = index
    if side == "below":
        lo, hi = min(X.lo, n), n
        subs = {}
        for k in range(lo, hi + 1):
            j = n - k
            if j <= N - 2:
                Zg = X.cycles(k, j + 1)
                subs[k] = Subquotient(R, X.gens(k), Zg, X.rel(k))
        mods, gensmat = [], {}
        for k in range(lo, hi + 1):
            if k in subs:
                mods.append(subs[k].module)
                gensmat[k] = subs[k].num
            else:
                mods.append(X.module(k))
                gensmat[k] = Matrix.identity(R, X.gens(k))
        diffs = []
        for k in range(lo, hi):
            img = X.diff(k) @ gensmat[k]
            diffs.append(subs[k + 1].coords(img) if k + 1 in subs else img)
        T = NComplex(N, R, lo, mods, diffs)
        inc = ChainMap(T, X, {k: gensmat[k] for k in range(lo, hi + 1)})
        return T, inc
    if side == "above":
        lo, hi = n, max(X.hi, n)
        mods = []
        for k in range(lo, hi + 1):
            j = k - n
            if j <= N - 2:
                B = X.composite(k - j - 1, j + 1)
                rel = Matrix.hstack(R, [X.rel(k), B], nrows=X.gens(k))
                mods.append(FPModule(R, X.gens(k), rel))
            else:
                mods.append(X.module(k))
        T = NComplex(N, R, lo, mods, [X.diff(k) for k in range(lo, hi)])
        proj = ChainMap(X, T, {k: Matrix.identity(R, X.gens(k)) for k in range(lo, hi + 1)})
        return T, proj
    raise RingError("side must be 'above' or 'below'")


# long exact sequence ------------------------------------------------------

def check_short_exact(f: ChainMap, g: ChainMap) -> list:
    """Degrees where 0 -> X -> Y -> Z -> 0 fails to be exact."""
    X, Y, Z = f.source, f.target, g.target
    bad = []
    if f.check() or g.check():
        return ["not chain maps"]
    for n in sorted(set(X.degrees()) | set(Y.degrees()) | set(Z.degrees())):
        F, G = f.at(n), g.at(n)
        ok = (is_injective(F, X.module(n), Y.module(n)) and is_surjective(G, Y.module(n), Z.module(n))
              and exact_at(F, X.module(n), Y.module(n), G, Z.module(n)))
        if not ok:
            bad.append(n)
    return bad


def connecting_map(f: ChainMap, g: ChainMap, n: int, t: int) -> Matrix:
    """delta: H^n_t(Z) -> H^{n+t}_{N-t}(X) by lifting and pushing."""
    X, Y, Z = f.source, f.target, g.target
    R, N = X.ring, X.N
    sz = Z.cohomology_sq(n, t)
    sx = X.cohomology_sq(n + t, N - t)
    gy = Y.gens(n)
    liftA = Matrix.hstack(R, [g.at(n), Z.rel(n)], nrows=Z.gens(n))
    cols = []
    for j in range(sz.num.ncols):
        z = sz.num.col(j)
        sol = solve(liftA, z)
        if sol is None:
            raise NotExactInput(f"cannot lift a class at degree {n}")
        y = sol.select_rows(range(gy))
        w = Y.composite(n, t) @ y
        pushA = Matrix.hstack(R, [f.at(n + t), Y.rel(n + t)], nrows=Y.gens(n + t))
        sol2 = solve(pushA, w)
        if sol2 is None:
            raise NotExactInput(f"boundary does not come from the subcomplex at degree {n + t}")
        cols.append(sol2.select_rows(range(X.gens(n + t))))
    if not cols:
        return Matrix.zeros(R, sx.num.ncols, 0)
    return sx.coords(Matrix.hstack(R, cols, nrows=X.gens(n + t)))


def les_report(f: ChainMap, g: ChainMap, t: int) -> dict:
    """Assemble the long exact sequence through H^n_t and check every node."""
    X, Y, Z = f.source, f.target, g.target
    N = X.N
    if not 1 <= t <= N - 1:
        raise RingError("amplitude t must lie in 1..N-1")
    bad = check_short_exact(f, g)
    if bad:
        raise NotExactInput(f"degreewise sequence is not short exact at {bad}")
    lo = min(X.lo, Y.lo, Z.lo) - N
    hi = max(X.hi, Y.hi, Z.hi) + N
    # walk: X(n,t) Y(n,t) Z(n,t) X(n+t,N-t) ... starting at a degree below the support
    nodes = []  # (label, module, map to next)
    n, tt = lo - (lo % N), t
    while n <= hi:
        sx, sy, sz = X.cohomology_sq(n, tt), Y.cohomology_sq(n, tt), Z.cohomology_sq(n, tt)
        nodes.append((("X", n, tt), sx.module, induced_map(f, n, tt)))
        nodes.append((("Y", n, tt), sy.module, induced_map(g, n, tt)))
        nodes.append((("Z", n, tt), sz.module, connecting_map(f, g, n, tt)))
        n, tt = n + tt, N - tt
    results = []
    connecting_zero = True
    for i in range(1, len(nodes) - 1):
        (la, A, Fa), (lb, B, Fb), (lc, C, _) = nodes[i - 1], nodes[i], nodes[i + 1]
        ok = exact_at(Fa, A, B, Fb, C)
        results.append({"node": lb, "exact": ok})
    for lab, M, F in nodes:
        if lab[0] == "Z" and F.ncols and F.nrows:
            nxt = X.cohomology_sq(lab[1] + lab[2], N - lab[2]).module
            if not nxt.contains(F):
                connecting_zero = False
    return {"t": t, "nodes": len(results), "exact": all(r["exact"] for r in results),
            "failures": [r["node"] for r in results if not r["exact"]],
            "connecting_maps_zero": connecting_zero}
