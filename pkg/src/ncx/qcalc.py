"""q-twisted Hom and tensor of N-complexes, and their module specializations.

Maps between finitely presented modules are stored as column-major vecs
of their matrices on generators, so vec(A F B) = (B^T kron A) vec(F).
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import NonPrimitiveQ, RingError
from .exact_linalg import FPModule, Matrix, Subquotient, direct_sum, kernel_basis, kron
from .ncomplex_core import (ChainMap, NComplex, chain_map_basis, cohomology_table, cone, disk,
                            render_table, suspend, validate)
from .rings import CyclotomicIntegers, PrimeField


@dataclass(frozen=True)
class QContext:
    ring: object
    q: object
    N: int

    def __post_init__(self):
        R = self.ring
        if not R.eq(R.power(self.q, self.N), R.one):
            raise NonPrimitiveQ(f"q^{self.N} != 1")
        for k in range(1, self.N):
            if R.eq(R.power(self.q, k), R.one):
                raise NonPrimitiveQ(f"q^{k} = 1 with {k} < {self.N}")

    @classmethod
    def unchecked(cls, ring, q, N):
        """Context that skips the primitivity test (to exhibit failures)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "ring", ring)
        object.__setattr__(obj, "q", q)
        object.__setattr__(obj, "N", N)
        return obj

    def qpow(self, k):
        return self.ring.power(self.q, k % self.N)


def default_context(ring, N):
    """A context with the ring's own primitive N-th root, if it has one."""
    if isinstance(ring, PrimeField):
        if ring.root is not None and ring.root_order() == N:
            return QContext(ring, ring.root, N)
        for g in range(2, ring.p):
            ctx_ok = all(pow(g, k, ring.p) != 1 for k in range(1, N)) and pow(g, N, ring.p) == 1
            if ctx_ok:
                return QContext(ring, ring.from_int(g), N)
    if isinstance(ring, CyclotomicIntegers) and ring.n == N:
        return QContext(ring, ring.zeta(), N)
    if N == 2:
        return QContext(ring, ring.from_int(-1), N)
    raise NonPrimitiveQ(f"{ring.name()} has no primitive {N}-th root of unity")


# Hom and tensor of finitely presented modules ---------------------------

def module_tensor_fp(A: FPModule, B: FPModule) -> FPModule:
    R = A.ring
    rel = Matrix.hstack(R, [kron(A.relations, Matrix.identity(R, B.ngens)),
                            kron(Matrix.identity(R, A.ngens), B.relations)], nrows=A.ngens * B.ngens)
    return FPModule(R, A.ngens * B.ngens, rel)


def hom_sq(A: FPModule, B: FPModule) -> Subquotient:
    """Hom(A, B) inside the vecs of gB x gA matrices."""
    R = A.ring
    ga, gb = A.ngens, B.ngens
    amb = ga * gb
    ra, rb = A.relations.ncols, B.relations.ncols
    if ra == 0:
        num = Matrix.identity(R, amb)
    else:
        big = Matrix.hstack(R, [kron(A.relations.T, Matrix.identity(R, gb)),
                                kron(Matrix.identity(R, ra), B.relations)], nrows=gb * ra)
        K = kernel_basis(big)
        num = K.select_rows(range(amb)) if K.ncols else Matrix.zeros(R, amb, 0)
    den = kron(Matrix.identity(R, ga), B.relations) if rb else Matrix.zeros(R, amb, 0)
    if ra:
        num = Matrix.hstack(R, [num, den], nrows=amb)
    return Subquotient(R, amb, num, den)


# q-tensor and q-Hom -------------------------------------------------------

def _tensor(X: NComplex, Y: NComplex, qpow) -> NComplex:
    if X.N != Y.N or X.ring != Y.ring:
        raise RingError("complexes must share N and ring")
    R, N = X.ring, X.N
    lo, hi = X.lo + Y.lo, X.hi + Y.hi

    def comps(n):
        return [i for i in range(X.lo, X.hi + 1) if Y.lo <= n - i <= Y.hi]

    mods = []
    for n in range(lo, hi + 1):
        parts = [module_tensor_fp(X.module(i), Y.module(n - i)) for i in comps(n)]
        mods.append(_dsum(R, parts))
    diffs = []
    for n in range(lo, hi):
        src, tgt = comps(n), comps(n + 1)
        grid = [[None] * len(src) for _ in tgt]
        for c, i in enumerate(src):
            j = n - i
            for r, i2 in enumerate(tgt):
                if i2 == i + 1:
                    grid[r][c] = kron(X.diff(i), Matrix.identity(R, Y.gens(j)))
                elif i2 == i:
                    grid[r][c] = kron(Matrix.identity(R, X.gens(i)), Y.diff(j)).scale(qpow(i))
        rs = [X.gens(i) * Y.gens(n + 1 - i) for i in tgt]
        cs = [X.gens(i) * Y.gens(n - i) for i in src]
        diffs.append(Matrix.blocks(R, grid, rs, cs))
    return NComplex(N, R, lo, mods, diffs)


def _dsum(R, parts):
    return direct_sum(parts) if parts else FPModule(R, 0)


def q_tensor(X: NComplex, Y: NComplex, ctx: QContext) -> NComplex:
    return _tensor(X, Y, ctx.qpow)


class HomComplex(NComplex):
    """q-Hom complex that remembers how its generators sit as matrices."""

    def __init__(self, N, ring, lo, modules, diffs, layout):
        super().__init__(N, ring, lo, modules, diffs)
        self.layout = layout  # degree -> list of (i, Subquotient)

    def as_maps(self, n, vec: Matrix) -> dict:
        """Split a coordinate vector at degree n into matrices X^i -> Y^{i+n}."""
        out, off = {}, 0
        for i, sq, shape in self.layout[n]:
            k = sq.num.ncols
            amb = sq.num @ vec.select_rows(range(off, off + k))
            r, c = shape
            out[i] = Matrix(self.ring, [[amb[j * r + a, 0] for j in range(c)] for a in range(r)], r, c, trusted=True)
            off += k
        return out


def _hom(X: NComplex, Y: NComplex, qpow) -> HomComplex:
    if X.N != Y.N or X.ring != Y.ring:
        raise RingError("complexes must share N and ring")
    R, N = X.ring, X.N
    lo, hi = Y.lo - X.hi, Y.hi - X.lo
    layout = {}
    for n in range(lo, hi + 1):
        layout[n] = [(i, hom_sq(X.module(i), Y.module(i + n)), (Y.gens(i + n), X.gens(i)))
                     for i in range(X.lo, X.hi + 1) if Y.lo <= i + n <= Y.hi]
    mods = [_dsum(R, [sq.module for _, sq, _ in layout[n]]) for n in range(lo, hi + 1)]
    diffs = []
    for n in range(lo, hi):
        src, tgt = layout[n], layout[n + 1]
        grid = [[None] * len(src) for _ in tgt]
        sidx = {i: c for c, (i, _, _) in enumerate(src)}
        for r, (i, sqt, _) in enumerate(tgt):
            # d(f)^i = d_Y f^i - q^n f^{i+1} d_X^i
            terms = []
            if i in sidx:
                sqs = src[sidx[i]][1]
                P = kron(Matrix.identity(R, X.gens(i)), Y.diff(i + n))
                terms.append((sidx[i], P @ sqs.num))
            if i + 1 in sidx:
                sqs = src[sidx[i + 1]][1]
                P = kron(X.diff(i).T, Matrix.identity(R, Y.gens(i + n + 1)))
                c = R.neg(qpow(n))
                terms.append((sidx[i + 1], (P @ sqs.num).scale(c)))
            for c, amb in terms:
                grid[r][c] = sqt.coords(amb)
        rs = [sq.num.ncols for _, sq, _ in tgt]
        cs = [sq.num.ncols for _, sq, _ in src]
        diffs.append(Matrix.blocks(R, grid, rs, cs))
    return HomComplex(N, R, lo, mods, diffs, layout)


def q_hom(X: NComplex, Y: NComplex, ctx: QContext) -> HomComplex:
    return _hom(X, Y, ctx.qpow)


def _one(R):
    return lambda k: R.one


def module_tensor(X: NComplex, M: FPModule) -> NComplex:
    """X tensor M; the q-scalars only meet the zero differential of M."""
    return _tensor(X, disk(M, 0, 1, X.N), _one(X.ring))


def module_hom(X: NComplex, M: FPModule, side: str = "into") -> HomComplex:
    """Hom(X, M) (side='into') or Hom(M, X) (side='from') at q = 1.

    With one argument in a single degree each differential is a unit multiple
    of a q-free map, so the cohomology does not depend on the choice of q.
    """
    D = disk(M, 0, 1, X.N)
    if side == "into":
        return _hom(X, D, _one(X.ring))
    if side == "from":
        return _hom(D, X, _one(X.ring))
    raise RingError("side must be 'into' or 'from'")


def hom_map(f: ChainMap, Z: NComplex, ctx_or_pow, contravariant=False) -> ChainMap:
    """Hom(Z, f) or, when contravariant, Hom(f, Z)."""
    qpow = ctx_or_pow.qpow if isinstance(ctx_or_pow, QContext) else ctx_or_pow
    R = Z.ring
    if not contravariant:
        S, T = _hom(Z, f.source, qpow), _hom(Z, f.target, qpow)
    else:
        S, T = _hom(f.target, Z, qpow), _hom(f.source, Z, qpow)
    comps = {}
    for n in set(S.degrees()) | set(T.degrees()):
        sl, tl = S.layout.get(n, []), T.layout.get(n, [])
        grid = [[None] * len(sl) for _ in tl]
        sidx = {i: c for c, (i, _, _) in enumerate(sl)}
        for r, (i, sqt, _) in enumerate(tl):
            if i not in sidx:
                continue
            sqs = sl[sidx[i]][1]
            if not contravariant:
                P = kron(Matrix.identity(R, Z.gens(i)), f.at(i + n))
            else:
                P = kron(f.at(i).T, Matrix.identity(R, Z.gens(i + n)))
            grid[r][sidx[i]] = sqt.coords(P @ sqs.num)
        comps[n] = Matrix.blocks(R, grid, [sq.num.ncols for _, sq, _ in tl], [sq.num.ncols for _, sq, _ in sl])
    return ChainMap(S, T, comps)


def tensor_map(f: ChainMap, Z: NComplex, ctx: QContext, left=True) -> ChainMap:
    """f tensor Z (left=True) or Z tensor f."""
    R = Z.ring
    if left:
        S, T = q_tensor(f.source, Z, ctx), q_tensor(f.target, Z, ctx)
    else:
        S, T = q_tensor(Z, f.source, ctx), q_tensor(Z, f.target, ctx)
    comps = {}
    for n in set(S.degrees()) | set(T.degrees()):
        if left:
            A, B = f.source, f.target
            sc = [i for i in range(A.lo, A.hi + 1) if Z.lo <= n - i <= Z.hi]
            tc = [i for i in range(B.lo, B.hi + 1) if Z.lo <= n - i <= Z.hi]
            grid = [[kron(f.at(i), Matrix.identity(R, Z.gens(n - i))) if i == i2 else None for i in sc] for i2 in tc]
            rs = [B.gens(i) * Z.gens(n - i) for i in tc]
            cs = [A.gens(i) * Z.gens(n - i) for i in sc]
        else:
            A, B = f.source, f.target
            sc = [i for i in range(Z.lo, Z.hi + 1) if A.lo <= n - i <= A.hi]
            tc = [i for i in range(Z.lo, Z.hi + 1) if B.lo <= n - i <= B.hi]
            grid = [[kron(Matrix.identity(R, Z.gens(i)), f.at(n - i)) if i == i2 else None for i in sc] for i2 in tc]
            rs = [Z.gens(i) * B.gens(n - i) for i in tc]
            cs = [Z.gens(i) * A.gens(n - i) for i in sc]
        comps[n] = Matrix.blocks(R, grid, rs, cs)
    return ChainMap(S, T, comps)


# random inputs ------------------------------------------------------------

def random_free_complex(rng: random.Random, R, N, width=3, max_rank=2, lo=None, bound=3):
    """A random bounded N-complex of free modules, built as a sum of shifted
    disks twisted by a random change of basis in each degree."""
    lo = rng.randint(-2, 1) if lo is None else lo
    pieces = []
    for _ in range(rng.randint(1, max_rank + 1)):
        t = rng.randint(1, N)
        j = lo + rng.randint(t - 1, max(t - 1, width - 1))
        pieces.append(disk(FPModule(R, 1), j, t, N))
    X = pieces[0]
    for P in pieces[1:]:
        X = X.direct_sum(P)
    X = X.trimmed()
    # change of basis keeps d^N = 0 and scrambles the identities
    bases = {n: _random_unimodular(rng, R, X.gens(n), bound) for n in X.degrees()}
    mods = [X.module(n) for n in X.degrees()]
    diffs = []
    for n in range(X.lo, X.hi):
        Pn, Pinv = bases[n]
        Q, _ = bases[n + 1]
        diffs.append(Q @ X.diff(n) @ Pinv)
    return NComplex(N, R, X.lo, mods, diffs)


def _random_unimodular(rng, R, n, bound):
    """(P, P^{-1}) for a random product of elementary matrices."""
    P = Matrix.identity(R, n)
    Pi = Matrix.identity(R, n)
    for _ in range(2 * n):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        c = R.from_int(rng.randint(-bound, bound))
        E = [[R.one if a == b else R.zero for b in range(n)] for a in range(n)]
        Ei = [[R.one if a == b else R.zero for b in range(n)] for a in range(n)]
        E[i][j] = c
        Ei[i][j] = R.neg(c)
        P = Matrix(R, E, n, n, trusted=True) @ P
        Pi = Pi @ Matrix(R, Ei, n, n, trusted=True)
    return P, Pi


def random_chain_map(rng, X: NComplex, Y: NComplex):
    """A random combination of a basis of chain maps X -> Y."""
    basis = chain_map_basis(X, Y)
    R = X.ring
    f = ChainMap(X, Y, {})
    for b in basis:
        c = R.from_int(rng.randint(-2, 2))
        f = ChainMap(X, Y, {n: f.at(n) + b.at(n).scale(c) for n in set(f.degrees()) | set(b.degrees())})
    return f


# identity suites -----------------------------------------------------------

def _tables_equal(A: NComplex, B: NComplex):
    lo, hi = min(A.lo, B.lo), max(A.hi, B.hi)
    ta, tb = cohomology_table(A, (lo, hi)), cohomology_table(B, (lo, hi))
    for key in sorted(ta):
        if ta[key] != tb[key]:
            return False, {"slot": list(key), "left": ta[key].render(), "right": tb[key].render()}
    return True, None


def _ranks_equal(A: NComplex, B: NComplex):
    lo, hi = min(A.lo, B.lo), max(A.hi, B.hi)
    for n in range(lo, hi + 1):
        if A.gens(n) != B.gens(n):
            return False, {"degree": n, "left": A.gens(n), "right": B.gens(n)}
    return True, None


def _report(name, checks):
    failures = [dict(c[2], check=c[0]) for c in checks if not c[1]]
    return {"name": name, "pass": not failures, "checks": [c[0] for c in checks],
            "first_failure": failures[0] if failures else None}


IDENTITY_NAMES = ("hom_into_cone", "hom_out_of_cone", "cone_tensor", "shift_laws", "adjunction", "unit")


def identity_check(name: str, ctx: QContext, X: NComplex, Y: NComplex, Z: NComplex | None = None,
                   f: ChainMap | None = None) -> dict:
    """Compare both sides of a Hom/tensor identity by ranks and H-tables.

    hom_into_cone:   Hom(Z, C(f)) vs C(Hom(Z, f))
    hom_out_of_cone: Hom(C(f), Z) vs Sigma^{-1} C(Hom(f, Z))
    cone_tensor:     C(f) (x) Z vs C(f (x) Z), and Z (x) C(f) vs C(Z (x) f)
    shift_laws:      suspension commutes with Hom and tensor in each slot
    adjunction:      dim of chain maps X(x)Y -> Z equals that of Y -> Hom(X, Z)
    unit:            D^0_1(R) is a unit for tensor and Hom
    """
    checks = []

    def both(label, A, B, ranks=True):
        if ranks:
            ok, info = _ranks_equal(A, B)
            checks.append((label + ":ranks", ok, info or {}))
        ok, info = _tables_equal(A, B)
        checks.append((label + ":H", ok, info or {}))
        for side, C in (("left", A), ("right", B)):
            v = validate(C)
            checks.append((label + ":valid_" + side, v["valid"], {"violations": v["violations"][:1]}))

    if name == "hom_into_cone":
        both("hom_into_cone", q_hom(Z, cone(f), ctx), cone(hom_map(f, Z, ctx)))
    elif name == "hom_out_of_cone":
        # the right side is larger degreewise, so only cohomology is compared
        both("hom_out_of_cone", q_hom(cone(f), Z, ctx), suspend(cone(hom_map(f, Z, ctx, contravariant=True)), -1),
             ranks=False)
    elif name == "cone_tensor":
        both("cone_tensor_right", q_tensor(cone(f), Z, ctx), cone(tensor_map(f, Z, ctx, left=True)))
        both("cone_tensor_left", q_tensor(Z, cone(f), ctx), cone(tensor_map(f, Z, ctx, left=False)))
    elif name == "shift_laws":
        both("hom_sigma_target", q_hom(X, suspend(Y), ctx), suspend(q_hom(X, Y, ctx)))
        both("hom_sigma_source", q_hom(suspend(X), Y, ctx), q_hom(X, suspend(Y, -1), ctx))
        both("hom_sigma_inverse", q_hom(suspend(X), Y, ctx), suspend(q_hom(X, Y, ctx), -1))
        both("tensor_sigma_left", q_tensor(suspend(X), Y, ctx), suspend(q_tensor(X, Y, ctx)))
        both("tensor_sigma_right", q_tensor(X, suspend(Y), ctx), suspend(q_tensor(X, Y, ctx)))
    elif name == "adjunction":
        W = Z if Z is not None else Y
        lhs = len(chain_map_basis(q_tensor(X, Y, ctx), W))
        rhs = len(chain_map_basis(Y, q_hom(X, W, ctx)))
        checks.append(("adjunction:dim", lhs == rhs, {"left": lhs, "right": rhs}))
    elif name == "unit":
        U = disk(FPModule(X.ring, 1), 0, 1, X.N)
        both("tensor_unit", q_tensor(U, X, ctx), X)
        both("hom_unit", q_hom(U, X, ctx), X)
    else:
        raise RingError(f"unknown identity {name!r}; expected one of {', '.join(IDENTITY_NAMES)}")
    return _report(name, checks)


def identity_battery(ctx: QContext, seed: int, count: int, names=IDENTITY_NAMES) -> dict:
    """Run every identity on `count` seeded random inputs."""
    rng = random.Random(seed)
    R, N = ctx.ring, ctx.N
    results = []
    for k in range(count):
        X = random_free_complex(rng, R, N, width=2, max_rank=1)
        Y = random_free_complex(rng, R, N, width=2, max_rank=1)
        Z = random_free_complex(rng, R, N, width=2, max_rank=1)
        f = random_chain_map(rng, X, Y)
        for name in names:
            rep = identity_check(name, ctx, X, Y, Z, f)
            results.append({"case": k, "name": name, "pass": rep["pass"], "first_failure": rep["first_failure"]})
    failed = [r for r in results if not r["pass"]]
    return {"seed": seed, "count": count, "ring": R.name(), "N": N, "runs": len(results),
            "pass": not failed, "failures": failed[:5]}


def dN_report(X: NComplex) -> dict:
    v = validate(X)
    return {"valid": v["valid"], "violations": v["violations"]}


def table_json(X: NComplex) -> dict:
    return render_table(cohomology_table(X))
