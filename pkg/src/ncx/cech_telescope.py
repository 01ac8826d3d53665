"""Cech N-complexes, truncated telescopes and the weak proregularity probe.

The Cech complex on x is the dual of the Koszul complex with every summand
localized at the monomial that the ladder maps K(x^{s+1}) -> K(x^s) attach
to it.  Over the integers it is computed as the direct limit of its finite
stages Hom(K(x^s; R), M), with the torsion that dies after localization
divided out of each summand.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .canonical import CanonicalModule, DirectSystem, classify_colimit
from .errors import NonPrimitiveQ, RingError, Unclassified
from .exact_linalg import FPModule, Matrix, Subquotient, in_span, is_iso, is_zero_map, map_kernel
from .koszul import _elems, koszul_power_map, koszul_ring
from .ncomplex_core import ChainMap, NComplex, disk, induced_map
from .qcalc import QContext, q_tensor, tensor_map
from .rings import ZZ, Integers, LocalizedIntegers, factorize

_GENERIC = (2, 3, 5, 7, 11)
_LETTERS = "xyzuv"


# torsion along a multiplicative set ------------------------------------------

def torsion_generators(M: FPModule, m) -> Matrix:
    """Generators of the m-power torsion of M, in the generators of M."""
    R = M.ring
    m = R.canon(m) if not isinstance(m, int) else R.from_int(m)
    g = M.ngens
    if g == 0:
        return Matrix.zeros(R, 0, 0)
    prev = None
    k = 1
    while True:
        K = map_kernel(Matrix.identity(R, g).scale(R.power(m, k)), M, M)
        span = Matrix.hstack(R, [K, M.relations], nrows=g)
        if prev is not None and in_span(prev, K):
            return K
        prev = span
        k += 1
        if k > 64:
            raise RingError("torsion did not stabilize")


def kill_torsion(M: FPModule, m) -> FPModule:
    """M / Gamma_m(M): the part of M that survives inverting m."""
    K = torsion_generators(M, m)
    return FPModule(M.ring, M.ngens, Matrix.hstack(M.ring, [M.relations, K], nrows=M.ngens))


# the Cech complex as data ------------------------------------------------------

@dataclass
class MixedComplex:
    """Cech complex: summand labels (exponent vectors) and coefficient matrices.

    ``labels[n][e]`` is the exponent vector a with the summand R_{x^a};
    ``coeffs[n][f][e]`` is the sign c of the entry c * iota from summand e in
    degree n to summand f in degree n + 1 (0 when absent).
    """

    N: int
    elements: list
    labels: dict
    coeffs: dict
    ring: object = ZZ

    @property
    def degrees(self):
        return sorted(self.labels)

    def label(self, a) -> str:
        if not any(a):
            return "R"
        return "R_" + "".join(_LETTERS[i] for i, k in enumerate(a) if k)

    def entry(self, n, f, e) -> str:
        c = self.coeffs[n][f][e]
        if c == 0:
            return "0"
        a, b = self.labels[n][e], self.labels[n + 1][f]
        diff = tuple(j - i for i, j in zip(a, b))
        sym = "".join(_LETTERS[i] for i, k in enumerate(diff) if k)
        word = "iota_" + sym if sym else "1"
        return word if c == 1 else "-" + word

    def display(self, n) -> list:
        """The differential out of degree n as rows of entry strings."""
        rows = len(self.labels.get(n + 1, []))
        cols = len(self.labels[n])
        return [[self.entry(n, f, e) for e in range(cols)] for f in range(rows)]

    def monomial(self, a):
        """The ring element x^a for the actual sequence."""
        R = self.ring
        out = R.one
        for x, k in zip(self.elements, a):
            if k:
                out = R.mul(out, x)
        return out

    def localized(self) -> NComplex:
        """All summands inside R[1/x_1...x_d], where every iota becomes 1."""
        prod = 1
        for x in self.elements:
            prod *= int(x)
        if prod == 0:
            raise RingError("cannot invert zero")
        L = LocalizedIntegers([abs(prod)]) if abs(prod) != 1 else ZZ
        lo, hi = min(self.labels), max(self.labels)
        mods = []
        for n in range(lo, hi + 1):
            # the degree-0 summand R stays R; everything else is localized
            mods.append(FPModule(L, len(self.labels[n])))
        diffs = [Matrix.from_ints(L, self.coeffs[n], len(self.labels[n + 1]), len(self.labels[n]))
                 for n in range(lo, hi)]
        return NComplex(self.N, L, lo, mods, diffs)

    def to_json(self):
        return {"N": self.N, "elements": [int(x) for x in self.elements],
                "modules": {str(n): [self.label(a) for a in self.labels[n]] for n in self.degrees},
                "differentials": {str(n): self.display(n) for n in self.degrees if n + 1 in self.labels}}


def _ladder_exponents(N, d):
    """Exponent vectors of the Koszul basis, read off the ladder diagonal."""
    primes = _GENERIC[:d]
    T = koszul_power_map(ZZ, list(primes), N, 1, 0)
    out = {}
    for n in T.degrees():
        A = T.at(n)
        vecs = []
        for e in range(A.ncols):
            f = factorize(abs(int(A[e, e])))
            vecs.append(tuple(f.get(p, 0) for p in primes))
        out[n] = vecs
    return out, primes


def cech_ring(elements, N, ring=ZZ) -> MixedComplex:
    """The Cech N-complex on a sequence, degrees 0..d(N-1)."""
    xs = _elems(ring, elements)
    d = len(xs)
    if not 1 <= d <= len(_GENERIC):
        raise RingError("need between one and five elements")
    if not isinstance(ring, (Integers, LocalizedIntegers)):
        raise RingError("Cech complexes are built over the integers or a localization of them")
    exps, primes = _ladder_exponents(N, d)
    K = koszul_ring(ZZ, list(primes), N)
    labels, coeffs = {}, {}
    for n in range(0, -K.lo + 1):
        labels[n] = exps[-n]
    for n in range(0, -K.lo):
        A = K.diff(-n - 1)          # K^{-n-1} -> K^{-n}; its transpose goes n -> n+1
        rows = []
        for f in range(A.ncols):
            row = []
            for e in range(A.nrows):
                v = int(A[e, f])
                if v:
                    a, b = labels[n][e], labels[n + 1][f]
                    mono = 1
                    for p, i, j in zip(primes, a, b):
                        mono *= p ** (j - i)
                    if abs(v) != mono:
                        raise RingError("ladder labels do not match the Koszul entries")
                row.append((v > 0) - (v < 0))
            rows.append(row)
        coeffs[n] = rows
    return MixedComplex(N, xs, labels, coeffs, ring)


# finite stages ------------------------------------------------------------------

def cech_stage(elements, M: FPModule, N, s, C: MixedComplex | None = None) -> NComplex:
    """Stage s: Hom(K(x^s; R), M) with Gamma_{x^a}(M) divided out of summand R_{x^a}."""
    R = M.ring
    C = C or cech_ring(elements, N, R)
    g = M.ngens
    K = koszul_ring(R, [R.power(x, s) for x in C.elements], N)
    blocks = {}
    mods = []
    for n in C.degrees:
        parts = [kill_torsion(M, C.monomial(a)) for a in C.labels[n]]
        blocks[n] = parts
        rel = Matrix.block_diag(R, [p.relations for p in parts]) if parts else Matrix.zeros(R, 0, 0)
        mods.append(FPModule(R, g * len(parts), rel))
    diffs = []
    I = Matrix.identity(R, g)
    for n in C.degrees[:-1]:
        A = K.diff(-n - 1).T
        grid = [[None if R.is_zero(A[f, e]) else I.scale(A[f, e]) for e in range(A.ncols)]
                for f in range(A.nrows)]
        diffs.append(Matrix.blocks(R, grid, [g] * A.nrows, [g] * A.ncols))
    return NComplex(N, R, 0, mods, diffs)


def cech_transition(elements, M: FPModule, N, s, C: MixedComplex | None = None) -> ChainMap:
    """Stage s -> stage s+1: summand R_{x^a} is multiplied by x^a."""
    R = M.ring
    C = C or cech_ring(elements, N, R)
    src = cech_stage(elements, M, N, s, C)
    tgt = cech_stage(elements, M, N, s + 1, C)
    I = Matrix.identity(R, M.ngens)
    comps = {n: Matrix.block_diag(R, [I.scale(C.monomial(a)) for a in C.labels[n]]) for n in C.degrees}
    return ChainMap(src, tgt, comps)


def cech_stage_system(elements, M: FPModule, N, S=8):
    """Stages 1..S and the transitions between them."""
    C = cech_ring(elements, N, M.ring)
    stages = [cech_stage(elements, M, N, s, C) for s in range(1, S + 1)]
    maps = []
    I = Matrix.identity(M.ring, M.ngens)
    for s in range(S - 1):
        comps = {n: Matrix.block_diag(M.ring, [I.scale(C.monomial(a)) for a in C.labels[n]])
                 for n in C.degrees}
        maps.append(ChainMap(stages[s], stages[s + 1], comps))
    return stages, maps


def colimit_slot(stages, maps, j, t) -> CanonicalModule:
    """Classify the direct limit of H^j_t along a system of complexes."""
    mods = [X.cohomology_sq(j, t).module for X in stages]
    trans = [induced_map(f, j, t) for f in maps]
    return classify_colimit(DirectSystem(mods, trans))


def cech_cohomology(elements, M: FPModule, j, t, N, S=8) -> CanonicalModule:
    """H^j_t of the Cech complex tensored with M."""
    if len(elements) > 2:
        raise Unclassified("Cech classification is supported for at most two elements", {"d": len(elements)})
    stages, maps = cech_stage_system(elements, M, N, S)
    return colimit_slot(stages, maps, j, t)


def cech_table(elements, M: FPModule, N, S=8) -> dict:
    stages, maps = cech_stage_system(elements, M, N, S)
    return {(j, t): colimit_slot(stages, maps, j, t)
            for j in stages[0].degrees() for t in range(1, N)}


def cech_closed_form_d1(x: int, M: FPModule, N) -> dict:
    """Single element: Gamma_x(M) on degree 0, M_x / M on the slots (n, N-n)."""
    R = M.ring
    x = int(x)
    out = {}
    g = M.ngens
    if x == 0:
        gamma = M.classify()
        quot = CanonicalModule.zero()
    else:
        K = torsion_generators(M, x)
        gamma = Subquotient(R, g, Matrix.hstack(R, [K, M.relations], nrows=g), M.relations).classify()
        r = M.classify().free_rank
        primes = factorize(abs(x)) if abs(x) > 1 else {}
        quot = CanonicalModule.make(pruefer={p: r for p in primes})
    for t in range(1, N):
        out[(0, t)] = CanonicalModule.of(gamma)
    for n in range(1, N):
        for t in range(1, N):
            out[(n, t)] = quot if t == N - n else CanonicalModule.zero()
    return out


# telescopes ---------------------------------------------------------------------

def telescope_v(x, s, ring=ZZ) -> Matrix:
    """v on the basis e_0..e_s: e_0 -> e_0 and e_i -> e_{i-1} - x e_i."""
    R = ring
    x = R.from_int(x) if isinstance(x, int) else x
    rows = [[R.zero] * (s + 1) for _ in range(s + 1)]
    rows[0][0] = R.one
    for i in range(1, s + 1):
        rows[i - 1][i] = R.one
        rows[i][i] = R.neg(x)
    return Matrix(R, rows, s + 1, s + 1)


def telescope(x, N, s, ring=ZZ) -> NComplex:
    """Truncated telescope on one element: rank s+1 in degrees 0..N-1."""
    if s < 1:
        raise RingError("truncation stage must be at least 1")
    R = ring
    I = Matrix.identity(R, s + 1)
    return NComplex.free(N, R, 0, [telescope_v(x, s, R)] + [I] * (N - 2))


def telescope_seq(elements, N, s, ring=ZZ, ctx: QContext | None = None) -> NComplex:
    """Tensor of single-element telescopes; two or more factors need a root of unity."""
    xs = list(elements)
    T = telescope(xs[0], N, s, ring)
    if len(xs) == 1:
        return T
    if ctx is None:
        raise NonPrimitiveQ("tensoring telescopes needs a primitive N-th root of unity")
    for x in xs[1:]:
        T = q_tensor(T, telescope(x, N, s, ring), ctx)
    return T


def telescope_inclusion(x, N, s, ring=ZZ) -> ChainMap:
    """Tel_s -> Tel_{s+1}, e_i -> e_i."""
    R = ring
    J = Matrix(R, [[R.one if i == j else R.zero for j in range(s + 1)] for i in range(s + 2)], s + 2, s + 1)
    return ChainMap(telescope(x, N, s, R), telescope(x, N, s + 1, R), {n: J for n in range(N)})


def telescope_to_cech(x, N, s, ring=ZZ) -> ChainMap:
    """w at stage s: e_0 -> 1 in degree 0 and e_i -> 1/x^i, read as x^{s-i}, above."""
    R = ring
    xr = R.from_int(x) if isinstance(x, int) else x
    tgt = cech_stage([x], FPModule(R, 1), N, s)
    src = telescope(x, N, s, R)
    w0 = Matrix(R, [[R.one] + [R.zero] * s], 1, s + 1)
    w1 = Matrix(R, [[R.power(xr, s - i) for i in range(s + 1)]], 1, s + 1)
    return ChainMap(src, tgt, {0: w0, **{n: w1 for n in range(1, N)}})


@dataclass
class ComparisonReport:
    x: int
    N: int
    stages: list = field(default_factory=list)
    stable_from: int | None = None

    @property
    def verdict(self):
        return "quasi-isomorphism" if self.stable_from is not None else "not stable"

    def to_json(self):
        return {"x": self.x, "N": self.N, "stages": self.stages, "stable_from": self.stable_from,
                "verdict": self.verdict}


def telescope_comparison(x, N, S=8, ring=ZZ) -> ComparisonReport:
    """Check w stage by stage; stable once every later stage is a quasi-isomorphism."""
    rep = ComparisonReport(int(x), N)
    good = []
    for s in range(1, S + 1):
        w = telescope_to_cech(x, N, s, ring)
        bad = w.check()
        fails = []
        if not bad:
            for n in range(N):
                for t in range(1, N):
                    F = induced_map(w, n, t)
                    if not is_iso(F, w.source.cohomology_sq(n, t).module, w.target.cohomology_sq(n, t).module):
                        fails.append([n, t])
        ok = not bad and not fails
        rep.stages.append({"s": s, "chain_map": not bad, "iso_failures": fails, "quasi_iso": ok})
        good.append(ok)
    for s in range(S, 0, -1):
        if not good[s - 1]:
            break
        rep.stable_from = s
    return rep


def telescope_colimit_table(x, N, S=8, ring=ZZ) -> dict:
    """Direct limit of the H-tables of Tel_s along the inclusions."""
    stages = [telescope(x, N, s, ring) for s in range(1, S + 1)]
    maps = [telescope_inclusion(x, N, s, ring) for s in range(1, S)]
    return {(j, t): colimit_slot(stages, maps, j, t) for j in range(N) for t in range(1, N)}


def telescope_invariance(x, y, N, S=8) -> dict:
    """Telescopes on elements with the same radical have the same limiting H-table."""
    a = telescope_colimit_table(x, N, S)
    b = telescope_colimit_table(y, N, S)
    rows = [{"degree": j, "t": t, "left": a[(j, t)].render(), "right": b[(j, t)].render(),
             "agree": a[(j, t)] == b[(j, t)]} for (j, t) in sorted(a)]
    return {"x": int(x), "y": int(y), "N": N, "stages": S, "rows": rows, "pass": all(r["agree"] for r in rows)}


# products of Cech complexes -------------------------------------------------------

def colimit_map_is_iso(src_stages, src_maps, tgt_stages, tgt_maps, f_stages, j, t) -> bool:
    """A map of direct systems is an isomorphism on the limit, checked in a window.

    For each stage in the first half of the window: whatever f_s kills must
    die under later source transitions, and every target class must become
    hit by f at some later stage.
    """
    S = len(src_stages)
    hs = [X.cohomology_sq(j, t).module for X in src_stages]
    ht = [X.cohomology_sq(j, t).module for X in tgt_stages]
    fs = [induced_map(f, j, t) for f in f_stages]
    ts = [induced_map(g, j, t) for g in src_maps]
    tt = [induced_map(g, j, t) for g in tgt_maps]
    R = src_stages[0].ring
    for s in range((S + 1) // 2):
        ker = map_kernel(fs[s], hs[s], ht[s])
        A = ker
        dead = ker.ncols == 0 or hs[s].contains(ker)
        B = Matrix.identity(R, ht[s].ngens)
        hit = ht[s].ngens == 0
        for k in range(s, S - 1):
            A = ts[k] @ A
            B = tt[k] @ B
            dead = dead or is_zero_map(A, hs[s], hs[k + 1])
            if not hit:
                tgt = ht[k + 1]
                span = Matrix.hstack(R, [fs[k + 1], tgt.relations], nrows=tgt.ngens)
                hit = in_span(span, B)
        if not (dead and hit):
            return False
    return True


def _augmentation(X: NComplex) -> ChainMap:
    """Cech stage -> R: the identity on the degree-0 summand R."""
    D = disk(FPModule(X.ring, 1), 0, 1, X.N)
    return ChainMap(X, D, {0: Matrix.identity(X.ring, 1)})


def cech_square_check(x, N, ctx: QContext, S=8) -> dict:
    """1 tensor e from C tensor C to C tensor R induces isomorphisms on the limit."""
    R = ctx.ring
    M = FPModule(R, 1)
    xr = R.from_int(x) if isinstance(x, int) else x
    stages, maps = [], []
    src_st, tgt_st, fs = [], [], []
    C = _cech_ring_generic(xr, N, R)
    for s in range(1, S + 1):
        stages.append(cech_stage([xr], M, N, s, C))
    for s in range(S - 1):
        I = Matrix.identity(R, 1)
        comps = {n: Matrix.block_diag(R, [I.scale(C.monomial(a)) for a in C.labels[n]]) for n in C.degrees}
        maps.append(ChainMap(stages[s], stages[s + 1], comps))
    for X in stages:
        f = tensor_map(_augmentation(X), X, ctx, left=False)
        fs.append(f)
        src_st.append(f.source)
        tgt_st.append(f.target)
    src_maps, tgt_maps = [], []
    for s in range(S - 1):
        a = tensor_map(maps[s], stages[s], ctx, left=True)          # tau (x) 1
        b = tensor_map(maps[s], stages[s + 1], ctx, left=False)     # 1 (x) tau
        src_maps.append(ChainMap(src_st[s], src_st[s + 1],
                                 {n: b.at(n) @ a.at(n) for n in src_st[s].degrees()}))
        D = fs[s + 1].target
        e = tensor_map(maps[s], _augmentation(stages[s]).target, ctx, left=True)
        tgt_maps.append(ChainMap(tgt_st[s], D, {n: e.at(n) for n in tgt_st[s].degrees()}))
    bad_chain = [s for s, f in enumerate(src_maps + tgt_maps + fs) if f.check()]
    rows = []
    for j in src_st[0].degrees():
        for t in range(1, N):
            ok = colimit_map_is_iso(src_st, src_maps, tgt_st, tgt_maps, fs, j, t)
            rows.append({"degree": j, "t": t, "iso": ok})
    return {"x": R.fmt(xr), "N": N, "ring": R.name(), "stages": S, "chain_maps": not bad_chain,
            "rows": rows, "pass": not bad_chain and all(r["iso"] for r in rows)}


def _cech_ring_generic(x, N, R) -> MixedComplex:
    """Single-element Cech data over any ring (labels only)."""
    labels = {0: [(0,)], **{n: [(1,)] for n in range(1, N)}}
    coeffs = {n: [[1]] for n in range(N - 1)}
    return MixedComplex(N, [x], labels, coeffs, R)


# weak proregularity ------------------------------------------------------------------

@dataclass
class ProReport:
    elements: list
    N: int
    S: int
    slots: dict = field(default_factory=dict)
    verdict: str = "pro-zero"
    witness: dict | None = None

    def to_json(self):
        return {"elements": self.elements, "N": self.N, "stages": self.S, "verdict": self.verdict,
                "witness": self.witness,
                "slots": {f"H^{i}_{t}": v for (i, t), v in sorted(self.slots.items())}}


def proregular_probe(elements, N, S=4, ring=ZZ) -> ProReport:
    """Look for pro-zero behaviour of H^i_t(K(x^s)), i < 0, along the ladder.

    Stages 1..S-2 are judged: killed by a later stage, stuck at a nonzero
    image (counterexample) or still shrinking (inconclusive).
    """
    xs = _elems(ring, elements)
    Ks = [koszul_ring(ring, [ring.power(x, s) for x in xs], N) for s in range(1, S + 1)]
    ladders = [koszul_power_map(ring, xs, N, s + 1, s) for s in range(1, S)]
    rep = ProReport([ring.fmt(x) for x in xs], N, S)
    for L in ladders:
        if L.check():
            raise RingError("ladder map is not a chain map")
    counter, open_ = None, False
    for i in range(Ks[0].lo, 0):
        for t in range(1, N):
            mods = [K.cohomology_sq(i, t).module for K in Ks]
            trans = [induced_map(L, i, t) for L in ladders]   # H(s+1) -> H(s)
            entries = []
            for s in range(S):
                # smallest later stage whose composite into stage s is zero
                killer = 0 if mods[s].classify().is_zero() else None
                A = Matrix.identity(ring, mods[s].ngens)
                images = []
                for k in range(s + 1, S):
                    A = A @ trans[k - 1]
                    images.append(A)
                    if killer is None and is_zero_map(A, mods[k], mods[s]):
                        killer = k + 1
                entries.append({"s": s + 1, "module": mods[s].classify().render(), "killed_at": killer})
                # a stage is judged only when at least two later stages map into it
                if killer is None and len(images) >= 2:
                    if _same_image(images[-1], images[-2], mods[s]):
                        if counter is None:
                            counter = {"degree": i, "t": t, "stage": s + 1}
                    else:
                        open_ = True
            rep.slots[(i, t)] = entries
    if counter is not None:
        rep.verdict = "counterexample"
        rep.witness = counter
    elif open_ or S < 3:
        rep.verdict = "inconclusive"
    return rep


def _same_image(A, B, tgt: FPModule) -> bool:
    R = tgt.ring
    a = Matrix.hstack(R, [A, tgt.relations], nrows=tgt.ngens)
    b = Matrix.hstack(R, [B, tgt.relations], nrows=tgt.ngens)
    return in_span(a, B) and in_span(b, A)
