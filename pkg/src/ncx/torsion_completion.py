"""Torsion, local cohomology, adic and derived completion over the integers.

Local cohomology is the direct limit of H(Hom(K(x^s; R), M)) along the
ladder maps; derived completion is the inverse limit of H(K(x^s; R) (x) M).
Both limits are recognised by the classifiers in ``canonical``.  Objects in
the derived category that arise from the catalogue are kept as formal sums
of shifted one-point complexes Sigma^k D^0_1(C).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .canonical import CanonicalModule, InverseSystem, classify_limit, fg_from_primary, primary_exponents
from .cech_telescope import (cech_table, colimit_slot, telescope, telescope_inclusion, torsion_generators)
from .errors import OutOfCatalogue, RingError, Unclassified
from .exact_linalg import CanonicalFG, FPModule, Matrix, Subquotient, kernel_basis, kron
from .koszul import _elems, koszul_power_map, koszul_ring, resolve_module
from .ncomplex_core import ChainMap, NComplex, cohomology, disk, induced_map
from .qcalc import hom_map, module_hom, module_tensor
from .rings import ZZ, factorize

S_DEFAULT = 8


def _one(R):
    return lambda k: R.one


def _primes_of(elements):
    """Primes of the radical of the ideal; None for the unit ideal."""
    g = 0
    for x in elements:
        g = math.gcd(g, int(x))
    if g == 1:
        return None
    if g == 0:
        return "zero"
    return sorted(factorize(g))


# torsion ----------------------------------------------------------------------

def torsion_submodule(M: FPModule, elements):
    """Gamma_a(M) and its inclusion, as generators inside M."""
    R = M.ring
    g = M.ngens
    gens = None
    for x in _elems(R, elements):
        K = torsion_generators(M, x)
        gens = K if gens is None else _intersect(gens, K, M)
    num = Matrix.hstack(R, [gens, M.relations], nrows=g)
    return Subquotient(R, g, num, M.relations).classify(), gens


def _intersect(A: Matrix, B: Matrix, M: FPModule) -> Matrix:
    """Generators of (span A + rel) meet (span B + rel)."""
    R = M.ring
    g = M.ngens
    big = Matrix.hstack(R, [A, M.relations, B.scale(R.neg(R.one)), M.relations], nrows=g)
    K = kernel_basis(big)
    if K.ncols == 0:
        return Matrix.zeros(R, g, 0)
    coeff = K.select_rows(range(A.ncols + M.relations.ncols))
    return Matrix.hstack(R, [A, M.relations], nrows=g) @ coeff


# local cohomology --------------------------------------------------------------

def koszul_hom_system(elements, M: FPModule, N, S=S_DEFAULT):
    """Hom(K(x^s; R), M) for s = 1..S with the maps induced by the ladder."""
    R = M.ring
    xs = _elems(R, elements)
    D = disk(M, 0, 1, N)
    stages = [module_hom(koszul_ring(R, [R.power(x, s) for x in xs], N), M) for s in range(1, S + 1)]
    maps = []
    for s in range(1, S):
        L = koszul_power_map(R, xs, N, s + 1, s)
        f = hom_map(L, D, _one(R), contravariant=True)
        maps.append(ChainMap(stages[s - 1], stages[s], {n: f.at(n) for n in f.degrees()}))
    return stages, maps


def local_cohomology(elements, M: FPModule, i, t, N, S=S_DEFAULT) -> CanonicalModule:
    """H^i_t of R Gamma_a(M), read off the direct limit of Koszul Homs."""
    stages, maps = koszul_hom_system(elements, M, N, S)
    return colimit_slot(stages, maps, i, t)


def local_table(elements, M: FPModule, N, S=S_DEFAULT) -> dict:
    stages, maps = koszul_hom_system(elements, M, N, S)
    return {(i, t): colimit_slot(stages, maps, i, t) for i in stages[0].degrees() for t in range(1, N)}


def route_agreement(elements, M: FPModule, N, S=S_DEFAULT) -> dict:
    """Koszul-colimit table against the Cech table, slot by slot."""
    a = local_table(elements, M, N, S)
    b = cech_table(elements, M, N, S)
    keys = sorted(set(a) | set(b))
    zero = CanonicalModule.zero()
    rows = [{"degree": i, "t": t, "koszul": a.get((i, t), zero).render(), "cech": b.get((i, t), zero).render(),
             "agree": a.get((i, t), zero) == b.get((i, t), zero)} for i, t in keys]
    return {"rows": rows, "agree": all(r["agree"] for r in rows)}


# the divisible catalogue --------------------------------------------------------

QZ = "Q/Z"
Q = "Q"


def gamma_divisible(D, p) -> CanonicalModule:
    """Gamma_(p) on rationals, rationals mod integers and Pruefer groups."""
    if D == QZ:
        return CanonicalModule.make(pruefer={p: 1})
    if D == Q:
        return CanonicalModule.zero()
    if not isinstance(D, CanonicalModule) or not D.fg.is_zero() or D.adic or D.opaque is not None:
        raise OutOfCatalogue(f"{D} is not a divisible group from the catalogue")
    return CanonicalModule.make(pruefer={q: k for q, k in D.pruefer if q == p})


@dataclass(frozen=True)
class RankOneQuotient:
    """The group a Z[1/p] / b Z inside Q/bZ; a = 0 means the zero group."""

    a: int
    b: int
    p: int

    def prime_free(self, n):
        n = abs(n)
        while n and n % self.p == 0:
            n //= self.p
        return n

    def classify(self) -> CanonicalModule:
        if self.a == 0:
            return CanonicalModule.zero()
        a, b = self.prime_free(self.a), self.prime_free(self.b)
        if b % a:
            raise RingError("b Z must lie in a Z[1/p]")
        return CanonicalModule.make(fg_from_primary(0, {q: [e] for q, e in factorize(b // a).items()}),
                                    {self.p: 1})


def _quotient_map(src: RankOneQuotient, tgt: RankOneQuotient):
    """Kernel and cokernel of the map induced by the identity of Q."""
    p = src.p
    if src.a == 0:
        return CanonicalModule.zero(), tgt.classify()
    a1, a2 = src.prime_free(src.a), tgt.prime_free(tgt.a)
    b1, b2 = src.b, tgt.b
    # kernel: (a1 Z[1/p] meet b2 Z) / b1 Z
    low = a1 * b2 // math.gcd(a1, b2)
    ker = abs(b1) // low if b1 else 0
    kern = CanonicalModule.of(CanonicalFG(ZZ, 0, (ker,) if ker > 1 else ())) if ker else CanonicalModule.zero()
    # cokernel: a2 Z[1/p] / (a1 Z[1/p] + b2 Z), a finite group of order prime to p
    m = a1 // a2
    u = src.prime_free(b2 // a2) if b2 else 0
    c = math.gcd(m, u)
    coker = CanonicalModule.of(CanonicalFG(ZZ, 0, (c,) if c > 1 else ()))
    return kern, coker


def replay_injective(d: int, p: int, N: int = 3) -> dict:
    """Gamma_(p) applied to the resolution Q/dZ -> Q/Z = ... = Q/Z of Z/d.

    The complex is A -pi-> B =1= ... =1= B in degrees 0..N-1, so H^0_t is
    ker pi for every t, H^n_{N-n} is coker pi, and every other slot is zero.
    """
    if d == 0:
        src = RankOneQuotient(0, 0, p)                  # Gamma_(p)(Q) = 0
    else:
        src = RankOneQuotient(d, d, p)                  # d Z[1/p] / dZ
    tgt = RankOneQuotient(1, 1, p)                      # Z[1/p] / Z
    ker, coker = _quotient_map(src, tgt)
    out = {}
    for n in range(N):
        for t in range(1, N):
            if n == 0:
                out[(n, t)] = ker
            elif n + t == N:
                out[(n, t)] = coker
            else:
                out[(n, t)] = CanonicalModule.zero()
    return out


# completion ---------------------------------------------------------------------

def adic_completion(M: FPModule, elements, S=S_DEFAULT) -> CanonicalModule:
    """lim M / a^s M with a^s replaced by the powers x^s."""
    R = M.ring
    xs = _elems(R, elements)
    g = M.ngens
    stages = []
    for s in range(1, S + 1):
        rel = Matrix.hstack(R, [M.relations] + [Matrix.identity(R, g).scale(R.power(x, s)) for x in xs], nrows=g)
        stages.append(FPModule(R, g, rel))
    maps = [Matrix.identity(R, g) for _ in range(S - 1)]
    return classify_limit(InverseSystem(stages, maps))


def koszul_tensor_system(elements, M: FPModule, N, S=S_DEFAULT):
    R = M.ring
    xs = _elems(R, elements)
    stages = [module_tensor(koszul_ring(R, [R.power(x, s) for x in xs], N), M) for s in range(1, S + 1)]
    maps = []
    I = Matrix.identity(R, M.ngens)
    for s in range(1, S):
        L = koszul_power_map(R, xs, N, s + 1, s)
        maps.append(ChainMap(stages[s], stages[s - 1], {n: kron(L.at(n), I) for n in L.degrees()}))
    return stages, maps


def limit_slot(stages, maps, i, t) -> CanonicalModule:
    mods = [X.cohomology_sq(i, t).module for X in stages]
    trans = [induced_map(f, i, t) for f in maps]
    return classify_limit(InverseSystem(mods, trans))


def derived_completion(elements, M: FPModule, i, t, N, S=S_DEFAULT) -> CanonicalModule:
    """H^i_t of L Lambda_a(M) as the inverse limit of H(K(x^s; R) (x) M)."""
    stages, maps = koszul_tensor_system(elements, M, N, S)
    return limit_slot(stages, maps, i, t)


def completion_table(elements, M: FPModule, N, S=S_DEFAULT) -> dict:
    stages, maps = koszul_tensor_system(elements, M, N, S)
    return {(i, t): limit_slot(stages, maps, i, t) for i in stages[0].degrees() for t in range(1, N)}


def telescope_hom_system(x, M: FPModule, N, S=S_DEFAULT):
    """Hom(Tel_s, M) with the restrictions along Tel_s -> Tel_{s+1}."""
    R = M.ring
    D = disk(M, 0, 1, N)
    stages = [module_hom(telescope(x, N, s, R), M) for s in range(1, S + 1)]
    maps = []
    for s in range(1, S):
        f = hom_map(telescope_inclusion(x, N, s, R), D, _one(R), contravariant=True)
        maps.append(ChainMap(stages[s], stages[s - 1], {n: f.at(n) for n in f.degrees()}))
    return stages, maps


def telescope_completion_table(x, M: FPModule, N, S=S_DEFAULT) -> dict:
    stages, maps = telescope_hom_system(x, M, N, S)
    return {(i, t): limit_slot(stages, maps, i, t) for i in stages[0].degrees() for t in range(1, N)}


# formal sums of shifted one-point complexes ------------------------------------------

def disk_slots(k: int, N: int):
    """Slots where Sigma^k D^0_1(C) has cohomology C."""
    if k == 0:
        return [(0, t) for t in range(1, N)]
    if k == -1:
        return [(n, N - n) for n in range(1, N)]
    if k == 1:
        return [(-n, n) for n in range(1, N)]
    raise OutOfCatalogue(f"shift {k} is outside the catalogue")


def recognize(table: dict, N: int) -> dict:
    """Read an H-table as a sum of Sigma^k D^0_1(C_k), k in {-1, 0, 1}."""
    out = {}
    used = set()
    for k in (0, -1, 1):
        slots = disk_slots(k, N)
        vals = [table.get(s, CanonicalModule.zero()) for s in slots]
        if len({v.render() for v in vals}) != 1 or any(v.opaque is not None for v in vals):
            raise Unclassified("table is not a sum of shifted modules", {"slots": [list(s) for s in slots]})
        if not vals[0].is_zero():
            out[k] = vals[0]
        used.update(slots)
    stray = [list(s) for s, v in table.items() if s not in used and not v.is_zero()]
    if stray:
        raise Unclassified("cohomology outside the recognised slots", {"slots": stray})
    return out


def expand(obj: dict, N: int) -> dict:
    table = {}
    for k, C in obj.items():
        for s in disk_slots(k, N):
            table[s] = table.get(s, CanonicalModule.zero()).direct_sum(C)
    return table


def _summands(C: CanonicalModule):
    """Split into catalogue pieces: ('Z', r), ('tor', p, e), ('free-tor', d), ('pruefer', p, k), ..."""
    out = []
    if C.fg.free_rank:
        out.append(("Z", C.fg.free_rank))
    for p, exps in primary_exponents(C.fg).items():
        for e in exps:
            out.append(("tor", p, e))
    for p, k in C.pruefer:
        out.append(("pruefer", p, k))
    for p, m in C.adic:
        out.append(("adic", p, m))
    if C.divisible_rank:
        out.append(("Q", C.divisible_rank))
    return out


def _piece(kind, *args):
    if kind == "tor":
        p, e = args
        return CanonicalModule.of(fg_from_primary(0, {p: [e]}))
    if kind == "pruefer":
        p, k = args
        return CanonicalModule.make(pruefer={p: k})
    if kind == "adic":
        p, m = args
        return CanonicalModule.make(adic={p: m})
    if kind == "Z":
        return CanonicalModule.of(CanonicalFG(ZZ, args[0], ()))
    raise OutOfCatalogue(kind)


def _add(obj, k, C):
    if C.is_zero():
        return
    obj[k] = obj[k].direct_sum(C) if k in obj else C


def rgamma_module(C: CanonicalModule, primes) -> dict:
    """R Gamma_a of a catalogue module as {shift: module}."""
    out = {}
    for piece in _summands(C):
        kind = piece[0]
        if kind == "Z":
            _add(out, -1, CanonicalModule.make(pruefer={p: piece[1] for p in primes}))
        elif kind == "tor":
            _add(out, 0, _piece(*piece) if piece[1] in primes else CanonicalModule.zero())
        elif kind == "pruefer":
            _add(out, 0, _piece(*piece) if piece[1] in primes else CanonicalModule.zero())
        elif kind == "adic":
            p, m = piece[1], piece[2]
            if p in primes:
                _add(out, -1, CanonicalModule.make(pruefer={p: m}))
            elif primes:
                raise OutOfCatalogue("completion at a different prime")
        elif kind == "Q":
            pass
    return out


def llambda_module(C: CanonicalModule, primes) -> dict:
    """L Lambda_a of a catalogue module as {shift: module}."""
    out = {}
    for piece in _summands(C):
        kind = piece[0]
        if kind == "Z":
            _add(out, 0, CanonicalModule.make(adic={p: piece[1] for p in primes}))
        elif kind == "tor":
            _add(out, 0, _piece(*piece) if piece[1] in primes else CanonicalModule.zero())
        elif kind == "pruefer":
            p, k = piece[1], piece[2]
            if p in primes:
                _add(out, 1, CanonicalModule.make(adic={p: k}))
        elif kind == "adic":
            p, m = piece[1], piece[2]
            if p in primes:
                _add(out, 0, _piece(*piece))
            elif primes:
                raise OutOfCatalogue("completion at a different prime")
        elif kind == "Q":
            pass
    return out


def apply_functor(obj: dict, functor, primes) -> dict:
    out = {}
    for k, C in sorted(obj.items()):
        for k2, C2 in functor(C, primes).items():
            _add(out, k + k2, C2)
    return out


def _same(a: dict, b: dict) -> bool:
    return set(a) == set(b) and all(a[k] == b[k] for k in a)


def _render_obj(obj):
    return {str(k): C.render() for k, C in sorted(obj.items())}


def mgm_report(elements, M: FPModule, N=3, S=S_DEFAULT) -> dict:
    """Idempotence and the two MGM comparisons, at the level of classified tables."""
    primes = _primes_of(elements)
    if primes is None or primes == "zero":
        raise OutOfCatalogue("the ideal must be proper and nonzero")
    rg = recognize(local_table(elements, M, N, S), N)
    ll = recognize(completion_table(elements, M, N, S), N)
    checks = {
        "rgamma_idempotent": (apply_functor(rg, rgamma_module, primes), rg),
        "llambda_idempotent": (apply_functor(ll, llambda_module, primes), ll),
        "llambda_of_rgamma": (apply_functor(rg, llambda_module, primes), ll),
        "rgamma_of_llambda": (apply_functor(ll, rgamma_module, primes), rg),
    }
    rows = {}
    for name, (left, right) in checks.items():
        lt, rt = expand(left, N), expand(right, N)
        keys = sorted(set(lt) | set(rt))
        zero = CanonicalModule.zero()
        bad = [list(k) for k in keys if lt.get(k, zero) != rt.get(k, zero)]
        rows[name] = {"left": _render_obj(left), "right": _render_obj(right), "mismatches": bad,
                      "pass": _same(left, right) and not bad}
    return {"elements": [int(x) for x in elements], "N": N, "stages": S,
            "rgamma": _render_obj(rg), "llambda": _render_obj(ll),
            "checks": rows, "pass": all(r["pass"] for r in rows.values())}


# the six numbers ------------------------------------------------------------------------

INF = float("inf")


def _inf(degs):
    return min(degs) if degs else INF


def _sup(degs):
    return max(degs) if degs else -INF


def show(v):
    return "none" if v in (INF, -INF) else int(v)


def _nonzero_degrees(X: NComplex, t):
    return [n for n in X.degrees() if not cohomology(X, n, t).is_zero()]


def quotient_ring(elements, R=ZZ) -> FPModule:
    xs = _elems(R, elements)
    return FPModule(R, 1, Matrix(R, [list(xs)], 1, len(xs)))


def invariants(elements, M: FPModule, t, N, S=S_DEFAULT) -> dict:
    """Depth-like infima and completion-like suprema, three ways each."""
    R = M.ring
    primes = _primes_of(elements)
    if primes is None:
        none = {"inf": [INF] * 3, "sup": [-INF] * 3}
        return _pack(elements, t, N, none, {})
    P, _ = resolve_module(quotient_ring(elements, R), N)
    K = koszul_ring(R, elements, N)
    rhom = _hom_free(P, M)
    inf_rhom = _inf(_nonzero_degrees(rhom, t))
    hom_k = module_hom(K, M)
    inf_kos = _inf(_nonzero_degrees(hom_k, t))
    stages, maps = koszul_hom_system(elements, M, N, S)
    loc = [i for i in stages[0].degrees() if not colimit_slot(stages, maps, i, t).is_zero()]
    inf_loc = _inf(loc)
    tens = module_tensor(P, M)
    sup_tens = _sup(_nonzero_degrees(tens, t))
    ten_k = module_tensor(K, M)
    sup_kos = _sup(_nonzero_degrees(ten_k, t))
    cst, cmaps = koszul_tensor_system(elements, M, N, S)
    comp = [i for i in cst[0].degrees() if not limit_slot(cst, cmaps, i, t).is_zero()]
    sup_comp = _sup(comp)
    vals = {"inf": [inf_rhom, inf_loc, inf_kos], "sup": [sup_tens, sup_comp, sup_kos]}
    witness = {"local": loc, "completion": comp}
    return _pack(elements, t, N, vals, witness)


def _hom_free(P: NComplex, M: FPModule) -> NComplex:
    return module_hom(P, M)


def _pack(elements, t, N, vals, witness):
    inf_equal = len(set(vals["inf"])) == 1
    sup_equal = len(set(vals["sup"])) == 1
    return {"elements": [int(x) for x in elements], "t": t, "N": N,
            "inf": {"rhom": show(vals["inf"][0]), "local": show(vals["inf"][1]), "koszul": show(vals["inf"][2])},
            "sup": {"tensor": show(vals["sup"][0]), "completion": show(vals["sup"][1]),
                    "koszul": show(vals["sup"][2])},
            "witness_degrees": witness,
            "inf_equal": inf_equal, "sup_equal": sup_equal, "pass": inf_equal and sup_equal}


# smaller checks ----------------------------------------------------------------------------

def hom_torsion_check(elements, M: FPModule, N) -> dict:
    """Every generator of a kills every H^j_t(Hom(K(x; R), M))."""
    R = M.ring
    X = module_hom(koszul_ring(R, elements, N), M)
    bad = []
    for j in X.degrees():
        for t in range(1, N):
            sq = X.cohomology_sq(j, t)
            for x in _elems(R, elements):
                if sq.module.ngens and not sq.module.contains(Matrix.identity(R, sq.module.ngens).scale(x)):
                    bad.append({"degree": j, "t": t, "element": R.fmt(x)})
    return {"pass": not bad, "failures": bad}


def power_vanishing_check(elements, M: FPModule, N, smax=4) -> dict:
    """A vanishing slot of Hom(K(x; R), M) stays zero for the powers x^s, s <= smax."""
    R = M.ring
    xs = _elems(R, elements)
    base = module_hom(koszul_ring(R, xs, N), M)
    powers = [module_hom(koszul_ring(R, [R.power(x, s) for x in xs], N), M) for s in range(2, smax + 1)]
    bad = []
    for j in base.degrees():
        for t in range(1, N):
            if cohomology(base, j, t).is_zero():
                for s, X in enumerate(powers, start=2):
                    if not cohomology(X, j, t).is_zero():
                        bad.append({"degree": j, "t": t, "power": s})
    return {"pass": not bad, "failures": bad}
