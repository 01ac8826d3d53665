"""Koszul N-complexes built as iterated mapping cones."""
from __future__ import annotations

import itertools

from .errors import NotPID, RingError
from .exact_linalg import FPModule, Matrix, Subquotient, image_basis, kernel_basis
from .ncomplex_core import (ChainMap, NComplex, chain_map_basis, cohomology, cohomology_table, cone,
                            cone_map, disk, identity_map, is_quasi_iso, null_homotopy, scalar_map,
                            suspend_power)
from .qcalc import QContext, default_context, module_hom, module_tensor, q_tensor
from .rings import CyclotomicIntegers, Integers, LocalizedIntegers, PrimeField


def _elems(ring, elements):
    return [ring.from_int(x) if isinstance(x, int) else ring.canon(x) for x in elements]


def powers(ring, elements, s):
    return [ring.power(x, s) for x in _elems(ring, elements)]


def koszul_ring(ring, elements, N) -> NComplex:
    """K(x_1..x_d; R): the cone of x_d on K(x_1..x_{d-1}; R), starting from R in degree 0."""
    xs = _elems(ring, elements)
    if not xs:
        raise RingError("need at least one element")
    K = disk(FPModule(ring, 1), 0, 1, N)
    for x in xs:
        K = cone(scalar_map(K, x))
    return K


def koszul_power_map(ring, elements, N, s_from, s_to) -> ChainMap:
    """Ladder map K(x^{s_from}) -> K(x^{s_to}) for s_from >= s_to.

    Each cone step uses the previous ladder map on the target block and
    x_d^{s_from - s_to} times it on the suspended block.
    """
    if s_from < s_to:
        raise RingError("ladder maps go from higher to lower powers")
    xs = _elems(ring, elements)
    R = ring
    base = disk(FPModule(R, 1), 0, 1, N)
    src, tgt = base, base
    T = identity_map(base)
    for x in xs:
        f_src = scalar_map(src, R.power(x, s_from))
        f_tgt = scalar_map(tgt, R.power(x, s_to))
        alpha = ChainMap(src, tgt, {n: T.at(n).scale(R.power(x, s_from - s_to)) for n in T.degrees()})
        T = cone_map(f_src, f_tgt, T, alpha)
        src, tgt = T.source, T.target
    return T


def koszul_on(ring, elements, N, X, ctx: QContext | None = None) -> NComplex:
    """K(x; R) tensor X; a module argument needs no root of unity."""
    K = koszul_ring(ring, elements, N)
    if isinstance(X, FPModule):
        return module_tensor(K, X)
    if ctx is None:
        ctx = default_context(ring, N)
    return q_tensor(K, X, ctx)


# closed forms -------------------------------------------------------------

def colon_module(M: FPModule, xs) -> Subquotient:
    """(0 :_M x) as a subquotient of the generators of M."""
    R, g = M.ring, M.ngens
    rows = []
    for x in xs:
        rows.append(Matrix.identity(R, g).scale(x))
    stacked = Matrix.vstack(R, rows, ncols=g)
    rel = Matrix.block_diag(R, [M.relations] * len(xs))
    big = Matrix.hstack(R, [stacked, rel], nrows=g * len(xs))
    K = kernel_basis(big)
    num = K.select_rows(range(g)) if K.ncols else Matrix.zeros(R, g, 0)
    num = Matrix.hstack(R, [num, M.relations], nrows=g)
    return Subquotient(R, g, num, M.relations)


def quotient_module(M: FPModule, xs) -> FPModule:
    """M / (x) M."""
    R, g = M.ring, M.ngens
    rel = Matrix.hstack(R, [M.relations] + [Matrix.identity(R, g).scale(x) for x in xs], nrows=g)
    return FPModule(R, g, rel)


def closed_form_slots(d, N):
    """Degree/amplitude slots with a predicted value, keyed to 'colon', 'quotient' or 'zero'."""
    out = {}
    for t in range(1, N):
        out[(0, t)] = "quotient"
        k, odd = divmod(d, 2)
        if odd:
            out[(-k * N - t, t)] = "colon"
            out[(-(k + 1) * N, t)] = "zero"
        else:
            out[(-k * N, t)] = "colon"
            out[(-k * N - t, t)] = "zero"
    return out


def koszul_cohomology(ring, elements, M: FPModule, j, t, N) -> dict:
    """Koszul cohomology at (j, t) with the closed-form prediction where one exists."""
    X = koszul_on(ring, elements, N, M)
    value = cohomology(X, j, t)
    xs = _elems(ring, elements)
    kind = closed_form_slots(len(xs), N).get((j, t))
    predicted = None
    if kind == "quotient":
        predicted = quotient_module(M, xs).classify()
    elif kind == "colon":
        predicted = colon_module(M, xs).classify()
    elif kind == "zero":
        predicted = FPModule(ring, 0).classify()
    return {"value": value, "formula": kind, "predicted": predicted,
            "agree": None if predicted is None else predicted == value}


def formula_report(ring, elements, M: FPModule, N) -> dict:
    """Compare every closed-form slot with the computed table."""
    xs = _elems(ring, elements)
    X = koszul_on(ring, elements, N, M)
    rows = []
    for (j, t), kind in sorted(closed_form_slots(len(xs), N).items()):
        got = cohomology(X, j, t)
        if kind == "quotient":
            want = quotient_module(M, xs).classify()
        elif kind == "colon":
            want = colon_module(M, xs).classify()
        else:
            want = FPModule(ring, 0).classify()
        rows.append({"degree": j, "t": t, "formula": kind, "computed": got.render(),
                     "predicted": want.render(), "agree": got == want})
    return {"rows": rows, "agree": all(r["agree"] for r in rows)}


# resolutions over a PID -----------------------------------------------------

def _is_pid(R):
    return isinstance(R, (Integers, PrimeField, LocalizedIntegers, CyclotomicIntegers))


def resolve_module(M: FPModule, N: int):
    """P = [F1 =1= ... =1= F1 -d-> F0] with F1 in degrees -N+1..-1, and P -> M.

    F0 is the free module on the generators of M and F1 a basis of its
    relation image, so the free part of M only enters F0.
    """
    R = M.ring
    if not _is_pid(R):
        raise NotPID(f"{R.name()} is not a principal ideal domain")
    g = M.ngens
    B = image_basis(M.relations) if M.relations.ncols else Matrix.zeros(R, g, 0)
    k = B.ncols
    target = disk(M, 0, 1, N)
    if k == 0:
        P = disk(FPModule(R, g), 0, 1, N)
    else:
        mods = [FPModule(R, k)] * (N - 1) + [FPModule(R, g)]
        diffs = [Matrix.identity(R, k)] * (N - 2) + [B]
        P = NComplex(N, R, -N + 1, mods, diffs)
    aug = ChainMap(P, target, {0: Matrix.identity(R, g)})
    return P, aug


# duality and annihilation ------------------------------------------------

def self_duality_check(ring, elements, N, search_limit=600) -> dict:
    """Compare K(x; R) with Sigma^d Hom(K(x; R), R)."""
    K = koszul_ring(ring, elements, N)
    d = len(elements)
    D = suspend_power(module_hom(K, FPModule(ring, 1), "into"), d)
    lo, hi = min(K.lo, D.lo), max(K.hi, D.hi)
    ranks_k = {n: K.gens(n) for n in range(lo, hi + 1)}
    ranks_d = {n: D.gens(n) for n in range(lo, hi + 1)}
    tk = cohomology_table(K, (lo, hi))
    td = cohomology_table(D, (lo, hi))
    mismatches = [list(key) for key in sorted(tk) if tk[key] != td[key]]
    witness = None
    size = sum(K.gens(n) * D.gens(n) for n in range(lo, hi + 1))
    searched = size <= search_limit
    if searched and not mismatches:
        witness = _find_quasi_iso(K, D)
    return {"elements": [ring.fmt(x) for x in _elems(ring, elements)], "N": N,
            "degreewise_iso": ranks_k == ranks_d,
            "ranks_left": ranks_k, "ranks_right": ranks_d,
            "tables_equal": not mismatches, "mismatches": mismatches,
            "search": "done" if searched else "skipped",
            "quasi_iso_found": witness is not None,
            "pass": not mismatches}


def _find_quasi_iso(X: NComplex, Y: NComplex, tries=40):
    basis = chain_map_basis(X, Y)
    if not basis:
        return None
    candidates = [[b] for b in basis]
    for a, b in itertools.combinations(range(len(basis)), 2):
        candidates.append([basis[a], basis[b]])
        if len(candidates) > tries:
            break
    for combo in candidates:
        f = combo[0]
        for extra in combo[1:]:
            f = ChainMap(X, Y, {n: f.at(n) + extra.at(n) for n in set(f.degrees()) | set(extra.degrees())})
        if is_quasi_iso(f)["quasi_iso"]:
            return f
    return None


def multiplication_homotopy(ring, elements, N, i=0):
    """Witness that multiplication by x_i on K(x; R) is null-homotopic."""
    K = koszul_ring(ring, elements, N)
    x = _elems(ring, elements)[i]
    return null_homotopy(scalar_map(K, x))


def annihilation_check(ring, elements, M: FPModule, N) -> dict:
    """Every x_i acts as zero on every H^j_t(x; M)."""
    X = koszul_on(ring, elements, N, M)
    xs = _elems(ring, elements)
    failures = []
    for j in X.degrees():
        for t in range(1, N):
            sq = X.cohomology_sq(j, t)
            if sq.module.ngens == 0:
                continue
            for x in xs:
                if not sq.module.contains(Matrix.identity(ring, sq.module.ngens).scale(x)):
                    failures.append({"degree": j, "t": t, "element": ring.fmt(x)})
    return {"pass": not failures, "failures": failures}
