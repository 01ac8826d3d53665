"""Seeded verification batteries shared by the command line and the tests."""
from __future__ import annotations

import random

from .cech_telescope import cech_table
from .exact_linalg import FPModule
from .koszul import formula_report
from .ncomplex_core import NComplex, cone, cone_inclusion, cone_projection, les_report
from .qcalc import default_context, identity_battery, random_chain_map, random_free_complex
from .rings import ZZ, PrimeField
from .torsion_completion import local_table

ENTRY_BOUND = 6
MAX_WIDTH = 6


def _bounded(X: NComplex, bound) -> bool:
    return all(abs(int(v)) <= bound for n in range(X.lo, X.hi) for row in X.diff(n).rows for v in row)


def _map_bounded(f, bound) -> bool:
    return all(abs(int(v)) <= bound for n in f.degrees() for row in f.at(n).rows for v in row)


def random_short_exact(rng: random.Random, N: int):
    """0 -> Y -> C(f) -> Sigma X -> 0 for a random chain map f: X -> Y."""
    while True:
        X = random_free_complex(rng, ZZ, N, width=3, max_rank=2, bound=2)
        Y = random_free_complex(rng, ZZ, N, width=3, max_rank=2, bound=2)
        if not (_bounded(X, ENTRY_BOUND) and _bounded(Y, ENTRY_BOUND)):
            continue
        f = random_chain_map(rng, X, Y)
        if not _map_bounded(f, ENTRY_BOUND):
            continue
        C = cone(f)
        if C.hi - C.lo + 1 > MAX_WIDTH:
            continue
        return f, cone_inclusion(f, C), cone_projection(f, C)


def les_battery(seed: int, count: int, Ns=(3, 4)) -> dict:
    """Exactness of the long sequence at every node for seeded short exact sequences."""
    rng = random.Random(seed)
    failures = []
    nodes = 0
    for k in range(count):
        N = rng.choice(Ns)
        _, i, p = random_short_exact(rng, N)
        for t in range(1, N):
            rep = les_report(i, p, t)
            nodes += rep["nodes"]
            if not rep["exact"]:
                failures.append({"case": k, "N": N, "t": t, "nodes": [list(x) for x in rep["failures"]]})
    return {"suite": "les", "seed": seed, "count": count, "nodes": nodes, "failures": failures[:5],
            "pass": not failures}


def identities_battery(seed: int, count: int, ring=None, N=3) -> dict:
    ctx = default_context(ring or PrimeField(7, 2), N)
    rep = identity_battery(ctx, seed, count)
    rep["suite"] = "identities"
    return rep


def _random_module(rng):
    free = rng.randint(0, 1)
    factors = [rng.choice([2, 3, 4, 6, 8, 9, 12]) for _ in range(rng.randint(0, 2))]
    if free == 0 and not factors:
        free = 1
    return FPModule.from_factors(ZZ, free, factors)


def koszul_battery(seed: int, count: int) -> dict:
    """Closed-form Koszul slots against direct computation."""
    rng = random.Random(seed)
    failures = []
    for k in range(count):
        N = rng.choice([3, 4, 5])
        d = rng.randint(1, 2)
        xs = [rng.choice([0, 2, 3, 4, 6]) for _ in range(d)]
        M = _random_module(rng)
        rep = formula_report(ZZ, xs, M, N)
        if not rep["agree"]:
            failures.append({"case": k, "elements": xs, "module": M.classify().render(), "N": N})
    return {"suite": "koszul", "seed": seed, "count": count, "failures": failures[:5], "pass": not failures}


def routes_battery(seed: int, count: int) -> dict:
    """Koszul colimit against Cech classification for one element."""
    rng = random.Random(seed)
    failures = []
    for k in range(count):
        x = rng.choice([2, 3, 4, 6, 10])
        N = rng.choice([3, 4])
        M = _random_module(rng)
        a, b = local_table([x], M, N), cech_table([x], M, N)
        bad = [list(key) for key in sorted(set(a) | set(b)) if a.get(key) != b.get(key)]
        if bad:
            failures.append({"case": k, "x": x, "N": N, "module": M.classify().render(), "slots": bad})
    return {"suite": "routes", "seed": seed, "count": count, "failures": failures[:5], "pass": not failures}


SUITES = {"les": les_battery, "identities": identities_battery, "koszul": koszul_battery,
          "routes": routes_battery}
