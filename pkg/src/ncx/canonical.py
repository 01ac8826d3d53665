"""Normal forms for possibly infinitely generated abelian groups, and the
classifiers that recognise direct limits and inverse limits of towers."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import InconsistentTransitions, Unclassified
from .exact_linalg import CanonicalFG, FPModule, Matrix, Subquotient, in_span, is_well_defined
from .rings import ZZ, Integers, factorize


@dataclass(frozen=True, eq=False)
class CanonicalModule:
    """fg part + Pruefer(p)^k + Zp-adic^m + Q^q."""

    fg: CanonicalFG
    pruefer: tuple = ()   # sorted (p, k)
    adic: tuple = ()      # sorted (p, m)
    divisible_rank: int = 0
    opaque: object = None

    @classmethod
    def make(cls, fg=None, pruefer=None, adic=None, divisible_rank=0):
        fg = fg if fg is not None else CanonicalFG(ZZ, 0, ())
        pr = tuple(sorted((p, k) for p, k in (pruefer or {}).items() if k))
        ad = tuple(sorted((p, k) for p, k in (adic or {}).items() if k))
        return cls(fg, pr, ad, divisible_rank)

    @classmethod
    def zero(cls, ring=ZZ):
        return cls(CanonicalFG(ring, 0, ()))

    @classmethod
    def of(cls, fg: CanonicalFG):
        return cls(fg)

    def __eq__(self, other):
        if not isinstance(other, CanonicalModule):
            return NotImplemented
        if self.opaque is not None or other.opaque is not None:
            return False
        return (_fg_key(self.fg), self.pruefer, self.adic, self.divisible_rank) == \
               (_fg_key(other.fg), other.pruefer, other.adic, other.divisible_rank)

    def __hash__(self):
        return hash((_fg_key(self.fg), self.pruefer, self.adic, self.divisible_rank))

    def is_zero(self):
        return self.opaque is None and self.fg.is_zero() and not self.pruefer and not self.adic \
            and not self.divisible_rank

    def render(self):
        if self.opaque is not None:
            return "unclassified"
        parts = [] if self.fg.is_zero() else [self.fg.render()]
        parts += [f"Pruefer({p})^{k}" for p, k in self.pruefer]
        parts += [f"Z{p}-adic^{m}" for p, m in self.adic]
        if self.divisible_rank:
            parts.append(f"Q^{self.divisible_rank}")
        return " + ".join(parts) if parts else "0"

    __str__ = render

    def __repr__(self):
        return f"CanonicalModule({self.render()})"

    def direct_sum(self, other: "CanonicalModule") -> "CanonicalModule":
        fg = _fg_sum(self.fg, other.fg)
        pr = Counter(dict(self.pruefer)) + Counter(dict(other.pruefer))
        ad = Counter(dict(self.adic)) + Counter(dict(other.adic))
        return CanonicalModule.make(fg, pr, ad, self.divisible_rank + other.divisible_rank)

    def to_json(self):
        d = {"fg": self.fg.to_json(), "pruefer": [list(x) for x in self.pruefer],
             "adic": [list(x) for x in self.adic], "divisible_rank": self.divisible_rank,
             "render": self.render()}
        if self.opaque is not None:
            d["opaque"] = self.opaque
        return d


def _fg_key(fg: CanonicalFG):
    return (fg.free_rank, tuple(fg.ring.to_literal(d) for d in fg.invariant_factors))


def primary_exponents(fg: CanonicalFG) -> dict:
    """p -> sorted (descending) list of exponents of the p-primary cyclic parts, over Z."""
    out = {}
    for d in fg.invariant_factors:
        for p, e in factorize(abs(int(d))).items():
            out.setdefault(p, []).append(e)
    return {p: sorted(v, reverse=True) for p, v in out.items()}


def fg_from_primary(free_rank: int, exps: dict) -> CanonicalFG:
    """Rebuild invariant factors from p-primary exponent lists."""
    width = max((len(v) for v in exps.values()), default=0)
    factors = []
    for i in range(width):
        d = 1
        for p, v in exps.items():
            vs = sorted(v, reverse=True)
            if i < len(vs):
                d *= p ** vs[i]
        factors.append(d)
    factors = sorted(f for f in factors if f != 1)
    return CanonicalFG(ZZ, free_rank, tuple(factors))


def _fg_sum(a: CanonicalFG, b: CanonicalFG) -> CanonicalFG:
    ea, eb = primary_exponents(a), primary_exponents(b)
    merged = {p: ea.get(p, []) + eb.get(p, []) for p in set(ea) | set(eb)}
    return fg_from_primary(a.free_rank + b.free_rank, merged)


def fg_primary_part(fg: CanonicalFG, primes) -> CanonicalFG:
    """The torsion supported at the given primes."""
    ex = primary_exponents(fg)
    return fg_from_primary(0, {p: v for p, v in ex.items() if p in primes})


def fg_coprime_part(fg: CanonicalFG, primes) -> CanonicalFG:
    ex = primary_exponents(fg)
    return fg_from_primary(fg.free_rank, {p: v for p, v in ex.items() if p not in primes})


# systems -------------------------------------------------------------------

@dataclass
class DirectSystem:
    stages: list          # FPModule per stage
    maps: list            # maps[s]: stages[s] -> stages[s+1]


@dataclass
class InverseSystem:
    stages: list          # FPModule per stage
    maps: list            # maps[s]: stages[s+1] -> stages[s]


def _check_maps(stages, maps, forward):
    if len(maps) != len(stages) - 1:
        raise InconsistentTransitions("need one transition between consecutive stages")
    for s, F in enumerate(maps):
        src, tgt = (stages[s], stages[s + 1]) if forward else (stages[s + 1], stages[s])
        if F.shape != (tgt.ngens, src.ngens) or not is_well_defined(F, src, tgt):
            raise InconsistentTransitions(f"transition at stage {s + 1} is not well defined")


def _image_fg(C: Matrix, tgt: FPModule) -> CanonicalFG:
    R = tgt.ring
    num = Matrix.hstack(R, [C, tgt.relations], nrows=tgt.ngens)
    return Subquotient(R, tgt.ngens, num, tgt.relations).classify()


def _order(fg):
    return None if fg.free_rank else fg.order()


def _dump(kind, seq):
    return {"kind": kind, "stages": [g.render() for g in seq]}


def _split_window(window, kind):
    """Separate growing p-exponents from constant ones across three stages."""
    free = {g.free_rank for g in window}
    if len(free) != 1:
        raise Unclassified(f"{kind}: free rank not stable", _dump(kind, window))
    exps = [primary_exponents(g) for g in window]
    primes = sorted(set().union(*exps))
    growing, fixed = {}, {}
    for p in primes:
        lists = [e.get(p, []) for e in exps]
        width = max(len(v) for v in lists)
        lists = [v + [0] * (width - len(v)) for v in lists]
        for j in range(width):
            a, b, c = lists[0][j], lists[1][j], lists[2][j]
            if a < b < c:
                growing[p] = growing.get(p, 0) + 1
            elif a == b == c:
                if a:
                    fixed.setdefault(p, []).append(a)
            else:
                raise Unclassified(f"{kind}: exponent pattern for p={p} not recognised", _dump(kind, window))
    return free.pop(), growing, fixed


def _latest_run(ok, kind, dump):
    """Start of the latest run of three consecutive settled stages."""
    for w0 in range(len(ok) - 3, -1, -1):
        if all(ok[w0:w0 + 3]):
            return w0
    raise Unclassified(f"{kind}: no three consecutive settled stages", dump)


def classify_colimit(sys: DirectSystem) -> CanonicalModule:
    """Recognise a stable value or Pruefer growth in a direct system of f.g. groups.

    The image of stage s in the last stage is taken as its image in the limit
    once it agrees with its image in the stage before; the latest three
    settled stages form the window.
    """
    stages, maps = sys.stages, sys.maps
    _check_maps(stages, maps, True)
    R = stages[0].ring
    S = len(stages)
    if S == 1:
        return CanonicalModule.of(stages[0].classify())
    if S < 5:
        raise Unclassified("colimit: need at least five stages", {"kind": "colimit"})

    def images_in(k):
        comp = [None] * (k + 1)
        comp[k] = Matrix.identity(R, stages[k].ngens)
        for s in range(k - 1, -1, -1):
            comp[s] = comp[s + 1] @ maps[s]
        return comp, [_image_fg(comp[s], stages[k]) for s in range(k + 1)]

    comp, last_imgs = images_in(S - 1)
    _, prev_imgs = images_in(S - 2)
    ok = [_fg_key(last_imgs[s]) == _fg_key(prev_imgs[s]) for s in range(S - 2)]
    dump = _dump("colimit", last_imgs)
    w0 = _latest_run(ok, "colimit", dump)
    window = last_imgs[w0:w0 + 3]
    if not isinstance(R, Integers):
        if len(set(map(_fg_key, window))) == 1:
            return CanonicalModule(window[-1])
        raise Unclassified("colimit: non-stable system over a ring other than Z", dump)
    rank, growing, fixed = _split_window(window, "colimit")
    if rank:
        # growth of the free part would give a localization, outside the catalogue
        step = _quotient_orders(comp, stages[S - 1], w0)
        grow_orders = [_torsion_order(window[i + 1]) // _torsion_order(window[i]) for i in range(2)]
        if step != grow_orders:
            raise Unclassified("colimit: free part grows (localization pattern)", dump)
    return CanonicalModule.make(fg_from_primary(rank, fixed), growing)


def _torsion_order(fg):
    o = 1
    for d in fg.invariant_factors:
        o *= int(d)
    return o


def _quotient_orders(comp, last, w0):
    """Orders of A_{s+1}/A_s across the window (images inside the last stage)."""
    R = last.ring
    out = []
    for s in (w0, w0 + 1):
        small = Matrix.hstack(R, [comp[s], last.relations], nrows=last.ngens)
        big = Matrix.hstack(R, [comp[s + 1], last.relations], nrows=last.ngens)
        q = Subquotient(R, last.ngens, big, small).classify()
        out.append(None if q.free_rank else q.order())
    return out


def classify_limit(sys: InverseSystem) -> CanonicalModule:
    """Recognise a stable value or adic towers in an inverse system of f.g. groups.

    A stage is settled when the images of the last two stages in it agree
    (the Mittag-Leffler image); the latest three settled stages form the window.
    """
    stages, maps = sys.stages, sys.maps
    _check_maps(stages, maps, False)
    R = stages[0].ring
    S = len(stages)
    if S == 1:
        return CanonicalModule.of(stages[0].classify())
    if S < 5:
        raise Unclassified("limit: need at least five stages", {"kind": "limit"})

    def composite(k, s):
        M = Matrix.identity(R, stages[k].ngens)
        for j in range(k - 1, s - 1, -1):
            M = maps[j] @ M
        return M

    ok, images = [], []
    for s in range(S - 2):
        tgt = stages[s]
        a, b = composite(S - 1, s), composite(S - 2, s)
        rel = tgt.relations
        A = Matrix.hstack(R, [a, rel], nrows=tgt.ngens)
        B = Matrix.hstack(R, [b, rel], nrows=tgt.ngens)
        ok.append(in_span(B, a) and in_span(A, b))
        images.append(_image_fg(a, tgt))
    dump = _dump("limit", images)
    w0 = _latest_run(ok, "limit", dump)
    window = images[w0:w0 + 3]
    if not isinstance(R, Integers):
        if len(set(map(_fg_key, window))) == 1:
            return CanonicalModule(window[-1])
        raise Unclassified("limit: non-stable system over a ring other than Z", dump)
    rank, growing, fixed = _split_window(window, "limit")
    return CanonicalModule.make(fg_from_primary(rank, fixed), None, growing)
