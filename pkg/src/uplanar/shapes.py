"""Shape descriptions of uv-external upward planar embeddings.

A shape is the 8-tuple ``(tl, tr, lu, lv, rlu, rru, rlv, rrv)``: the turn
numbers of the left and right outer paths, the outer angle labels at the
poles ``u`` and ``v`` (-1 small, 0 flat, +1 large) and the directions of the
four outer boundary edges at the poles (``IN`` = 0, ``OUT`` = 1).

Parallel compositions are described by *patterns*: contracted child-shape
sequences.  Every non-generic element (some pole label below +1) occurs on
exactly one child; a generic element may be carried by any positive number
of consecutive children at no extra cost.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Container, Iterable, NamedTuple, Optional, Sequence

from .errors import CapExceeded, EmptySequence, OutOfBound

IN = 0
OUT = 1
_DIR_NAME = {IN: "in", OUT: "out"}
_DIR_CODE = {"in": IN, "out": OUT}

MAX_LEN = 9
TURN_WINDOW = 4


class Shape(NamedTuple):
    tl: int
    tr: int
    lu: int
    lv: int
    rlu: int
    rru: int
    rlv: int
    rrv: int

    def __str__(self) -> str:
        d = _DIR_NAME
        return (f"({self.tl},{self.tr},{self.lu},{self.lv},"
                f"{d[self.rlu]},{d[self.rru]},{d[self.rlv]},{d[self.rrv]})")


def parse_shape(text: str) -> Shape:
    parts = [p.strip() for p in text.strip().strip("()⟨⟩").split(",")]
    if len(parts) != 8:
        raise ValueError(f"a shape has 8 fields, got {len(parts)}: {text!r}")
    nums = [int(p) for p in parts[:4]]
    dirs = [_DIR_CODE[p.lower()] for p in parts[4:]]
    return Shape(*nums, *dirs)


class FeasibleSet(frozenset):
    """Immutable set of shapes; iteration order is not canonical, use ``ordered``."""

    def ordered(self) -> list[Shape]:
        return sorted(self, key=_sort_key)


def _sort_key(s: Shape) -> tuple:
    return (s.tl, s.lu, s.lv, s.rlu)


EMPTY = FeasibleSet()


def validate_shape(s: Shape) -> bool:
    """Check the four dependencies between the fields of a shape."""
    if s.lu not in (-1, 0, 1) or s.lv not in (-1, 0, 1):
        return False
    if any(r not in (IN, OUT) for r in (s.rlu, s.rru, s.rlv, s.rrv)):
        return False
    if (s.rlu == s.rru) != (s.lu != 0):
        return False
    if (s.rlv == s.rrv) != (s.lv != 0):
        return False
    if (s.rlu == s.rlv) != (s.tl % 2 == 1):
        return False
    return s.tl + s.tr + s.lu + s.lv == 2


def from_free(tl: int, lu: int, lv: int, rlu: int) -> Shape:
    """The unique valid shape with the given free parameters."""
    rru = rlu if lu != 0 else 1 - rlu
    rlv = rlu if tl % 2 == 1 else 1 - rlu
    rrv = rlv if lv != 0 else 1 - rlv
    return Shape(tl, 2 - tl - lu - lv, lu, lv, rlu, rru, rlv, rrv)


@lru_cache(maxsize=256)
def universal_set(bound: int) -> tuple[Shape, ...]:
    """All valid shapes with ``|tl| <= bound``, in encoding order."""
    if bound < 0:
        raise ValueError("bound must be non-negative")
    return tuple(decode(i, bound) for i in range(universal_size(bound)))


def universal_size(bound: int) -> int:
    return (2 * bound + 1) * 18


def encode(s: Shape, bound: int) -> int:
    if abs(s.tl) > bound:
        raise OutOfBound(f"|tl|={abs(s.tl)} exceeds bound {bound}")
    return (((s.tl + bound) * 3 + (s.lu + 1)) * 3 + (s.lv + 1)) * 2 + s.rlu


def decode(index: int, bound: int) -> Shape:
    if not 0 <= index < universal_size(bound):
        raise OutOfBound(f"index {index} outside universal set of bound {bound}")
    index, rlu = divmod(index, 2)
    index, lv = divmod(index, 3)
    tl, lu = divmod(index, 3)
    return from_free(tl - bound, lu - 1, lv - 1, rlu)


def flip(s: Shape) -> Shape:
    """Shape of the mirrored embedding."""
    return Shape(s.tr, s.tl, s.lu, s.lv, s.rru, s.rlu, s.rrv, s.rlv)


def swap_poles(s: Shape) -> Shape:
    """Shape of the same embedding read with the pole order reversed."""
    return Shape(s.tr, s.tl, s.lv, s.lu, s.rrv, s.rlv, s.rru, s.rlu)


def is_generic(s: Shape) -> bool:
    """Large outer angle at both poles: the shape can repeat at no cost."""
    return s.lu == 1 and s.lv == 1


def contract(sigma: Sequence[Shape]) -> tuple[Shape, ...]:
    if not sigma:
        raise EmptySequence("cannot contract an empty shape sequence")
    out = [sigma[0]]
    for s in sigma[1:]:
        if s != out[-1]:
            out.append(s)
    return tuple(out)


def q_shape(forward: bool) -> Shape:
    """Shape of a single edge; ``forward`` means the edge is directed u -> v."""
    if forward:
        return Shape(0, 0, 1, 1, OUT, OUT, IN, IN)
    return Shape(0, 0, 1, 1, IN, IN, OUT, OUT)


# ---------------------------------------------------------------------------
# Parallel composition patterns
# ---------------------------------------------------------------------------
#
# Pole budget: at each pole the non-negative quantities
#   (1 - child outer label) per child, (1 + label) per angle between two
#   consecutive children, (1 + composed outer label)
# sum to exactly 2 (label sum at a vertex is 2 - deg).  Between consecutive
# children a, b the face condition reads
#   tr(a) + tl(b) + angle_u + angle_v = -2.


def _angle_options(d1: int, d2: int) -> tuple[int, ...]:
    return (0,) if d1 != d2 else (-1, 1)


@lru_cache(maxsize=None)
def _successors(last: Shape, used_u: int, used_v: int) -> tuple[tuple[Shape, int, int], ...]:
    """Next distinct elements after ``last`` with the budgets they consume."""
    out = []
    for bu in (-1, 0, 1):
        eu = 1 + bu
        if used_u + eu > 2:
            continue
        for bv in (-1, 0, 1):
            ev = 1 + bv
            if used_v + ev > 2:
                continue
            tl = -2 - last.tr - bu - bv
            for lu in (1, 0, -1):
                cu = used_u + eu + 1 - lu
                if cu > 2:
                    continue
                for lv in (1, 0, -1):
                    cv = used_v + ev + 1 - lv
                    if cv > 2:
                        continue
                    for rlu in (IN, OUT):
                        b = from_free(tl, lu, lv, rlu)
                        if (bu == 0) != (last.rru != b.rlu):
                            continue
                        if (bv == 0) != (last.rrv != b.rlv):
                            continue
                        if b == last:
                            continue
                        out.append((b, cu, cv))
    return tuple(out)


def _closing(seq: tuple[Shape, ...], used_u: int, used_v: int):
    first, last = seq[0], seq[-1]
    if len(seq) == 1 and not is_generic(first):
        return None
    s = Shape(first.tl, last.tr, 1 - used_u, 1 - used_v, first.rlu, last.rru, first.rlv, last.rrv)
    return s if validate_shape(s) else None


def iter_patterns(first: Shape, allowed: Optional[Container[Shape]] = None, max_len: int = MAX_LEN):
    """Yield ``(s, S)`` for every pattern ``S`` starting at ``first``.

    With ``allowed`` given, only patterns whose elements all lie in it are
    explored; ``max_len`` truncates the search (it never binds at the
    default, which is the proven bound).
    """
    stack = [((first,), 1 - first.lu, 1 - first.lv)]
    while stack:
        seq, uu, uv = stack.pop()
        closed = _closing(seq, uu, uv)
        if closed is not None:
            yield closed, seq
        if len(seq) >= max_len:
            continue
        for b, cu, cv in _successors(seq[-1], uu, uv):
            if allowed is None or b in allowed:
                stack.append((seq + (b,), cu, cv))


@lru_cache(maxsize=None)
def patterns_from(first: Shape) -> tuple[tuple[Shape, tuple[Shape, ...]], ...]:
    """All ``(s, S)`` with ``S`` a valid pattern for outer shape ``s`` and ``S[0] == first``."""
    if not validate_shape(first):
        return ()
    found = list(iter_patterns(first, None, MAX_LEN + 1))
    for _, seq in found:
        if len(seq) > MAX_LEN:
            raise CapExceeded(f"pattern longer than {MAX_LEN}: {seq}")
    found.sort(key=lambda item: (_sort_key(item[0]), [_sort_key(x) for x in item[1]]))
    return tuple(found)


@lru_cache(maxsize=None)
def generating_set(s: Shape, max_len: int = MAX_LEN, turn_window: int = TURN_WINDOW) -> frozenset[tuple[Shape, ...]]:
    """Contracted child-shape sequences a parallel composition with outer shape ``s`` can have."""
    if not validate_shape(s):
        return frozenset()
    result = set()
    for lu in (-1, 0, 1):
        for lv in (-1, 0, 1):
            first = from_free(s.tl, lu, lv, s.rlu)
            if first.rlv != s.rlv:
                continue
            for target, seq in patterns_from(first):
                if target != s:
                    continue
                if len(seq) > max_len:
                    raise CapExceeded(f"sequence of length {len(seq)} exceeds max_len={max_len}")
                for x in seq:
                    if abs(x.tl - s.tl) > turn_window or abs(x.tr - s.tr) > turn_window:
                        raise CapExceeded(f"element {x} outside the turn window of {s}")
                result.add(seq)
    return frozenset(result)


def composition_shape(sigma: Sequence[Shape]) -> set[Shape]:
    """Outer shapes of a parallel composition whose children carry ``sigma`` in order.

    Direct evaluation of the local conditions, independent of the pattern
    search; used as a cross-check.
    """
    if len(sigma) < 2:
        return set()
    used_u = sum(1 - x.lu for x in sigma)
    used_v = sum(1 - x.lv for x in sigma)
    # enumerate the angle pairs between consecutive children
    options: list[list[tuple[int, int]]] = []
    for a, b in zip(sigma, sigma[1:]):
        pairs = [(bu, bv)
                 for bu in _angle_options(a.rru, b.rlu)
                 for bv in _angle_options(a.rrv, b.rlv)
                 if a.tr + b.tl + bu + bv == -2]
        if not pairs:
            return set()
        options.append(pairs)
    results = set()

    def rec(i: int, uu: int, uv: int) -> None:
        if uu > 2 or uv > 2:
            return
        if i == len(options):
            s = Shape(sigma[0].tl, sigma[-1].tr, 1 - uu, 1 - uv,
                      sigma[0].rlu, sigma[-1].rru, sigma[0].rlv, sigma[-1].rrv)
            if validate_shape(s):
                results.add(s)
            return
        for bu, bv in options[i]:
            rec(i + 1, uu + 1 + bu, uv + 1 + bv)

    rec(0, used_u, used_v)
    return results


def series_shapes(s1: Shape, s2: Shape) -> list[Shape]:
    """Shapes of the series composition of ``s1`` (poles u,w) and ``s2`` (poles w,v)."""
    total = s1.lv + s2.lu - 2
    out = []
    for al in _angle_options(s1.rlv, s2.rlu):
        ar = total - al
        if ar not in _angle_options(s1.rrv, s2.rru):
            continue
        out.append(Shape(s1.tl + al + s2.tl, s1.tr + ar + s2.tr, s1.lu, s2.lv,
                         s1.rlu, s1.rru, s2.rlv, s2.rrv))
    return out


def mirror_sequence(seq: Iterable[Shape]) -> tuple[Shape, ...]:
    return tuple(flip(x) for x in reversed(tuple(seq)))
