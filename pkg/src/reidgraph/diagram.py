"""Planar knot diagrams as combinatorial maps on the 2-sphere.

A diagram with n crossings is stored as a rotation system: each crossing
has four ports in fixed counterclockwise cyclic order 0,1,2,3, and a dart
is one arc-end, encoded as the integer ``4*crossing + port``.  The arcs
form a perfect matching (a fixed-point-free involution) on the darts.
The strand runs straight through each crossing, entering one port and
leaving the opposite one (0<->2, 1<->3); the per-crossing ``over`` flag
says whether the strand through ports {0,2} is the over strand.

Faces are traced by "follow the arc, then turn one port counterclockwise";
a diagram is spherical when that tracing yields n + 2 faces.  The trivial
diagram D0 (a simple closed curve, no crossings) is the empty map.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .gauss import OVER, UNDER, GaussCode, parity_check

D0_CANONICAL = b"\x00\x00"


class NonRealizableError(ValueError):
    """The Gauss code admits no diagram on the 2-sphere."""


class MalformedDiagramError(ValueError):
    """Internal map data violates a diagram invariant."""


def opposite(dart: int) -> int:
    """The dart where the strand leaves after entering at ``dart``."""
    return dart ^ 2


def rot_next(dart: int) -> int:
    """The next port counterclockwise at the same crossing."""
    return (dart & ~3) | ((dart + 1) & 3)


def rot_prev(dart: int) -> int:
    return (dart & ~3) | ((dart - 1) & 3)


@dataclass(frozen=True)
class Face:
    """One face of the map: the cyclic dart sequence of its boundary walk."""

    darts: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.darts)


def trace_faces(arc: Sequence[int]) -> list[tuple[int, ...]]:
    """Partition all darts into face cycles of next = rot_next(arc[d])."""
    seen = [False] * len(arc)
    faces = []
    for start in range(len(arc)):
        if seen[start]:
            continue
        cycle = []
        d = start
        while not seen[d]:
            seen[d] = True
            cycle.append(d)
            d = rot_next(arc[d])
        faces.append(tuple(cycle))
    return faces


def _check_map(arc: Sequence[int], over: Sequence[bool]) -> None:
    n = len(over)
    if len(arc) != 4 * n:
        raise MalformedDiagramError("dart count must be 4 * crossings")
    if n == 0:
        return
    for d, e in enumerate(arc):
        if not 0 <= e < 4 * n or e == d or arc[e] != d:
            raise MalformedDiagramError(f"arc table is not an involution at dart {d}")
    d = arc[opposite(0)]
    steps = 1
    while d != 0:
        d = arc[opposite(d)]
        steps += 1
        if steps > 2 * n:
            break
    if steps != 2 * n:
        raise MalformedDiagramError("strand traversal is not a single closed cycle")
    if len(trace_faces(arc)) != n + 2:
        raise MalformedDiagramError("map is not spherical (face count != n + 2)")


class PlanarDiagram:
    """An immutable knot diagram on the 2-sphere.

    Values are hashable and structurally comparable; two diagrams that
    differ only by relabeling compare unequal but share a canonical code.
    """

    __slots__ = ("arc", "over", "_canon")

    def __init__(self, arc: Iterable[int], over: Iterable[bool], _checked: bool = False):
        object.__setattr__(self, "arc", tuple(arc))
        object.__setattr__(self, "over", tuple(bool(b) for b in over))
        object.__setattr__(self, "_canon", None)
        if not _checked:
            _check_map(self.arc, self.over)

    def __setattr__(self, name, value):
        raise AttributeError("PlanarDiagram is immutable")

    @staticmethod
    def trivial() -> "PlanarDiagram":
        return PlanarDiagram((), ())

    @property
    def crossings(self) -> int:
        return len(self.over)

    @property
    def is_trivial(self) -> bool:
        return not self.over

    def darts(self) -> range:
        return range(4 * len(self.over))

    def faces(self) -> list[Face]:
        """The face partition; D0 reports its two formal faces."""
        if self.is_trivial:
            return [Face(()), Face(())]
        return [Face(_rotate_min(c)) for c in trace_faces(self.arc)]

    def canonical_code(self) -> bytes:
        """Complete invariant for orientation-preserving map isomorphism."""
        if self._canon is None:
            object.__setattr__(self, "_canon", canonical_code_of(self.arc, self.over))
        return self._canon

    def canonically_equal(self, other: "PlanarDiagram") -> bool:
        return self.canonical_code() == other.canonical_code()

    def mirror(self) -> "PlanarDiagram":
        """The reflected diagram (rotation order reversed, passes kept)."""
        if self.is_trivial:
            return self
        m = _mirror_dart
        arc = [0] * len(self.arc)
        for d, e in enumerate(self.arc):
            arc[m(d)] = m(e)
        return PlanarDiagram(arc, self.over, _checked=True)

    def to_gauss(self, start: int = 0) -> GaussCode:
        """Read the Gauss code by strand traversal entering at ``start``."""
        if self.is_trivial:
            return GaussCode(())
        labels: dict[int, int] = {}
        entries = []
        d = start
        for _ in range(2 * len(self.over)):
            c, p = divmod(d, 4)
            if c not in labels:
                labels[c] = len(labels) + 1
            over_here = self.over[c] == (p % 2 == 0)
            entries.append((labels[c], OVER if over_here else UNDER))
            d = self.arc[opposite(d)]
        if d != start:
            raise MalformedDiagramError("traversal did not close")
        return GaussCode(tuple(entries))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PlanarDiagram)
            and self.arc == other.arc
            and self.over == other.over
        )

    def __hash__(self) -> int:
        return hash((self.arc, self.over))

    def __repr__(self) -> str:
        if self.is_trivial:
            return "PlanarDiagram.trivial()"
        return f"PlanarDiagram(crossings={self.crossings})"


def _rotate_min(cycle: tuple[int, ...]) -> tuple[int, ...]:
    k = cycle.index(min(cycle))
    return cycle[k:] + cycle[:k]


def _mirror_dart(d: int) -> int:
    return (d & ~3) | ((-d) & 3)


# ---------------------------------------------------------------------------
# Canonical codes
# ---------------------------------------------------------------------------
#
# The encoding from a fixed start dart relabels crossings breadth-first in
# discovery order, rotating each crossing so its discovery port becomes
# port 0, and emits the arc partner of every relabeled dart in order as
# (new crossing, new port) symbols, followed by the rotated over flags.
# The canonical code is the lexicographic minimum over all start darts,
# which ranges over every orientation-preserving relabeling of a connected
# map.  The encoding is self-delimiting and decodable.


def _encode_from(
    arc: Sequence[int],
    over: Sequence[bool],
    start: int,
    best: bytes | None,
) -> bytes | None:
    """Encoding from one start dart; None as soon as it exceeds ``best``."""
    n = len(over)
    label = [-1] * n
    offset = [0] * n
    order = []
    c0 = start >> 2
    label[c0] = 0
    offset[c0] = start & 3
    order.append(c0)
    out = bytearray()
    out.append((n >> 8) & 0xFF)
    out.append(n & 0xFF)
    pos = 2
    for k in range(n):
        c = order[k]
        off = offset[c]
        base = 4 * c
        for j in range(4):
            e = arc[base + ((off + j) & 3)]
            c2 = e >> 2
            lab = label[c2]
            if lab < 0:
                lab = len(order)
                label[c2] = lab
                offset[c2] = e & 3
                order.append(c2)
                sym = lab << 2
            else:
                sym = (lab << 2) | ((e - offset[c2]) & 3)
            hi = (sym >> 8) & 0xFF
            lo = sym & 0xFF
            if best is not None:
                b = best[pos]
                if hi > b:
                    return None
                if hi == b:
                    b = best[pos + 1]
                    if lo > b:
                        return None
                    if lo == b:
                        out.append(hi)
                        out.append(lo)
                        pos += 2
                        continue
                best = None
            out.append(hi)
            out.append(lo)
            pos += 2
    bits = 0
    acc = bytearray()
    nbits = 0
    for k in range(n):
        c = order[k]
        flag = over[c] ^ bool(offset[c] & 1)
        bits = (bits << 1) | flag
        nbits += 1
        if nbits == 8:
            acc.append(bits)
            bits = 0
            nbits = 0
    if nbits:
        acc.append(bits << (8 - nbits))
    out.extend(acc)
    if best is not None and bytes(out) > best:
        return None
    return bytes(out)


def canonical_code_of(arc: Sequence[int], over: Sequence[bool]) -> bytes:
    n = len(over)
    if n == 0:
        return D0_CANONICAL
    if n > 0x3FFF:
        raise MalformedDiagramError("diagrams beyond 16383 crossings unsupported")
    best: bytes | None = None
    for start in range(4 * n):
        cand = _encode_from(arc, over, start, best)
        if cand is not None:
            best = cand
    assert best is not None
    return best


def canonical_form(
    arc: Sequence[int], over: Sequence[bool]
) -> tuple[bytes, list[int]]:
    """Canonical code plus the dart relabeling map old dart -> new dart."""
    n = len(over)
    if n == 0:
        return D0_CANONICAL, []
    code = canonical_code_of(arc, over)
    for start in range(4 * n):
        if _encode_from(arc, over, start, code) == code:
            label = [-1] * n
            offset = [0] * n
            order = [start >> 2]
            label[start >> 2] = 0
            offset[start >> 2] = start & 3
            k = 0
            while k < len(order):
                c = order[k]
                off = offset[c]
                for j in range(4):
                    e = arc[4 * c + ((off + j) & 3)]
                    if label[e >> 2] < 0:
                        label[e >> 2] = len(order)
                        offset[e >> 2] = e & 3
                        order.append(e >> 2)
                k += 1
            perm = [0] * (4 * n)
            for c in range(n):
                for p in range(4):
                    perm[4 * c + p] = 4 * label[c] + ((p - offset[c]) & 3)
            return code, perm
    raise AssertionError("canonical start vanished")


def decode_canonical(code: bytes) -> PlanarDiagram:
    """Rebuild the (canonically labeled) diagram from its canonical code."""
    n = (code[0] << 8) | code[1]
    if n == 0:
        return PlanarDiagram.trivial()
    arc = [0] * (4 * n)
    pos = 2
    for d in range(4 * n):
        sym = (code[pos] << 8) | code[pos + 1]
        arc[d] = sym
        pos += 2
    over = []
    for c in range(n):
        byte = code[pos + (c >> 3)]
        over.append(bool((byte >> (7 - (c & 7))) & 1))
    return PlanarDiagram(arc, over, _checked=True)


# ---------------------------------------------------------------------------
# Realization of Gauss codes
# ---------------------------------------------------------------------------
#
# Along the traversal the first visit to a crossing enters port 0 and
# leaves port 2; the second visit runs through ports 1 and 3, and the
# only freedom per crossing is the direction of that second pass.  Arcs
# join the exit dart of each visit to the entry dart of the next, so a
# direction assignment fixes the map, and it is spherical iff face
# tracing yields n + 2 faces.
#
# The directions are not independent: for any two interlaced crossings
# the relative direction is forced, and its value is the parity of the
# chords that avoid one of the four intervals cut out by the two chords
# while separating the remaining three.  Propagating these constraints
# leaves one free flip per connected component of the interlacement
# graph (a component flip mirrors that part of the diagram), so the
# solutions are enumerated exactly by component flips, each candidate
# verified directly against the face count.

_EMBEDDING_ENUM_LIMIT = 1 << 16


class TooManyEmbeddingsError(RuntimeError):
    """More candidate embeddings than the enumeration limit allows."""


def _interlacement(positions: list[list[int]]) -> list[list[tuple[int, int]]]:
    """Adjacency with forced relative flips for every interlaced pair."""
    n = len(positions)
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for a in range(n):
        i1, i2 = positions[a]
        for b in range(a + 1, n):
            j1, j2 = positions[b]
            if not (i1 < j1 < i2 < j2 or j1 < i1 < j2 < i2):
                continue
            lo1, lo2, hi1, hi2 = (
                (i1, j1, i2, j2) if i1 < j1 else (j1, i1, j2, i2)
            )

            def interval(p: int) -> int:
                if lo1 < p < lo2:
                    return 0
                if lo2 < p < hi1:
                    return 1
                if hi1 < p < hi2:
                    return 2
                return 3

            parity = 0
            for c in range(n):
                if c == a or c == b:
                    continue
                u = interval(positions[c][0])
                v = interval(positions[c][1])
                if u != v and u != 2 and v != 2:
                    parity ^= 1
            adj[a].append((b, parity))
            adj[b].append((a, parity))
    return adj


def _arc_table(
    n: int,
    visit_crossing: list[int],
    is_second: list[bool],
    flip: list[int],
) -> list[int]:
    arc = [0] * (4 * n)
    m = 2 * n
    prev_exit = 0
    for i in range(m):
        c = visit_crossing[i]
        if not is_second[i]:
            enter, exit_ = 4 * c, 4 * c + 2
        elif flip[c]:
            enter, exit_ = 4 * c + 3, 4 * c + 1
        else:
            enter, exit_ = 4 * c + 1, 4 * c + 3
        if i:
            arc[prev_exit] = enter
            arc[enter] = prev_exit
        else:
            first_enter = enter
        prev_exit = exit_
    arc[prev_exit] = first_enter
    arc[first_enter] = prev_exit
    return arc


def _count_faces(arc: list[int]) -> int:
    seen = [False] * len(arc)
    count = 0
    for d0 in range(len(arc)):
        if seen[d0]:
            continue
        count += 1
        d = d0
        while not seen[d]:
            seen[d] = True
            d = rot_next(arc[d])
    return count


def realize(code: GaussCode) -> tuple[PlanarDiagram, int]:
    """Embed a Gauss code on the 2-sphere.

    Returns the diagram with minimal canonical code among all spherical
    embeddings of the code, together with the number of canonically
    distinct embeddings.  Raises NonRealizableError when none exists.
    """
    n = code.crossings
    if n == 0:
        return PlanarDiagram.trivial(), 1
    if not parity_check(code):
        raise NonRealizableError("Gauss parity condition fails")
    positions: list[list[int]] = [[] for _ in range(n)]
    visit_crossing = []
    is_second = []
    over = [False] * n
    for i, (label, sign) in enumerate(code.entries):
        c = label - 1
        visit_crossing.append(c)
        is_second.append(bool(positions[c]))
        if not positions[c]:
            over[c] = sign == OVER
        positions[c].append(i)

    adj = _interlacement(positions)
    base = [-1] * n
    components: list[list[int]] = []
    for root in range(n):
        if base[root] >= 0:
            continue
        base[root] = 0
        comp = [root]
        stack = [root]
        while stack:
            u = stack.pop()
            for v, parity in adj[u]:
                want = base[u] ^ parity
                if base[v] < 0:
                    base[v] = want
                    comp.append(v)
                    stack.append(v)
                elif base[v] != want:
                    raise NonRealizableError(
                        "inconsistent interlacement constraints"
                    )
        components.append(comp)

    k = len(components)
    if 1 << k > _EMBEDDING_ENUM_LIMIT:
        raise TooManyEmbeddingsError(
            f"{k} independent summand flips exceed the enumeration limit"
        )
    codes: set[bytes] = set()
    best: bytes | None = None
    flip = list(base)
    for mask in range(1 << k):
        for ci, comp in enumerate(components):
            bit = (mask >> ci) & 1
            for c in comp:
                flip[c] = base[c] ^ bit
        arc = _arc_table(n, visit_crossing, is_second, flip)
        if _count_faces(arc) != n + 2:
            continue
        cc = canonical_code_of(arc, over)
        codes.add(cc)
        if best is None or cc < best:
            best = cc
    if best is None:
        raise NonRealizableError("no spherical interleaving assignment exists")
    return decode_canonical(best), len(codes)


def connect_sum(
    d1: PlanarDiagram, a1: int | None, d2: PlanarDiagram, a2: int | None
) -> PlanarDiagram:
    """Cut one arc in each diagram and cross-splice the loose ends."""
    if d1.is_trivial:
        return d2
    if d2.is_trivial:
        return d1
    if a1 is None or a2 is None:
        raise ValueError("cut darts are required for nontrivial summands")
    shift = 4 * d1.crossings
    arc = list(d1.arc) + [e + shift for e in d2.arc]
    b1 = d1.arc[a1]
    s2 = a2 + shift
    b2 = arc[s2]
    arc[a1], arc[s2] = s2, a1
    arc[b1], arc[b2] = b2, b1
    return PlanarDiagram(arc, d1.over + d2.over)
