"""Reidemeister moves on the 2-sphere: site enumeration and application.

Moves are located on faces of the map: a monogon admits a kink removal,
a bigon whose strands run consistently over/under admits a pull-apart,
and a trigon with a strand that is over (or under) at both of its
corners admits a slide.  Kink additions act on arcs, and strand pushes
act on ordered pairs of dart occurrences along one face boundary; both
directions of every move are produced, so the edge relation is
symmetric.  No outer face is distinguished, which is what makes these
the sphere moves rather than the plane moves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .diagram import (
    PlanarDiagram,
    opposite,
    rot_next,
    rot_prev,
    trace_faces,
)


class InvalidSiteError(ValueError):
    """The move site does not validate against the given diagram."""


@dataclass(frozen=True)
class R1Up:
    """Add a kink on the arc at ``dart`` (-1 on the trivial diagram)."""

    dart: int
    side: int  # 0 or 1, which side of the arc the loop lies on
    over_kink: bool  # chirality: whether the loop strand crosses on top


@dataclass(frozen=True)
class R1Down:
    """Remove the kink whose monogon face is at ``dart``."""

    dart: int


@dataclass(frozen=True)
class R2Up:
    """Push the strand at ``dart1`` across the face over the one at ``dart2``.

    Both darts are boundary occurrences of one face.  They may belong to
    the same arc, and may even be the same occurrence (``dart1 ==
    dart2``): an arc bulged across itself inside a face that borders it
    only once.  On the trivial diagram both darts are -1.
    """

    dart1: int
    dart2: int
    pushed_over: bool


@dataclass(frozen=True)
class R2Down:
    """Pull apart the bigon face at ``dart``."""

    dart: int


@dataclass(frozen=True)
class R3:
    """Slide the strand departing at ``dart`` across the opposite crossing.

    ``dart`` is the trigon boundary dart whose arc lies on the sliding
    strand (the strand that is over at both of its trigon corners, or
    under at both).
    """

    dart: int


MoveSite = Union[R1Up, R1Down, R2Up, R2Down, R3]

_DELTAS = {R1Up: 1, R1Down: -1, R2Up: 2, R2Down: -2, R3: 0}
_KINDS = {R1Up: "R1+", R1Down: "R1-", R2Up: "R2+", R2Down: "R2-", R3: "R3"}


@dataclass(frozen=True)
class Move:
    site: MoveSite

    @property
    def crossing_delta(self) -> int:
        return _DELTAS[type(self.site)]

    @property
    def kind(self) -> str:
        return _KINDS[type(self.site)]


def site_token(move: Move) -> str:
    """Serialize the site as an opaque token (stable for certificates)."""
    s = move.site
    if isinstance(s, R1Up):
        return f"{s.dart},{s.side},{int(s.over_kink)}"
    if isinstance(s, R2Up):
        return f"{s.dart1},{s.dart2},{int(s.pushed_over)}"
    return str(s.dart)


def move_from_token(kind: str, token: str) -> Move:
    try:
        parts = [int(t) for t in token.split(",")]
        if kind == "R1+":
            return Move(R1Up(parts[0], parts[1], bool(parts[2])))
        if kind == "R1-":
            return Move(R1Down(parts[0]))
        if kind == "R2+":
            return Move(R2Up(parts[0], parts[1], bool(parts[2])))
        if kind == "R2-":
            return Move(R2Down(parts[0]))
        if kind == "R3":
            return Move(R3(parts[0]))
    except (ValueError, IndexError):
        pass
    raise InvalidSiteError(f"unreadable move {kind!r} site {token!r}")


# ---------------------------------------------------------------------------
# Site predicates
# ---------------------------------------------------------------------------


def _face_next(arc, d: int) -> int:
    return rot_next(arc[d])


def _strand_over_at(over, dart: int) -> bool:
    """Is the strand passing through ``dart``'s port the over strand?"""
    return over[dart >> 2] == (dart & 1 == 0)


def _is_monogon(arc, d: int) -> bool:
    return arc[d] == rot_prev(d)


def _bigon_partner(arc, over, d: int) -> int | None:
    """The other bigon dart if ``d`` opens a removable bigon, else None."""
    e = _face_next(arc, d)
    if e == d or _face_next(arc, e) != d:
        return None
    if (d >> 2) == (e >> 2):
        return None
    # the strand along the arc departing at d must be over at both
    # crossings or under at both
    if _strand_over_at(over, d) != _strand_over_at(over, rot_prev(e)):
        return None
    return e


def _trigon_slider_ok(arc, over, t0: int) -> tuple[int, int] | None:
    """Validate an R3 site; returns (t1, t2) when the slide applies."""
    t1 = _face_next(arc, t0)
    t2 = _face_next(arc, t1)
    if t1 == t0 or t2 == t0 or _face_next(arc, t2) != t0:
        return None
    c0, c1, c2 = t0 >> 2, t1 >> 2, t2 >> 2
    if c0 == c1 or c1 == c2 or c0 == c2:
        return None
    if _strand_over_at(over, t0) != _strand_over_at(over, rot_prev(t1)):
        return None
    return t1, t2


# ---------------------------------------------------------------------------
# Application on raw arc tables
# ---------------------------------------------------------------------------


def _smooth_out(arc, over, removed: set[int]) -> tuple[list[int], list[bool]]:
    """Delete crossings, letting both their strands run straight through."""
    keep = [c for c in range(len(over)) if c not in removed]
    relabel = {c: i for i, c in enumerate(keep)}
    new_arc = [0] * (4 * len(keep))
    for c in keep:
        for p in range(4):
            w = arc[4 * c + p]
            while (w >> 2) in removed:
                w = arc[opposite(w)]
            new_arc[4 * relabel[c] + p] = 4 * relabel[w >> 2] + (w & 3)
    return new_arc, [over[c] for c in keep]


def _apply_r1up(d: PlanarDiagram, s: R1Up) -> PlanarDiagram:
    n = d.crossings
    base = 4 * n
    arc = list(d.arc) + [0, 0, 0, 0]
    if n == 0:
        if s.dart != -1:
            raise InvalidSiteError("trivial diagram has no darts")
        if s.side == 0:
            pairs = ((base + 2, base + 1), (base + 3, base + 0))
        else:
            pairs = ((base + 2, base + 3), (base + 1, base + 0))
    else:
        if not 0 <= s.dart < base:
            raise InvalidSiteError("kink dart out of range")
        e = d.arc[s.dart]
        if s.side == 0:
            pairs = ((s.dart, base + 0), (base + 2, base + 1), (base + 3, e))
        else:
            pairs = ((s.dart, base + 0), (base + 2, base + 3), (base + 1, e))
    for u, v in pairs:
        arc[u] = v
        arc[v] = u
    return PlanarDiagram(arc, d.over + (s.over_kink,))


def _apply_r1down(d: PlanarDiagram, s: R1Down) -> PlanarDiagram:
    if d.is_trivial or not 0 <= s.dart < 4 * d.crossings:
        raise InvalidSiteError("monogon dart out of range")
    if not _is_monogon(d.arc, s.dart):
        raise InvalidSiteError("face at dart is not a monogon")
    arc, over = _smooth_out(d.arc, d.over, {s.dart >> 2})
    return PlanarDiagram(arc, over)


_TRIVIAL_SELF_PUSH = (1, 0, 4, 7, 2, 6, 5, 3)


def _apply_r2up(d: PlanarDiagram, s: R2Up) -> PlanarDiagram:
    n = d.crossings
    if d.is_trivial:
        if s.dart1 != -1 or s.dart2 != -1:
            raise InvalidSiteError("trivial diagram has no darts")
        return PlanarDiagram(
            _TRIVIAL_SELF_PUSH, (s.pushed_over, s.pushed_over)
        )
    if not (0 <= s.dart1 < 4 * n and 0 <= s.dart2 < 4 * n):
        raise InvalidSiteError("push darts out of range")
    face = {s.dart1}
    w = _face_next(d.arc, s.dart1)
    while w != s.dart1:
        face.add(w)
        w = _face_next(d.arc, w)
    if s.dart2 not in face:
        raise InvalidSiteError("push darts do not share a face")
    a, b = n, n + 1
    a0, a1, a2, a3 = (4 * a + p for p in range(4))
    b0, b1, b2, b3 = (4 * b + p for p in range(4))
    arc = list(d.arc) + [0] * 8
    d1, d2 = s.dart1, s.dart2
    e1, e2 = d.arc[d1], d.arc[d2]
    if d1 == d2:
        pairs = ((d1, a0), (a2, b0), (b2, a3), (a1, b1), (b3, e1))
    elif e1 == d2:
        pairs = ((d1, a0), (a2, b0), (b2, a1), (a3, b3), (b1, d2))
    else:
        pairs = ((d1, a0), (a2, b0), (b2, e1), (d2, b1), (b3, a3), (a1, e2))
    for u, v in pairs:
        arc[u] = v
        arc[v] = u
    return PlanarDiagram(arc, d.over + (s.pushed_over, s.pushed_over))


def _apply_r2down(d: PlanarDiagram, s: R2Down) -> PlanarDiagram:
    if d.is_trivial or not 0 <= s.dart < 4 * d.crossings:
        raise InvalidSiteError("bigon dart out of range")
    e = _bigon_partner(d.arc, d.over, s.dart)
    if e is None:
        raise InvalidSiteError("face at dart is not a removable bigon")
    arc, over = _smooth_out(d.arc, d.over, {s.dart >> 2, e >> 2})
    return PlanarDiagram(arc, over)


def _apply_r3(d: PlanarDiagram, s: R3) -> PlanarDiagram:
    if d.is_trivial or not 0 <= s.dart < 4 * d.crossings:
        raise InvalidSiteError("trigon dart out of range")
    rest = _trigon_slider_ok(d.arc, d.over, s.dart)
    if rest is None:
        raise InvalidSiteError("face at dart is not a slidable trigon")
    t0, (t1, t2) = s.dart, rest
    c0, p0 = t0 >> 2, t0 & 3
    c1, p1 = t1 >> 2, t1 & 3
    c2, p2 = t2 >> 2, t2 & 3

    def dart(c, p):
        return 4 * c + (p & 3)

    stubs = (
        dart(c0, p0 + 2),
        dart(c0, p0 + 1),
        dart(c1, p1 + 1),
        dart(c1, p1 + 2),
        dart(c2, p2 + 1),
        dart(c2, p2 + 2),
    )
    landing = (
        dart(c1, p1 + 1),
        dart(c2, p2),
        dart(c0, p0 + 2),
        dart(c2, p2 - 1),
        dart(c1, p1 + 2),
        dart(c0, p0 + 1),
    )
    slot = {u: i for i, u in enumerate(stubs)}
    arc = list(d.arc)
    pairs = [
        (dart(c0, p0), dart(c1, p1 - 1)),
        (dart(c2, p2 + 2), dart(c0, p0 + 3)),
        (dart(c2, p2 + 1), dart(c1, p1)),
    ]
    for i, u in enumerate(stubs):
        partner = d.arc[u]
        j = slot.get(partner)
        if j is None:
            pairs.append((landing[i], partner))
        elif i < j:
            pairs.append((landing[i], landing[j]))
    for u, v in pairs:
        arc[u] = v
        arc[v] = u
    return PlanarDiagram(arc, d.over)


_APPLY = {
    R1Up: _apply_r1up,
    R1Down: _apply_r1down,
    R2Up: _apply_r2up,
    R2Down: _apply_r2down,
    R3: _apply_r3,
}


def apply_move(d: PlanarDiagram, move: Move) -> PlanarDiagram:
    """Apply a validated move; raises InvalidSiteError when it does not fit."""
    return _APPLY[type(move.site)](d, move.site)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def enumerate_moves(d: PlanarDiagram, cap: int) -> list[Move]:
    """Every move on ``d`` whose result stays within ``cap`` crossings.

    The same resulting diagram may be listed under several sites; graph
    traversals deduplicate by canonical code.
    """
    n = d.crossings
    if cap < n:
        raise ValueError("cap below the current crossing number")
    moves: list[Move] = []
    if n == 0:
        if cap >= 1:
            for side in (0, 1):
                for over_kink in (False, True):
                    moves.append(Move(R1Up(-1, side, over_kink)))
        if cap >= 2:
            # the circle pushed across itself: the one R2 available on D0
            for pushed_over in (False, True):
                moves.append(Move(R2Up(-1, -1, pushed_over)))
        return moves
    arc, over = d.arc, d.over
    faces = trace_faces(arc)
    for cycle in faces:
        k = len(cycle)
        if k == 1:
            moves.append(Move(R1Down(cycle[0])))
        elif k == 2:
            if _bigon_partner(arc, over, cycle[0]) is not None:
                moves.append(Move(R2Down(cycle[0])))
        elif k == 3:
            for t in cycle:
                if _trigon_slider_ok(arc, over, t) is not None:
                    moves.append(Move(R3(t)))
    if n + 1 <= cap:
        for dart in range(4 * n):
            if dart < arc[dart]:
                for side in (0, 1):
                    for over_kink in (False, True):
                        moves.append(Move(R1Up(dart, side, over_kink)))
    if n + 2 <= cap:
        for cycle in faces:
            for d1 in cycle:
                for d2 in cycle:
                    for pushed_over in (False, True):
                        moves.append(Move(R2Up(d1, d2, pushed_over)))
    return moves


# ---------------------------------------------------------------------------
# Inversion
# ---------------------------------------------------------------------------


def inverse_move(d_before: PlanarDiagram, move: Move, d_after: PlanarDiagram) -> Move:
    """A move on ``d_after`` undoing ``move``, up to canonical equality."""
    s = move.site
    if isinstance(s, R1Up):
        m = d_before.crossings
        return Move(R1Down(4 * m + (2 if s.side == 0 else 3)))
    if isinstance(s, R2Up):
        a = d_before.crossings
        return Move(R2Down(4 * a + (2 if s.dart1 == s.dart2 >= 0 else 3)))
    if isinstance(s, R3):
        return Move(R3(s.dart))
    target = d_before.canonical_code()
    if isinstance(s, R1Down):
        for dart in range(4 * d_after.crossings):
            if d_after.is_trivial:
                break
            if dart > d_after.arc[dart]:
                continue
            for side in (0, 1):
                for over_kink in (False, True):
                    cand = Move(R1Up(dart, side, over_kink))
                    if apply_move(d_after, cand).canonical_code() == target:
                        return cand
        if d_after.is_trivial:
            for side in (0, 1):
                for over_kink in (False, True):
                    cand = Move(R1Up(-1, side, over_kink))
                    if apply_move(d_after, cand).canonical_code() == target:
                        return cand
        raise InvalidSiteError("no kink addition recreates the diagram")
    if isinstance(s, R2Down):
        for m in enumerate_moves(d_after, d_after.crossings + 2):
            if isinstance(m.site, R2Up):
                if apply_move(d_after, m).canonical_code() == target:
                    return m
        raise InvalidSiteError("no strand push recreates the diagram")
    raise InvalidSiteError(f"unknown move {move!r}")
