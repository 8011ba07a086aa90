"""2D obstacle world: rectangular bounds, circle and wall-segment obstacles.

Coordinates in meters, x right / y up, headings in radians CCW from +x.
Bounds clamp motion but do not echo; only obstacles reflect ultrasound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from gazebot.errors import InputError


@dataclass(frozen=True)
class Circle:
    cx: float
    cy: float
    r: float


@dataclass(frozen=True)
class Segment:
    x1: float
    y1: float
    x2: float
    y2: float


def _point_segment_distance(px, py, seg: Segment) -> float:
    vx, vy = seg.x2 - seg.x1, seg.y2 - seg.y1
    wx, wy = px - seg.x1, py - seg.y1
    vv = vx * vx + vy * vy
    t = 0.0 if vv == 0 else max(0.0, min(1.0, (wx * vx + wy * vy) / vv))
    dx, dy = px - (seg.x1 + t * vx), py - (seg.y1 + t * vy)
    return math.hypot(dx, dy)


def _segments_intersect(ax, ay, bx, by, cx, cy, dx, dy) -> bool:
    def orient(ox, oy, px, py, qx, qy):
        return (px - ox) * (qy - oy) - (py - oy) * (qx - ox)

    d1 = orient(cx, cy, dx, dy, ax, ay)
    d2 = orient(cx, cy, dx, dy, bx, by)
    d3 = orient(ax, ay, bx, by, cx, cy)
    d4 = orient(ax, ay, bx, by, dx, dy)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
        return True
    return False


@dataclass
class World:
    bounds: tuple[float, float, float, float]  # xmin, ymin, xmax, ymax
    circles: list[Circle]
    segments: list[Segment]

    def __post_init__(self):
        xmin, ymin, xmax, ymax = self.bounds
        if xmax <= xmin or ymax <= ymin:
            raise InputError(f"degenerate bounds {self.bounds}")

    def in_bounds(self, x: float, y: float) -> bool:
        xmin, ymin, xmax, ymax = self.bounds
        return xmin <= x <= xmax and ymin <= y <= ymax

    def inside_obstacle(self, x: float, y: float) -> bool:
        return any(math.hypot(x - c.cx, y - c.cy) < c.r for c in self.circles)

    def nearest_obstacle_distance(self, x: float, y: float) -> float:
        """Distance to the closest obstacle surface in any direction."""
        best = math.inf
        for c in self.circles:
            best = min(best, max(0.0, math.hypot(x - c.cx, y - c.cy) - c.r))
        for s in self.segments:
            best = min(best, _point_segment_distance(x, y, s))
        return best

    # -- ray cast ---------------------------------------------------------

    def raycast(self, x: float, y: float, heading: float) -> float:
        """Distance to the nearest obstacle hit along the heading ray, inf if none."""
        dx, dy = math.cos(heading), math.sin(heading)
        best = math.inf
        for c in self.circles:
            ox, oy = c.cx - x, c.cy - y
            b = ox * dx + oy * dy
            disc = b * b - (ox * ox + oy * oy - c.r * c.r)
            if disc < 0:
                continue
            root = math.sqrt(disc)
            for t in (b - root, b + root):
                if t >= 0:
                    best = min(best, t)
                    break
        for s in self.segments:
            sx, sy = s.x2 - s.x1, s.y2 - s.y1
            denom = dx * sy - dy * sx
            if abs(denom) < 1e-12:
                continue
            qx, qy = s.x1 - x, s.y1 - y
            t = (qx * sy - qy * sx) / denom
            u = (qx * dy - qy * dx) / denom
            if t >= 0 and 0.0 <= u <= 1.0:
                best = min(best, t)
        return best

    # -- forward half-plane beam -------------------------------------------

    def nearest_in_beam(self, x: float, y: float, heading: float) -> float:
        """First-echo distance: nearest obstacle surface point in the front
        half-plane. An obstacle strictly behind the transducer is silent."""
        dx, dy = math.cos(heading), math.sin(heading)
        px, py = -dy, dx  # lateral axis
        best = math.inf

        for c in self.circles:
            ox, oy = c.cx - x, c.cy - y
            fwd = ox * dx + oy * dy
            lat = ox * px + oy * py
            dc = math.hypot(fwd, lat)
            if dc <= c.r:
                return 0.0
            if fwd * (1.0 - c.r / dc) >= 0.0:
                best = min(best, dc - c.r)
            elif abs(fwd) <= c.r:
                edge = math.sqrt(c.r * c.r - fwd * fwd)
                for lat_pt in (lat - edge, lat + edge):
                    best = min(best, abs(lat_pt))

        for s in self.segments:
            pts = []
            for ex, ey in ((s.x1, s.y1), (s.x2, s.y2)):
                pts.append(((ex - x) * dx + (ey - y) * dy, (ex - x) * px + (ey - y) * py))
            (f1, l1), (f2, l2) = pts
            if f1 < 0 and f2 < 0:
                continue
            if f1 < 0 or f2 < 0:
                # clip at the half-plane boundary
                t = f1 / (f1 - f2)
                cxp = (f1 + t * (f2 - f1), l1 + t * (l2 - l1))
                if f1 < 0:
                    (f1, l1) = cxp
                else:
                    (f2, l2) = cxp
            seg = Segment(f1, l1, f2, l2)
            best = min(best, _point_segment_distance(0.0, 0.0, seg))
        return best

    # -- motion -------------------------------------------------------------

    def motion_blocked(self, x0, y0, x1, y1) -> bool:
        """True when moving from (x0, y0) to (x1, y1) leaves bounds or hits
        an obstacle."""
        if not self.in_bounds(x1, y1):
            return True
        if self.inside_obstacle(x1, y1):
            return True
        for s in self.segments:
            if _segments_intersect(x0, y0, x1, y1, s.x1, s.y1, s.x2, s.y2):
                return True
        return False
