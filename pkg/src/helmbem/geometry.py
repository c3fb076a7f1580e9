"""Closed polygonal boundary meshes and segment/basis bookkeeping.

A mesh is an ordered list of nodes; segment n joins node n to node n+1
(cyclically), so the boundary is always a closed loop.  Nodes are stored
counterclockwise; clockwise input is silently reversed and flagged.
Segment normals follow n = (y_B - y_A, x_A - x_B) / l and point outward
for counterclockwise node order.
"""
from __future__ import annotations

import enum
import io
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Mesh",
    "MeshFormatError",
    "NodeEnd",
    "PairTag",
    "SegmentGeom",
    "SegmentPairClass",
    "adjacent_angle",
    "basis_curl",
    "classify_pair",
    "load_mesh",
    "load_mesh_file",
    "loads_mesh",
    "regular_polygon",
]

MESH_MAGIC = "helmbem-mesh 1"


class MeshFormatError(ValueError):
    """Raised for malformed mesh documents; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NodeEnd(enum.Enum):
    """Which end of a segment a mesh node sits at (A = start, B = end)."""

    A = "A"
    B = "B"


class PairTag(enum.Enum):
    COINCIDENT = "coincident"
    ADJACENT = "adjacent"
    DISJOINT = "disjoint"


@dataclass(frozen=True)
class SegmentPairClass:
    """Classification of an ordered segment pair (m, n).

    For adjacent pairs, m_end/n_end name the ends that meet at the shared
    vertex.
    """

    tag: PairTag
    m_end: NodeEnd | None = None
    n_end: NodeEnd | None = None


@dataclass(frozen=True)
class SegmentGeom:
    a: np.ndarray
    b: np.ndarray
    length: float
    normal: np.ndarray


@dataclass(frozen=True)
class Mesh:
    """Validated closed polygonal mesh.

    Attributes
    ----------
    nodes : (N, 2) float array, counterclockwise.
    orientation_corrected : True if the input was clockwise and got reversed.
    """

    nodes: np.ndarray
    orientation_corrected: bool = False
    seg_a: np.ndarray = field(init=False, repr=False)
    seg_b: np.ndarray = field(init=False, repr=False)
    lengths: np.ndarray = field(init=False, repr=False)
    normals: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        a = nodes
        b = np.roll(nodes, -1, axis=0)
        d = b - a
        lengths = np.hypot(d[:, 0], d[:, 1])
        normals = np.stack([d[:, 1], -d[:, 0]], axis=1) / lengths[:, None]
        for name, val in (("nodes", nodes), ("seg_a", a), ("seg_b", b),
                          ("lengths", lengths), ("normals", normals)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_segments(self) -> int:
        return len(self.nodes)

    def segment(self, n: int) -> SegmentGeom:
        return SegmentGeom(a=self.seg_a[n], b=self.seg_b[n],
                           length=float(self.lengths[n]), normal=self.normals[n])

    def segments_of_node(self, i: int):
        """The two (segment, NodeEnd) incidences of node i.

        Node i is the B end of segment i-1 and the A end of segment i.
        """
        N = self.n_segments
        return ((i - 1) % N, NodeEnd.B), (i, NodeEnd.A)

    def diameter(self) -> float:
        lo = self.nodes.min(axis=0)
        hi = self.nodes.max(axis=0)
        return float(np.hypot(*(hi - lo)))


def _signed_area(nodes: np.ndarray) -> float:
    x, y = nodes[:, 0], nodes[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    return 0.5 * float(np.sum(x * yn - xn * y))


def _segments_properly_intersect(p1, p2, q1, q2) -> bool:
    # Proper crossing test for two closed segments that share no endpoint.
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
        return True

    def on_segment(a, b, c):
        return (min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
                and min(a[1], b[1]) <= c[1] <= max(a[1], b[1]))

    if d1 == 0 and on_segment(q1, q2, p1):
        return True
    if d2 == 0 and on_segment(q1, q2, p2):
        return True
    if d3 == 0 and on_segment(p1, p2, q1):
        return True
    if d4 == 0 and on_segment(p1, p2, q2):
        return True
    return False


def _validate(nodes: np.ndarray):
    if nodes.ndim != 2 or nodes.shape[1] != 2:
        raise ValueError(f"nodes must have shape (N, 2), got {nodes.shape}")
    if len(nodes) < 3:
        raise ValueError(f"a closed mesh needs at least 3 nodes, got {len(nodes)}")
    if not np.all(np.isfinite(nodes)):
        raise ValueError("non-finite node coordinates")
    d = np.roll(nodes, -1, axis=0) - nodes
    lengths = np.hypot(d[:, 0], d[:, 1])
    scale = max(np.max(np.abs(nodes)), 1.0)
    degenerate = np.nonzero(lengths <= 1e-12 * scale)[0]
    if degenerate.size:
        n = int(degenerate[0])
        raise ValueError(f"degenerate segment {n}: nodes {n} and "
                         f"{(n + 1) % len(nodes)} coincide")
    N = len(nodes)
    for m in range(N):
        for n in range(m + 1, N):
            if n == m or (m + 1) % N == n or (n + 1) % N == m:
                continue  # shared-endpoint pairs may touch
            if _segments_properly_intersect(nodes[m], nodes[(m + 1) % N],
                                            nodes[n], nodes[(n + 1) % N]):
                raise ValueError(f"self-intersecting boundary: segments {m} and {n}")


def make_mesh(nodes) -> Mesh:
    """Validate node list and build a Mesh, reorienting to CCW if needed."""
    nodes = np.array(nodes, dtype=float)
    _validate(nodes)
    corrected = False
    if _signed_area(nodes) < 0:
        nodes = nodes[::-1].copy()
        corrected = True
    return Mesh(nodes=nodes, orientation_corrected=corrected)


def loads_mesh(text: str) -> Mesh:
    """Parse the line-oriented mesh format.

    Format::

        helmbem-mesh 1
        nodes <N>
        <x> <y>        (N lines)

    '#' starts a comment; blank lines are ignored.
    """
    lines = text.splitlines()
    significant = []  # (lineno, payload)
    for no, raw in enumerate(lines, start=1):
        payload = raw.split("#", 1)[0].strip()
        if payload:
            significant.append((no, payload))
    if not significant:
        raise MeshFormatError("empty document")
    no, header = significant[0]
    if header != MESH_MAGIC:
        raise MeshFormatError(f"expected header {MESH_MAGIC!r}, got {header!r}", no)
    if len(significant) < 2:
        raise MeshFormatError("missing 'nodes <N>' line", no)
    no, count_line = significant[1]
    parts = count_line.split()
    if len(parts) != 2 or parts[0] != "nodes":
        raise MeshFormatError(f"expected 'nodes <N>', got {count_line!r}", no)
    try:
        n = int(parts[1])
    except ValueError:
        raise MeshFormatError(f"bad node count {parts[1]!r}", no) from None
    rows = significant[2:]
    if len(rows) != n:
        raise MeshFormatError(f"expected {n} node lines, found {len(rows)}")
    nodes = np.empty((n, 2), dtype=float)
    for idx, (no, payload) in enumerate(rows):
        parts = payload.split()
        if len(parts) != 2:
            raise MeshFormatError(f"expected '<x> <y>', got {payload!r}", no)
        try:
            nodes[idx] = [float(parts[0]), float(parts[1])]
        except ValueError:
            raise MeshFormatError(f"bad coordinate in {payload!r}", no) from None
    try:
        return make_mesh(nodes)
    except ValueError as exc:
        raise MeshFormatError(str(exc)) from exc


def load_mesh(source) -> Mesh:
    """Load a mesh from a path, file object, or document string."""
    if hasattr(source, "read"):
        return loads_mesh(source.read())
    text = str(source)
    if "\n" in text or text.strip().startswith(MESH_MAGIC):
        return loads_mesh(text)
    with io.open(text, "r", encoding="utf-8") as fh:
        return loads_mesh(fh.read())


def load_mesh_file(path) -> Mesh:
    with io.open(path, "r", encoding="utf-8") as fh:
        return loads_mesh(fh.read())


def regular_polygon(n_sides: int, edge_length: float = 1.0, center=(0.0, 0.0)) -> Mesh:
    """Regular n-gon with the given edge length, counterclockwise."""
    if n_sides < 3:
        raise ValueError("need at least 3 sides")
    circumradius = edge_length / (2.0 * np.sin(np.pi / n_sides))
    ang = np.linspace(0.0, 2.0 * np.pi, n_sides, endpoint=False)
    nodes = np.stack([center[0] + circumradius * np.cos(ang),
                      center[1] + circumradius * np.sin(ang)], axis=1)
    return make_mesh(nodes)


def classify_pair(mesh: Mesh, m: int, n: int) -> SegmentPairClass:
    """Coincident, adjacent (with the meeting ends), or disjoint."""
    N = mesh.n_segments
    if not (0 <= m < N and 0 <= n < N):
        raise IndexError(f"segment index out of range: ({m}, {n})")
    if m == n:
        return SegmentPairClass(PairTag.COINCIDENT)
    if (m + 1) % N == n:
        return SegmentPairClass(PairTag.ADJACENT, m_end=NodeEnd.B, n_end=NodeEnd.A)
    if (n + 1) % N == m:
        return SegmentPairClass(PairTag.ADJACENT, m_end=NodeEnd.A, n_end=NodeEnd.B)
    return SegmentPairClass(PairTag.DISJOINT)


def adjacent_angle(mesh: Mesh, m: int, n: int) -> float:
    """Corner angle between adjacent segments, in (0, 2*pi).

    Measured between the two direction vectors pointing away from the shared
    vertex; equals the interior angle at the vertex for a counterclockwise
    simple polygon (pi for collinear continuation, > pi at reflex corners).
    """
    cls = classify_pair(mesh, m, n)
    if cls.tag is not PairTag.ADJACENT:
        raise ValueError(f"segments ({m}, {n}) are not adjacent")
    if cls.m_end is NodeEnd.B:
        incoming, outgoing = m, n
    else:
        incoming, outgoing = n, m
    vertex = mesh.seg_b[incoming]
    d_in = mesh.seg_a[incoming] - vertex
    d_out = mesh.seg_b[outgoing] - vertex
    ang = np.arctan2(d_in[1], d_in[0]) - np.arctan2(d_out[1], d_out[0])
    ang = float(ang % (2.0 * np.pi))
    if ang == 0.0:
        ang = 2.0 * np.pi  # fully folded-back pair; excluded by validation
    return ang


def basis_curl(seg: SegmentGeom, node_at: NodeEnd) -> float:
    """Surface curl of the linear hat restriction: -1/l at A, +1/l at B."""
    return (-1.0 if node_at is NodeEnd.A else 1.0) / seg.length
