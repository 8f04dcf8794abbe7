"""Triangle meshes and the topology measurements used for label checking."""

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParameterError


@dataclass(frozen=True)
class TriangleMesh:
    """An indexed triangle mesh.

    ``vertices`` is an (n, 3) float array, ``triangles`` an (m, 3) int array
    of vertex indices with consistent winding.  Meshes are immutable; all
    deformations return new instances.
    """

    vertices: np.ndarray
    triangles: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.vertices, dtype=np.float64))
        t = np.ascontiguousarray(np.asarray(self.triangles, dtype=np.int64))
        if v.ndim != 2 or v.shape[1] != 3:
            raise InvalidParameterError(f"vertices must be (n, 3), got {v.shape}")
        if t.ndim != 2 or t.shape[1] != 3:
            raise InvalidParameterError(f"triangles must be (m, 3), got {t.shape}")
        if t.size and (t.min() < 0 or t.max() >= len(v)):
            raise InvalidParameterError("triangle index out of range")
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", t)
        v.setflags(write=False)
        t.setflags(write=False)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def bounds(self):
        """(min, max) corners of the axis-aligned bounding box."""
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def triangle_areas(self) -> np.ndarray:
        a = self.vertices[self.triangles[:, 0]]
        b = self.vertices[self.triangles[:, 1]]
        c = self.vertices[self.triangles[:, 2]]
        return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)


def unique_edges(mesh: TriangleMesh, return_counts: bool = False):
    """Undirected edges of the mesh, optionally with incidence counts."""
    t = mesh.triangles
    e = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
    e = np.sort(e, axis=1)
    if return_counts:
        return np.unique(e, axis=0, return_counts=True)
    return np.unique(e, axis=0)


def euler_characteristic(mesh: TriangleMesh) -> int:
    """chi = V - E + F with E counted as unique undirected edges.

    Only vertices referenced by at least one triangle are counted, so
    unreferenced padding vertices cannot skew the result.
    """
    if mesh.n_triangles == 0:
        return mesh.n_vertices
    used = np.unique(mesh.triangles)
    e = unique_edges(mesh)
    return int(len(used) - len(e) + mesh.n_triangles)


def connected_components(mesh: TriangleMesh) -> int:
    """Number of connected components of the mesh's edge graph."""
    if mesh.n_triangles == 0:
        return mesh.n_vertices
    used = np.unique(mesh.triangles)
    index = {int(v): i for i, v in enumerate(used)}
    parent = list(range(len(used)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in unique_edges(mesh):
        ra, rb = find(index[int(a)]), find(index[int(b)])
        if ra != rb:
            parent[ra] = rb
    return len({find(i) for i in range(len(used))})


def is_manifold(mesh: TriangleMesh) -> bool:
    """True iff every edge has exactly 2 incident triangles and every
    vertex link is a single closed cycle."""
    if mesh.n_triangles == 0:
        return False
    edges, counts = unique_edges(mesh, return_counts=True)
    if not np.all(counts == 2):
        return False
    # Vertex-link check: for each vertex, its incident triangles contribute
    # opposite edges; the link must be one cycle with all degrees == 2.
    link: dict = {}
    for a, b, c in mesh.triangles:
        for v, p, q in ((a, b, c), (b, a, c), (c, a, b)):
            link.setdefault(int(v), []).append((int(p), int(q)))
    for v, segs in link.items():
        adj: dict = {}
        for p, q in segs:
            adj.setdefault(p, []).append(q)
            adj.setdefault(q, []).append(p)
        if any(len(nb) != 2 for nb in adj.values()):
            return False
        # single cycle: walk from any node and require full coverage
        start = next(iter(adj))
        prev, cur = None, start
        seen = 0
        while True:
            seen += 1
            nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
            prev, cur = cur, nxt
            if cur == start:
                break
            if seen > len(adj):
                return False
        if seen != len(adj):
            return False
    return True


def genus(mesh: TriangleMesh) -> int:
    """Genus of a closed connected orientable mesh, from 2 - chi = 2g."""
    chi = euler_characteristic(mesh)
    if (2 - chi) % 2 != 0:
        raise InvalidParameterError(f"chi={chi} is not of the form 2 - 2g")
    return (2 - chi) // 2


def merge_duplicate_vertices(vertices, triangles, tol: float = 1e-6) -> TriangleMesh:
    """Weld vertices closer than ``tol`` by spatial hashing; drops degenerate
    triangles produced by the weld."""
    v = np.asarray(vertices, dtype=np.float64)
    t = np.asarray(triangles, dtype=np.int64)
    keys = np.round(v / tol).astype(np.int64)
    _, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    new_v = v[first]
    new_t = inverse[t]
    ok = (
        (new_t[:, 0] != new_t[:, 1])
        & (new_t[:, 1] != new_t[:, 2])
        & (new_t[:, 0] != new_t[:, 2])
    )
    mesh = TriangleMesh(new_v, new_t[ok])
    return drop_unreferenced_vertices(mesh)


def drop_unreferenced_vertices(mesh: TriangleMesh) -> TriangleMesh:
    used = np.unique(mesh.triangles)
    remap = -np.ones(mesh.n_vertices, dtype=np.int64)
    remap[used] = np.arange(len(used))
    return TriangleMesh(mesh.vertices[used], remap[mesh.triangles])


def concatenate_meshes(meshes) -> TriangleMesh:
    """Disjoint union of meshes in a single vertex/triangle buffer."""
    vs, ts, offset = [], [], 0
    for m in meshes:
        vs.append(m.vertices)
        ts.append(m.triangles + offset)
        offset += m.n_vertices
    return TriangleMesh(np.concatenate(vs), np.concatenate(ts))


# ---------------------------------------------------------------------------
# Mesh file formats: ASCII OFF, and OBJ restricted to vertices + faces.

def save_off(mesh: TriangleMesh, path) -> None:
    with open(path, "w") as fh:
        fh.write("OFF\n")
        fh.write(f"{mesh.n_vertices} {mesh.n_triangles} 0\n")
        for x, y, z in mesh.vertices:
            fh.write(f"{float(x)!r} {float(y)!r} {float(z)!r}\n")
        for a, b, c in mesh.triangles:
            fh.write(f"3 {a} {b} {c}\n")


def load_off(path) -> TriangleMesh:
    with open(path) as fh:
        tokens = fh.read().split()
    if not tokens or tokens[0] != "OFF":
        raise InvalidParameterError(f"{path} is not an OFF file")
    nv, nf = int(tokens[1]), int(tokens[2])
    pos = 4
    verts = np.array(tokens[pos : pos + 3 * nv], dtype=np.float64).reshape(nv, 3)
    pos += 3 * nv
    tris = np.empty((nf, 3), dtype=np.int64)
    for i in range(nf):
        k = int(tokens[pos])
        if k != 3:
            raise InvalidParameterError("only triangle faces are supported")
        tris[i] = [int(tokens[pos + 1]), int(tokens[pos + 2]), int(tokens[pos + 3])]
        pos += 4
    return TriangleMesh(verts, tris)


def save_obj(mesh: TriangleMesh, path) -> None:
    with open(path, "w") as fh:
        for x, y, z in mesh.vertices:
            fh.write(f"v {float(x)!r} {float(y)!r} {float(z)!r}\n")
        for a, b, c in mesh.triangles:
            fh.write(f"f {a + 1} {b + 1} {c + 1}\n")


def load_obj(path) -> TriangleMesh:
    verts, tris = [], []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(parts[1]), float(parts[2]), float(parts[3])])
            elif parts[0] == "f":
                idx = [int(p.split("/")[0]) - 1 for p in parts[1:]]
                if len(idx) != 3:
                    raise InvalidParameterError("only triangle faces are supported")
                tris.append(idx)
    return TriangleMesh(np.array(verts), np.array(tris))
