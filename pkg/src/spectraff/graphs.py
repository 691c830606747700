"""Dense adjacency storage, spectra, and (n, d, lambda) certification.

Loop convention: a loop is a 1 on the diagonal and contributes 1 to the row
sum, i.e. the degree counts a loop once. This makes the constructed families
exactly regular at their claimed valencies.

Spectra come from a dense symmetric eigendecomposition (LAPACK via numpy).
An independent power-iteration bound on the second eigenvalue is provided
for cross-checking; the two must agree within tolerance.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .config import SPECTRAL_TOL, check_vertex_cap


class Graph:
    """Symmetric 0/1 adjacency with loops permitted on the diagonal."""

    def __init__(self, adjacency: np.ndarray, vertex_labels=None, meta: Optional[dict] = None):
        adjacency = np.asarray(adjacency, dtype=np.uint8)
        if adjacency.ndim != 2 or adjacency.shape[0] != adjacency.shape[1]:
            raise ValueError("adjacency must be square")
        if not np.array_equal(adjacency, adjacency.T):
            raise ValueError("adjacency must be symmetric")
        if adjacency.max(initial=0) > 1:
            raise ValueError("adjacency entries must be 0/1")
        self.adjacency = adjacency
        self.adjacency.setflags(write=False)
        self.n_vertices = int(adjacency.shape[0])
        self.vertex_labels = vertex_labels
        self.meta = dict(meta or {})
        self._spectrum: Optional[np.ndarray] = None

    # -- basic counts -----------------------------------------------------------

    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1, dtype=np.int64)

    def loop_count(self) -> int:
        return int(np.trace(self.adjacency, dtype=np.int64))

    def edge_count_total(self) -> int:
        """Unordered edges; a loop counts once."""
        a = int(self.adjacency.sum(dtype=np.int64))
        loops = self.loop_count()
        return (a - loops) // 2 + loops

    def is_regular(self) -> bool:
        deg = self.degrees()
        return bool(deg.size == 0 or (deg == deg[0]).all())

    def without_loops(self) -> "Graph":
        a = self.adjacency.copy()
        np.fill_diagonal(a, 0)
        meta = dict(self.meta, loops="stripped")
        return Graph(a, self.vertex_labels, meta)

    def edges(self):
        """Unordered edge list (u <= v), loops included, sorted."""
        u, v = np.nonzero(np.triu(self.adjacency))
        return list(zip(u.tolist(), v.tolist()))

    def fingerprint(self) -> str:
        return hashlib.sha1(self.adjacency.tobytes()).hexdigest()[:16]

    def __repr__(self) -> str:
        return f"Graph(n={self.n_vertices}, edges={self.edge_count_total()})"


class ColoredGraph:
    """Edge coloring of a vertex set: each unordered pair (loops included)
    either carries one color or none; the color classes are edge-disjoint
    graphs by construction."""

    def __init__(self, color_index: np.ndarray, color_values: Sequence,
                 vertex_labels=None, meta: Optional[dict] = None):
        color_index = np.asarray(color_index, dtype=np.int16)
        if color_index.ndim != 2 or color_index.shape[0] != color_index.shape[1]:
            raise ValueError("color matrix must be square")
        if not np.array_equal(color_index, color_index.T):
            raise ValueError("color matrix must be symmetric")
        if color_index.max(initial=-1) >= len(color_values):
            raise ValueError("color index out of range")
        self.color_index = color_index
        self.color_index.setflags(write=False)
        self.color_values = list(color_values)
        self.n_vertices = int(color_index.shape[0])
        self.vertex_labels = vertex_labels
        self.meta = dict(meta or {})

    def colors(self) -> list:
        return list(self.color_values)

    def color_position(self, color) -> int:
        try:
            return self.color_values.index(color)
        except ValueError:
            raise ValueError(f"unknown color {color!r}") from None

    def color_class(self, color) -> Graph:
        idx = self.color_position(color)
        adjacency = (self.color_index == idx).astype(np.uint8)
        meta = dict(self.meta, color=_color_repr(color))
        return Graph(adjacency, self.vertex_labels, meta)

    def class_sizes(self) -> dict:
        """Unordered edge counts per color (loops count once)."""
        out = {}
        for idx, color in enumerate(self.color_values):
            mask = self.color_index == idx
            total = int(mask.sum())
            loops = int(np.diag(mask).sum())
            out[color] = (total - loops) // 2 + loops
        return out

    def colored_edge_total(self) -> int:
        return sum(self.class_sizes().values())

    def edges(self):
        """(u, v, color) with u <= v, loops included, sorted."""
        ci = np.triu(self.color_index + 1) - 1  # keep -1 as "no color"
        u, v = np.nonzero(ci >= 0)
        return [(int(a), int(b), self.color_values[int(ci[a, b])]) for a, b in zip(u, v)]

    def __repr__(self) -> str:
        return f"ColoredGraph(n={self.n_vertices}, colors={len(self.color_values)})"


def _color_repr(color) -> str:
    literal = getattr(color, "literal", None)
    return literal() if callable(literal) else str(color)


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------

def spectrum(g: Graph) -> np.ndarray:
    """Eigenvalues of the adjacency matrix, descending. Cached per graph."""
    if g._spectrum is None:
        check_vertex_cap(g.n_vertices, "eigendecomposition")
        eig = np.linalg.eigvalsh(g.adjacency.astype(np.float64))
        eig = eig[::-1].copy()
        trace = float(g.loop_count())
        if abs(eig.sum() - trace) > 1e-8 * max(g.n_vertices, 1):
            raise AssertionError("eigenvalue sum drifted from the trace")
        g._spectrum = eig
    return g._spectrum


def second_eigenvalue(g: Graph) -> float:
    """max(lambda_2, -lambda_n) from the full spectrum."""
    eig = spectrum(g)
    if len(eig) < 2:
        return 0.0
    return float(max(eig[1], -eig[-1]))


def second_eigenvalue_power(g: Graph, iters: int = 300, seed: int = 7) -> float:
    """Power iteration on A^2 restricted to the complement of the all-ones
    vector; an independent estimate of lambda(G) for regular graphs."""
    n = g.n_vertices
    if n < 2:
        return 0.0
    a = g.adjacency.astype(np.float64)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n)
    x -= x.mean()
    x /= np.linalg.norm(x)
    value = 0.0
    for _ in range(iters):
        y = a @ (a @ x)
        y -= y.mean()  # stay orthogonal to the all-ones vector
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return 0.0
        x = y / norm
        value = float(x @ (a @ (a @ x)))
    return float(np.sqrt(max(value, 0.0)))


@dataclass
class SpectralCert:
    """Certified (n, d, lambda) triple with the measured second eigenvalue."""

    n: int
    degree: int
    lambda_claim: float
    lambda_measured: float
    satisfied: bool
    regular: bool
    top_matches_degree: bool
    lambda_claim_sq: Optional[Fraction] = None
    graph_fingerprint: str = ""
    meta: dict = field(default_factory=dict)

    def row(self) -> dict:
        out = {k: v for k, v in self.meta.items() if k != "lambda"}
        if "lambda" in self.meta:
            out["lambda_value"] = self.meta["lambda"]
        out.update(
            n_vertices=self.n,
            d_claim=self.degree,
            lambda_claim=self.lambda_claim,
            lambda_measured=self.lambda_measured,
            satisfied=self.satisfied,
        )
        return out


def certify_ndl(g: Graph, d_claim: int, lambda_claim: float,
                lambda_claim_sq: Optional[Fraction] = None,
                tol: float = SPECTRAL_TOL) -> SpectralCert:
    """Check regularity, the top eigenvalue, and the second-eigenvalue bound.

    Failures are recorded in the certificate, never raised.
    """
    deg = g.degrees()
    regular = bool(deg.size and (deg == d_claim).all())
    eig = spectrum(g)
    top_ok = bool(abs(float(eig[0]) - d_claim) <= tol)
    measured = second_eigenvalue(g)
    satisfied = regular and top_ok and measured <= lambda_claim + tol
    return SpectralCert(
        n=g.n_vertices,
        degree=int(d_claim),
        lambda_claim=float(lambda_claim),
        lambda_measured=measured,
        satisfied=bool(satisfied),
        regular=regular,
        top_matches_degree=top_ok,
        lambda_claim_sq=lambda_claim_sq,
        graph_fingerprint=g.fingerprint(),
        meta=dict(g.meta),
    )


# ---------------------------------------------------------------------------
# exact A^2 identities
# ---------------------------------------------------------------------------

@dataclass
class SquareIdentityResult:
    holds: bool
    violation: Optional[tuple] = None  # (i, j, lhs, rhs)


def adjacency_square(g: Graph) -> np.ndarray:
    """A^2 as exact int64.

    The float matmul is exact here: entries of A are 0/1, so every partial
    sum is an integer below 2^53.
    """
    a = g.adjacency.astype(np.float64)
    return np.rint(a @ a).astype(np.int64)


def check_square_identity(g: Graph, c_j: int, c_i: int, e_graph: Graph,
                          c_e: int = 1) -> SquareIdentityResult:
    """Integer-exact test of A^2 = c_j*J + c_i*I - c_e*E(e_graph)."""
    if e_graph.n_vertices != g.n_vertices:
        raise ValueError("identity graphs live on different vertex sets")
    n = g.n_vertices
    lhs = adjacency_square(g)
    rhs = np.full((n, n), int(c_j), dtype=np.int64)
    rhs[np.diag_indices(n)] += int(c_i)
    rhs -= int(c_e) * e_graph.adjacency.astype(np.int64)
    diff = lhs != rhs
    if not diff.any():
        return SquareIdentityResult(True)
    i, j = map(int, np.argwhere(diff)[0])
    return SquareIdentityResult(False, (i, j, int(lhs[i, j]), int(rhs[i, j])))


# ---------------------------------------------------------------------------
# structure probes used by invariants
# ---------------------------------------------------------------------------

def is_connected(g: Graph) -> bool:
    n = g.n_vertices
    if n == 0:
        return True
    seen = np.zeros(n, dtype=bool)
    stack = [0]
    seen[0] = True
    while stack:
        v = stack.pop()
        for u in np.nonzero(g.adjacency[v])[0]:
            if not seen[u]:
                seen[u] = True
                stack.append(int(u))
    return bool(seen.all())


def is_bipartite(g: Graph) -> bool:
    n = g.n_vertices
    color = np.full(n, -1, dtype=np.int8)
    for start in range(n):
        if color[start] >= 0:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            v = stack.pop()
            if g.adjacency[v, v]:
                return False  # a loop is an odd cycle
            for u in np.nonzero(g.adjacency[v])[0]:
                if color[u] < 0:
                    color[u] = 1 - color[v]
                    stack.append(int(u))
                elif color[u] == color[v]:
                    return False
    return True


def multiplicity_of_top(g: Graph, tol: float = SPECTRAL_TOL) -> int:
    eig = spectrum(g)
    return int(np.sum(eig > eig[0] - tol))
