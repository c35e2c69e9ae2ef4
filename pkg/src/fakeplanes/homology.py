"""Homological verdict for the complement of a boundary curve.

The inclusion of the boundary components into the divisor class group is
an equivariant integer matrix.  Its cokernel gives H_1 of the complement;
its determinant decides rational acyclicity; and the map it induces on
H^2 of the order-two group, together with the presence of a real boundary
component, decides whether the real locus is a plane.

Two modelling assumptions are built in: the ambient rational surface is
simply connected, and a real rational boundary curve has real points.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

from .exactalg import IntMatrix, determinant, f2_is_isomorphism, smith_normal_form
from .lattice import GModuleMap, RealLattice, h2_induced
from .surface import DualGraph, SurfaceModel


class HomologyError(ValueError):
    pass


@dataclass(frozen=True)
class Acyclicity:
    q_acyclic: bool
    z_acyclic: bool
    h1_torsion: tuple[int, ...]
    determinant: Optional[int]
    snf_diag: tuple[int, ...]


@dataclass(frozen=True)
class Verdict:
    boundary_connected: bool
    boundary_tree: bool
    q_acyclic: bool
    z_acyclic: bool
    h1_torsion: tuple[int, ...]
    h2_iso: bool
    boundary_real_nonempty: bool
    real_plane: bool
    determinant: Optional[int] = None
    snf_diag: tuple[int, ...] = ()

    def __post_init__(self):
        if self.z_acyclic and not (self.q_acyclic and not self.h1_torsion):
            raise HomologyError("Z-acyclic verdict must be Q-acyclic with no torsion")
        if self.real_plane and not (self.q_acyclic and self.h2_iso and self.boundary_real_nonempty):
            raise HomologyError("inconsistent real-plane verdict")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["h1_torsion"] = list(self.h1_torsion)
        d["snf_diag"] = list(self.snf_diag)
        return d

    @property
    def torsion_order(self) -> int:
        out = 1
        for t in self.h1_torsion:
            out *= t
        return out


def boundary_lattice(s: SurfaceModel) -> RealLattice:
    labels = list(s.boundary)
    gram = [[s.intersection(a, b) for b in labels] for a in labels]
    swaps = []
    for a in labels:
        b = s.conjugate_label(a)
        if a < b:
            swaps.append((a, b))
    return RealLattice.build(labels, gram, swaps=swaps)


def inclusion_matrix(s: SurfaceModel) -> GModuleMap:
    """Columns are the classes of the boundary curves."""
    if not s.boundary:
        raise HomologyError("empty boundary")
    cols = [s.curve(b).coeffs for b in s.boundary]
    mat = IntMatrix.from_columns(cols, s.lattice.rank)
    return GModuleMap(boundary_lattice(s), s.lattice, mat)


def acyclicity(m: GModuleMap | IntMatrix) -> Acyclicity:
    mat = m.matrix if isinstance(m, GModuleMap) else m
    snf = smith_normal_form(mat)
    torsion = tuple(snf.torsion())
    if mat.is_square():
        det = determinant(mat)
        q = det != 0
        z = abs(det) == 1
    else:
        det, q, z = None, False, False
    return Acyclicity(q, z, torsion if q else tuple(d for d in snf.diag if d != 1), det, snf.diag)


def verdict_from_map(m: GModuleMap, graph: Optional[DualGraph], real_nonempty: bool) -> Verdict:
    acy = acyclicity(m)
    try:
        h2 = f2_is_isomorphism(h2_induced(m))
    except ValueError:
        h2 = False
    connected = graph.is_connected() if graph is not None else True
    tree = graph.is_tree() if graph is not None else True
    return Verdict(
        boundary_connected=connected,
        boundary_tree=tree,
        q_acyclic=acy.q_acyclic,
        z_acyclic=acy.z_acyclic,
        h1_torsion=acy.h1_torsion,
        h2_iso=h2,
        boundary_real_nonempty=real_nonempty,
        real_plane=acy.q_acyclic and h2 and real_nonempty,
        determinant=acy.determinant,
        snf_diag=acy.snf_diag,
    )


def real_plane_verdict(s: SurfaceModel) -> Verdict:
    m = inclusion_matrix(s)
    graph = s.dual_graph()
    real_nonempty = any(s.curve(b).real for b in s.boundary)
    return verdict_from_map(m, graph, real_nonempty)
