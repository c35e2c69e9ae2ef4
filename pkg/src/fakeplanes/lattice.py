"""Divisor class lattices with an intersection form and a real structure.

The real structure acts on a lattice by permuting basis vectors.  The
Galois cohomology group ``ker(1 - s) / im(1 + s)`` of that action is an
F2 vector space; :func:`galois_h2` computes it with explicit lifts and
:func:`h2_induced` the map induced by an equivariant homomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .exactalg import (
    F2Matrix,
    IntMatrix,
    MatrixError,
    as_matrix,
    f2_rank,
    f2_solve,
    integer_kernel,
    is_symmetric,
    smith_normal_form,
    solve_integer_linear,
)


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class RealLattice:
    basis: tuple[str, ...]
    gram: IntMatrix
    canonical: tuple[int, ...]
    involution: tuple[int, ...]

    def __post_init__(self):
        n = len(self.basis)
        if len(set(self.basis)) != n:
            raise LatticeError("duplicate basis labels")
        if self.gram.shape != (n, n) or not is_symmetric(self.gram):
            raise LatticeError("gram matrix must be symmetric of basis size")
        if len(self.canonical) != n:
            raise LatticeError("canonical class has wrong length")
        s = self.involution
        if sorted(s) != list(range(n)) or any(s[s[i]] != i for i in range(n)):
            raise LatticeError("involution must be a permutation of order <= 2")
        g = self.gram.rows
        if any(g[s[i]][s[j]] != g[i][j] for i in range(n) for j in range(n)):
            raise LatticeError("involution does not preserve the intersection form")
        if any(self.canonical[s[i]] != self.canonical[i] for i in range(n)):
            raise LatticeError("involution does not fix the canonical class")

    @classmethod
    def build(cls, basis: Sequence[str], gram, canonical=None, swaps: Iterable[tuple[str, str]] = ()):
        basis = tuple(basis)
        idx = {b: i for i, b in enumerate(basis)}
        perm = list(range(len(basis)))
        for a, b in swaps:
            perm[idx[a]], perm[idx[b]] = idx[b], idx[a]
        can = tuple(canonical) if canonical is not None else (0,) * len(basis)
        return cls(basis, as_matrix(gram), can, tuple(perm))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def index(self, label: str) -> int:
        try:
            return self.basis.index(label)
        except ValueError:
            raise LatticeError(f"unknown basis label {label!r}") from None

    def vector(self, coeffs: Mapping[str, int] | Sequence[int]) -> "DivisorClass":
        if isinstance(coeffs, Mapping):
            v = [0] * self.rank
            for k, c in coeffs.items():
                v[self.index(k)] += c
            return DivisorClass(self, tuple(v))
        return DivisorClass(self, tuple(coeffs))

    def basis_vector(self, label: str) -> "DivisorClass":
        return self.vector({label: 1})

    def canonical_class(self) -> "DivisorClass":
        return DivisorClass(self, self.canonical)

    def conjugate(self, v: Sequence[int]) -> tuple[int, ...]:
        out = [0] * self.rank
        for i, c in enumerate(v):
            out[self.involution[i]] = c
        return tuple(out)

    def involution_matrix(self) -> IntMatrix:
        n = self.rank
        return IntMatrix(([int(self.involution[j] == i) for j in range(n)] for i in range(n)), n)

    def is_trivially_real(self) -> bool:
        return all(i == s for i, s in enumerate(self.involution))

    def extend(self, new_labels: Sequence[str], self_ints: Sequence[int],
               canonical: Sequence[int], swaps: Iterable[tuple[str, str]] = ()) -> "RealLattice":
        """Add orthogonal basis vectors with the given squares."""
        n = self.rank
        k = len(new_labels)
        g = [list(r) + [0] * k for r in self.gram.rows]
        for i, s in enumerate(self_ints):
            g.append([0] * (n + i) + [s] + [0] * (k - i - 1))
        basis = self.basis + tuple(new_labels)
        perm = list(self.involution) + list(range(n, n + k))
        idx = {b: i for i, b in enumerate(basis)}
        for a, b in swaps:
            perm[idx[a]], perm[idx[b]] = idx[b], idx[a]
        return RealLattice(basis, IntMatrix(g, n + k), tuple(canonical), tuple(perm))


@dataclass(frozen=True)
class DivisorClass:
    lattice: RealLattice = field(repr=False, compare=False)
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.lattice.rank:
            raise LatticeError("coefficient vector length does not match the basis")

    def _check(self, other: "DivisorClass"):
        if self.lattice.basis != other.lattice.basis or self.lattice.gram != other.lattice.gram:
            raise LatticeError("classes live in different lattices")

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._check(other)
        return DivisorClass(self.lattice, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        self._check(other)
        return DivisorClass(self.lattice, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(self.lattice, tuple(-a for a in self.coeffs))

    def __mul__(self, k: int) -> "DivisorClass":
        return DivisorClass(self.lattice, tuple(k * a for a in self.coeffs))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return self.lattice.basis == other.lattice.basis and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.lattice.basis, self.coeffs))

    def as_dict(self) -> dict[str, int]:
        return {b: c for b, c in zip(self.lattice.basis, self.coeffs) if c}

    def conjugate(self) -> "DivisorClass":
        return DivisorClass(self.lattice, self.lattice.conjugate(self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)


def pair(u: DivisorClass, v: DivisorClass) -> int:
    """Intersection number u . v."""
    u._check(v)
    g = u.lattice.gram.rows
    return sum(a * g[i][j] * b for i, a in enumerate(u.coeffs) if a
               for j, b in enumerate(v.coeffs) if b)


@dataclass(frozen=True)
class GModuleMap:
    """Integer matrix between two real lattices commuting with the involutions."""

    source: RealLattice
    target: RealLattice
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.rank, self.source.rank):
            raise LatticeError("map matrix shape does not match the lattices")

    def is_equivariant(self) -> bool:
        st = self.target.involution_matrix()
        ss = self.source.involution_matrix()
        return st @ self.matrix == self.matrix @ ss


@dataclass(frozen=True)
class H2Space:
    """``ker(1 - s) / im(1 + s)`` as an F2 space.

    ``lifts`` are integer vectors in ker(1 - s) whose classes form a basis.
    """

    lattice: RealLattice = field(repr=False)
    dimension: int
    lifts: tuple[tuple[int, ...], ...]
    _kernel: tuple[tuple[int, ...], ...] = field(repr=False)
    _left: IntMatrix = field(repr=False)
    _two_rows: tuple[int, ...] = field(repr=False)
    _lift_coords: F2Matrix = field(repr=False)

    def quotient_coordinates(self, v: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of the class of ``v`` in the raw quotient basis."""
        if not self._kernel:
            return ()
        kmat = IntMatrix.from_columns(self._kernel, self.lattice.rank)
        y = solve_integer_linear(kmat, list(v))
        if y is None:
            raise LatticeError("vector is not invariant under the involution")
        uy = self._left.apply(y)
        return tuple(uy[i] % 2 for i in self._two_rows)

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of the class of ``v`` with respect to ``lifts``."""
        q = self.quotient_coordinates(v)
        x = f2_solve(self._lift_coords, q)
        if x is None:
            raise LatticeError("lift coordinates are singular")  # cannot happen
        return x


def _invariant_candidates(lat: RealLattice, kernel: Sequence[Sequence[int]]):
    n = lat.rank
    seen = set()
    for i in range(n):
        # fixed basis vectors first, then orbit sums, then the raw kernel basis
        if lat.involution[i] == i:
            v = tuple(int(j == i) for j in range(n))
            seen.add(v)
            yield v
    for i in range(n):
        j = lat.involution[i]
        if j > i:
            v = tuple(int(k in (i, j)) for k in range(n))
            if v not in seen:
                seen.add(v)
                yield v
    for v in kernel:
        v = tuple(v)
        if v not in seen:
            seen.add(v)
            yield v


def galois_h2(lat: RealLattice) -> H2Space:
    n = lat.rank
    s = lat.involution_matrix()
    ident = IntMatrix.identity(n)
    minus = IntMatrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(ident.rows, s.rows)], n)
    plus = IntMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(ident.rows, s.rows)], n)
    kernel = integer_kernel(minus) if n else []
    if not kernel:
        empty = F2Matrix([], 0)
        return H2Space(lat, 0, (), (), IntMatrix.identity(0), (), empty)
    kmat = IntMatrix.from_columns(kernel, n)
    # image of 1 + s written in kernel coordinates
    image_coords = []
    for j in range(n):
        y = solve_integer_linear(kmat, list(plus.column(j)))
        if y is None:
            raise MatrixError("image of 1 + s escapes the invariant sublattice")
        image_coords.append(y)
    q = IntMatrix.from_columns(image_coords, len(kernel))
    snf = smith_normal_form(q)
    diag = list(snf.diag) + [0] * (len(kernel) - len(snf.diag))
    if any(d not in (1, 2) for d in diag):
        raise MatrixError(f"unexpected elementary divisors {diag} in H2 computation")
    two_rows = tuple(i for i, d in enumerate(diag) if d == 2)
    probe = H2Space(lat, len(two_rows), (), tuple(map(tuple, kernel)), snf.left, two_rows,
                    F2Matrix([], 0))
    lifts: list[tuple[int, ...]] = []
    coords: list[tuple[int, ...]] = []
    for v in _invariant_candidates(lat, kernel):
        if len(lifts) == len(two_rows):
            break
        c = probe.quotient_coordinates(v)
        trial = F2Matrix(zip(*(coords + [c])), len(coords) + 1) if two_rows else None
        if trial is not None and f2_rank(trial) == len(coords) + 1:
            lifts.append(v)
            coords.append(c)
    lift_coords = F2Matrix(zip(*coords), len(coords)) if coords else F2Matrix([], 0)
    return H2Space(lat, len(two_rows), tuple(lifts), tuple(map(tuple, kernel)), snf.left,
                   two_rows, lift_coords)


def h2_induced(m: GModuleMap) -> F2Matrix:
    """Matrix over F2 of the map induced on H^2 in the chosen lift bases."""
    if not m.is_equivariant():
        raise LatticeError("map does not commute with the real structures")
    src = galois_h2(m.source)
    tgt = galois_h2(m.target)
    cols = [tgt.coordinates(m.matrix.apply(v)) for v in src.lifts]
    if not cols:
        return F2Matrix(([] for _ in range(tgt.dimension)), 0)
    if tgt.dimension == 0:
        return F2Matrix([], len(cols))
    return F2Matrix(zip(*cols), len(cols))
