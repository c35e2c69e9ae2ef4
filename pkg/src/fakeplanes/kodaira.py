"""Evidence for the log Kodaira dimension of a boundary complement.

Nothing here computes a Zariski decomposition.  The checks certify the
exact linear-algebra facts that the usual arguments rest on: an effective
multiple of the log canonical class supported on a negative definite
configuration, a positive multiple of a fiber class plus such a negative
part, or an A^1-fibration whose fibers satisfy the parity conditions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping, Optional, Sequence

from .exactalg import IntMatrix, determinant, is_negative_definite
from .lattice import DivisorClass, pair
from .surface import DualGraph, SurfaceModel

KAPPA_VERDICTS = (
    "kappa_minus_infinity_certified",
    "kappa_zero_evidence",
    "kappa_one_evidence",
    "kappa_two_claimed",
    "inconclusive",
)


class KodairaError(ValueError):
    pass


class EquivalenceError(KodairaError):
    """The proposed combination is not equal to the required multiple."""


@dataclass(frozen=True)
class KappaEvidence:
    n: int
    combination: tuple[tuple[str, Fraction], ...]
    support_negdef: bool
    verdict: str
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.verdict not in KAPPA_VERDICTS:
            raise KodairaError(f"unknown verdict {self.verdict!r}")

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "combination": [[lab, str(c)] for lab, c in self.combination],
            "support_negdef": self.support_negdef,
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def log_canonical(s: SurfaceModel) -> DivisorClass:
    total = s.canonical()
    for b in s.boundary:
        total = total + s.cls(b)
    return total


def support_matrix(s: SurfaceModel, labels: Sequence[str]) -> IntMatrix:
    return IntMatrix([[s.intersection(a, b) for b in labels] for a in labels], len(labels))


def _combine(s: SurfaceModel, combination: Mapping[str, Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * s.lattice.rank
    for lab, c in combination.items():
        for i, x in enumerate(s.curve(lab).coeffs):
            out[i] += Fraction(c) * x
    return out


def effective_multiple_check(s: SurfaceModel, n: int, combination: Mapping[str, Fraction | int]
                             ) -> KappaEvidence:
    """Check n(K + B) = sum c_i C_i exactly and test the support for negativity."""
    if n < 1:
        raise KodairaError("multiple must be positive")
    comb = {lab: Fraction(c) for lab, c in combination.items()}
    for lab, c in comb.items():
        if c < 0:
            raise KodairaError(f"coefficient of {lab} is negative")
        if lab not in s.boundary:
            raise KodairaError(f"{lab} is not a boundary curve")
    lhs = [Fraction(n * x) for x in log_canonical(s).coeffs]
    rhs = _combine(s, comb)
    if lhs != rhs:
        diff = {b: lhs[i] - rhs[i] for i, b in enumerate(s.lattice.basis) if lhs[i] != rhs[i]}
        raise EquivalenceError(f"{n}(K+B) differs from the combination by {diff}")
    support = [lab for lab, c in comb.items() if c > 0]
    negdef = is_negative_definite(support_matrix(s, support)) if support else True
    verdict = "kappa_zero_evidence" if negdef else "inconclusive"
    notes = ()
    if not support:
        notes = ("log canonical class is zero",)
    return KappaEvidence(n, tuple((lab, c) for lab, c in comb.items()), negdef, verdict, notes)


def solve_rational(columns: Sequence[Sequence[int]], target: Sequence[Fraction]
                   ) -> Optional[list[Fraction]]:
    """Unique-or-first rational solution of sum x_j col_j = target."""
    n = len(target)
    k = len(columns)
    aug = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(n)]
    pivots = []
    row = 0
    for col in range(k):
        p = next((i for i in range(row, n) if aug[i][col] != 0), None)
        if p is None:
            continue
        aug[row], aug[p] = aug[p], aug[row]
        piv = aug[row][col]
        aug[row] = [x / piv for x in aug[row]]
        for i in range(n):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
    if any(aug[i][k] != 0 for i in range(row, n)):
        return None
    x = [Fraction(0)] * k
    for i, col in enumerate(pivots):
        x[col] = aug[i][k]
    return x


def positive_part_check(s: SurfaceModel, eta: Optional[Fraction], fiber: DivisorClass,
                        support: Sequence[str]) -> KappaEvidence:
    """Decompose K + B = eta * fiber + N with N >= 0 on a negative definite support.

    ``fiber`` must be a nef class of square zero (a fibre of a P^1-fibration).
    With ``eta=None`` the coefficient of the fiber is solved for as well.
    """
    if fiber.lattice.basis != s.lattice.basis:
        raise KodairaError("fiber class lives in another lattice")
    if pair(fiber, fiber) != 0:
        raise KodairaError("fiber class must have square zero")
    kb = log_canonical(s)
    columns = [s.curve(lab).coeffs for lab in support]
    if eta is None:
        sol = solve_rational(columns + [fiber.coeffs], list(kb.coeffs))
        if sol is None:
            raise EquivalenceError("K+B is not a combination of the fiber and the given curves")
        eta = sol[-1]
    eta = Fraction(eta)
    target = [Fraction(a) - eta * b for a, b in zip(kb.coeffs, fiber.coeffs)]
    coeffs = solve_rational(columns, target)
    if coeffs is None:
        raise EquivalenceError("K+B - eta*fiber is not supported on the given curves")
    negdef = is_negative_definite(support_matrix(s, support)) if support else True
    nonneg = all(c >= 0 for c in coeffs)
    ok = negdef and nonneg and eta > 0
    notes = [f"eta = {eta}"]
    if not nonneg:
        notes.append("negative part has a negative coefficient")
    comb = tuple((lab, c) for lab, c in zip(support, coeffs) if c != 0)
    return KappaEvidence(1, comb, negdef, "kappa_one_evidence" if ok else "inconclusive", tuple(notes))


# numeric conditions for the Kodaira dimension one constructions

@dataclass(frozen=True)
class Kod1Conditions:
    eta: Fraction
    matrix: IntMatrix
    det: int
    matrix_ok: bool
    passed: bool
    failures: tuple[str, ...]


def _check_pairs(mu_minus: Sequence[int], mu_plus: Sequence[int], count: int, what: str):
    if len(mu_minus) != count or len(mu_plus) != count:
        raise KodairaError(f"{what}: expected {count} pairs, got {len(mu_minus)} and {len(mu_plus)}")
    for a, b in zip(mu_minus, mu_plus):
        if not (1 <= a < b) or gcd(a, b) != 1:
            raise KodairaError(f"{what}: pair ({a},{b}) must be coprime with 1 <= minus < plus")


def kod1_matrix(mu_minus: Sequence[int], mu_plus: Sequence[int]) -> IntMatrix:
    n = len(mu_minus)
    rows = [[-1] * (n + 1)]
    for i in range(n):
        rows.append([mu_minus[i]] + [mu_plus[i] if j == i else 0 for j in range(n)])
    return IntMatrix(rows, n + 1)


def kod1_conditions(n: int, mu_minus: Sequence[int], mu_plus: Sequence[int]) -> Kod1Conditions:
    """eta = n - 1 - sum 1/mu_plus must be positive and the bordered
    matrix [[-1, -1...], [mu_minus, diag(mu_plus)]] unimodular."""
    _check_pairs(mu_minus, mu_plus, n, "real chains")
    eta = Fraction(n - 1) - sum(Fraction(1, b) for b in mu_plus)
    mat = kod1_matrix(mu_minus, mu_plus)
    det = determinant(mat)
    unimodular = det in (1, -1)
    failures = []
    if eta <= 0:
        failures.append(f"positivity condition eta > 0 fails (eta = {eta})")
    if not unimodular:
        failures.append(f"unimodularity condition fails (det = {det})")
    return Kod1Conditions(eta, mat, det, unimodular, not failures, tuple(failures))


def kod1_conjugate_matrix(nu_minus: Sequence[int], nu_plus: Sequence[int]) -> IntMatrix:
    vm = list(nu_minus) * 2
    vp = list(nu_plus) * 2
    return kod1_matrix(vm, vp)


def kod1_conditions_conjugate(m: int, nu_minus: Sequence[int], nu_plus: Sequence[int]
                              ) -> Kod1Conditions:
    """eta = 2m - 1 - 2 sum 1/nu_plus must be positive and the doubled
    bordered matrix invertible over Q."""
    _check_pairs(nu_minus, nu_plus, m, "conjugate chains")
    eta = Fraction(2 * m - 1) - 2 * sum(Fraction(1, b) for b in nu_plus)
    mat = kod1_conjugate_matrix(nu_minus, nu_plus)
    det = determinant(mat)
    failures = []
    if eta <= 0:
        failures.append(f"positivity condition eta > 0 fails (eta = {eta})")
    if det == 0:
        failures.append("invertibility condition fails (det = 0)")
    return Kod1Conditions(eta, mat, det, det != 0, not failures, tuple(failures))


# A^1-fibrations

@dataclass(frozen=True)
class Fiber:
    multiplicity: int
    real: bool = True
    irreducible: bool = True

    def __post_init__(self):
        if self.multiplicity < 1:
            raise KodairaError("fiber multiplicity must be positive")


@dataclass(frozen=True)
class FibrationDescriptor:
    base: str
    fibers: tuple[Fiber, ...] = ()
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.base not in ("real_line", "projective_line"):
            raise KodairaError(f"unknown base {self.base!r}")

    def to_dict(self) -> dict:
        return {
            "base": self.base,
            "fibers": [{"multiplicity": f.multiplicity, "real": f.real,
                        "irreducible": f.irreducible} for f in self.fibers],
        }


def a1_fibration_verdict(f: FibrationDescriptor) -> tuple[bool, bool]:
    """(Q-acyclic real plane, rectifiable) flags for an A^1-fibered surface."""
    good = all(x.irreducible for x in f.fibers) and all(
        x.multiplicity % 2 == 1 for x in f.fibers if x.real)
    degenerate = sum(1 for x in f.fibers if x.multiplicity > 1)
    return good, good and degenerate <= 1


def hypersurface_fibration(s: int, m: Sequence[int], p: Sequence[int]) -> FibrationDescriptor:
    if s < 1:
        raise KodairaError("need at least one degenerate fiber")
    if len(m) != s or len(p) != s:
        raise KodairaError(f"expected {s} exponents m and p")
    for mi in m:
        if mi < 2:
            raise KodairaError(f"exponent m = {mi} must be at least 2")
    for pi in p:
        if pi < 3 or pi % 2 == 0:
            raise KodairaError(f"exponent p = {pi} must be odd and at least 3")
    fibers = tuple(Fiber(pi, True, True) for pi in p)
    return FibrationDescriptor("real_line", fibers)


def fibration_evidence(f: FibrationDescriptor) -> KappaEvidence:
    # an A^1-fibration alone forces kappa = -infinity; parity is irrelevant here
    return KappaEvidence(0, (), False, "kappa_minus_infinity_certified",
                         (f"A^1-fibration with {len(f.fibers)} degenerate fibers",))


# general type and chain boundaries

def general_type_claim(graph: DualGraph) -> KappaEvidence:
    """Check the combinatorial hypotheses of the exclusion argument.

    ``graph`` is the boundary of a minimal SNC completion.  All components
    must have self-intersection at most -1 and every (-1)-curve must meet
    at least three other components; then any other SNC completion maps
    onto this one, and non-isomorphism follows from the weighted graphs.
    """
    adj = graph.adjacency()
    failures = []
    for node in graph.nodes:
        if node.self_int > -1:
            failures.append(f"{node.label} has self-intersection {node.self_int} > -1")
        elif node.self_int == -1 and len(adj[node.label]) < 3:
            failures.append(f"(-1)-curve {node.label} meets only {len(adj[node.label])} components")
    verdict = "inconclusive" if failures else "kappa_two_claimed"
    notes = tuple(failures) or ("boundary is minimal and rigid; general type by exclusion",)
    return KappaEvidence(2, (), False, verdict, notes)


def chain_boundary_evidence(graph: DualGraph, q_acyclic: bool) -> KappaEvidence:
    """A Q-acyclic affine surface whose boundary is a chain of rational curves
    carries an A^1-fibration (a known criterion, assumed rather than checked)."""
    chain = graph.is_chain()
    ok = chain and q_acyclic
    notes = ("boundary is a chain of rational curves" if chain else "boundary is not a chain",
             "relies on the chain criterion for A^1-fibrations")
    return KappaEvidence(0, (), False, "kappa_minus_infinity_certified" if ok else "inconclusive", notes)
