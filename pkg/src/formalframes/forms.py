"""Canonical forms, torsions, curvature, and realizability checks.

The canonical form sends a tangent vector at a frame to its expression in
the frame itself: θ(X) = L_u⁻¹(X projected one order down).  Because L_u
is linear in the natural coordinates and independent of the base point,
all partial derivatives of θ-components are exact:

    ∂_A θ = −L⁻¹ (∂_A L) L⁻¹ P,      ∂_A L constant in u.

Exterior derivatives are evaluated on coordinate vector fields only
(dθ(∂_A, ∂_B) = ∂_A θ_B − ∂_B θ_A) and extended by bilinearity.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .bundle import (
    BundleTangent,
    FrameCoords,
    AlgebraVector,
    TangentIso,
    algebra_size,
    coord_size,
    translation_matrix,
)
from .jetgroup import JetAlgebraElement, is_classical
from .tensors import ShapeMismatchError, SingularityError

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


class RealizabilityDisagreement(RuntimeError):
    """The torsion criterion and the symmetry criterion disagreed.

    This never happens for a correct implementation; it is surfaced loudly
    instead of being resolved silently.
    """


@dataclass(frozen=True)
class TorsionType:
    """Order k and insertion positions (p₁,…,p_{k−1}), 1 ≤ p_a ≤ a+1."""

    k: int
    p: tuple = ()

    def __post_init__(self):
        p = tuple(int(x) for x in self.p)
        if self.k < 1 or len(p) != self.k - 1:
            raise ShapeMismatchError(f"type tuple must have length k-1 = {self.k - 1}")
        for a, pa in enumerate(p, start=1):
            if not 1 <= pa <= a + 1:
                raise ShapeMismatchError(f"insertion position p_{a}={pa} out of range")
        object.__setattr__(self, "p", p)


def enumerate_torsion_types(k: int):
    """All k! insertion-type tuples of order k."""
    if k < 1:
        raise ShapeMismatchError("torsion order must be >= 1")
    ranges = [range(1, a + 2) for a in range(1, k)]
    return [TorsionType(k, p) for p in itertools.product(*ranges)]


def torsion_wedge_terms(t: TorsionType):
    """Symbolic wedge terms: pairs (first-factor indices, second-factor indices).

    Index entries are output positions 0..k-2 or the marker "l" for the
    contracted slot.  For each order-preserving selection S of a output
    indices the contracted index is inserted at position p_a within S; the
    complement feeds the second factor.  a = 0 gives θ^i_l ∧ θ^l_{all};
    a = k-1 pairs the top component with θ⁰.
    """
    k = t.k
    terms = []
    for a in range(k):
        p_a = 1 if a == 0 else t.p[a - 1]
        for S in itertools.combinations(range(k - 1), a):
            first = S[: p_a - 1] + ("l",) + S[p_a - 1:]
            second = tuple(q for q in range(k - 1) if q not in S)
            terms.append((first, second))
    return terms


# --------------------------------------------------------------------------
# cached constant derivative of the translation matrix


_DL_CACHE: dict = {}


def translation_matrix_derivative(n: int, r: int) -> np.ndarray:
    """∂L/∂(coordinate A) as an (M, N, N) stack; constant in the frame.

    The first n slices (base coordinates) vanish: L does not depend on the
    base point.
    """
    key = (n, r)
    if key in _DL_CACHE:
        return _DL_CACHE[key]
    M = coord_size(n, r)
    N = algebra_size(n, r)
    dL = np.zeros((M, N, N))
    shapes = [(n,) * (k + 1) for k in range(1, r + 1)]
    pos = n
    for k, shape in enumerate(shapes):
        size = int(np.prod(shape))
        for local in range(size):
            arrays = [np.zeros(s) for s in shapes]
            arrays[k].flat[local] = 1.0
            dL[pos] = translation_matrix(arrays, n, r)
            pos += 1
    dL.setflags(write=False)
    _DL_CACHE[key] = dL
    return dL


class FrameCalculus:
    """All canonical-form data at one frame, on coordinate vector fields.

    Layout: natural coordinates are ordered (h, u[1], …, u[r]) flattened
    row-major (M of them); canonical-form components are ordered by
    component order 0..r-1 (N rows).
    """

    def __init__(self, u: FrameCoords):
        self.u = u
        self.n, self.r = u.n, u.r
        self.N = algebra_size(self.n, self.r)
        self.M = coord_size(self.n, self.r)
        self.iso = TangentIso(u)
        self._Linv = np.linalg.inv(self.iso.matrix)
        # θ on coordinate fields: the top-order coordinate block projects to 0
        self.theta_table = np.zeros((self.N, self.M))
        self.theta_table[:, : self.N] = self._Linv
        self._offsets = np.cumsum([0] + [self.n ** (k + 1) for k in range(self.r)])
        self._partials = None

    # -- component views ---------------------------------------------------

    def component_rows(self, k: int) -> slice:
        return slice(int(self._offsets[k]), int(self._offsets[k + 1]))

    def theta_component(self, k: int) -> np.ndarray:
        """θ^k on coordinate fields, shape (n,)*(k+1) + (M,)."""
        view = self.theta_table[self.component_rows(k)]
        return view.reshape((self.n,) * (k + 1) + (self.M,))

    # -- values ------------------------------------------------------------

    def canonical_form(self, X: BundleTangent) -> AlgebraVector:
        return self.iso.solve(X)

    def theta_of_flat(self, x_flat: np.ndarray) -> np.ndarray:
        return self.theta_table @ x_flat

    @property
    def partials(self) -> np.ndarray:
        """G[c, A, B] = ∂_A θ_B[c], exact; shape (N, M, M)."""
        if self._partials is None:
            dL = translation_matrix_derivative(self.n, self.r)
            self._partials = -np.einsum(
                "ij,Ajk,kB->iAB", self._Linv, dL, self.theta_table, optimize=True
            )
        return self._partials

    @property
    def dtheta(self) -> np.ndarray:
        """dθ on coordinate pairs: (N, M, M), antisymmetric in (A, B)."""
        G = self.partials
        return G - G.transpose(0, 2, 1)

    def dtheta_component(self, k: int) -> np.ndarray:
        view = self.dtheta[self.component_rows(k)]
        return view.reshape((self.n,) * (k + 1) + (self.M, self.M))

    # -- torsion and curvature ---------------------------------------------

    def base_torsion_table(self, t: TorsionType) -> np.ndarray:
        """Θ^{k,t} on base-coordinate pairs only: shape (n,)*k + (n, n).

        The canonical-form coefficients do not depend on the base point, so
        dθ contributes nothing on base pairs; only the wedge terms survive.
        This avoids the full (N, M, M) partial-derivative array and is the
        fast path behind the realizability criterion.
        """
        k = t.k
        if k > self.r - 1:
            raise ShapeMismatchError(f"torsion order {k} needs frame order > {k}")
        base = self.theta_table[:, : self.n]
        comps = [
            base[self.component_rows(j)].reshape((self.n,) * (j + 1) + (self.n,))
            for j in range(k + 1)
        ]
        total = np.zeros((self.n,) * k + (self.n, self.n))
        out_letters = [_LETTERS[q] for q in range(k - 1)]
        for first, second in torsion_wedge_terms(t):
            a = len(first) - 1
            sub1 = "i" + "".join("l" if q == "l" else out_letters[q] for q in first) + "A"
            sub2 = "l" + "".join(out_letters[q] for q in second) + "B"
            out = "i" + "".join(out_letters) + "AB"
            W = np.einsum(f"{sub1},{sub2}->{out}", comps[a + 1], comps[k - 1 - a])
            total += W - np.swapaxes(W, -1, -2)
        return total

    def torsion_table(self, t: TorsionType) -> np.ndarray:
        """Θ^{k,t} on all coordinate pairs: shape (n,)*k + (M, M)."""
        k = t.k
        if k > self.r - 1:
            raise ShapeMismatchError(f"torsion order {k} needs frame order > {k}")
        total = self.dtheta_component(k - 1).copy()
        out_letters = [_LETTERS[q] for q in range(k - 1)]
        for first, second in torsion_wedge_terms(t):
            a = len(first) - 1
            O1 = self.theta_component(a + 1)
            O2 = self.theta_component(k - 1 - a)
            sub1 = "i" + "".join("l" if q == "l" else out_letters[q] for q in first) + "A"
            sub2 = "l" + "".join(out_letters[q] for q in second) + "B"
            out = "i" + "".join(out_letters) + "AB"
            W = np.einsum(f"{sub1},{sub2}->{out}", O1, O2)
            total += W - np.swapaxes(W, -1, -2)
        return total

    def max_torsion(self, orders=None, base_pairs: bool = True) -> tuple[float, dict]:
        """Largest torsion entry over all orders and insertion types.

        With ``base_pairs=True`` (the realizability criterion) the forms are
        evaluated on pairs of base-coordinate fields only.  That is the block
        where asymmetry of the frame tensors shows up: at a frame whose lower
        tensors are all symmetric, every torsion vanishes on base pairs and on
        tangents of the symmetric subbundle, but insertion types other than
        "always last" pick up nonzero values on asymmetric tangent
        *directions* even there, so the full coordinate table is not the
        right vanishing test.
        """
        worst, witness = 0.0, {}
        orders = range(1, self.r) if orders is None else orders
        for k in orders:
            for t in enumerate_torsion_types(k):
                if base_pairs:
                    table = self.base_torsion_table(t)
                else:
                    table = self.torsion_table(t)
                mag = float(np.max(np.abs(table)))
                if mag > worst:
                    worst = mag
                    witness = {"order": k, "type": list(t.p), "magnitude": mag}
        return worst, witness

    def curvature_table(self) -> np.ndarray:
        """Ω = dθ¹ + θ¹∧θ¹ on coordinate pairs: shape (n, n, M, M)."""
        if self.r < 2:
            raise ShapeMismatchError("curvature needs frame order >= 2")
        O1 = self.theta_component(1)  # (n, n, M)
        W = np.einsum("iaA,ajB->ijAB", O1, O1)
        return self.dtheta_component(1) + W - np.swapaxes(W, -1, -2)


# --------------------------------------------------------------------------
# functional wrappers


def canonical_form(u: FrameCoords, X: BundleTangent) -> AlgebraVector:
    return FrameCalculus(u).canonical_form(X)


def form_partials(u: FrameCoords, component: int | None = None) -> np.ndarray:
    """Exact partials of θ-components w.r.t. all natural coordinates.

    Returns the full (N, M, M) array G[c, A, B] = ∂_A θ_B[c], or the rows
    of one component order if `component` is given.
    """
    calc = FrameCalculus(u)
    G = calc.partials
    if component is None:
        return G
    view = G[calc.component_rows(component)]
    return view.reshape((u.n,) * (component + 1) + (calc.M, calc.M))


def _pair_value(table: np.ndarray, X: BundleTangent, Y: BundleTangent) -> np.ndarray:
    return np.tensordot(np.tensordot(table, Y.flat(), axes=([-1], [0])),
                        X.flat(), axes=([-1], [0]))


def torsion(u: FrameCoords, t: TorsionType, X: BundleTangent, Y: BundleTangent):
    """Torsion of order t.k and type t.p evaluated on a pair of tangents."""
    calc = FrameCalculus(u)
    return _pair_value(calc.torsion_table(t), X, Y)


def curvature(u: FrameCoords, X: BundleTangent, Y: BundleTangent) -> np.ndarray:
    return _pair_value(FrameCalculus(u).curvature_table(), X, Y)


def classical_tangent_projection(X: BundleTangent) -> BundleTangent:
    """Project a tangent onto the tangent space of the symmetric subbundle."""
    from .tensors import symmetrize_array

    arrays = [X.arrays[0]] + [symmetrize_array(a) for a in X.arrays[1:]]
    return BundleTangent.from_arrays(X.d_base, arrays)


def structural_residual(
    u: FrameCoords, k: int, X: BundleTangent, Y: BundleTangent, t: TorsionType | None = None
):
    """Structure-equation residual on a classical frame (any insertion type).

    The structure equations live on the symmetric subbundle, so the tangents
    are projected onto it before evaluating the torsion two-form.
    """
    ok, witness = is_classical_frame(u)
    if not ok:
        raise ShapeMismatchError(f"frame is not classical: {witness}")
    if t is None:
        t = TorsionType(k, (1,) * (k - 1))
    if t.k != k:
        raise ShapeMismatchError("insertion type order disagrees with k")
    return torsion(u, t, classical_tangent_projection(X), classical_tangent_projection(Y))


def is_classical_frame(u: FrameCoords, tol: float = 1e-8):
    worst = {"order": None, "gap": 0.0}
    for k, arr in enumerate(u.arrays, start=1):
        for axis in range(1, k):
            gap = float(np.max(np.abs(arr - np.swapaxes(arr, axis, axis + 1))))
            if gap > worst["gap"]:
                worst = {"order": k, "axes": (axis, axis + 1), "gap": gap}
    return worst["gap"] <= tol, worst


def realizability_check(u: FrameCoords, tol: float = 1e-8) -> dict:
    """Torsion criterion vs symmetry criterion; they must agree.

    Returns {"realizable", "max_torsion", "max_asymmetry", "witness"}; a
    disagreement raises RealizabilityDisagreement instead of guessing.
    """
    calc = FrameCalculus(u)
    max_tor, tor_witness = calc.max_torsion()
    sym_ok, sym_witness = is_classical_frame(u, tol)
    tor_ok = max_tor <= tol
    if tor_ok != sym_ok:
        raise RealizabilityDisagreement(
            f"torsion criterion ({max_tor:.3g}) and symmetry criterion "
            f"({sym_witness['gap']:.3g}) disagree at tol {tol:.3g}"
        )
    return {
        "realizable": bool(tor_ok),
        "max_torsion": max_tor,
        "max_asymmetry": float(sym_witness["gap"]),
        "witness": {"torsion": tor_witness, "asymmetry": sym_witness},
    }


def schwarzian(jet3) -> float:
    """S(f) = f‴/f′ − 1.5 (f″/f′)² for a 1-dimensional 3-jet (f′, f″, f‴)."""
    f1, f2, f3 = (float(np.asarray(v).reshape(())) for v in jet3)
    if f1 == 0.0:
        raise SingularityError("Schwarzian needs a nonvanishing first derivative")
    return f3 / f1 - 1.5 * (f2 / f1) ** 2


def schwarzian_frame(u: FrameCoords) -> float:
    """Frame-coordinate variant: v·u₁₁₁ − 1.5 (v·u₁₁)², v = 1/u₁."""
    if u.n != 1 or u.r < 3:
        raise ShapeMismatchError("frame Schwarzian needs n=1, r>=3")
    u1 = float(u.arrays[0].reshape(()))
    u11 = float(u.arrays[1].reshape(()))
    u111 = float(u.arrays[2].reshape(()))
    if u1 == 0.0:
        raise SingularityError("singular frame")
    v = 1.0 / u1
    return v * u111 - 1.5 * (v * u11) ** 2
