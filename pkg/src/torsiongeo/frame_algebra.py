"""Exterior algebra on components in an orthonormal frame.

All tensors live in a fixed orthonormal frame, so the metric is the
identity and index position is purely notational.  Forms are stored as
dense arrays of shape ``(dim,) * rank`` with totally antisymmetric
components; a p-form ``chi`` represents ``(1/p!) chi_{i1..ip}
e^{i1} ^ ... ^ e^{ip}``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "FrameTensor",
    "EpsilonOrientation",
    "wedge",
    "wedge_top_coefficient",
    "interior_product",
    "form_inner",
    "hodge_star",
    "volume_form",
    "top_coefficient",
    "zero_form",
    "basis_form",
    "basis_vector",
    "antisymmetrize",
]


def _perm_parity(perm) -> int:
    """Parity (+1/-1) of a permutation given as a tuple of ints."""
    perm = list(perm)
    parity = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            parity = -parity
    return parity


@lru_cache(maxsize=None)
def _signed_permutations(rank: int):
    """All permutations of range(rank) with their signs, as arrays."""
    perms = list(itertools.permutations(range(rank)))
    signs = np.array([_perm_parity(p) for p in perms], dtype=np.float64)
    return np.array(perms, dtype=np.intp), signs


def antisymmetrize(arr: np.ndarray) -> np.ndarray:
    """Weight-one antisymmetrization over all indices of a square array."""
    rank = arr.ndim
    if rank <= 1:
        return arr.copy()
    perms, signs = _signed_permutations(rank)
    out = np.zeros_like(arr, dtype=np.float64)
    for perm, sign in zip(perms, signs):
        out += sign * np.transpose(arr, perm)
    return out / math.factorial(rank)


@dataclass(frozen=True)
class FrameTensor:
    """Dense multi-index component array in an orthonormal frame.

    ``antisymmetric=True`` asserts total antisymmetry and is verified on
    construction (sign flip under every adjacent transposition, which is
    equivalent to full antisymmetry).
    """

    dim: int
    rank: int
    components: np.ndarray
    antisymmetric: bool = True

    def __post_init__(self):
        comp = np.asarray(self.components, dtype=np.float64)
        if comp.shape != (self.dim,) * self.rank:
            raise ValueError(
                f"components shape {comp.shape} does not match dim^rank "
                f"= {(self.dim,) * self.rank}"
            )
        if not np.all(np.isfinite(comp)):
            raise ValueError("non-finite component encountered")
        if self.antisymmetric and self.rank >= 2:
            # relative with an absolute floor, so numerically-zero arrays
            # (e.g. interior products with kernel vectors) are accepted
            scale = max(float(np.abs(comp).max()), 1.0)
            for k in range(self.rank - 1):
                axes = list(range(self.rank))
                axes[k], axes[k + 1] = axes[k + 1], axes[k]
                if np.abs(comp + np.transpose(comp, axes)).max() > 1e-12 * scale:
                    raise ValueError(
                        f"components not antisymmetric under swap of slots "
                        f"{k},{k + 1}"
                    )
        comp = comp.copy()
        comp.setflags(write=False)
        object.__setattr__(self, "components", comp)

    @property
    def sup_norm(self) -> float:
        if self.components.size == 0:
            return 0.0
        return float(np.abs(self.components).max())

    def __add__(self, other: "FrameTensor") -> "FrameTensor":
        self._check_like(other)
        return FrameTensor(self.dim, self.rank, self.components + other.components,
                           self.antisymmetric and other.antisymmetric)

    def __sub__(self, other: "FrameTensor") -> "FrameTensor":
        self._check_like(other)
        return FrameTensor(self.dim, self.rank, self.components - other.components,
                           self.antisymmetric and other.antisymmetric)

    def __rmul__(self, scalar: float) -> "FrameTensor":
        return FrameTensor(self.dim, self.rank, float(scalar) * self.components,
                           self.antisymmetric)

    def __neg__(self) -> "FrameTensor":
        return -1.0 * self

    def _check_like(self, other: "FrameTensor"):
        if not isinstance(other, FrameTensor):
            raise TypeError("expected FrameTensor")
        if other.dim != self.dim or other.rank != self.rank:
            raise ValueError("dim/rank mismatch")


def zero_form(dim: int, rank: int) -> FrameTensor:
    return FrameTensor(dim, rank, np.zeros((dim,) * rank))


def basis_form(dim: int, indices) -> FrameTensor:
    """The unit form e^{i1} ^ ... ^ e^{ip} for distinct 0-based indices."""
    indices = tuple(indices)
    if len(set(indices)) != len(indices):
        raise ValueError("basis form indices must be distinct")
    comp = np.zeros((dim,) * len(indices))
    perms, signs = _signed_permutations(len(indices))
    for perm, sign in zip(perms, signs):
        comp[tuple(indices[k] for k in perm)] = sign
    return FrameTensor(dim, len(indices), comp)


def basis_vector(dim: int, index: int) -> FrameTensor:
    comp = np.zeros(dim)
    comp[index] = 1.0
    return FrameTensor(dim, 1, comp)


@dataclass(frozen=True)
class EpsilonOrientation:
    """Orientation choice: the totally antisymmetric symbol scaled by sign.

    ``epsilon[0, 1, ..., dim-1] = sign``.  The dense symbol is built
    lazily (dim^dim entries; only sensible for small dims), all
    orientation-sensitive operations use index parities instead.
    """

    dim: int
    sign: int = 1
    _epsilon_cache: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("orientation sign must be +1 or -1")
        if self.dim < 1:
            raise ValueError("dim must be positive")

    @property
    def epsilon(self) -> np.ndarray:
        if not self._epsilon_cache:
            eps = np.zeros((self.dim,) * self.dim)
            perms, signs = _signed_permutations(self.dim)
            eps[tuple(perms.T)] = self.sign * signs
            eps.setflags(write=False)
            self._epsilon_cache.append(eps)
        return self._epsilon_cache[0]

    def flipped(self) -> "EpsilonOrientation":
        return EpsilonOrientation(self.dim, -self.sign)


def wedge(chi: FrameTensor, psi: FrameTensor) -> FrameTensor:
    """Wedge product of a p-form and a q-form.

    Components are ``(p+q)!/(p! q!)`` times the antisymmetrized tensor
    product, so for a 1-form and a 2-form the (i1,i2,i3) component is
    ``chi_{i1} psi_{i2 i3} + cyclic``.  Degrees beyond dim give the zero
    form (which the product mathematically is).
    """
    if chi.dim != psi.dim:
        raise ValueError("wedge: dimension mismatch")
    if not (chi.antisymmetric and psi.antisymmetric):
        raise ValueError("wedge requires antisymmetric inputs")
    p, q, n = chi.rank, psi.rank, chi.dim
    if p + q > n:
        return zero_form(n, 0)
    if p == 0 or q == 0:
        scalar = chi.components if p == 0 else psi.components
        other = psi if p == 0 else chi
        return FrameTensor(n, other.rank, float(scalar) * other.components)
    r = p + q
    comp = np.zeros((n,) * r)
    perms, signs = _signed_permutations(r)
    shuffles = [
        (s, tuple(k for k in range(r) if k not in s))
        for s in itertools.combinations(range(r), p)
    ]
    shuffle_signs = [
        _perm_parity(tuple(s) + rest) for s, rest in shuffles
    ]
    for combo in itertools.combinations(range(n), r):
        val = 0.0
        for (s, rest), ssign in zip(shuffles, shuffle_signs):
            val += ssign * chi.components[tuple(combo[k] for k in s)] \
                * psi.components[tuple(combo[k] for k in rest)]
        if val == 0.0:
            continue
        idx = np.array(combo, dtype=np.intp)[perms]
        comp[tuple(idx.T)] = signs * val
    return FrameTensor(n, r, comp)


def wedge_top_coefficient(chi: FrameTensor, psi: FrameTensor,
                          orient: EpsilonOrientation) -> float:
    """Coefficient c in chi ^ psi = c * volume, for p + q = dim.

    Avoids materializing the rank-dim dense array of wedge() at dim 8.
    """
    if chi.rank + psi.rank != chi.dim:
        raise ValueError("wedge_top_coefficient needs p + q = dim")
    if orient.dim != chi.dim:
        raise ValueError("orientation dim mismatch")
    p, n = chi.rank, chi.dim
    full = tuple(range(n))
    val = 0.0
    for s in itertools.combinations(range(n), p):
        rest = tuple(k for k in range(n) if k not in s)
        val += _perm_parity(s + rest) * chi.components[s] * psi.components[rest]
    return float(val) * orient.sign


def interior_product(v: FrameTensor, chi: FrameTensor) -> FrameTensor:
    """(iota_v chi)_{i2..ip} = v^j chi_{j i2..ip}."""
    if v.rank != 1:
        raise ValueError("interior product needs a vector (rank-1) first argument")
    if chi.rank < 1:
        raise ValueError("interior product of a 0-form is undefined")
    if v.dim != chi.dim:
        raise ValueError("dimension mismatch")
    comp = np.tensordot(v.components, chi.components, axes=(0, 0))
    return FrameTensor(chi.dim, chi.rank - 1, comp,
                       antisymmetric=chi.antisymmetric)


def form_inner(chi: FrameTensor, psi: FrameTensor) -> float:
    """(chi, psi) = (1/p!) chi_{i1..ip} psi_{i1..ip}."""
    if chi.rank != psi.rank:
        raise ValueError("form_inner: rank mismatch")
    if chi.dim != psi.dim:
        raise ValueError("form_inner: dimension mismatch")
    if not (chi.antisymmetric and psi.antisymmetric):
        raise ValueError("form_inner requires antisymmetric inputs")
    return float(np.sum(chi.components * psi.components)) / math.factorial(chi.rank)


def hodge_star(chi: FrameTensor, orient: EpsilonOrientation) -> FrameTensor:
    """(*chi)_{j1..j(n-p)} = (1/p!) chi^{i1..ip} eps_{i1..ip j1..j(n-p)}.

    Computed per sorted index tuple via complement parities; satisfies
    ** = (-1)^{p(n-p)} in this Riemannian setting.
    """
    if orient.dim != chi.dim:
        raise ValueError("orientation dim mismatch")
    if not chi.antisymmetric:
        raise ValueError("hodge_star requires an antisymmetric input")
    n, p = chi.dim, chi.rank
    if p > n:
        raise ValueError("form degree exceeds dimension")
    r = n - p
    comp = np.zeros((n,) * r)
    if r == 0:
        # 0-form result: scalar stored as rank-0 array
        full = tuple(range(n))
        return FrameTensor(n, 0, np.array(chi.components[full] * orient.sign))
    perms, signs = _signed_permutations(r)
    for combo in itertools.combinations(range(n), r):
        complement = tuple(k for k in range(n) if k not in combo)
        val = chi.components[complement] if p else float(chi.components)
        val *= _perm_parity(complement + combo) * orient.sign
        if val == 0.0:
            continue
        idx = np.array(combo, dtype=np.intp)[perms]
        comp[tuple(idx.T)] = signs * val
    return FrameTensor(n, r, comp)


def volume_form(orient: EpsilonOrientation) -> FrameTensor:
    """The unit volume form in the given orientation (small dims only)."""
    return FrameTensor(orient.dim, orient.dim, orient.epsilon)


def top_coefficient(chi: FrameTensor, orient: EpsilonOrientation) -> float:
    """Coefficient of the volume form in a top-degree form."""
    if chi.rank != chi.dim:
        raise ValueError("top_coefficient needs a top-degree form")
    if orient.dim != chi.dim:
        raise ValueError("orientation dim mismatch")
    return float(chi.components[tuple(range(chi.dim))]) * orient.sign
