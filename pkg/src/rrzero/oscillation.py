"""Fiber norms and oscillation over the Pontryagin dual of a f.g. abelian group.

The dual of Z^r + Z/n_1 + ... + Z/n_k is a disjoint union of r-tori, one per
torsion character (t_1, ..., t_k).  A matrix over C[N] is evaluated at a
character entrywise; its oscillation is the largest spread of the fiber norm
within a single torus, maximized over tori.

Two estimators are provided:

* a closed form for diag(beta(d_1), ..., beta(d_k)), where the value is 2 as
  soon as one d_i has infinite order and 0 otherwise;
* a sampled estimator: a uniform grid per torus plus local zooms around the
  extrema.  The sampled spread is always a lower bound for the true value.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from rrzero.algebra import (
    GroupAlgebraElement,
    MatrixOverGroupAlgebra,
    beta,
)
from rrzero.groups.abelian import AbelianElement, DimensionError, FGAbelianGroup

DEFAULT_GRID = 64
DEFAULT_REFINE = 2
DEFAULT_COMPONENTS_CAP = 4096
ZOOM = 8
_CHUNK = 1 << 15


class ComponentCapError(ValueError):
    """Too many dual components; the caller must choose to enumerate or sample them."""


class NotBetaDiagonal(ValueError):
    pass


# -- dual and characters -------------------------------------------------------


@dataclass(frozen=True)
class Character:
    torus_point: tuple[float, ...]
    torsion: tuple[int, ...] = ()
    orders: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "torus_point", tuple(float(t) for t in self.torus_point))
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        object.__setattr__(self, "orders", tuple(int(n) for n in self.orders))
        if len(self.torsion) != len(self.orders):
            raise DimensionError("torsion tuple and torsion orders differ in length")


@dataclass(frozen=True)
class DualDescription:
    group: FGAbelianGroup

    @property
    def dimension(self) -> int:
        return self.group.free_rank

    @property
    def n_components(self) -> int:
        return math.prod(self.group.torsion)

    def component(self, index: int) -> tuple[int, ...]:
        """Torsion tuple of component ``index`` (first coordinate varies fastest)."""
        out = []
        for n in self.group.torsion:
            out.append(index % n)
            index //= n
        return tuple(out)

    def component_index(self, torsion: Sequence[int]) -> int:
        idx, mult = 0, 1
        for t, n in zip(torsion, self.group.torsion):
            idx += t * mult
            mult *= n
        return idx

    def character(self, theta: Sequence[float] = (), torsion: Sequence[int] = ()) -> Character:
        theta = tuple(theta) if theta else (0.0,) * self.dimension
        torsion = tuple(torsion) if torsion else (0,) * len(self.group.torsion)
        if len(theta) != self.dimension or len(torsion) != len(self.group.torsion):
            raise DimensionError(f"character shape does not fit the dual of {self.group}")
        return Character(theta, torsion, self.group.torsion)

    def trivial_character(self) -> Character:
        return self.character()

    def select_components(
        self, cap: int = DEFAULT_COMPONENTS_CAP, mode: str = "auto", seed: int = 0
    ) -> tuple[list[int], bool]:
        """Component indices to visit and whether they were sampled."""
        n = self.n_components
        if n <= cap or mode == "enumerate":
            return list(range(n)), False
        if mode != "sample":
            raise ComponentCapError(
                f"dual has {n} components, over the cap of {cap}: enumerate or sample components"
            )
        rng = np.random.default_rng(seed)
        chosen = {0}
        while len(chosen) < cap:
            chosen.add(int(rng.integers(0, n)))
        return sorted(chosen), True


def character_value(chi: Character, x: AbelianElement) -> complex:
    """exp(2 pi i (theta . free + sum_j t_j c_j / n_j))."""
    if len(x.free) != len(chi.torus_point) or len(x.torsion) != len(chi.torsion):
        raise DimensionError(f"element {x} does not fit the character's group")
    exact = sum((Fraction(t * c, n) for t, c, n in zip(chi.torsion, x.torsion, chi.orders)), Fraction(0))
    phase = math.fsum(a * b for a, b in zip(chi.torus_point, x.free)) + float(exact % 1)
    return complex(np.exp(2j * np.pi * (phase % 1.0)))


# -- fiber evaluation -------------------------------------------------------------


class FiberField:
    """Vectorized evaluation of one matrix over C[N] at many characters of N."""

    def __init__(self, m: MatrixOverGroupAlgebra | GroupAlgebraElement, hermitian: bool | None = None):
        if isinstance(m, GroupAlgebraElement):
            m = MatrixOverGroupAlgebra.scalar(m)
        if not isinstance(m.group, FGAbelianGroup):
            raise TypeError("fibers are only available over abelian groups")
        self.matrix = m
        self.group: FGAbelianGroup = m.group
        support = m.support()
        k = m.size
        self.k = k
        self.free = np.array([g.free for g in support], dtype=float).reshape(len(support), self.group.free_rank)
        self.torsion = [g.torsion for g in support]
        coeffs = np.zeros((k, k, len(support)), dtype=complex)
        index = {g: s for s, g in enumerate(support)}
        for i in range(k):
            for j in range(k):
                for g, c in m.entries[i][j].coeffs.items():
                    coeffs[i, j, index[g]] = complex(c)
        self.coeffs = coeffs
        self.hermitian = m.is_self_adjoint() if hermitian is None else hermitian

    def _torsion_phase(self, torsion: Sequence[int]) -> np.ndarray:
        orders = self.group.torsion
        return np.array(
            [float(sum((Fraction(t * c, n) for t, c, n in zip(torsion, tc, orders)), Fraction(0)) % 1) for tc in self.torsion]
        )

    def fibers(self, thetas: np.ndarray, torsion: Sequence[int] = ()) -> np.ndarray:
        thetas = np.asarray(thetas, dtype=float).reshape(-1, self.group.free_rank)
        torsion = tuple(torsion) if torsion else (0,) * len(self.group.torsion)
        # elementwise rather than BLAS so each point's value is independent of the batch
        phase = np.broadcast_to(self._torsion_phase(torsion), (thetas.shape[0], self.free.shape[0])).copy()
        for j in range(self.free.shape[1]):
            phase += thetas[:, j, None] * self.free[None, :, j]
        phase = np.mod(phase, 1.0)
        chars = np.exp(2j * np.pi * phase)
        out = np.zeros((thetas.shape[0], self.k, self.k), dtype=complex)
        for s in range(self.coeffs.shape[2]):
            out += self.coeffs[None, :, :, s] * chars[:, s, None, None]
        return out

    def norms(self, thetas: np.ndarray, torsion: Sequence[int] = ()) -> np.ndarray:
        thetas = np.asarray(thetas, dtype=float).reshape(-1, self.group.free_rank)
        parts = []
        for start in range(0, max(len(thetas), 1), _CHUNK):
            f = self.fibers(thetas[start : start + _CHUNK], torsion)
            parts.append(batched_norm(f, self.hermitian))
        return np.concatenate(parts) if parts else np.zeros(0)

    def eig_extremes(self, thetas: np.ndarray, torsion: Sequence[int] = ()) -> tuple[np.ndarray, np.ndarray]:
        """Smallest and largest fiber eigenvalue (self-adjoint matrices only)."""
        if not self.hermitian:
            raise ValueError("eigenvalue extremes need a self-adjoint element")
        thetas = np.asarray(thetas, dtype=float).reshape(-1, self.group.free_rank)
        lo, hi = [], []
        for start in range(0, max(len(thetas), 1), _CHUNK):
            ev = np.linalg.eigvalsh(self.fibers(thetas[start : start + _CHUNK], torsion))
            lo.append(ev[:, 0])
            hi.append(ev[:, -1])
        return np.concatenate(lo), np.concatenate(hi)


def batched_norm(f: np.ndarray, hermitian: bool) -> np.ndarray:
    if f.shape[-1] == 1:
        return np.abs(f[..., 0, 0])
    if hermitian:
        return np.abs(np.linalg.eigvalsh(f)).max(axis=-1)
    return np.linalg.svd(f, compute_uv=False)[..., 0]


def evaluate_fiber(m: MatrixOverGroupAlgebra | GroupAlgebraElement, chi: Character) -> np.ndarray:
    """The k x k complex matrix obtained by evaluating every entry at ``chi``."""
    if isinstance(m, GroupAlgebraElement):
        m = MatrixOverGroupAlgebra.scalar(m)
    if not isinstance(m.group, FGAbelianGroup):
        raise TypeError("evaluation at a character needs an abelian group")
    if chi.orders != m.group.torsion or len(chi.torus_point) != m.group.free_rank:
        raise DimensionError("character does not belong to the dual of the matrix's group")
    return FiberField(m, hermitian=False).fibers(np.array([chi.torus_point]), chi.torsion)[0]


def spectral_norm(f: np.ndarray) -> float:
    """Largest singular value of a complex matrix."""
    f = np.asarray(f, dtype=complex)
    if not np.all(np.isfinite(f)):
        raise ValueError("fiber matrix has non-finite entries")
    if f.size == 0:
        return 0.0
    if np.array_equal(f, f.conj().T):
        return float(np.abs(np.linalg.eigvalsh(f)).max())
    return float(np.linalg.svd(f, compute_uv=False)[0])


# -- estimates ----------------------------------------------------------------------


@dataclass
class ComponentExtrema:
    component: int
    torsion: tuple[int, ...]
    max_norm: float
    min_norm: float
    argmax: tuple[float, ...]
    argmin: tuple[float, ...]

    @property
    def spread(self) -> float:
        return self.max_norm - self.min_norm

    def to_json(self) -> dict:
        return {
            "component": self.component,
            "torsion": list(self.torsion),
            "max_norm": self.max_norm,
            "min_norm": self.min_norm,
            "argmax": list(self.argmax),
            "argmin": list(self.argmin),
        }


@dataclass
class OscillationEstimate:
    components: list[ComponentExtrema]
    omega_lower: float
    omega_upper: float
    method: str
    grid_spec: dict
    flags: tuple[str, ...] = ()
    samples: list[tuple[int, tuple[float, ...], float]] | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "omega_lower": self.omega_lower,
            "omega_upper": self.omega_upper,
            "method": self.method,
            "grid": self.grid_spec,
            "flags": list(self.flags),
            "components": [c.to_json() for c in self.components],
        }


def _uniform_grid(grid: int, dim: int) -> np.ndarray:
    axis = np.arange(grid) / grid
    mesh = np.meshgrid(*([axis] * dim), indexing="ij")
    return np.stack([a.ravel() for a in mesh], axis=-1)


def _dyadic_levels(grid: int) -> list[int]:
    """grid, grid/2, grid/4, ... while the division is exact and the grid stays >= 8.

    Seeding refinements from every coarser nested grid makes the sample set at
    grid 2n a superset of the one at grid n, so the sampled spread can only
    grow under refinement.
    """
    levels = [grid]
    while levels[-1] % 2 == 0 and levels[-1] // 2 >= 8:
        levels.append(levels[-1] // 2)
    return levels


def _zoom_offsets(dim: int) -> np.ndarray:
    steps = np.arange(-ZOOM, ZOOM + 1) / ZOOM
    mesh = np.meshgrid(*([steps] * dim), indexing="ij")
    return np.stack([a.ravel() for a in mesh], axis=-1)


def _sample_component(
    values: Callable[[np.ndarray], np.ndarray], dim: int, grid: int, refine: int
) -> tuple[np.ndarray, np.ndarray]:
    """Sample points and scalar values on one torus: uniform grid plus zooms around extrema."""
    pts = _uniform_grid(grid, dim)
    vals = values(pts)
    all_pts, all_vals = [pts], [vals]
    idx = np.indices((grid,) * dim).reshape(dim, -1).T
    offsets = _zoom_offsets(dim)
    for level in _dyadic_levels(grid):
        step = grid // level
        mask = np.all(idx % step == 0, axis=1)
        sub_pts, sub_vals = pts[mask], vals[mask]
        for pick in (np.argmax, np.argmin):
            center = sub_pts[pick(sub_vals)]
            cell = 1.0 / level
            for _ in range(refine):
                zp = np.mod(center + offsets * cell, 1.0)
                zv = values(zp)
                all_pts.append(zp)
                all_vals.append(zv)
                center = zp[pick(zv)]
                cell /= ZOOM
    return np.concatenate(all_pts), np.concatenate(all_vals)


def oscillation_sampled(
    m: MatrixOverGroupAlgebra | GroupAlgebraElement,
    dual: DualDescription | None = None,
    grid: int = DEFAULT_GRID,
    refine: int = DEFAULT_REFINE,
    components_cap: int = DEFAULT_COMPONENTS_CAP,
    components: str = "auto",
    seed: int = 0,
    singular_values: bool = False,
    keep_samples: bool = False,
) -> OscillationEstimate:
    """Sampled bracket [omega_lower, omega_upper] for the oscillation of ``m``.

    ``m`` must be self-adjoint unless ``singular_values`` is set, in which case
    fiber norms are computed from singular values.
    """
    if isinstance(m, GroupAlgebraElement):
        m = MatrixOverGroupAlgebra.scalar(m)
    dual = dual or DualDescription(m.group)
    if dual.group != m.group:
        raise DimensionError("dual does not belong to the matrix's group")
    hermitian = m.is_self_adjoint()
    if not hermitian and not singular_values:
        raise ValueError("element is not self-adjoint; pass singular_values=True to use singular values")
    upper = float(m.norm_upper_bound())
    spec = {"grid": grid, "refine": refine, "zoom": ZOOM, "components_cap": components_cap}
    if dual.dimension == 0:
        comps = [ComponentExtrema(i, dual.component(i), 0.0, 0.0, (), ()) for i in range(min(dual.n_components, 1))]
        return OscillationEstimate(comps, 0.0, 0.0, "sampled", spec, ("zero-dimensional",))
    if grid < 1 or refine < 0:
        raise ValueError("grid must be positive and refine non-negative")
    field_ = FiberField(m, hermitian=hermitian)
    ids, sampled = dual.select_components(components_cap, components, seed)
    extrema, samples = [], [] if keep_samples else None
    for cid in ids:
        tors = dual.component(cid)
        pts, vals = _sample_component(lambda p: field_.norms(p, tors), dual.dimension, grid, refine)
        i_max, i_min = int(np.argmax(vals)), int(np.argmin(vals))
        extrema.append(
            ComponentExtrema(cid, tors, float(vals[i_max]), float(vals[i_min]), tuple(pts[i_max]), tuple(pts[i_min]))
        )
        if samples is not None:
            samples.extend((cid, tuple(p), float(v)) for p, v in zip(pts, vals))
    lower = max(c.spread for c in extrema)
    flags = ("component-sampled",) if sampled else ()
    return OscillationEstimate(extrema, lower, max(upper, lower), "sampled", spec, flags, samples)


def beta_diagonal_entries(m: MatrixOverGroupAlgebra) -> list[AbelianElement] | None:
    """The d_i if ``m`` equals diag(beta(d_1), ..., beta(d_k)), else None."""
    if not isinstance(m.group, FGAbelianGroup) or not m.is_diagonal():
        return None
    out = []
    for x in m.diagonal_entries():
        if not x:
            out.append(m.group.identity)
            continue
        others = [g for g in x.support if g != m.group.identity]
        if not others or beta(m.group, others[0]) != x:
            return None
        out.append(others[0])
    return out


def oscillation_exact_beta_diagonal(
    entries: Sequence[AbelianElement] | MatrixOverGroupAlgebra, dual: DualDescription
) -> OscillationEstimate:
    """Closed-form oscillation of diag(beta(d_1), ..., beta(d_k)).

    The trivial character sends every beta(d_i) to 0.  If some d_i has
    infinite order, a character on the identity torus with chi(d_i) = -1
    gives fiber norm 2, the maximum possible, so the oscillation is 2.  If
    every d_i is torsion, chi(d_i) only depends on the torsion coordinates of
    chi and the fiber norm is constant on each torus, so the oscillation is 0.
    """
    if isinstance(entries, MatrixOverGroupAlgebra):
        found = beta_diagonal_entries(entries)
        if found is None:
            raise NotBetaDiagonal("matrix is not of the form diag(beta(d_i)); use the sampled path")
        entries = found
    group = dual.group
    for d in entries:
        if not group.contains(d):
            raise DimensionError(f"{d} is not an element of {group}")
    spec = {"closed_form": True}
    zero = (0.0,) * dual.dimension
    witness = next((d for d in entries if not d.is_torsion()), None)
    if witness is None:
        return OscillationEstimate([], 0.0, 0.0, "exact-diagonal", spec)
    j = next(i for i, f in enumerate(witness.free) if f != 0)
    theta = [0.0] * dual.dimension
    theta[j] = float(Fraction(1, 2 * witness.free[j]) % 1)
    comp = ComponentExtrema(0, dual.component(0), 2.0, 0.0, tuple(theta), zero)
    return OscillationEstimate([comp], 2.0, 2.0, "exact-diagonal", spec)


# -- distance to finite spectrum ---------------------------------------------------------


@dataclass
class DistanceBracket:
    lower: float
    upper: float
    method: str
    shift: float | None = None

    def to_json(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "method": self.method, "shift": self.shift}


def shifted_beta_diagonal(m: MatrixOverGroupAlgebra) -> tuple[Fraction, Fraction, list[AbelianElement]] | None:
    """Write ``m`` as alpha*1 + c*diag(beta(d_i)) with real alpha, c, if possible."""
    if not isinstance(m.group, FGAbelianGroup) or not m.is_diagonal():
        return None
    e = m.group.identity
    alpha = c = None
    ds = []
    for x in m.diagonal_entries():
        others = [g for g in x.support if g != e]
        if not others:
            ds.append(e)
            continue
        d = others[0]
        w = x[d] if m.group.inv(d) != d else x[d] / 2
        if w.im != 0:
            return None
        ci = -2 * w.re
        ai = x[e] - ci
        if ai.im != 0 or x != GroupAlgebraElement.unit(m.group).scale(ai) + beta(m.group, d).scale(ci):
            return None
        if alpha is None:
            alpha, c = ai.re, ci
        elif (alpha, c) != (ai.re, ci):
            return None
        ds.append(d)
    if alpha is None:
        # scalar matrix: every entry has support {e}
        vals = {x[e] for x in m.diagonal_entries()}
        if len(vals) != 1 or next(iter(vals)).im != 0:
            return None
        return next(iter(vals)).re, Fraction(0), ds
    for x, d in zip(m.diagonal_entries(), ds):
        if d == e and x[e] != alpha:
            return None
    return alpha, c, ds


def finite_spectrum_distance_bracket(
    m: MatrixOverGroupAlgebra | GroupAlgebraElement,
    dual: DualDescription | None = None,
    grid: int = DEFAULT_GRID,
    refine: int = DEFAULT_REFINE,
    components_cap: int = DEFAULT_COMPONENTS_CAP,
    components: str = "auto",
    seed: int = 0,
) -> DistanceBracket:
    """Bracket for the distance from ``m`` to self-adjoint elements of finite spectrum.

    Lower bound: omega(m - lambda)/2 for scalar shifts lambda, since an element
    within eps/2 of a finite-spectrum one has oscillation at most eps and the
    distance is shift invariant.  Upper bound: the norm bound of m - lambda,
    because lambda*1 itself has finite spectrum.
    """
    if isinstance(m, GroupAlgebraElement):
        m = MatrixOverGroupAlgebra.scalar(m)
    dual = dual or DualDescription(m.group)
    if not m.is_self_adjoint():
        raise ValueError("distance bracket needs a self-adjoint element")
    shifted = shifted_beta_diagonal(m)
    if shifted is not None:
        alpha, c, ds = shifted
        if c != 0 and any(not d.is_torsion() for d in ds):
            return DistanceBracket(float(abs(c)), float(abs(c)), "exact-diagonal", float(alpha + c))
        # locally constant on every torus: finite spectrum over finitely many components
        return DistanceBracket(0.0, 0.0, "exact-diagonal", float(alpha))

    if dual.dimension == 0:
        return DistanceBracket(0.0, 0.0, "zero-dimensional")
    field_ = FiberField(m, hermitian=True)
    ids, _ = dual.select_components(components_cap, components, seed)
    per_comp = []
    for cid in ids:
        tors = dual.component(cid)
        pts, norms = _sample_component(lambda p: field_.norms(p, tors), dual.dimension, grid, refine)
        per_comp.append(field_.eig_extremes(pts, tors))
    lo = min(float(a.min()) for a, _ in per_comp)
    hi = max(float(b.max()) for _, b in per_comp)
    candidates = sorted({0.0, lo, hi, (lo + hi) / 2, *np.linspace(lo, hi, 33).tolist()})
    lower, best_shift = 0.0, 0.0
    for lam in candidates:
        spread = max(float((np.maximum(b - lam, lam - a)).max() - (np.maximum(b - lam, lam - a)).min()) for a, b in per_comp)
        if spread / 2 > lower:
            lower, best_shift = spread / 2, lam
    upper = math.inf
    k = m.size
    for lam in candidates + [float(x[m.group.identity].re) for x in m.diagonal_entries()]:
        q = Fraction(lam).limit_denominator(10**6)
        shifted_m = m - MatrixOverGroupAlgebra.identity(m.group, k).scale(q)
        upper = min(upper, float(shifted_m.norm_upper_bound()))
    return DistanceBracket(lower, max(upper, lower), "sampled", best_shift)


# -- audits ------------------------------------------------------------------------------


def fixed_characters(dual: DualDescription, grid: int, components_cap: int = DEFAULT_COMPONENTS_CAP) -> list[tuple[tuple[int, ...], np.ndarray]]:
    """A fixed character set: the uniform grid on every (selected) torus."""
    ids, _ = dual.select_components(components_cap, "sample", 0)
    pts = _uniform_grid(grid, dual.dimension) if dual.dimension else np.zeros((1, 0))
    return [(dual.component(i), pts) for i in ids]


def _sampled_spread_and_sup(m: MatrixOverGroupAlgebra, chars) -> tuple[float, float]:
    f = FiberField(m)
    spread, sup = 0.0, 0.0
    for tors, pts in chars:
        v = f.norms(pts, tors)
        spread = max(spread, float(v.max() - v.min()))
        sup = max(sup, float(v.max()))
    return spread, sup


@dataclass
class LipschitzReport:
    omega_m: float
    omega_mp: float
    norm_p: float
    slack: float

    @property
    def lhs(self) -> float:
        return abs(self.omega_m - self.omega_mp)

    @property
    def rhs(self) -> float:
        return 2 * self.norm_p + self.slack

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    def to_json(self) -> dict:
        return {"omega_m": self.omega_m, "omega_m_plus_p": self.omega_mp, "norm_p": self.norm_p, "holds": self.holds}


def lipschitz_audit(
    m: MatrixOverGroupAlgebra,
    p: MatrixOverGroupAlgebra,
    dual: DualDescription | None = None,
    grid: int = 32,
    slack: float = 0.0,
) -> LipschitzReport:
    """Check |omega(m) - omega(m+p)| <= 2 ||p|| with every quantity taken on one fixed character set."""
    dual = dual or DualDescription(m.group)
    chars = fixed_characters(dual, grid)
    om, _ = _sampled_spread_and_sup(m, chars)
    omp, _ = _sampled_spread_and_sup(m + p, chars)
    _, norm_p = _sampled_spread_and_sup(p, chars)
    return LipschitzReport(om, omp, norm_p, slack)


@dataclass
class FiniteSpectrumReport:
    omega: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.omega <= self.tolerance


def finite_spectrum_zero_oscillation_audit(
    u: Callable[[np.ndarray], np.ndarray],
    diag: Sequence[float],
    dim: int = 1,
    grid: int = DEFAULT_GRID,
    tolerance: float = 1e-6,
) -> FiniteSpectrumReport:
    """Sampled oscillation of theta -> u(theta) D u(theta)* over a torus.

    Such a field has finite spectrum, so its oscillation must vanish.
    """
    d = np.diag(np.asarray(diag, dtype=float)).astype(complex)
    pts = _uniform_grid(grid, dim)
    norms = []
    for theta in pts:
        w = np.asarray(u(theta), dtype=complex)
        norms.append(spectral_norm(w @ d @ w.conj().T))
    norms = np.array(norms)
    return FiniteSpectrumReport(float(norms.max() - norms.min()), tolerance)


def write_surface_csv(estimate: OscillationEstimate, path, dim: int) -> None:
    """Dump sampled fiber norms as ``component,theta_1,...,theta_r,norm`` rows."""
    if estimate.samples is None:
        raise ValueError("estimate was computed without keep_samples=True")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["component", *(f"theta_{i + 1}" for i in range(dim)), "norm"])
        for cid, theta, value in estimate.samples:
            w.writerow([cid, *(format(t, ".12g") for t in theta), format(value, ".12g")])
