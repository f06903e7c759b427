"""Polynomial charts of real maps P^1 -> P^(2n-1) and the orientation of gluing.

A real map for the fixed-point-free involutions is written through its roots:
coordinate 2i-1 is A_i prod(x - a_{i,r} y) and coordinate 2i is
conj(A_i) prod(conj(a_{i,r}) x + y), with [A] in RP^(2n-1) = (C^n - 0)/R^*.
Smoothing a three-component curve (a real central component of degree d2
plus two conjugate bubbles of degree d1 attached at c and -1/conj(c)) moves
2 d1 roots per coordinate pair; half of them move holomorphically in the
bubble parameters and half antiholomorphically.  :func:`jacobian_sign`
measures the resulting orientation sign by finite differences.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

__all__ = [
    "RealMapChart",
    "BubbleConfiguration",
    "SignCell",
    "SignGrid",
    "InconclusiveError",
    "eta_p1",
    "eta_target",
    "real_map_eval",
    "check_reality",
    "reality_residual",
    "glued_family_eval",
    "coordinate_polynomials",
    "h_c",
    "phi_tilde",
    "phi_tilde_real",
    "jacobian_sign",
    "sign_grid",
    "sample_chart",
    "sample_configuration",
]

ROOT_TOL = 1e-9


class InconclusiveError(RuntimeError):
    """Every sample was rejected as ill-conditioned."""


def eta_p1(point) -> np.ndarray:
    """[x, y] -> [-conj(y), conj(x)] on P^1."""
    x, y = np.asarray(point, dtype=complex)
    return np.array([-np.conj(y), np.conj(x)])


def eta_target(z) -> np.ndarray:
    """[z_1, z_2, ...] -> [-conj(z_2), conj(z_1), ...] on P^(2n-1)."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    out[0::2] = -np.conj(z[1::2])
    out[1::2] = np.conj(z[0::2])
    return out


def _common_root(lists: Sequence[np.ndarray], tol: float) -> bool:
    if any(len(lst) == 0 for lst in lists):
        return False
    for z in lists[0]:
        if all(np.min(np.abs(lst - z)) < tol * max(1.0, abs(z)) for lst in lists[1:]):
            return True
    return False


@dataclass
class RealMapChart:
    """Root/scale data of a real map of degree ``d2`` into P^(2n-1)."""

    n: int
    d2: int
    roots: np.ndarray
    scales: np.ndarray

    def __post_init__(self):
        self.roots = np.asarray(self.roots, dtype=complex).reshape(self.n, self.d2)
        self.scales = np.asarray(self.scales, dtype=complex).reshape(self.n)
        if self.n < 1 or self.d2 < 1:
            raise ValueError("need n >= 1 and d2 >= 1")
        if not np.any(self.scales != 0):
            raise ValueError("scales A_i must not all vanish")
        if np.any(self.roots == 0):
            raise ValueError("roots must be nonzero")
        if self.is_degenerate():
            raise ValueError("chart is degenerate: all coordinates share a root")

    def is_degenerate(self, tol: float = ROOT_TOL) -> bool:
        # a zero scale kills a whole coordinate pair: it imposes no condition
        live = [i for i in range(self.n) if self.scales[i] != 0]
        lists = [self.roots[i] for i in live] + [-1 / np.conj(self.roots[i]) for i in live]
        return _common_root(lists, tol)

    @property
    def degree(self) -> int:
        return self.d2


def real_map_eval(chart: RealMapChart, point) -> np.ndarray:
    """Homogeneous coordinates of the chart's map at ``point = [x, y]``."""
    x, y = np.asarray(point, dtype=complex)
    if x == 0 and y == 0:
        raise ValueError("[0, 0] is not a point of P^1")
    out = np.empty(2 * chart.n, dtype=complex)
    a = chart.roots
    out[0::2] = chart.scales * np.prod(x - a * y, axis=1)
    out[1::2] = np.conj(chart.scales) * np.prod(np.conj(a) * x + y, axis=1)
    return out


def _normalized(p: np.ndarray, j: int) -> np.ndarray:
    return p / p[j]


def reality_residual(evaluator: Callable[[np.ndarray], np.ndarray], samples,
                     domain_involution=eta_p1, target_involution=eta_target) -> float:
    """Largest coordinate discrepancy between u(c(p)) and phi(u(p)) over samples.

    Both points are scaled so that the largest-magnitude coordinate of u(c(p))
    becomes 1.
    """
    worst = 0.0
    for p in samples:
        left = np.asarray(evaluator(domain_involution(p)), dtype=complex)
        right = np.asarray(target_involution(evaluator(np.asarray(p, dtype=complex))))
        j = int(np.argmax(np.abs(left)))
        if right[j] == 0:
            return float("inf")
        worst = max(worst, float(np.max(np.abs(_normalized(left, j) - _normalized(right, j)))))
    return worst


def check_reality(evaluator: Callable[[np.ndarray], np.ndarray], samples, tolerance: float = 1e-9,
                  domain_involution=eta_p1, target_involution=eta_target) -> bool:
    samples = list(samples)
    if not samples:
        raise ValueError("check_reality needs at least one sample")
    return reality_residual(evaluator, samples, domain_involution, target_involution) < tolerance


@dataclass
class BubbleConfiguration:
    """Central real chart plus two conjugate degree-``d1`` bubbles.

    ``bubble_roots[j, s]`` is b_{j+1; s+1}; the bubbles are attached at c and
    -1/conj(c), and ``v`` is the smoothing parameter (v = 0 is the nodal map).
    """

    n: int
    d1: int
    d2: int
    c: complex
    bubble_roots: np.ndarray
    chart: RealMapChart
    v: complex = 0.0

    def __post_init__(self):
        self.bubble_roots = np.asarray(self.bubble_roots, dtype=complex).reshape(2 * self.n, self.d1)
        if self.d1 < 1:
            raise ValueError("bubble degree d1 must be >= 1")
        if self.chart.n != self.n or self.chart.d2 != self.d2:
            raise ValueError("chart does not match (n, d2)")
        if self.c == 0:
            raise ValueError("node parameter c must be nonzero")
        if np.any(self.bubble_roots == 0):
            raise ValueError("bubble roots must be nonzero")
        if np.any(np.abs(self.bubble_roots * self.v) >= abs(self.c)):
            raise ValueError("need |b v| < |c| for every bubble root")

    @property
    def degree(self) -> int:
        return 2 * self.d1 + self.d2


def _bubble_factors(config: BubbleConfiguration, x, y) -> Tuple[np.ndarray, np.ndarray]:
    moved = config.c + config.bubble_roots * config.v          # (2n, d1)
    hol = x - moved * y                                         # x - (c + b v) y
    anti = np.conj(moved) * x + y                               # conj(c + b v) x + y
    odd = np.prod(hol[0::2] * anti[1::2], axis=1)
    even = np.prod(hol[1::2] * anti[0::2], axis=1)
    return odd, even


def glued_family_eval(config: BubbleConfiguration, point) -> np.ndarray:
    """The smoothed degree 2 d1 + d2 map at parameter ``config.v``."""
    x, y = np.asarray(point, dtype=complex)
    central = real_map_eval(config.chart, (x, y))
    odd, even = _bubble_factors(config, x, y)
    out = central.copy()
    out[0::2] *= odd
    out[1::2] *= even
    return out


def coordinate_polynomials(config: BubbleConfiguration) -> List[np.poly1d]:
    """Dehomogenized coordinates P_j(t, 1) of the glued map, as polynomials in t."""
    chart = config.chart
    moved = config.c + config.bubble_roots * config.v
    polys = []
    for i in range(config.n):
        odd = np.poly1d([chart.scales[i]])
        even = np.poly1d([np.conj(chart.scales[i])])
        for a in chart.roots[i]:
            odd *= np.poly1d([1, -a])
            even *= np.poly1d([np.conj(a), 1])
        for s in range(config.d1):
            p, q = moved[2 * i, s], moved[2 * i + 1, s]
            odd *= np.poly1d([1, -p]) * np.poly1d([np.conj(q), 1])
            even *= np.poly1d([1, -q]) * np.poly1d([np.conj(p), 1])
        polys += [odd, even]
    return polys


def h_c(c: complex, i: int, b):
    """Root contributed by a bubble parameter b: c + b (i odd), -1/conj(c + b) (i even)."""
    b = np.asarray(b, dtype=complex)
    if np.any(np.abs(b) >= abs(c)):
        raise ValueError("h_c needs |b| < |c|")
    if i % 2:
        return c + b
    return -1.0 / np.conj(c + b)


def phi_tilde(n: int, d1: int, d2: int, c: complex, b, a, A) -> Tuple[np.ndarray, np.ndarray]:
    """Coordinate form of gluing: bubble and central data -> roots and scales.

    ``b`` has shape (2n, d1), ``a`` shape (n, d2), ``A`` shape (n,).  Returns
    ``(roots, scales)`` with roots of shape (n, 2 d1 + d2): for the i-th pair
    the odd slots hold c + b_{2i-1,s}, the even slots -1/conj(c + b_{2i,s}),
    then the central roots a_i.  The scales are A_i divided by the product of
    the even-slot roots.  Against the exact smoothed map these scales are off
    by the constant phase i^d1 (up to a real factor), which is orientation
    neutral on RP^(2n-1); see :func:`exact_scales`.
    """
    b = np.asarray(b, dtype=complex).reshape(2 * n, d1)
    a = np.asarray(a, dtype=complex).reshape(n, d2)
    A = np.asarray(A, dtype=complex).reshape(n)
    if d1 == 0:
        return a.copy(), A.copy()
    d = 2 * d1 + d2
    roots = np.empty((n, d), dtype=complex)
    hol = h_c(c, 1, b[0::2])           # (n, d1)
    anti = h_c(c, 2, b[1::2])          # (n, d1)
    roots[:, 0:2 * d1:2] = hol
    roots[:, 1:2 * d1:2] = anti
    roots[:, 2 * d1:] = a
    scales = A / np.prod(anti, axis=1)
    return roots, scales


def exact_scales(d1: int, scales: np.ndarray) -> np.ndarray:
    """Scales reproducing the smoothed map exactly from :func:`phi_tilde` output."""
    return (-1j) ** d1 * np.asarray(scales)


# --- real coordinates ------------------------------------------------------
# RP^(2n-1) is handled in the chart Re(A_1) = 1 with coordinates
# (Im A_1, Re A_2, Im A_2, ..., Re A_n, Im A_n); complex numbers are ordered
# (Re, Im) pairs throughout.

def _rp_to_chart(A: np.ndarray) -> np.ndarray:
    A = A / A[0].real
    coords = np.empty(2 * len(A) - 1)
    coords[0] = A[0].imag
    coords[1::2] = A[1:].real
    coords[2::2] = A[1:].imag
    return coords


def _rp_from_chart(t: np.ndarray, n: int) -> np.ndarray:
    A = np.empty(n, dtype=complex)
    A[0] = 1 + 1j * t[0]
    A[1:] = t[1::2] + 1j * t[2::2]
    return A


def _to_reals(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex).ravel()
    out = np.empty(2 * z.size)
    out[0::2] = z.real
    out[1::2] = z.imag
    return out


def _from_reals(x: np.ndarray, shape) -> np.ndarray:
    return (x[0::2] + 1j * x[1::2]).reshape(shape)


def phi_tilde_real(n: int, d1: int, d2: int, c: complex) -> Callable[[np.ndarray], np.ndarray]:
    """:func:`phi_tilde` as a map between real coordinate vectors.

    Domain order: b_{1,.}, ..., b_{2n,.}, a_{1,.}, ..., a_{n,.}, chart of A.
    Codomain order: roots of pair 1, ..., roots of pair n, chart of the scales.
    Both sides have real dimension 2n(2 d1 + d2) + 2n - 1.
    """
    nb, na = 2 * n * d1, n * d2

    def f(x: np.ndarray) -> np.ndarray:
        b = _from_reals(x[:2 * nb], (2 * n, d1))
        a = _from_reals(x[2 * nb:2 * (nb + na)], (n, d2))
        A = _rp_from_chart(x[2 * (nb + na):], n)
        roots, scales = phi_tilde(n, d1, d2, c, b, a, A)
        return np.concatenate([_to_reals(roots), _rp_to_chart(scales)])

    return f


def domain_dimension(n: int, d1: int, d2: int) -> int:
    return 2 * (2 * n * d1) + 2 * (n * d2) + (2 * n - 1)


def codomain_dimension(n: int, d1: int, d2: int) -> int:
    return 2 * n * (2 * d1 + d2) + (2 * n - 1)


def numerical_jacobian(f: Callable[[np.ndarray], np.ndarray], x: np.ndarray,
                       step: float = 1e-6) -> np.ndarray:
    """Central differences with step ``step * max(1, |x_j|)``."""
    f0 = f(x)
    J = np.empty((f0.size, x.size))
    for j in range(x.size):
        h = step * max(1.0, abs(x[j]))
        xp, xm = x.copy(), x.copy()
        xp[j] += h
        xm[j] -= h
        J[:, j] = (f(xp) - f(xm)) / (2 * h)
    return J


# --- sampling ----------------------------------------------------------------

def _annulus(rng: np.random.Generator, shape, r_min: float, r_max: float) -> np.ndarray:
    r = rng.uniform(r_min, r_max, size=shape)
    theta = rng.uniform(0, 2 * np.pi, size=shape)
    return r * np.exp(1j * theta)


def sample_chart(rng: np.random.Generator, n: int, d2: int) -> RealMapChart:
    """Random nondegenerate chart; roots drawn from the annulus 0.5 <= |a| <= 1.5."""
    for _ in range(100):
        roots = _annulus(rng, (n, d2), 0.5, 1.5)
        scales = rng.normal(size=n) + 1j * rng.normal(size=n)
        try:
            return RealMapChart(n, d2, roots, scales)
        except ValueError:
            continue
    raise InconclusiveError("could not draw a nondegenerate chart")


def sample_configuration(rng: np.random.Generator, n: int, d1: int, d2: int,
                         v: Optional[complex] = None) -> BubbleConfiguration:
    c = complex(_annulus(rng, (), 1.0, 2.0))
    b = _annulus(rng, (2 * n, d1), 0.1, 0.9)
    if v is None:
        v = complex(_annulus(rng, (), 0.05, 0.9 * abs(c)))
    return BubbleConfiguration(n, d1, d2, c, b, sample_chart(rng, n, d2), v)


# --- orientation sign ----------------------------------------------------------

@dataclass
class SignCell:
    n: int
    d1: int
    d2: int
    expected: int
    signs: List[int] = field(default_factory=list)
    rejected: int = 0

    @property
    def accepted(self) -> int:
        return len(self.signs)

    @property
    def sign(self) -> int:
        """Common sign of the accepted samples; 0 if they disagree or none exist."""
        if self.signs and all(s == self.signs[0] for s in self.signs):
            return self.signs[0]
        return 0

    @property
    def passed(self) -> bool:
        return self.accepted > 0 and self.sign == self.expected

    def to_dict(self) -> dict:
        return {"n": self.n, "d1": self.d1, "d2": self.d2, "sign": self.sign,
                "expected": self.expected, "samples": self.accepted,
                "rejected": self.rejected, "passed": self.passed}


@dataclass
class SignGrid:
    cells: List[SignCell] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(cell.passed for cell in self.cells)

    def to_dict(self) -> dict:
        return {"suite": "gluing_sign", "cases": len(self.cells),
                "passed": self.passed,
                "failures": [cell.to_dict() for cell in self.cells if not cell.passed],
                "cells": [cell.to_dict() for cell in self.cells]}

    def to_text(self) -> str:
        lines = []
        for cell in self.cells:
            status = "PASS" if cell.passed else "FAIL"
            lines.append(
                f"{status} n={cell.n} d1={cell.d1} d2={cell.d2}: sign {cell.sign:+d}, "
                f"expected {cell.expected:+d} ({cell.accepted} samples, {cell.rejected} rejected)")
        bad = sum(not cell.passed for cell in self.cells)
        lines.append(f"{'PASS' if self.passed else 'FAIL'} gluing_sign: "
                     f"{len(self.cells)} cells, {bad} failures")
        return "\n".join(lines)


def jacobian_sign(n: int, d1: int, d2: int, samples: int = 5, seed: int = 0,
                  step: float = 1e-6, floor: float = 1e-8,
                  max_draws: Optional[int] = None) -> SignCell:
    """Sign of det d(phi_tilde) at ``samples`` accepted random points.

    A draw is rejected when |det| is below ``floor`` times the product of the
    Jacobian's row norms, or when the image leaves the RP chart (|Re A'_1|
    tiny).  Raises :class:`InconclusiveError` if nothing is accepted.
    """
    if min(n, d1, d2) < 1:
        raise ValueError("need n, d1, d2 >= 1")
    rng = np.random.default_rng([seed, n, d1, d2])
    cell = SignCell(n, d1, d2, expected=-1 if (n * d1) % 2 else 1)
    max_draws = max_draws or 20 * samples
    for _ in range(max_draws):
        if cell.accepted >= samples:
            break
        c = complex(_annulus(rng, (), 1.0, 2.0))
        b = _annulus(rng, (2 * n, d1), 0.1, 0.8) * abs(c)
        chart = sample_chart(rng, n, d2)
        A = chart.scales / chart.scales[0].real
        _, scales = phi_tilde(n, d1, d2, c, b, chart.roots, A)
        if abs(scales[0].real) < 1e-3 * np.max(np.abs(scales)):
            cell.rejected += 1
            continue
        x = np.concatenate([_to_reals(b), _to_reals(chart.roots), _rp_to_chart(A)])
        J = numerical_jacobian(phi_tilde_real(n, d1, d2, c), x, step)
        sign, logdet = np.linalg.slogdet(J)
        row_norms = np.linalg.norm(J, axis=1)
        if sign == 0 or np.any(row_norms == 0) or logdet < np.log(floor) + np.sum(np.log(row_norms)):
            cell.rejected += 1
            continue
        cell.signs.append(int(sign))
    if cell.accepted == 0:
        raise InconclusiveError(f"all samples rejected for n={n}, d1={d1}, d2={d2}")
    return cell


def sign_grid(n_max: int, d1_max: int, d2_max: int, samples: int = 5, seed: int = 0,
              step: float = 1e-6, floor: float = 1e-8) -> SignGrid:
    grid = SignGrid()
    for n in range(1, n_max + 1):
        for d1 in range(1, d1_max + 1):
            for d2 in range(1, d2_max + 1):
                grid.cells.append(jacobian_sign(n, d1, d2, samples, seed, step, floor))
    return grid
