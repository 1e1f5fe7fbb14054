"""The annulus A(R) = {1 < |w| < R}: covering map, lifts, distance brackets.

The disk covers A(R) through an exponential-strip construction; pushing the
disk's Mobius distance through lifts gives certified upper bounds, and
explicit holomorphic maps A(R) -> D give certified lower bounds.  Both sides
are packaged as a DistanceBracket.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np
from scipy.optimize import minimize

from .disk import EPS_BOUNDARY, BlaschkeProduct, _ONE_MINUS, mobius_distance


class AnnulusDomainError(ValueError):
    """A point required to lie in the open annulus does not."""


class BracketOrderError(RuntimeError):
    """Certified lower bound exceeded the upper bound beyond float noise.

    The two bounds are mathematically ordered, so this signals a bug rather
    than a bad input; it is never silently clamped away.
    """


@dataclass(frozen=True)
class AnnulusConfig:
    """Outer radius R of A(R) plus the numeric policy for bound searches."""

    R: float
    lift_range: int = 50
    family_degree: int = 4
    grid_density: int = 3
    seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.R) and self.R > 1.0 + 1e-9):
            raise ValueError(f"outer radius must exceed 1, got R = {self.R!r}")
        for name in ("lift_range", "family_degree", "grid_density"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)!r}")

    @property
    def log_R(self) -> float:
        return math.log(self.R)

    @property
    def sqrt_R(self) -> float:
        return math.sqrt(self.R)


@dataclass(frozen=True)
class DistanceBracket:
    """Certified interval [lower, upper] for a Mobius distance, with witnesses."""

    lower: float
    upper: float
    lower_witness: str
    upper_witness: str

    def __post_init__(self):
        if not (0.0 <= self.lower <= self.upper < 1.0):
            raise ValueError(
                f"bracket must satisfy 0 <= lower <= upper < 1, got "
                f"[{self.lower!r}, {self.upper!r}]"
            )

    @property
    def width(self) -> float:
        return self.upper - self.lower


def _as_annulus_point(cfg: AnnulusConfig, w: complex, name: str = "w") -> complex:
    w = complex(w)
    r = abs(w)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise AnnulusDomainError(f"{name} has non-finite coordinates: {w!r}")
    if not (1.0 < r < cfg.R):
        raise AnnulusDomainError(
            f"{name} must lie in the open annulus 1 < |w| < {cfg.R}, got |{name}| = {r!r}"
        )
    return w


def covering_map(cfg: AnnulusConfig, z: complex) -> complex:
    """Covering map D -> A(R); sends 0 to sqrt(R).

    Computed as sqrt(R) * exp(-(i/pi) * ln R * Log((1-z)/(1+z))) with the
    principal Log.  (1-z)/(1+z) has strictly positive real part on the disk,
    so the principal branch never meets its cut; asserted at runtime.
    """
    z = complex(z)
    if abs(z) >= 1.0:
        raise AnnulusDomainError(f"covering map argument must satisfy |z| < 1, got {abs(z)!r}")
    u = (1.0 - z) / (1.0 + z)
    if u.real <= 0.0:
        raise AssertionError(f"principal-branch safety violated at z = {z!r}")
    return cfg.sqrt_R * cmath.exp(-1j / math.pi * cfg.log_R * cmath.log(u))


def preimage_point(m: int) -> complex:
    """The explicit covering-map preimage x(m) of R^(1 - 1/m), any R > 1.

    x(m) = (1 - e^{i(pi/2 - pi/m)}) / (1 + e^{i(pi/2 - pi/m)}); independent
    of R because the covering map's strip construction is.
    """
    if not isinstance(m, (int, np.integer)) or m < 2:
        raise ValueError(f"preimage index must be an integer >= 2, got {m!r}")
    e = cmath.exp(1j * (math.pi / 2.0 - math.pi / m))
    return (1.0 - e) / (1.0 + e)


def preimage_moduli(ms: np.ndarray) -> np.ndarray:
    """|x(m)| for an integer array of indices m >= 2 (vectorized)."""
    ms = np.asarray(ms)
    if np.any(ms < 2):
        raise ValueError("preimage indices must all be >= 2")
    e = np.exp(1j * (math.pi / 2.0 - math.pi / ms))
    return np.abs((1.0 - e) / (1.0 + e))


def preimage_modulus_sq_formula(ms: np.ndarray) -> np.ndarray:
    """|x(m)|^2 via the closed trigonometric form (1-sin(pi/m))/(1+sin(pi/m))."""
    ms = np.asarray(ms, dtype=float)
    s = np.sin(math.pi / ms)
    return (1.0 - s) / (1.0 + s)


def _lifts_with_index(cfg: AnnulusConfig, w: complex) -> List[Tuple[int, complex]]:
    w = _as_annulus_point(cfg, w)
    u = math.log(abs(w)) - 0.5 * cfg.log_R
    theta0 = cmath.phase(w)
    out = []
    scale = math.pi / cfg.log_R
    for k in range(-cfg.lift_range, cfg.lift_range + 1):
        theta = theta0 + 2.0 * math.pi * k
        L = complex(-scale * theta, scale * u)
        z = -cmath.tanh(0.5 * L)  # (1 - e^L)/(1 + e^L)
        # Far deck translates collapse onto the unit circle in doubles and
        # carry no usable geometry; a lift is kept only if it verifiably
        # round-trips through the covering map, so the returned list is
        # self-certifying.
        if abs(z) <= 1.0 - EPS_BOUNDARY and abs(covering_map(cfg, z) - w) <= 1e-10 * abs(w):
            out.append((k, z))
    return out


def lift_enumeration(cfg: AnnulusConfig, w: complex) -> List[complex]:
    """All float-representable covering-map lifts of w within the deck range.

    Inverts the strip construction with log-branch shifts 2*pi*i*k for
    |k| <= lift_range; every returned z satisfies covering_map(z) = w to
    high relative accuracy.
    """
    return [z for _, z in _lifts_with_index(cfg, w)]


# ---------------------------------------------------------------------------
# Lower bounds: explicit holomorphic test maps A(R) -> D.
# ---------------------------------------------------------------------------

def _squash(u: complex) -> complex:
    # R^2 -> D, radially: |result| < 1 always; used to keep optimizer zeros legal.
    return u / (1.0 + abs(u)) * (1.0 - 1e-9)


def _unsquash(z: complex) -> complex:
    r = abs(z)
    if r >= 1.0:
        raise ValueError("unsquash argument must lie in the open disk")
    return z / (1.0 - r)


def _mixed_product(zeros_outer: np.ndarray, zeros_inner: np.ndarray, R: float, w: complex) -> complex:
    """B1(w/R) * B2(1/w) with Blaschke zero arrays for the two base maps."""
    v = 1.0 + 0.0j
    x = w / R
    for z in zeros_outer:
        v *= (x - z) / (1.0 - np.conj(z) * x)
    y = 1.0 / w
    for z in zeros_inner:
        v *= (y - z) / (1.0 - np.conj(z) * y)
    return v


def _optimizer_seeds(cfg: AnnulusConfig, n_zeros: int) -> List[np.ndarray]:
    g = cfg.grid_density
    seeds = []
    for i in range(g):
        r = (i + 1) / (g + 1)
        u = r / (1.0 - r)
        for j in range(g):
            theta = 2.0 * math.pi * j / g
            p = np.empty(2 * n_zeros)
            p[0::2] = u * math.cos(theta)
            p[1::2] = u * math.sin(theta)
            seeds.append(p)
    # The seed only rotates the deterministic grid order; results for a full
    # optimization are order-independent, but ties resolve reproducibly.
    shift = cfg.seed % len(seeds)
    return seeds[shift:] + seeds[:shift]


def annulus_lower_bound(cfg: AnnulusConfig, a: complex, b: complex) -> Tuple[float, str]:
    """Best certified lower bound for the Mobius distance C*_{A(R)}(a, b).

    Maximizes mobius(f(a), f(b)) over an explicit family of holomorphic maps
    f: A(R) -> D: the radial quotients w/R and 1/w, mixed monomials
    w^(j-k)/R^j, and optimizer-refined products B1(w/R) * B2(1/w) of Blaschke
    compositions.  Every family member certifies, so slack optimization never
    invalidates the result.
    """
    a = _as_annulus_point(cfg, a, "a")
    b = _as_annulus_point(cfg, b, "b")
    R = cfg.R

    best = 0.0
    witness = "trivial (identical points)" if a == b else "w/R"

    candidates: List[Tuple[str, Callable[[complex], complex]]] = [
        ("w/R", lambda w: w / R),
        ("1/w", lambda w: 1.0 / w),
    ]
    # Mixed monomials w^(j-k)/R^j stay in D on the annulus for j, k >= 1 and
    # do not factor through either radial quotient, unlike pure powers.
    for j in range(1, cfg.family_degree):
        for k in range(1, cfg.family_degree - j + 1):
            candidates.append(
                (f"w^{j - k}/R^{j}", lambda w, j=j, k=k: w ** (j - k) / R ** j)
            )
    for label, f in candidates:
        v = mobius_distance(f(a), f(b))
        if v > best:
            best, witness = v, label

    # Blaschke-composition refinement.  Compositions B(w/R) and B(1/w) alone
    # cannot beat their base maps (they contract the Mobius distance), so the
    # optimizer works on genuinely mixed products.
    if cfg.family_degree >= 2:
        for d1 in range(1, cfg.family_degree):
            for d2 in range(1, cfg.family_degree - d1 + 1):

                def objective(x, d1=d1, d2=d2):
                    zo = np.array([_squash(complex(x[2 * i], x[2 * i + 1])) for i in range(d1)])
                    zi = np.array(
                        [_squash(complex(x[2 * (d1 + i)], x[2 * (d1 + i) + 1])) for i in range(d2)]
                    )
                    fa = _mixed_product(zo, zi, R, a)
                    fb = _mixed_product(zo, zi, R, b)
                    return -mobius_distance(fa, fb)

                for x0 in _optimizer_seeds(cfg, d1 + d2):
                    res = minimize(
                        objective,
                        x0,
                        method="Nelder-Mead",
                        options={"maxiter": 200, "fatol": 1e-10, "xatol": 1e-8},
                    )
                    v = -objective(res.x)
                    if v > best:
                        zs = [
                            _squash(complex(res.x[2 * i], res.x[2 * i + 1]))
                            for i in range(d1 + d2)
                        ]
                        best = v
                        witness = (
                            f"B1(w/R)*B2(1/w) degrees ({d1},{d2}), zeros "
                            + ",".join(f"{z.real:.6g}{z.imag:+.6g}i" for z in zs)
                        )
    return best, witness


def _principal_log_lift(cfg: AnnulusConfig, w: complex) -> complex:
    """The k = 0 lift expressed in the logarithmic strip: the lift itself is
    z = -tanh(L/2), but L stays well-conditioned when z saturates at the
    unit circle (thin annuli stretch lifts against the boundary)."""
    scale = math.pi / cfg.log_R
    u = math.log(abs(w)) - 0.5 * cfg.log_R
    return complex(-scale * cmath.phase(w), scale * u)


def _lift_mobius_distance(L1: complex, L2: complex) -> float:
    """mobius_distance(-tanh(L1/2), -tanh(L2/2)) computed in L-space.

    Identity: |(z1 - z2)/(1 - conj(z1) z2)| = |sinh((L1 - L2)/2)| /
    |cosh((conj(L1) - L2)/2)|.  With x = Re(L1 - L2)/2, p = Im(L1 - L2)/2,
    q = Im(L1 + L2)/2 this is sqrt((sinh^2 x + sin^2 p)/(sinh^2 x + cos^2 q));
    q lies in (-pi/2, pi/2) so the denominator never vanishes.
    """
    x = 0.5 * (L1.real - L2.real)
    p = 0.5 * (L1.imag - L2.imag)
    q = 0.5 * (L1.imag + L2.imag)
    if abs(x) > 350.0:  # sinh overflows; the distance is 1 to double precision
        return _ONE_MINUS
    sh2 = math.sinh(x) ** 2
    d = math.sqrt((sh2 + math.sin(p) ** 2) / (sh2 + math.cos(q) ** 2))
    return min(d, _ONE_MINUS)


def annulus_upper_bound(cfg: AnnulusConfig, a: complex, b: complex) -> Tuple[float, str]:
    """Certified upper bound: min over covering-map lifts of the disk distance.

    C*_{A(R)} is dominated by the Kobayashi distance of A(R), which equals
    the minimum over lifts; deck transformations are disk automorphisms, so
    fixing one principal lift loses nothing.  Both orientations are taken to
    make the result symmetric bit-for-bit.  Distances run in the logarithmic
    strip, where lifts are exact even when they crowd the unit circle.
    """
    a = _as_annulus_point(cfg, a, "a")
    b = _as_annulus_point(cfg, b, "b")
    best = math.inf
    witness = ""
    shift = 2.0 * math.pi ** 2 / cfg.log_R  # deck step k -> k+1 in L-space
    for first, second, tag in ((a, b, "a->b"), (b, a, "b->a")):
        L0 = _principal_log_lift(cfg, first)
        Ls = _principal_log_lift(cfg, second)
        for k in range(-cfg.lift_range, cfg.lift_range + 1):
            d = _lift_mobius_distance(L0, Ls - k * shift)
            if d < best:
                best = d
                witness = f"lift k={k} ({tag}) against principal lift"
    return best, witness


def annulus_distance_bracket(cfg: AnnulusConfig, a: complex, b: complex) -> DistanceBracket:
    """Two-sided certified bracket for C*_{A(R)}(a, b)."""
    lower, lw = annulus_lower_bound(cfg, a, b)
    upper, uw = annulus_upper_bound(cfg, a, b)
    if lower > upper + 1e-9:
        raise BracketOrderError(
            f"lower bound {lower!r} exceeds upper bound {upper!r} for pair ({a!r}, {b!r})"
        )
    return DistanceBracket(min(lower, upper), upper, lw, uw)
