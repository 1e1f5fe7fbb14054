"""Finite truncation of the glued space: sheets of A(R) identified at
attachment points, holomorphic test families on the quotient, and
cross-sheet distance brackets plus non-compactness / completeness probes.

Sheet n (n >= 1) carries 2^n attachment points R^(1 - 1/j),
j = 2^n .. 2^(n+1) - 1, each identified with the same coordinate on sheet 0.
Identification is decided by exact integer indices, never by float equality:
the attachment coordinates crowd together as n grows and float keys would
mis-glue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .annulus import (
    AnnulusConfig,
    AnnulusDomainError,
    BracketOrderError,
    DistanceBracket,
    annulus_lower_bound,
    annulus_upper_bound,
    _as_annulus_point,
)
from .disk import BlaschkeProduct, _atanh, mobius_distance
from .sweeps import TWO_OVER_E, verify_one_over_e_products

# Glue-index/coordinate agreement tolerance when both are supplied.
GLUE_COORD_TOL = 1e-9

# Cap on triangle-path exits per sheet; any subset of paths still certifies
# an upper bound, and 32 exits keep cross-sheet queries fast.
MAX_EXITS = 32


class EvaluationEscapeError(RuntimeError):
    """A test-family evaluation left the unit disk: the family is invalid."""


@dataclass(frozen=True)
class SpaceConfig:
    """Annulus parameters plus the truncation depth N (sheets 0..N)."""

    annulus: AnnulusConfig
    sheets: int = 12

    def __post_init__(self):
        if not 1 <= self.sheets <= 20:
            raise ValueError(f"sheet truncation must lie in [1, 20], got {self.sheets!r}")


@dataclass(frozen=True)
class GluePointIndex:
    """Exact integer name (sheet n, slot m) of the attachment point
    R^(1 - 1/(2^n + m - 1))."""

    sheet: int
    slot: int

    def __post_init__(self):
        if self.sheet < 1:
            raise ValueError(f"glue sheet must be >= 1, got {self.sheet!r}")
        if not 1 <= self.slot <= 2 ** self.sheet:
            raise ValueError(
                f"glue slot must lie in [1, {2 ** self.sheet}], got {self.slot!r}"
            )

    @property
    def denominator(self) -> int:
        return 2 ** self.sheet + self.slot - 1

    def coordinate(self, R: float) -> float:
        return R ** (1.0 - 1.0 / self.denominator)


@dataclass(frozen=True)
class SpacePoint:
    """Canonicalized point of the truncated space: sheet index + coordinate.

    Identified points carry the sheet-0 representative; the glue index is
    bookkeeping and does not participate in equality.
    """

    sheet: int
    coord: complex
    glue: Optional[GluePointIndex] = field(default=None, compare=False)


def glue_points(cfg: SpaceConfig, n: int) -> List[GluePointIndex]:
    """The 2^n attachment indices of sheet n, coordinates increasing in slot."""
    if not 1 <= n <= cfg.sheets:
        raise ValueError(f"sheet index must lie in [1, {cfg.sheets}], got {n!r}")
    return [GluePointIndex(n, m) for m in range(1, 2 ** n + 1)]


def glue_coordinates(cfg: SpaceConfig, n: int) -> np.ndarray:
    R = cfg.annulus.R
    js = 2 ** n + np.arange(2 ** n)
    return R ** (1.0 - 1.0 / js)


def canonicalize(
    cfg: SpaceConfig,
    sheet: int,
    coord: Optional[complex] = None,
    glue: Optional[GluePointIndex] = None,
) -> SpacePoint:
    """Collapse identified points onto their sheet-0 representative.

    A point is identified iff an exact glue index is supplied and the point
    lives on sheet 0 or on the glue index's own sheet; a bare coordinate that
    happens to equal an attachment value is left alone.  Idempotent.
    """
    if not 0 <= sheet <= cfg.sheets:
        raise ValueError(f"sheet must lie in [0, {cfg.sheets}], got {sheet!r}")
    if glue is not None:
        if glue.sheet > cfg.sheets:
            raise ValueError(
                f"glue index names sheet {glue.sheet} beyond truncation {cfg.sheets}"
            )
        exact = complex(glue.coordinate(cfg.annulus.R))
        if coord is not None and abs(complex(coord) - exact) > GLUE_COORD_TOL:
            raise ValueError(
                f"supplied coordinate {coord!r} does not match glue point "
                f"({glue.sheet},{glue.slot}) at {exact.real!r}"
            )
        if sheet == 0 or sheet == glue.sheet:
            return SpacePoint(0, exact, glue)
        coord = exact  # valid coordinate, but no identification applies
    if coord is None:
        raise ValueError("a coordinate or a glue index is required")
    coord = _as_annulus_point(cfg.annulus, coord, "coord")
    return SpacePoint(sheet, coord, None)


def recanonicalize(cfg: SpaceConfig, p: SpacePoint) -> SpacePoint:
    return canonicalize(cfg, p.sheet, p.coord, p.glue)


def format_point(p: SpacePoint) -> str:
    """Text encoding: "glue:n,m" for identified points, else "sheet:re,im"."""
    if p.glue is not None:
        return f"glue:{p.glue.sheet},{p.glue.slot}"
    return f"{p.sheet}:{format(p.coord.real, '.17g')},{format(p.coord.imag, '.17g')}"


def parse_point(cfg: SpaceConfig, text: str) -> SpacePoint:
    """Parse "sheet:re,im" or "glue:n,m" into a canonical SpacePoint."""
    head, _, tail = text.partition(":")
    if not tail:
        raise ValueError(f"malformed point {text!r}: expected 'sheet:re,im' or 'glue:n,m'")
    parts = tail.split(",")
    if len(parts) != 2:
        raise ValueError(f"malformed point {text!r}: expected two comma-separated fields")
    if head == "glue":
        return canonicalize(cfg, 0, glue=GluePointIndex(int(parts[0]), int(parts[1])))
    return canonicalize(cfg, int(head), complex(float(parts[0]), float(parts[1])))


# ---------------------------------------------------------------------------
# Admissible holomorphic test functions on the quotient.
# ---------------------------------------------------------------------------

@lru_cache(maxsize=128)
def _sheet_blaschke(R: float, target: int, extra: tuple) -> BlaschkeProduct:
    # Zeros are the attachment coordinates of the target sheet scaled into
    # the disk by 1/R, computed exactly as evaluation points are, so the
    # vanishing at glue points is float-exact.
    js = [2 ** target + m for m in range(2 ** target)]
    zeros = tuple(R ** (1.0 - 1.0 / j) / R for j in js) + extra
    return BlaschkeProduct(zeros)


@dataclass(frozen=True)
class AdmissibleFunction:
    """A holomorphic map (truncated space) -> D from one of three families.

    pullback        : an annulus test map composed with the sheet-forgetting
                      projection; constant across sheets.
    sheet-supported : a Blaschke composition over w/R vanishing on the glue
                      set of one target sheet, and 0 on every other sheet.
    phi-style       : the halved difference of a sheet-supported map between
                      a sheet-n and the sheet-0 representative, pulled back
                      through the projection.
    """

    kind: str
    label: str
    base: Optional[Callable[[complex], complex]] = None
    target_sheet: Optional[int] = None
    extra_zeros: tuple = ()

    @staticmethod
    def pullback(base: Callable[[complex], complex], label: str) -> "AdmissibleFunction":
        return AdmissibleFunction(kind="pullback", label=f"pullback[{label}]", base=base)

    @staticmethod
    def sheet_supported(target_sheet: int, extra_zeros: tuple = ()) -> "AdmissibleFunction":
        if target_sheet < 1:
            raise ValueError("sheet-supported functions require a target sheet >= 1")
        return AdmissibleFunction(
            kind="sheet-supported",
            label=f"sheet-supported[{target_sheet}]",
            target_sheet=target_sheet,
            extra_zeros=tuple(complex(z) for z in extra_zeros),
        )

    @staticmethod
    def phi_style(sheet: int) -> "AdmissibleFunction":
        if sheet < 1:
            raise ValueError("phi-style functions require a sheet index >= 1")
        return AdmissibleFunction(kind="phi-style", label=f"phi[{sheet}]", target_sheet=sheet)

    def evaluate_on_representative(self, cfg: SpaceConfig, sheet: int, coord: complex) -> complex:
        """Raw evaluation at the representative (coord, sheet) before any
        quotient collapse; used to check well-definedness across glue."""
        coord = complex(coord)
        if self.kind == "pullback":
            return complex(self.base(coord))
        if self.kind == "sheet-supported":
            if sheet != self.target_sheet:
                return 0.0 + 0.0j
            B = _sheet_blaschke(cfg.annulus.R, self.target_sheet, self.extra_zeros)
            return B(coord / cfg.annulus.R)
        if self.kind == "phi-style":
            inner = AdmissibleFunction.sheet_supported(self.target_sheet)
            v_n = inner.evaluate_on_representative(cfg, self.target_sheet, coord)
            v_0 = inner.evaluate_on_representative(cfg, 0, coord)
            return (v_n - v_0) / 2.0
        raise ValueError(f"unknown admissible-function kind {self.kind!r}")

    def evaluate(self, cfg: SpaceConfig, p: SpacePoint) -> complex:
        if self.kind == "sheet-supported" and p.glue is not None:
            # Identified point: both representatives evaluate to 0.
            if p.glue.sheet == self.target_sheet and not self.extra_zeros:
                return 0.0 + 0.0j
        return self.evaluate_on_representative(cfg, p.sheet, p.coord)


def evaluate_admissible(cfg: SpaceConfig, F: AdmissibleFunction, p: SpacePoint) -> complex:
    """Evaluate F at a canonical point; aborts if the value escapes the disk."""
    p = recanonicalize(cfg, p)
    v = F.evaluate(cfg, p)
    if abs(v) >= 1.0:
        raise EvaluationEscapeError(
            f"{F.label} escaped the unit disk at {format_point(p)}: |value| = {abs(v)!r}"
        )
    return v


# ---------------------------------------------------------------------------
# Distance bounds on the truncated space.
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _one_over_e_threshold(n_max: int) -> Optional[int]:
    # Block products of |x(m)| are R-free; any R > 1 works here.
    return verify_one_over_e_products(2.0, n_max).threshold_found


def glued_lower_bound(cfg: SpaceConfig, p: SpacePoint, q: SpacePoint) -> Tuple[float, str]:
    """Best certified lower bound for the quotient Mobius distance.

    Maximizes over the pullback of the annulus lower-bound family and over
    sheet-supported candidates vanishing on one point's sheet; each candidate
    is a genuine holomorphic map on the quotient, so each value certifies.
    """
    p = recanonicalize(cfg, p)
    q = recanonicalize(cfg, q)
    if p == q:
        return 0.0, "trivial (identical points)"

    best, witness = annulus_lower_bound(cfg.annulus, p.coord, q.coord)
    witness = f"pullback[{witness}]"

    for t in sorted({p.sheet, q.sheet} - {0}):
        F = AdmissibleFunction.sheet_supported(t)
        v = mobius_distance(F.evaluate(cfg, p), F.evaluate(cfg, q))
        if v > best:
            best, witness = v, F.label
    return best, witness


def _exit_coords(cfg: SpaceConfig, p: SpacePoint) -> List[complex]:
    # Hops to sheet 0 happen at the attachment points of p's sheet; a point
    # already on sheet 0 exits at itself.  Subsampling exits keeps the path
    # family small while every retained path still certifies.
    if p.sheet == 0:
        return [p.coord]
    coords = glue_coordinates(cfg, p.sheet)
    if len(coords) > MAX_EXITS:
        idx = np.unique(np.linspace(0, len(coords) - 1, MAX_EXITS).astype(int))
        coords = coords[idx]
    return [complex(c) for c in coords]


def glued_upper_bound(cfg: SpaceConfig, p: SpacePoint, q: SpacePoint) -> Tuple[float, str]:
    """Certified upper bound for the quotient Mobius distance.

    Same sheet: restriction of quotient functions to the sheet dominates by
    the annulus upper bound.  Cross-sheet: triangle paths through attachment
    points, added in the Poincare scale and mapped back with tanh.  The pair
    (sqrt(R) on sheet 0, sqrt(R) on sheet n) additionally caps at 2/e once n
    clears the block-product threshold.
    """
    p = recanonicalize(cfg, p)
    q = recanonicalize(cfg, q)
    if p == q:
        return 0.0, "trivial (identical points)"
    acf = cfg.annulus

    if p.sheet == q.sheet:
        v, w = annulus_upper_bound(acf, p.coord, q.coord)
        return v, f"restriction[{w}]"

    best = math.inf
    witness = ""
    exits_p = _exit_coords(cfg, p)
    exits_q = _exit_coords(cfg, q)
    h_p = [0.0 if a == p.coord else _atanh(annulus_upper_bound(acf, p.coord, a)[0]) for a in exits_p]
    h_q = [0.0 if b == q.coord else _atanh(annulus_upper_bound(acf, b, q.coord)[0]) for b in exits_q]
    for i, a in enumerate(exits_p):
        for j, b in enumerate(exits_q):
            mid = 0.0 if a == b else _atanh(annulus_upper_bound(acf, a, b)[0])
            total = h_p[i] + mid + h_q[j]
            if total < best:
                best = total
                witness = f"glue path via exits ({i},{j})"
    value = math.tanh(best)

    # Direct non-compactness cap for the basepoint pair (sqrt(R), 0)-(sqrt(R), n).
    srt = acf.sqrt_R

    def _is_base(pt: SpacePoint) -> bool:
        return pt.sheet == 0 and abs(pt.coord - srt) <= 1e-12

    def _is_probe(pt: SpacePoint) -> Optional[int]:
        return pt.sheet if pt.sheet >= 1 and abs(pt.coord - srt) <= 1e-12 else None

    n = _is_probe(q) if _is_base(p) else (_is_probe(p) if _is_base(q) else None)
    if n is not None:
        n0 = _one_over_e_threshold(cfg.sheets)
        if n0 is not None and n >= n0 and TWO_OVER_E < value:
            value = TWO_OVER_E
            witness = "2/e basepoint cap"
    return value, witness


def glued_distance_bracket(cfg: SpaceConfig, p: SpacePoint, q: SpacePoint) -> DistanceBracket:
    """Two-sided certified bracket for the quotient Mobius distance."""
    lower, lw = glued_lower_bound(cfg, p, q)
    upper, uw = glued_upper_bound(cfg, p, q)
    if lower > upper + 1e-9:
        raise BracketOrderError(
            f"lower bound {lower!r} exceeds upper bound {upper!r} for pair "
            f"({format_point(p)}, {format_point(q)})"
        )
    return DistanceBracket(min(lower, upper), upper, lw, uw)


# ---------------------------------------------------------------------------
# Probes.
# ---------------------------------------------------------------------------

@dataclass
class NoncompactnessReport:
    """Evidence that the 2/e ball about the sheet-0 basepoint holds one point
    per sheet: not relatively compact at truncation scale."""

    threshold_n0: int
    ball_radius: float
    points: List[str]
    upper_bounds: List[float]
    pairwise_lower_floor: float
    distinct_sheets: int
    passed: bool

    def to_dict(self) -> dict:
        return {
            "threshold_n0": self.threshold_n0,
            "ball_radius_mobius": self.ball_radius,
            "points": list(self.points),
            "upper_bounds_mobius": [float(u) for u in self.upper_bounds],
            "pairwise_lower_floor_mobius": float(self.pairwise_lower_floor),
            "distinct_sheets": self.distinct_sheets,
            "passed": self.passed,
        }


def noncompactness_probe(cfg: SpaceConfig, n_max: int) -> NoncompactnessReport:
    """Certify one point per sheet inside the 2/e Mobius ball about the
    basepoint, with pairwise lower bounds above a positive floor.

    Sheet 1 is skipped: sqrt(R) is itself an attachment point of sheet 1, so
    its copy there is the basepoint.
    """
    if not 1 <= n_max <= cfg.sheets:
        raise ValueError(f"n_max must lie in [1, {cfg.sheets}], got {n_max!r}")
    n0 = _one_over_e_threshold(cfg.sheets)
    if n0 is None:
        raise RuntimeError("block-product threshold not reached within the truncation")
    srt = cfg.annulus.sqrt_R
    base = canonicalize(cfg, 0, srt)
    ns = list(range(max(n0, 2), n_max + 1))
    pts = [canonicalize(cfg, n, srt) for n in ns]

    uppers = [glued_upper_bound(cfg, base, pt)[0] for pt in pts]
    inside = all(u <= TWO_OVER_E + 1e-12 for u in uppers)

    floor = math.inf
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            floor = min(floor, glued_lower_bound(cfg, pts[i], pts[j])[0])
    if not pts:
        floor = 0.0

    passed = inside and len(pts) >= 1 and floor > 0.0
    return NoncompactnessReport(
        threshold_n0=n0,
        ball_radius=TWO_OVER_E,
        points=[format_point(pt) for pt in pts],
        upper_bounds=uppers,
        pairwise_lower_floor=floor if math.isfinite(floor) else 0.0,
        distinct_sheets=len({pt.sheet for pt in pts}),
        passed=passed,
    )


@dataclass
class CompletenessReport:
    """Tail behaviour of a sequence under the certified upper bounds."""

    tail_stats: List[dict]
    cauchy_like: bool
    tail_single_sheet: bool
    tail_coordinate_diameter: float
    converged_in_topology: bool

    def to_dict(self) -> dict:
        return {
            "tail_stats": list(self.tail_stats),
            "cauchy_like": self.cauchy_like,
            "tail_single_sheet": self.tail_single_sheet,
            "tail_coordinate_diameter": float(self.tail_coordinate_diameter),
            "converged_in_topology": self.converged_in_topology,
        }


def completeness_probe(cfg: SpaceConfig, sequence: Sequence[SpacePoint]) -> CompletenessReport:
    """Report the upper-bound Cauchy modulus per tail alongside the natural-
    topology diameter of tails; flags the Cauchy-and-converging pattern."""
    seq = [recanonicalize(cfg, p) for p in sequence]
    if len(seq) < 3:
        raise ValueError("completeness probe needs a sequence of length >= 3")

    n = len(seq)
    upper = [[0.0] * n for _ in range(n)]
    lower = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            upper[i][j] = upper[j][i] = glued_upper_bound(cfg, seq[i], seq[j])[0]
            lower[i][j] = lower[j][i] = glued_lower_bound(cfg, seq[i], seq[j])[0]

    stats = []
    for t in range(n - 1):
        tail = range(t, n)
        modulus = max(upper[i][j] for i in tail for j in tail)
        # A lower-bound modulus bounded away from 0 rules Cauchy out; this is
        # how boundary escape shows up even though coordinates converge.
        separation = max(lower[i][j] for i in tail for j in tail)
        diameter = max(abs(seq[i].coord - seq[j].coord) for i in tail for j in tail)
        single = len({seq[i].sheet for i in tail}) == 1
        stats.append(
            {
                "tail_start": t,
                "cauchy_modulus_mobius": modulus,
                "separation_floor_mobius": separation,
                "coordinate_diameter": diameter,
                "single_sheet": single,
            }
        )

    first, last = stats[0], stats[-1]
    cauchy_like = last["cauchy_modulus_mobius"] <= max(1e-6, 0.1 * first["cauchy_modulus_mobius"])
    single_sheet = last["single_sheet"]
    diameter = last["coordinate_diameter"]
    return CompletenessReport(
        tail_stats=stats,
        cauchy_like=cauchy_like,
        tail_single_sheet=single_sheet,
        tail_coordinate_diameter=diameter,
        converged_in_topology=cauchy_like and single_sheet and diameter < 1e-2,
    )


def ball_inclusion_radius(
    cfg: SpaceConfig,
    z: SpacePoint,
    band: Tuple[float, float],
    band_sheets: Sequence[int],
    samples: int = 200,
) -> Optional[float]:
    """Largest dyadic radius r with no sampled point outside the compact band
    K at certified Poincare upper distance < r from z; None if none works.

    Sampling evidence for the ball-inclusion condition, not a proof.  The
    sample cloud depends only on (seed, samples), so nested bands yield
    monotone radii.
    """
    r1, r2 = band
    R = cfg.annulus.R
    if not (1.0 < r1 < r2 < R):
        raise ValueError(f"band must satisfy 1 < r1 < r2 < R, got ({r1!r}, {r2!r})")
    sheets = sorted(set(int(s) for s in band_sheets))
    if any(s < 0 or s > cfg.sheets for s in sheets) or not sheets:
        raise ValueError(f"band sheets must be a nonempty subset of [0, {cfg.sheets}]")
    z = recanonicalize(cfg, z)
    if not (r1 < abs(z.coord) < r2) or z.sheet not in sheets:
        raise ValueError("centre must lie strictly inside the compact region")

    rng = np.random.default_rng(cfg.annulus.seed)
    margin = 1e-3 * (R - 1.0)
    radii = rng.uniform(1.0 + margin, R - margin, samples)
    angles = rng.uniform(0.0, 2.0 * math.pi, samples)
    point_sheets = rng.integers(0, cfg.sheets + 1, samples)

    d_min = math.inf
    for r, th, sh in zip(radii, angles, point_sheets):
        outside = not (r1 <= r <= r2) or int(sh) not in sheets
        if not outside:
            continue
        pt = canonicalize(cfg, int(sh), complex(r * math.cos(th), r * math.sin(th)))
        d = _atanh(glued_upper_bound(cfg, z, pt)[0])
        d_min = min(d_min, d)

    for j in range(4, -21, -1):
        r = 2.0 ** j
        if r <= d_min:
            return r
    return None
