"""Planar packing tables N+(r) and N-(r).

``N+(r)`` is the largest number of points in a closed disc of radius ``r``
with all mutual distances greater than 1; ``N-(r)`` asks in addition that
one point is the centre, so it equals one plus the packing number of the
annulus ``1 < |x| <= r`` against the closed unit disc.

Each shipped row is certified twice: by an explicit configuration at a
rational radius inside the row, and by an exact maximum independent set
over a square grid of the disc.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

import numpy as np

from .errors import ResolutionError
from .mis import DEFAULT_BUDGET, max_independent_set
from .reports import FAIL, PASS, VerificationReport, composite

DEFAULT_PITCH = Fraction(1, 50)
DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Threshold:
    """A row endpoint in symbolic form: rational, scaled square root,
    ``csc(pi/m)/2`` or ``1 + eps``."""

    form: tuple

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(sorted((k, str(v)) for k, v in obj.items())))

    @property
    def as_dict(self):
        return dict(self.form)

    @property
    def value(self):
        form = self.as_dict
        if "rational" in form:
            return float(Fraction(form["rational"]))
        if "sqrt" in form:
            return float(Fraction(form.get("scale", "1"))) * math.sqrt(int(form["sqrt"]))
        if "csc_half" in form:
            return 0.5 / math.sin(math.pi / int(form["csc_half"]))
        if "one_plus_eps" in form:
            return 1.0 + float(Fraction(form["one_plus_eps"]))
        raise ValueError(f"unknown threshold form {form!r}")

    def label(self):
        form = self.as_dict
        if "rational" in form:
            return form["rational"]
        if "sqrt" in form:
            return f"{form.get('scale', '1')}*sqrt({form['sqrt']})"
        if "csc_half" in form:
            return f"csc(pi/{form['csc_half']})/2"
        return f"1+{form['one_plus_eps']}"

    def to_json(self):
        return self.as_dict


@dataclass(frozen=True)
class PackingTableRow:
    r_lo: Threshold
    r_hi: Threshold
    value: int
    configuration: tuple = ()
    kissing_row: bool = False

    @classmethod
    def from_json(cls, obj):
        return cls(
            Threshold.from_json(obj["lo"]),
            Threshold.from_json(obj["hi"]),
            int(obj["value"]),
            tuple(sorted(obj.get("configuration", {}).items())),
            bool(obj.get("kissing_row", False)),
        )

    def sample_radius(self):
        """A short rational strictly above ``r_lo`` and at most ``r_hi``."""
        lo, hi = self.r_lo.value, self.r_hi.value
        mid = Fraction((lo + hi) / 2).limit_denominator(1000)
        if not lo < mid <= hi:
            raise ValueError(f"no rational sample inside ({lo}, {hi}]")
        return mid

    def to_json(self):
        out = {"lo": self.r_lo.to_json(), "hi": self.r_hi.to_json(), "value": self.value}
        if self.configuration:
            out["configuration"] = dict(self.configuration)
        return out


@dataclass(frozen=True)
class PackingTable:
    name: str
    centered: bool
    rows: tuple
    version: str


def load_tables():
    """The shipped tables keyed by ``"N+"`` and ``"N-"``."""
    text = resources.files("smallball").joinpath("data/packing_tables.json").read_text()
    raw = json.loads(text)
    out = {}
    for name, table in raw["tables"].items():
        rows = tuple(PackingTableRow.from_json(r) for r in table["rows"])
        out[name] = PackingTable(name, bool(table["centered"]), rows, raw["version"])
    return out


def validate_rows(rows, start):
    """Rows must be contiguous from ``start`` with nondecreasing values."""
    if not rows:
        return
    if abs(rows[0].r_lo.value - start) > 1e-15:
        raise ValueError(f"first row must start at {start}")
    for prev, row in zip(rows, rows[1:]):
        if prev.r_hi != row.r_lo:
            raise ValueError(f"rows ({prev.r_lo.label()}, {prev.r_hi.label()}] and the next are not contiguous")
        if row.value < prev.value:
            raise ValueError("row values must be nondecreasing in r")
    for row in rows:
        if not row.r_lo.value < row.r_hi.value:
            raise ValueError(f"empty row ({row.r_lo.label()}, {row.r_hi.label()}]")


def verify_configuration(points, r, centered=False, tolerance=DEFAULT_TOLERANCE):
    """Check a planar point set fits in the disc of radius ``r`` (up to
    ``tolerance``) with every mutual distance exceeding ``1 + tolerance``.

    Distance exactly 1 fails: separation must be strict.  With
    ``centered`` the origin must be one of the points.  The report's
    ``lhs`` is the number of points the configuration certifies.
    """
    pts = [(float(x), float(y)) for x, y in points]
    r = float(r)
    notes = []
    witness = None
    status = PASS
    max_norm = max((math.hypot(x, y) for x, y in pts), default=0.0)
    if max_norm > r + tolerance:
        status = FAIL
        far = max(pts, key=lambda p: math.hypot(*p))
        witness = {"point_outside": list(far), "norm": max_norm}
    min_dist = math.inf
    closest = None
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = math.dist(pts[i], pts[j])
            if d < min_dist:
                min_dist, closest = d, (i, j)
    if closest is not None and not min_dist > 1 + tolerance:
        status = FAIL
        i, j = closest
        witness = {"pair": [list(pts[i]), list(pts[j])], "distance": min_dist}
    if centered and not any(math.hypot(x, y) <= tolerance for x, y in pts):
        status = FAIL
        witness = {"missing": "origin"}
    notes.append(f"max norm {max_norm!r}")
    if closest is not None:
        notes.append(f"min distance {min_dist!r}")
    return VerificationReport(
        theorem="configuration",
        lhs=len(pts),
        rhs=None,
        constant=r,
        status=status,
        tolerance=tolerance,
        notes=tuple(notes),
        witness=witness,
    )


def regular_configuration(sides, radius, center=False):
    """``sides`` equally spaced points on the circle of ``radius`` plus optionally the origin."""
    radius = float(radius)
    pts = [(0.0, 0.0)] if center else []
    for k in range(sides):
        t = 2 * math.pi * k / sides
        pts.append((radius * math.cos(t), radius * math.sin(t)))
    return pts


def _packed_mask(mask):
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def grid_optimum(r, pitch=DEFAULT_PITCH, centered=False, budget=DEFAULT_BUDGET):
    """Exact optimum of the packing problem over the grid ``pitch * Z^2``.

    Returns ``(value, points, nodes)``.  With ``centered`` the value counts
    the centre plus an optimal packing of the grid annulus ``1 < |x| <= r``.
    All geometry is integer arithmetic on grid coordinates.
    """
    r, h = Fraction(r), Fraction(pitch)
    reach = math.floor(r / h)
    disc = math.floor(r * r / (h * h))
    unit = math.floor(1 / (h * h))
    half = math.floor(1 / (4 * h * h))
    axis = np.arange(-reach, reach + 1, dtype=np.int64)
    I, J = np.meshgrid(axis, axis, indexing="ij")
    I, J = I.ravel(), J.ravel()
    sq = I * I + J * J
    keep = sq <= disc
    if centered:
        keep &= sq > unit
    I, J, sq = I[keep], J[keep], sq[keep]
    if len(I) == 0:
        return (1 if centered else 0), ([(0.0, 0.0)] if centered else []), 0

    angle = np.arctan2(J, I)
    inner = sq <= half
    # annulus points by angle first, the central disc last
    order = np.lexsort((sq, angle, inner))
    I, J, sq, angle, inner = I[order], J[order], sq[order], angle[order], inner[order]
    n = len(I)

    conflict = []
    for v in range(n):
        row = (I - I[v]) ** 2 + (J - J[v]) ** 2 <= unit
        row[v] = False
        conflict.append(_packed_mask(row))

    cells = []
    if inner.any():
        cells.append(np.flatnonzero(inner))
    outer = ~inner
    if outer.any():
        width = 2 * math.asin(min(1.0, 0.5 / float(r)))
        k = max(1, math.ceil(2 * math.pi / width - 1e-9))
        while True:
            sector = np.floor((angle + math.pi) / (2 * math.pi) * k).astype(np.int64) % k
            candidate = [np.flatnonzero(outer & (sector == s)) for s in range(k)]
            candidate = [c for c in candidate if len(c)]
            if all(_is_grid_clique(I[c], J[c], unit) for c in candidate):
                cells.extend(candidate)
                break
            k += 1

    result = max_independent_set(conflict, n, cover=[c.tolist() for c in cells], budget=budget)
    points = [(float(I[v] * h), float(J[v] * h)) for v in result.witness]
    if centered:
        return result.size + 1, [(0.0, 0.0)] + points, result.nodes
    return result.size, points, result.nodes


def _is_grid_clique(I, J, unit):
    d = (I[:, None] - I[None, :]) ** 2 + (J[:, None] - J[None, :]) ** 2
    return bool((d <= unit).all())


def check_row(row, centered, pitch=DEFAULT_PITCH, budget=DEFAULT_BUDGET, tolerance=DEFAULT_TOLERANCE):
    """Certify one row at its sample radius by configuration and grid optimum."""
    radius = row.sample_radius()
    form = dict(row.configuration)
    pts = regular_configuration(int(form.get("polygon", 0)), radius, bool(form.get("center", False)))
    config = verify_configuration(pts, radius, centered=centered, tolerance=tolerance)
    grid_value, grid_points, nodes = grid_optimum(radius, pitch, centered, budget)
    if grid_value < row.value:
        raise ResolutionError(
            f"grid pitch {pitch} finds only {grid_value} points at r = {radius}; "
            f"the row claims {row.value}",
            suggested_pitch=Fraction(pitch) / 2,
        )
    notes = [
        f"row ({row.r_lo.label()}, {row.r_hi.label()}] sampled at r = {radius}",
        f"configuration of {config.lhs} points: {config.status}",
        f"grid pitch {pitch}: optimum {grid_value} after {nodes} nodes",
    ]
    if row.kissing_row:
        notes.append("value equals the planar kissing number 6 plus one")
    ok = config.passed and config.lhs >= row.value and grid_value == row.value
    return VerificationReport(
        theorem=f"table row value {row.value}",
        lhs=grid_value,
        rhs=row.value,
        constant=radius,
        status=PASS if ok else FAIL,
        tolerance=tolerance,
        notes=tuple(notes),
        witness={"configuration": pts, "grid_points": grid_points},
    )


def table_check(which, rows=None, pitch=DEFAULT_PITCH, budget=DEFAULT_BUDGET, tolerance=DEFAULT_TOLERANCE):
    """Certify every row of the ``"N+"`` or ``"N-"`` table."""
    tables = load_tables()
    if which not in tables:
        raise ValueError(f"unknown table {which!r}; expected 'N+' or 'N-'")
    table = tables[which]
    rows = table.rows if rows is None else tuple(rows)
    validate_rows(rows, 1.0 if table.centered else 0.0)
    if Fraction(pitch) > Fraction(1, 50):
        raise ResolutionError(f"grid pitch {pitch} is coarser than 1/50", suggested_pitch=Fraction(1, 50))
    parts = [check_row(row, table.centered, pitch, budget, tolerance) for row in rows]
    notes = [f"table {which} version {table.version}"]
    if which == "N+":
        notes.append("no row has value 6; the listed values jump from 5 to 7 at r = 1")
    return composite(f"table {which}", parts, notes=notes)
