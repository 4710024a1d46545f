"""Catalog of concrete rational maps with invariants.

Each map knows its dimension, forward step, and invariant functions.  All
evaluators are generic over the scalar type: pass Python complex for double
precision or mpmath.mpc coordinates (inside an mpmath precision context) for
extended precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

from .biquad import BiquadParams, phi_eta_rho


class PoleError(ArithmeticError):
    """A map denominator vanished (or nearly so) at the evaluation point."""

    def __init__(self, which: str, value=None):
        super().__init__(f"denominator {which} vanishes at the evaluation point")
        self.which = which
        self.value = value


_POLE_TOL = 1e-14


def _div(num, den, label: str):
    if abs(den) < _POLE_TOL * (1 + abs(num)):
        raise PoleError(label, den)
    return num / den


class MapId(Enum):
    TWO_DIM_LOGISTIC = "2d-logistic"
    TWO_DIM_BC = "2d-bc"
    ONE_DIM_BC = "1d-bc"
    LV3 = "lv3"
    PAINLEVE5 = "painleve5"
    QRT = "qrt"
    NORMAL_FORM = "normal-form"


@dataclass(frozen=True)
class StatePoint:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


DIMENSION = {
    MapId.TWO_DIM_LOGISTIC: 2,
    MapId.TWO_DIM_BC: 2,
    MapId.ONE_DIM_BC: 1,
    MapId.LV3: 3,
    MapId.PAINLEVE5: 4,
    MapId.QRT: 2,
    MapId.NORMAL_FORM: 1,
}

NUM_INVARIANTS = {
    MapId.TWO_DIM_LOGISTIC: 1,
    MapId.TWO_DIM_BC: 1,
    MapId.ONE_DIM_BC: 0,
    MapId.LV3: 2,
    MapId.PAINLEVE5: 3,
    MapId.QRT: 1,
    MapId.NORMAL_FORM: 0,
}

# parameter names each catalog entry expects
PARAMS = {
    MapId.TWO_DIM_LOGISTIC: (),
    MapId.TWO_DIM_BC: ("b", "c"),
    MapId.ONE_DIM_BC: ("h", "b", "c"),
    MapId.LV3: (),
    MapId.PAINLEVE5: (),
    MapId.QRT: ("q1", "q2"),  # two six-tuples
    MapId.NORMAL_FORM: ("h", "hp"),
}


def _check_state(map_id: MapId, x: StatePoint):
    if len(x) != DIMENSION[map_id]:
        raise ValueError(f"{map_id.value} needs {DIMENSION[map_id]} coordinates, got {len(x)}")


def apply(map_id: MapId, x: StatePoint, params: dict) -> StatePoint:
    """One forward step of the chosen map."""
    _check_state(map_id, x)
    c = x.coords
    if map_id is MapId.TWO_DIM_LOGISTIC:
        u, v = c
        return StatePoint((u * v, u + v - u * v))
    if map_id is MapId.TWO_DIM_BC:
        b, cc = params["b"], params["c"]
        u, v = c
        num = v * (1 - b * u) * (1 - cc * u * v)
        den_parts = (1 - cc * u), (1 - b * u * v)
        if abs(den_parts[0]) < _POLE_TOL * (1 + abs(num)):
            raise PoleError("1 - c*x")
        if abs(den_parts[1]) < _POLE_TOL * (1 + abs(num)):
            raise PoleError("1 - b*x*y")
        return StatePoint((u * v, num / (den_parts[0] * den_parts[1])))
    if map_id is MapId.ONE_DIM_BC:
        h, b, cc = params["h"], params["b"], params["c"]
        (u,) = c
        return StatePoint((_div(h * u * (1 - cc * u), 1 - b * u, "1 - b*x"),))
    if map_id is MapId.LV3:
        u, v, w = c
        d1, d2, d3 = 1 - w + w * u, 1 - u + u * v, 1 - v + v * w
        for lbl, dv in (("1-z+zx", d1), ("1-x+xy", d2), ("1-y+yz", d3)):
            if abs(dv) < _POLE_TOL * (1 + abs(u) + abs(v) + abs(w)):
                raise PoleError(lbl)
        return StatePoint((u * d3 / d1, v * d1 / d2, w * d2 / d3))
    if map_id is MapId.PAINLEVE5:
        x1, x2, x3, x4 = c
        n1 = 1 - x2 + x2 * x3 - x2 * x3 * x4
        n2 = 1 - x3 + x3 * x4 - x3 * x4 * x1
        n3 = 1 - x4 + x4 * x1 - x4 * x1 * x2
        n4 = 1 - x1 + x1 * x2 - x1 * x2 * x3
        scale = 1 + max(abs(t) for t in c)
        for lbl, dv in (("D1", n3), ("D2", n4), ("D3", n1), ("D4", n2)):
            if abs(dv) < _POLE_TOL * scale:
                raise PoleError(lbl)
        return StatePoint((x1 * n1 / n3, x2 * n2 / n4, x3 * n3 / n1, x4 * n4 / n2))
    if map_id is MapId.QRT:
        xn, xn1 = c
        return StatePoint((xn1, qrt_step(params["q1"], params["q2"], xn, xn1)))
    if map_id is MapId.NORMAL_FORM:
        h, hp = params["h"], params["hp"]
        (z,) = c
        return StatePoint((_div(z * (hp + z), 1 + h * z, "1 + h*z"),))
    raise ValueError(map_id)


def invariants_of(map_id: MapId, x: StatePoint, params: dict) -> tuple:
    """Values of the conserved quantities at x (empty for 1-d maps)."""
    _check_state(map_id, x)
    c = x.coords
    if map_id is MapId.TWO_DIM_LOGISTIC:
        return (c[0] + c[1],)
    if map_id is MapId.TWO_DIM_BC:
        b, cc = params["b"], params["c"]
        u, v = c
        return (_div(v * (1 - b * u), 1 - cc * u, "1 - c*x"),)
    if map_id is MapId.LV3:
        u, v, w = c
        return (u * v * w, (1 - u) * (1 - v) * (1 - w))
    if map_id is MapId.PAINLEVE5:
        x1, x2, x3, x4 = c
        return (
            x1 * x2 * x3 * x4,
            (1 - x1) * (1 - x2) * (1 - x3) * (1 - x4),
            (1 - x2 * x4) * (1 - x1 * x3),
        )
    if map_id is MapId.QRT:
        return (qrt_invariant(params["q1"], params["q2"], c[0], c[1]),)
    return ()


def orbit(map_id: MapId, x0: StatePoint, params: dict, steps: int) -> list:
    """Forward orbit [x0, x1, ..., x_steps]; raises PoleError where flagged."""
    pts = [x0]
    for _ in range(steps):
        pts.append(apply(map_id, pts[-1], params))
    return pts


# ----------------------------------------------------------------------
# the two-parameter planar family and its one-dimensional reduction


def reduce_two_dim(b: complex, c: complex, h: complex) -> Callable[[complex], complex]:
    """The one-dimensional reduction x -> h x (1-cx)/(1-bx) at invariant
    value h.  The second coordinate is recovered by companion_y."""

    def step(x: complex) -> complex:
        return _div(h * x * (1 - c * x), 1 - b * x, "1 - b*x")

    return step


def companion_y(b: complex, c: complex, h: complex, x_next: complex) -> complex:
    """Second coordinate belonging to the reduced iterate: Y = h(1-cX)/(1-bX)."""
    return _div(h * (1 - c * x_next), 1 - b * x_next, "1 - b*X")


@dataclass(frozen=True)
class NormalFormChart:
    """Normal-form parameters plus the coordinate change reaching them."""

    h: complex
    hp: complex
    b: complex
    c: complex

    def z_of_x(self, x: complex) -> complex:
        h, hp = self.h, self.hp
        return (1 - hp) / (1 - h) + _div((1 - h) / (h * (self.b - self.c)), x, "x")

    def step(self, z: complex) -> complex:
        return _div(z * (self.hp + z), 1 + self.h * z, "1 + h*z")


def conjugate_to_normal(b: complex, c: complex, h: complex) -> NormalFormChart:
    """Normal-form data for the reduced map: the multiplier at the fixed
    point x=0 carries over as h, and hh' = 1 + c (1-h)^2 / (b-c).  The
    integrable reduction c=0 lands exactly on hh' = 1."""
    if abs(b - c) < 1e-14 * (abs(b) + abs(c) + 1):
        raise ValueError("b = c is degenerate for the normal-form conjugation")
    hp = (1 + c / (b - c) * (1 - h) ** 2) / h
    return NormalFormChart(h=h, hp=hp, b=b, c=c)


def normal_form_derivative(h: complex, hp: complex, z: complex) -> complex:
    """d/dz of z(h'+z)/(1+hz)."""
    den = 1 + h * z
    if abs(den) < _POLE_TOL * (1 + abs(z)):
        raise PoleError("1 + h*z")
    return (hp + 2 * z + h * z * z) / (den * den)


def normal_form_fixed_points(h: complex, hp: complex) -> list:
    """(location, multiplier) for the three fixed points; infinity is
    reported as the string 'inf' with multiplier h (chart w = 1/z)."""
    out = [(0j, hp)]
    if abs(1 - h) > 1e-14:
        zp = (1 - hp) / (1 - h)
        out.append((zp, (2 - h - hp) / (1 - h * hp)))
    out.append(("inf", h))
    return out


def normal_form_critical_points(h: complex, hp: complex) -> tuple:
    import cmath

    root = cmath.sqrt(1 - h * hp)
    return (-1 / h + root / h, -1 / h - root / h)


# ----------------------------------------------------------------------
# QRT


def _quad(triple, t):
    p2, p1, p0 = triple
    return p2 * t * t + p1 * t + p0


def qrt_step(q1: BiquadParams, q2: BiquadParams, xn: complex, xn1: complex) -> complex:
    """Next term of the symmetric QRT recurrence built from two parameter
    six-tuples; conserves qrt_invariant."""
    phi1, eta1, rho1 = phi_eta_rho(q1)
    phi2, eta2, rho2 = phi_eta_rho(q2)
    g1 = _quad(eta1, xn1) * _quad(rho2, xn1) - _quad(rho1, xn1) * _quad(eta2, xn1)
    g2 = _quad(rho1, xn1) * _quad(phi2, xn1) - _quad(phi1, xn1) * _quad(rho2, xn1)
    g3 = _quad(phi1, xn1) * _quad(eta2, xn1) - _quad(eta1, xn1) * _quad(phi2, xn1)
    return _div(g1 - xn * g2, g2 - xn * g3, "QRT denominator")


def qrt_invariant(q1: BiquadParams, q2: BiquadParams, x: complex, y: complex) -> complex:
    phi1, eta1, rho1 = phi_eta_rho(q1)
    phi2, eta2, rho2 = phi_eta_rho(q2)
    num = _quad(phi1, x) * y * y + _quad(eta1, x) * y + _quad(rho1, x)
    den = _quad(phi2, x) * y * y + _quad(eta2, x) * y + _quad(rho2, x)
    return -_div(num, den, "QRT invariant denominator")


# ----------------------------------------------------------------------
# catalog access by string id


def map_from_string(name: str) -> MapId:
    for mid in MapId:
        if mid.value == name:
            return mid
    raise ValueError(f"unknown map id {name!r}; known: {[m.value for m in MapId]}")
