"""Energy and dilation-identity functionals, and the dilation (fibering) map.

The fibering map t -> I(u_t) is evaluated in closed form in t: each term of
the energy scales with an explicit power of t, except the potential term
which needs one fresh quadrature of V(t r) u(r)^2 on the original grid.
This keeps root finding along the dilation orbit free of interpolation noise;
resampling via `rescale` is retained as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import RadialFunction, grad_norm_sq, l2_norm_sq
from .problem import ProblemSpec


@dataclass
class FunctionalValue:
    """Energy decomposed into labeled parts; total is their exact sum."""

    total: float
    kinetic: float
    potential: float
    kirchhoff: float
    nonlinear: float

    @staticmethod
    def from_parts(kinetic, potential, kirchhoff, nonlinear) -> "FunctionalValue":
        return FunctionalValue(
            total=kinetic + potential + kirchhoff + nonlinear,
            kinetic=kinetic,
            potential=potential,
            kirchhoff=kirchhoff,
            nonlinear=nonlinear,
        )


def _check_lambda(lam: float):
    if not (0.5 <= lam <= 1.0):
        raise ValueError(f"nonlinear weight must lie in [1/2, 1], got {lam}")


class DilationFamily:
    """Closed-form evaluation of t -> I(u_t) and its derivative for fixed u.

    Caches ||grad u||_2^2, ||u||_2^2 and int F(u) dx once; each t costs one
    vectorized potential evaluation (none at all for constant/limit cases).
    """

    def __init__(self, u: RadialFunction, ps: ProblemSpec, lam: float = 1.0, limit: bool = False):
        self.u = u
        self.ps = ps
        self.lam = lam
        self.limit = limit or ps.potential.kind == "constant"
        grid = u.grid
        self.rvw = grid.radial_volume_weights  # 4*pi*w_i*r_i^2
        self.u_sq = u.values**2
        self.G = grad_norm_sq(u)
        self.M2 = l2_norm_sq(u)
        self.NF = float(self.rvw @ ps.nonlinearity.F(u.values))
        self.v_inf = ps.v_inf

    def potential_term(self, t: float) -> float:
        """int V(t r) u^2 dx (without the t^3 volume factor)."""
        if self.limit:
            return self.v_inf * self.M2
        vals = np.asarray(self.ps.potential(t * self.u.grid.nodes), dtype=float)
        return float(self.rvw @ (vals * self.u_sq))

    def potential_dilation_term(self, t: float) -> float:
        """int [3 V(t r) + (t r) V'(t r)] u^2 dx."""
        if self.limit:
            return 3.0 * self.v_inf * self.M2
        tr = t * self.u.grid.nodes
        vals = 3.0 * np.asarray(self.ps.potential(tr), dtype=float) + np.asarray(
            self.ps.potential.radial_dilation_term(tr), dtype=float
        )
        return float(self.rvw @ (vals * self.u_sq))

    def value_parts(self, t: float) -> FunctionalValue:
        a, b = self.ps.a, self.ps.b
        return FunctionalValue.from_parts(
            kinetic=0.5 * a * t * self.G,
            potential=0.5 * t**3 * self.potential_term(t),
            kirchhoff=0.25 * b * t**2 * self.G**2,
            nonlinear=-(t**3) * self.lam * self.NF,
        )

    def value(self, t: float) -> float:
        return self.value_parts(t).total

    def derivative(self, t: float) -> float:
        """d/dt I(u_t); vanishes exactly where u_t satisfies the dilation identity."""
        a, b = self.ps.a, self.ps.b
        return (
            0.5 * a * self.G
            + 0.5 * t**2 * self.potential_dilation_term(t)
            + 0.5 * b * t * self.G**2
            - 3.0 * t**2 * self.lam * self.NF
        )

    def pohozaev_at(self, t: float) -> float:
        """The dilation (Pohozaev) functional of u_t, equal to t * derivative(t)."""
        return t * self.derivative(t)


# ---------------------------------------------------------------------------
# energies


def energy(u: RadialFunction, ps: ProblemSpec) -> FunctionalValue:
    """I(u) = 1/2 int [a|grad u|^2 + V u^2] + (b/4)(int |grad u|^2)^2 - int F(u)."""
    return DilationFamily(u, ps).value_parts(1.0)


def energy_limit(u: RadialFunction, ps: ProblemSpec) -> FunctionalValue:
    """Energy of the limit problem: V replaced by its value at infinity."""
    return DilationFamily(u, ps, limit=True).value_parts(1.0)


def energy_lambda(u: RadialFunction, ps: ProblemSpec, lam: float) -> FunctionalValue:
    """Energy with the nonlinear term weighted by lam in [1/2, 1]."""
    _check_lambda(lam)
    return DilationFamily(u, ps, lam=lam).value_parts(1.0)


def energy_lambda_limit(u: RadialFunction, ps: ProblemSpec, lam: float) -> FunctionalValue:
    _check_lambda(lam)
    return DilationFamily(u, ps, lam=lam, limit=True).value_parts(1.0)


# ---------------------------------------------------------------------------
# dilation identities


def pohozaev(u: RadialFunction, ps: ProblemSpec) -> float:
    """P(u) = (a/2)||grad u||^2 + 1/2 int [3V + rV'] u^2 + (b/2)||grad u||^4 - 3 int F(u)."""
    return DilationFamily(u, ps).pohozaev_at(1.0)


def pohozaev_limit(u: RadialFunction, ps: ProblemSpec) -> float:
    return DilationFamily(u, ps, limit=True).pohozaev_at(1.0)


def pohozaev_lambda(u: RadialFunction, ps: ProblemSpec, lam: float) -> float:
    _check_lambda(lam)
    return DilationFamily(u, ps, lam=lam).pohozaev_at(1.0)


def pohozaev_lambda_limit(u: RadialFunction, ps: ProblemSpec, lam: float) -> float:
    _check_lambda(lam)
    return DilationFamily(u, ps, lam=lam, limit=True).pohozaev_at(1.0)


# ---------------------------------------------------------------------------
# fibering map


def fibering_value(
    u: RadialFunction, ps: ProblemSpec, t: float, lam: float = 1.0, limit: bool = False
) -> float:
    """I(u_t) in closed form in t."""
    if t <= 0:
        raise ValueError(f"dilation factor must be positive, got {t}")
    return DilationFamily(u, ps, lam=lam, limit=limit).value(t)


def fibering_derivative(
    u: RadialFunction, ps: ProblemSpec, t: float, lam: float = 1.0, limit: bool = False
) -> float:
    """d/dt I(u_t), equal to P(u_t)/t."""
    if t <= 0:
        raise ValueError(f"dilation factor must be positive, got {t}")
    return DilationFamily(u, ps, lam=lam, limit=limit).derivative(t)


def iip_gap(
    u: RadialFunction, ps: ProblemSpec, t: float, lam: float = 1.0, limit: bool = False
) -> float:
    """Slack of the energy-dilation inequality

        I(u) - I(u_t) - (1-t^3)/3 P(u) - b (1-t)^2 (1+2t)/12 ||grad u||^4,

    nonnegative (up to quadrature error) whenever the decay-map audit on V passes.
    """
    fam = DilationFamily(u, ps, lam=lam, limit=limit)
    b = ps.b
    return (
        fam.value(1.0)
        - fam.value(t)
        - (1.0 - t**3) / 3.0 * fam.pohozaev_at(1.0)
        - b * (1.0 - t) ** 2 * (1.0 + 2.0 * t) / 12.0 * fam.G**2
    )


@dataclass
class FiberingScan:
    """Tabulated dilation sweep for one function u."""

    u: RadialFunction
    ts: np.ndarray
    zeta: np.ndarray
    dzeta: np.ndarray
    pohozaev_of_ut: np.ndarray
    iip_gap: np.ndarray

    def sign_changes(self) -> int:
        s = np.sign(self.dzeta)
        s = s[s != 0]
        return int(np.sum(s[1:] != s[:-1]))

    def write_csv(self, path):
        header = "t,zeta,dzeta,pohozaev,iip_gap"
        data = np.column_stack([self.ts, self.zeta, self.dzeta, self.pohozaev_of_ut, self.iip_gap])
        np.savetxt(path, data, delimiter=",", header=header, comments="", fmt="%.17g")


def fibering_scan(
    u: RadialFunction,
    ps: ProblemSpec,
    ts: np.ndarray,
    lam: float = 1.0,
    limit: bool = False,
) -> FiberingScan:
    fam = DilationFamily(u, ps, lam=lam, limit=limit)
    ts = np.asarray(ts, dtype=float)
    zeta = np.array([fam.value(t) for t in ts])
    dzeta = np.array([fam.derivative(t) for t in ts])
    poh = ts * dzeta
    i0 = fam.value(1.0)
    p0 = fam.pohozaev_at(1.0)
    gaps = np.array(
        [
            i0 - z - (1.0 - t**3) / 3.0 * p0 - ps.b * (1.0 - t) ** 2 * (1.0 + 2.0 * t) / 12.0 * fam.G**2
            for t, z in zip(ts, zeta)
        ]
    )
    return FiberingScan(u=u, ts=ts, zeta=zeta, dzeta=dzeta, pohozaev_of_ut=poh, iip_gap=gaps)
