"""Potentials, nonlinearities, and numeric audits of their structural hypotheses.

The audits are finite-sample by necessity: asymptotic statements (decay of
f(t)/t near 0, of f(t)/t^5 at infinity, the lim inf of V) are reported as
"pass" only when a monotone trend is observed over the outermost sampled
decade, otherwise "inconclusive".
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator


# ---------------------------------------------------------------------------
# potentials


@dataclass(eq=False)
class Potential:
    """Radial external potential V(r) with its value at infinity.

    Built-in kinds provide V'(r) analytically; the radial directional
    derivative of V at x is r * V'(r), defined as 0 at r = 0 by continuity.
    """

    kind: str
    params: dict
    v_inf: float

    # -- constructors -------------------------------------------------------

    @staticmethod
    def constant(v: float) -> "Potential":
        return Potential("constant", {"v": float(v)}, float(v))

    @staticmethod
    def inverse_poly(alpha: float, beta: float, sigma: float) -> "Potential":
        """V(r) = alpha - beta / (r^sigma + 1)."""
        return Potential(
            "inverse_poly",
            {"alpha": float(alpha), "beta": float(beta), "sigma": float(sigma)},
            float(alpha),
        )

    @staticmethod
    def sine_decay(alpha: float, beta: float) -> "Potential":
        """V(r) = alpha - beta sin^2(r) / (r^3 + 1)."""
        return Potential("sine_decay", {"alpha": float(alpha), "beta": float(beta)}, float(alpha))

    @staticmethod
    def exp_decay(alpha: float, beta: float, sigma: float) -> "Potential":
        """V(r) = alpha - beta exp(-r^sigma)."""
        return Potential(
            "exp_decay",
            {"alpha": float(alpha), "beta": float(beta), "sigma": float(sigma)},
            float(alpha),
        )

    @staticmethod
    def tabulated(r: np.ndarray, v: np.ndarray, v_inf: float | None = None) -> "Potential":
        r = np.asarray(r, dtype=float)
        v = np.asarray(v, dtype=float)
        if v_inf is None:
            v_inf = float(v[-1])
        p = Potential("tabulated", {"r": r, "v": v}, float(v_inf))
        p._interp = PchipInterpolator(r, v, extrapolate=False)
        p._dinterp = p._interp.derivative()
        return p

    # -- evaluation ---------------------------------------------------------

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        p = self.params
        if self.kind == "constant":
            out = np.full_like(r, p["v"])
        elif self.kind == "inverse_poly":
            out = p["alpha"] - p["beta"] / (r ** p["sigma"] + 1.0)
        elif self.kind == "sine_decay":
            out = p["alpha"] - p["beta"] * np.sin(r) ** 2 / (r**3 + 1.0)
        elif self.kind == "exp_decay":
            out = p["alpha"] - p["beta"] * np.exp(-(r ** p["sigma"]))
        elif self.kind == "tabulated":
            out = np.where(r <= p["r"][-1], self._interp(np.clip(r, p["r"][0], p["r"][-1])), self.v_inf)
        else:
            raise ValueError(f"unknown potential kind {self.kind!r}")
        return out if out.shape else float(out)

    def slope(self, r):
        """V'(r), analytic for built-in kinds."""
        r = np.asarray(r, dtype=float)
        p = self.params
        if self.kind == "constant":
            out = np.zeros_like(r)
        elif self.kind == "inverse_poly":
            s = p["sigma"]
            with np.errstate(divide="ignore", invalid="ignore"):
                out = np.where(r > 0, p["beta"] * s * r ** (s - 1.0) / (r**s + 1.0) ** 2, 0.0)
            if s >= 1.0:
                out = np.where(r == 0.0, 0.0 if s > 1.0 else p["beta"], out)
        elif self.kind == "sine_decay":
            denom = (r**3 + 1.0) ** 2
            out = -p["beta"] * (np.sin(2.0 * r) * (r**3 + 1.0) - 3.0 * r**2 * np.sin(r) ** 2) / denom
        elif self.kind == "exp_decay":
            s = p["sigma"]
            with np.errstate(divide="ignore", invalid="ignore"):
                out = np.where(r > 0, p["beta"] * s * r ** (s - 1.0) * np.exp(-(r**s)), 0.0)
            if s == 1.0:
                out = np.where(r == 0.0, p["beta"], out)
        elif self.kind == "tabulated":
            out = np.where(r <= p["r"][-1], self._dinterp(np.clip(r, p["r"][0], p["r"][-1])), 0.0)
        else:
            raise ValueError(f"unknown potential kind {self.kind!r}")
        return out if out.shape else float(out)

    def radial_dilation_term(self, r):
        """The directional derivative of V along x, i.e. r * V'(r); 0 at r = 0."""
        r = np.asarray(r, dtype=float)
        out = np.where(r > 0, r * self.slope(r), 0.0)
        return out if out.shape else float(out)


# ---------------------------------------------------------------------------
# nonlinearities


@dataclass(eq=False)
class Nonlinearity:
    """Source term f(t) with primitive F(t) = int_0^t f."""

    kind: str
    params: dict

    @staticmethod
    def pure_power(p: float) -> "Nonlinearity":
        """f(t) = |t|^{p-2} t, F(t) = |t|^p / p."""
        return Nonlinearity("pure_power", {"p": float(p)})

    @staticmethod
    def power_combination(terms) -> "Nonlinearity":
        """f(t) = sum_k c_k |t|^{p_k - 2} t."""
        terms = [(float(c), float(p)) for c, p in terms]
        return Nonlinearity("power_combination", {"terms": terms})

    @staticmethod
    def tabulated(t: np.ndarray, f: np.ndarray) -> "Nonlinearity":
        """Odd extension of sampled (t >= 0, f(t)); F from the interpolant's antiderivative."""
        t = np.asarray(t, dtype=float)
        f = np.asarray(f, dtype=float)
        if t[0] != 0.0:
            t = np.concatenate([[0.0], t])
            f = np.concatenate([[0.0], f])
        nl = Nonlinearity("tabulated", {"t": t, "f": f})
        nl._interp = PchipInterpolator(t, f, extrapolate=False)
        nl._anti = nl._interp.antiderivative()
        return nl

    def f(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "pure_power":
            p = self.params["p"]
            out = np.abs(t) ** (p - 2.0) * t
        elif self.kind == "power_combination":
            out = np.zeros_like(t)
            for c, p in self.params["terms"]:
                out = out + c * np.abs(t) ** (p - 2.0) * t
        elif self.kind == "tabulated":
            tmax = self.params["t"][-1]
            a = np.clip(np.abs(t), 0.0, tmax)
            out = np.sign(t) * self._interp(a)
        else:
            raise ValueError(f"unknown nonlinearity kind {self.kind!r}")
        return out if out.shape else float(out)

    def F(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "pure_power":
            p = self.params["p"]
            out = np.abs(t) ** p / p
        elif self.kind == "power_combination":
            out = np.zeros_like(t)
            for c, p in self.params["terms"]:
                out = out + c * np.abs(t) ** p / p
        elif self.kind == "tabulated":
            tmax = self.params["t"][-1]
            a = np.clip(np.abs(t), 0.0, tmax)
            out = self._anti(a)
        else:
            raise ValueError(f"unknown nonlinearity kind {self.kind!r}")
        return out if out.shape else float(out)


# ---------------------------------------------------------------------------
# problem spec


@dataclass(eq=False)
class ProblemSpec:
    """Coefficients (a, b), external potential and nonlinearity.

    b = 0 is only legal in oracle mode (the scalar-field comparison path).
    """

    a: float
    b: float
    potential: Potential
    nonlinearity: Nonlinearity
    oracle_mode: bool = False

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError(f"a must be positive, got {self.a}")
        if self.b < 0 or (self.b == 0 and not self.oracle_mode):
            raise ValueError(f"b must be positive (b = 0 only in oracle mode), got {self.b}")

    @property
    def v_inf(self) -> float:
        return self.potential.v_inf


# ---------------------------------------------------------------------------
# hypothesis audits


@dataclass
class SampleSpec:
    """Deterministic sample grids for the audits."""

    r_lo: float = 1e-2
    r_hi: float = 1e2
    n_r: int = 200
    t_lo: float = 1e-2
    t_hi: float = 1e2
    n_t: int = 200
    s_lo: float = 1e-3
    s_hi: float = 1e2
    n_s: int = 400
    seed: int = 0

    def r_samples(self) -> np.ndarray:
        return np.geomspace(self.r_lo, self.r_hi, self.n_r)

    def t_samples(self) -> np.ndarray:
        return np.geomspace(self.t_lo, self.t_hi, self.n_t)

    def s_samples(self) -> np.ndarray:
        return np.geomspace(self.s_lo, self.s_hi, self.n_s)


@dataclass
class HypothesisReport:
    """Per-hypothesis verdicts with worst margins and locations."""

    checks: dict = field(default_factory=dict)
    sample_spec: SampleSpec | None = None
    s0: float | None = None

    def verdict(self, name: str) -> str:
        return self.checks[name]["verdict"]

    def passed(self, *names: str) -> bool:
        return all(self.checks[n]["verdict"] == "pass" for n in names)


def _record(report, name, verdict, margin=None, location=None, **extra):
    entry = {"verdict": verdict, "margin": margin, "location": location}
    entry.update(extra)
    report.checks[name] = entry


def check_potential_hypotheses(
    V: Potential, a: float, samples: SampleSpec | None = None
) -> HypothesisReport:
    """Audit the structural conditions on V over the sample grids.

    nonneg:      V(r) >= 0 everywhere sampled.
    bounded:     V(r) <= v_inf, with a monotone approach over the outer decade.
    slope_bound: r V'(r) <= a / (2 r^2).
    decay_map:   t -> 3 V(t r) + t r V'(t r) + a / (4 t^2 r^2) nonincreasing.
    dilation_gap: the scaled-potential inequality
                  3 t^3 [V(r) - V(t r)] - (1 - t^3) r V'(r) >= -a (1-t)^2 (2+t) / (4 r^2).
    """
    ss = samples or SampleSpec()
    report = HypothesisReport(sample_spec=ss)
    r = ss.r_samples()
    t = ss.t_samples()
    with np.errstate(over="raise", invalid="raise"):
        try:
            vr = np.asarray(V(r), dtype=float)
            dv = np.asarray(V.radial_dilation_term(r), dtype=float)  # r V'(r)
        except FloatingPointError:
            for name in ("nonneg", "bounded", "slope_bound", "decay_map", "dilation_gap"):
                _record(report, name, "inconclusive", location="evaluation overflow")
            return report

    # (nonneg): V >= 0
    i = int(np.argmin(vr))
    _record(report, "nonneg", "pass" if vr[i] >= 0 else "fail", margin=float(vr[i]), location=float(r[i]))

    # (bounded): V <= v_inf on samples; approach over the outermost decade
    gap = V.v_inf - vr
    i = int(np.argmin(gap))
    verdict = "pass" if gap[i] >= -1e-12 else "fail"
    if verdict == "pass" and V.kind == "tabulated":
        outer = gap[r >= ss.r_hi / 10.0]
        if len(outer) > 2 and not np.all(np.diff(outer) <= 1e-12 * max(1.0, abs(V.v_inf))):
            verdict = "inconclusive"
    _record(report, "bounded", verdict, margin=float(gap[i]), location=float(r[i]))

    # (slope_bound): r V'(r) <= a / (2 r^2)
    margin = a / (2.0 * r**2) - dv
    i = int(np.argmin(margin))
    _record(
        report,
        "slope_bound",
        "pass" if margin[i] >= 0 else "fail",
        margin=float(margin[i]),
        location=float(r[i]),
    )

    # (decay_map): nonincreasing in t for every sampled r
    tt, rr = np.meshgrid(t, r, indexing="ij")
    g = 3.0 * np.asarray(V(tt * rr)) + np.asarray(V.radial_dilation_term(tt * rr)) + a / (
        4.0 * tt**2 * rr**2
    )
    diffs = np.diff(g, axis=0)  # increase along t means failure
    i, j = np.unravel_index(np.argmax(diffs), diffs.shape)
    worst = float(diffs[i, j])
    scale = max(1.0, float(np.abs(g).max()))
    _record(
        report,
        "decay_map",
        "pass" if worst <= 1e-11 * scale else "fail",
        margin=-worst,
        location=(float(t[i]), float(r[j])),
    )

    # (dilation_gap): direct check of the scaled-potential inequality
    lhs = 3.0 * tt**3 * (vr[None, :] - np.asarray(V(tt * rr))) - (1.0 - tt**3) * dv[None, :]
    rhs = -a * (1.0 - tt) ** 2 * (2.0 + tt) / (4.0 * rr**2)
    margin2 = lhs - rhs
    i, j = np.unravel_index(np.argmin(margin2), margin2.shape)
    _record(
        report,
        "dilation_gap",
        "pass" if margin2[i, j] >= -1e-9 else "fail",
        margin=float(margin2[i, j]),
        location=(float(t[i]), float(r[j])),
    )
    return report


def check_nonlinearity_hypotheses(
    f: Nonlinearity, v_inf: float, samples: SampleSpec | None = None
) -> HypothesisReport:
    """Audit the growth and solvability conditions on f.

    growth:      |f(t)| <= C0 (1 + |t|^5) with the fitted C0 finite.
    small_t:     f(t)/t -> 0 as t -> 0 (monotone trend over the smallest decade).
    large_t:     f(t)/t^5 -> 0 as |t| -> infty (monotone trend over the largest decade).
    threshold:   some s0 > 0 with F(s0) > v_inf s0^2 / 2; s0 is recorded.
    """
    ss = samples or SampleSpec()
    report = HypothesisReport(sample_spec=ss)
    t = ss.t_samples()
    ft = np.asarray(f.f(t), dtype=float)

    # growth: fitted constant
    c0 = np.max(np.abs(ft) / (1.0 + t**5))
    _record(report, "growth", "pass" if np.isfinite(c0) else "fail", margin=float(c0), c0=float(c0))

    # small-t: ratio f(t)/t over the smallest sampled decade, decreasing toward 0
    ratio0 = np.abs(ft) / t
    inner = ratio0[t <= ss.t_lo * 10.0]
    if len(inner) >= 3 and np.all(np.diff(inner) >= -1e-15) and inner[0] < inner[-1] * 0.9:
        verdict = "pass"  # shrinking monotonically as t decreases
    elif len(inner) >= 3 and np.all(inner <= inner[-1] * (1 + 1e-12)) and inner[0] <= inner[-1] * 0.9:
        verdict = "pass"
    else:
        verdict = "inconclusive" if np.all(np.isfinite(inner)) else "fail"
    _record(report, "small_t", verdict, margin=float(inner[0]) if len(inner) else None)

    # large-t: ratio f(t)/t^5 over the largest sampled decade
    ratio5 = np.abs(ft) / t**5
    outer = ratio5[t >= ss.t_hi / 10.0]
    if len(outer) >= 3 and np.all(np.diff(outer) <= 1e-15) and outer[-1] < outer[0] * 0.9:
        verdict = "pass"
    elif len(outer) >= 3 and np.all(np.diff(outer) >= -1e-15) and outer[-1] > outer[0] * 1.001:
        verdict = "fail"
    else:
        verdict = "inconclusive"
    _record(report, "large_t", verdict, margin=float(outer[-1]) if len(outer) else None)

    # threshold: scan for F(s) > v_inf s^2 / 2
    s = ss.s_samples()
    Fs = np.asarray(f.F(s), dtype=float)
    excess = Fs - 0.5 * v_inf * s**2
    hit = np.nonzero(excess > 0)[0]
    if len(hit):
        s0 = float(s[hit[0]])
        report.s0 = s0
        _record(report, "threshold", "pass", margin=float(excess[hit[0]]), location=s0)
    else:
        i = int(np.argmax(excess))
        _record(report, "threshold", "fail", margin=float(excess[i]), location=float(s[i]))
    return report
