"""Ground-state computation and its independent oracle.

Direct path: minimize the reduced (dilation-projected) energy over the
admissible cone with preconditioned projected gradient descent.

Oracle path (constant potential only): solve the scalar field equation
-a_eff Lap v + V_inf v = f(v) by radial shooting, then map v to a solution
of the Kirchhoff equation through the rescaling u(x) = v(t x) with
a t^2 + b ||grad v||_2^2 t = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import minimize_scalar

from .grids import RadialFunction, RadialGrid, grad_norm_sq, make_grid
from .functionals import DilationFamily
from .problem import Nonlinearity, Potential, ProblemSpec, check_potential_hypotheses
from .projection import (
    BracketingFailed,
    NotInLambda,
    lambda_margin,
    project_to_manifold,
    reduced_gradient_at,
)


class InitialIterateNotInLambda(RuntimeError):
    """No admissible starting profile could be constructed."""


class ShootingBracketFailed(RuntimeError):
    """The shooting amplitude scan found no decay/blow-up dichotomy."""


class TNotFound(RuntimeError):
    """No dilation makes the path endpoint's energy negative."""


@dataclass
class SolverOptions:
    max_iters: int = 1500
    grad_tol: float = 1e-6
    stall_iters: int = 20
    stall_decrease: float = 1e-12
    projection_tol: float = 1e-9
    t_lo: float = 1e-2
    t_hi: float = 1e2
    n_scan: int = 64
    step_init: float = 1.0
    step_min: float = 1e-14
    armijo: float = 1e-4
    seed: int = 0


@dataclass
class SolveResult:
    u_hat: RadialFunction
    m: float
    pohozaev_residual: float
    ode_res: float
    grad_norm: float
    reduced_grad_norm: float
    trace: list = field(default_factory=list)
    status: str = "converged"
    iterations: int = 0
    t_u: float = 1.0


@dataclass
class LambdaSweep:
    lambdas: np.ndarray
    m_inf_values: np.ndarray
    c_upper_values: np.ndarray


# ---------------------------------------------------------------------------
# initial iterate


def _threshold_amplitude(ps: ProblemSpec, lam: float) -> float:
    """Smallest sampled s with lam * F(s) > v_inf s^2 / 2."""
    s = np.geomspace(1e-3, 1e3, 600)
    excess = lam * np.asarray(ps.nonlinearity.F(s)) - 0.5 * ps.v_inf * s**2
    hit = np.nonzero(excess > 0)[0]
    if not len(hit):
        raise InitialIterateNotInLambda(
            "no amplitude satisfies the admissibility threshold F(s) > v_inf s^2 / 2"
        )
    return float(s[hit[0]])


def initial_iterate(grid: RadialGrid, ps: ProblemSpec, lam: float = 1.0) -> RadialFunction:
    """Smooth Gaussian bump above the threshold amplitude, widened until
    admissible (smoothness matters: the descent stabilizer penalizes kinks)."""
    s0 = 2.0 * _threshold_amplitude(ps, lam)
    r = grid.nodes
    radius = 2.0
    while radius < grid.r_max / 3.0:
        vals = s0 * np.exp(-((r / radius) ** 2))
        vals[-1] = 0.0
        u = RadialFunction(grid, vals)
        if lambda_margin(u, ps, lam=lam) < -1e-8:
            return u
        radius *= 1.3
    raise InitialIterateNotInLambda(
        "Gaussian profile never entered the admissible cone at representable widths"
    )


# ---------------------------------------------------------------------------
# preconditioner


def _stiffness_bands(grid: RadialGrid):
    """Upper bands of K = D^T W D, the discrete form of int |grad phi|^2 dx.

    K is symmetric positive semidefinite by construction, which is what makes
    the preconditioned direction a guaranteed descent direction.
    """
    cached = grid.__dict__.get("_stiffness_bands")
    if cached is not None:
        return cached
    from scipy.sparse import diags

    D = grid.derivative_matrix
    K = (D.T @ diags(grid.radial_volume_weights) @ D).tocsr()
    bw = 0
    coo = K.tocoo()
    if coo.nnz:
        bw = int(np.max(np.abs(coo.row - coo.col)))
    bands = np.zeros((bw + 1, grid.n))
    for k in range(bw + 1):
        bands[bw - k, k:] = K.diagonal(k)
    grid.__dict__["_stiffness_bands"] = bands
    return bands


def _fourth_difference(grid: RadialGrid):
    """Sparse 4th-difference operator (stencil [1,-4,6,-4,1], folded at r = 0).

    Centered first differences annihilate the node-scale (Nyquist) mode, so
    the discrete gradient norm alone is not coercive at grid scale and the
    energy descent would otherwise tunnel into sawtooth profiles; this
    operator powers the stabilization penalty that blocks that mode.  It is
    O(h^4) on smooth profiles, so the penalty vanishes under refinement.
    """
    cached = grid.__dict__.get("_fourth_difference")
    if cached is not None:
        return cached
    from scipy.sparse import csr_matrix

    n = grid.n
    sten = np.array([1.0, -4.0, 6.0, -4.0, 1.0])
    rows, cols, vals = [], [], []
    for i in range(n - 2):
        for off, w in zip(range(-2, 3), sten):
            j = i + off
            rows.append(i)
            cols.append(abs(j))  # fold across r = 0 by even symmetry
            vals.append(w)
    C = csr_matrix((vals, (rows, cols)), shape=(n, n))
    grid.__dict__["_fourth_difference"] = C
    return C


def _stab_bands(grid: RadialGrid):
    """Upper bands of C4^T W C4, the Hessian (up to a factor) of the
    grid-scale stabilization penalty."""
    cached = grid.__dict__.get("_stab_bands")
    if cached is not None:
        return cached
    from scipy.sparse import diags

    C = _fourth_difference(grid)
    H = (C.T @ diags(grid.radial_volume_weights) @ C).tocsr()
    coo = H.tocoo()
    bw = int(np.max(np.abs(coo.row - coo.col))) if coo.nnz else 0
    bands = np.zeros((bw + 1, grid.n))
    for k in range(bw + 1):
        bands[bw - k, k:] = H.diagonal(k)
    grid.__dict__["_stab_bands"] = bands
    return bands


def _precondition(grid: RadialGrid, g_nodal: np.ndarray, c1: float, c2: float, c3: float = 0.0) -> np.ndarray:
    """Solve (c1 K + c2 W + c3 C4'WC4) d = g_nodal (Sobolev/Riesz
    representative of the nodal gradient) with d pinned to 0 at r_max.

    The c3 block mirrors the stabilization penalty: without it the solve
    re-injects the node-scale modes that K cannot see.
    """
    from scipy.linalg import solveh_banded

    Kb = _stiffness_bands(grid)
    ab = c1 * Kb
    if c3 != 0.0:
        Sb = _stab_bands(grid)
        ab[-Sb.shape[0]:, :] += c3 * Sb
    ab[-1, :] += c2 * grid.radial_volume_weights
    # tiny ridge keeps the r = 0 node invertible (its volume weight vanishes)
    ridge = 1e-12 * max(1.0, float(np.max(ab[-1])))
    ab[-1, :] += ridge
    # penalty pin at r_max
    ab[-1, -1] += 1e8 * max(1.0, float(np.max(ab[-1])))
    rhs = g_nodal.copy()
    rhs[-1] = 0.0
    return solveh_banded(ab, rhs)


# ---------------------------------------------------------------------------
# direct solver


def solve_ground_state(
    ps: ProblemSpec,
    opts: SolverOptions | None = None,
    grid: RadialGrid | None = None,
    lam: float = 1.0,
    limit: bool = False,
    u0: RadialFunction | None = None,
) -> SolveResult:
    """Minimize the reduced energy over the admissible cone.

    Preconditioned projected gradient descent with backtracking: each trial
    step is rejected unless it stays admissible and decreases the reduced
    energy by the Armijo fraction of the predicted decrease.  The iterate is a
    compact representative of its dilation orbit (the reduced energy is
    dilation invariant); the maximizing dilation t_u is tracked in closed form
    and only folded into the returned candidate at the end, on a co-dilated
    grid, so wide ground states never get truncated.
    """
    opts = opts or SolverOptions()
    if u0 is not None:
        grid = u0.grid
    elif grid is None:
        grid = make_grid(20.0, 2001)
    if not limit and ps.potential.kind != "constant":
        rep = check_potential_hypotheses(ps.potential, ps.a)
        if not rep.passed("nonneg", "bounded"):
            raise ValueError("potential fails the nonnegativity/boundedness audits")

    t_center = 1.0

    def project(u):
        # scan window rides along with the previous maximizer: the optimal
        # dilation of a compact representative can sit far from t = 1
        nonlocal t_center
        lo = max(min(opts.t_lo, t_center / 100.0), 1e-8)
        hi = min(max(opts.t_hi, t_center * 100.0), 1e8)
        try:
            pr = project_to_manifold(
                u, ps, lam=lam, limit=limit, tol=opts.projection_tol,
                t_lo=lo, t_hi=hi, n_scan=opts.n_scan,
            )
        except BracketingFailed:
            pr = project_to_manifold(
                u, ps, lam=lam, limit=limit, tol=opts.projection_tol,
                t_lo=1e-8, t_hi=1e8, n_scan=4 * opts.n_scan,
            )
        t_center = pr.t_u
        return pr

    def pinned(vals):
        vals = np.asarray(vals, dtype=float).copy()
        vals[-1] = 0.0
        return RadialFunction(grid, vals)

    u = u0 if u0 is not None else initial_iterate(grid, ps, lam=lam)
    if not (lambda_margin(u, ps, lam=lam) < -1e-10):
        raise InitialIterateNotInLambda("starting iterate is outside the admissible cone")
    pr = project(u)
    energy = pr.reduced_energy

    rvw = grid.radial_volume_weights
    C4 = _fourth_difference(grid)
    h2 = float(np.mean(np.diff(grid.nodes))) ** 2

    def stab(vals):
        pv = C4 @ vals
        return float((rvw * pv) @ pv) / h2, 2.0 * (C4.T @ (rvw * pv)) / h2

    trace = []
    status = "max_iters"
    step = opts.step_init
    recent = []
    gnorm = np.inf
    it = 0
    for it in range(1, opts.max_iters + 1):
        gvec = reduced_gradient_at(u, ps, pr.t_u, lam=lam, limit=limit)

        fam = DilationFamily(u, ps, lam=lam, limit=limit)
        t = pr.t_u
        c1 = (ps.a + ps.b * t * fam.G) * t
        c2 = max(ps.v_inf, 1e-2) * t**3
        # grid-scale stabilization: keeps descent out of the sawtooth modes
        # that centered differences cannot see; O(h^6) bias on smooth profiles
        mu = 0.1 * c1
        S_u, dS_u = stab(u.values)
        gvec = gvec + mu * dS_u
        gvec[-1] = 0.0
        obj = energy + mu * S_u
        c3 = 2.0 * mu / h2
        Mg = _precondition(grid, gvec, c1, c2, c3)
        # low-rank Hessian corrections on top of the Sobolev model, applied
        # through the Woodbury identity:
        #  - (b t^2/2) dG (x) dG from the Kirchhoff term
        #  - the Schur complement of the inner dilation maximization,
        #    -w_t (x) w_t / zeta''(t_u), which is the stiff direction along
        #    which moving u drags the optimal dilation
        D = grid.derivative_matrix
        dG_nodal = 2.0 * (D.T @ (rvw * (D @ u.values)))
        dG_nodal[-1] = 0.0
        lowrank = [(0.5 * ps.b * t**2, dG_nodal)]
        eps = 1e-6
        zpp = (fam.derivative(t * (1.0 + eps)) - fam.derivative(t * (1.0 - eps))) / (2.0 * t * eps)
        if zpp < 0:
            if fam.limit:
                pd_vec = 3.0 * ps.v_inf * rvw * u.values
            else:
                tr = t * grid.nodes
                pd_vec = rvw * u.values * (
                    3.0 * np.asarray(ps.potential(tr), dtype=float)
                    + np.asarray(ps.potential.radial_dilation_term(tr), dtype=float)
                )
            dNF = rvw * np.asarray(ps.nonlinearity.f(u.values), dtype=float)
            w_t = (0.5 * ps.a + ps.b * t * fam.G) * dG_nodal + t**2 * pd_vec - 3.0 * t**2 * lam * dNF
            w_t[-1] = 0.0
            lowrank.append((-1.0 / zpp, w_t))
        Mw = [_precondition(grid, w, c1, c2, c3) for _, w in lowrank]
        k = len(lowrank)
        S = np.empty((k, k))
        for i in range(k):
            for j in range(k):
                S[i, j] = (1.0 / lowrank[i][0] if i == j else 0.0) + float(lowrank[j][1] @ Mw[i])
        rhs_k = np.array([float(w @ Mg) for _, w in lowrank])
        try:
            coef = np.linalg.solve(S, rhs_k)
            d = Mg - sum(c * mw for c, mw in zip(coef, Mw))
        except np.linalg.LinAlgError:
            d = Mg
        descent = float(gvec @ d)
        if not np.isfinite(descent) or descent <= 0:
            d = Mg
            descent = float(gvec @ d)
        if descent <= 0:
            d = gvec
            descent = float(gvec @ gvec)

        # dual (preconditioned) gradient norm: sqrt of the predicted
        # first-order decrease along the chosen direction at unit step
        gnorm = float(np.sqrt(max(0.0, descent)))
        trace.append((energy, step, gnorm))
        if gnorm <= opts.grad_tol * max(1.0, abs(energy)):
            status = "converged"
            break

        step = min(step * 2.0, 1e3)
        accepted = False
        while step >= opts.step_min:
            trial = pinned(u.values - step * d)
            if lambda_margin(trial, ps, lam=lam) < -1e-10:
                try:
                    pr_trial = project(trial)
                except (NotInLambda, BracketingFailed):
                    pr_trial = None
                if pr_trial is not None:
                    obj_trial = pr_trial.reduced_energy + mu * stab(trial.values)[0]
                    if obj_trial <= obj - opts.armijo * step * descent:
                        u, pr = trial, pr_trial
                        recent.append(obj - obj_trial)
                        energy = pr_trial.reduced_energy
                        accepted = True
                        break
            step *= 0.5
        if not accepted:
            status = "stalled"
            break
        if len(recent) >= opts.stall_iters and sum(recent[-opts.stall_iters :]) < opts.stall_decrease:
            status = "stalled"
            break

    # fold the final dilation into the candidate (exactly, on a co-dilated
    # grid) so the returned function sits on the manifold at t = 1
    u_hat = dilate_with_grid(u, pr.t_u)
    m = pr.reduced_energy
    t_final = pr.t_u
    poh = abs(DilationFamily(u_hat, ps, lam=lam, limit=limit).pohozaev_at(1.0))
    res = ode_residual(u_hat, ps, lam=lam, limit=limit)
    return SolveResult(
        u_hat=u_hat,
        m=float(m),
        pohozaev_residual=float(poh),
        ode_res=float(res),
        grad_norm=float(np.sqrt(grad_norm_sq(u_hat))),
        reduced_grad_norm=float(gnorm),
        trace=trace,
        status=status,
        iterations=it,
        t_u=float(t_final),
    )


# ---------------------------------------------------------------------------
# shooting oracle


def solve_scalar_field_shooting(
    a_eff: float,
    v_inf: float,
    f: Nonlinearity,
    grid: RadialGrid | None = None,
    lam: float = 1.0,
) -> RadialFunction:
    """Radial shooting for -a_eff Lap v + v_inf v = lam f(v), v'(0) = 0, v -> 0.

    Integrates w = r v (which removes the coordinate singularity), bisecting
    the central amplitude on the decay/blow-up dichotomy.  Beyond the radius
    where v falls under 1e-5 of its center value the profile is continued by
    the exact linear far-field solution exp(-kappa r)/r.
    """
    if a_eff <= 0 or v_inf <= 0:
        raise ValueError("a_eff and v_inf must be positive")
    grid = grid or make_grid(20.0, 2001)
    kappa = np.sqrt(v_inf / a_eff)
    r_end = grid.r_max
    r0 = 1e-8

    def rhs(r, y):
        v = y[0] / r
        return [y[1], r * (v_inf * v - lam * f.f(v)) / a_eff]

    def overshoot_event(r, y):
        return y[0]

    overshoot_event.terminal = True
    overshoot_event.direction = -1

    def undershoot_event(r, y):
        return y[1] - y[0] / r  # r * v'(r)

    undershoot_event.terminal = True
    undershoot_event.direction = 1

    def classify(s):
        v2 = (v_inf * s - lam * f.f(s)) / (3.0 * a_eff)
        if v2 >= 0:
            return "under", None
        y0 = [r0 * (s + 0.5 * v2 * r0**2), s + 1.5 * v2 * r0**2]
        sol = solve_ivp(
            rhs, (r0, r_end), y0,
            events=(overshoot_event, undershoot_event),
            method="DOP853", rtol=1e-12, atol=1e-15, dense_output=True, max_step=0.25,
        )
        if len(sol.t_events[0]):
            return "over", sol
        return "under", sol

    s_lo = _threshold_amplitude_scalar(v_inf, f, lam)
    verdict, _ = classify(s_lo)
    while verdict == "over" and s_lo > 1e-8:
        s_lo *= 0.5
        verdict, _ = classify(s_lo)
    if verdict == "over":
        raise ShootingBracketFailed("every sampled amplitude overshoots")
    s_hi = s_lo
    for _ in range(60):
        s_hi *= 1.5
        verdict, _ = classify(s_hi)
        if verdict == "over":
            break
    else:
        raise ShootingBracketFailed("no overshoot amplitude found in the scan")

    for _ in range(200):
        s_mid = 0.5 * (s_lo + s_hi)
        if s_mid == s_lo or s_mid == s_hi:
            break
        verdict, _ = classify(s_mid)
        if verdict == "over":
            s_hi = s_mid
        else:
            s_lo = s_mid

    s_star = s_lo
    _, sol = classify(s_star)
    v2 = (v_inf * s_star - lam * f.f(s_star)) / (3.0 * a_eff)

    # cut to the far-field tail where the profile has decayed by 1e-5
    v_tail = 1e-5 * s_star
    r_dense = np.linspace(max(r0, 1e-4), sol.t[-1], 4000)
    v_dense = sol.sol(r_dense)[0] / r_dense
    below = np.nonzero(v_dense <= v_tail)[0]
    r_cut = r_dense[below[0]] if len(below) else sol.t[-1]
    v_cut = float(sol.sol(r_cut)[0] / r_cut)

    def profile(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.empty_like(r)
        near = r < 1e-4
        out[near] = s_star + 0.5 * v2 * r[near] ** 2
        mid = (~near) & (r < r_cut)
        if np.any(mid):
            out[mid] = sol.sol(r[mid])[0] / r[mid]
        far = r >= r_cut
        out[far] = v_cut * np.exp(-kappa * (r[far] - r_cut)) * (r_cut / r[far])
        return out

    u = RadialFunction(grid, profile(grid.nodes))
    u.dense_profile = profile
    return u


def _threshold_amplitude_scalar(v_inf: float, f: Nonlinearity, lam: float) -> float:
    s = np.geomspace(1e-3, 1e3, 600)
    excess = lam * np.asarray(f.F(s)) - 0.5 * v_inf * s**2
    hit = np.nonzero(excess > 0)[0]
    if not len(hit):
        raise ShootingBracketFailed("solvability threshold F(s) > v_inf s^2 / 2 never holds")
    return float(s[hit[0]])


def dilate_with_grid(u: RadialFunction, t: float) -> RadialFunction:
    """Exact dilation u_t(r) = u(r/t) represented on a co-dilated grid.

    The grid radius is scaled by t while the nodal values are reused verbatim
    (node i of the new grid sits at t * r_i), so no interpolation error enters
    and dilations far wider than the original window stay representable.
    """
    if t <= 0:
        raise ValueError(f"dilation factor must be positive, got {t}")
    if t == 1.0:
        return RadialFunction(u.grid, u.values.copy())
    g = u.grid
    new_grid = make_grid(g.r_max * t, g.n, g.scheme)
    out = RadialFunction(new_grid, u.values.copy())
    profile = getattr(u, "dense_profile", None)
    if profile is not None:
        out.dense_profile = lambda r, _p=profile, _t=t: _p(np.asarray(r, dtype=float) / _t)
    return out


def kirchhoff_from_scalar_field(v: RadialFunction, a: float, b: float):
    """Map a scalar-field profile (a_eff = 1 normalization) to the Kirchhoff
    problem via u(r) = v(t r) with t the positive root of a t^2 + b G t = 1,
    G = ||grad v||_2^2.

    The returned u lives on a grid stretched by 1/t (t < 1 whenever b > 0, so
    the Kirchhoff ground state is wider than the scalar-field profile and
    would not fit the original window).  Returns (u, t).
    """
    if a <= 0 or b < 0:
        raise ValueError("need a > 0 and b >= 0")
    G = grad_norm_sq(v)
    disc = (b * G) ** 2 + 4.0 * a
    if disc <= 0:
        raise ValueError("non-positive discriminant in the rescaling quadratic")
    t = (-b * G + np.sqrt(disc)) / (2.0 * a)
    u = dilate_with_grid(v, 1.0 / t)
    return u, float(t)


# ---------------------------------------------------------------------------
# diagnostics


def ode_residual_pointwise(
    u: RadialFunction, ps: ProblemSpec, lam: float = 1.0, limit: bool = False
) -> np.ndarray:
    """Pointwise residual of the radial equation at the interior nodes."""
    grid = u.grid
    du, d2u = grid.high_order_derivatives(u.values)
    r = grid.nodes
    lap = np.empty_like(du)
    lap[0] = 3.0 * d2u[0]
    lap[1:] = d2u[1:] + 2.0 * du[1:] / r[1:]
    G = grid.volume_integrate(du**2)
    if limit or ps.potential.kind == "constant":
        vvals = np.full(grid.n, ps.v_inf)
    else:
        vvals = np.asarray(ps.potential(r), dtype=float)
    res = -(ps.a + ps.b * G) * lap + vvals * u.values - lam * np.asarray(
        ps.nonlinearity.f(u.values), dtype=float
    )
    return res[1:-1]


def ode_residual(u: RadialFunction, ps: ProblemSpec, lam: float = 1.0, limit: bool = False) -> float:
    """Weighted L2 norm of the pointwise residual over the interior nodes."""
    res = ode_residual_pointwise(u, ps, lam=lam, limit=limit)
    rvw = u.grid.radial_volume_weights[1:-1]
    return float(np.sqrt(rvw @ res**2))


# ---------------------------------------------------------------------------
# sweeps and path bounds


def mountain_pass_upper_bound(
    ps: ProblemSpec,
    lam: float,
    seed: RadialFunction,
    t_max_search: float = 64.0,
) -> float:
    """Upper bound on the mountain-pass level from the dilation path of `seed`.

    Finds T by doubling from 2 until the path endpoint has negative energy,
    then returns the maximum of I_lambda(seed_{tT}) over t in (0, 1].
    """
    fam = DilationFamily(seed, ps, lam=lam)
    T = 2.0
    while fam.value(T) >= 0:
        T *= 2.0
        if T > t_max_search:
            raise TNotFound(f"no endpoint dilation up to {t_max_search} gives negative energy")
    ts = np.geomspace(1e-3, T, 512)
    vals = np.array([fam.value(t) for t in ts])
    i = int(np.argmax(vals))
    lo = ts[max(i - 1, 0)]
    hi = ts[min(i + 1, len(ts) - 1)]
    res = minimize_scalar(lambda t: -fam.value(t), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    return float(max(vals[i], -res.fun))


def lambda_sweep(
    ps: ProblemSpec,
    lambdas,
    opts: SolverOptions | None = None,
    grid: RadialGrid | None = None,
) -> LambdaSweep:
    """Ground energies of the weighted limit problems plus path upper bounds.

    m_inf_values[i] is the manifold minimum of the limit functional with
    nonlinear weight lambdas[i]; c_upper_values[i] is the dilation-path bound
    on the mountain-pass level of the full (variable-V) weighted functional,
    seeded with the unweighted limit ground state.
    """
    lambdas = np.asarray(sorted(float(l) for l in lambdas))
    if lambdas[0] < 0.5 or lambdas[-1] > 1.0:
        raise ValueError("nonlinear weights must lie in [1/2, 1]")
    opts = opts or SolverOptions()
    grid = grid or make_grid(20.0, 2001)

    results: dict[float, float] = {}
    warm = None
    seed_state = None
    for lam in lambdas[::-1]:  # descending: warm starts shrink gracefully
        u0 = warm if (warm is not None and lambda_margin(warm, ps, lam=lam) < -1e-10) else None
        try:
            sr = solve_ground_state(ps, opts, grid=grid, lam=float(lam), limit=True, u0=u0)
        except (InitialIterateNotInLambda, BracketingFailed):
            results[float(lam)] = np.nan
            continue
        results[float(lam)] = sr.m
        warm = sr.u_hat
        if lam == lambdas[-1]:
            seed_state = sr.u_hat

    if seed_state is None:
        sr = solve_ground_state(ps, opts, grid=grid, lam=float(lambdas[-1]), limit=True)
        seed_state = sr.u_hat

    c_upper = []
    for lam in lambdas:
        try:
            c_upper.append(mountain_pass_upper_bound(ps, float(lam), seed_state))
        except TNotFound:
            c_upper.append(np.nan)
    return LambdaSweep(
        lambdas=lambdas,
        m_inf_values=np.array([results.get(float(l), np.nan) for l in lambdas]),
        c_upper_values=np.array(c_upper),
    )
