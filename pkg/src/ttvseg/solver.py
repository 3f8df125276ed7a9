"""ADMM state machine for fuzzy multiphase segmentation.

The model splits the membership field U from a smooth copy V (penalty
beta1) and the per-phase gradients of V from auxiliary fields D (penalty
beta2). One iteration updates, in this exact order:

  1. U    per-pixel simplex projection of V - (F + p)/beta1,
          where F_k = (f - c_k)^2,
  2. D    componentwise TL1 prox (or isotropic shrinkage in "tv" mode)
          of grad(v_k) + q_k/beta2 at scale lam/beta2,
  3. V    FFT solve of (beta1*I - beta2*Lap) v_k = p_k + beta1*u_k
          + div(q_k - beta2*d_k),
  4. p,q  multiplier ascent,
  5. c    membership-weighted intensity means.

The loop stops when ||U_t - U_{t-1}||_F / ||U_t||_F falls below tol or
after max_iter iterations; the first iteration always runs because the
stopping metric needs a predecessor.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .diffops import divergence, gradient, laplacian_spectrum, solve_screened_poisson
from .image import validate_membership
from .prox import TL1Params, l21_prox_field, project_membership, rho_a, tl1_prox_field

REGULARIZERS = ("ttv", "tv")

# Phases whose membership mass falls below this keep their previous centroid.
_EMPTY_PHASE_EPS = 1e-12


@dataclass(frozen=True)
class SolverConfig:
    phases: int
    lam: float
    a: float
    beta1: float = 0.25
    beta2: float = 0.25
    max_iter: int = 200
    tol: float = 1e-4
    regularizer: str = "ttv"

    def __post_init__(self):
        if self.phases < 2:
            raise ValueError("need at least 2 phases")
        # lam == 0 is allowed for the degenerate no-regularization runs
        if self.lam < 0:
            raise ValueError("lam must be nonnegative")
        if self.a <= 0:
            raise ValueError("a must be positive")
        if self.beta1 <= 0 or self.beta2 <= 0:
            raise ValueError("beta1 and beta2 must be positive")
        if self.max_iter < 0:
            raise ValueError("max_iter must be nonnegative")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.regularizer not in REGULARIZERS:
            raise ValueError(f"regularizer must be one of {REGULARIZERS}")


@dataclass
class SolverState:
    """All iterates: memberships U, smooth copies V, gradient splits D,
    multipliers p (for U=V) and q (for grad v_k = d_k), centroids c."""

    U: np.ndarray  # (N, m, n)
    V: np.ndarray  # (N, m, n)
    D: np.ndarray  # (N, 2, m, n)
    p: np.ndarray  # (N, m, n)
    q: np.ndarray  # (N, 2, m, n)
    c: np.ndarray  # (N,)
    iter: int = 0
    rel_change_history: list = field(default_factory=list)


@dataclass(frozen=True)
class SolveResult:
    U: np.ndarray
    c: np.ndarray
    iterations: int
    rel_change_history: tuple[float, ...]
    seconds: float

    @property
    def final_rel_change(self) -> float:
        return self.rel_change_history[-1] if self.rel_change_history else float("inf")


def init_state(f, config: SolverConfig, U0, c0) -> SolverState:
    """Start from memberships U0 and centroids c0 with zero multipliers.

    V starts as a copy of U0 and D as the per-phase gradients of V, so the
    splitting constraints hold exactly at iteration 0.
    """
    f = np.asarray(f, dtype=np.float64)
    U0 = validate_membership(U0, config.phases)
    if U0.shape[1:] != f.shape:
        raise ValueError("membership grids do not match the image shape")
    c0 = np.asarray(c0, dtype=np.float64).reshape(-1)
    if c0.size != config.phases:
        raise ValueError(f"expected {config.phases} centroids, got {c0.size}")
    V = U0.copy()
    D = np.stack([gradient(V[k]) for k in range(config.phases)])
    return SolverState(
        U=U0.copy(),
        V=V,
        D=D,
        p=np.zeros_like(U0),
        q=np.zeros_like(D),
        c=c0.copy(),
    )


def update_u(state: SolverState, f, config: SolverConfig):
    """Simplex projection of V - (F + p)/beta1 with F_k = (f - c_k)^2."""
    F = (f[None, :, :] - state.c[:, None, None]) ** 2
    return project_membership(state.V - (F + state.p) / config.beta1)


def update_d(state: SolverState, config: SolverConfig):
    """Prox at scale lam/beta2 applied to grad(v_k) + q_k/beta2, per phase."""
    scale = config.lam / config.beta2
    out = np.empty_like(state.D)
    for k in range(config.phases):
        h = gradient(state.V[k]) + state.q[k] / config.beta2
        if config.regularizer == "ttv":
            out[k] = tl1_prox_field(h, TL1Params(config.a, scale))
        else:
            out[k] = l21_prox_field(h, scale)
    return out


def update_v(state: SolverState, config: SolverConfig, spectrum):
    """FFT solve of the screened Poisson optimality system, per phase.

    Expects state.U and state.D to hold the fresh iterates while p and q
    are still the previous multipliers.
    """
    out = np.empty_like(state.V)
    for k in range(config.phases):
        rhs = (
            state.p[k]
            + config.beta1 * state.U[k]
            + divergence(state.q[k] - config.beta2 * state.D[k])
        )
        out[k] = solve_screened_poisson(rhs, config.beta1, config.beta2, spectrum)
    return out


def update_multipliers(state: SolverState, config: SolverConfig):
    """Dual ascent on both splitting constraints; expects fresh U, V, D."""
    p = state.p + config.beta1 * (state.U - state.V)
    q = np.empty_like(state.q)
    for k in range(config.phases):
        q[k] = state.q[k] + config.beta2 * (gradient(state.V[k]) - state.D[k])
    return p, q


def update_c(state: SolverState, f):
    """Membership-weighted means of f; near-empty phases keep their centroid."""
    c = state.c.copy()
    for k in range(state.U.shape[0]):
        mass = state.U[k].sum()
        if mass >= _EMPTY_PHASE_EPS:
            c[k] = float((f * state.U[k]).sum() / mass)
    return c


def step(state: SolverState, f, config: SolverConfig, spectrum) -> SolverState:
    """One full iteration in the order U, D, V, multipliers, c."""
    U_prev = state.U
    U = update_u(state, f, config)
    D = update_d(state, config)
    mid = replace(state, U=U, D=D)
    V = update_v(mid, config, spectrum)
    mid = replace(mid, V=V)
    p, q = update_multipliers(mid, config)
    mid = replace(mid, p=p, q=q)
    c = update_c(mid, f)
    num = np.linalg.norm(U - U_prev)
    den = np.linalg.norm(U)
    rel = num / den if den > 0 else 0.0
    return replace(
        mid,
        c=c,
        iter=state.iter + 1,
        rel_change_history=state.rel_change_history + [rel],
    )


def solve(f, config: SolverConfig, U0, c0) -> SolveResult:
    """Iterate :func:`step` until the membership change stalls or max_iter."""
    f = np.asarray(f, dtype=np.float64)
    t0 = time.perf_counter()
    state = init_state(f, config, U0, c0)
    spectrum = laplacian_spectrum(*f.shape)
    rel = None  # no predecessor yet, so the first check always passes
    while state.iter < config.max_iter and (rel is None or rel > config.tol):
        state = step(state, f, config, spectrum)
        rel = state.rel_change_history[-1]
    return SolveResult(
        U=state.U,
        c=state.c,
        iterations=state.iter,
        rel_change_history=tuple(state.rel_change_history),
        seconds=time.perf_counter() - t0,
    )


def energy(U, c, f, config: SolverConfig) -> float:
    """Model objective sum_k <(f-c_k)^2, u_k> + lam * R(grad u_k); diagnostic only."""
    U = np.asarray(U, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    f = np.asarray(f, dtype=np.float64)
    total = 0.0
    for k in range(U.shape[0]):
        total += float(((f - c[k]) ** 2 * U[k]).sum())
        g = gradient(U[k])
        if config.regularizer == "ttv":
            total += config.lam * float(rho_a(g, config.a).sum())
        else:
            total += config.lam * float(np.sqrt(g[0] ** 2 + g[1] ** 2).sum())
    return total
