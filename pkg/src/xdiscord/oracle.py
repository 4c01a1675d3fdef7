"""Independent verification path: full atom-field master equation.

The two-atom + cavity density matrix is integrated in a truncated Fock basis
with fixed-step RK4, the field is traced out, and the reduced atomic state is
compared element-wise against the analytic propagator. The dissipator is the
standard cavity-decay form kappa*(a rho a+ - {a+a, rho}/2), under which the
field amplitude decays at kappa/2 and the photon number at kappa; this is the
convention the analytic solution and the steady coherence value correspond to.

Joint-space ordering is atomic-major: index = atomic*(n_max+1) + fock, i.e.
kron(atomic operator, field operator).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import TCParams, evolve
from .xstate import DEFAULT_TOL, XState, require_valid

#: Number of excited atoms in each atomic basis state |gg>,|ge>,|eg>,|ee>.
EXCITED_COUNT = np.array([0.0, 1.0, 1.0, 2.0])

#: Step-size guard: dt*max(lam*(n_max+1), kappa*n_max) must stay below this.
STEP_GUARD = 0.05


@dataclass(frozen=True)
class FockTruncation:
    """Retained Fock levels 0..n_max plus the coherent-state weight beyond."""

    n_max: int
    tail_mass: float
    tail_bound: float = 1e-12

    @property
    def dim(self) -> int:
        return self.n_max + 1

    @classmethod
    def for_alpha_sq(
        cls, alpha_sq: float, n_max: int | None = None, tail_bound: float = 1e-12
    ) -> "FockTruncation":
        """Truncation for a coherent field of mean photon number alpha_sq.

        With n_max omitted, the smallest cutoff whose Poisson tail is below
        tail_bound is chosen. An explicit n_max that leaves too much tail is
        rejected with the required cutoff in the message.
        """
        if alpha_sq < 0.0:
            raise ValueError("alpha_sq must be nonnegative")
        if n_max is None:
            n = 0
            while poisson_tail(alpha_sq, n) > tail_bound:
                n += 1
            return cls(n_max=n, tail_mass=poisson_tail(alpha_sq, n), tail_bound=tail_bound)
        tail = poisson_tail(alpha_sq, n_max)
        if tail > tail_bound:
            need = n_max
            while poisson_tail(alpha_sq, need) > tail_bound:
                need += 1
            raise ValueError(
                f"n_max = {n_max} leaves a coherent tail of {tail:.3e} > {tail_bound:.3e}; "
                f"need n_max >= {need}"
            )
        return cls(n_max=n_max, tail_mass=tail, tail_bound=tail_bound)


def poisson_tail(alpha_sq: float, n_max: int) -> float:
    """P(n > n_max) for Poisson(alpha_sq), summed forward to avoid cancellation."""
    if alpha_sq == 0.0:
        return 0.0
    # term at n = n_max + 1
    log_term = -alpha_sq + (n_max + 1) * math.log(alpha_sq) - math.lgamma(n_max + 2)
    term = math.exp(log_term)
    total = 0.0
    n = n_max + 1
    while term > 1e-300 and n < n_max + 2000:
        total += term
        n += 1
        term *= alpha_sq / n
    return total


class CavityOperators:
    """Dense matrices for the truncated field and the two-atom operators."""

    def __init__(self, n_max: int):
        self.n_max = n_max
        dim = n_max + 1
        self.identity_field = np.eye(dim, dtype=complex)
        self.a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)
        self.adag = self.a.conj().T
        self.number = np.diag(np.arange(dim, dtype=float)).astype(complex)

        g = np.array([1.0, 0.0])
        e = np.array([0.0, 1.0])
        i2 = np.eye(2)
        sp = np.outer(e, g)  # |e><g|
        sm = sp.T
        self.sigma_plus_a = np.kron(sp, i2).astype(complex)
        self.sigma_minus_a = np.kron(sm, i2).astype(complex)
        self.sigma_plus_b = np.kron(i2, sp).astype(complex)
        self.sigma_minus_b = np.kron(i2, sm).astype(complex)
        self.proj_e_a = np.kron(np.outer(e, e), i2).astype(complex)
        self.proj_g_a = np.kron(np.outer(g, g), i2).astype(complex)
        self.proj_e_b = np.kron(i2, np.outer(e, e)).astype(complex)
        self.proj_g_b = np.kron(i2, np.outer(g, g)).astype(complex)
        # Excitation exchange |ge><eg| + |eg><ge|.
        self.exchange = (
            self.sigma_minus_a @ self.sigma_plus_b + self.sigma_plus_a @ self.sigma_minus_b
        )


def build_hamiltonian(params: TCParams, trunc: FockTruncation) -> np.ndarray:
    """Dense effective Hamiltonian on the joint space.

    (lam/2) * [ sum_j (|e_j><e_j| a a+ - |g_j><g_j| a+ a) + exchange ].
    a a+ is represented as n+1 on every retained level (the untruncated
    commutation value); the raw truncated product would wrongly zero the
    Stark shift of the top Fock state.
    """
    ops = CavityOperators(trunc.n_max)
    lam = params.lam
    n_op = ops.number
    aad = n_op + ops.identity_field
    stark = np.kron(ops.proj_e_a + ops.proj_e_b, aad) - np.kron(
        ops.proj_g_a + ops.proj_g_b, n_op
    )
    return 0.5 * lam * (stark + np.kron(ops.exchange, ops.identity_field))


def coherent_vector(alpha: complex, trunc: FockTruncation) -> np.ndarray:
    """Normalized truncated coherent-state amplitudes alpha^n/sqrt(n!)."""
    alpha = complex(alpha)
    tail = poisson_tail(abs(alpha) ** 2, trunc.n_max)
    if tail > trunc.tail_bound:
        need = FockTruncation.for_alpha_sq(abs(alpha) ** 2, tail_bound=trunc.tail_bound)
        raise ValueError(
            f"truncation n_max = {trunc.n_max} too small for |alpha|^2 = {abs(alpha)**2:.4g} "
            f"(tail {tail:.3e}); need n_max >= {need.n_max}"
        )
    n = np.arange(trunc.dim)
    log_fact = np.array([math.lgamma(k + 1) for k in n])
    if alpha == 0:
        amps = np.zeros(trunc.dim, dtype=complex)
        amps[0] = 1.0
        return amps
    log_mag = n * math.log(abs(alpha))
    amps = np.exp(log_mag - 0.5 * log_fact) * np.exp(1j * n * math.atan2(alpha.imag, alpha.real))
    return amps / np.linalg.norm(amps)


def joint_initial(atoms: XState, field_vector: np.ndarray) -> np.ndarray:
    """Product joint state rho_atoms (x) |v><v|."""
    field = np.outer(field_vector, field_vector.conj())
    return np.kron(atoms.to_matrix(), field)


@dataclass(frozen=True)
class IntegrationResult:
    """Sampled joint states plus the run's conservation diagnostics."""

    times: np.ndarray
    states: tuple[np.ndarray, ...]
    max_trace_drift: float
    min_eigenvalue: float


def _make_rhs(params: TCParams, trunc: FockTruncation):
    """Right-hand side of the master equation acting on rho viewed as
    (4, F, 4, F). Applies each operator through its exact structure, which is
    equal to the dense-matrix expression (unit-tested) but much faster.
    """
    lam, kappa = params.lam, params.kappa
    fdim = trunc.dim
    nvec = np.arange(fdim, dtype=float)
    # Stark diagonal d[j, n] = (lam/2) * (n_e(j)*(n+1) - n_g(j)*n)
    stark = 0.5 * lam * (
        EXCITED_COUNT[:, None] * (nvec[None, :] + 1.0)
        - (2.0 - EXCITED_COUNT)[:, None] * nvec[None, :]
    )
    sq = np.sqrt(nvec[1:])
    half_lam = 0.5 * lam

    def rhs(rho):
        h_rho = stark[:, :, None, None] * rho
        h_rho[1] += half_lam * rho[2]
        h_rho[2] += half_lam * rho[1]
        rho_h = rho * stark[None, None, :, :]
        rho_h[:, :, 1] += half_lam * rho[:, :, 2]
        rho_h[:, :, 2] += half_lam * rho[:, :, 1]
        out = -1j * (h_rho - rho_h)
        if kappa > 0.0:
            a_rho_ad = np.zeros_like(rho)
            a_rho_ad[:, : fdim - 1, :, : fdim - 1] = (
                sq[None, :, None, None] * sq[None, None, None, :] * rho[:, 1:, :, 1:]
            )
            out += kappa * (
                a_rho_ad
                - 0.5 * (nvec[None, :, None, None] * rho + rho * nvec[None, None, None, :])
            )
        return out

    return rhs


def integrate(
    initial_atoms: XState,
    params: TCParams,
    trunc: FockTruncation,
    t_end: float,
    dt: float,
    sample_times=None,
    tol: float = DEFAULT_TOL,
) -> IntegrationResult:
    """Fixed-step RK4 integration of the joint master equation.

    The joint state starts as rho_atoms (x) |alpha><alpha|. Hermiticity is
    enforced by symmetrization each step; the trace is preserved by the
    generator, and its drift over the run is recorded. Sample times must lie
    on step boundaries (within 1e-9).
    """
    require_valid(initial_atoms, tol)
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    guard = max(params.lam * (trunc.n_max + 1), params.kappa * trunc.n_max, 1e-30)
    if dt > STEP_GUARD / guard:
        raise ValueError(
            f"dt = {dt!r} exceeds the stability guard {STEP_GUARD / guard:.3e} "
            f"for n_max = {trunc.n_max}"
        )
    n_steps = int(round(t_end / dt))

    if sample_times is None:
        sample_times = [t_end]
    sample_steps = {}
    for ts in sample_times:
        k = int(round(ts / dt))
        if abs(k * dt - ts) > 1e-9:
            raise ValueError(f"sample time {ts!r} is not on a step boundary (dt = {dt!r})")
        sample_steps.setdefault(min(k, n_steps), []).append(ts)

    alpha = math.sqrt(params.alpha_sq)
    rho = joint_initial(initial_atoms, coherent_vector(alpha, trunc))
    fdim = trunc.dim
    rho = rho.reshape(4, fdim, 4, fdim)
    rhs = _make_rhs(params, trunc)

    def trace_of(r):
        return float(np.einsum("amam->", r).real)

    out_times, out_states = [], []
    max_drift = abs(trace_of(rho) - 1.0)

    def record(step):
        if step in sample_steps:
            for ts in sample_steps[step]:
                out_times.append(ts)
                out_states.append(rho.reshape(4 * fdim, 4 * fdim).copy())

    record(0)
    sixth = dt / 6.0
    for step in range(1, n_steps + 1):
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * dt * k1)
        k3 = rhs(rho + 0.5 * dt * k2)
        k4 = rhs(rho + dt * k3)
        rho = rho + sixth * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = 0.5 * (rho + rho.transpose(2, 3, 0, 1).conj())
        drift = abs(trace_of(rho) - 1.0)
        if drift > max_drift:
            max_drift = drift
        record(step)

    min_eig = math.inf
    for m in out_states:
        ev = np.linalg.eigvalsh(m)
        if ev[0] < min_eig:
            min_eig = float(ev[0])

    order = np.argsort(out_times)
    return IntegrationResult(
        times=np.asarray(out_times)[order],
        states=tuple(out_states[i] for i in order),
        max_trace_drift=max_drift,
        min_eigenvalue=min_eig,
    )


def trace_out_field(joint: np.ndarray) -> tuple[XState, float]:
    """Partial trace over the Fock index.

    Returns the X components of the reduced atomic state together with the
    largest |element| outside the X pattern. The returned XState is built from
    the raw components and is not re-validated here: oracle output carries the
    integration's own trace-level residue.
    """
    dim = joint.shape[0]
    if joint.shape != (dim, dim) or dim % 4 != 0:
        raise ValueError(f"joint state has shape {joint.shape}, expected (4*F, 4*F)")
    fdim = dim // 4
    reduced = np.einsum("ambm->ab", joint.reshape(4, fdim, 4, fdim))
    x_mask = np.zeros((4, 4), dtype=bool)
    x_mask[np.arange(4), np.arange(4)] = True
    x_mask[0, 3] = x_mask[3, 0] = x_mask[1, 2] = x_mask[2, 1] = True
    off_x = float(np.max(np.abs(reduced[~x_mask]))) if (~x_mask).any() else 0.0
    state = XState.from_coherences(
        reduced[0, 0].real,
        reduced[1, 1].real,
        reduced[2, 2].real,
        reduced[3, 3].real,
        rho14=reduced[0, 3],
        rho23=reduced[1, 2],
    )
    return state, off_x


@dataclass(frozen=True)
class CompareReport:
    """Element-wise deviation of the analytic propagator from the oracle."""

    times: np.ndarray
    deviations: np.ndarray
    max_deviation: float
    t_at_max: float
    max_trace_drift: float
    max_off_x_residual: float
    p1_drift: float
    p4_drift: float
    min_eigenvalue: float

    def as_dict(self) -> dict:
        return {
            "max_deviation": self.max_deviation,
            "t_at_max": self.t_at_max,
            "max_trace_drift": self.max_trace_drift,
            "max_off_x_residual": self.max_off_x_residual,
            "p1_drift": self.p1_drift,
            "p4_drift": self.p4_drift,
            "min_eigenvalue": self.min_eigenvalue,
        }


def _components(state: XState) -> np.ndarray:
    rho14, rho23 = state.rho14, state.rho23
    return np.array(
        [
            state.p1,
            state.p2,
            state.p3,
            state.p4,
            rho14.real,
            rho14.imag,
            rho23.real,
            rho23.imag,
        ]
    )


def compare(
    initial: XState,
    params: TCParams,
    t_grid,
    trunc: FockTruncation,
    dt: float,
    tol: float = DEFAULT_TOL,
) -> CompareReport:
    """Integrate the master equation once and compare the reduced atomic state
    against evolve() at every grid time."""
    t_grid = np.asarray(list(t_grid), dtype=float)
    if t_grid.size == 0:
        raise ValueError("t_grid is empty")
    result = integrate(
        initial, params, trunc, float(t_grid.max()), dt, sample_times=t_grid, tol=tol
    )
    deviations = np.empty(t_grid.size)
    off_x_max = 0.0
    p1_drift = 0.0
    p4_drift = 0.0
    for k, (t, joint) in enumerate(zip(result.times, result.states)):
        reduced, off_x = trace_out_field(joint)
        analytic = evolve(initial, params, float(t), tol)
        deviations[k] = float(np.max(np.abs(_components(analytic) - _components(reduced))))
        off_x_max = max(off_x_max, off_x)
        p1_drift = max(p1_drift, abs(reduced.p1 - initial.p1))
        p4_drift = max(p4_drift, abs(reduced.p4 - initial.p4))
    k_max = int(np.argmax(deviations))
    return CompareReport(
        times=result.times,
        deviations=deviations,
        max_deviation=float(deviations[k_max]),
        t_at_max=float(result.times[k_max]),
        max_trace_drift=result.max_trace_drift,
        max_off_x_residual=off_x_max,
        p1_drift=p1_drift,
        p4_drift=p4_drift,
        min_eigenvalue=result.min_eigenvalue,
    )
