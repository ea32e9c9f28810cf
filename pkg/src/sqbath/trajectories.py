"""Monte Carlo wave-function unraveling of a Lindblad model.

First-order jump/no-jump stepping with a fixed step ``dt``. In each step a
trajectory jumps through channel ``k`` with probability ``r_k ||c_k psi||^2 dt``;
otherwise it is propagated with the exact no-jump operator
``exp(-i H_eff dt)``. The state is renormalized after every step.

Random streams: trajectory ``i`` draws from
``numpy.random.Generator(PCG64(SeedSequence([seed, i])))``, consuming two uniforms
per step (jump test, channel choice) in step order. The output therefore does
not depend on batch size or on how trajectories are spread over workers.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvariantError, StepSizeError
from .expm import expm
from .models import LindbladModel
from .operators import DensityMatrix, Operator

DT_RATE_LIMIT = 0.01
NORM_FLOOR = 1e-150
BATCH = 1024
RNG_BLOCK = 256


@dataclass(frozen=True)
class TrajectoryConfig:
    n_traj: int
    dt: float
    t_max: float
    seed: int = 0
    scheme: str = "jump"

    def __post_init__(self):
        if int(self.n_traj) != self.n_traj or self.n_traj < 1:
            raise InvariantError(f"n_traj must be a positive integer, got {self.n_traj}")
        if not self.dt > 0:
            raise InvariantError(f"dt must be positive, got {self.dt}")
        if not self.t_max > 0:
            raise InvariantError(f"t_max must be positive, got {self.t_max}")
        if not 0 <= int(self.seed) < 2**64:
            raise InvariantError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.scheme != "jump":
            raise InvariantError(f"only the first-order 'jump' scheme is available, got {self.scheme!r}")


@dataclass(frozen=True, eq=False)
class TrajectoryResult:
    """Sampled trajectory states, shape ``(n_traj, len(times), dim)``."""
    times: np.ndarray
    psi: np.ndarray
    model: LindbladModel

    @property
    def n_traj(self) -> int:
        return self.psi.shape[0]

    def density_matrices(self) -> list[DensityMatrix]:
        rho = np.einsum("nti,ntj->tij", self.psi, self.psi.conj()) / self.n_traj
        return [DensityMatrix.from_matrix(self.model.space, r) for r in rho]

    def standard_error(self) -> np.ndarray:
        """Entrywise standard error of the averaged density matrix, ``(len(times), d, d)``."""
        outer = np.einsum("nti,ntj->ntij", self.psi, self.psi.conj())
        n = self.n_traj
        return np.abs(outer.std(axis=0, ddof=1 if n > 1 else 0)) / np.sqrt(n)

    def expectation(self, op: Operator) -> tuple[np.ndarray, np.ndarray]:
        """Mean of ``<psi|A|psi>`` per sample time and its standard error (complex mean, real error)."""
        if op.space != self.model.space:
            raise InvariantError("operator and trajectories live on different spaces")
        vals = np.einsum("nti,ij,ntj->nt", self.psi.conj(), op.matrix, self.psi)
        n = self.n_traj
        err = np.sqrt(vals.real.var(axis=0, ddof=1 if n > 1 else 0)
                      + vals.imag.var(axis=0, ddof=1 if n > 1 else 0)) / np.sqrt(n)
        return vals.mean(axis=0), err


def _check_psi(model: LindbladModel, psi0) -> np.ndarray:
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (model.space.dim,):
        raise InvariantError(f"psi0 has shape {psi0.shape}, expected ({model.space.dim},)")
    nrm = np.linalg.norm(psi0)
    if abs(nrm - 1.0) > 1e-10:
        raise InvariantError(f"psi0 must be normalized, got ||psi0|| = {nrm:.12g}")
    return psi0


def _run_batch(indices: range, seed: int, psi0: np.ndarray, u_nojump: np.ndarray,
               chans: list[np.ndarray], dt: float, sample_steps: np.ndarray) -> np.ndarray:
    gens = [np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, i])))
            for i in indices]
    b, d = len(gens), psi0.size
    psi = np.tile(psi0, (b, 1))
    out = np.empty((b, sample_steps.size, d), complex)
    n_steps = int(sample_steps[-1]) if sample_steps.size else 0
    next_sample = 0
    u = np.empty((b, 0, 2))
    rows = np.arange(b)
    for step in range(n_steps + 1):
        while next_sample < sample_steps.size and sample_steps[next_sample] == step:
            out[:, next_sample] = psi
            next_sample += 1
        if step == n_steps:
            break
        k = step % RNG_BLOCK
        if k == 0:
            m = min(RNG_BLOCK, n_steps - step)
            u = np.stack([g.random((m, 2)) for g in gens])
        if chans:
            cpsi = np.stack([psi @ c.T for c in chans], axis=1)        # (b, K, d)
            dp = dt * np.sum(np.abs(cpsi)**2, axis=2)                    # (b, K)
            ptot = dp.sum(axis=1)
        else:
            ptot = np.zeros(b)
        if np.any(ptot > 0.5):
            raise StepSizeError(f"jump probability {ptot.max():.3g} per step is too large; reduce dt")
        jump = u[:, k, 0] < ptot
        new = psi @ u_nojump.T
        if jump.any():
            cum = np.cumsum(dp[jump], axis=1)
            pick = np.minimum((cum < (u[jump, k, 1] * ptot[jump])[:, None]).sum(axis=1),
                              len(chans) - 1)
            new[jump] = cpsi[rows[jump], pick]
        nrm = np.linalg.norm(new, axis=1)
        if not np.all(np.isfinite(nrm)) or nrm.min() < NORM_FLOOR:
            raise StepSizeError(f"trajectory norm underflow ({nrm.min():.3e}) at step {step}; reduce dt")
        psi = new / nrm[:, None]
    return out


def simulate(model: LindbladModel, psi0, cfg: TrajectoryConfig,
             sample_times: Sequence[float], workers: int = 1) -> TrajectoryResult:
    """Average ``n_traj`` quantum-jump trajectories starting from the pure state ``psi0``.

    ``sample_times`` are rounded to the nearest step and must lie in ``[0, t_max]``.
    """
    psi0 = _check_psi(model, psi0)
    rate = model.total_jump_rate()
    if rate > 0 and cfg.dt > DT_RATE_LIMIT / rate * (1 + 1e-12):
        raise InvariantError(
            f"dt = {cfg.dt:g} violates dt <= {DT_RATE_LIMIT}/total jump rate = {DT_RATE_LIMIT / rate:g}")
    times = np.asarray(sample_times, dtype=float)
    if times.ndim != 1 or np.any(times < 0) or np.any(times > cfg.t_max * (1 + 1e-12)):
        raise InvariantError(f"sample times must lie in [0, t_max = {cfg.t_max:g}]")
    if np.any(np.diff(times) < 0):
        raise InvariantError("sample times must be sorted")
    steps = np.rint(times / cfg.dt).astype(np.int64)
    u_nojump = expm(-1j * model.effective_hamiltonian() * cfg.dt)
    chans = [np.sqrt(r) * c.matrix for r, c in model.jumps]
    batches = [range(i, min(i + BATCH, cfg.n_traj)) for i in range(0, cfg.n_traj, BATCH)]
    args = (int(cfg.seed), psi0, u_nojump, chans, cfg.dt, steps)
    if workers > 1 and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda idx: _run_batch(idx, *args), batches))
    else:
        parts = [_run_batch(idx, *args) for idx in batches]
    return TrajectoryResult(steps * cfg.dt, np.concatenate(parts, axis=0), model)
