"""Collective emission dynamics of N two-level atoms (N <= 8).

Density matrices are plain complex arrays of shape (2**N, 2**N) in the
tensor-product basis with atom 1 as the slowest index and per-atom order
(|g>, |e>). Couplings come in as the complex matrix produced by
:func:`coopdim.coupling.coupling_matrix`, i.e. Gamma_ij = -omega_ij +
i gamma_ij / 2 with Gamma_ii = -omega0 + i gamma_ii / 2.

The generator is the Schrodinger-picture dual of the Heisenberg equation,

    d rho/dt = -i [H, rho]
               + sum_ij gamma_ij / 2 (2 s_j rho s_i^+ - s_i^+ s_j rho - rho s_i^+ s_j),

with H = sum_ij omega_ij s_i^+ s_j.
"""
from dataclasses import dataclass
from functools import reduce
import math

import numpy as np

MAX_ATOMS = 8
TRACE_TOL = 1e-9
NEGATIVE_POPULATION_TOL = 1e-8
STEP_FACTOR = 0.01

_SIGMA = np.array([[0.0, 1.0], [0.0, 0.0]])


class NumericalContractError(ArithmeticError):
    """Integration left its accuracy contract (step size, trace drift)."""


class NonPhysicalState(NumericalContractError):
    pass


@dataclass(frozen=True)
class CollectiveModes:
    """Single-excitation modes of H_eff = omega - i gamma / 2.

    ``shifts`` are relative to omega0, ``rates`` are -2 Im of the
    eigenvalues, ``vectors`` hold the eigenvectors as columns. Sorted by
    decreasing rate.
    """

    shifts: np.ndarray
    rates: np.ndarray
    vectors: np.ndarray
    omega0: float


@dataclass(frozen=True)
class EmissionTrace:
    times: np.ndarray
    intensity: np.ndarray
    populations: np.ndarray
    state_populations: np.ndarray
    final_state: np.ndarray
    error_estimate: float
    trace_drift: float


def lowering_operators(n):
    """[sigma_1, ..., sigma_n] as dense 2**n matrices."""
    if not (1 <= n <= MAX_ATOMS):
        raise ValueError(f"number of atoms must be between 1 and {MAX_ATOMS}")
    eye = np.eye(2)
    ops = []
    for k in range(n):
        factors = [eye] * n
        factors[k] = _SIGMA
        ops.append(reduce(np.kron, factors))
    return ops


def _split_couplings(couplings):
    g = np.asarray(couplings, dtype=complex)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError("couplings must be a square matrix")
    return -g.real, 2.0 * g.imag


def _n_atoms(rho):
    dim = rho.shape[0]
    n = int(round(math.log2(dim)))
    if rho.shape != (dim, dim) or 2**n != dim:
        raise ValueError("density matrix must be square with dimension 2**N")
    return n


class LindbladGenerator:
    """Precomputed right-hand side for a fixed coupling matrix.

    The dissipator is diagonalised once, gamma = V diag(lam) V^T, so each
    call costs O(N) dense products instead of O(N^2).
    """

    def __init__(self, couplings, rotating_frame=False):
        omega, gamma = _split_couplings(couplings)
        if not (np.allclose(omega, omega.T, atol=0, rtol=1e-12)
                and np.allclose(gamma, gamma.T, atol=0, rtol=1e-12)):
            raise ValueError("omega and gamma must be symmetric")
        n = omega.shape[0]
        if rotating_frame:
            omega = omega - np.diag(np.diag(omega))
        self.n = n
        self.omega = omega
        self.gamma = gamma
        ops = lowering_operators(n)
        self.sigma = ops
        self.number = [s.T @ s for s in ops]
        self.hamiltonian = sum(omega[i, j] * ops[i].T @ ops[j]
                               for i in range(n) for j in range(n))
        self.decay = sum(gamma[i, j] * ops[i].T @ ops[j]
                         for i in range(n) for j in range(n))
        lam, vec = np.linalg.eigh(gamma)
        self.jumps = [(lam[k], sum(vec[j, k] * ops[j] for j in range(n)))
                      for k in range(n) if lam[k] != 0.0]
        self._heff = self.hamiltonian - 0.5j * self.decay

    def __call__(self, rho):
        out = -1j * (self._heff @ rho - rho @ self._heff.conj().T)
        for lam, op in self.jumps:
            out += lam * (op @ rho @ op.T)
        return out

    def intensity(self, rho):
        """sum_ij gamma_ij <s_i^+ s_j>."""
        return float(np.trace(self.decay @ rho).real)

    def atom_populations(self, rho):
        return np.array([np.trace(p @ rho).real for p in self.number])


def lindblad_rhs(rho, couplings):
    """d rho / dt for the collective master equation."""
    rho = np.asarray(rho, dtype=complex)
    n = _n_atoms(rho)
    if np.shape(couplings) != (n, n):
        raise ValueError(f"couplings shape {np.shape(couplings)} does not match {n} atoms")
    return LindbladGenerator(couplings)(rho)


def collective_modes(couplings):
    """Eigenmodes of the single-excitation effective Hamiltonian."""
    g = np.asarray(couplings, dtype=complex)
    if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] < 1:
        raise ValueError("couplings must be a non-empty square matrix")
    omega0 = float(np.mean(-g.real.diagonal()))
    # H_eff = omega - i gamma/2 is exactly -Gamma
    lam, vec = np.linalg.eig(-g)
    rates = -2.0 * lam.imag
    shifts = lam.real - omega0
    order = np.lexsort((shifts, -rates))
    vec = vec[:, order]
    # fix the arbitrary phase: largest component real and positive
    lead = np.argmax(np.abs(vec) > (1.0 - 1e-9) * np.abs(vec).max(axis=0), axis=0)
    phase = vec[lead, np.arange(vec.shape[1])]
    vec = vec * (np.abs(phase) / phase)
    return CollectiveModes(shifts=shifts[order], rates=rates[order],
                           vectors=vec, omega0=omega0)


def single_excitation_amplitudes(modes, amplitudes, times):
    """c(t) = V exp(-i (lambda - omega0) t) V^-1 c(0), shape (len(times), N)."""
    c0 = np.asarray(amplitudes, dtype=complex)
    vec = modes.vectors
    lam = modes.shifts - 0.5j * modes.rates
    coeff = np.linalg.solve(vec, c0)
    phases = np.exp(-1j * np.outer(np.asarray(times, dtype=float), lam))
    return (phases * coeff) @ vec.T


def _pure(psi):
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def _basis_index(bits):
    idx = 0
    for b in bits:
        idx = 2 * idx + b
    return idx


def prepare_state(kind, n=None):
    """Pure initial state as a density matrix.

    ``kind`` is one of ``"symmetric_pair"``, ``"antisymmetric_pair"`` (N = 2),
    ``"all_excited"``, ``"ground"``, or a product string such as
    ``"eg"`` / ``[1, 0]`` listing each atom's state (``e``/1 excited).
    """
    if isinstance(kind, str) and kind in ("symmetric_pair", "antisymmetric_pair"):
        if n not in (None, 2):
            raise ValueError(f"{kind} is a two-atom state, got N={n}")
        sign = 1.0 if kind == "symmetric_pair" else -1.0
        psi = np.zeros(4)
        psi[_basis_index((1, 0))] = 1.0
        psi[_basis_index((0, 1))] = sign
        return _pure(psi)
    if isinstance(kind, str) and kind in ("all_excited", "ground"):
        if n is None:
            raise ValueError(f"{kind} needs the number of atoms")
        bits = [1 if kind == "all_excited" else 0] * n
    else:
        bits = [_parse_bit(b) for b in kind]
        if n is not None and len(bits) != n:
            raise ValueError(f"product state lists {len(bits)} atoms, expected {n}")
    if not (1 <= len(bits) <= MAX_ATOMS):
        raise ValueError(f"number of atoms must be between 1 and {MAX_ATOMS}")
    psi = np.zeros(2 ** len(bits))
    psi[_basis_index(bits)] = 1.0
    return _pure(psi)


def _parse_bit(b):
    if b in (1, "1", "e", "E"):
        return 1
    if b in (0, "0", "g", "G"):
        return 0
    raise ValueError(f"unknown atomic state {b!r}")


def single_excitation_state(amplitudes):
    """sum_k c_k s_k^+ |g...g>, normalised."""
    c = np.asarray(amplitudes, dtype=complex)
    n = len(c)
    psi = np.zeros(2**n, dtype=complex)
    for k in range(n):
        bits = [0] * n
        bits[k] = 1
        psi[_basis_index(bits)] = c[k]
    return _pure(psi)


def max_step(couplings):
    """Largest step allowed: STEP_FACTOR / max(mode rates, |mode shifts|)."""
    modes = collective_modes(couplings)
    scale = max(np.max(np.abs(modes.rates)), np.max(np.abs(modes.shifts)))
    return math.inf if scale == 0.0 else STEP_FACTOR / scale


def _rk4(f, y, h):
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def evolve(rho0, couplings, t_final, dt, *, error_control=True):
    """Integrate from ``rho0`` to ``t_final`` with fixed-step RK4.

    The common frequency omega0 is removed (it commutes with the generator
    and drops out of every recorded quantity). The step actually used is
    t_final / ceil(t_final / dt). With ``error_control`` each step is also
    taken as two half steps; the half-step result is kept and the largest
    difference is reported as ``error_estimate``.
    """
    rho = np.array(rho0, dtype=complex)
    n = _n_atoms(rho)
    if np.shape(couplings) != (n, n):
        raise ValueError(f"couplings shape {np.shape(couplings)} does not match {n} atoms")
    if t_final < 0:
        raise ValueError("t_final must be non-negative")
    if dt <= 0:
        raise ValueError("dt must be positive")
    limit = max_step(couplings)
    if dt > limit * (1.0 + 1e-12):
        raise NumericalContractError(f"dt={dt:g} exceeds the step limit {limit:g}")
    gen = LindbladGenerator(couplings, rotating_frame=True)
    steps = int(math.ceil(t_final / dt - 1e-9)) if t_final > 0 else 0
    h = t_final / steps if steps else 0.0
    trace0 = np.trace(rho).real
    times = np.linspace(0.0, t_final, steps + 1)
    intensity = np.empty(steps + 1)
    pops = np.empty((steps + 1, n))
    state_pops = np.empty((steps + 1, 2**n))
    err = 0.0
    drift = 0.0

    def record(k, rho):
        intensity[k] = gen.intensity(rho)
        pops[k] = gen.atom_populations(rho)
        state_pops[k] = rho.diagonal().real

    record(0, rho)
    for k in range(1, steps + 1):
        if error_control:
            full = _rk4(gen, rho, h)
            half = _rk4(gen, _rk4(gen, rho, 0.5 * h), 0.5 * h)
            err = max(err, float(np.max(np.abs(half - full))))
            rho = half
        else:
            rho = _rk4(gen, rho, h)
        rho = 0.5 * (rho + rho.conj().T)
        drift = max(drift, abs(np.trace(rho).real - trace0))
        if drift > TRACE_TOL:
            raise NumericalContractError(f"trace drifted by {drift:.3e}")
        if rho.diagonal().real.min() < -NEGATIVE_POPULATION_TOL:
            raise NonPhysicalState(f"negative population at t={times[k]:g}")
        record(k, rho)
    return EmissionTrace(times=times, intensity=intensity, populations=pops,
                         state_populations=state_pops, final_state=rho,
                         error_estimate=err, trace_drift=drift)
