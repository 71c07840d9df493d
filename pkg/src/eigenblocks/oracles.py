"""
Brute-force references for the block eigensolver.

The closed-form Jaynes-Cummings doublet checks the M = 2 spectrum, and the
dense product-basis Hamiltonian checks that H_s never couples different
excitation blocks.
"""

import math

import numpy as np

from src.model import SystemSpec

from .blocks import BlockError


def jc_doublet(spec: SystemSpec, n_total: int) -> tuple[float, float]:
    """Closed-form eigenvalues of an M = 2 block with N_tot ≥ 1.

    Returns:
        (lower, upper) absolute energies in MHz.
    """
    if spec.num_levels != 2:
        raise BlockError("the Jaynes-Cummings doublet needs a two-level system")
    if n_total < 1:
        raise BlockError("the doublet needs N_tot >= 1")
    w0, w1 = spec.mls.level_freqs
    g = spec.mls.couplings[0]
    delta = (w1 - w0) - spec.omega_r
    center = n_total * spec.omega_r + w0 + delta / 2
    half_split = 0.5 * math.sqrt(delta**2 + 4 * g**2 * n_total)
    return center - half_split, center + half_split


def jc_dressed_energy(spec: SystemSpec, n: int, level: int) -> float:
    """Closed-form Ē_{n,i} for a two-level system.

    |n, 0⟩ connects to the lower doublet member when Δ > 0 and to the upper
    one when Δ < 0.
    """
    w0, w1 = spec.mls.level_freqs
    delta = (w1 - w0) - spec.omega_r
    sign = 1.0 if delta > 0 else -1.0
    if level == 0:
        if n == 0:
            return w0
        lower, upper = jc_doublet(spec, n)
        return lower if sign > 0 else upper
    lower, upper = jc_doublet(spec, n + 1)
    return upper if sign > 0 else lower


def full_hamiltonian(spec: SystemSpec, photon_cutoff: int) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Dense H_s in the product basis |n, i⟩ with n ≤ photon_cutoff.

    Returns:
        The Hamiltonian and the (photon, level) label of every basis state.
    """
    num_levels = spec.num_levels
    labels = [(n, i) for n in range(photon_cutoff + 1) for i in range(num_levels)]
    index = {label: k for k, label in enumerate(labels)}
    ham = np.zeros((len(labels), len(labels)))
    for (n, i), k in index.items():
        ham[k, k] = n * spec.omega_r + spec.mls.level_freqs[i]
        # a† |i⟩⟨i+1| : |n, i+1⟩ -> √(n+1) |n+1, i⟩
        if i + 1 < num_levels and n + 1 <= photon_cutoff:
            target = index[(n + 1, i)]
            source = index[(n, i + 1)]
            value = spec.mls.couplings[i] * math.sqrt(n + 1)
            ham[target, source] += value
            ham[source, target] += value
    return ham, labels


def block_structure_defect(ham: np.ndarray, labels: list[tuple[int, int]]) -> float:
    """Largest |H_ab| between basis states of different excitation number."""
    totals = np.array([n + i for n, i in labels])
    cross = totals[:, None] != totals[None, :]
    if not cross.any():
        return 0.0
    return float(np.max(np.abs(ham[cross])))
