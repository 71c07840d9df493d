"""
Bare-basis operators of the MLS-resonator system.

Matrices are written in the excitation-block basis used by the eigenblocks
package: block N_tot is spanned by |N_tot − i, i⟩ for i = 0..dim−1.
"""

import math
from collections.abc import Sequence

import numpy as np

from .specs import ModelError


def block_dim(n_total: float, num_levels: int) -> int:
    """Dimension of the excitation block with N_tot excitations.

    Integer blocks below M−1 are truncated (levels above N_tot cannot be
    reached); real-valued N_tot ≥ M−1 always has the full M states.
    """
    if n_total < 0:
        raise ModelError(f"excitation number must be non-negative, got {n_total}")
    return min(num_levels, math.floor(n_total) + 1)


def lowering_elements(n_from: int, num_levels: int) -> np.ndarray:
    """Photon lowering operator a from block n_from to block n_from − 1.

    Element (j, i) is ⟨n_from−1−j, j| a |n_from−i, i⟩ = √(n_from − i) δ_ij.

    Args:
        n_from: Excitation number of the source block (≥ 1).
        num_levels: Number of MLS levels M.

    Returns:
        Matrix of shape (dim(n_from − 1), dim(n_from)).
    """
    if n_from < 1:
        raise ModelError(f"lowering needs n_from >= 1, got {n_from}")
    rows = block_dim(n_from - 1, num_levels)
    cols = block_dim(n_from, num_levels)
    out = np.zeros((rows, cols))
    for i in range(min(rows, cols)):
        out[i, i] = math.sqrt(n_from - i)
    return out


def sigma_minus_elements(num_levels: int, couplings: Sequence[float]) -> np.ndarray:
    """MLS lowering operator Σ_− = Σ_i (g_i/g_0) |i⟩⟨i+1|.

    Args:
        num_levels: Number of MLS levels M.
        couplings: Ladder couplings g_i, i = 0..M−2.

    Returns:
        M×M matrix with the normalised couplings on the first superdiagonal.

    Raises:
        ModelError: If g_0 = 0 (the normalisation is undefined).
    """
    out = np.zeros((num_levels, num_levels))
    if num_levels < 2:
        return out
    if couplings[0] == 0:
        raise ModelError("Σ_− is normalised by g_0, which is zero")
    for i in range(num_levels - 1):
        out[i, i + 1] = couplings[i] / couplings[0]
    return out


def sigma_z_elements(num_levels: int, charge_dispersions: Sequence[float]) -> np.ndarray:
    """Charge-noise coupling operator Σ_z = Σ_i (ε_i/ε_1) |i⟩⟨i|.

    Args:
        num_levels: Number of MLS levels M.
        charge_dispersions: Charge dispersions ε_i (any common unit), at
            least max(M, 2) entries.

    Returns:
        Diagonal M×M matrix.

    Raises:
        ModelError: If ε_1 = 0 or the table is too short.
    """
    if len(charge_dispersions) < max(num_levels, 2):
        raise ModelError(
            f"need {max(num_levels, 2)} charge dispersions, got {len(charge_dispersions)}"
        )
    eps_1 = charge_dispersions[1]
    if eps_1 == 0:
        raise ModelError("charge dispersion of level 1 must be non-zero")
    return np.diag([charge_dispersions[i] / eps_1 for i in range(num_levels)])


# E_J/E_C of the default ladder: ω_10 = 6000 MHz, E_C ≈ ω_10 − ω_21 = 250 MHz
DEFAULT_EJ_OVER_EC = 78.125


def ej_over_ec_from_ladder(level_freqs: Sequence[float]) -> float:
    """E_J/E_C of the transmon whose lowest transitions match the ladder.

    Takes E_C = ω_10 − ω_21 and inverts ω_10 = E_C(√(8E_J/E_C) − 1).
    Ladders without a positive anharmonicity (M = 2, or ω_21 ≥ ω_10) fall
    back to DEFAULT_EJ_OVER_EC.

    Example:
        >>> ej_over_ec_from_ladder((0.0, 6000.0, 11750.0))
        78.125
    """
    if len(level_freqs) < 3:
        return DEFAULT_EJ_OVER_EC
    omega_10 = level_freqs[1] - level_freqs[0]
    e_c = omega_10 - (level_freqs[2] - level_freqs[1])
    if e_c <= 0 or omega_10 <= 0:
        return DEFAULT_EJ_OVER_EC
    return (omega_10 / e_c + 1) ** 2 / 8


def default_charge_dispersions(num_levels: int, ej_over_ec: float = DEFAULT_EJ_OVER_EC) -> tuple[float, ...]:
    """Transmon charge dispersions |ε_i/ε_1| in the large E_J/E_C limit.

    |ε_m| ∝ 2^(4m)/m! · (E_J/2E_C)^(m/2), so relative to level 1
    ε_m/ε_1 = (16√(E_J/2E_C))^(m−1)/m!. The alternating sign of ε_m is
    dropped. At the default E_J/E_C the base is exactly 100 and
    ε_5/ε_1 ≈ 8.3·10⁵.

    Raises:
        ModelError: If ej_over_ec is not positive.
    """
    if not ej_over_ec > 0:
        raise ModelError(f"E_J/E_C must be positive, got {ej_over_ec}")
    base = 16 * math.sqrt(ej_over_ec / 2)
    return tuple(base ** (m - 1) / math.factorial(m) for m in range(max(num_levels, 2)))


def exponential_charge_dispersions(num_levels: int) -> tuple[float, ...]:
    """Geometric ε_i/ε_1 table: 0.1 for level 0, 10^(6(i−1)/5) above.

    Reaches ε_6/ε_1 = 10⁶. Selected with `[dephasing] table = exponential`.
    """
    return tuple([0.1] + [10 ** (6 * (i - 1) / 5) for i in range(1, max(num_levels, 2))])
