"""
Excitation-number blocks of the generalized Jaynes-Cummings Hamiltonian.

H_s conserves N_tot = a†a + (MLS level), so it splits into symmetric
tridiagonal blocks spanned by |N_tot − i, i⟩. Each block is diagonalized
with LAPACK's implicit QL/QR driver and its eigenpairs are labelled by the
bare state they overlap most.

Energies are handled relative to N_tot·ω_r internally: at N_tot ~ 10⁶ the
absolute block energies are ~10¹⁰ MHz while the observables are differences
of a few MHz.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal
from scipy.optimize import linear_sum_assignment

from src.model import SystemSpec, block_dim

logger = logging.getLogger(__name__)

# assignment weight that only separates labellings of equal total overlap
_CONTINUITY_BONUS = 1e-9


class BlockError(Exception):
    """Raised when an excitation block or level index is invalid."""

    pass


class EigensolverError(Exception):
    """Raised when the tridiagonal eigensolver fails to converge."""

    pass


class Labelling(str, Enum):
    """Rule that assigns bare labels to the eigenpairs of a block."""

    OVERLAP = "overlap"
    ADIABATIC = "adiabatic"


@dataclass(frozen=True)
class ExcitationBlock:
    """One excitation-number block of H_s.

    Attributes:
        n_total: Excitation number N_tot (real for the continued blocks).
        omega_r: Resonator frequency the block was built with (MHz).
        detuned_diagonal: ω_i − i·ω_r for the included levels (MHz).
        offdiag: Couplings g_i·√(N_tot − i) between neighbours (MHz).
    """

    n_total: float
    omega_r: float
    detuned_diagonal: np.ndarray
    offdiag: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.detuned_diagonal)

    @property
    def offset(self) -> float:
        """Common energy N_tot·ω_r shared by every basis state."""
        return self.n_total * self.omega_r

    @property
    def diagonal(self) -> np.ndarray:
        """Absolute diagonal entries (N_tot − i)·ω_r + ω_i."""
        return self.offset + self.detuned_diagonal


@dataclass(frozen=True)
class DressedBlock:
    """Diagonalized block with eigenpairs indexed by bare label.

    Attributes:
        block: The block that was diagonalized.
        relative_energies: Ē − N_tot·ω_r for each bare label i (MHz),
            straight from the eigensolver.
        vectors: Orthonormal eigenvectors; column i is the dressed state
            labelled by bare index i.
        label_of: For bare index i, the position of its eigenpair in the
            ascending eigenvalue order.
    """

    block: ExcitationBlock
    relative_energies: np.ndarray
    vectors: np.ndarray
    label_of: np.ndarray

    @property
    def energies(self) -> np.ndarray:
        """Absolute energies Ē for each bare label (MHz)."""
        return self.relative_energies + self.block.offset


def build_block(spec: SystemSpec, n_total: float) -> ExcitationBlock:
    """Build the tridiagonal block with N_tot excitations.

    Integer N_tot below M−1 gives a truncated block of size N_tot + 1.
    Real N_tot ≥ M−1 gives the full M×M block with the couplings
    g_i·√(N_tot − i) continued to real arguments.

    Args:
        spec: The coupled system.
        n_total: Excitation number N_tot ≥ 0.

    Returns:
        The excitation block.

    Raises:
        BlockError: If N_tot < 0, or N_tot is non-integer below M−1.
    """
    num_levels = spec.num_levels
    n_total = float(n_total)
    if n_total < 0 or not math.isfinite(n_total):
        raise BlockError(f"excitation number must be finite and >= 0, got {n_total}")
    if not n_total.is_integer() and n_total < num_levels - 1:
        raise BlockError(
            f"non-integer excitation number {n_total} is only defined for N_tot >= {num_levels - 1}"
        )

    dim = num_levels if n_total >= num_levels - 1 else block_dim(n_total, num_levels)
    levels = spec.mls.level_freqs
    detuned = np.array([levels[i] - i * spec.omega_r for i in range(dim)])
    offdiag = np.array(
        [spec.mls.couplings[i] * math.sqrt(n_total - i) for i in range(dim - 1)]
    )
    return ExcitationBlock(
        n_total=n_total,
        omega_r=spec.omega_r,
        detuned_diagonal=detuned,
        offdiag=offdiag,
    )


def _chains(offdiag: np.ndarray) -> list[tuple[int, int]]:
    """Split a tridiagonal matrix into independent chains at zero couplings."""
    bounds = []
    start = 0
    for k, e in enumerate(offdiag):
        if e == 0.0:
            bounds.append((start, k + 1))
            start = k + 1
    bounds.append((start, len(offdiag) + 1))
    return bounds


def _eigenpairs(block: ExcitationBlock) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Eigenpairs chain by chain, ascending within each chain.

    Returns:
        Eigenvalues relative to N_tot·ω_r, eigenvectors as columns, and for
        each bare index the column it reaches by adiabatic continuation.
    """
    dim = block.dim
    values = np.empty(dim)
    vectors = np.zeros((dim, dim))
    adiabatic = np.empty(dim, dtype=int)

    for lo, hi in _chains(block.offdiag):
        diag = block.detuned_diagonal[lo:hi]
        if hi - lo == 1:
            w, v = diag.copy(), np.ones((1, 1))
        else:
            try:
                w, v = eigh_tridiagonal(diag, block.offdiag[lo : hi - 1], lapack_driver="stev")
            except LinAlgError as e:
                raise EigensolverError(
                    f"eigensolver failed for block N_tot={block.n_total}: {e}"
                ) from e
        values[lo:hi] = w
        vectors[lo:hi, lo:hi] = v
        # eigenvalues of a connected chain never cross: the k-th belongs to
        # the bare state whose diagonal entry has rank k
        rank = np.empty(hi - lo, dtype=int)
        rank[np.argsort(diag, kind="stable")] = np.arange(hi - lo)
        adiabatic[lo:hi] = lo + rank
    return values, vectors, adiabatic


def diagonalize(block: ExcitationBlock, labelling: Labelling = Labelling.OVERLAP) -> DressedBlock:
    """Diagonalize a block and label its eigenpairs.

    With the default OVERLAP rule each eigenvector is labelled by the bare
    state it overlaps most, solved as an assignment so the labels form a
    bijection. Assignments of equal total overlap are decided in favour of
    the adiabatic continuation of the bare labels. The ADIABATIC rule uses
    that continuation alone: it coincides with OVERLAP in the dispersive
    regime and departs from it once the drive mixes the ladder.

    Args:
        block: Block from build_block.
        labelling: Labelling rule.

    Returns:
        DressedBlock with energies and vectors ordered by bare label.

    Raises:
        EigensolverError: If LAPACK does not converge.
    """
    dim = block.dim
    values, eigvecs, adiabatic = _eigenpairs(block)
    if labelling == Labelling.ADIABATIC:
        columns = adiabatic
    else:
        cost = -(eigvecs**2)
        cost[np.arange(dim), adiabatic] -= _CONTINUITY_BONUS
        rows, cols = linear_sum_assignment(cost)
        columns = np.empty(dim, dtype=int)
        columns[rows] = cols

    vectors = eigvecs[:, columns]
    # fix the phase: own bare component non-negative
    vectors = vectors * np.where(np.diag(vectors) < 0, -1.0, 1.0)
    relative = values[columns]

    order = np.argsort(relative, kind="stable")
    label_of = np.empty(dim, dtype=int)
    label_of[order] = np.arange(dim)

    logger.debug(f"Diagonalized block N_tot={block.n_total} (dim={dim}, {labelling.value} labels)")
    return DressedBlock(
        block=block,
        relative_energies=relative,
        vectors=vectors,
        label_of=label_of,
    )


def overlap_labels(dressed: DressedBlock) -> np.ndarray:
    """Maximum-overlap assignment of an already labelled block.

    Returns:
        For each bare index i, the column of dressed.vectors assigned to it
        by maximising the total overlap |⟨bare_i|v⟩|². Equals arange(dim)
        for blocks labelled with Labelling.OVERLAP.
    """
    weights = dressed.vectors**2
    rows, cols = linear_sum_assignment(-weights)
    out = np.empty(dressed.block.dim, dtype=int)
    out[rows] = cols
    return out


def _check_level(spec: SystemSpec, level: int) -> None:
    if not 0 <= level < spec.num_levels:
        raise BlockError(f"level {level} outside 0..{spec.num_levels - 1}")


@lru_cache(maxsize=8192)
def _relative_spectrum(spec: SystemSpec, n_total: float) -> tuple[float, ...]:
    """Label-ordered energies of block N_tot with N_tot·ω_r removed."""
    return tuple(diagonalize(build_block(spec, n_total)).relative_energies.tolist())


def _is_direct(spec: SystemSpec, n: float, level: int) -> bool:
    return float(n).is_integer() or n + level >= spec.num_levels - 1


def _relative_energy(spec: SystemSpec, n: float, level: int) -> float:
    """Ē_{n,i} − (n + i)·ω_r, interpolated linearly in n where needed."""
    if _is_direct(spec, n, level):
        return _relative_spectrum(spec, float(n + level))[level]
    lo = math.floor(n)
    t = n - lo
    e_lo = _relative_spectrum(spec, float(lo + level))[level]
    e_hi = _relative_spectrum(spec, float(lo + 1 + level))[level]
    return (1 - t) * e_lo + t * e_hi


def dressed_block(spec: SystemSpec, n_total: float) -> DressedBlock:
    """Build and diagonalize block N_tot in one call."""
    return diagonalize(build_block(spec, n_total))


def dressed_energy(spec: SystemSpec, n: float, level: int) -> float:
    """Dressed energy Ē_{n,i} of the state connected to |n, i⟩.

    Args:
        spec: The coupled system.
        n: Photon number (real; values below the continuation threshold are
            interpolated between integers).
        level: MLS level i.

    Returns:
        Absolute dressed energy (MHz).

    Raises:
        BlockError: If n < 0 or the level is out of range.
    """
    _check_level(spec, level)
    if n < 0:
        raise BlockError(f"photon number must be >= 0, got {n}")
    return (n + level) * spec.omega_r + _relative_energy(spec, n, level)


def effective_frequency(spec: SystemSpec, level: int, n: float) -> float:
    """Effective resonator frequency ω_ri(n) = Ē_{n+1,i} − Ē_{n,i}.

    For non-integer n whose block lies below the continuation threshold the
    result is interpolated linearly between the neighbouring integers.

    Args:
        spec: The coupled system.
        level: MLS level i.
        n: Photon number n ≥ 0.

    Returns:
        ω_ri(n) in MHz.
    """
    _check_level(spec, level)
    if n < 0:
        raise BlockError(f"photon number must be >= 0, got {n}")
    if _is_direct(spec, n, level):
        return spec.omega_r + (
            _relative_spectrum(spec, float(n + 1 + level))[level]
            - _relative_spectrum(spec, float(n + level))[level]
        )
    lo = math.floor(n)
    t = n - lo
    return (1 - t) * effective_frequency(spec, level, lo) + t * effective_frequency(
        spec, level, lo + 1
    )


def effective_frequency_curve(spec: SystemSpec, level: int, photons: np.ndarray) -> np.ndarray:
    """ω_ri(n) over a grid of photon numbers."""
    return np.array([effective_frequency(spec, level, float(n)) for n in photons])
