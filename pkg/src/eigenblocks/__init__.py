"""Eigenblocks module - exact diagonalization of the excitation blocks."""

from .blocks import (
    BlockError,
    DressedBlock,
    EigensolverError,
    ExcitationBlock,
    Labelling,
    build_block,
    diagonalize,
    dressed_block,
    dressed_energy,
    effective_frequency,
    effective_frequency_curve,
    overlap_labels,
)
from .oracles import block_structure_defect, full_hamiltonian, jc_doublet, jc_dressed_energy

__all__ = [
    "BlockError",
    "DressedBlock",
    "EigensolverError",
    "ExcitationBlock",
    "Labelling",
    "block_structure_defect",
    "build_block",
    "diagonalize",
    "dressed_block",
    "dressed_energy",
    "effective_frequency",
    "effective_frequency_curve",
    "full_hamiltonian",
    "jc_doublet",
    "jc_dressed_energy",
    "overlap_labels",
]
