"""Desk-scale laboratory for level-set geometry of the lattice Gaussian free field.

Subpackages cover lattice potential theory (Green functions, equilibrium
measures, capacities), exact field sampling, level-set connectivity,
rare-event importance sampling with Cameron-Martin tilts, coarse-graining
inspection, and porous-interface Monte Carlo.
"""

from gfflab.geometry import CompactSet, LatticeSet, Window, blow_up, boundary_shell, local_density, neighborhood
from gfflab.greenwalk import GreenTable, WalkBatch, green_table, harmonic_extension, hitting_probability, simulate_walks
from gfflab.potential import (
    DirichletVector,
    EquilibriumSolution,
    brownian_capacity_mc,
    dirichlet_energy,
    equilibrium,
    variational_capacity,
)
from gfflab.gff import FieldSample, Decomposition, decompose, load_field, sample_field, save_field
from gfflab.percolation import crossing_scan, estimate_critical_window, is_disconnected, level_set_mask
from gfflab.tilt import (
    TiltProfile,
    build_profile,
    electrostatic_energy,
    entropy_lower_bound,
    importance_estimate,
    rate_function,
    repulsion_experiment,
    tilt_and_weight,
    tilted_disconnection_experiment,
)
from gfflab.coarsegrain import (
    BoxHierarchy,
    classify_boxes,
    connectivity_lemma_check,
    count_bad_columns,
    extract_interface,
    hitting_experiment,
    lemma42_statistics,
)
from gfflab.interfaces import PorousSpec, density_class_check, porous_membership, solidification_experiment

__version__ = "0.1.0"
