"""Resonances of three-dimensional point-interaction Hamiltonians.

The characteristic matrix of a configuration of interaction centers has a
determinant whose zeros in the complex momentum plane are the resonances.
This package computes them numerically (contour counting plus Newton
refinement), derives their asymptotic structure symbolically (exponential
polynomial canonical form, distribution diagram, chain parameters), and runs
seeded Monte Carlo experiments over random configurations.
"""

from .errors import ComputationError, UsageError
from .geometry import (Configuration, SizeResult, brute_force_V,
                       config_from_json, config_to_json, diameter,
                       distance_matrix, new_configuration, size_V)
from .chardet import (det_gamma, det_gamma_derivative, det_gamma_log,
                      free_green, gamma_matrix, modified_determinant,
                      resolvent_kernel, resonance_width)
from .exppoly import (CanonicalExpPoly, DistributionDiagram, ExpMonomial,
                      KMultiset, canonical_form, canonical_from_json,
                      canonical_to_json, chain_prediction,
                      distribution_diagram, eval_canonical, expand_determinant,
                      is_weyl, k_multiset, symbolic_density)
from .rootfind import (ChainAssignment, CountingReport, Disc, KEstimate,
                       Rect, ResonanceSet, Root, build_counting_report,
                       chain_assignment, count_zeros, counting_function,
                       counting_report_to_json, extract_k_numeric,
                       find_resonances, log_counting, resonance_set_from_json,
                       resonance_set_to_csv, resonance_set_to_json)
from .sampler import (SampleSet, SamplerConfig, sample_mixed_binomial,
                      sample_uniform_ball, sampleset_to_json, to_configuration)
from .experiments import (ExperimentReport, TrialSummary, cdf_table_to_csv,
                          kmin_limit_cdf, ks_statistic, phi, report_to_csv,
                          report_to_json, run_kmax_bound_check,
                          run_kmin_experiment, run_pair_moments,
                          run_vgrowth_experiment, run_weyl_experiment)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
