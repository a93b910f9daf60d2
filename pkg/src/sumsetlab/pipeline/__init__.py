"""The intersection algorithm, one proposition round, the iteration and growth tables."""

from .fg import FGTable, fg_table
from .growth import GrowthReport, GrowthRow, family_set, growth_experiment
from .intersection import (
    IntersectionCertificate,
    IntersectionCheck,
    check_trivial_intersection,
    intersection_algorithm,
    verify_certificate,
)
from .iteration import IterationStep, Transcript, iterate_main
from .proposition import (
    GrowthWitness,
    SubsetWitness,
    k_from_h,
    proposition_run,
    verify_growth_witness,
)

__all__ = [
    "FGTable",
    "GrowthReport",
    "GrowthRow",
    "GrowthWitness",
    "IntersectionCertificate",
    "IntersectionCheck",
    "IterationStep",
    "SubsetWitness",
    "Transcript",
    "check_trivial_intersection",
    "family_set",
    "fg_table",
    "growth_experiment",
    "intersection_algorithm",
    "iterate_main",
    "k_from_h",
    "proposition_run",
    "verify_certificate",
    "verify_growth_witness",
]
