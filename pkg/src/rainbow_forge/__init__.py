"""Rainbow augmenting paths, badges and rainbow matchings."""

from .alternating import (
                    Aap,
                    RainbowAap,
                    augment,
                    find_f_aap,
                    is_aap,
                    is_rainbow_aap,
                    max_matching,
)
from .badge import (
                    Badge,
                    BadgeCertificate,
                    GeneralizedBadge,
                    Origamistrip,
                    badge_paths,
                    extend_badge_rainbow_aap,
                    make_badge,
                    make_origamistrip,
                    sharpness_instance,
                    verify_badge,
)
from .engine import (
                    BudgetExceeded,
                    ContractionFrame,
                    Decision,
                    EngineError,
                    PreconditionError,
                    cooperative_decide,
                    find_rainbow_triangle,
                    rainbow_aap_or_badge,
                    rainbow_aap_oracle,
)
from .graph_core import edge, edge_set, family, is_rainbow_selection
from .solver import (
                    RainbowMatchingWitness,
                    SolveReport,
                    rainbow_matching_oracle,
                    solve_cooperative,
                    solve_main,
                    verify_witness,
)

__all__ = [
                    "Aap",
                    "Badge",
                    "BadgeCertificate",
                    "BudgetExceeded",
                    "ContractionFrame",
                    "Decision",
                    "EngineError",
                    "GeneralizedBadge",
                    "Origamistrip",
                    "PreconditionError",
                    "RainbowAap",
                    "RainbowMatchingWitness",
                    "SolveReport",
                    "augment",
                    "badge_paths",
                    "cooperative_decide",
                    "edge",
                    "edge_set",
                    "extend_badge_rainbow_aap",
                    "family",
                    "find_f_aap",
                    "find_rainbow_triangle",
                    "is_aap",
                    "is_rainbow_aap",
                    "is_rainbow_selection",
                    "make_badge",
                    "make_origamistrip",
                    "max_matching",
                    "rainbow_aap_or_badge",
                    "rainbow_aap_oracle",
                    "rainbow_matching_oracle",
                    "sharpness_instance",
                    "solve_cooperative",
                    "solve_main",
                    "verify_badge",
                    "verify_witness",
]
