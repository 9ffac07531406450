from ._hourglass import (
    GenericityError,
    MonodromyError,
    NoPerfectMatchingError,
    ParseError,
    brute_force_bottleneck,
    diagram_bottleneck,
    integrated_distance,
    lower_star_diagram,
    run_kinetic,
    sampled_distance,
    static_bottleneck,
)

__all__ = [
    "GenericityError",
    "MonodromyError",
    "NoPerfectMatchingError",
    "ParseError",
    "brute_force_bottleneck",
    "diagram_bottleneck",
    "integrated_distance",
    "lower_star_diagram",
    "run_kinetic",
    "sampled_distance",
    "static_bottleneck",
]
