from .ideals import (
    Ideal,
    QuotientRing,
    SubmoduleGens,
    clear_cache,
    ideal_ops,
    module_ops,
    normal_form,
    reduced_gb,
    syzygies,
)

__all__ = [
    "Ideal",
    "QuotientRing",
    "SubmoduleGens",
    "clear_cache",
    "ideal_ops",
    "module_ops",
    "normal_form",
    "reduced_gb",
    "syzygies",
]
