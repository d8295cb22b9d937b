"""Computational tools for splittings of groups: free-group words, Stallings
folding, Britton and amalgam normal forms, Magnus hierarchies for one-relator
groups, and finite-scale end structure of Cayley graphs."""
from .words import Generator, Letter, Word, parse_word, format_word
from .presentations import Presentation, parse_presentation, format_presentation, abelian_invariants
from .oracles import Verdict, OracleUnknown
from .splittings import AmalgamData, HNNData, britton_reduce, amalgam_normal_form, word_problem
from .magnus import hierarchy, one_relator_wp, OneRelatorSolver, check_step
from .ends import cayley_ball, complement_components, build_cover_truncation, split_complex, figure1_probe

__version__ = "0.1.0"

__all__ = [
    "Generator",
    "Letter",
    "Word",
    "parse_word",
    "format_word",
    "Presentation",
    "parse_presentation",
    "format_presentation",
    "abelian_invariants",
    "Verdict",
    "OracleUnknown",
    "AmalgamData",
    "HNNData",
    "britton_reduce",
    "amalgam_normal_form",
    "word_problem",
    "hierarchy",
    "one_relator_wp",
    "OneRelatorSolver",
    "check_step",
    "cayley_ball",
    "complement_components",
    "build_cover_truncation",
    "split_complex",
    "figure1_probe",
]
