"""Computational L0-modules over atomic probability spaces: essential
suprema, seminorm topologies, gauges, countable concatenation closure, and a
checked reproduction of a locally L0-convex topology that no family of
L0-seminorms induces."""

from .errors import L0Error
from .l0_core import RandomVar, SeqFamily, ess_inf_seq, ess_sup_finite, ess_sup_seq
from .prob_space import AtomSpace, Event, Partition, make_finite_space, make_geometric_space
from .seminorms import AbsValue, Ball, GaugeOf, SeminormFamily, Weighted
from .sets_gauge import AtomDecomposable, BallSet, CounterexampleU, gauge, member

__version__ = "0.1.0"

__all__ = [
    "AbsValue", "AtomDecomposable", "AtomSpace", "Ball", "BallSet", "CounterexampleU", "Event",
    "GaugeOf", "L0Error", "Partition", "RandomVar", "SeminormFamily", "SeqFamily", "Weighted",
    "ess_inf_seq", "ess_sup_finite", "ess_sup_seq", "gauge", "make_finite_space",
    "make_geometric_space", "member",
]
