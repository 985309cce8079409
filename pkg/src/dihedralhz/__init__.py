"""Graded homotopy Mackey functors of the dihedral Eilenberg-MacLane
spectrum of the constant Mackey functor Z, computed three independent
ways: a closed-form ring, a cellular oracle, and square reassembly.
"""

__version__ = "0.1.0"
