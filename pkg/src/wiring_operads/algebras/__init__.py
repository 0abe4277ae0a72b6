from wiring_operads.algebras.actions import GeneratorAction, eval_structure_map
from wiring_operads.algebras.vectors import Vec

__all__ = ["GeneratorAction", "eval_structure_map", "Vec"]
