"""Twin-width bounds for graphs embedded on surfaces.

The package turns an embedded graph into a partition into vertical BFS paths
with a shallow tree-decomposition of the quotient, and from that into an
explicit contraction sequence whose red degrees can be replayed and audited.
"""
from .decomposition import ProductStructure, check_product_structure, product_structure
from .embedding import CombinatorialMap, euler_genus, trace_faces
from .errors import TwinsurfError
from .oracle import exact_twinwidth
from .scheduler import audit, schedule
from .trigraph import ContractionSequence, Trigraph, contract, replay

__all__ = [
    "CombinatorialMap", "ContractionSequence", "ProductStructure", "Trigraph",
    "TwinsurfError", "audit", "check_product_structure", "contract", "euler_genus",
    "exact_twinwidth", "product_structure", "replay", "schedule", "trace_faces",
]
