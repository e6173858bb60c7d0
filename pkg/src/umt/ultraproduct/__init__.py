"""Reduced products and ultraproducts of finite structures, and the checks built on them."""

from umt.ultraproduct.checks import (
    check_congruence,
    compactness_witness,
    diagonal_embedding,
    los_check,
    pointwise_truth,
    principal_collapse,
)
from umt.ultraproduct.products import (
    IndexedFamily,
    Ultraproduct,
    build_reduced_product,
    build_ultraproduct,
    class_id,
)
from umt.ultraproduct.types import Realization, check_support, realize_from_support, type_order_reversal

__all__ = [
    "IndexedFamily",
    "Realization",
    "Ultraproduct",
    "build_reduced_product",
    "build_ultraproduct",
    "check_congruence",
    "check_support",
    "class_id",
    "compactness_witness",
    "diagonal_embedding",
    "los_check",
    "pointwise_truth",
    "principal_collapse",
    "realize_from_support",
    "type_order_reversal",
]
