from descriptor.octant import OCTANT_CODES, DESCRIPTOR_DIM, octant_descriptor, octant_descriptors
from descriptor.saab import SaabTransform, SaabAccumulator, fit_saab, apply_saab, inverse_saab, dc_kernel

__all__ = [
    "OCTANT_CODES", "DESCRIPTOR_DIM", "octant_descriptor", "octant_descriptors",
    "SaabTransform", "SaabAccumulator", "fit_saab", "apply_saab", "inverse_saab", "dc_kernel",
]
