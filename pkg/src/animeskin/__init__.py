"""Skin-color classifiers for anime and cartoon images."""

from .classifiers import (
    ClassifierId,
    classify_image,
    classify_kovac,
    classify_method1,
    classify_method2,
    classify_method3,
    classify_osman,
    classify_saleh,
    classify_swift,
    classify_takayama_pixel,
    list_classifiers,
)
from .colorspace import rgb_to_hsv
from .core import (
    BinaryMask,
    EmptyDatasetError,
    HsvPixel,
    InvalidDimensionError,
    InvalidPairError,
    RasterImage,
    Rgb8Pixel,
    TooSmallError,
    mask_count,
    mask_new,
)
from .evaluation import DatasetReport, EvalCounts, aggregate, compare_classifiers, evaluate_image
from .ground_truth import AnnotatedPair, extract_ground_truth, is_annotation_marker, validate_pair
from .segmentation import CannyParams, canny_edges, flood_fill_regions, takayama_segment, to_grayscale

__version__ = "0.1.0"
