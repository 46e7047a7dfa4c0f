from selection.dft import DftResult, candidate_thresholds, dft_loss, elbow_index, rank_and_select
from selection.standardize import Standardizer

__all__ = [
    "DftResult", "candidate_thresholds", "dft_loss", "elbow_index", "rank_and_select",
    "Standardizer",
]
