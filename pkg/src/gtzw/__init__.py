"""Coherent systems on the Gelfand-Tsetlin graph, zw-measures and Hua-Pickrell matrices."""

__version__ = "0.1.0"

from .characters import OmegaPoint, SpectrumList, chi_omega, det_twist, f_omega, normalize_betas
from .gt_graph import MeasureTable, Path, cotransition, cotransition_iterated, sample_path_down, verify_coherency
from .signatures import EMPTY, Signature, enumerate_down, frobenius_split, interlaces, weyl_dim
from .spectral import EmpiricalMeasure, embed, pushforward, sample_signatures
from .zw_measure import ZwParams, build_table, classify, is_admissible, log_p_prime, log_s_n

__all__ = [
    "__version__",
    "EMPTY", "Signature", "enumerate_down", "frobenius_split", "interlaces", "weyl_dim",
    "MeasureTable", "Path", "cotransition", "cotransition_iterated", "sample_path_down", "verify_coherency",
    "ZwParams", "build_table", "classify", "is_admissible", "log_p_prime", "log_s_n",
    "OmegaPoint", "SpectrumList", "chi_omega", "det_twist", "f_omega", "normalize_betas",
    "EmpiricalMeasure", "embed", "pushforward", "sample_signatures",
]
