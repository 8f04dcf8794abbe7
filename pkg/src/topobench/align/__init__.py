from .cka import hsic_naive, linear_cka, permutation_ablation
from .features import FeatureTensor, load_ftn, save_ftn
from .probe import LinearProbe, ProbeConfig, train_linear_probe
from .vectorize import (
    QuantizationVectorizer,
    TopKVectorizer,
    atol_like_vectorize,
    fit_quantization_centers,
    topk_vectorize,
)

__all__ = [
    "linear_cka",
    "permutation_ablation",
    "hsic_naive",
    "FeatureTensor",
    "save_ftn",
    "load_ftn",
    "topk_vectorize",
    "fit_quantization_centers",
    "atol_like_vectorize",
    "TopKVectorizer",
    "QuantizationVectorizer",
    "LinearProbe",
    "ProbeConfig",
    "train_linear_probe",
]
