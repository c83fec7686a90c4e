"""Gradient-trajectory sensitivity analysis.

A single tanh unit is trained by full-batch gradient descent while
third-order forward-mode jets record, per feature, the first three
derivatives of the MSE loss at every epoch. Second-derivative trends are
then compared against Spearman rank correlation, loss-surface slices can be
exported, and increasing-trend gradient masks applied to images.
"""

from gradsense._core import (  # noqa: F401
    ConstantInputError,
    DataError,
    Dataset,
    DivergenceError,
    FeatureKind,
    FeatureSensitivity,
    FeatureSpec,
    GradientTrace,
    Jet3,
    Matrix,
    MnistSubset,
    ModelParams,
    Rng,
    SensitivityReport,
    SurfaceSlice,
    SynthSpec,
    TrainConfig,
    TrainResult,
    TrendLabel,
    apply_mask,
    average_ranks,
    bias_gradient,
    binary_task,
    build_mask,
    classify_trend,
    compare,
    default_synth_spec,
    derive_seed,
    glorot_init,
    jet_add,
    jet_const,
    jet_mul,
    jet_scale,
    jet_seed,
    jet_square,
    jet_tanh,
    load_csv,
    load_mnist_idx,
    loss_jet,
    loss_value,
    spearman,
    standardize,
    surface_slice,
    surface_slice_along,
    synth_generate,
    train,
    write_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
