"""Dark-channel dehazing with a trained linear correction model.

Images are numpy float32 arrays of shape (H, W, 3) with values in [0, 1].
"""

from hazeclear._core import (
    DcpParams,
    HazeclearError,
    RegressionModel,
    apply_haze,
    dark_channel,
    dehaze_dcp,
    dehaze_mlr,
    load_image,
    load_model,
    psnr,
    save_image,
    save_model,
    ssim,
    transmission_from_depth,
)

__all__ = [
    "DcpParams",
    "HazeclearError",
    "RegressionModel",
    "apply_haze",
    "dark_channel",
    "dehaze_dcp",
    "dehaze_mlr",
    "load_image",
    "load_model",
    "psnr",
    "save_image",
    "save_model",
    "ssim",
    "transmission_from_depth",
]
