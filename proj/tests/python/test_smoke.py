import numpy as np
import pytest

import hazeclear as hc


def make_scene(rng, h=48, w=64):
    img = rng.uniform(0.3, 0.8, size=(h, w, 3)).astype(np.float32)
    img[10:20, 10:30] = rng.uniform(0.2, 0.9, size=3).astype(np.float32)
    return img


def test_metrics_sanity():
    rng = np.random.default_rng(0)
    a = make_scene(rng)
    assert hc.ssim(a, a) == 1.0
    b = np.clip(a + 0.1, 0.0, 1.0).astype(np.float32)
    assert hc.psnr(a, a) == np.inf
    assert hc.psnr(a, b) < np.inf


def test_haze_roundtrip_and_dcp_gain():
    rng = np.random.default_rng(1)
    clean = make_scene(rng)
    depth = np.linspace(1.2, 0.4, clean.shape[0], dtype=np.float32)
    depth = np.repeat(depth[:, None], clean.shape[1], axis=1)
    t = hc.transmission_from_depth(depth, 1.5)
    hazy = hc.apply_haze(clean, t, (0.9, 0.9, 0.9))
    # forward model is a convex combination
    assert hazy.min() >= min(clean.min(), 0.9) - 1e-6
    recovered, t_est, airlight = hc.dehaze_dcp(hazy)
    assert recovered.shape == clean.shape
    assert t_est.shape == t.shape
    assert len(airlight) == 3
    assert hc.psnr(recovered, clean) > hc.psnr(hazy, clean)


def test_identity_model_matches_dcp():
    rng = np.random.default_rng(2)
    clean = make_scene(rng)
    t = np.full(clean.shape[:2], 0.5, dtype=np.float32)
    hazy = hc.apply_haze(clean, t, (0.9, 0.9, 0.9))
    via_dcp, _, _ = hc.dehaze_dcp(hazy)
    via_mlr = hc.dehaze_mlr(hazy, hc.RegressionModel.identity())
    np.testing.assert_allclose(via_dcp, via_mlr, atol=1e-6)


def test_model_file_roundtrip(tmp_path):
    model = hc.RegressionModel.identity()
    model.w0 = (0.9, 1.1, 1.0)
    path = tmp_path / "m.mlr"
    hc.save_model(model, path)
    back = hc.load_model(path)
    assert back.w0 == pytest.approx(model.w0)
    assert back.w1 == pytest.approx(model.w1)


def test_image_io_roundtrip(tmp_path):
    rng = np.random.default_rng(3)
    img = rng.uniform(0.0, 1.0, size=(16, 16, 3)).astype(np.float32)
    path = tmp_path / "img.png"
    hc.save_image(img, path)
    back = hc.load_image(path)
    assert back.shape == img.shape
    assert np.abs(back - img).max() <= 1 / 255

    with pytest.raises(hc.HazeclearError):
        hc.load_image(tmp_path / "missing.png")
