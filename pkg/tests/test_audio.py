import numpy as np
import pytest

from sonivis.audio import (
    Hrir, HrirSet, VoiceEngine, convolve_stereo, fallback_hrir, fallback_hrir_set,
    load_hrir_set, synthetic_loop,
)
from sonivis.audio.hrtf import DIRECTION_KEYS, ManifestError
from sonivis.audio.loops import SoundLoop
from sonivis.wavio import write_wav_float32


def brute_convolve(x, h):
    out = np.zeros(len(x) + len(h) - 1)
    for n in range(len(out)):
        for k in range(len(h)):
            if 0 <= n - k < len(x):
                out[n] += h[k] * x[n - k]
    return out


def unit_impulse_set(rate=44100):
    one = np.array([1.0])
    return HrirSet(filters={k: Hrir(left=one, right=one, sample_rate=rate)
                            for k in DIRECTION_KEYS})


def constant_bank(value=0.5, n=512):
    samples = np.full(n, value)
    return {cls: SoundLoop(samples=samples, sound_class=cls, loop_length=n)
            for cls in ("birds", "trees", "waves")}


# --- fallback HRIR -----------------------------------------------------------

def test_fallback_center_is_identity_pair():
    h = fallback_hrir(0.0, 0.0, 44100)
    assert np.array_equal(h.left, h.right)
    assert h.left[0] == 1.0 and np.all(h.left[1:] == 0)


def test_fallback_hard_left_delay_and_gain():
    h = fallback_hrir(-90.0, 45.0, 44100)
    # contralateral (right) ear: 11-sample delay, ~0.501 gain
    assert len(h.right) == 12
    assert np.flatnonzero(h.right)[0] == 11
    assert h.right[11] == pytest.approx(10 ** (-6 / 20), abs=1e-9)
    assert h.left[0] == 1.0


def test_fallback_positive_azimuth_delays_left():
    h = fallback_hrir(30.0, 0.0, 44100)
    assert h.right[0] == 1.0
    assert h.left[0] == 0.0 and h.left.max() < 1.0


def test_fallback_azimuth_out_of_range():
    with pytest.raises(ValueError):
        fallback_hrir(120.0, 0.0, 44100)


# --- convolution -------------------------------------------------------------

def test_convolve_identity():
    x = np.random.default_rng(0).normal(size=32)
    h = Hrir(left=np.array([1.0]), right=np.array([1.0]), sample_rate=44100)
    out = convolve_stereo(x, h)
    assert np.array_equal(out[:, 0], x)
    assert np.array_equal(out[:, 1], x)


def test_convolve_zero_channel():
    x = np.ones(8)
    h = Hrir(left=np.array([1.0]), right=np.array([0.0]), sample_rate=44100)
    out = convolve_stereo(x, h)
    assert np.all(out[:, 1] == 0)


def test_convolve_matches_direct_sum():
    rng = np.random.default_rng(1)
    for _ in range(25):
        x = rng.normal(size=rng.integers(1, 9))
        hl = rng.normal(size=rng.integers(1, 5))
        hr = rng.normal(size=len(hl))
        h = Hrir(left=hl, right=hr, sample_rate=44100)
        out = convolve_stereo(x, h)
        assert np.allclose(out[:, 0], brute_convolve(x, hl), atol=1e-12, rtol=0)
        assert np.allclose(out[:, 1], brute_convolve(x, hr), atol=1e-12, rtol=0)


# --- manifest loading --------------------------------------------------------

def _write_manifest(tmp_path, skip=None, rates=None):
    lines = []
    for i, (az, el) in enumerate(DIRECTION_KEYS):
        if skip and (az, el) == skip:
            continue
        rate = rates[i] if rates else 44100
        path = tmp_path / f"h{i}.wav"
        write_wav_float32(path, np.stack([np.array([1.0, 0.2], np.float32),
                                          np.array([0.5, 0.1], np.float32)], axis=1), rate)
        lines.append(f"{az} {el} {path.name}")
    manifest = tmp_path / "hrir.txt"
    manifest.write_text("\n".join(lines) + "\n")
    return manifest


def test_load_hrir_manifest(tmp_path):
    hs = load_hrir_set(_write_manifest(tmp_path))
    assert len(hs.filters) == 12
    assert hs.sample_rate == 44100


def test_manifest_missing_direction(tmp_path):
    with pytest.raises(ManifestError, match=r"90.0, -40.0"):
        load_hrir_set(_write_manifest(tmp_path, skip=(90.0, -40.0)))


def test_manifest_rate_mismatch(tmp_path):
    rates = [44100] * 12
    rates[3] = 48000
    with pytest.raises(ManifestError, match="sample rates"):
        load_hrir_set(_write_manifest(tmp_path, rates=rates))


# --- voice engine ------------------------------------------------------------

def flags_for(cells):
    f = np.zeros(12, bool)
    for c in cells:
        f[c] = True
    return f


def test_idle_engine_renders_silence():
    engine = VoiceEngine()
    assert np.all(engine.render_block(256) == 0)


def test_unit_impulse_constant_loop():
    engine = VoiceEngine(hrir_set=unit_impulse_set(), sound_bank=constant_bank())
    engine.update_voices(flags_for([0]))
    out = engine.render_block(256)
    assert np.allclose(out, 0.5, atol=0, rtol=0)


def test_two_voices_sum_to_one():
    engine = VoiceEngine(hrir_set=unit_impulse_set(), sound_bank=constant_bank())
    engine.update_voices(flags_for([0, 1]))
    out = engine.render_block(256)
    assert np.allclose(out, 1.0, atol=0, rtol=0)


def test_update_keeps_unchanged_voice_phase():
    engine = VoiceEngine()
    engine.update_voices(flags_for([2]))
    engine.render_block(100)
    pos = engine.voices[2].pos
    engine.update_voices(flags_for([2, 5]))
    assert engine.voices[2].pos == pos
    assert engine.voices[5].pos == 0


def test_retrigger_resets_position():
    engine = VoiceEngine()
    engine.update_voices(flags_for([0]))
    engine.render_block(777)
    engine.update_voices(flags_for([]))
    engine.update_voices(flags_for([0]))
    assert engine.voices[0].pos == 0
    assert engine.voices[0].playing


def test_block_split_is_sample_exact():
    def run(block_sizes):
        e = VoiceEngine()
        e.update_voices(flags_for([0, 7, 11]))
        return np.concatenate([e.render_block(b) for b in block_sizes], axis=0)

    whole = run([4096])
    split = run([1024] * 4)
    assert np.array_equal(whole, split)
    uneven = run([100, 924, 2048, 1024])
    assert np.array_equal(whole, uneven)


def test_two_voice_linearity_pre_clipping():
    def render(cells):
        e = VoiceEngine()
        e.update_voices(flags_for(cells))
        return e.render_block(2048, clip=False)

    both = render([0, 6])
    summed = render([0]) + render([6])
    assert np.allclose(both, summed, atol=1e-12, rtol=0)


def test_stop_latency_one_block_plus_tail():
    engine = VoiceEngine()
    engine.update_voices(flags_for([3]))
    engine.render_block(1024)
    tail = engine.voices[3].hist_len
    engine.update_voices(flags_for([]))
    block = engine.render_block(1024)
    assert np.any(block[:tail] != 0) or tail == 0
    assert np.all(block[tail:] == 0)
    assert np.all(engine.render_block(1024) == 0)


def test_left_column_dominates_left_channel():
    engine = VoiceEngine(master_gain=1 / 12)
    engine.update_voices(flags_for([4]))  # cell (1, 0): azimuth -90
    out = engine.render_block(4096)
    rms = np.sqrt((out ** 2).mean(axis=0))
    assert rms[0] > rms[1]
    # mirrored for the rightmost column
    engine = VoiceEngine(master_gain=1 / 12)
    engine.update_voices(flags_for([7]))  # cell (1, 3): azimuth +90
    out = engine.render_block(4096)
    rms = np.sqrt((out ** 2).mean(axis=0))
    assert rms[1] > rms[0]


def test_output_is_hard_clipped():
    bank = constant_bank(value=1.0)
    engine = VoiceEngine(hrir_set=unit_impulse_set(), sound_bank=bank)
    engine.update_voices(flags_for(list(range(12))))
    out = engine.render_block(128)
    assert out.max() <= 1.0
    assert np.allclose(out, 1.0)


def test_synthetic_loops_are_seamless_and_distinct():
    for cls in ("birds", "trees", "waves"):
        loop = synthetic_loop(cls)
        assert len(loop.samples) == 44100
        assert np.abs(loop.samples).max() == pytest.approx(0.5)
    birds = synthetic_loop("birds").samples
    waves = synthetic_loop("waves").samples
    assert not np.allclose(birds, waves)
