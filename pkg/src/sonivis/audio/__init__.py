from .hrtf import Hrir, HrirSet, convolve_stereo, fallback_hrir, fallback_hrir_set, load_hrir_set
from .loops import SoundLoop, default_sound_bank, load_sound_bank, synthetic_loop
from .engine import VoiceEngine

__all__ = [
    "Hrir", "HrirSet", "convolve_stereo", "fallback_hrir", "fallback_hrir_set",
    "load_hrir_set", "SoundLoop", "default_sound_bank", "load_sound_bank",
    "synthetic_loop", "VoiceEngine",
]
