"""Rhythm bands via the wavelet bank: where does a tone's energy land?

Five levels at 250 Hz give dyadic sub-bands that approximate the clinical
delta/theta/alpha/beta/gamma edges. Reconstructing one band zeroes every
other coefficient group before inverting; the six reconstructions partition
the signal exactly.
"""

import numpy as np

from eegsig import band_map, dwt_multilevel, idwt, pad_to_multiple, reconstruct_band
from eegsig.wavelet import reconstruct_subbands

FS = 250.0
bands = band_map(FS, levels=5)
print("band map at 250 Hz, 5 levels:")
for b in bands:
    hi = "inf" if np.isinf(b.nominal_high_hz) else f"{b.nominal_high_hz:g}"
    print(f"  {b.name:>5}: clinical {b.nominal_low_hz:g}-{hi} Hz, "
          f"dyadic {b.dyadic_low_hz:g}-{b.dyadic_high_hz:g} Hz ({b.subbands[0]})")

t = np.arange(2500) / FS
for freq in (2.0, 5.0, 10.0, 20.0, 40.0):
    tone = np.sin(2 * np.pi * freq * t)
    padded, off = pad_to_multiple(tone, 32)
    decomp = dwt_multilevel(padded, 5, sample_rate_hz=FS)
    total = np.sum(tone ** 2)
    split = {
        b.name: np.sum(reconstruct_band(decomp, b)[off:off + 2500] ** 2) / total
        for b in bands
    }
    ranked = sorted(split.items(), key=lambda kv: -kv[1])
    summary = ", ".join(f"{name} {ratio:.0%}" for name, ratio in ranked[:2])
    print(f"{freq:5.1f} Hz tone -> {summary}")

# perfect reconstruction and exact partition on a random signal
rng = np.random.default_rng(0)
x = rng.standard_normal(2528)
decomp = dwt_multilevel(x, 5, sample_rate_hz=FS)
print(f"\nround-trip max error: {np.max(np.abs(idwt(decomp) - x)):.2e}")
partition = sum(reconstruct_band(decomp, b) for b in bands)
partition += reconstruct_subbands(decomp, {"D1"})  # 62.5-125 Hz, outside EEG bands
print(f"six-way partition max error: {np.max(np.abs(partition - x)):.2e}")
