"""Preprocessing: low-pass filtering, then ICA-based eye-blink removal.

The blink fixture mixes a known blink train into six oscillating scalp
channels and records it on the EOG channel. ICA isolates the blink as one
component; scoring against EOG finds it; zeroing it and remixing leaves the
scalp oscillations intact.
"""

import numpy as np

from eegsig import (IcaConfig, apply_filter, blink_recording, design_lowpass,
                    fast_ica, reject_components, score_components)

rec, clean_truth, blink = blink_recording(seed=1)
print(f"recording: {rec.n_channels} channels x {rec.n_samples} samples "
      f"@ {rec.sample_rate_hz} Hz")

# a 40 Hz low-pass keeps all five rhythm bands while killing line noise
kernel = design_lowpass(40.0, rec.sample_rate_hz, num_taps=101)
resp60 = 20 * np.log10(abs(kernel.frequency_response(60.0)[0]))
print(f"filter: {len(kernel.taps)} taps, 60 Hz response {resp60:.1f} dB")
filtered = apply_filter(rec, kernel)

model = fast_ica(filtered, IcaConfig(seed=1))
print(f"ICA converged={model.converged} after {model.iterations} iterations")

eog = filtered.data[filtered.eog_index()]
scores = score_components(model, eog)
print("\ncomponent |r| against EOG (sorted):")
for s in scores:
    marker = "  <- reject" if s.abs_correlation > 0.7 else ""
    print(f"  component {s.component_index}: {s.abs_correlation:.3f}{marker}")

rejected = {s.component_index for s in scores if s.abs_correlation > 0.7}
cleaned = reject_components(filtered, model, rejected)

print("\nper-channel |r| with the blink template, before vs after:")
for i, name in enumerate(rec.channels[:-1]):
    before = abs(np.corrcoef(rec.data[i], blink)[0, 1])
    after = abs(np.corrcoef(cleaned.data[i], blink)[0, 1])
    truth = abs(np.corrcoef(cleaned.data[i], clean_truth[i])[0, 1])
    print(f"  {name}: blink {before:.3f} -> {after:.3f}   clean-truth r={truth:.3f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    t = np.arange(rec.n_samples) / rec.sample_rate_hz
    fig, axes = plt.subplots(3, 1, figsize=(10, 6), sharex=True)
    axes[0].plot(t, rec.data[0]), axes[0].set_ylabel("raw c3")
    axes[1].plot(t, cleaned.data[0]), axes[1].set_ylabel("cleaned c3")
    axes[2].plot(t, blink), axes[2].set_ylabel("blink"), axes[2].set_xlabel("s")
    fig.tight_layout()
    fig.savefig("artifact_removal.png", dpi=100)
    print("\nsaved artifact_removal.png")
except ImportError:
    pass
