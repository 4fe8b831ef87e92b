"""End-to-end EEG signal processing.

Preprocessing (low-pass FIR + ICA artifact removal), wavelet rhythm-band
feature extraction with entropy/statistics/band power, spectral analysis, and
a from-scratch classifier suite (MLP, linear SVM, k-NN), wired together by a
config-driven pipeline, a CLI, and an HTTP service.
"""

from .core import (Recording, TaskLabel, TrialSet, ValidationReport,
                   export_recording, load_recording, load_trialset,
                   save_trialset, slice_channel, validate)
from .preprocess import (ComponentScore, FilterKernel, IcaConfig, IcaModel,
                         apply_filter, demean, design_lowpass, fast_ica,
                         reject_components, score_components)
from .wavelet import (RhythmBand, WaveletDecomposition, WaveletFilterPair,
                      band_map, db4_pair, dwt_level, dwt_multilevel, idwt,
                      pad_to_multiple, reconstruct_band)
from .spectral import (ComplexSpectrum, SpectrumResult, dft_naive, fft, ifft,
                       power_spectrum)
from .features import (EntropyConfig, FeatureConfig, FeatureMatrix, Pmf,
                       band_power, extract_features, histogram_pmf,
                       load_feature_csv, mean, save_feature_csv,
                       shannon_entropy, std_dev, variance)
from .classify import (KnnModel, Metrics, MlpModel, Standardizer, SvmModel,
                       TrainedClassifier, cross_validate, evaluate,
                       fit_classifier, fit_standardizer, kfold_split,
                       load_classifier, predict_knn, predict_mlp, predict_svm,
                       save_classifier, train_knn, train_mlp, train_svm)
from .fixture import blink_recording, generate_fixture, generate_trialset
from .pipeline import PipelineConfig, PipelineReport, StageError, run_pipeline

__version__ = "0.1.0"
