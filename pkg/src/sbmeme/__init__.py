"""Two consecutive sleeping beauties in meme popularity dynamics.

Detection of the pattern, a two-generation Bass model fitted per meme, and
corpus statistics over the results.
"""
__version__ = "0.1.0"

from .bass import (PMode, bass_cdf, bass_rate, estimate_m, estimate_p, estimate_q, fit,
                   generation_components, simulate)
from .beauty import (Detection, awakening_time, beauty_coefficient, falling_asleep_time,
                     identify_two_beauties)
from .core import (ALPHA, BassGeneration, Corpus, Granularity, Peak, PeakSet, TimeSeries,
                   TwoBeautyProfile, TwoStageBassModel)
from .evaluate import FitReport, averaged_curve, pearson, precision_at_k
from .ingest import load_corpus, write_report
from .kernels import BACKEND
from .peaks import PeakParams, detect_peaks, spike_score
from .stats import (CorpusReport, fit_exponential, fit_gaussian, fit_power_law,
                    imitation_pressure, rising_velocity, wake_gap)
