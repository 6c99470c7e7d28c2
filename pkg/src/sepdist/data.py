"""Reference matrices and settings from the measured three-mode state.

All matrices are in (X_A, P_A, X_B, P_B, X_C, P_C) order and printed to two
decimals, so quantities derived from them carry roughly +-0.01 of rounding.
"""

import numpy as np

from .states import SingleModeSpec

#: covariance matrix reconstructed from the homodyne data
GAMMA_MEASURED = np.array([
    [0.76, 0.04, 0.12, -0.03, 0.19, -0.07],
    [0.04, 2.20, 0.05, -0.78, -0.10, -0.74],
    [0.12, 0.05, 5.70, -0.29, -3.92, 1.14],
    [-0.03, -0.78, -0.29, 6.84, -0.96, -3.94],
    [0.19, -0.10, -3.92, -0.96, 4.73, 0.09],
    [-0.07, -0.74, 1.14, -3.94, 0.09, 5.92],
])

#: conservative lower bounds on the detection efficiencies of A, B, C
DETECTION_EFFICIENCY = (0.839, 0.780, 0.784)

#: GAMMA_MEASURED with the DETECTION_EFFICIENCY losses removed
GAMMA_LOSS_CORRECTED = np.array([
    [0.71, 0.05, 0.15, -0.04, 0.23, -0.09],
    [0.05, 2.43, 0.06, -0.96, -0.12, -0.91],
    [0.15, 0.06, 7.03, -0.37, -5.01, 1.46],
    [-0.04, -0.96, -0.37, 8.49, -1.23, -5.04],
    [0.23, -0.12, -5.01, -1.23, 5.76, 0.11],
    [-0.09, -0.91, 1.46, -5.04, 0.11, 7.28],
])

#: input states of the experiment
SQUEEZED_INPUT = SingleModeSpec.squeezed(-1.8, 5.1)
VACUUM_INPUT = SingleModeSpec.vacuum()
HOT_SQUEEZED_INPUT = SingleModeSpec.hot_squeezed(9.6, 10.2)

#: range of plausible detection loss (lower, upper)
DETECTION_LOSS_BAND = (0.06, 0.22)

#: Duan value measured after distribution
MEASURED_DUAN = 3.4
