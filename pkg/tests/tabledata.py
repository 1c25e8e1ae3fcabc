"""Frozen reference numbers used by the decay tests.

Measured/predicted percentage pairs for the ten dataset columns (missing
and archived), the per-event reappearance/disappearance/missing-post
rows, and the averages they must reproduce.
"""

MISSING_MEASURED = [37.10, 37.50, 28.17, 30.56, 26.29, 31.62, 32.47, 24.64, 7.55, 12.68]
MISSING_PREDICTED = [31.72, 31.42, 31.96, 30.98, 30.16, 29.68, 29.60, 28.36, 19.80, 11.54]
MISSING_MAE = 4.15

ARCHIVED_MEASURED = [48.61, 40.32, 60.80, 55.04, 47.97, 52.14, 48.38, 40.58, 23.73, 0.56]
ARCHIVED_PREDICTED = [61.78, 61.18, 62.26, 60.30, 58.66, 57.70, 57.54, 55.06, 37.94, 21.42]
ARCHIVED_MAE = 11.57

EVENTS = ["MJ", "Iran", "Obama", "H1N1", "Egypt", "Syria"]
REAPPEARING = [11.29, 11.48, 6.63, 3.68, 4.21, 1.97]
REAPPEARING_AVG = 6.54
DISAPPEARING = [9.98, 11.17, 15.65, 5.46, 2.81, 2.25]
DISAPPEARING_AVG = 7.89
ONE_TO_ZERO = [2.72, 2.89, 4.24, 1.96, 0.23, 0.28]
ONE_TO_ZERO_AVG = 2.05
MISSING_POSTS = [14.43, 14.59, 10.03, 7.38, 15.08, 0.53]
MISSING_POSTS_AVG = 10.34
