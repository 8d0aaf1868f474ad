#pragma once

#include <cmath>

namespace tmk::lab {

/// Versioned acceptance windows for the statistical probes. The almost-sure
/// asymptotics pin no finite-L numbers, so the desk-scale bands below are
/// frozen constants (justified by pilot runs, see README); deterministic
/// inequalities are not listed here because they admit no tuning.
struct Windows {
    const char* version = "1";

    // telescoping statistic |R2| at the last checkpoint
    double r2_abs = 0.2;
    double r2_min_fraction = 0.95;

    // exponential-sum growth envelope, epsilon = 1 band, plus the reported
    // tighter band
    double sum_envelope_eps = 1.0;
    double sum_envelope_eps_tight = 0.25;

    // discrepancy slope fit window for random alpha, and the floor for the
    // bounded-partial-quotient control
    double slope_lo = 0.25;
    double slope_hi = 0.55;
    double control_slope_min = 0.7;

    // empirical max of the normalized f1 sums over the sample set
    double f1_max_lo = 0.5;
    double f1_max_hi = M_PI / std::sqrt(2.0) + 0.5;

    // bounded-LIL constants (q = 2 branch 85q/(q-1) = 170) and the single
    // harmonic desk bound
    double general_lil_limit = 170.0;
    double single_harmonic_limit = 3.0;
};

}  // namespace tmk::lab
