#pragma once

// Umbrella header: effect sizes of the difference between two means (with
// and without the equal-variance assumption) and between a mean and a
// known constant, with their variances, noncentral-t confidence intervals,
// and a Monte Carlo harness verifying the estimators' statistical claims.

#include "effsize/confidence.hpp"
#include "effsize/effect_sizes.hpp"
#include "effsize/errors.hpp"
#include "effsize/io.hpp"
#include "effsize/noncentral_t.hpp"
#include "effsize/special_functions.hpp"
#include "effsize/verify_mc.hpp"
