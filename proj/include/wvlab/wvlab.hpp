#ifndef WVLAB_WVLAB_HPP
#define WVLAB_WVLAB_HPP

// Umbrella header: growth quantities of entire functions, the flat-disk
// verification harness, exceptional-set scans, and the zero-circle product
// construction, all driven by the log-iterate weight family.

#include "wvlab/borel.hpp"
#include "wvlab/counterexample.hpp"
#include "wvlab/entire.hpp"
#include "wvlab/growth_scales.hpp"
#include "wvlab/io.hpp"
#include "wvlab/log_complex.hpp"
#include "wvlab/power_series.hpp"
#include "wvlab/verify.hpp"
#include "wvlab/weights.hpp"

#endif
