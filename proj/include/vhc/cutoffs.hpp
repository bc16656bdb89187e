#pragma once

namespace vhc {

struct CutoffJet1D {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

// C^infinity transition t in [0,1] -> [0,1] built from exp(-1/t); 0 below 0,
// 1 above 1, strictly monotone in between, all derivatives vanish at both ends.
CutoffJet1D smooth_step(double t);

// The radial cutoff profile eta: identically 1 for s <= 1/2, identically 0
// for s >= 1, smooth monotone in between.
CutoffJet1D eta_profile(double s);

}  // namespace vhc
