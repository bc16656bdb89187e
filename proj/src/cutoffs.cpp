#include "vhc/cutoffs.hpp"

#include <cmath>

namespace vhc {

namespace {

struct Bump {
    double v, d1, d2;
};

// exp(-1/t) with derivatives; zero jet for t <= 0.
Bump bump(double t) {
    if (t <= 0.0) return {0.0, 0.0, 0.0};
    const double e = std::exp(-1.0 / t);
    const double t2 = t * t;
    const double d1 = e / t2;
    const double d2 = e * (1.0 - 2.0 * t) / (t2 * t2);
    return {e, d1, d2};
}

}  // namespace

CutoffJet1D smooth_step(double t) {
    if (t <= 0.0) return {0.0, 0.0, 0.0};
    if (t >= 1.0) return {1.0, 0.0, 0.0};
    const Bump a = bump(t);
    const Bump braw = bump(1.0 - t);
    const double b = braw.v;
    const double bp = -braw.d1;   // d/dt f(1-t)
    const double bpp = braw.d2;
    const double s = a.v + b;
    const double sp = a.d1 + bp;
    const double spp = a.d2 + bpp;
    const double v = a.v / s;
    const double num1 = a.d1 * s - a.v * sp;
    const double d1 = num1 / (s * s);
    const double d2 =
        (a.d2 * s - a.v * spp) / (s * s) - 2.0 * num1 * sp / (s * s * s);
    return {v, d1, d2};
}

CutoffJet1D eta_profile(double s) {
    // eta(s) = step(2(1 - s)): 1 on [0,1/2], 0 on [1,inf).
    CutoffJet1D st = smooth_step(2.0 * (1.0 - s));
    CutoffJet1D out;
    out.value = st.value;
    out.d1 = -2.0 * st.d1;
    out.d2 = 4.0 * st.d2;
    return out;
}

}  // namespace vhc
