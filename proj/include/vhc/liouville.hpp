#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "vhc/jet.hpp"
#include "vhc/reduced_operator.hpp"

namespace vhc {

struct BubbleParams {
    double eps = 0.0;
    double mu = 1.0;

    BubbleParams(double eps_, double mu_);
    double epsmu() const { return eps * mu; }
};

// Constants of the first- and second-order corrections to the bubble, fixed
// by the geometry (R, h) of the filament the bubble regularizes.
struct CorrectionConstants {
    double R = 1.0;
    double h = 1.0;

    CorrectionConstants(double R_, double h_);
    double c1() const;
    double c2() const;
    // Coefficient of the Re(z^3) corrector inside psi_mu.
    double h1_coefficient() const;  // 4 R^3 / (h (h^2+R^2)^{3/2})
    // Coefficient of the eps^2 mu^2 z1 dipole term left in L(psi_mu).
    double dipole_coefficient() const;  // 4 R (3h^2+R^2) / (h (h^2+R^2)^{3/2})
};

// Full 2-jet of Gamma_{eps mu}(z) = log 8/(eps^2 mu^2 + |z|^2)^2.
ScalarJet gamma_bubble(const Vec2& z, const BubbleParams& p);

// Bounded kernel functions of the linearized Liouville operator:
// Z_j = d Gamma_0/d y_j (j = 1,2), Z_0 = 2 + y . grad Gamma_0.
double kernel_Z(int j, const Vec2& y);

// U(y) = 8/(1+|y|^2)^2 = e^{Gamma_0}.
double bubble_U(const Vec2& y);

// Radial profile h1 of the third-mode corrector, cached per BubbleParams on a
// log-spaced grid; built once, immutable afterwards.
class H1Profile {
  public:
    explicit H1Profile(const BubbleParams& p);

    // (h1(s), h1'(s))
    std::pair<double, double> eval(double s) const;
    double second_derivative(double s) const;  // from the defining ODE
    double epsmu() const { return em_; }

  private:
    double em_ = 0.0;
    std::vector<double> s_, g_, j_, v_, d_;  // nodes, G, J, h1, h1'
    double j_small_ = 0.0;                    // J at the left grid edge
    double g_series(double x) const;
    double g_interp(double x) const;
};

// Bubble bound to a filament chart: Gamma, H1 corrector and psi_mu with full
// jets, plus the pushforward Psi_{mu,P} in original variables.
class Bubble {
  public:
    Bubble(const BubbleParams& p, const CorrectionConstants& cc);

    const BubbleParams& params() const { return params_; }
    const CorrectionConstants& constants() const { return cc_; }
    const H1Profile& h1() const { return *h1_; }

    ScalarJet gamma(const Vec2& z) const { return gamma_bubble(z, params_); }
    ScalarJet H1_corrector(const Vec2& z) const;
    ScalarJet psi(const Vec2& z) const;  // psi_mu jet in the z frame

    // Psi_{mu,P}(x) = psi_mu(A[P]^{-1}(x-P)) with the jet mapped by Ainv.
    ScalarJet psi_filament(const Vec2& x, const FramedChart& chart) const;

    // Laplacian of Gamma (analytic) and the dipole remainder term, used to
    // assemble the commutator source without cancellation surprises.
    double delta_gamma(const Vec2& z) const;
    double dipole_term(const Vec2& z) const;

  private:
    BubbleParams params_;
    CorrectionConstants cc_;
    std::shared_ptr<const H1Profile> h1_;
};

// Convenience free functions mirroring the cached members (transient cache).
std::pair<double, double> h1_profile(double s, const BubbleParams& p);
ScalarJet H1_corrector(const Vec2& z, const BubbleParams& p);
ScalarJet psi_bubble(const Vec2& z, const BubbleParams& p,
                     const CorrectionConstants& cc);
ScalarJet psi_filament(const Vec2& x, const FramedChart& chart,
                       const BubbleParams& p, const CorrectionConstants& cc);

}  // namespace vhc
