#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "vhc/jet.hpp"
#include "vhc/radial.hpp"

namespace vhc {

using Complex = std::complex<double>;

// One Fourier mode sampled on a radial grid. Solution modes also carry first
// and second derivative samples so field jets need no numerical
// differentiation. Interpolation is cubic: Hermite when derivatives are
// available, natural spline otherwise.
class ModeFunction {
  public:
    int k = 0;

    ModeFunction() = default;
    ModeFunction(int k_, std::shared_ptr<const std::vector<double>> nodes,
                 std::vector<Complex> samples);
    ModeFunction(int k_, std::shared_ptr<const std::vector<double>> nodes,
                 std::vector<Complex> samples, std::vector<Complex> d1,
                 std::vector<Complex> d2);

    const std::vector<double>& nodes() const { return *nodes_; }
    std::shared_ptr<const std::vector<double>> nodes_ptr() const { return nodes_; }
    const std::vector<Complex>& samples() const { return samples_; }
    const std::vector<Complex>& d1_samples() const { return d1_; }
    const std::vector<Complex>& d2_samples() const { return d2_; }
    bool has_derivatives() const { return !d1_.empty(); }

    Complex value(double r) const;
    Complex deriv(double r) const;
    Complex deriv2(double r) const;

  private:
    std::shared_ptr<const std::vector<double>> nodes_;
    std::vector<Complex> samples_, d1_, d2_;
    CubicSpline sre_, sim_;
    HermiteSeries vre_, vim_, dre_, dim_;
    void build();
};

// Angular Fourier decomposition of a real planar field on a radial grid.
struct FourierField {
    int K = 0;
    std::shared_ptr<const std::vector<double>> nodes;
    std::vector<ModeFunction> modes;  // k = 0..K; mode -k is conj(mode k)
    bool real_field = true;

    double resum(const Vec2& x) const;  // value reconstruction
};

FourierField decompose(const std::function<double(const Vec2&)>& field,
                       const RadialGrid& grid, int K, int n_theta);

// Positive solution of L_k[z_k] = 0 grown from the r^k asymptotic seed,
// stored as (log z_k, z_k'/z_k) so the e^{(k/h) r} growth never overflows.
class HomogeneousMode {
  public:
    HomogeneousMode(int k, double h, const RadialGrid& grid);

    int k() const { return k_; }
    double h() const { return h_; }
    const std::vector<double>& grid_nodes() const { return *nodes_; }
    double log_value(double r) const;           // log z_k up to a constant
    double log_deriv(double r) const;           // z_k'/z_k
    double ratio(double r_num, double r_den) const;  // z(r_num)/z(r_den)

  private:
    int k_ = 1;
    double h_ = 1.0;
    std::shared_ptr<const std::vector<double>> nodes_;
    std::vector<double> ell_, u_;
    HermiteSeries ell_interp_, u_interp_;
};

HomogeneousMode homogeneous_zk(int k, double h, const RadialGrid& grid);

struct ModeSolveReport {
    int k = 0;
    double r_min = 0.0, r_max = 0.0;
    double tail_bound = 0.0;     // truncation tail estimate for k >= 1
    double residual_norm = 0.0;  // finite-difference ODE residual (relative)
    double weighted_input_norm = 0.0;
};

struct OuterSolveReport {
    double nu = 3.0;
    int K = 0;
    std::vector<ModeSolveReport> modes;
};

// Variation-of-parameters solve of L_k[psi_k] + g_k = 0 on the grid:
// the explicit integral for k = 0, the z_k-weighted decaying solution for
// k >= 1. Throws NonDecayingInput when (1+r)^nu |g_k| diverges on the grid.
ModeFunction outer_mode_solve(const ModeFunction& g_k, double h,
                              const HomogeneousMode* zk, double nu = 3.0,
                              ModeSolveReport* report = nullptr);

// Resummed outer solution with jets (spectral in theta, cubic in r).
class OuterField {
  public:
    OuterField() = default;
    OuterField(double h, std::shared_ptr<const std::vector<double>> nodes,
               std::vector<ModeFunction> modes, OuterSolveReport report);

    double value(const Vec2& x) const;
    ScalarJet jet(const Vec2& x) const;
    const OuterSolveReport& report() const { return report_; }
    const std::vector<ModeFunction>& modes() const { return modes_; }
    std::shared_ptr<const std::vector<double>> nodes_ptr() const { return nodes_; }
    double h() const { return h_; }

  private:
    double h_ = 1.0;
    std::shared_ptr<const std::vector<double>> nodes_;
    std::vector<ModeFunction> modes_;
    OuterSolveReport report_;
};

struct OuterConfig {
    int K = 32;
    int n_theta = 0;  // 0 -> 4K + 4
    double nu = 3.0;
};

// Reusable homogeneous modes for repeated solves on one (grid, h) pair.
struct OuterWorkspace {
    std::vector<std::shared_ptr<const HomogeneousMode>> zks;  // index k-1
};

OuterField outer_solve(const std::function<double(const Vec2&)>& g, double h,
                       const RadialGrid& grid, const OuterConfig& cfg = {},
                       OuterWorkspace* workspace = nullptr);

// Inner linearized-Liouville mode solve: Delta phi + e^{Gamma_0} phi + h = 0
// mode by mode. k = 0 and |k| = 1 use the explicit variation-of-parameters
// formulas; |k| >= 2 is a finite-difference boundary-value solve with the
// r^{|k|} regularity condition at r_min and zero Dirichlet data at r_max.
ModeFunction inner_mode_solve(const ModeFunction& h_k, double m = 2.5,
                              ModeSolveReport* report = nullptr);

// Explicit radial co-kernel correction profile:
// c [ (4/3) ((|y|^2-1)/(|y|^2+1)) log(1+|y|^2) - (8/3)/(|y|^2+1) ].
ScalarJet phi2_profile(const Vec2& y, double c);

}  // namespace vhc
