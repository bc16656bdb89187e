#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "vhc/configuration.hpp"
#include "vhc/cutoffs.hpp"
#include "vhc/liouville.hpp"
#include "vhc/mode_solvers.hpp"

namespace vhc {

struct AssemblyParams {
    double eps = 1e-3;
    double delta = 0.2;    // inner-region scale
    double delta1 = 0.03;  // gluing scale, < delta^2
    double r0 = 1.0;
    double h = 1.0;
    double s = 0.0;  // radial offset of the cluster center
    std::vector<double> kappas;
    std::vector<Complex> cluster_points;  // scaled balancing solution
    double cluster_d = 0.0;               // min pairwise distance of the above

    // outer solver knobs
    int grid_nodes = 2048;
    double grid_rmin = 2e-4;
    double grid_rmax = 200.0;
    int K = 96;
    double nu = 3.0;
    Vec2 anchor{1.0, 0.0};  // H2eps normalization point, default (r0, 0)
    bool anchor_set = false;

    int max_sweeps = 50;
    double mu_tol = 1e-10;

    static AssemblyParams from_configuration(const ClusterConfiguration& config,
                                             const ClusterCharges& charges,
                                             double eps, double delta,
                                             double delta1, double s = 0.0);
    void validate() const;
    double log_eps_abs() const;
    int count() const { return int(kappas.size()); }
    // physical filament centers P_i = (r0+s, 0) + Phat_i/|log eps|
    std::vector<Vec2> physical_points() const;
    std::vector<Vec2> phat() const;
};

// H2eps with the additive constant pinned so the field vanishes at the anchor.
struct AnchoredOuterField {
    OuterField field;
    Vec2 anchor{};
    double offset = 0.0;

    double value(const Vec2& x) const { return field.value(x) - offset; }
    ScalarJet jet(const Vec2& x) const {
        ScalarJet j = field.jet(x);
        j.value -= offset;
        return j;
    }
};

AnchoredOuterField solve_H2eps(const std::function<double(const Vec2&)>& g,
                               double h, const RadialGrid& grid,
                               const OuterConfig& cfg, const Vec2& anchor,
                               OuterWorkspace* workspace = nullptr);

enum class RegionKind { Inner, Transition, Outer };

struct RegionTag {
    RegionKind kind = RegionKind::Outer;
    int filament = -1;  // meaningful for Inner/Transition
};

// The assembled first approximation: filament bubbles, cutoff, outer
// correction and the nonlinearity. Immutable once built.
class StreamAssembly {
  public:
    static StreamAssembly build(const AssemblyParams& params);
    // Rebuild from persisted state (mu and the solved outer field); used by
    // the serialization loader, no fixed point is run.
    static StreamAssembly restore(const AssemblyParams& params,
                                  std::vector<double> mu,
                                  AnchoredOuterField h2e);

    const AssemblyParams& params() const { return params_; }
    const std::vector<Vec2>& points() const { return P_; }
    const std::vector<FramedChart>& charts() const { return charts_; }
    const std::vector<CorrectionConstants>& constants() const { return cc_; }
    const std::vector<double>& mu() const { return mu_; }
    const std::vector<double>& log_mu() const { return log_mu_; }
    const std::vector<double>& sweep_deltas() const { return sweep_deltas_; }
    const AnchoredOuterField& H2eps() const { return h2e_; }
    const Bubble& bubble(int i) const { return bubbles_[i]; }
    double alpha() const { return alpha_; }
    double log_eps_abs() const { return labs_; }
    double radius(int i) const { return charts_[i].R; }

    // radial cutoff eta_0 centered at (r0, 0)
    double eta0(const Vec2& x) const;
    ScalarJet eta0_jet(const Vec2& x) const;

    // compactly supported commutator + remainder source g(x)
    double source_g(const Vec2& x) const;
    std::function<double(const Vec2&)> source_functional() const;
    double source_sup() const { return g_sup_; }

    // Psi_0 = eta0 sum_j kappa_j Psi_j + H2eps, full jet
    ScalarJet psi0(const Vec2& x) const;
    double psi0_value(const Vec2& x) const;

    // the Liouville-side right-hand side eta0 sum_j kappa_j (Delta Gamma + dipole)
    double liouville_rhs(const Vec2& x) const;

    // nonlinearity F evaluated from the N shifted arguments
    double nonlinearity_F(const std::vector<double>& u) const;
    double cutoff_upper(int j) const;  // eta^j == 1 above this
    double cutoff_lower(int j) const;  // eta^j == 0 below this
    double cutoff_eta(int j, double u) const;
    double shifted_argument(int j, const Vec2& x) const;

    // vorticity W = F(Psi_0 - (alpha/2)|log eps| |x|^2)
    double vorticity_W(const Vec2& x) const;

    // post-hoc check of the scaling relation: returns max_i |2 k_i log mu_i - rhs_i|
    double mu_relation_residual() const;
    double mu_relation_rhs(int i) const;

    RegionTag classify(const Vec2& x) const;
    double chart_radius(int i, const Vec2& x) const;  // |A_i^{-1}(x - P_i)|

  private:
    AssemblyParams params_;
    std::vector<Vec2> P_;
    std::vector<FramedChart> charts_;
    std::vector<CorrectionConstants> cc_;
    std::vector<Bubble> bubbles_;
    AnchoredOuterField h2e_;
    std::vector<double> mu_, log_mu_, sweep_deltas_;
    double alpha_ = 0.0, labs_ = 0.0, g_sup_ = 0.0;

    StreamAssembly() = default;
    ScalarJet bubble_sum_jet(const Vec2& x) const;
};

}  // namespace vhc
