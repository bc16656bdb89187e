#pragma once

#include "vhc/errors.hpp"
#include "vhc/jet.hpp"
#include "vhc/linalg.hpp"

namespace vhc {

// Coefficient matrix of the helical reduction,
//   K(x) = 1/(h^2+|x|^2) [[h^2+x2^2, -x1 x2], [-x1 x2, h^2+x1^2]].
Mat2 k_matrix(const Vec2& x, double h);

// L[psi](x) = div(K grad psi) evaluated through the explicit second-order
// expansion; exact on 2-jets.
double apply_L(const ScalarJet& jet, const Vec2& x, double h);

// Affine chart centered at P used to conjugate L to a perturbed Laplacian.
struct FramedChart {
    Vec2 P{};
    double h = 0.0;
    double R = 0.0;
    Mat2 A{};
    Mat2 Ainv{};
    double detA = 0.0;
};

FramedChart frame_chart(const Vec2& P, double h);

// B[phi](z) for the conjugated operator L = Delta_z + B in the chart frame.
double apply_B(const ScalarJet& jet_z, const Vec2& z, const FramedChart& chart);

}  // namespace vhc
