#pragma once

#include "vhc/linalg.hpp"

namespace vhc {

// 2-jet of a planar scalar field: value, gradient and (symmetric) Hessian at a
// point. This is the currency all closed-form fields trade in, so the
// anisotropic operators can be applied exactly, without finite differences.
struct ScalarJet {
    double value = 0.0;
    Vec2 grad{};
    Mat2 hess{};  // symmetric

    static ScalarJet constant(double c) {
        ScalarJet j;
        j.value = c;
        return j;
    }

    ScalarJet operator+(const ScalarJet& o) const {
        ScalarJet j;
        j.value = value + o.value;
        j.grad = grad + o.grad;
        j.hess = hess + o.hess;
        return j;
    }
    ScalarJet operator-(const ScalarJet& o) const {
        ScalarJet j;
        j.value = value - o.value;
        j.grad = grad - o.grad;
        j.hess = hess - o.hess;
        return j;
    }
    ScalarJet operator*(double s) const {
        ScalarJet j;
        j.value = value * s;
        j.grad = grad * s;
        j.hess = hess * s;
        return j;
    }
    ScalarJet& operator+=(const ScalarJet& o) {
        value += o.value;
        grad += o.grad;
        hess = hess + o.hess;
        return *this;
    }

    // Leibniz product of two jets at the same point.
    ScalarJet operator*(const ScalarJet& o) const {
        ScalarJet j;
        j.value = value * o.value;
        j.grad = grad * o.value + o.grad * value;
        Mat2 outer{grad.x * o.grad.x, grad.x * o.grad.y,
                   grad.y * o.grad.x, grad.y * o.grad.y};
        Mat2 outer_t = outer.transpose();
        j.hess = hess * o.value + o.hess * value + outer + outer_t;
        return j;
    }

    double laplacian() const { return hess.trace(); }
};

inline ScalarJet operator*(double s, const ScalarJet& j) { return j * s; }

// Pull a jet through the affine map x = p + A z: given the jet of f at
// x = p + A z, returns the jet of z |-> f(p + A z) at z.
inline ScalarJet pullback_affine(const ScalarJet& jet_x, const Mat2& a) {
    ScalarJet j;
    j.value = jet_x.value;
    Mat2 at = a.transpose();
    j.grad = at * jet_x.grad;
    j.hess = at * jet_x.hess * a;
    return j;
}

// Inverse direction: jet of f at z pushed to x-variables, x = p + A z,
// i.e. the jet of x |-> f(A^{-1}(x - p)) given A^{-1}.
inline ScalarJet pushforward_affine(const ScalarJet& jet_z, const Mat2& a_inv) {
    return pullback_affine(jet_z, a_inv);
}

}  // namespace vhc
