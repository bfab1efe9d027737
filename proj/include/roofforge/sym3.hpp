#pragma once

#include <Eigen/Core>

namespace roofforge {

struct Sym3Eigen {
    Eigen::Vector3d values;        // ascending
    Eigen::Vector3d smallest_vec;  // unit eigenvector of values[0]
    bool used_fallback = false;
};

/// Closed-form trigonometric solve; falls back to Householder tridiagonalization + QR
/// when the discriminant goes negative or the smallest eigenvalue is (near) repeated.
Sym3Eigen sym3_eigen(const Eigen::Matrix3d& a);

}  // namespace roofforge
