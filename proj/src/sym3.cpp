#include "roofforge/sym3.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace roofforge {

namespace {

constexpr double kRepeatGap = 1e-12;

/// Deterministic representative of an eigenspace: largest |components| lexicographically,
/// first non-zero component positive.
Eigen::Vector3d canonical(const Eigen::Matrix3d& basis, int count)
{
    Eigen::Vector3d best = basis.col(0);
    auto key = [](const Eigen::Vector3d& v) { return Eigen::Vector3d(v.cwiseAbs()); };
    for (int i = 1; i < count; ++i) {
        const Eigen::Vector3d c = basis.col(i);
        const Eigen::Vector3d kc = key(c), kb = key(best);
        if (std::lexicographical_compare(kb.data(), kb.data() + 3, kc.data(), kc.data() + 3))
            best = c;
    }
    for (int i = 0; i < 3; ++i)
        if (best[i] != 0.0) {
            if (best[i] < 0.0)
                best = -best;
            break;
        }
    return best.normalized();
}

Sym3Eigen fallback(const Eigen::Matrix3d& a)
{
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(a);
    Sym3Eigen out;
    out.values = es.eigenvalues();
    out.used_fallback = true;
    int count = 1;
    while (count < 3 && out.values[count] - out.values[0] < kRepeatGap)
        ++count;
    out.smallest_vec = canonical(es.eigenvectors(), count);
    return out;
}

}  // namespace

Sym3Eigen sym3_eigen(const Eigen::Matrix3d& a)
{
    const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    const double q = a.trace() / 3.0;
    const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                      (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    if (!(p > 0.0))
        return fallback(a);
    const Eigen::Matrix3d b = (a - q * Eigen::Matrix3d::Identity()) / p;
    const double r = b.determinant() / 2.0;
    if (!(r > -1.0 - 1e-12 && r < 1.0 + 1e-12))
        return fallback(a);
    const double phi = std::acos(std::clamp(r, -1.0, 1.0)) / 3.0;
    const double l_max = q + 2.0 * p * std::cos(phi);
    const double l_min = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    const double l_mid = 3.0 * q - l_max - l_min;

    Sym3Eigen out;
    out.values = Eigen::Vector3d(l_min, std::min(l_mid, l_max), std::max(l_mid, l_max));
    if (out.values[1] < out.values[0])
        std::swap(out.values[0], out.values[1]);
    if (out.values[1] - out.values[0] < kRepeatGap)
        return fallback(a);

    // Null vector of (A - l_min I) from the best-conditioned pair of rows.
    const Eigen::Matrix3d m = a - out.values[0] * Eigen::Matrix3d::Identity();
    const Eigen::Vector3d r0 = m.row(0), r1 = m.row(1), r2 = m.row(2);
    const Eigen::Vector3d c01 = r0.cross(r1), c02 = r0.cross(r2), c12 = r1.cross(r2);
    const double n01 = c01.squaredNorm(), n02 = c02.squaredNorm(), n12 = c12.squaredNorm();
    Eigen::Vector3d v = c01;
    double nv = n01;
    if (n02 > nv) {
        v = c02;
        nv = n02;
    }
    if (n12 > nv) {
        v = c12;
        nv = n12;
    }
    if (!(nv > 0.0))
        return fallback(a);
    out.smallest_vec = v / std::sqrt(nv);
    return out;
}

}  // namespace roofforge
