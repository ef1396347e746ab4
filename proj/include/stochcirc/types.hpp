#pragma once

#include <Eigen/Dense>

namespace stochcirc {

/// Phase point (q, p) or a phase-space velocity.
using Vec2 = Eigen::Vector2d;
/// 2x2 Jacobians and Hessians; rows/cols ordered (q, p).
using Mat2 = Eigen::Matrix2d;

/// Symplectic matrix J = [[0, 1], [-1, 0]].
inline Mat2 symplectic_matrix() {
    Mat2 j;
    j << 0.0, 1.0, -1.0, 0.0;
    return j;
}

/// 2D cross product a_q b_p - a_p b_q (the bracket pairing of two tangent vectors).
inline double cross(const Vec2& a, const Vec2& b) { return a(0) * b(1) - a(1) * b(0); }

}  // namespace stochcirc
