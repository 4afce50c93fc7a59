#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>

namespace finsim {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

using Vec2d = Eigen::Vector2d;
using Vec3d = Eigen::Vector3d;
using Mat3d = Eigen::Matrix3d;

/// Linear RGB triple. Kept as an array so products are component-wise.
using Rgb = Eigen::Array3d;

/// Point sets are stored column-wise, one column per point.
using Points3d = Eigen::Matrix3Xd;
using TriIndices = Eigen::Matrix<std::int32_t, 3, Eigen::Dynamic>;
using QuadIndices = Eigen::Matrix<std::int32_t, 4, Eigen::Dynamic>;
using HexIndices = Eigen::Matrix<std::int32_t, 8, Eigen::Dynamic>;

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Rec. 709 luminance.
inline double luminance(const Rgb& c) { return 0.2126 * c[0] + 0.7152 * c[1] + 0.0722 * c[2]; }

}  // namespace finsim
