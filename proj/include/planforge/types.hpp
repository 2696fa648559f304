#pragma once

#include <Eigen/Dense>

namespace planforge {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

}  // namespace planforge
