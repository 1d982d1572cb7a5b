#include "gpx/types.hpp"

namespace gpx {

Mat symplectic_unit(int n) {
  Mat J = Mat::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = -Mat::Identity(n, n);
  J.bottomLeftCorner(n, n) = Mat::Identity(n, n);
  return J;
}

}  // namespace gpx
