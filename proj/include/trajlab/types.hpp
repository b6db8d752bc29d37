#pragma once

#include <Eigen/Dense>
#include <string>

namespace trajlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Round-trip float formatting for CSV emission (17 significant digits).
std::string format_double(double v);

}  // namespace trajlab
