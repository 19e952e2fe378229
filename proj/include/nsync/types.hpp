#pragma once

#include <Eigen/Dense>
#include <vector>

namespace nsync {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using IndexSet = std::vector<int>;

}  // namespace nsync
