#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace qsa {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qsa
