#pragma once

#include <Eigen/Dense>
#include <vector>

namespace rankvarma {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A k-variate series of length n is stored k x n: column t is the observation at time t.
using Series = Eigen::MatrixXd;

using MatrixSeq = std::vector<Matrix>;

}  // namespace rankvarma
