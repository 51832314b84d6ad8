#pragma once

#include "rankvarma/types.hpp"

namespace rankvarma {

enum class Exec { serial, parallel };

// Single lag of lagged_products.
Matrix lagged_product(const Vector& a, const Vector& b, const Series& w, int lag);

// G_i = (n-i)^{-1} sum_{t=i}^{n-1} a_t b_{t-i} w_t w_{t-i}'  for i = 1..max_lag
// (0-based time). Each lag uses its own compensated accumulator, so the serial and
// parallel variants produce identical bits.
MatrixSeq lagged_products(const Vector& a, const Vector& b, const Series& w, int max_lag, Exec exec);

// J = sum_r Q_r' K Q_r over the first `blocks` row blocks Q_r of height K.rows().
// The parallel variant reduces fixed-size chunks in a fixed order, so its result does
// not depend on the thread count.
Matrix accumulate_information(const Matrix& q, const Matrix& kmat, int blocks, Exec exec);

}  // namespace rankvarma
