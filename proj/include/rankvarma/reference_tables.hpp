#pragma once

#include <array>
#include <cmath>
#include <limits>

namespace rankvarma::reference {

// Printed two-decimal efficiencies of the adaptive test against the Gaussian one for the
// power-exponential family; NaN where the efficiency is undefined.
inline constexpr std::array<int, 6> pe_k{1, 3, 4, 6, 8, 10};
inline constexpr std::array<double, 8> pe_nu{0.1, 0.2, 0.3, 0.5, 1.0, 2.0, 5.0, 10.0};
inline constexpr double pe_nan = std::numeric_limits<double>::quiet_NaN();
inline constexpr std::array<std::array<double, 8>, 6> pe_values{{
    {pe_nan, pe_nan, 28.40, 2.00, 1.00, 1.37, 3.18, 6.43},
    {261.24, 8.08, 2.77, 1.33, 1.00, 1.22, 2.30, 4.26},
    {59.63, 4.77, 2.16, 1.25, 1.00, 1.18, 2.08, 3.71},
    {14.81, 2.84, 1.69, 1.17, 1.00, 1.13, 1.81, 3.03},
    {7.51, 2.19, 1.48, 1.13, 1.00, 1.10, 1.65, 2.63},
    {5.02, 1.88, 1.37, 1.10, 1.00, 1.09, 1.54, 2.36},
}};

// Printed three-decimal Spearman lower bounds.
inline constexpr std::array<int, 7> sp_k{1, 2, 3, 4, 5, 6, 10};
inline constexpr std::array<double, 7> sp_values{0.856, 0.913, 0.878, 0.845, 0.818, 0.797, 0.742};
inline constexpr double sp_limit = 0.5625;

}  // namespace rankvarma::reference
