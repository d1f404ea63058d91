#pragma once

namespace ltepa::detail {

// Overflow-safe logistic helpers shared by the utility and link models.
double sigmoid(double z);
double log_sigmoid(double z);
double log1mexp(double x);  // log(1 - e^{-x}), x > 0

}  // namespace ltepa::detail
