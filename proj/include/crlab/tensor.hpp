#pragma once

#include "crlab/fields.hpp"

namespace crlab {

/// Coefficient of a tensor in the frame {theta, theta1, theta1bar}, with
/// weight k = (#1 indices) - (#1bar indices), derivative indices included.
struct WeightedTensor {
  Field value;
  int weight = 0;

  WeightedTensor conj() const { return {value.conj(), -weight}; }
};

}  // namespace crlab
