#pragma once

#include <cstddef>
#include <string>

namespace nlie {

/// Outcome of a law check over a finite window. Never thrown; failures carry
/// the first witness in enumeration order.
struct CheckReport {
  std::string check;
  std::string hypothesis;
  bool passed = true;
  std::size_t evaluated = 0;
  std::size_t failures = 0;
  std::string witness;

  void record_failure(std::string w) {
    if (failures++ == 0) witness = std::move(w);
    passed = false;
  }
};

} // namespace nlie
