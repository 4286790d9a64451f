#pragma once

#include <stdexcept>
#include <string>

namespace gammoments {

// Input outside the mathematical domain of an operation, or a parameter set
// that violates a family's validity region. The CLI maps this to exit 2.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical routine could not reach its target accuracy. Carries the best
// estimate found so callers may still inspect it.
class accuracy_error : public std::runtime_error {
 public:
  accuracy_error(const std::string& what, double best_estimate, double error_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

}  // namespace gammoments
