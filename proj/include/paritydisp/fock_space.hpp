#pragma once

#include <optional>

namespace paritydisp {

/// Truncation context: levels |0>..|dim-1> are retained and identity checks
/// are measured on the interior levels |0>..|interior_dim-1>.
class FockSpace {
 public:
  static constexpr double kDefaultTailTol = 1e-10;

  FockSpace(int dim, int interior_dim, double tail_tol);

  int dim() const { return dim_; }
  int interior_dim() const { return interior_dim_; }
  double tail_tol() const { return tail_tol_; }

  bool operator==(const FockSpace&) const = default;

 private:
  int dim_;
  int interior_dim_;
  double tail_tol_;
};

/// Builds a space with interior_dim = dim/2 and tail_tol = 1e-10 unless given.
/// Throws InvalidArgument for dim < 4 or interior_dim outside [2, dim].
FockSpace make_space(int dim, std::optional<int> interior_dim = std::nullopt,
                     std::optional<double> tail_tol = std::nullopt);

}  // namespace paritydisp
