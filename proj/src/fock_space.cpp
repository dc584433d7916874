#include "paritydisp/fock_space.hpp"

#include <cmath>
#include <string>

#include "paritydisp/error.hpp"

namespace paritydisp {

FockSpace::FockSpace(int dim, int interior_dim, double tail_tol)
    : dim_(dim), interior_dim_(interior_dim), tail_tol_(tail_tol) {
  if (interior_dim < 2 || interior_dim > dim) {
    throw InvalidArgument("interior_dim must satisfy 2 <= K <= N (got K=" +
                          std::to_string(interior_dim) + ", N=" + std::to_string(dim) + ")");
  }
  if (!(tail_tol > 0.0) || !std::isfinite(tail_tol)) {
    throw InvalidArgument("tail_tol must be a positive finite number");
  }
}

FockSpace make_space(int dim, std::optional<int> interior_dim, std::optional<double> tail_tol) {
  if (dim < 4) {
    throw InvalidArgument("dim must be at least 4 (got " + std::to_string(dim) + ")");
  }
  return FockSpace(dim, interior_dim.value_or(dim / 2),
                   tail_tol.value_or(FockSpace::kDefaultTailTol));
}

}  // namespace paritydisp
