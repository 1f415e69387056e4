#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hypertune {

/// One integer hyperparameter: closed interval [lower, upper] restricted to
/// multiples of `multiple_of`.
struct ParamDef {
  std::string name;
  std::int64_t lower = 0;
  std::int64_t upper = 0;
  std::int64_t multiple_of = 1;

  /// Smallest and largest admissible values.
  std::int64_t first_valid() const;
  std::int64_t last_valid() const;
  std::int64_t count() const;
  bool admits(std::int64_t v) const;

  friend bool operator==(const ParamDef &, const ParamDef &) = default;
};

/// A point on the lattice; one integer per ParamDef, in declaration order.
struct ParamPoint {
  std::vector<std::int64_t> values;

  std::size_t size() const noexcept { return values.size(); }
  std::int64_t operator[](std::size_t i) const { return values[i]; }

  friend bool operator==(const ParamPoint &, const ParamPoint &) = default;
  friend auto operator<=>(const ParamPoint &, const ParamPoint &) = default;
};

std::string to_string(const ParamPoint &p);

inline constexpr double kDefaultEnumerationCap = 1e6;

/// Ordered product of ParamDefs. Immutable after construction; the
/// constructor enforces unique names, lower <= upper and a non-empty value
/// set per dimension.
class SearchSpace {
 public:
  explicit SearchSpace(std::vector<ParamDef> params);

  /// m in [2,11], n in [64,256] (multiple of 4), k in [2,10].
  static SearchSpace gan_default();

  const std::vector<ParamDef> &params() const noexcept { return params_; }
  std::size_t dims() const noexcept { return params_.size(); }
  const ParamDef &operator[](std::size_t i) const { return params_[i]; }

  /// Number of lattice points. Returned as double so spaces beyond 2^63
  /// still report a size instead of overflowing.
  double lattice_size() const;

  /// Mixed-radix rank of a valid point in enumeration order.
  std::size_t index_of(const ParamPoint &p) const;
  ParamPoint point_at(std::size_t index) const;

  friend bool operator==(const SearchSpace &, const SearchSpace &) = default;

 private:
  std::vector<ParamDef> params_;
};

/// Throws StructuralError when arity differs.
bool validate(const SearchSpace &space, const ParamPoint &point);

/// Throws ValidationError when invalid.
void require_valid(const SearchSpace &space, const ParamPoint &point);

/// All valid points, lexicographic by parameter index then value.
/// Throws LatticeTooLarge when the lattice exceeds `cap`.
std::vector<ParamPoint> enumerate(const SearchSpace &space,
                                  double cap = kDefaultEnumerationCap);

/// Maps to [0,1]^d; degenerate dimensions map to 0.
std::vector<double> normalize(const SearchSpace &space,
                              const ParamPoint &point);

/// Inverse of normalize without any rounding.
std::vector<double> denormalize(const SearchSpace &space,
                                std::span<const double> unit);

/// Clamp to bounds and round to the nearest admissible multiple; ties go
/// to the lower value. Total.
ParamPoint snap(const SearchSpace &space, std::span<const double> raw);

/// snap() applied to a point expressed in normalized coordinates.
ParamPoint snap_unit(const SearchSpace &space, std::span<const double> unit);

/// Enumerated lattice with normalized coordinates cached row-major
/// (size() x dims()). Used by exhaustive acquisition and oracles.
class Lattice {
 public:
  explicit Lattice(const SearchSpace &space,
                   double cap = kDefaultEnumerationCap);

  const SearchSpace &space() const noexcept { return space_; }
  std::size_t size() const noexcept { return points_.size(); }
  std::size_t dims() const noexcept { return space_.dims(); }
  const ParamPoint &point(std::size_t i) const { return points_[i]; }
  const std::vector<ParamPoint> &points() const noexcept { return points_; }
  std::span<const double> unit(std::size_t i) const {
    return {unit_.data() + i * dims(), dims()};
  }

 private:
  SearchSpace space_;
  std::vector<ParamPoint> points_;
  std::vector<double> unit_;
};

}  // namespace hypertune
