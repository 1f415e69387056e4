#include "hypertune/search_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "hypertune/error.hpp"

namespace hypertune {
namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return -floor_div(-a, b);
}

std::int64_t snap_scalar(const ParamDef &def, double x) {
  const std::int64_t first = def.first_valid();
  const std::int64_t last = def.last_valid();
  if (std::isnan(x)) return first;
  x = std::clamp(x, static_cast<double>(def.lower),
                 static_cast<double>(def.upper));
  const auto m = static_cast<double>(def.multiple_of);
  auto below = static_cast<std::int64_t>(std::floor(x / m)) * def.multiple_of;
  std::int64_t above = below + def.multiple_of;
  below = std::max(below, first);
  above = std::min(above, last);
  if (below >= above) return below;
  const double d_below = x - static_cast<double>(below);
  const double d_above = static_cast<double>(above) - x;
  return d_above < d_below ? above : below;
}

}  // namespace

std::int64_t ParamDef::first_valid() const {
  return ceil_div(lower, multiple_of) * multiple_of;
}

std::int64_t ParamDef::last_valid() const {
  return floor_div(upper, multiple_of) * multiple_of;
}

std::int64_t ParamDef::count() const {
  const std::int64_t first = first_valid();
  const std::int64_t last = last_valid();
  return first > last ? 0 : (last - first) / multiple_of + 1;
}

bool ParamDef::admits(std::int64_t v) const {
  return v >= lower && v <= upper && v % multiple_of == 0;
}

std::string to_string(const ParamPoint &p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) os << ',';
    os << p[i];
  }
  os << ')';
  return os.str();
}

SearchSpace::SearchSpace(std::vector<ParamDef> params)
    : params_(std::move(params)) {
  if (params_.empty()) {
    throw ValidationError("search space needs at least one parameter");
  }
  std::set<std::string> names;
  for (const auto &p : params_) {
    if (p.name.empty()) throw ValidationError("parameter name is empty");
    if (!names.insert(p.name).second) {
      throw ValidationError("duplicate parameter name '" + p.name + "'");
    }
    if (p.multiple_of < 1) {
      throw ValidationError("parameter '" + p.name +
                            "': multiple_of must be positive");
    }
    if (p.lower > p.upper) {
      throw ValidationError("parameter '" + p.name + "': lower > upper");
    }
    if (p.count() == 0) {
      throw ValidationError("parameter '" + p.name +
                            "': no multiple of " +
                            std::to_string(p.multiple_of) + " in [" +
                            std::to_string(p.lower) + ", " +
                            std::to_string(p.upper) + "]");
    }
  }
}

SearchSpace SearchSpace::gan_default() {
  return SearchSpace({{"m", 2, 11, 1}, {"n", 64, 256, 4}, {"k", 2, 10, 1}});
}

double SearchSpace::lattice_size() const {
  double size = 1.0;
  for (const auto &p : params_) size *= static_cast<double>(p.count());
  return size;
}

std::size_t SearchSpace::index_of(const ParamPoint &p) const {
  require_valid(*this, p);
  std::size_t index = 0;
  for (std::size_t i = 0; i < dims(); ++i) {
    const auto &def = params_[i];
    index = index * static_cast<std::size_t>(def.count()) +
            static_cast<std::size_t>((p[i] - def.first_valid()) /
                                     def.multiple_of);
  }
  return index;
}

ParamPoint SearchSpace::point_at(std::size_t index) const {
  ParamPoint p;
  p.values.resize(dims());
  for (std::size_t i = dims(); i-- > 0;) {
    const auto &def = params_[i];
    const auto count = static_cast<std::size_t>(def.count());
    p.values[i] = def.first_valid() +
                  static_cast<std::int64_t>(index % count) * def.multiple_of;
    index /= count;
  }
  if (index != 0) throw ValidationError("lattice index out of range");
  return p;
}

bool validate(const SearchSpace &space, const ParamPoint &point) {
  if (point.size() != space.dims()) {
    throw StructuralError("point has " + std::to_string(point.size()) +
                          " coordinates, space has " +
                          std::to_string(space.dims()));
  }
  for (std::size_t i = 0; i < space.dims(); ++i) {
    if (!space[i].admits(point[i])) return false;
  }
  return true;
}

void require_valid(const SearchSpace &space, const ParamPoint &point) {
  if (!validate(space, point)) {
    throw ValidationError("point " + to_string(point) +
                          " is not on the search lattice");
  }
}

std::vector<ParamPoint> enumerate(const SearchSpace &space, double cap) {
  const double size = space.lattice_size();
  if (size > cap) throw LatticeTooLarge(size, cap);
  const auto n = static_cast<std::size_t>(size);
  std::vector<ParamPoint> out;
  out.reserve(n);
  ParamPoint cur;
  for (const auto &def : space.params()) cur.values.push_back(def.first_valid());
  for (std::size_t r = 0; r < n; ++r) {
    out.push_back(cur);
    // odometer increment, last dimension fastest
    for (std::size_t i = space.dims(); i-- > 0;) {
      const auto &def = space[i];
      cur.values[i] += def.multiple_of;
      if (cur.values[i] <= def.last_valid()) break;
      cur.values[i] = def.first_valid();
    }
  }
  return out;
}

std::vector<double> normalize(const SearchSpace &space,
                              const ParamPoint &point) {
  require_valid(space, point);
  std::vector<double> u(space.dims());
  for (std::size_t i = 0; i < space.dims(); ++i) {
    const auto &def = space[i];
    u[i] = def.upper == def.lower
               ? 0.0
               : static_cast<double>(point[i] - def.lower) /
                     static_cast<double>(def.upper - def.lower);
  }
  return u;
}

std::vector<double> denormalize(const SearchSpace &space,
                                std::span<const double> unit) {
  if (unit.size() != space.dims()) {
    throw StructuralError("normalized vector arity mismatch");
  }
  std::vector<double> raw(space.dims());
  for (std::size_t i = 0; i < space.dims(); ++i) {
    const auto &def = space[i];
    raw[i] = static_cast<double>(def.lower) +
             unit[i] * static_cast<double>(def.upper - def.lower);
  }
  return raw;
}

ParamPoint snap(const SearchSpace &space, std::span<const double> raw) {
  if (raw.size() != space.dims()) {
    throw StructuralError("raw vector has " + std::to_string(raw.size()) +
                          " coordinates, space has " +
                          std::to_string(space.dims()));
  }
  ParamPoint p;
  p.values.reserve(space.dims());
  for (std::size_t i = 0; i < space.dims(); ++i) {
    p.values.push_back(snap_scalar(space[i], raw[i]));
  }
  return p;
}

ParamPoint snap_unit(const SearchSpace &space, std::span<const double> unit) {
  return snap(space, denormalize(space, unit));
}

Lattice::Lattice(const SearchSpace &space, double cap)
    : space_(space), points_(enumerate(space, cap)) {
  unit_.reserve(points_.size() * space_.dims());
  for (const auto &p : points_) {
    const auto u = normalize(space_, p);
    unit_.insert(unit_.end(), u.begin(), u.end());
  }
}

}  // namespace hypertune
