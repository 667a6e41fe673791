#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "framelet/errors.hpp"

namespace framelet {

// Axis-aligned box of real coordinates, one [lo, hi] pair per axis.
struct RealBox {
  std::vector<double> lo;
  std::vector<double> hi;

  RealBox() = default;
  RealBox(std::vector<double> lo_, std::vector<double> hi_)
      : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size())
      throw argument_error("RealBox: lo and hi have different lengths");
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (!(lo[i] <= hi[i]))
        throw argument_error("RealBox: lo > hi on axis " + std::to_string(i));
  }

  int dim() const { return static_cast<int>(lo.size()); }

  double width(int axis) const { return hi[axis] - lo[axis]; }

  double max_halfwidth() const {
    double w = 0.0;
    for (int i = 0; i < dim(); ++i) w = std::max(w, width(i) / 2.0);
    return w;
  }

  bool contains(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != dim()) return false;
    for (int i = 0; i < dim(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }
};

// Axis-aligned box of integer lattice indices, both ends inclusive.
// Flattening is row-major (last axis fastest), used both for sample storage
// and as the per-index counter fed to the jitter RNG.
struct IndexBox {
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> hi;

  IndexBox() = default;
  IndexBox(std::vector<std::int64_t> lo_, std::vector<std::int64_t> hi_)
      : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size())
      throw argument_error("IndexBox: lo and hi have different lengths");
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (lo[i] > hi[i])
        throw argument_error("IndexBox: empty range on axis " +
                             std::to_string(i));
  }

  int dim() const { return static_cast<int>(lo.size()); }

  std::int64_t span(int axis) const { return hi[axis] - lo[axis] + 1; }

  // Total index count, guarded against overflow. `limit` callers pass their
  // own resource guard; the hard cap here only protects the multiplication.
  std::int64_t cardinality() const {
    std::int64_t card = 1;
    for (int i = 0; i < dim(); ++i) {
      const std::int64_t s = span(i);
      if (card > (std::int64_t{1} << 62) / s)
        throw resource_error("IndexBox: cardinality overflows 64-bit range");
      card *= s;
    }
    return card;
  }

  bool contains(const std::vector<std::int64_t>& k) const {
    if (static_cast<int>(k.size()) != dim()) return false;
    for (int i = 0; i < dim(); ++i)
      if (k[i] < lo[i] || k[i] > hi[i]) return false;
    return true;
  }

  // Row-major offset of index k inside the box.
  std::int64_t flatten(const std::vector<std::int64_t>& k) const {
    std::int64_t off = 0;
    for (int i = 0; i < dim(); ++i) off = off * span(i) + (k[i] - lo[i]);
    return off;
  }

  std::vector<std::int64_t> unflatten(std::int64_t off) const {
    std::vector<std::int64_t> k(dim());
    for (int i = dim() - 1; i >= 0; --i) {
      const std::int64_t s = span(i);
      k[i] = lo[i] + (off % s);
      off /= s;
    }
    return k;
  }

  // Visits every index in row-major order.
  void for_each(const std::function<void(const std::vector<std::int64_t>&)>& fn) const {
    std::vector<std::int64_t> k(lo);
    const std::int64_t card = cardinality();
    for (std::int64_t c = 0; c < card; ++c) {
      fn(k);
      for (int i = dim() - 1; i >= 0; --i) {
        if (++k[i] <= hi[i]) break;
        k[i] = lo[i];
      }
    }
  }

  std::string to_string() const {
    std::ostringstream os;
    for (int i = 0; i < dim(); ++i)
      os << (i ? " x " : "") << "[" << lo[i] << "," << hi[i] << "]";
    return os.str();
  }
};

}  // namespace framelet
