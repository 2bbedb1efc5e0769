#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <utility>

namespace localflow {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;

/// Entries whose magnitude drops below this after arithmetic are erased.
inline constexpr double kPurgeThreshold = 1e-15;

/// Sparse real vector keyed by vertex or edge id. Absent keys read as 0 and
/// stored entries are always nonzero, so size() is the l0-norm. Iteration is
/// in ascending key order.
template <class Key>
class SparseVector {
 public:
  using Map = std::map<Key, double>;
  using const_iterator = typename Map::const_iterator;

  SparseVector() = default;
  SparseVector(std::initializer_list<std::pair<const Key, double>> init) {
    for (const auto& [k, v] : init) add(k, v);
  }

  double get(Key k) const {
    auto it = entries_.find(k);
    return it == entries_.end() ? 0.0 : it->second;
  }

  void set(Key k, double value) {
    if (std::abs(value) < kPurgeThreshold) {
      entries_.erase(k);
    } else {
      entries_[k] = value;
    }
  }

  void add(Key k, double delta) { set(k, get(k) + delta); }

  bool contains(Key k) const { return entries_.count(k) != 0; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  void clear() { entries_.clear(); }

  double l1() const {
    double s = 0.0;
    for (const auto& [k, v] : entries_) s += std::abs(v);
    return s;
  }

  double sum() const {
    double s = 0.0;
    for (const auto& [k, v] : entries_) s += v;
    return s;
  }

  double linf() const {
    double s = 0.0;
    for (const auto& [k, v] : entries_) s = std::max(s, std::abs(v));
    return s;
  }

  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }

  SparseVector& operator+=(const SparseVector& other) {
    for (const auto& [k, v] : other) add(k, v);
    return *this;
  }
  SparseVector& operator-=(const SparseVector& other) {
    for (const auto& [k, v] : other) add(k, -v);
    return *this;
  }
  SparseVector& operator*=(double s) {
    Map scaled;
    for (const auto& [k, v] : entries_) {
      if (std::abs(v * s) >= kPurgeThreshold) scaled.emplace(k, v * s);
    }
    entries_ = std::move(scaled);
    return *this;
  }

  friend SparseVector operator+(SparseVector a, const SparseVector& b) { return a += b; }
  friend SparseVector operator-(SparseVector a, const SparseVector& b) { return a -= b; }
  friend bool operator==(const SparseVector& a, const SparseVector& b) = default;

 private:
  Map entries_;
};

}  // namespace localflow
