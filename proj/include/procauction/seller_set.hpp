// Copyright 2026 The procauction Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "procauction/errors.hpp"

namespace procauction {

// Sellers are identified by their index in [0, n). Index order is the
// lexicographic tie-breaking order used throughout the library.
using SellerId = std::size_t;

// Sorted set of distinct seller ids. Comparison is lexicographic over the
// sorted member list, which is what "lexicographically least" refers to.
class SellerSet {
 public:
  using const_iterator = std::vector<SellerId>::const_iterator;

  SellerSet() = default;

  SellerSet(std::initializer_list<SellerId> ids) : ids_(ids) { Normalize(); }

  explicit SellerSet(std::vector<SellerId> ids) : ids_(std::move(ids)) {
    Normalize();
  }

  static SellerSet All(std::size_t n) {
    SellerSet s;
    s.ids_.resize(n);
    std::iota(s.ids_.begin(), s.ids_.end(), SellerId{0});
    return s;
  }

  bool contains(SellerId id) const {
    return std::binary_search(ids_.begin(), ids_.end(), id);
  }

  // Returns false if already present.
  bool insert(SellerId id) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it != ids_.end() && *it == id) return false;
    ids_.insert(it, id);
    return true;
  }

  bool erase(SellerId id) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return false;
    ids_.erase(it);
    return true;
  }

  SellerSet with(SellerId id) const {
    SellerSet out = *this;
    out.insert(id);
    return out;
  }

  SellerSet without(SellerId id) const {
    SellerSet out = *this;
    out.erase(id);
    return out;
  }

  bool is_subset_of(const SellerSet& other) const {
    return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(),
                         ids_.end());
  }

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const_iterator begin() const { return ids_.begin(); }
  const_iterator end() const { return ids_.end(); }
  std::span<const SellerId> ids() const { return ids_; }
  SellerId max_id() const { return ids_.back(); }

  friend bool operator==(const SellerSet&, const SellerSet&) = default;
  friend std::strong_ordering operator<=>(const SellerSet& a,
                                          const SellerSet& b) {
    return a.ids_ <=> b.ids_;
  }

 private:
  void Normalize() {
    std::sort(ids_.begin(), ids_.end());
    if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end()) {
      throw InputError("SellerSet: duplicate seller id");
    }
  }

  std::vector<SellerId> ids_;
};

inline std::string to_string(const SellerSet& s) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (SellerId id : s) {
    if (!first) os << ',';
    os << id;
    first = false;
  }
  os << '}';
  return os.str();
}

}  // namespace procauction
