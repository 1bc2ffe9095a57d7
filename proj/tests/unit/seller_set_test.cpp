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

#include "procauction/seller_set.hpp"

#include <gtest/gtest.h>

#include "procauction/random.hpp"

namespace procauction {
namespace {

TEST(SellerSetTest, NormalizesAndRejectsDuplicates) {
  const SellerSet s(std::vector<SellerId>{3, 1, 2});
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(*s.begin(), 1u);
  EXPECT_EQ(s.max_id(), 3u);
  EXPECT_THROW(SellerSet(std::vector<SellerId>{1, 1}), InputError);
}

TEST(SellerSetTest, InsertEraseContains) {
  SellerSet s;
  EXPECT_TRUE(s.empty());
  EXPECT_TRUE(s.insert(4));
  EXPECT_FALSE(s.insert(4));
  EXPECT_TRUE(s.insert(0));
  EXPECT_TRUE(s.contains(0));
  EXPECT_FALSE(s.contains(2));
  EXPECT_TRUE(s.erase(4));
  EXPECT_FALSE(s.erase(4));
  EXPECT_EQ(s, SellerSet({0}));
}

TEST(SellerSetTest, WithWithoutAndSubsets) {
  const SellerSet s({0, 2});
  EXPECT_EQ(s.with(1), SellerSet({0, 1, 2}));
  EXPECT_EQ(s.without(0), SellerSet({2}));
  EXPECT_TRUE(s.is_subset_of(SellerSet({0, 1, 2})));
  EXPECT_FALSE(SellerSet({0, 1, 2}).is_subset_of(s));
  EXPECT_TRUE(SellerSet().is_subset_of(s));
  EXPECT_EQ(SellerSet::All(3), SellerSet({0, 1, 2}));
}

TEST(SellerSetTest, LexicographicOrder) {
  EXPECT_LT(SellerSet({0, 1}), SellerSet({1}));
  EXPECT_LT(SellerSet(), SellerSet({0}));
  EXPECT_EQ(to_string(SellerSet({0, 2})), "{0,2}");
}

TEST(RandomSeedTest, BatchIsSortedDistinctAndDeterministic) {
  const RandomSeed seed(17);
  for (std::size_t round = 1; round <= 20; ++round) {
    const auto b = seed.batch(round, 30, 7);
    ASSERT_EQ(b.size(), 7u);
    EXPECT_TRUE(std::is_sorted(b.begin(), b.end()));
    EXPECT_EQ(std::adjacent_find(b.begin(), b.end()), b.end());
    EXPECT_EQ(b, seed.batch(round, 30, 7));
  }
  EXPECT_EQ(seed.batch(1, 5, 9).size(), 5u);
}

}  // namespace
}  // namespace procauction
