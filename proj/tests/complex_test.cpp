#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

namespace asc {
namespace {

using test::mask;

TEST(ComplexTest, CompleteAndEmptyStates) {
  EXPECT_EQ(complete_state(3).to_string(), "1111111");
  EXPECT_EQ(complete_state(2).to_string(), "111");
  for (int n = 2; n <= 8; ++n) {
    EXPECT_EQ(complete_state(n).popcount(), (std::size_t{1} << n) - 1);
    EXPECT_TRUE(validate_closure(complete_state(n)));
    EXPECT_TRUE(validate_closure(empty_state(n)));
  }
  EXPECT_EQ(empty_state(3).to_string(), "1110000");
  EXPECT_EQ(empty_state(4).popcount(), 4u);
}

TEST(ComplexTest, ValidateClosure) {
  EXPECT_TRUE(validate_closure(mask(3, "1111100")));
  EXPECT_TRUE(validate_closure(mask(3, "1111010")));
  EXPECT_FALSE(validate_closure(mask(3, "1110001")));  // triangle without edges
  EXPECT_FALSE(validate_closure(mask(3, "0110000")));  // missing root
  EXPECT_FALSE(validate_closure(mask(4, "111111111111101")));
}

TEST(ComplexTest, LengthMismatchIsAnError) {
  const std::vector<std::uint8_t> short_mask(6, 1);
  EXPECT_THROW(validate_closure(3, short_mask), std::invalid_argument);
  EXPECT_THROW(LabeledComplex(3, short_mask), std::invalid_argument);
  EXPECT_THROW(mask(3, "11111111"), std::invalid_argument);
}

TEST(ComplexTest, PruneCofaces) {
  const auto full = complete_state(3);
  const auto& layout = full.layout();
  const NodeIndex edge12 = layout.index_of(0b011);
  const NodeIndex triangle = layout.index_of(0b111);
  EXPECT_EQ(prune_cofaces(full, edge12).to_string(), "1110110");
  EXPECT_EQ(prune_cofaces(full, triangle).to_string(), "1111110");
  const auto once = prune_cofaces(full, edge12);
  EXPECT_EQ(prune_cofaces(once, edge12), once);
  EXPECT_THROW(prune_cofaces(full, 0), std::invalid_argument);
}

TEST(ComplexTest, PruneNeverClearsRootsAndShrinksPresentNodes) {
  for (int n = 2; n <= 5; ++n) {
    for (const auto& c : enumerate_labeled(n).labeled_states) {
      for (NodeIndex i = static_cast<NodeIndex>(n); i < c.size(); ++i) {
        const auto pruned = prune_cofaces(c, i);
        EXPECT_TRUE(validate_closure(pruned));
        EXPECT_FALSE(pruned.contains(i));
        if (c.contains(i)) {
          EXPECT_LT(pruned.popcount(), c.popcount());
        } else {
          EXPECT_EQ(pruned, c);  // absent node has no present cofaces in a closed state
        }
      }
    }
  }
}

TEST(ComplexTest, UnconstrainedSetsExamples) {
  const auto& layout = layout_for(3);
  const NodeIndex tri = layout.index_of(0b111);
  const std::vector<NodeIndex> edges = {3, 4, 5};

  const auto full = unconstrained_sets(complete_state(3));
  EXPECT_EQ(full.removable, std::vector<NodeIndex>{tri});
  EXPECT_TRUE(full.addable.empty());

  const auto empty = unconstrained_sets(empty_state(3));
  EXPECT_TRUE(empty.removable.empty());
  EXPECT_EQ(empty.addable, edges);

  const auto hollow = unconstrained_sets(mask(3, "1111110"));
  EXPECT_EQ(hollow.removable, edges);
  EXPECT_EQ(hollow.addable, std::vector<NodeIndex>{tri});

  EXPECT_THROW(unconstrained_sets(mask(3, "1110001")), std::invalid_argument);
}

// Removable/addable emptiness characterizes the two extreme states, and any
// subset of either set can be flipped at once without breaking closure.
TEST(ComplexTest, UnconstrainedSetPropertiesExhaustive) {
  for (int n = 2; n <= 5; ++n) {
    const auto full = complete_state(n);
    const auto empty = empty_state(n);
    for (const auto& c : enumerate_labeled(n).labeled_states) {
      const auto sets = unconstrained_sets(c);
      EXPECT_EQ(sets.removable.empty(), c == empty);
      EXPECT_EQ(sets.addable.empty(), c == full);
      const auto& layout = c.layout();
      for (NodeIndex r : sets.removable) {
        EXPECT_TRUE(c.contains(r));
        EXPECT_FALSE(layout.is_root(r));
        for (NodeIndex other : sets.removable) {
          if (other != r) EXPECT_FALSE(is_subset_of(layout.subset_of(r), layout.subset_of(other)));
        }
        LabeledComplex next = c;
        next.set(r, false);
        EXPECT_TRUE(validate_closure(next));
      }
      for (NodeIndex a : sets.addable) {
        EXPECT_FALSE(c.contains(a));
        LabeledComplex next = c;
        next.set(a, true);
        EXPECT_TRUE(validate_closure(next));
      }
      if (n <= 4) {
        for (const auto* pool : {&sets.removable, &sets.addable}) {
          const bool add = pool == &sets.addable;
          for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << pool->size()); ++pick) {
            LabeledComplex next = c;
            for (std::size_t j = 0; j < pool->size(); ++j) {
              if ((pick >> j) & 1) next.set((*pool)[j], add);
            }
            EXPECT_TRUE(validate_closure(next));
          }
        }
      }
    }
  }
}

TEST(ComplexTest, UnconstrainedSetPropertiesRandomized) {
  Rng rng = make_stream(11);
  for (int n = 6; n <= 8; ++n) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto c = trial % 2 ? balanced_sample(n, rng).state : kahle_sample(KahleParams::uniform(n), rng);
      ASSERT_TRUE(validate_closure(c));
      const auto sets = unconstrained_sets(c);
      for (const auto* pool : {&sets.removable, &sets.addable}) {
        LabeledComplex all = c;
        for (NodeIndex i : *pool) {
          LabeledComplex one = c;
          one.set(i, pool == &sets.addable);
          EXPECT_TRUE(validate_closure(one));
          all.set(i, pool == &sets.addable);
        }
        EXPECT_TRUE(validate_closure(all));
      }
    }
  }
}

TEST(ComplexTest, LevelCensus) {
  EXPECT_EQ(level_census(complete_state(3)), (std::vector<std::size_t>{3, 3, 1}));
  EXPECT_EQ(level_census(empty_state(4)), (std::vector<std::size_t>{4, 0, 0, 0}));
  EXPECT_EQ(level_census(mask(3, "1111100")), (std::vector<std::size_t>{3, 2, 0}));
}

TEST(ComplexTest, MaskTextRoundTrip) {
  const auto c = mask(4, "111111011100000");
  const std::string text = format_mask_text(c);
  EXPECT_EQ(text, "4\n111111011100000\n");
  EXPECT_EQ(parse_mask_text(text), c);
  EXPECT_EQ(parse_mask_text("# comment\n4\r\n111111011100000\r\n"), c);
}

TEST(ComplexTest, MaskTextErrors) {
  EXPECT_THROW(parse_mask_text(""), std::invalid_argument);
  EXPECT_THROW(parse_mask_text("three\n1111111\n"), std::invalid_argument);
  EXPECT_THROW(parse_mask_text("3\n11x1111\n"), std::invalid_argument);
  EXPECT_THROW(parse_mask_text("3\n111111\n"), std::invalid_argument);
  EXPECT_THROW(parse_mask_text("3\n1111111\n1111111\n"), std::invalid_argument);
  EXPECT_THROW(parse_mask_text("1\n1\n"), std::out_of_range);
}

TEST(ComplexTest, MaskStreamReadsEveryLine) {
  std::istringstream in("# header\n3\n1111111\n1110000\n\n1111100\n");
  const auto states = read_mask_stream(in);
  ASSERT_EQ(states.size(), 3u);
  EXPECT_EQ(states[2].to_string(), "1111100");
}

}  // namespace
}  // namespace asc
