#include <gtest/gtest.h>

#include <set>

#include "inflogic/error.hpp"
#include "inflogic/tags.hpp"

namespace inflogic {
namespace {

TEST(Tag, Weights) {
  EXPECT_EQ(tag_weight(Tag::unit()), 0U);
  EXPECT_EQ(tag_weight(Tag::nat(4)), 4U);
  EXPECT_EQ(tag_weight(Tag::tuple({Tag::nat(1), Tag::nat(2)})), 3U);
  EXPECT_EQ(tag_weight(Tag::inj(2, Tag::nat(1))), 3U);
  EXPECT_EQ(tag_weight(Tag::set({Tag::nat(0), Tag::nat(2)})), 4U);
  EXPECT_EQ(tag_weight(Tag::map(Tag::nat(9), {{Tag::nat(1), Tag::nat(1)}})), 3U);
}

TEST(Tag, SetsAreCanonical) {
  EXPECT_EQ(Tag::set({Tag::nat(2), Tag::nat(0), Tag::nat(2)}), Tag::set({Tag::nat(0), Tag::nat(2)}));
}

TEST(Tag, MapApplyFallsBackToDefault) {
  const Tag m = Tag::map(Tag::nat(0), {{Tag::nat(3), Tag::nat(7)}});
  EXPECT_EQ(m.apply(Tag::nat(3)), Tag::nat(7));
  EXPECT_EQ(m.apply(Tag::nat(4)), Tag::nat(0));
}

TEST(Domain, Cardinalities) {
  EXPECT_EQ(cardinality(unit_domain()), 1U);
  EXPECT_EQ(cardinality(fin_domain(3)), 3U);
  EXPECT_EQ(cardinality(prod_domain({fin_domain(2), fin_domain(3)})), 6U);
  EXPECT_EQ(cardinality(sum_domain({fin_domain(2), unit_domain()})), 3U);
  EXPECT_EQ(cardinality(finsubsets_domain(fin_domain(3))), 8U);
  EXPECT_EQ(cardinality(choicefn_domain(fin_domain(2), fin_domain(3))), 9U);
  EXPECT_FALSE(cardinality(nat_domain()).has_value());
  EXPECT_FALSE(cardinality(finsubsets_domain(nat_domain())).has_value());
}

// Enumeration lists distinct members, by nondecreasing weight, and all of
// them when the domain is finite.
void check_enumeration(const Domain& d, std::size_t limit) {
  const auto tags = enumerate(d, limit);
  std::set<Tag> seen;
  std::uint64_t last = 0;
  for (const Tag& t : tags) {
    EXPECT_TRUE(member(d, t)) << t.str();
    EXPECT_TRUE(seen.insert(t).second) << "repeated " << t.str();
    EXPECT_GE(tag_weight(t), last) << t.str();
    last = tag_weight(t);
  }
  if (auto n = cardinality(d); n && *n <= limit) EXPECT_EQ(tags.size(), *n);
}

TEST(Domain, EnumerationIsOrderedAndComplete) {
  check_enumeration(nat_domain(), 20);
  check_enumeration(natpair_domain(), 30);
  check_enumeration(finsubsets_domain(nat_domain()), 40);
  check_enumeration(choicefn_domain(nat_domain(), nat_domain()), 40);
  check_enumeration(choicefn_domain(fin_domain(3), fin_domain(2)), 100);
  check_enumeration(sum_domain({nat_domain(), finsubsets_domain(fin_domain(2))}), 30);
  check_enumeration(prod_domain({fin_domain(2), nat_domain()}), 30);
  check_enumeration(finsubsets_domain(sum_domain({unit_domain(), unit_domain()})), 10);
}

TEST(Domain, FirstMembers) {
  const auto nats = enumerate(nat_domain(), 3);
  EXPECT_EQ(nats, (std::vector<Tag>{Tag::nat(0), Tag::nat(1), Tag::nat(2)}));
  const auto sets = enumerate(finsubsets_domain(nat_domain()), 3);
  EXPECT_EQ(sets, (std::vector<Tag>{Tag::set({}), Tag::set({Tag::nat(0)}), Tag::set({Tag::nat(1)})}));
}

TEST(Domain, MembershipRejectsForeignTags) {
  EXPECT_FALSE(member(fin_domain(2), Tag::nat(2)));
  EXPECT_FALSE(member(unit_domain(), Tag::nat(0)));
  EXPECT_FALSE(member(sum_domain({unit_domain()}), Tag::inj(1, Tag::unit())));
}

TEST(Domain, RenderParseRoundTrip) {
  const std::vector<Domain> ds = {
      unit_domain(),
      nat_domain(),
      natpair_domain(),
      fin_domain(4),
      prod_domain({nat_domain(), fin_domain(2)}),
      sum_domain({unit_domain(), nat_domain()}),
      finsubsets_domain(nat_domain()),
      choicefn_domain(nat_domain(), nat_domain()),
  };
  for (const Domain& d : ds) EXPECT_TRUE(domain_equal(parse_domain(render_domain(d)), d)) << render_domain(d);
  EXPECT_EQ(render_domain(choicefn_domain(nat_domain(), nat_domain())), "(choicefn nat nat)");
  EXPECT_THROW((void)parse_domain("(fin)"), Error);
}

}  // namespace
}  // namespace inflogic
