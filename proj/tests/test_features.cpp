#include <gtest/gtest.h>

#include "emodeng/features.hpp"

using namespace emodeng;

TEST(Features, PosCodes) {
  for (Pos p : {Pos::N, Pos::A, Pos::V, Pos::PRO, Pos::ADV, Pos::PREP, Pos::CONJ, Pos::DET})
    EXPECT_EQ(parse_pos(to_string(p)), p);
  EXPECT_FALSE(parse_pos("Q"));
  EXPECT_FALSE(parse_pos(""));
}

TEST(Features, SetReplacesInPlace) {
  FeatureSet f(Pos::V);
  f.set("Tense", "PT");
  f.set("Pers", "1");
  f.set("Tense", "PP");
  EXPECT_EQ(f.serialize(), "V+Tense=PP+Pers=1");
  f.erase("Tense");
  EXPECT_EQ(f.serialize(), "V+Pers=1");
}

TEST(Features, ValueAndHas) {
  FeatureSet f(Pos::N);
  f.set("XVII");
  f.set("EN", "spiritual father");
  EXPECT_TRUE(f.has("XVII"));
  EXPECT_FALSE(f.value("XVII"));
  EXPECT_EQ(f.value("EN"), "spiritual father");
  EXPECT_TRUE(f.has_value("EN", "spiritual father"));
  EXPECT_FALSE(f.has_value("EN", "penitent"));
  EXPECT_EQ(f.serialize(), "N+XVII+EN=\"spiritual father\"");
}

TEST(Features, EqualityIgnoresOrder) {
  FeatureSet a(Pos::N), b(Pos::N);
  a.set("Nb", "s");
  a.set("Hum");
  b.set("Hum");
  b.set("Nb", "s");
  EXPECT_EQ(a, b);
  b.set("Nb", "p");
  EXPECT_FALSE(a == b);
  EXPECT_FALSE(FeatureSet(Pos::N) == FeatureSet(Pos::A));
}

TEST(Features, MergeKeepsPos) {
  FeatureSet f(Pos::V);
  f.merge({{"Tense", "PR"}, {"Pers", "3"}, {"Nb", "s"}});
  EXPECT_EQ(f.pos(), Pos::V);
  EXPECT_EQ(f.serialize(), "V+Tense=PR+Pers=3+Nb=s");
}

TEST(Features, Quoting) {
  EXPECT_TRUE(needs_quotes("spiritual father"));
  EXPECT_TRUE(needs_quotes("a+b"));
  EXPECT_FALSE(needs_quotes("pasha"));
}
