#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "emodeng/tokenizer.hpp"
#include "emodeng/typography.hpp"
#include "support.hpp"

using namespace emodeng;

namespace {

std::vector<std::string> surfaces(const std::vector<Token>& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back(t.surface);
  return out;
}

std::string non_space(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

}  // namespace

TEST(Tokenizer, WordsAndPunctuation) {
  auto ts = tokenize("when Antipater, Perdiccas;");
  EXPECT_EQ(surfaces(ts), (std::vector<std::string>{"when", "Antipater", ",", "Perdiccas", ";"}));
  EXPECT_EQ(ts[0].kind, TokenKind::Word);
  EXPECT_EQ(ts[2].kind, TokenKind::Punct);
  EXPECT_FALSE(ts[0].space_before);
  EXPECT_TRUE(ts[1].space_before);
  EXPECT_FALSE(ts[2].space_before);
}

TEST(Tokenizer, HyphenJoinsWords) {
  auto ts = tokenize("countrey-men - and");
  EXPECT_EQ(surfaces(ts), (std::vector<std::string>{"countrey", "-", "men", "-", "and"}));
  EXPECT_EQ(ts[1].kind, TokenKind::Hyphen);
  EXPECT_EQ(ts[3].kind, TokenKind::Punct);
}

TEST(Tokenizer, ApostropheSuffixes) {
  auto ts = tokenize("establish'd the Bassa's o'clock tho' judg’d");
  EXPECT_EQ(surfaces(ts), (std::vector<std::string>{"establish", "'d", "the", "Bassa", "'s", "o'clock",
                                                    "tho", "'", "judg", "’d"}));
  EXPECT_EQ(ts[1].kind, TokenKind::Suffix);
  EXPECT_EQ(ts[7].kind, TokenKind::Suffix);
}

TEST(Tokenizer, Abbreviations) {
  TokenizerConfig c;
  c.abbreviations = {"etc.", "viz."};
  auto ts = tokenize("bread, viz. wine etc. Done.", c);
  EXPECT_EQ(surfaces(ts), (std::vector<std::string>{"bread", ",", "viz.", "wine", "etc.", "Done", "."}));
}

TEST(Tokenizer, NumbersAndForeignSpans) {
  auto ts = tokenize("in 1,678 ⟦el:τα τριμερα⟧ end");
  ASSERT_EQ(ts.size(), 4u);
  EXPECT_EQ(ts[1].kind, TokenKind::Number);
  EXPECT_EQ(ts[1].surface, "1,678");
  EXPECT_EQ(ts[2].kind, TokenKind::Foreign);
  EXPECT_EQ(ts[2].lang, "el");
  EXPECT_EQ(foreign_words(ts[2]), (std::vector<std::string>{"τα", "τριμερα"}));
}

TEST(Tokenizer, SpansMapThroughTypography) {
  std::string in = "the ſame vvay";
  auto n = normalize_chars(in);
  auto ts = tokenize(n.text, n.offsets);
  ASSERT_EQ(ts.size(), 3u);
  EXPECT_EQ(in.substr(ts[1].span.begin, ts[1].span.end - ts[1].span.begin), "ſame");
  EXPECT_EQ(in.substr(ts[2].span.begin, ts[2].span.end - ts[2].span.begin), "vvay");
  EXPECT_EQ(n.text.substr(ts[2].norm.begin, ts[2].norm.end - ts[2].norm.begin), "way");
}

TEST(Tokenizer, Empty) {
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize(" \n\t").empty());
}

TEST(TokenizerProperty, NeverDropsCharacters) {
  std::mt19937 rng(42);
  std::vector<std::string> texts{test::read_file(test::fixture("passage.txt")),
                                 test::read_file(test::fixture("figures.txt"))};
  for (int i = 0; i < 1000; ++i) texts.push_back(test::random_historical(rng));
  for (const auto& s : texts) {
    std::string joined;
    for (const auto& t : tokenize(s)) joined += t.surface;
    std::string a = non_space(s), b = non_space(joined);
    ASSERT_EQ(b, a) << s;
  }
}
