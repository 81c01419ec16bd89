#include <gtest/gtest.h>

#include <map>
#include <random>

#include "emodeng/pipeline.hpp"
#include "support.hpp"

using namespace emodeng;

namespace {

const Pipeline& pipe() { return test::shipped_pipeline(); }

std::map<std::string, std::string> provenance_by_surface(const TranscriptionResult& r) {
  std::map<std::string, std::string> out;
  for (const auto& t : r.tokens)
    if (!t.provenance.empty()) out[t.token.surface] = t.provenance;
  for (const auto& e : r.edits)
    if (e.rewrite) {
      std::string src;
      for (std::size_t i = e.begin; i < e.end; ++i)
        src += (i > e.begin ? r.tokens[i].gap : "") + r.tokens[i].token.surface;
      out[src] = e.rule_id;
    }
  return out;
}

}  // namespace

TEST(Pipeline, GoldenPassage) {
  auto r = pipe().transcribe(test::read_file(test::fixture("passage.txt")), "passage.txt");
  EXPECT_EQ(r.output, test::read_file(test::fixture("passage.modern.txt")));
  auto prov = provenance_by_surface(r);
  for (const char* w : {"kingdomes", "remaineth", "governours", "endevoureth", "vertue", "freedome"})
    EXPECT_EQ(prov[w], "morph") << w;
  for (const char* w : {"vassaled", "forain", "extention", "affectors", "wheresoever"})
    EXPECT_EQ(prov[w], "xvii") << w;
  EXPECT_EQ(prov["countrey-men"], "hyphen_join");
  EXPECT_EQ(prov["doe still remain"], "do_periphrasis");
}

TEST(Pipeline, FiguresGolden) {
  auto r = pipe().transcribe(test::read_file(test::fixture("figures.txt")));
  EXPECT_EQ(r.output, test::read_file(test::fixture("figures.modern.txt")));
}

TEST(Pipeline, TypographyFeedsLookup) {
  EXPECT_EQ(pipe().transcribe("vnder the ſame Iewes &c.").output, "under the same Jews etc.");
}

TEST(Pipeline, TierTranscriptions) {
  EXPECT_EQ(pipe().transcribe("penitentiary penitentiaries").output, "spiritual father spiritual fathers");
  EXPECT_EQ(pipe().transcribe("hee saith").output, "he says");
  EXPECT_EQ(pipe().transcribe("the Grand Signior").output, "the Sultan");
  EXPECT_EQ(pipe().transcribe("Egoumeno").output, "Father Abbot");
}

TEST(Pipeline, ForeignGlossesAreNotTranscribed) {
  auto r = pipe().transcribe("a ⟦el:kara congia⟧ here");
  EXPECT_EQ(r.output, "a ⟦el:kara congia⟧ here");
}

TEST(Pipeline, Empty) {
  auto r = pipe().transcribe("");
  EXPECT_EQ(r.output, "");
  EXPECT_TRUE(r.tokens.empty());
  EXPECT_EQ(r.report.corpus_size, 0u);
  EXPECT_EQ(r.report.to_json()["unknown_percent_of_distinct"], 0.0);
}

TEST(Pipeline, WhitespaceIsKept) {
  EXPECT_EQ(pipe().transcribe("  the\tvertue\n\n of  it \n").output, "  the\tvirtue\n\n of  it \n");
}

TEST(Pipeline, Deterministic) {
  std::string text = test::read_file(test::fixture("figures.txt"));
  auto a = pipe().transcribe(text, "d");
  auto b = pipe().transcribe(text, "d");
  EXPECT_EQ(a.output, b.output);
  std::string ja, jb;
  for (const auto& x : a.annotations) ja += to_json(x, "d").dump();
  for (const auto& x : b.annotations) jb += to_json(x, "d").dump();
  EXPECT_EQ(ja, jb);
}

TEST(Pipeline, AnnotationsCarrySpansAndAlternatives) {
  std::string text = "their countrey-men";
  auto r = pipe().transcribe(text, "doc");
  bool saw_lexical = false, saw_syntax = false;
  for (const auto& a : r.annotations) {
    auto j = to_json(a, "doc");
    EXPECT_EQ(j["doc"], "doc");
    EXPECT_LE(a.span.end, text.size());
    if (a.layer == Annotation::Layer::Lexical && a.text == "countrey") {
      saw_lexical = true;
      EXPECT_EQ(text.substr(a.span.begin, a.span.end - a.span.begin), "countrey");
      EXPECT_FALSE(a.analyses.empty());
      EXPECT_EQ(a.provenance, "morph");
    }
    if (a.layer == Annotation::Layer::Syntax) {
      saw_syntax = true;
      EXPECT_EQ(a.provenance, "hyphen_join");
      EXPECT_EQ(a.transcription, "countrymen");
      EXPECT_EQ(text.substr(a.span.begin, a.span.end - a.span.begin), "countrey-men");
    }
  }
  EXPECT_TRUE(saw_lexical);
  EXPECT_TRUE(saw_syntax);
}

TEST(Pipeline, UnknownWithoutAnalysisIsFlagged) {
  auto r = pipe().transcribe("the qzxvword");
  bool flagged = false;
  for (const auto& a : r.annotations)
    if (a.text == "qzxvword") flagged = a.note == "unknown" && a.analyses.empty();
  EXPECT_TRUE(flagged);
  EXPECT_EQ(r.output, "the qzxvword");
}

TEST(Pipeline, CandidatesWithKwicContexts) {
  auto r = pipe().transcribe(test::read_file(test::fixture("candidates.txt")), "candidates.txt");
  ASSERT_EQ(r.candidates.size(), 6u);
  std::set<std::string> lines;
  for (const auto& c : r.candidates) {
    lines.insert(serialize_entry(c.entry));
    ASSERT_EQ(c.contexts.size(), 1u);
    EXPECT_EQ(c.contexts[0].doc, "candidates.txt");
  }
  EXPECT_TRUE(lines.count("governours,governor,N+Nb=p+Distribution=Hum+EN=governor+XVII"));
  const auto& ctx = r.candidates[0].contexts[0];
  EXPECT_EQ(ctx.keyword, "encreasing");
  EXPECT_EQ(ctx.left, "The");
  EXPECT_EQ(ctx.right, "of their governours was not");
  EXPECT_EQ(ctx.span, (Span{4, 14}));
}

TEST(Pipeline, RepeatedSurfaceMergesContexts) {
  auto r = pipe().transcribe("the vertue of vertue");
  ASSERT_FALSE(r.candidates.empty());
  EXPECT_EQ(r.candidates[0].contexts.size(), 2u);
}

TEST(Pipeline, DataVersions) {
  auto v = pipe().data_versions();
  EXPECT_EQ(v["xvii.dic"], "1");
  EXPECT_EQ(v["syntax.rules"], "1");
  EXPECT_FALSE(v["modern.dic"].empty());
}

TEST(Pipeline, WithLexiconSwapsSnapshot) {
  LexEntry e = parse_entry_line("qzxvword,thing,N+Nb=s+EN=thing+XVII");
  e.tier = "user";
  Pipeline p = pipe().with_lexicon(pipe().lexicon().add_entry("user", e));
  EXPECT_EQ(p.transcribe("the qzxvword").output, "the thing");
  EXPECT_EQ(pipe().transcribe("the qzxvword").output, "the qzxvword");
  EXPECT_EQ(p.transcribe("the qzxvword").report.unknown_distinct(), 0u);
}

TEST(Stats, PassageUnknownsBeforeRules) {
  auto r = pipe().transcribe(test::read_file(test::fixture("passage.txt")));
  for (const char* w : {"kingdomes", "remaineth", "forain", "governours", "endevoureth", "vertue",
                        "affectors", "freedome", "extention", "vassaled", "countrey"})
    EXPECT_TRUE(r.report.unknown.count(w)) << w;
  EXPECT_GE(r.report.unknown_occurrences(), r.report.unknown_distinct());
}

TEST(Stats, HandCountedFixture) {
  auto r = pipe().transcribe(test::read_file(test::fixture("stats200.txt")), "stats200.txt");
  auto oracle = nlohmann::json::parse(test::read_file(test::fixture("stats200.oracle.json")));
  const Report& rep = r.report;
  EXPECT_EQ(rep.corpus_size, oracle["corpus_size"].get<std::size_t>());
  EXPECT_EQ(rep.distinct_words(), oracle["distinct_words"].get<std::size_t>());
  EXPECT_EQ(rep.unknown_distinct(), oracle["unknown_distinct"].get<std::size_t>());
  EXPECT_EQ(rep.unknown_occurrences(), oracle["unknown_occurrences"].get<std::size_t>());
  auto counts = rep.category_counts();
  auto pct = rep.category_percentages();
  for (UnknownCategory c : {UnknownCategory::Foreign, UnknownCategory::ProperNoun,
                            UnknownCategory::Abbreviation, UnknownCategory::Xvii}) {
    std::size_t want = oracle["categories"][std::string(to_string(c))].get<std::size_t>();
    EXPECT_EQ(counts[c], want) << to_string(c);
    EXPECT_DOUBLE_EQ(pct[c], 100.0 * static_cast<double>(want) / 13.0) << to_string(c);
  }
  ASSERT_EQ(rep.unknown.size(), oracle["unknown_words"].size());
  for (const auto& [w, v] : oracle["unknown_words"].items()) {
    ASSERT_TRUE(rep.unknown.count(w)) << w;
    EXPECT_EQ(to_string(rep.unknown.at(w).category), v[0].get<std::string>()) << w;
    EXPECT_EQ(rep.unknown.at(w).occurrences, v[1].get<std::size_t>()) << w;
  }
}

TEST(Stats, ClassifyUnknown) {
  const Lexicon& lex = pipe().lexicon();
  auto tok = [](std::string s, TokenKind k = TokenKind::Word) {
    Token t;
    t.surface = std::move(s);
    t.kind = k;
    return t;
  };
  EXPECT_EQ(classify_unknown(tok("⟦el:x⟧", TokenKind::Foreign), lex, false), UnknownCategory::Foreign);
  EXPECT_EQ(classify_unknown(tok("antidoron"), lex, false), UnknownCategory::Foreign);
  EXPECT_EQ(classify_unknown(tok("Maina"), lex, true), UnknownCategory::ProperNoun);
  EXPECT_EQ(classify_unknown(tok("Rycaut"), lex, false), UnknownCategory::ProperNoun);
  EXPECT_EQ(classify_unknown(tok("Vertue"), lex, true), UnknownCategory::Xvii);
  EXPECT_EQ(classify_unknown(tok("ibid."), lex, false), UnknownCategory::Abbreviation);
  EXPECT_EQ(classify_unknown(tok("vertue"), lex, false), UnknownCategory::Xvii);
}

TEST(StatsProperty, MergeIsAssociative) {
  std::vector<Report> docs;
  for (const char* f : {"passage.txt", "figures.txt", "stats200.txt", "candidates.txt", "empty.txt"})
    docs.push_back(pipe().transcribe(test::read_file(test::fixture(f)), f).report);
  Report left = docs[0];
  for (std::size_t i = 1; i < docs.size(); ++i) left.merge(docs[i]);
  Report right = docs.back();
  for (std::size_t i = docs.size() - 1; i-- > 0;) {
    Report r = docs[i];
    r.merge(right);
    right = r;
  }
  Report grouped = report_stats({docs[0], docs[1]});
  grouped.merge(report_stats({docs[2], docs[3], docs[4]}));
  for (const Report* r : {&right, &grouped}) {
    EXPECT_EQ(r->corpus_size, left.corpus_size);
    EXPECT_EQ(r->words, left.words);
    EXPECT_EQ(r->unknown_distinct(), left.unknown_distinct());
    EXPECT_EQ(r->unknown_occurrences(), left.unknown_occurrences());
    EXPECT_EQ(r->category_counts(), left.category_counts());
  }
  EXPECT_EQ(grouped.documents, left.documents);
}

TEST(StatsProperty, AcceptingNeverRaisesUnknowns) {
  std::string text = test::read_file(test::fixture("passage.txt"));
  auto before = pipe().transcribe(text);
  Pipeline p = pipe();
  std::size_t last = before.report.unknown_distinct();
  for (const auto& c : before.candidates) {
    p = p.with_lexicon(p.lexicon().add_entry("user", c.entry));
    std::size_t now = p.transcribe(text).report.unknown_distinct();
    EXPECT_LE(now, last);
    last = now;
  }
  EXPECT_LT(last, before.report.unknown_distinct());
}
