#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "emodeng/annotation.hpp"
#include "emodeng/candidate.hpp"
#include "emodeng/config.hpp"
#include "emodeng/lexicon.hpp"
#include "emodeng/morph_engine.hpp"
#include "emodeng/syntax_engine.hpp"
#include "emodeng/tokenizer.hpp"

namespace emodeng {

enum class UnknownCategory { Foreign, ProperNoun, Abbreviation, Xvii };
std::string_view to_string(UnknownCategory c);

// One standoff record: a token range with its ranked analyses.
struct Annotation {
  enum class Layer { Lexical, Syntax };
  Layer layer = Layer::Lexical;
  std::size_t token_begin = 0;
  std::size_t token_end = 0;
  Span span;  // original-text bytes
  std::string text;  // normalized text of the range
  std::vector<Reading> analyses;
  // Set iff a rewrite applies to the range.
  std::optional<std::string> transcription;
  std::string provenance;  // tier, "morph" or rule id behind the transcription
  std::vector<Trait> traits;
  std::string note;
};

nlohmann::json to_json(const Annotation& a, const std::string& doc);

struct UnknownWord {
  std::size_t occurrences = 0;
  UnknownCategory category = UnknownCategory::Xvii;
};

// Word-token statistics.  A word is unknown when neither the modern nor
// the user tier has it.  Keys are case-folded surfaces.
struct Report {
  std::vector<std::string> documents;
  std::size_t corpus_size = 0;
  std::map<std::string, std::size_t> words;
  std::map<std::string, UnknownWord> unknown;

  std::size_t distinct_words() const { return words.size(); }
  std::size_t unknown_distinct() const { return unknown.size(); }
  std::size_t unknown_occurrences() const;
  std::map<UnknownCategory, std::size_t> category_counts() const;
  // Share of unknown-distinct words per category; empty when none.
  std::map<UnknownCategory, double> category_percentages() const;

  // Associative and commutative up to document order.
  void merge(const Report& other);
  nlohmann::json to_json() const;
};

Report report_stats(const std::vector<Report>& documents);

struct TranscriptionResult {
  std::string doc;
  std::string normalized;  // after typography
  std::string output;
  std::vector<AnnotatedToken> tokens;
  std::vector<RewriteEdit> edits;
  std::vector<Annotation> annotations;
  std::vector<CandidateEntry> candidates;
  Report report;
};

// Loaded data of one pipeline configuration.  Immutable; with_lexicon
// swaps the lexicon snapshot after an accepted candidate.
class Pipeline {
 public:
  // Throws ConfigError or ParseError before any processing.
  explicit Pipeline(const PipelineConfig& config);
  Pipeline(const PipelineConfig& config, Lexicon lexicon);

  const PipelineConfig& config() const { return config_; }
  const Lexicon& lexicon() const { return *lexicon_; }
  std::shared_ptr<const Lexicon> lexicon_ptr() const { return lexicon_; }
  const MorphEngine& morph() const { return *morph_; }
  const SyntaxEngine& syntax() const { return *syntax_; }
  const TokenizerConfig& tokenizer() const { return tokenizer_; }
  Pipeline with_lexicon(Lexicon lexicon) const;

  TranscriptionResult transcribe(std::string_view text, const std::string& doc = {}) const;

  // Typography, tokenization and tiered lookup with morph candidates.
  std::vector<AnnotatedToken> annotate_tokens(const NormalizedText& norm) const;
  // Syntax rules over an annotated stream.
  std::vector<RewriteEdit> rewrite_edits(const std::vector<AnnotatedToken>& stream) const;

  // Versions of every loaded data file, keyed by file name.
  std::map<std::string, std::string> data_versions() const;

 private:
  PipelineConfig config_;
  std::shared_ptr<const Lexicon> lexicon_;
  std::shared_ptr<const MorphEngine> morph_;
  std::shared_ptr<const SyntaxEngine> syntax_;
  TokenizerConfig tokenizer_;
  std::map<std::string, std::string> versions_;
};

// Output text: gaps plus transcriptions, with rewrite edits spliced in.
// `tail` is the text after the last token.
std::string assemble(const std::vector<AnnotatedToken>& stream,
                     const std::vector<RewriteEdit>& edits, std::string_view tail = {});

// Modern form implied by a dictionary analysis of `surface`.
std::string dictionary_transcription(const Analysis& a, std::string_view surface,
                                     const Lexicon& lex);

// Category of an unknown word token.  `sentence_initial` exempts a
// capital from the proper-noun test.
UnknownCategory classify_unknown(const Token& token, const Lexicon& lex, bool sentence_initial);

// Statistics of one tokenized document.
Report document_report(const std::vector<Token>& tokens, const Lexicon& lex,
                       const std::string& doc = {});

// Abbreviations file: one per line, `#` comments.
std::vector<std::string> load_abbreviations(const std::filesystem::path& path);

}  // namespace emodeng
