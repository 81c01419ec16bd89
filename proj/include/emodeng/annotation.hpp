#pragma once

#include <string>
#include <vector>

#include "emodeng/features.hpp"
#include "emodeng/tokenizer.hpp"

namespace emodeng {

// One reading of a token: a dictionary entry or a morph candidate.
struct Reading {
  std::string lemma;
  FeatureSet features;
  std::string provenance;  // tier name, "morph" or a syntax rule id
  std::vector<std::string> trace;
  std::string modern_form;  // transcription implied by this reading
};

struct AnnotatedToken {
  Token token;
  std::string gap;  // normalized text between the previous token and this one
  std::vector<Reading> readings;
  bool known = false;  // some tier has the surface
  std::string tier;    // that tier
  std::string transcription;
  // Where a changed transcription came from; empty when unchanged.
  std::string provenance;
};

}  // namespace emodeng
