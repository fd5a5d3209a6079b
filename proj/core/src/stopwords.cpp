#include "urlspread/corpus_stats.hpp"

namespace urlspread {

// Function words only. Deliberately excludes personal pronouns and modal
// verbs so that profile-description staples like "follow me" or "will"
// survive counting.
const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words = {
      "a",      "about",  "above",  "after",  "again",  "although", "am",
      "among",  "an",     "and",    "are",    "as",     "at",       "be",
      "because", "been",  "before", "being",  "below",  "between",  "but",
      "by",     "did",    "do",     "does",   "during", "further",  "had",
      "has",    "have",   "having", "here",   "if",     "in",       "into",
      "is",     "it",     "its",    "nor",    "of",     "off",      "on",
      "once",   "onto",   "or",     "over",   "per",    "s",        "such",
      "t",      "than",   "that",   "the",    "then",   "there",    "these",
      "this",   "those",  "through", "to",    "under",  "until",    "upon",
      "via",    "was",    "were",   "where",  "whether", "which",   "while",
      "with",   "within",
  };
  return words;
}

}  // namespace urlspread
