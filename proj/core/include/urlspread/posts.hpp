#ifndef URLSPREAD_POSTS_HPP
#define URLSPREAD_POSTS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace urlspread {

// One social-media post as ingested from a newline-delimited JSON log.
// URLs are stored normalized (lowercase scheme and host, fragment stripped,
// query kept); hashtags are stored lowercase without the leading '#';
// mentions without the leading '@'.
struct PostRecord {
  std::string post_id;
  std::string community;
  std::string author;
  std::int64_t timestamp = 0;  // Unix seconds, > 0
  std::vector<std::string> urls;
  std::vector<std::string> hashtags;
  std::vector<std::string> mentions;
  std::string language;  // empty when unknown
  std::string client;    // empty when unknown
  std::optional<std::int64_t> author_followers;
  std::optional<std::int64_t> author_friends;
  std::optional<std::string> author_description;
  std::optional<std::int64_t> author_created;  // Unix seconds
};

struct ParseDiagnostic {
  std::size_t line = 0;  // 1-based
  std::string reason;
};

struct ParseResult {
  std::vector<PostRecord> posts;  // input order
  std::vector<ParseDiagnostic> diagnostics;
};

// Lowercases the scheme and host, strips the fragment, keeps path and query
// untouched. Idempotent. Shortener expansion is intentionally not attempted.
std::string normalize_url(std::string_view url);

// Drops one leading '#', lowercases ASCII letters.
std::string normalize_hashtag(std::string_view tag);

// Host of a normalized URL, without port and without a leading "www.".
// Empty string when no host can be located.
std::string url_host(std::string_view normalized_url);

// Parses newline-delimited JSON post records. Malformed lines (bad JSON,
// missing post_id/community/timestamp, wrong field types, non-positive
// timestamp) become diagnostics and are skipped; well-formed lines come back
// in input order. Blank lines are ignored.
ParseResult parse_posts(std::istream& in);

// Same, from a file path. Throws std::runtime_error when the file cannot be
// opened.
ParseResult parse_posts_file(const std::string& path);

}  // namespace urlspread

#endif
