#include "urlspread/posts.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <stdexcept>

#include <json.hpp>

namespace urlspread {

namespace {

using nlohmann::json;

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = ascii_lower(c);
  return out;
}

// Field extraction helpers. Each throws std::invalid_argument with the
// offending field name; parse_posts turns that into a line diagnostic.
std::string require_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw std::invalid_argument(std::string("missing key: ") + key);
  if (!it->is_string()) throw std::invalid_argument(std::string(key) + " must be a string");
  return it->get<std::string>();
}

std::int64_t require_int(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw std::invalid_argument(std::string("missing key: ") + key);
  if (!it->is_number_integer()) throw std::invalid_argument(std::string(key) + " must be an integer");
  return it->get<std::int64_t>();
}

std::string optional_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) throw std::invalid_argument(std::string(key) + " must be a string");
  return it->get<std::string>();
}

std::optional<std::int64_t> optional_nonneg_int(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer())
    throw std::invalid_argument(std::string(key) + " must be an integer");
  auto v = it->get<std::int64_t>();
  if (v < 0) throw std::invalid_argument(std::string(key) + " must be nonnegative");
  return v;
}

std::vector<std::string> optional_string_list(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_array()) throw std::invalid_argument(std::string(key) + " must be an array");
  std::vector<std::string> out;
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_string())
      throw std::invalid_argument(std::string(key) + " must contain only strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

PostRecord record_from_json(const json& obj) {
  PostRecord rec;
  rec.post_id = require_string(obj, "post_id");
  rec.community = require_string(obj, "community");
  if (rec.community.empty()) throw std::invalid_argument("community must be non-empty");
  rec.timestamp = require_int(obj, "timestamp");
  if (rec.timestamp <= 0) throw std::invalid_argument("timestamp must be positive");
  rec.author = optional_string(obj, "author");

  for (auto& u : optional_string_list(obj, "urls")) rec.urls.push_back(normalize_url(u));
  for (auto& h : optional_string_list(obj, "hashtags"))
    rec.hashtags.push_back(normalize_hashtag(h));
  for (auto& m : optional_string_list(obj, "mentions")) {
    if (!m.empty() && m.front() == '@') m.erase(0, 1);
    rec.mentions.push_back(std::move(m));
  }

  rec.language = optional_string(obj, "language");
  rec.client = optional_string(obj, "client");
  rec.author_followers = optional_nonneg_int(obj, "author_followers");
  rec.author_friends = optional_nonneg_int(obj, "author_friends");
  rec.author_created = optional_nonneg_int(obj, "author_created");
  if (auto it = obj.find("author_description"); it != obj.end() && !it->is_null()) {
    if (!it->is_string())
      throw std::invalid_argument("author_description must be a string");
    rec.author_description = it->get<std::string>();
  }
  return rec;
}

}  // namespace

std::string normalize_url(std::string_view url) {
  // Strip fragment first; it never survives normalization.
  if (auto hash = url.find('#'); hash != std::string_view::npos) url = url.substr(0, hash);

  std::string out(url);
  std::size_t host_begin = 0;
  if (auto sep = out.find("://"); sep != std::string::npos) {
    for (std::size_t i = 0; i < sep; ++i) out[i] = ascii_lower(out[i]);
    host_begin = sep + 3;
  }
  std::size_t host_end = out.find_first_of("/?", host_begin);
  if (host_end == std::string::npos) host_end = out.size();
  for (std::size_t i = host_begin; i < host_end; ++i) out[i] = ascii_lower(out[i]);
  return out;
}

std::string normalize_hashtag(std::string_view tag) {
  if (!tag.empty() && tag.front() == '#') tag.remove_prefix(1);
  return lower_ascii(tag);
}

std::string url_host(std::string_view normalized_url) {
  std::size_t begin = 0;
  if (auto sep = normalized_url.find("://"); sep != std::string_view::npos) begin = sep + 3;
  std::size_t end = normalized_url.find_first_of("/?", begin);
  if (end == std::string_view::npos) end = normalized_url.size();
  std::string_view host = normalized_url.substr(begin, end - begin);
  if (auto colon = host.rfind(':'); colon != std::string_view::npos) host = host.substr(0, colon);
  if (host.size() > 4 && host.substr(0, 4) == "www.") host.remove_prefix(4);
  return std::string(host);
}

ParseResult parse_posts(std::istream& in) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded()) {
      result.diagnostics.push_back({line_no, "malformed JSON"});
      continue;
    }
    if (!obj.is_object()) {
      result.diagnostics.push_back({line_no, "not a JSON object"});
      continue;
    }
    try {
      result.posts.push_back(record_from_json(obj));
    } catch (const std::invalid_argument& e) {
      result.diagnostics.push_back({line_no, e.what()});
    }
  }
  if (in.bad()) throw std::runtime_error("unreadable post stream");
  return result;
}

ParseResult parse_posts_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open post log: " + path);
  return parse_posts(in);
}

}  // namespace urlspread
