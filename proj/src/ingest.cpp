#include "spkl/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "spkl/error.hpp"

namespace spkl {

std::optional<AudienceClass> parse_audience_class(std::string_view s) {
  if (s == "single_gender_A") return AudienceClass::SingleGenderA;
  if (s == "single_gender_B") return AudienceClass::SingleGenderB;
  if (s == "mixed") return AudienceClass::Mixed;
  return std::nullopt;
}

std::string_view to_string(AudienceClass c) {
  switch (c) {
    case AudienceClass::SingleGenderA: return "single_gender_A";
    case AudienceClass::SingleGenderB: return "single_gender_B";
    case AudienceClass::Mixed: return "mixed";
  }
  return "?";
}

VenueSpec::VenueSpec(std::map<std::string, AudienceClass> venues) : venues_(std::move(venues)) {}

void VenueSpec::validate() const {
  std::size_t mixed = 0, single = 0;
  for (const auto& [name, cls] : venues_) {
    (cls == AudienceClass::Mixed ? mixed : single)++;
  }
  std::vector<std::string> problems;
  if (mixed != 1) {
    problems.push_back("venues: expected exactly one mixed venue, found " + std::to_string(mixed));
  }
  if (single == 0) problems.push_back("venues: expected at least one single-gender venue");
  for (const auto& [name, cls] : venues_) {
    if (name.empty()) problems.push_back("venues: empty venue name");
  }
  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "\n") + p;
    throw ConfigError(msg);
  }
}

std::optional<AudienceClass> VenueSpec::classify(const std::string& venue) const {
  auto it = venues_.find(venue);
  if (it == venues_.end()) return std::nullopt;
  return it->second;
}

const std::string& VenueSpec::mixed_venue() const {
  for (const auto& [name, cls] : venues_) {
    if (cls == AudienceClass::Mixed) return name;
  }
  throw ConfigError("venues: no mixed venue configured");
}

std::optional<std::string> VenueSpec::venue_of(AudienceClass c) const {
  for (const auto& [name, cls] : venues_) {
    if (cls == c) return name;
  }
  return std::nullopt;
}

namespace {

bool has_whitespace(const std::string& s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::optional<RawComment> parse_record(const std::string& line) {
  auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;

  auto text_field = [&](const char* key) -> std::optional<std::string> {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) return std::nullopt;
    return it->get<std::string>();
  };

  RawComment c;
  auto id = text_field("id");
  auto author = text_field("author");
  auto venue = text_field("subreddit");
  auto body = text_field("body");
  if (!id || !author || !venue || !body) return std::nullopt;
  if (id->empty() || author->empty() || venue->empty()) return std::nullopt;
  // Speaker tokens embed the author name in whitespace-separated corpora.
  if (has_whitespace(*author)) return std::nullopt;
  c.id = std::move(*id);
  c.author = std::move(*author);
  c.venue = std::move(*venue);
  c.body = std::move(*body);

  // Dumps carry created_utc either as an integer or as a numeric string.
  auto ts = j.find("created_utc");
  if (ts == j.end()) return std::nullopt;
  if (ts->is_number_integer()) {
    c.created_utc = ts->get<std::int64_t>();
  } else if (ts->is_number_float()) {
    c.created_utc = static_cast<std::int64_t>(ts->get<double>());
  } else if (ts->is_string()) {
    const auto& s = ts->get_ref<const std::string&>();
    std::size_t used = 0;
    try {
      c.created_utc = std::stoll(s, &used);
    } catch (const std::exception&) {
      return std::nullopt;
    }
    if (used != s.size()) return std::nullopt;
  } else {
    return std::nullopt;
  }
  return c;
}

}  // namespace

LoadResult parse_comments(std::istream& in) {
  LoadResult result;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (auto c = parse_record(line)) {
      result.comments.push_back(std::move(*c));
    } else {
      ++result.skipped;
    }
  }
  return result;
}

LoadResult load_comments(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open comment dump: " + path.string());
  return parse_comments(in);
}

void write_comments(std::ostream& out, std::span<const RawComment> comments) {
  for (const auto& c : comments) {
    nlohmann::json j = {{"id", c.id},
                        {"author", c.author},
                        {"subreddit", c.venue},
                        {"body", c.body},
                        {"created_utc", c.created_utc}};
    out << j.dump() << '\n';
  }
}

void write_comments(const std::filesystem::path& path, std::span<const RawComment> comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write comment dump: " + path.string());
  write_comments(out, comments);
}

bool is_deletion_placeholder(const std::string& body) {
  return body == "[deleted]" || body == "[removed]";
}

namespace {

bool comment_order(const RawComment& a, const RawComment& b) {
  return std::tie(a.author, a.venue, a.id) < std::tie(b.author, b.venue, b.id);
}

}  // namespace

Cohort select_cohort(std::span<const RawComment> comments, const VenueSpec& venues,
                     const SelectOptions& options, SelectStats* stats) {
  venues.validate();
  SelectStats local;

  struct Seen {
    bool a = false, b = false;
    std::vector<const RawComment*> single, mixed;
  };
  std::map<std::string, Seen> by_author;

  for (const auto& c : comments) {
    if (c.author == options.bot_author) {
      ++local.bot_comments;
      continue;
    }
    if (is_deletion_placeholder(c.body)) {
      ++local.deleted_comments;
      continue;
    }
    auto cls = venues.classify(c.venue);
    if (!cls) {
      ++local.unknown_venue_comments;
      continue;
    }
    auto& seen = by_author[c.author];
    switch (*cls) {
      case AudienceClass::SingleGenderA:
        seen.a = true;
        seen.single.push_back(&c);
        break;
      case AudienceClass::SingleGenderB:
        seen.b = true;
        seen.single.push_back(&c);
        break;
      case AudienceClass::Mixed:
        seen.mixed.push_back(&c);
        break;
    }
  }

  Cohort cohort;
  for (auto& [author, seen] : by_author) {
    if (seen.a && seen.b) {
      ++local.authors_in_both_single;
      continue;
    }
    if (seen.single.empty() || seen.mixed.empty()) {
      ++local.authors_missing_context;
      continue;
    }
    CohortAuthor ca;
    ca.author = author;
    ca.group = seen.a ? Group::A : Group::B;
    for (const auto* c : seen.single) ca.single.push_back(*c);
    for (const auto* c : seen.mixed) ca.mixed.push_back(*c);
    std::sort(ca.single.begin(), ca.single.end(), comment_order);
    std::sort(ca.mixed.begin(), ca.mixed.end(), comment_order);
    cohort.authors.push_back(std::move(ca));
  }

  if (cohort.empty()) local.warnings.push_back("selected cohort is empty");
  if (stats) *stats = std::move(local);
  return cohort;
}

std::size_t Cohort::comment_count() const {
  std::size_t n = 0;
  for (const auto& a : authors) n += a.single.size() + a.mixed.size();
  return n;
}

std::vector<RawComment> Cohort::comments() const {
  std::vector<RawComment> out;
  out.reserve(comment_count());
  for (const auto& a : authors) {
    out.insert(out.end(), a.single.begin(), a.single.end());
    out.insert(out.end(), a.mixed.begin(), a.mixed.end());
  }
  std::sort(out.begin(), out.end(), comment_order);
  return out;
}

const CohortAuthor* Cohort::find(const std::string& author) const {
  auto it = std::lower_bound(authors.begin(), authors.end(), author,
                             [](const CohortAuthor& a, const std::string& name) {
                               return a.author < name;
                             });
  if (it == authors.end() || it->author != author) return nullptr;
  return &*it;
}

std::size_t CohortSummary::total_comments() const {
  std::size_t n = 0;
  for (const auto& [key, count] : comments) n += count;
  return n;
}

CohortSummary cohort_summary(const Cohort& cohort) {
  CohortSummary s;
  for (const auto& a : cohort.authors) {
    ++s.authors[static_cast<std::size_t>(a.group)];
    for (const auto* part : {&a.single, &a.mixed}) {
      for (const auto& c : *part) ++s.comments[{c.venue, a.group}];
    }
  }
  return s;
}

}  // namespace spkl
