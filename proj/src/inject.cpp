#include "spkl/inject.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "spkl/error.hpp"

namespace spkl {

std::string SpeakerToken::render() const {
  return std::string(kSpeakerPrefix) + author + "::" + std::string(to_string(context));
}

std::optional<SpeakerToken> SpeakerToken::parse(std::string_view token) {
  if (!is_speaker_token(token)) return std::nullopt;
  token.remove_prefix(kSpeakerPrefix.size());
  const auto sep = token.rfind("::");
  if (sep == std::string_view::npos || sep == 0) return std::nullopt;
  auto ctx = parse_context(token.substr(sep + 2));
  if (!ctx) return std::nullopt;
  return SpeakerToken{std::string(token.substr(0, sep)), *ctx};
}

TokenDoc inject_speaker(const TokenDoc& doc, Rng& rng, std::size_t* position) {
  if (doc.tokens.empty()) {
    throw DataError("cannot inject a speaker into empty document '" + doc.id + "'");
  }
  const std::size_t k = uniform_index(rng, doc.tokens.size() + 1);
  TokenDoc out = doc;
  out.tokens.insert(out.tokens.begin() + static_cast<std::ptrdiff_t>(k),
                    SpeakerToken{doc.author, doc.context}.render());
  if (position) *position = k;
  return out;
}

std::vector<TokenDoc> inject_corpus(std::vector<TokenDoc> docs, std::uint64_t seed) {
  std::sort(docs.begin(), docs.end(), [](const TokenDoc& a, const TokenDoc& b) {
    return std::tie(a.author, a.context, a.id) < std::tie(b.author, b.context, b.id);
  });
  for (auto& d : docs) {
    const std::string key = d.author + '\0' + std::string(to_string(d.context)) + '\0' + d.id;
    Rng rng(derive_seed(seed, key));
    d = inject_speaker(d, rng);
  }
  return docs;
}

TokenDoc strip_speaker(const TokenDoc& doc) {
  TokenDoc out = doc;
  std::erase_if(out.tokens, [](const std::string& t) { return is_speaker_token(t); });
  return out;
}

void write_corpus_text(std::ostream& out, std::span<const TokenDoc> docs) {
  for (const auto& d : docs) {
    for (std::size_t i = 0; i < d.tokens.size(); ++i) {
      if (i) out << ' ';
      out << d.tokens[i];
    }
    out << '\n';
  }
}

void write_corpus_text(const std::filesystem::path& path, std::span<const TokenDoc> docs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus: " + path.string());
  write_corpus_text(out, docs);
}

std::vector<std::vector<std::string>> read_corpus_text(std::istream& in) {
  std::vector<std::vector<std::string>> corpus;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::vector<std::string> doc;
    for (std::string tok; ss >> tok;) doc.push_back(std::move(tok));
    if (!doc.empty()) corpus.push_back(std::move(doc));
  }
  return corpus;
}

std::vector<std::vector<std::string>> read_corpus_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus: " + path.string());
  return read_corpus_text(in);
}

std::vector<SpeakerInfo> speakers_of(std::span<const TokenDoc> docs) {
  std::map<std::string, SpeakerInfo> by_token;
  for (const auto& d : docs) {
    const std::string token = SpeakerToken{d.author, d.context}.render();
    auto [it, inserted] = by_token.try_emplace(token, SpeakerInfo{token, d.author, d.group, d.context, 0});
    ++it->second.documents;
  }
  std::vector<SpeakerInfo> out;
  out.reserve(by_token.size());
  for (auto& [token, info] : by_token) out.push_back(std::move(info));
  return out;
}

void write_speakers(const std::filesystem::path& path, std::span<const SpeakerInfo> speakers) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write speaker table: " + path.string());
  out << "token\tauthor\tgroup\tcontext\tdocuments\n";
  for (const auto& s : speakers) {
    out << s.token << '\t' << s.author << '\t' << to_string(s.group) << '\t' << to_string(s.context)
        << '\t' << s.documents << '\n';
  }
}

std::vector<SpeakerInfo> read_speakers(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open speaker table: " + path.string());
  std::vector<SpeakerInfo> out;
  std::string line;
  std::getline(in, line);  // header
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ss(line);
    for (std::string f; std::getline(ss, f, '\t');) fields.push_back(f);
    auto group = fields.size() == 5 ? parse_group(fields[2]) : std::nullopt;
    auto ctx = fields.size() == 5 ? parse_context(fields[3]) : std::nullopt;
    if (!group || !ctx) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": malformed speaker row");
    }
    out.push_back(SpeakerInfo{fields[0], fields[1], *group, *ctx, std::stoul(fields[4])});
  }
  return out;
}

}  // namespace spkl
