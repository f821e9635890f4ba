#include "spkl/preprocess.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "bundled_data.hpp"
#include "spkl/error.hpp"

namespace spkl {

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c >= 0x80;
}

bool starts_with_at(std::string_view s, std::size_t pos, std::string_view prefix) {
  return s.substr(pos, prefix.size()) == prefix;
}

bool is_space(unsigned char c) { return c == ' ' || (c >= '\t' && c <= '\r'); }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    f(line);
    start = end + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view body) {
  const std::string text = ascii_lower(body);
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };

  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    // A URL starts at a token boundary and runs to the next whitespace.
    if (current.empty() && (starts_with_at(text, i, "http://") ||
                            starts_with_at(text, i, "https://") || starts_with_at(text, i, "www."))) {
      while (i < text.size() && !is_space(static_cast<unsigned char>(text[i]))) ++i;
      continue;
    }
    if (c == '\'') {
      ++i;
      continue;
    }
    // U+2018 / U+2019 (E2 80 98 / E2 80 99)
    if (c == 0xE2 && i + 2 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0x80 &&
        (static_cast<unsigned char>(text[i + 2]) == 0x98 ||
         static_cast<unsigned char>(text[i + 2]) == 0x99)) {
      i += 3;
      continue;
    }
    if (is_word_byte(c)) {
      current.push_back(static_cast<char>(c));
    } else {
      flush();
    }
    ++i;
  }
  flush();
  return tokens;
}

// --- stop words -------------------------------------------------------------

StopList StopList::bundled() {
  StopList s = from_text(detail::bundled_stopwords_en());
  s.merge(from_text(detail::bundled_stopwords_custom()));
  return s;
}

StopList StopList::from_file(const std::filesystem::path& path) { return from_text(read_file(path)); }

StopList StopList::from_text(std::string_view text) {
  StopList s;
  for_each_line(text, [&](std::string_view line) {
    line = trim(line);
    if (line.empty() || line.front() == '#') return;
    s.add(line);
  });
  return s;
}

void StopList::add(std::string_view word) { words_.insert(ascii_lower(word)); }

void StopList::merge(const StopList& other) { words_.insert(other.words_.begin(), other.words_.end()); }

std::vector<std::string> StopList::entries() const {
  std::vector<std::string> out(words_.begin(), words_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> remove_stopwords(std::span<const std::string> tokens, const StopList& stoplist) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!stoplist.contains(t)) out.push_back(t);
  }
  return out;
}

// --- phrases ----------------------------------------------------------------

std::string PhraseModel::pair_key(std::string_view a, std::string_view b) {
  std::string key;
  key.reserve(a.size() + b.size() + 1);
  key.append(a);
  key.push_back('\x1f');
  key.append(b);
  return key;
}

std::uint64_t PhraseModel::unigram_count(const std::string& w) const {
  auto it = unigrams_.find(w);
  return it == unigrams_.end() ? 0 : it->second;
}

std::uint64_t PhraseModel::bigram_count(const std::string& a, const std::string& b) const {
  auto it = bigrams_.find(pair_key(a, b));
  return it == bigrams_.end() ? 0 : it->second;
}

double PhraseModel::score(const std::string& a, const std::string& b) const {
  const auto ca = unigram_count(a), cb = unigram_count(b), cab = bigram_count(a, b);
  if (ca == 0 || cb == 0 || cab == 0) return 0.0;
  return (static_cast<double>(cab) - static_cast<double>(min_count_)) *
         static_cast<double>(unigrams_.size()) / (static_cast<double>(ca) * static_cast<double>(cb));
}

bool PhraseModel::merges(const std::string& a, const std::string& b) const {
  return phrases_.contains(pair_key(a, b));
}

std::vector<std::string> PhraseModel::apply(std::span<const std::string> tokens) const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (i + 1 < tokens.size() && merges(tokens[i], tokens[i + 1])) {
      out.push_back(tokens[i] + kPhraseJoiner + tokens[i + 1]);
      i += 2;
    } else {
      out.push_back(tokens[i]);
      ++i;
    }
  }
  return out;
}

PhraseModel fit_phrases(std::span<const std::vector<std::string>> corpus, std::size_t min_count,
                        double threshold) {
  if (min_count < 1) throw ConfigError("phrase min_count must be >= 1");
  PhraseModel m;
  m.min_count_ = min_count;
  m.threshold_ = threshold;
  for (const auto& doc : corpus) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      ++m.unigrams_[doc[i]];
      if (i + 1 < doc.size()) ++m.bigrams_[PhraseModel::pair_key(doc[i], doc[i + 1])];
    }
  }
  for (const auto& [key, count] : m.bigrams_) {
    const auto sep = key.find('\x1f');
    const std::string a = key.substr(0, sep), b = key.substr(sep + 1);
    if (m.score(a, b) > threshold) m.phrases_.insert(key);
  }
  return m;
}

// --- lemmatizer -------------------------------------------------------------

namespace {

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y'; }

bool has_vowel(std::string_view s) { return std::any_of(s.begin(), s.end(), is_vowel); }

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// "stopp" -> "stop", "runn" -> "run"; l, s and z doublings are usually part of the stem.
std::string undouble(std::string stem) {
  const std::size_t n = stem.size();
  if (n >= 2 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) && stem[n - 1] != 'l' &&
      stem[n - 1] != 's' && stem[n - 1] != 'z') {
    stem.pop_back();
  }
  return stem;
}

bool is_alpha_word(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

}  // namespace

RuleLemmatizer::RuleLemmatizer(std::unordered_map<std::string, std::string> exceptions)
    : exceptions_(std::move(exceptions)) {}

RuleLemmatizer RuleLemmatizer::bundled() { return from_text(detail::bundled_lemma_exceptions()); }

RuleLemmatizer RuleLemmatizer::from_file(const std::filesystem::path& path) {
  return from_text(read_file(path));
}

RuleLemmatizer RuleLemmatizer::from_text(std::string_view text) {
  std::unordered_map<std::string, std::string> table;
  std::size_t line_no = 0;
  for_each_line(text, [&](std::string_view line) {
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') return;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError("lemma exception table line " + std::to_string(line_no) +
                      ": expected 'surface<TAB>lemma'");
    }
    const auto surface = trim(line.substr(0, tab));
    const auto lemma = trim(line.substr(tab + 1));
    if (surface.empty() || lemma.empty()) {
      throw DataError("lemma exception table line " + std::to_string(line_no) + ": empty field");
    }
    table[ascii_lower(surface)] = ascii_lower(lemma);
  });
  return RuleLemmatizer(std::move(table));
}

std::string RuleLemmatizer::step(const std::string& w) const {
  if (auto it = exceptions_.find(w); it != exceptions_.end()) return it->second;
  // Phrases, numbers and non-ASCII words pass through untouched.
  if (!is_alpha_word(w)) return w;

  const std::size_t n = w.size();
  if (ends_with(w, "sses")) return w.substr(0, n - 2);
  if (ends_with(w, "ies") && n > 4) return w.substr(0, n - 3) + "y";
  if (ends_with(w, "s") && n > 3 && !ends_with(w, "ss") && !ends_with(w, "us") && !ends_with(w, "is")) {
    return w.substr(0, n - 1);
  }
  if (ends_with(w, "ing") && n >= 6) {
    const std::string stem = w.substr(0, n - 3);
    if (has_vowel(stem)) return undouble(stem);
  }
  if (ends_with(w, "ed") && n >= 5 && !ends_with(w, "eed")) {
    const std::string stem = w.substr(0, n - 2);
    if (has_vowel(stem)) return undouble(stem);
  }
  return w;
}

std::string RuleLemmatizer::lemma(std::string_view token) const {
  std::string current(token);
  // Every rule shortens the word, so this terminates; the bound guards cyclic
  // exception tables.
  for (int i = 0; i < 32; ++i) {
    std::string next = step(current);
    if (next == current || next.empty()) break;
    current = std::move(next);
  }
  return current;
}

std::vector<std::string> lemmatize(std::span<const std::string> tokens, const Lemmatizer& lemmatizer) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(lemmatizer.lemma(t));
  return out;
}

std::vector<std::string> lemmatize(std::span<const std::string> tokens) {
  static const RuleLemmatizer bundled = RuleLemmatizer::bundled();
  return lemmatize(tokens, bundled);
}

// --- pipeline ---------------------------------------------------------------

std::vector<TokenDoc> clean_corpus(const Cohort& cohort, const PreprocessOptions& options,
                                   CleanStats* stats) {
  CleanStats local;
  std::vector<TokenDoc> docs;
  for (const auto& author : cohort.authors) {
    for (Context ctx : kContexts) {
      for (const auto& c : author.comments(ctx)) {
        docs.push_back(TokenDoc{c.id, author.author, author.group, ctx, tokenize(c.body)});
      }
    }
  }
  local.input_docs = docs.size();
  std::erase_if(docs, [&](const TokenDoc& d) {
    if (d.tokens.empty()) ++local.empty_after_tokenize;
    return d.tokens.empty();
  });

  std::vector<std::vector<std::string>> token_lists;
  token_lists.reserve(docs.size());
  for (const auto& d : docs) token_lists.push_back(d.tokens);
  const PhraseModel phrases = fit_phrases(token_lists, options.phrase_min_count, options.phrase_threshold);
  local.phrases = phrases.phrase_count();

  for (auto& d : docs) {
    d.tokens = remove_stopwords(phrases.apply(d.tokens), options.stoplist);
    d.tokens = options.lemmatizer ? lemmatize(d.tokens, *options.lemmatizer) : lemmatize(d.tokens);
  }
  std::erase_if(docs, [&](const TokenDoc& d) {
    if (d.tokens.empty()) ++local.empty_after_stopwords;
    return d.tokens.empty();
  });

  local.output_docs = docs.size();
  if (stats) *stats = local;
  return docs;
}

}  // namespace spkl
