#include "spkl/manifest.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "spkl/error.hpp"

namespace spkl {

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
      throw InvariantError("sha256 initialisation failed");
    }
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t n) { EVP_DigestUpdate(ctx_, data, n); }

  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_, md.data(), &len);
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out += digits[md[i] >> 4];
      out += digits[md[i] & 0xf];
    }
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

const std::vector<std::string> kStageOrder{"synth", "ingest", "preprocess", "train", "analyze", "project", "plot"};

std::size_t stage_rank(const std::string& stage) {
  auto it = std::find(kStageOrder.begin(), kStageOrder.end(), stage);
  return static_cast<std::size_t>(it - kStageOrder.begin());
}

std::string join_pairs(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::string out;
  for (const auto& [name, digest] : pairs) out += (out.empty() ? "" : ",") + name + ":" + digest;
  return out;
}

std::vector<std::pair<std::string, std::string>> split_pairs(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto colon = item.rfind(':');
    if (colon == std::string::npos) throw DataError("manifest: malformed entry '" + item + "'");
    out.emplace_back(item.substr(0, colon), item.substr(colon + 1));
  }
  return out;
}

std::string field_value(const std::string& field, const std::string& key) {
  if (!field.starts_with(key + "=")) throw DataError("manifest: expected '" + key + "=' field");
  return field.substr(key.size() + 1);
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  Sha256 h;
  std::array<char, 1 << 16> buf;
  while (in.read(buf.data(), buf.size()) || in.gcount() > 0) h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  return h.hex();
}

std::string ManifestEntry::to_line() const {
  return stage + "\tconfig=" + config_digest + "\tinputs=" + join_pairs(inputs) + "\toutputs=" + join_pairs(outputs);
}

ManifestEntry ManifestEntry::parse(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream ss(line);
  for (std::string f; std::getline(ss, f, '\t');) fields.push_back(f);
  if (fields.size() != 4) throw DataError("manifest: expected 4 tab-separated fields");
  return ManifestEntry{fields[0], field_value(fields[1], "config"), split_pairs(field_value(fields[2], "inputs")),
                       split_pairs(field_value(fields[3], "outputs"))};
}

Manifest Manifest::load(const std::filesystem::path& dir) {
  Manifest m;
  std::ifstream in(dir / "manifest.tsv", std::ios::binary);
  if (!in) return m;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) m.record(ManifestEntry::parse(line));
  }
  return m;
}

void Manifest::record(ManifestEntry entry) {
  std::erase_if(entries_, [&](const ManifestEntry& e) { return e.stage == entry.stage; });
  entries_.push_back(std::move(entry));
  std::stable_sort(entries_.begin(), entries_.end(), [](const ManifestEntry& a, const ManifestEntry& b) {
    return stage_rank(a.stage) < stage_rank(b.stage);
  });
}

void Manifest::save(const std::filesystem::path& dir) const {
  std::ofstream out(dir / "manifest.tsv", std::ios::binary);
  if (!out) throw DataError("cannot write " + (dir / "manifest.tsv").string());
  for (const auto& e : entries_) out << e.to_line() << '\n';
}

const ManifestEntry* Manifest::find(const std::string& stage) const {
  for (const auto& e : entries_) {
    if (e.stage == stage) return &e;
  }
  return nullptr;
}

}  // namespace spkl
