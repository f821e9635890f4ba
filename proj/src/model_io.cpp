#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>

#include "spkl/embedding.hpp"
#include "spkl/error.hpp"

static_assert(std::endian::native == std::endian::little, "model I/O assumes a little-endian host");

namespace spkl {

namespace {

constexpr char kMagic[4] = {'S', 'P', 'K', 'L'};

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in, const char* what) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw DataError(std::string("model file truncated while reading ") + what);
  }
  return value;
}

void read_floats(std::istream& in, float* data, std::size_t n, const char* what) {
  if (!in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n * sizeof(float)))) {
    throw DataError(std::string("model file truncated while reading ") + what);
  }
}

}  // namespace

void save_model(const EmbeddingModel& model, std::ostream& out) {
  const auto& v = model.vocab;
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kModelFormatVersion);
  put<std::uint64_t>(out, v.size());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(model.input.cols()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& token = v.token(static_cast<TokenId>(i));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(token.size()));
    out.write(token.data(), static_cast<std::streamsize>(token.size()));
    put<std::uint64_t>(out, v.count(static_cast<TokenId>(i)));
  }
  out.write(reinterpret_cast<const char*>(model.input.data()),
            static_cast<std::streamsize>(model.input.size() * sizeof(float)));
  out.write(reinterpret_cast<const char*>(model.output.data()),
            static_cast<std::streamsize>(model.output.size() * sizeof(float)));

  // Training metadata trailer.
  const auto& c = model.config;
  put<std::int32_t>(out, c.window);
  put<std::int32_t>(out, c.negatives);
  put<std::int32_t>(out, c.epochs);
  put<double>(out, c.lr_initial);
  put<double>(out, c.lr_final);
  put<std::uint64_t>(out, c.seed);
  put<std::int32_t>(out, c.workers);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(model.epoch_losses.size()));
  for (double l : model.epoch_losses) put<double>(out, l);
  if (!out) throw DataError("failed writing model");
}

void save_model(const EmbeddingModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model: " + path.string());
  save_model(model, out);
}

EmbeddingModel load_model(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4)) throw DataError("model file truncated while reading magic");
  if (std::memcmp(magic, kMagic, 4) != 0) throw DataError("not a model file (bad magic)");
  const auto version = get<std::uint32_t>(in, "version");
  if (version != kModelFormatVersion) {
    throw DataError("unsupported model format version " + std::to_string(version) + " (expected " +
                    std::to_string(kModelFormatVersion) + ")");
  }
  const auto vocab_size = get<std::uint64_t>(in, "vocabulary size");
  const auto dim = get<std::uint32_t>(in, "dimension");
  if (dim == 0) throw DataError("model dimension is zero");

  std::vector<std::pair<std::string, std::uint64_t>> entries;
  for (std::uint64_t i = 0; i < vocab_size; ++i) {
    const auto len = get<std::uint32_t>(in, "token length");
    std::string token(len, '\0');
    if (!in.read(token.data(), len)) throw DataError("model file truncated while reading token");
    const auto count = get<std::uint64_t>(in, "token count");
    entries.emplace_back(std::move(token), count);
  }

  EmbeddingModel model;
  // from_counts re-sorts; the stored order is already canonical, which is checked below.
  model.vocab = Vocabulary::from_counts(entries);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (model.vocab.token(static_cast<TokenId>(i)) != entries[i].first) {
      throw DataError("model vocabulary is not in canonical order");
    }
  }
  const auto rows = static_cast<Eigen::Index>(vocab_size);
  model.input.resize(rows, dim);
  model.output.resize(rows, dim);
  read_floats(in, model.input.data(), static_cast<std::size_t>(model.input.size()), "input vectors");
  read_floats(in, model.output.data(), static_cast<std::size_t>(model.output.size()), "output vectors");

  auto& c = model.config;
  c.dim = static_cast<int>(dim);
  c.window = get<std::int32_t>(in, "metadata");
  c.negatives = get<std::int32_t>(in, "metadata");
  c.epochs = get<std::int32_t>(in, "metadata");
  c.lr_initial = get<double>(in, "metadata");
  c.lr_final = get<double>(in, "metadata");
  c.seed = get<std::uint64_t>(in, "metadata");
  c.workers = get<std::int32_t>(in, "metadata");
  const auto n_losses = get<std::uint32_t>(in, "metadata");
  for (std::uint32_t i = 0; i < n_losses; ++i) model.epoch_losses.push_back(get<double>(in, "metadata"));
  return model;
}

EmbeddingModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model: " + path.string());
  return load_model(in);
}

void export_text(const EmbeddingModel& model, std::ostream& out) {
  out << model.vocab.size() << ' ' << model.input.cols() << '\n';
  out << std::setprecision(9);
  for (Eigen::Index i = 0; i < model.input.rows(); ++i) {
    out << model.vocab.token(static_cast<TokenId>(i));
    for (Eigen::Index j = 0; j < model.input.cols(); ++j) out << ' ' << model.input(i, j);
    out << '\n';
  }
}

void export_text(const EmbeddingModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write vectors: " + path.string());
  export_text(model, out);
}

}  // namespace spkl
