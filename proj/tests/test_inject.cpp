#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "spkl/error.hpp"
#include "spkl/inject.hpp"
#include "spkl/stats.hpp"
#include "test_util.hpp"

using namespace spkl;

namespace {

TokenDoc doc(std::string id, std::string author, Context ctx, std::vector<std::string> tokens) {
  return {std::move(id), std::move(author), Group::A, ctx, std::move(tokens)};
}

}  // namespace

TEST_CASE("speaker token rendering") {
  const SpeakerToken t{"ann", Context::Mixed};
  CHECK(t.render() == "spk::ann::mixed");
  CHECK(SpeakerToken::parse("spk::ann::mixed") == t);
  CHECK(SpeakerToken::parse("spk::a::b::single") == SpeakerToken{"a::b", Context::Single});
  CHECK_FALSE(SpeakerToken::parse("ann").has_value());
  CHECK_FALSE(SpeakerToken::parse("spk::ann::both").has_value());
  CHECK(is_speaker_token("spk::x::single"));
  CHECK_FALSE(is_speaker_token("baby"));
}

TEST_CASE("one-token document gets either position") {
  Rng rng(7);
  std::map<std::size_t, int> seen;
  for (int i = 0; i < 2000; ++i) {
    std::size_t pos = 99;
    const auto out = inject_speaker(doc("d", "ann", Context::Single, {"a"}), rng, &pos);
    REQUIRE(out.tokens.size() == 2);
    CHECK(out.tokens[pos] == "spk::ann::single");
    CHECK(out.tokens[1 - pos] == "a");
    ++seen[pos];
  }
  CHECK(seen.size() == 2);
  CHECK(seen[0] > 850);
  CHECK(seen[1] > 850);
}

TEST_CASE("injection into an empty document fails") {
  Rng rng(1);
  CHECK_THROWS_AS(inject_speaker(doc("d", "ann", Context::Single, {}), rng), DataError);
}

TEST_CASE("insertion positions are uniform") {
  Rng rng(12345);
  std::vector<double> counts(5, 0.0);
  const TokenDoc base = doc("d", "ann", Context::Single, {"a", "b", "c", "d"});
  for (int i = 0; i < 100000; ++i) {
    std::size_t pos = 0;
    inject_speaker(base, rng, &pos);
    counts[pos] += 1.0;
  }
  const std::vector<double> uniform(5, 0.2);
  CHECK(chi_square_gof(counts, uniform).p_value > 0.001);
}

TEST_CASE("inject_corpus contract") {
  std::vector<TokenDoc> docs;
  for (int i = 0; i < 40; ++i) {
    std::vector<std::string> toks;
    for (int j = 0; j <= i % 7; ++j) toks.push_back("w" + std::to_string(j));
    docs.push_back(doc("d" + std::to_string(i), "u" + std::to_string(i % 6), (i / 6) % 2 ? Context::Mixed : Context::Single,
                       toks));
  }
  const auto a = inject_corpus(docs, 99);
  const auto b = inject_corpus(docs, 99);
  CHECK(a == b);

  std::map<std::string, TokenDoc> original;
  for (const auto& d : docs) original[d.id] = d;
  for (const auto& d : a) {
    const auto n = std::count_if(d.tokens.begin(), d.tokens.end(), [](const std::string& t) { return is_speaker_token(t); });
    CHECK(n == 1);
    CHECK(strip_speaker(d).tokens == original.at(d.id).tokens);
  }

  const auto speakers = speakers_of(a);
  std::set<std::pair<std::string, Context>> expected;
  for (const auto& d : docs) expected.insert({d.author, d.context});
  CHECK(speakers.size() == expected.size());
  CHECK(speakers.size() == 12);  // 6 authors x 2 contexts
}

TEST_CASE("corpus and speaker tables round-trip") {
  testutil::TempDir dir("inject");
  const std::vector<TokenDoc> docs{doc("1", "ann", Context::Single, {"spk::ann::single", "baby"}),
                                   doc("2", "ann", Context::Mixed, {"nap", "spk::ann::mixed", "time"})};
  write_corpus_text(dir / "corpus.txt", docs);
  const auto back = read_corpus_text(dir / "corpus.txt");
  REQUIRE(back.size() == 2);
  CHECK(back[0] == docs[0].tokens);
  CHECK(back[1] == docs[1].tokens);

  const auto speakers = speakers_of(docs);
  write_speakers(dir / "speakers.tsv", speakers);
  CHECK(read_speakers(dir / "speakers.tsv") == speakers);
}
