#include <doctest.h>

#include <algorithm>

#include "spkl/error.hpp"
#include "spkl/preprocess.hpp"
#include "test_util.hpp"

using namespace spkl;
using Tokens = std::vector<std::string>;

TEST_CASE("tokenize") {
  CHECK(tokenize("Don't worry, he's SLEEPING!") == Tokens{"dont", "worry", "hes", "sleeping"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("https://x.y z") == Tokens{"z"});
  CHECK(tokenize("see www.example.com/a?b=c now") == Tokens{"see", "now"});
  CHECK(tokenize("it\xe2\x80\x99s 3am") == Tokens{"its", "3am"});
  CHECK(tokenize("a--b  c\td\ne") == Tokens{"a", "b", "c", "d", "e"});
  CHECK(tokenize("na\xc3\xafve") == Tokens{"na\xc3\xafve"});
  CHECK(tokenize("!!! ...").empty());
}

TEST_CASE("tokenize output carries no whitespace or uppercase") {
  for (const auto& t : tokenize("Mixed CASE\twith\r\nbreaks and   spaces, OK?")) {
    CHECK(std::none_of(t.begin(), t.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }));
    CHECK(std::none_of(t.begin(), t.end(), [](char c) { return c >= 'A' && c <= 'Z'; }));
  }
}

TEST_CASE("bundled stop list") {
  const StopList s = StopList::bundled();
  CHECK(s.size() > 300);
  for (const char* w : {"the", "and", "dont", "hes", "ai", "im", "theyre", "got", "didn"}) CHECK(s.contains(w));
  CHECK_FALSE(s.contains("worry"));
  CHECK_FALSE(s.contains("sleeping"));
}

TEST_CASE("remove_stopwords") {
  const StopList s = StopList::bundled();
  CHECK(remove_stopwords(Tokens{"dont", "worry", "hes", "sleeping"}, s) == Tokens{"worry", "sleeping"});
  CHECK(remove_stopwords(Tokens{}, s).empty());
  const Tokens plain{"baby", "sleep", "bottle"};
  CHECK(remove_stopwords(plain, s) == plain);
}

TEST_CASE("StopList from text merges with the bundled list") {
  StopList s = StopList::from_text("# comment\nfoo\n  Bar \n\n");
  CHECK(s.size() == 2);
  CHECK(s.contains("foo"));
  CHECK(s.contains("bar"));
  s.merge(StopList::bundled());
  CHECK(s.contains("the"));
}

TEST_CASE("phrase scoring") {
  SUBCASE("stated example") {
    // Ten documents "a b" except two "a x" / "y b" pairs give a=10, b=10, ab=8
    // and a vocabulary padded to 100 distinct words.
    std::vector<Tokens> corpus;
    for (int i = 0; i < 8; ++i) corpus.push_back({"a", "b"});
    corpus.push_back({"a"});
    corpus.push_back({"a"});
    corpus.push_back({"b"});
    corpus.push_back({"b"});
    Tokens pad;
    for (int i = 0; i < 98; ++i) pad.push_back("w" + std::to_string(i));
    for (const auto& w : pad) corpus.push_back({w});
    const PhraseModel m = fit_phrases(corpus, 5, 2.0);
    CHECK(m.unigram_count("a") == 10);
    CHECK(m.unigram_count("b") == 10);
    CHECK(m.bigram_count("a", "b") == 8);
    CHECK(m.vocabulary_size() == 100);
    CHECK(m.score("a", "b") == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(m.merges("a", "b"));
    CHECK(m.apply(Tokens{"a", "b", "c"}) == Tokens{"a_b", "c"});
  }
  SUBCASE("unseen pair never merges") {
    const PhraseModel m = fit_phrases(std::vector<Tokens>{{"a", "b"}, {"c", "d"}}, 1, -1e9);
    CHECK(m.bigram_count("a", "d") == 0);
    CHECK(m.score("a", "d") <= 0.0);
    CHECK_FALSE(m.merges("a", "d"));
  }
  SUBCASE("single-token corpus has no candidates") {
    const PhraseModel m = fit_phrases(std::vector<Tokens>{{"a"}}, 1, 0.0);
    CHECK(m.phrase_count() == 0);
  }
  SUBCASE("empty corpus gives an empty model") {
    const PhraseModel m = fit_phrases(std::vector<Tokens>{}, 5, 10.0);
    CHECK(m.phrase_count() == 0);
    CHECK(m.vocabulary_size() == 0);
  }
  SUBCASE("greedy left to right") {
    std::vector<Tokens> corpus(20, Tokens{"new", "york", "city"});
    const PhraseModel m = fit_phrases(corpus, 1, 0.0);
    CHECK(m.apply(Tokens{"new", "york", "city"}) == Tokens{"new_york", "city"});
  }
  CHECK_THROWS_AS(fit_phrases(std::vector<Tokens>{}, 0, 1.0), ConfigError);
}

TEST_CASE("lemmatizer examples") {
  const RuleLemmatizer lem = RuleLemmatizer::bundled();
  CHECK(lem.lemma("sleeping") == "sleep");
  CHECK(lem.lemma("children") == "child");
  CHECK(lem.lemma("cat") == "cat");
  CHECK(lem.lemma("babies") == "baby");
  CHECK(lem.lemma("dresses") == "dress");
  CHECK(lem.lemma("glasses") == "glasses");
  CHECK(lem.lemma("bus") == "bus");
  CHECK(lem.lemma("running") == "run");
  CHECK(lem.lemma("walked") == "walk");
  CHECK(lem.lemma("feet") == "foot");
  CHECK(lem.lemma("3am") == "3am");
}

TEST_CASE("lemmatizer is idempotent") {
  const RuleLemmatizer lem = RuleLemmatizer::bundled();
  const Tokens words{"sleeping", "children", "cats", "babies", "dresses", "hopping", "hoped", "stopped", "parents",
                     "daughters", "sons", "kids", "fathers", "mothers", "toddlers", "diapers", "feeding", "cried",
                     "crying", "nursing", "being", "thing", "morning", "during", "news", "this", "his", "was",
                     "does", "goes", "agreed", "needed", "wanted", "told", "classes", "boxes", "played", "making",
                     "bedding", "dressing", "kissing", "sings", "singing", "wifes", "husbands", "families", "ies"};
  for (const auto& w : words) {
    const std::string once = lem.lemma(w);
    CAPTURE(w);
    CHECK(lem.lemma(once) == once);
  }
}

TEST_CASE("lemmatizer exceptions from text") {
  const RuleLemmatizer lem = RuleLemmatizer::from_text("geese\tgoose\n# comment\n\nmice\tmouse\n");
  CHECK(lem.exception_count() == 2);
  CHECK(lem.lemma("geese") == "goose");
  CHECK(lem.lemma("cats") == "cat");
  CHECK_THROWS_AS(RuleLemmatizer::from_text("no tab here\n"), DataError);
}

namespace {

Cohort fixture_cohort() {
  // Ten comments from two authors; two bodies are stopwords only.
  Cohort c;
  CohortAuthor a{"ann", Group::A, {}, {}};
  CohortAuthor b{"bob", Group::B, {}, {}};
  const char* bodies[] = {"My baby is sleeping", "The toddler cried", "and the", "New bottles arrived",
                          "We love naps",        "it is what it is",  "Teething is hard", "Dads unite",
                          "School run today",    "Children playing"};
  for (int i = 0; i < 10; ++i) {
    RawComment rc{"c" + std::to_string(i), i < 5 ? "ann" : "bob", "", bodies[i], 0};
    auto& who = i < 5 ? a : b;
    (i % 2 ? who.mixed : who.single).push_back(rc);
  }
  c.authors = {a, b};
  return c;
}

}  // namespace

TEST_CASE("clean_corpus") {
  PreprocessOptions opt;
  CleanStats stats;
  const auto docs = clean_corpus(fixture_cohort(), opt, &stats);
  CHECK(docs.size() == 8);
  CHECK(stats.input_docs == 10);
  CHECK(stats.empty_after_stopwords == 2);
  CHECK(stats.output_docs == 8);
  for (const auto& d : docs) {
    CHECK_FALSE(d.tokens.empty());
    for (const auto& t : d.tokens) CHECK(t.find_first_of(" \t\n") == std::string::npos);
  }
  const auto first = std::find_if(docs.begin(), docs.end(), [](const TokenDoc& d) { return d.id == "c0"; });
  REQUIRE(first != docs.end());
  CHECK(first->tokens == Tokens{"baby", "sleep"});
  CHECK(first->author == "ann");
  CHECK(first->context == Context::Single);

  SUBCASE("deterministic") { CHECK(clean_corpus(fixture_cohort(), opt) == docs); }
  SUBCASE("nothing emptied keeps the count") {
    Cohort c;
    c.authors.push_back({"ann", Group::A, {{"x", "ann", "", "baby bottle", 0}}, {{"y", "ann", "", "toddler nap", 0}}});
    CleanStats s;
    CHECK(clean_corpus(c, opt, &s).size() == 2);
    CHECK(s.output_docs == s.input_docs);
  }
}
