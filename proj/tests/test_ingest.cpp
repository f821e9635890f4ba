#include <doctest.h>

#include <set>
#include <sstream>

#include "spkl/error.hpp"
#include "spkl/ingest.hpp"
#include "test_util.hpp"

using namespace spkl;

namespace {

RawComment comment(std::string id, std::string author, std::string venue, std::string body = "hello there") {
  return {std::move(id), std::move(author), std::move(venue), std::move(body), 1600000000};
}

VenueSpec venues() {
  return VenueSpec({{"moms", AudienceClass::SingleGenderA},
                    {"dads", AudienceClass::SingleGenderB},
                    {"parenting", AudienceClass::Mixed}});
}

}  // namespace

TEST_CASE("load_comments reads valid records") {
  std::istringstream in(
      R"({"id":"a1","author":"ann","subreddit":"moms","body":"hi","created_utc":1})"
      "\n"
      R"({"id":"a2","author":"bob","subreddit":"dads","body":"yo","created_utc":"1600000000"})"
      "\n");
  const auto r = parse_comments(in);
  REQUIRE(r.comments.size() == 2);
  CHECK(r.skipped == 0);
  CHECK(r.comments[0].author == "ann");
  CHECK(r.comments[1].venue == "dads");
  CHECK(r.comments[1].created_utc == 1600000000);
}

TEST_CASE("load_comments skips a line without an author") {
  std::istringstream in(
      R"({"id":"a1","subreddit":"moms","body":"hi","created_utc":1})"
      "\n"
      R"({"id":"a2","author":"bob","subreddit":"dads","body":"yo","created_utc":2})"
      "\n");
  const auto r = parse_comments(in);
  CHECK(r.comments.size() == 1);
  CHECK(r.skipped == 1);
}

TEST_CASE("load_comments counts other malformed lines") {
  std::istringstream in(
      "not json\n"
      R"({"id":"a1","author":"two words","subreddit":"moms","body":"hi","created_utc":1})"
      "\n"
      R"({"id":"a2","author":"bob","subreddit":"dads","body":"yo","created_utc":"soon"})"
      "\n"
      "\n");
  const auto r = parse_comments(in);
  CHECK(r.comments.empty());
  CHECK(r.skipped == 3);
}

TEST_CASE("load_comments on an empty file gives an empty sequence") {
  testutil::TempDir dir("ingest");
  testutil::spit(dir / "empty.jsonl", "");
  const auto r = load_comments(dir / "empty.jsonl");
  CHECK(r.comments.empty());
  CHECK(r.skipped == 0);
}

TEST_CASE("load_comments fails on an unreadable file") {
  CHECK_THROWS_AS(load_comments("/nonexistent/dump.jsonl"), DataError);
}

TEST_CASE("write_comments round-trips") {
  const std::vector<RawComment> cs{comment("x", "ann", "moms", "quote \" and \n newline"),
                                   comment("y", "bob", "dads", "caf\xc3\xa9")};
  std::stringstream buf;
  write_comments(buf, cs);
  const auto r = parse_comments(buf);
  CHECK(r.comments == cs);
}

TEST_CASE("VenueSpec validation") {
  CHECK_NOTHROW(venues().validate());
  CHECK_THROWS_AS(VenueSpec({{"moms", AudienceClass::SingleGenderA}}).validate(), ConfigError);
  CHECK_THROWS_AS(VenueSpec({{"moms", AudienceClass::SingleGenderA},
                             {"p1", AudienceClass::Mixed},
                             {"p2", AudienceClass::Mixed}})
                      .validate(),
                  ConfigError);
  CHECK(venues().classify("dads") == AudienceClass::SingleGenderB);
  CHECK_FALSE(venues().classify("cats").has_value());
  CHECK(venues().mixed_venue() == "parenting");
}

TEST_CASE("select_cohort membership rules") {
  const std::vector<RawComment> cs{
      comment("1", "ann", "moms"),     comment("2", "ann", "parenting"),  // A + mixed: kept as A
      comment("3", "bob", "dads"),     comment("4", "bob", "parenting"),  // B + mixed: kept as B
      comment("5", "cat", "moms"),     comment("6", "cat", "dads"),       // both single venues
      comment("7", "cat", "parenting"),
      comment("8", "dan", "parenting"),                                   // mixed only
      comment("9", "eve", "moms"),                                        // single only
      comment("10", "AutoModerator", "moms"), comment("11", "AutoModerator", "parenting"),
      comment("12", "ann", "moms", "[deleted]"), comment("13", "ann", "cats"),
  };
  SelectStats stats;
  const Cohort c = select_cohort(cs, venues(), {}, &stats);
  REQUIRE(c.authors.size() == 2);
  CHECK(c.authors[0].author == "ann");
  CHECK(c.authors[0].group == Group::A);
  CHECK(c.authors[0].single.size() == 1);
  CHECK(c.authors[0].mixed.size() == 1);
  CHECK(c.authors[1].author == "bob");
  CHECK(c.authors[1].group == Group::B);
  CHECK(c.find("cat") == nullptr);
  CHECK(c.find("dan") == nullptr);
  CHECK(stats.bot_comments == 2);
  CHECK(stats.deleted_comments == 1);
  CHECK(stats.unknown_venue_comments == 1);
  CHECK(stats.authors_in_both_single == 1);
  CHECK(stats.warnings.empty());
}

TEST_CASE("select_cohort invariants") {
  std::vector<RawComment> cs;
  for (int a = 0; a < 12; ++a) {
    const std::string name = "u" + std::to_string(a);
    const std::string single = a % 2 ? "dads" : "moms";
    for (int k = 0; k < 3; ++k) {
      cs.push_back(comment(name + "s" + std::to_string(k), name, single, a == 3 && k == 0 ? "[removed]" : "body"));
      if (a % 5 != 0) cs.push_back(comment(name + "m" + std::to_string(k), name, "parenting"));
    }
  }
  cs.push_back(comment("bot", "AutoModerator", "moms"));
  const Cohort once = select_cohort(cs, venues());
  const Cohort twice = select_cohort(once.comments(), venues());

  SUBCASE("idempotent") {
    REQUIRE(once.authors.size() == twice.authors.size());
    CHECK(once.comments() == twice.comments());
  }
  SUBCASE("no bot or placeholder survives") {
    for (const auto& rc : once.comments()) {
      CHECK(rc.author != "AutoModerator");
      CHECK_FALSE(is_deletion_placeholder(rc.body));
    }
  }
  SUBCASE("partition") {
    std::set<std::string> seen;
    for (const auto& a : once.authors) CHECK(seen.insert(a.author).second);
    for (const auto& a : once.authors) {
      for (const auto& rc : a.single) CHECK(rc.venue == (a.group == Group::A ? "moms" : "dads"));
      for (const auto& rc : a.mixed) CHECK(rc.venue == "parenting");
    }
  }
}

TEST_CASE("select_cohort warns on an empty cohort") {
  SelectStats stats;
  const Cohort c = select_cohort(std::vector<RawComment>{comment("1", "ann", "moms")}, venues(), {}, &stats);
  CHECK(c.empty());
  CHECK(stats.warnings.size() == 1);
}

TEST_CASE("cohort_summary counts") {
  SUBCASE("one author with two comments") {
    const Cohort c = select_cohort(std::vector<RawComment>{comment("1", "ann", "moms"), comment("2", "ann", "parenting")},
                                   venues());
    const auto s = cohort_summary(c);
    CHECK(s.total_comments() == 2);
    CHECK(s.total_authors() == 1);
  }
  SUBCASE("empty cohort") {
    const auto s = cohort_summary(Cohort{});
    CHECK(s.total_comments() == 0);
    CHECK(s.authors[0] == 0);
    CHECK(s.authors[1] == 0);
    CHECK(s.comments.empty());
  }
  SUBCASE("3/2 split") {
    std::vector<RawComment> cs;
    for (int a = 0; a < 5; ++a) {
      const std::string name = "u" + std::to_string(a);
      cs.push_back(comment(name + "s", name, a < 3 ? "moms" : "dads"));
      cs.push_back(comment(name + "m", name, "parenting"));
      cs.push_back(comment(name + "m2", name, "parenting"));
    }
    const auto s = cohort_summary(select_cohort(cs, venues()));
    CHECK(s.authors[0] == 3);
    CHECK(s.authors[1] == 2);
    CHECK(s.comments.at({"moms", Group::A}) == 3);
    CHECK(s.comments.at({"dads", Group::B}) == 2);
    CHECK(s.comments.at({"parenting", Group::A}) == 6);
    CHECK(s.comments.at({"parenting", Group::B}) == 4);
    CHECK(s.total_comments() == 15);
  }
}
