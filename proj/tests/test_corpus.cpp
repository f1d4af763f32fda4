#include "dehealth/corpus.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "dehealth/synth.hpp"
#include "dehealth/text.hpp"

namespace dehealth {
namespace {

Corpus fixture_corpus() {
  std::istringstream in(
      R"({"post_id":"p1","user_id":"alice","topic_id":"t1","text":"hello there"}
{"post_id":"p2","user_id":"bob","topic_id":"t1","text":"hi back"}
{"post_id":"p3","user_id":"alice","topic_id":"t2","text":"more words"}
)");
  return ingest_jsonl(in, "fixture");
}

TEST(Ingest, CountsUsersAndPosts) {
  const Corpus c = fixture_corpus();
  EXPECT_EQ(c.users.size(), 2u);
  EXPECT_EQ(c.posts.size(), 3u);
}

TEST(Ingest, MissingTextFieldNamesLine) {
  std::istringstream in(
      R"({"post_id":"p1","user_id":"a","topic_id":"t","text":"x"}
{"post_id":"p2","user_id":"a","topic_id":"t"}
)");
  try {
    ingest_jsonl(in, "fix");
    FAIL() << "expected error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("fix:2"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("text"), std::string::npos) << e.what();
  }
}

TEST(Ingest, DuplicatePostIdNamesId) {
  std::istringstream in(
      R"({"post_id":"p1","user_id":"a","topic_id":"t","text":"x"}
{"post_id":"p1","user_id":"b","topic_id":"t","text":"y"}
)");
  try {
    ingest_jsonl(in, "fix");
    FAIL() << "expected error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("p1"), std::string::npos) << e.what();
  }
}

TEST(Ingest, MalformedLineNamesLineNumber) {
  std::istringstream in(
      R"({"post_id":"p1","user_id":"a","topic_id":"t","text":"x"}
this is not json
)");
  try {
    ingest_jsonl(in, "fix");
    FAIL() << "expected error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("fix:2"), std::string::npos) << e.what();
  }
}

TEST(Ingest, EmptyCorpusRejected) {
  std::istringstream in("");
  EXPECT_THROW(ingest_jsonl(in, "fix"), std::runtime_error);
}

TEST(Ingest, EmptyTextRejected) {
  std::istringstream in(
      R"({"post_id":"p1","user_id":"a","topic_id":"t","text":"   "}
)");
  EXPECT_THROW(ingest_jsonl(in, "fix"), std::runtime_error);
}

std::string serialize(const Corpus& c) {
  std::ostringstream out;
  write_jsonl(c, out);
  return out.str();
}

TEST(Synthesize, DeterministicGivenSeed) {
  const SynthProfile profile;
  const SynthResult a = synthesize(10, profile, 7);
  const SynthResult b = synthesize(10, profile, 7);
  EXPECT_EQ(serialize(a.corpus), serialize(b.corpus));
  EXPECT_EQ(a.truth.to_json().dump(), b.truth.to_json().dump());
  const SynthResult c = synthesize(10, profile, 8);
  EXPECT_NE(serialize(a.corpus), serialize(c.corpus));
}

TEST(Synthesize, EveryUserHasAPostAndIdentityTruth) {
  const SynthResult r = synthesize(50, SynthProfile{}, 3);
  EXPECT_EQ(r.corpus.users.size(), 50u);
  for (const auto& [anon, aux] : r.truth.mapping) {
    ASSERT_TRUE(aux.has_value());
    EXPECT_EQ(anon, *aux);
  }
  EXPECT_DOUBLE_EQ(r.truth.overlap_ratio(), 1.0);
}

TEST(Synthesize, CalibratedMarginals) {
  const SynthResult r = synthesize(1000, SynthProfile{}, 42);
  // Mean post length in words: within 10% of 127.59.
  double total_words = 0.0;
  for (const auto& p : r.corpus.posts)
    total_words += static_cast<double>(tokenize(p.text).size());
  const double mean_len = total_words / static_cast<double>(r.corpus.posts.size());
  EXPECT_GT(mean_len, 127.59 * 0.9) << mean_len;
  EXPECT_LT(mean_len, 127.59 * 1.1) << mean_len;
  // Fraction of users with < 5 posts: within 10 points of 0.873.
  auto by_user = r.corpus.posts_by_user();
  std::size_t few = 0;
  for (const auto& [user, posts] : by_user)
    if (posts.size() < 5) ++few;
  const double frac = static_cast<double>(few) / 1000.0;
  EXPECT_GT(frac, 0.873 - 0.10) << frac;
  EXPECT_LT(frac, 0.873 + 0.10) << frac;
}

TEST(Synthesize, DegenerateProfileRejected) {
  SynthProfile p;
  p.post_length_mean_words = 0.0;
  EXPECT_THROW(synthesize(10, p, 1), std::invalid_argument);
  EXPECT_THROW(synthesize(1, SynthProfile{}, 1), std::invalid_argument);
}

SynthResult small_world(std::size_t users, std::uint64_t seed) {
  SynthProfile profile;
  profile.min_posts_per_user = 2;  // splittable in every mode
  profile.post_length_mean_words = 30;
  return synthesize(users, profile, seed);
}

TEST(Split, ClosedWorldKeepsAllUsersOnBothSides) {
  const SynthResult r = small_world(100, 11);
  SplitSpec spec;
  spec.mode = SplitMode::kClosedWorld;
  spec.auxiliary_fraction = 0.5;
  spec.seed = 5;
  const SplitResult s = split(r.corpus, r.truth, spec);
  EXPECT_EQ(s.anonymized.users.size(), 100u);
  EXPECT_EQ(s.auxiliary.users.size(), 100u);
  EXPECT_DOUBLE_EQ(s.truth.overlap_ratio(), 1.0);
}

TEST(Split, PostPartitionProperty) {
  const SynthResult r = small_world(40, 13);
  SplitSpec spec;
  spec.mode = SplitMode::kClosedWorld;
  spec.auxiliary_fraction = 0.7;
  spec.seed = 9;
  const SplitResult s = split(r.corpus, r.truth, spec);
  std::set<std::string> original, anon, aux;
  for (const auto& p : r.corpus.posts) original.insert(p.post_id);
  for (const auto& p : s.anonymized.posts) anon.insert(p.post_id);
  for (const auto& p : s.auxiliary.posts) aux.insert(p.post_id);
  EXPECT_EQ(anon.size() + aux.size(), original.size());
  for (const auto& id : anon) {
    EXPECT_TRUE(original.count(id));
    EXPECT_FALSE(aux.count(id));
  }
}

TEST(Split, ClosedWorldAuxCountIsCeilClampedToKeepBothSides) {
  // A 2-post user at fraction 0.9 must still land one post on each side.
  Corpus c;
  c.add_post({"p1", "u1", "t1", 0, "one two"});
  c.add_post({"p2", "u1", "t1", 0, "three four"});
  c.add_post({"p3", "u2", "t1", 0, "five"});
  c.add_post({"p4", "u2", "t1", 0, "six"});
  SplitSpec spec;
  spec.mode = SplitMode::kClosedWorld;
  spec.auxiliary_fraction = 0.9;
  spec.seed = 1;
  const SplitResult s = split(c, GroundTruth::identity(c), spec);
  EXPECT_EQ(s.anonymized.posts.size(), 2u);
  EXPECT_EQ(s.auxiliary.posts.size(), 2u);
}

TEST(Split, SinglePostUserRejectedClosedWorld) {
  Corpus c;
  c.add_post({"p1", "solo", "t1", 0, "hello"});
  c.add_post({"p2", "duo", "t1", 0, "hi"});
  c.add_post({"p3", "duo", "t1", 0, "again"});
  SplitSpec spec;
  spec.mode = SplitMode::kClosedWorld;
  spec.auxiliary_fraction = 0.5;
  try {
    split(c, GroundTruth::identity(c), spec);
    FAIL() << "expected error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("solo"), std::string::npos) << e.what();
  }
}

TEST(Split, RelabelingIsRecordedBijection) {
  const SynthResult r = small_world(30, 17);
  SplitSpec spec;
  spec.mode = SplitMode::kClosedWorld;
  spec.auxiliary_fraction = 0.5;
  spec.seed = 2;
  const SplitResult s = split(r.corpus, r.truth, spec);
  std::set<std::string> targets;
  for (const auto& [anon, aux] : s.truth.mapping) {
    ASSERT_TRUE(aux.has_value());
    EXPECT_TRUE(targets.insert(*aux).second) << "duplicate target " << *aux;
    EXPECT_TRUE(s.anonymized.users.count(anon));
    EXPECT_TRUE(s.auxiliary.users.count(*aux));
  }
}

TEST(Split, DeterministicGivenSeed) {
  const SynthResult r = small_world(30, 19);
  SplitSpec spec;
  spec.mode = SplitMode::kOpenWorld;
  spec.overlap_ratio = 0.5;
  spec.seed = 77;
  const SplitResult a = split(r.corpus, r.truth, spec);
  const SplitResult b = split(r.corpus, r.truth, spec);
  EXPECT_EQ(serialize(a.anonymized), serialize(b.anonymized));
  EXPECT_EQ(serialize(a.auxiliary), serialize(b.auxiliary));
  EXPECT_EQ(a.truth.to_json().dump(), b.truth.to_json().dump());
}

// Open-world sizing follows x + 2y = n with x/(x+y) = ratio, x rounded down:
// n=100, ratio=0.5 -> x = floor(50/1.5) = 33, y = 33 (one user dropped).
TEST(Split, OpenWorldHalfOverlap) {
  const SynthResult r = small_world(100, 23);
  SplitSpec spec;
  spec.mode = SplitMode::kOpenWorld;
  spec.overlap_ratio = 0.5;
  spec.seed = 3;
  const SplitResult s = split(r.corpus, r.truth, spec);
  EXPECT_EQ(s.anonymized.users.size(), 66u);
  EXPECT_EQ(s.auxiliary.users.size(), 66u);
  std::size_t overlapping = 0;
  for (const auto& [anon, aux] : s.truth.mapping)
    if (aux.has_value()) ++overlapping;
  EXPECT_EQ(overlapping, 33u);
  EXPECT_NEAR(s.truth.overlap_ratio(), 0.5, 1e-12);
}

// n=100, ratio=0.9 -> x = floor(90/1.1) = 81, y = 9: 90 users per side,
// realized overlap 81/90 = 0.9.
TEST(Split, OpenWorldNinetyPercentOverlap) {
  const SynthResult r = small_world(100, 29);
  SplitSpec spec;
  spec.mode = SplitMode::kOpenWorld;
  spec.overlap_ratio = 0.9;
  spec.seed = 4;
  const SplitResult s = split(r.corpus, r.truth, spec);
  EXPECT_EQ(s.anonymized.users.size(), 90u);
  EXPECT_EQ(s.auxiliary.users.size(), 90u);
  std::size_t overlapping = 0;
  for (const auto& [anon, aux] : s.truth.mapping)
    if (aux.has_value()) ++overlapping;
  EXPECT_EQ(overlapping, 81u);
  EXPECT_NEAR(s.truth.overlap_ratio(), 0.9, 1e-12);
}

TEST(GroundTruthJson, RoundTripsIncludingAbsent) {
  GroundTruth t;
  t.mapping["anon-1"] = "alice";
  t.mapping["anon-2"] = std::nullopt;
  const GroundTruth back = GroundTruth::from_json(t.to_json());
  EXPECT_EQ(back.mapping.size(), 2u);
  EXPECT_EQ(*back.mapping.at("anon-1"), "alice");
  EXPECT_FALSE(back.mapping.at("anon-2").has_value());
  EXPECT_DOUBLE_EQ(back.overlap_ratio(), 0.5);
}

}  // namespace
}  // namespace dehealth
