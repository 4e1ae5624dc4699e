#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>
#include <sstream>

#include "doctest.h"
#include "relwalk/dataset.hpp"

using namespace relwalk;

namespace {

// Running example: a speaker, two mention sites and a location, with the
// offsets teammates->Toefting = +16 and teammates->capital = -3.
Sentence example_sentence() {
  Sentence s;
  s.tokens = {"Toefting", "spent",   "the", "evening",   "out", "with", "a",
              "large",    "group",   "of",  "friends",   "including", "several",
              "of",       "his",     "national", "teammates", "in",  "the",
              "capital",  "."};
  s.entities = {{"toefting", 0, 1, "PER"}, {"teammates", 16, 17, "PER"}, {"capital", 19, 20, "GPE"}};
  s.relations = {{"toefting", "teammates", "PER-SOC"},
                 {"toefting", "capital", "PHYS"},
                 {"teammates", "capital", "PHYS"}};
  return s;
}

Corpus parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in);
}

}  // namespace

TEST_CASE("corpus lines parse into validated sentences") {
  SUBCASE("counts echo the input") {
    const std::string line =
        R"({"tokens":["a","b","c","d","e"],)"
        R"("entities":[{"id":"x","start":0,"end":1,"type":"PER"},{"id":"y","start":3,"end":5,"type":"ORG"}],)"
        R"("relations":[{"arg1":"x","arg2":"y","type":"WORKS_AT"}]})";
    Corpus c = parse_text(line);
    REQUIRE(c.size() == 1);
    CHECK(c[0].tokens.size() == 5);
    CHECK(c[0].entities.size() == 2);
    CHECK(c[0].relations.size() == 1);
    CHECK(c[0].entities[1].end == 5);
  }

  SUBCASE("empty input gives an empty corpus") {
    CHECK(parse_text("").empty());
    CHECK(parse_text("\n  \n").empty());
  }

  SUBCASE("the running example round-trips to an identical structure") {
    const Sentence s = example_sentence();
    Corpus first = parse_text(serialize_sentence(s));
    REQUIRE(first.size() == 1);
    CHECK(first[0] == s);
    Corpus second = parse_text(serialize_sentence(first[0]));
    CHECK(second[0] == first[0]);
  }

  SUBCASE("serializer emits keys in the order tokens, entities, relations") {
    const std::string out = serialize_sentence(example_sentence());
    const auto tokens_at = out.find("\"tokens\"");
    const auto entities_at = out.find("\"entities\"");
    const auto relations_at = out.find("\"relations\"");
    REQUIRE(tokens_at != std::string::npos);
    CHECK(tokens_at < entities_at);
    CHECK(entities_at < relations_at);
  }
}

TEST_CASE("malformed corpus lines are rejected with their line number") {
  const std::string good =
      R"({"tokens":["a","b"],"entities":[{"id":"x","start":0,"end":1,"type":"T"}],"relations":[]})";

  auto expect_error_on_line_2 = [&](const std::string& bad_line) {
    bool threw = false;
    try {
      parse_text(good + "\n" + bad_line + "\n");
    } catch (const CorpusError& e) {
      threw = true;
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK(threw);
  };

  SUBCASE("invalid JSON") { expect_error_on_line_2("{nope"); }
  SUBCASE("missing key") { expect_error_on_line_2(R"({"tokens":["a"],"entities":[]})"); }
  SUBCASE("span out of bounds") {
    expect_error_on_line_2(
        R"({"tokens":["a"],"entities":[{"id":"x","start":0,"end":2,"type":"T"}],"relations":[]})");
  }
  SUBCASE("empty span") {
    expect_error_on_line_2(
        R"({"tokens":["a"],"entities":[{"id":"x","start":1,"end":1,"type":"T"}],"relations":[]})");
  }
  SUBCASE("duplicate entity id") {
    expect_error_on_line_2(
        R"({"tokens":["a","b"],"entities":[{"id":"x","start":0,"end":1,"type":"T"},)"
        R"({"id":"x","start":1,"end":2,"type":"T"}],"relations":[]})");
  }
  SUBCASE("relation to unknown entity") {
    expect_error_on_line_2(
        R"({"tokens":["a"],"entities":[{"id":"x","start":0,"end":1,"type":"T"}],)"
        R"("relations":[{"arg1":"x","arg2":"ghost","type":"R"}]})");
  }
  SUBCASE("self relation") {
    expect_error_on_line_2(
        R"({"tokens":["a"],"entities":[{"id":"x","start":0,"end":1,"type":"T"}],)"
        R"("relations":[{"arg1":"x","arg2":"x","type":"R"}]})");
  }

  SUBCASE("overlapping and nested spans are accepted") {
    const std::string nested =
        R"({"tokens":["a","b","c"],"entities":[{"id":"outer","start":0,"end":3,"type":"T"},)"
        R"({"id":"inner","start":1,"end":2,"type":"T"}],"relations":[]})";
    CHECK(parse_text(nested).size() == 1);
  }
}

TEST_CASE("relative positions are signed reading-order offsets") {
  const Sentence s = example_sentence();
  const auto& toefting = s.entity("toefting");
  const auto& teammates = s.entity("teammates");
  const auto& capital = s.entity("capital");

  CHECK(relative_position(teammates.anchor(), capital.anchor()) == -3);
  CHECK(relative_position(teammates.anchor(), toefting.anchor()) == 16);
  CHECK(relative_position(capital.anchor(), capital.anchor()) == 0);

  SUBCASE("antisymmetry over a grid of indices") {
    for (std::size_t a = 0; a < 25; ++a)
      for (std::size_t b = 0; b < 25; ++b)
        CHECK(relative_position(a, b) == -relative_position(b, a));
  }

  SUBCASE("multi-token mentions anchor at their first token") {
    EntityMention wide{"w", 3, 7, "T"};
    CHECK(wide.anchor() == 3);
  }
}

TEST_CASE("vocabulary indexing is sorted, total and deterministic") {
  Corpus corpus = {example_sentence()};
  Vocabulary v = Vocabulary::build(corpus);

  SUBCASE("reserved slots and sorted words from index 2") {
    CHECK(Vocabulary::kPad == 0);
    CHECK(Vocabulary::kUnk == 1);
    CHECK(v.word_index("never-seen-word") == Vocabulary::kUnk);
    // "." sorts before every alphabetic token in the example.
    CHECK(v.word_index(".") == 2);
    CHECK(v.word_count() == v.words().size() + 2);
    for (std::size_t i = 1; i < v.words().size(); ++i) CHECK(v.words()[i - 1] < v.words()[i]);
  }

  SUBCASE("unknown entity types share the null row") {
    CHECK(v.type_count() == 2);  // GPE, PER
    CHECK(v.type_index("GPE") == 0);
    CHECK(v.type_index("PER") == 1);
    CHECK(v.type_index("VEH") == v.null_type_index());
    CHECK(v.null_type_index() == 2);
  }

  SUBCASE("two relation types make a 5-way label table") {
    CHECK(v.relation_count() == 2);
    CHECK(v.label_count() == 5);
    CHECK(v.label_index("PER-SOC", true) == 1);
    CHECK(v.label_index("PER-SOC", false) == 2);
    CHECK(v.label_index("PHYS", true) == 3);
    CHECK(v.label_index("PHYS", false) == 4);
    CHECK_THROWS_AS((void)v.label_index("NOPE", true), CorpusError);
  }

  SUBCASE("six relation types make 13 classes") {
    Sentence s = example_sentence();
    s.relations = {{"toefting", "capital", "ART"},      {"capital", "toefting", "GEN-AFF"},
                   {"toefting", "teammates", "ORG-AFF"}, {"teammates", "toefting", "PART-WHOLE"},
                   {"teammates", "capital", "PER-SOC"},  {"capital", "teammates", "PHYS"}};
    Vocabulary v6 = Vocabulary::build({s});
    CHECK(v6.relation_count() == 6);
    CHECK(v6.label_count() == 13);
  }

  SUBCASE("label decode inverts label_index") {
    for (std::size_t label = 0; label < v.label_count(); ++label) {
      auto d = v.decode_label(label);
      if (label == Vocabulary::kNoRelation) {
        CHECK(d.none);
      } else {
        CHECK_FALSE(d.none);
        CHECK(v.label_index(d.rtype, d.left_to_right) == label);
      }
    }
    CHECK_THROWS_AS((void)v.decode_label(v.label_count()), CorpusError);
  }

  SUBCASE("same corpus parsed twice gives identical vocabularies") {
    std::string text = serialize_sentence(example_sentence());
    Vocabulary a = Vocabulary::build(parse_text(text));
    Vocabulary b = Vocabulary::build(parse_text(text));
    CHECK(a == b);
  }

  SUBCASE("pretrained words extend the vocabulary") {
    std::vector<std::string> extra = {"zebra", "the"};
    Vocabulary w = Vocabulary::build(corpus, &extra);
    CHECK(w.word_index("zebra") != Vocabulary::kUnk);
    CHECK(w.word_count() == v.word_count() + 1);  // "the" already present
  }
}

TEST_CASE("position offsets clip into a bounded bucket table") {
  Vocabulary v = Vocabulary::build({example_sentence()});
  REQUIRE(v.position_clip() == 60);
  CHECK(v.position_rows() == 123);

  CHECK(v.position_index(-61) == 0);
  CHECK(v.position_index(-1000) == 0);
  CHECK(v.position_index(-60) == 1);
  CHECK(v.position_index(0) == 61);
  CHECK(v.position_index(60) == 121);
  CHECK(v.position_index(61) == 122);
  CHECK(v.position_index(1000) == 122);

  SUBCASE("in-range offsets stay distinct") {
    std::set<std::size_t> seen;
    for (long long off = -60; off <= 60; ++off) CHECK(seen.insert(v.position_index(off)).second);
  }

  SUBCASE("a smaller clip shrinks the table") {
    Vocabulary w = Vocabulary::build({example_sentence()}, nullptr, 4);
    CHECK(w.position_rows() == 11);
    CHECK(w.position_index(-5) == 0);
    CHECK(w.position_index(4) == 9);
    CHECK(w.position_index(5) == 10);
  }
}

TEST_CASE("pair generation enumerates ordered pairs with directional labels") {
  Vocabulary v = Vocabulary::build({example_sentence()});

  SUBCASE("three entities and no gold relations give six negatives") {
    Sentence s = example_sentence();
    s.relations.clear();
    auto pairs = generate_pairs(s, v);
    REQUIRE(pairs.size() == 6);
    for (const auto& p : pairs) CHECK(p.label == Vocabulary::kNoRelation);
  }

  SUBCASE("one gold relation labels the pair and its mirror") {
    Sentence s;
    s.tokens = {"a", "b"};
    s.entities = {{"A", 0, 1, "PER"}, {"B", 1, 2, "GPE"}};
    s.relations = {{"A", "B", "PHYS"}};
    auto pairs = generate_pairs(s, v);
    REQUIRE(pairs.size() == 2);
    for (const auto& p : pairs) {
      if (p.head == "A") CHECK(p.label == v.label_index("PHYS", true));
      if (p.head == "B") CHECK(p.label == v.label_index("PHYS", false));
    }
  }

  SUBCASE("four entities with two gold relations") {
    Sentence s;
    s.tokens = {"a", "b", "c", "d"};
    s.entities = {{"A", 0, 1, "PER"}, {"B", 1, 2, "PER"}, {"C", 2, 3, "GPE"}, {"D", 3, 4, "GPE"}};
    s.relations = {{"A", "B", "PER-SOC"}, {"C", "D", "PHYS"}};
    auto pairs = generate_pairs(s, v);
    REQUIRE(pairs.size() == 12);
    std::size_t positive = 0;
    for (const auto& p : pairs)
      if (p.label != Vocabulary::kNoRelation) ++positive;
    CHECK(positive == 4);
  }

  SUBCASE("fewer than two entities yield nothing") {
    Sentence s;
    s.tokens = {"a"};
    s.entities = {{"A", 0, 1, "PER"}};
    CHECK(generate_pairs(s, v).empty());
    s.entities.clear();
    CHECK(generate_pairs(s, v).empty());
  }

  SUBCASE("every gold relation is covered once per direction") {
    const Sentence s = example_sentence();
    auto pairs = generate_pairs(s, v, 42);
    CHECK(pairs.size() == s.entities.size() * (s.entities.size() - 1));
    for (const auto& r : s.relations) {
      std::size_t l2r = 0, r2l = 0;
      for (const auto& p : pairs) {
        if (p.head == r.arg1 && p.tail == r.arg2 && p.label == v.label_index(r.rtype, true)) ++l2r;
        if (p.head == r.arg2 && p.tail == r.arg1 && p.label == v.label_index(r.rtype, false)) ++r2l;
      }
      CHECK(l2r == 1);
      CHECK(r2l == 1);
    }
    for (const auto& p : pairs) CHECK(p.sentence_index == 42);
  }
}
