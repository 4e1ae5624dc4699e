#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "doctest.h"
#include "relwalk/model.hpp"
#include "relwalk/gradcheck.hpp"

using namespace relwalk;

namespace {

// Three entities, six ordered pairs, some context tokens around them.
Sentence three_entity_sentence() {
  Sentence s;
  s.tokens = {"ann", "met", "bo", "near", "the", "old", "bridge", "yesterday"};
  s.entities = {{"ann", 0, 1, "PER"}, {"bo", 2, 3, "PER"}, {"bridge", 5, 7, "FAC"}};
  s.relations = {{"ann", "bo", "PER-SOC"}, {"ann", "bridge", "PHYS"}};
  return s;
}

Corpus six_relation_corpus() {
  Sentence s = three_entity_sentence();
  s.relations = {{"ann", "bo", "R1"}, {"bo", "ann", "R2"}, {"ann", "bridge", "R3"},
                 {"bridge", "ann", "R4"}, {"bo", "bridge", "R5"}, {"bridge", "bo", "R6"}};
  return {s};
}

TrainConfig tiny_config() {
  TrainConfig c;
  c.word_dim = 5;
  c.type_dim = 4;
  c.position_dim = 4;
  c.lstm_dim = 8;
  c.pair_dim = 8;
  c.walk_length = 4;
  c.beta = 0.77;
  c.position_clip = 8;
  return c;
}

}  // namespace

TEST_CASE("the dimensional contract is asserted at build") {
  SUBCASE("full-scale sizes with six relation types") {
    TrainConfig c;  // defaults carry the full-scale dims
    REQUIRE(c.lstm_dim == 100);
    REQUIRE(c.type_dim == 20);
    REQUIRE(c.position_dim == 25);
    Vocabulary v = Vocabulary::build(six_relation_corpus());
    Rng rng(41);
    ModelParams m = ModelParams::init(c, v, rng);

    CHECK(m.context_dim() == 170);
    CHECK(m.concat_dim() == 460);
    CHECK(m.w_s.rows() == 100);
    CHECK(m.w_s.cols() == 460);
    CHECK(m.w_b.rows() == 100);
    CHECK(m.w_b.cols() == 100);
    CHECK(m.label_count() == 13);
    CHECK(m.w_r.rows() == 13);
    CHECK(m.w_r.cols() == 100);
    CHECK(m.attention_q.numel() == 170);
    m.check_dimensions();
  }

  SUBCASE("without attention the concatenation shrinks to the two entities") {
    TrainConfig c = tiny_config();
    c.attention = false;
    Vocabulary v = Vocabulary::build({three_entity_sentence()});
    Rng rng(42);
    ModelParams m = ModelParams::init(c, v, rng);
    CHECK(m.concat_dim() == 2 * (8 + 4 + 4));
    CHECK(m.w_s.cols() == 32);
    for (auto& [name, t] : m.named_parameters()) CHECK(name != "attention.q");
  }

  SUBCASE("walk length one drops the combine matrix") {
    TrainConfig c = tiny_config();
    c.walk_length = 1;
    Vocabulary v = Vocabulary::build({three_entity_sentence()});
    Rng rng(43);
    ModelParams m = ModelParams::init(c, v, rng);
    for (auto& [name, t] : m.named_parameters()) CHECK(name != "walks.w_b");
  }

  SUBCASE("drifted tensors are caught") {
    Vocabulary v = Vocabulary::build({three_entity_sentence()});
    Rng rng(44);
    ModelParams m = ModelParams::init(tiny_config(), v, rng);
    m.w_r = Tensor::zeros({2, 2});
    CHECK_THROWS_AS(m.check_dimensions(), std::logic_error);
  }

  SUBCASE("the registry keeps a fixed order") {
    Vocabulary v = Vocabulary::build({three_entity_sentence()});
    Rng rng(45);
    ModelParams m = ModelParams::init(tiny_config(), v, rng);
    auto named = m.named_parameters();
    REQUIRE(named.size() == 3 + 24 + 1 + 1 + 1 + 2);
    CHECK(named.front().first == "embeddings.word");
    CHECK(named[3].first == "lstm.forward.w_input");
    CHECK(named.back().first == "classifier.b_r");

    // Biases stay out of the L2 set; everything else trains under it.
    auto l2 = m.l2_parameters();
    for (Tensor* b : m.bias_parameters())
      CHECK(std::find(l2.begin(), l2.end(), b) == l2.end());
    CHECK(l2.size() + m.bias_parameters().size() == named.size());
  }

  SUBCASE("freezing pretrained vectors removes the word table from training") {
    TrainConfig c = tiny_config();
    c.freeze_pretrained = true;
    Vocabulary v = Vocabulary::build({three_entity_sentence()});
    Rng rng(46);
    ModelParams m = ModelParams::init(c, v, rng);
    auto trainable = m.trainable_parameters();
    CHECK(std::find(trainable.begin(), trainable.end(), &m.tables.word) == trainable.end());
    CHECK(trainable.size() + 1 == m.parameters().size());
  }
}

TEST_CASE("the forward pass produces one logit vector per ordered pair") {
  Vocabulary v = Vocabulary::build({three_entity_sentence()});
  Rng rng(47);
  ModelParams m = ModelParams::init(tiny_config(), v, rng);
  Sentence s = three_entity_sentence();

  SUBCASE("pair order and labels align with instance generation") {
    ag::Graph g;
    auto fwd = build_forward(g, m, s, 9, false, nullptr);
    auto expected = generate_pairs(s, v, 9);
    REQUIRE(fwd.pairs.size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) {
      CHECK(fwd.pairs[k].instance.head == expected[k].head);
      CHECK(fwd.pairs[k].instance.label == expected[k].label);
      CHECK(g.value(fwd.pairs[k].logits).numel() == v.label_count());
    }
  }

  SUBCASE("sentences with fewer than two entities produce nothing") {
    Sentence bare;
    bare.tokens = {"just", "words"};
    ag::Graph g;
    CHECK(build_forward(g, m, bare, 0, false, nullptr).pairs.empty());
  }

  SUBCASE("two-entity sentences work at any walk length (degenerate sums)") {
    Sentence two;
    two.tokens = {"ann", "met", "bo"};
    two.entities = {{"a", 0, 1, "PER"}, {"b", 2, 3, "PER"}};
    ag::Graph g;
    auto fwd = build_forward(g, m, two, 0, false, nullptr);
    CHECK(fwd.pairs.size() == 2);
    for (const auto& p : fwd.pairs) CHECK(g.value(p.logits).all_finite());
  }

  SUBCASE("evaluation mode is deterministic, training mode draws dropout") {
    ag::Graph g1, g2;
    auto a = build_forward(g1, m, s, 0, false, nullptr);
    auto b = build_forward(g2, m, s, 0, false, nullptr);
    for (std::size_t k = 0; k < a.pairs.size(); ++k)
      CHECK(g1.value(a.pairs[k].logits).values == g2.value(b.pairs[k].logits).values);

    TrainConfig dropped = tiny_config();
    dropped.input_dropout = 0.5;
    dropped.output_dropout = 0.5;
    Rng rng2(48);
    ModelParams md = ModelParams::init(dropped, v, rng2);
    Rng d1(7), d2(7), d3(8);
    ag::Graph g3, g4, g5;
    auto t1 = build_forward(g3, md, s, 0, true, &d1);
    auto t2 = build_forward(g4, md, s, 0, true, &d2);
    auto t3 = build_forward(g5, md, s, 0, true, &d3);
    for (std::size_t k = 0; k < t1.pairs.size(); ++k)
      CHECK(g3.value(t1.pairs[k].logits).values == g4.value(t2.pairs[k].logits).values);
    bool any_difference = false;
    for (std::size_t k = 0; k < t1.pairs.size(); ++k)
      if (g3.value(t1.pairs[k].logits).values != g5.value(t3.pairs[k].logits).values)
        any_difference = true;
    CHECK(any_difference);
    CHECK_THROWS_AS((void)build_forward(g5, md, s, 0, true, nullptr), std::invalid_argument);
  }

  SUBCASE("prediction emits at most one decision per unordered pair") {
    auto decisions = predict_sentence(m, s, 3);
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& d : decisions) {
      auto key = std::minmax(d.head, d.tail);
      CHECK(seen.insert({key.first, key.second}).second);
    }
    CHECK(decisions.size() <= 3);
  }
}

TEST_CASE("analytic gradients match finite differences on the tiny full model") {
  const auto started = std::chrono::steady_clock::now();

  Vocabulary v = Vocabulary::build({three_entity_sentence()});
  Rng rng(49);
  ModelParams m = ModelParams::init(tiny_config(), v, rng);
  Sentence s = three_entity_sentence();

  auto forward = [&](bool grad) {
    ag::Graph g;
    auto fwd = build_forward(g, m, s, 0, false, nullptr);
    std::vector<ag::NodeId> losses;
    for (const auto& p : fwd.pairs) losses.push_back(g.cross_entropy(p.logits, p.instance.label));
    ag::NodeId loss = g.scale(g.add_n(losses), 1.0 / double(losses.size()));
    double out = g.value(loss).values[0];
    if (grad) g.backward(loss);
    return out;
  };

  std::vector<std::pair<std::string, Tensor*>> watched;
  for (auto& [name, tensor] : m.named_parameters()) watched.push_back({name, tensor});

  auto report = fd_check(
      watched, [&] { return forward(true); }, [&] { return forward(false); }, 1e-5, 1e-4);
  INFO("worst " << report.worst_param << "[" << report.worst_index << "] analytic "
                << report.analytic << " numeric " << report.numeric);
  CHECK(report.max_rel_err < 1e-4);

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  CHECK(seconds < 60.0);
  MESSAGE("full-model gradient check took " << seconds << "s");
}
