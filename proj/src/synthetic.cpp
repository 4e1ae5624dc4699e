#include "relwalk/synthetic.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace relwalk {
namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> words;
  std::istringstream in(text);
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

}  // namespace

void GeneratorSpec::validate() const {
  if (entity_types.empty()) throw std::invalid_argument("generator spec: no entity types");
  if (fillers.empty()) throw std::invalid_argument("generator spec: no filler words");
  if (min_entities < 2 || min_entities > max_entities || max_entities > 12)
    throw std::invalid_argument("generator spec: entity count range must satisfy 2 <= min <= max <= 12");

  std::set<std::string> etypes;
  for (const auto& et : entity_types) {
    if (et.etype.empty()) throw std::invalid_argument("generator spec: entity type with empty name");
    if (!etypes.insert(et.etype).second)
      throw std::invalid_argument("generator spec: duplicate entity type \"" + et.etype + "\"");
    if (et.surfaces.empty())
      throw std::invalid_argument("generator spec: entity type \"" + et.etype + "\" has no surfaces");
    for (const auto& surface : et.surfaces)
      if (surface.empty())
        throw std::invalid_argument("generator spec: empty surface for entity type \"" + et.etype + "\"");
  }

  std::set<std::string> base_types;
  std::set<std::pair<std::string, std::string>> signatures;
  for (const auto& rule : relation_rules) {
    if (rule.rtype.empty()) throw std::invalid_argument("generator spec: relation rule with empty type");
    if (!etypes.count(rule.head_type))
      throw std::invalid_argument("generator spec: relation rule \"" + rule.rtype +
                                  "\" references unknown entity type \"" + rule.head_type + "\"");
    if (!etypes.count(rule.tail_type))
      throw std::invalid_argument("generator spec: relation rule \"" + rule.rtype +
                                  "\" references unknown entity type \"" + rule.tail_type + "\"");
    if (rule.trigger.empty())
      throw std::invalid_argument("generator spec: relation rule \"" + rule.rtype + "\" has no trigger");
    if (!(rule.probability >= 0.0 && rule.probability <= 1.0))
      throw std::invalid_argument("generator spec: relation rule \"" + rule.rtype +
                                  "\" probability outside [0, 1]");
    if (!signatures.insert({rule.head_type, rule.tail_type}).second)
      throw std::invalid_argument("generator spec: two relation rules share the signature (" +
                                  rule.head_type + ", " + rule.tail_type + ")");
    base_types.insert(rule.rtype);
  }

  for (const auto& rule : compose_rules) {
    if (rule.rtype.empty()) throw std::invalid_argument("generator spec: compose rule with empty type");
    for (const auto& part : {rule.first, rule.second})
      if (!base_types.count(part))
        throw std::invalid_argument("generator spec: compose rule \"" + rule.rtype +
                                    "\" references unknown relation type \"" + part + "\"");
  }
}

GeneratorSpec parse_generator_spec(const std::string& json_text) {
  ordered_json j = ordered_json::parse(json_text, nullptr, false);
  if (j.is_discarded()) throw std::invalid_argument("generator spec: invalid JSON");

  GeneratorSpec spec;
  try {
    for (const auto& et : j.at("entity_types")) {
      EntityTemplate t;
      t.etype = et.at("type").get<std::string>();
      for (const auto& surface : et.at("surfaces"))
        t.surfaces.push_back(split_words(surface.get<std::string>()));
      spec.entity_types.push_back(std::move(t));
    }
    for (const auto& f : j.at("fillers")) spec.fillers.push_back(f.get<std::string>());
    for (const auto& r : j.at("relation_rules")) {
      RelationRule rule;
      rule.rtype = r.at("type").get<std::string>();
      rule.head_type = r.at("head").get<std::string>();
      rule.tail_type = r.at("tail").get<std::string>();
      rule.trigger = split_words(r.at("trigger").get<std::string>());
      rule.probability = r.at("probability").get<double>();
      spec.relation_rules.push_back(std::move(rule));
    }
    if (j.contains("compose_rules")) {
      for (const auto& c : j.at("compose_rules")) {
        ComposeRule rule;
        rule.rtype = c.at("type").get<std::string>();
        rule.first = c.at("first").get<std::string>();
        rule.second = c.at("second").get<std::string>();
        spec.compose_rules.push_back(std::move(rule));
      }
    }
    if (j.contains("min_entities")) spec.min_entities = j.at("min_entities").get<std::size_t>();
    if (j.contains("max_entities")) spec.max_entities = j.at("max_entities").get<std::size_t>();
  } catch (const ordered_json::exception& e) {
    throw std::invalid_argument(std::string("generator spec: ") + e.what());
  }

  spec.validate();
  return spec;
}

GeneratorSpec parse_generator_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open generator spec \"" + path + "\"");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_generator_spec(buffer.str());
}

Corpus generate_synthetic(const GeneratorSpec& spec, std::size_t sentences, uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  Corpus corpus;
  corpus.reserve(sentences);

  for (std::size_t si = 0; si < sentences; ++si) {
    Sentence s;
    const std::size_t entity_count =
        spec.min_entities + rng.below(spec.max_entities - spec.min_entities + 1);

    auto emit_fillers = [&](std::size_t lo, std::size_t hi) {
      const std::size_t count = lo + rng.below(hi - lo + 1);
      for (std::size_t k = 0; k < count; ++k)
        s.tokens.push_back(spec.fillers[rng.below(spec.fillers.size())]);
    };

    emit_fillers(0, 2);
    std::vector<std::size_t> slot_type;  // index into spec.entity_types per mention
    for (std::size_t e = 0; e < entity_count; ++e) {
      if (e > 0) {
        // A base relation may fire on the adjacent pair; its trigger phrase
        // is the only separator then, making the relation surface-recoverable.
        const auto& head = spec.entity_types[slot_type[e - 1]].etype;
        const std::size_t tail_pick = rng.below(spec.entity_types.size());
        const auto& tail = spec.entity_types[tail_pick].etype;
        const RelationRule* fired = nullptr;
        for (const auto& rule : spec.relation_rules) {
          if (rule.head_type != head || rule.tail_type != tail) continue;
          if (rng.bernoulli(rule.probability)) fired = &rule;
          break;  // at most one rule per signature
        }
        if (fired) {
          for (const auto& t : fired->trigger) s.tokens.push_back(t);
          GoldRelation r;
          r.arg1 = "e" + std::to_string(e - 1);
          r.arg2 = "e" + std::to_string(e);
          r.rtype = fired->rtype;
          s.relations.push_back(std::move(r));
        } else {
          emit_fillers(1, 3);
        }
        slot_type.push_back(tail_pick);
      } else {
        slot_type.push_back(rng.below(spec.entity_types.size()));
      }

      const auto& tmpl = spec.entity_types[slot_type[e]];
      const auto& surface = tmpl.surfaces[rng.below(tmpl.surfaces.size())];
      EntityMention m;
      m.id = "e" + std::to_string(e);
      m.start = s.tokens.size();
      for (const auto& w : surface) s.tokens.push_back(w);
      m.end = s.tokens.size();
      m.etype = tmpl.etype;
      s.entities.push_back(std::move(m));
    }
    emit_fillers(0, 2);

    // Two-hop closure over the base relations only; composed facts never
    // stack into longer chains and never add a trigger to the surface.
    const std::vector<GoldRelation> base = s.relations;
    std::set<std::pair<std::string, std::string>> taken;
    for (const auto& r : s.relations) taken.insert({r.arg1, r.arg2});
    for (const auto& rule : spec.compose_rules) {
      for (const auto& r1 : base) {
        if (r1.rtype != rule.first) continue;
        for (const auto& r2 : base) {
          if (r2.rtype != rule.second || r1.arg2 != r2.arg1) continue;
          if (r1.arg1 == r2.arg2) continue;
          if (!taken.insert({r1.arg1, r2.arg2}).second) continue;
          GoldRelation r;
          r.arg1 = r1.arg1;
          r.arg2 = r2.arg2;
          r.rtype = rule.rtype;
          s.relations.push_back(std::move(r));
        }
      }
    }

    validate_sentence(s);
    corpus.push_back(std::move(s));
  }
  return corpus;
}

}  // namespace relwalk
