#pragma once

#include <string>
#include <vector>

#include "relwalk/dataset.hpp"
#include "relwalk/rng.hpp"

namespace relwalk {

// Template-driven corpus generator. Base relations hold between adjacent
// entities and are signalled by a trigger phrase between them; compose rules
// derive a relation across a shared middle entity from two base relations,
// leaving no trigger of their own.
struct RelationRule {
  std::string rtype;
  std::string head_type;
  std::string tail_type;
  std::vector<std::string> trigger;  // tokens placed between head and tail
  double probability = 0.0;
};

struct ComposeRule {
  std::string rtype;
  std::string first;   // base relation type on (a, b)
  std::string second;  // base relation type on (b, c); yields (a, c, rtype)
};

struct EntityTemplate {
  std::string etype;
  std::vector<std::vector<std::string>> surfaces;  // tokenized mention texts
};

struct GeneratorSpec {
  std::vector<EntityTemplate> entity_types;
  std::vector<std::string> fillers;
  std::vector<RelationRule> relation_rules;
  std::vector<ComposeRule> compose_rules;
  std::size_t min_entities = 2;
  std::size_t max_entities = 12;

  /// Throws std::invalid_argument on rules referencing unknown types,
  /// probabilities outside [0,1], duplicate (head,tail) signatures or an
  /// entity range outside 2..12.
  void validate() const;
};

GeneratorSpec parse_generator_spec(const std::string& json_text);
GeneratorSpec parse_generator_spec_file(const std::string& path);

Corpus generate_synthetic(const GeneratorSpec& spec, std::size_t sentences, uint64_t seed);

}  // namespace relwalk
