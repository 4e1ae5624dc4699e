#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "relwalk/dataset.hpp"

namespace relwalk {

// One directed positive relation decision, the unit of scoring.
struct Decision {
  std::size_t sentence_index = 0;
  std::string head;
  std::string tail;
  std::string rtype;

  bool operator==(const Decision&) const = default;
  auto operator<=>(const Decision&) const = default;
};

using DecisionSet = std::vector<Decision>;

/// JSON-lines with keys sentence_index, head, tail, type.
std::string serialize_decision(const Decision& d);
DecisionSet parse_decisions(std::istream& in);
DecisionSet parse_decisions_file(const std::string& path);
void write_decisions(const DecisionSet& decisions, const std::string& path);

/// The corpus gold relations as directed decisions.
DecisionSet gold_decisions(const Corpus& corpus);

}  // namespace relwalk
