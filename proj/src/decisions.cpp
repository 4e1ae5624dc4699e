#include "relwalk/decisions.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace relwalk {

namespace {
using ordered_json = nlohmann::ordered_json;
}

std::string serialize_decision(const Decision& d) {
  ordered_json j;
  j["sentence_index"] = d.sentence_index;
  j["head"] = d.head;
  j["tail"] = d.tail;
  j["type"] = d.rtype;
  return j.dump();
}

DecisionSet parse_decisions(std::istream& in) {
  DecisionSet out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ordered_json j = ordered_json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw CorpusError("decisions line " + std::to_string(line_number) + ": invalid JSON");
    try {
      Decision d;
      d.sentence_index = j.at("sentence_index").get<std::size_t>();
      d.head = j.at("head").get<std::string>();
      d.tail = j.at("tail").get<std::string>();
      d.rtype = j.at("type").get<std::string>();
      out.push_back(std::move(d));
    } catch (const ordered_json::exception& e) {
      throw CorpusError("decisions line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return out;
}

DecisionSet parse_decisions_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open decisions file \"" + path + "\"");
  return parse_decisions(in);
}

void write_decisions(const DecisionSet& decisions, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CorpusError("cannot open \"" + path + "\" for writing");
  for (const auto& d : decisions) out << serialize_decision(d) << '\n';
}

DecisionSet gold_decisions(const Corpus& corpus) {
  DecisionSet out;
  for (std::size_t si = 0; si < corpus.size(); ++si)
    for (const auto& r : corpus[si].relations) out.push_back({si, r.arg1, r.arg2, r.rtype});
  return out;
}

}  // namespace relwalk
