#include "relwalk/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace relwalk {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string corpus_where(std::size_t line_number) {
  return "corpus line " + std::to_string(line_number) + ": ";
}

Sentence sentence_from_json(const ordered_json& j, std::size_t line_number) {
  if (!j.is_object()) throw CorpusError(corpus_where(line_number) + "expected a JSON object");
  for (const auto& key : {"tokens", "entities", "relations"}) {
    if (!j.contains(key))
      throw CorpusError(corpus_where(line_number) + "missing key \"" + key + "\"");
  }

  Sentence s;
  try {
    for (const auto& tok : j.at("tokens")) s.tokens.push_back(tok.get<std::string>());
    for (const auto& ent : j.at("entities")) {
      EntityMention m;
      m.id = ent.at("id").get<std::string>();
      m.start = ent.at("start").get<std::size_t>();
      m.end = ent.at("end").get<std::size_t>();
      m.etype = ent.at("type").get<std::string>();
      s.entities.push_back(std::move(m));
    }
    for (const auto& rel : j.at("relations")) {
      GoldRelation r;
      r.arg1 = rel.at("arg1").get<std::string>();
      r.arg2 = rel.at("arg2").get<std::string>();
      r.rtype = rel.at("type").get<std::string>();
      s.relations.push_back(std::move(r));
    }
  } catch (const ordered_json::exception& e) {
    throw CorpusError(corpus_where(line_number) + e.what());
  }

  try {
    validate_sentence(s);
  } catch (const CorpusError& e) {
    throw CorpusError(corpus_where(line_number) + e.what());
  }
  return s;
}

}  // namespace

const EntityMention& Sentence::entity(const std::string& id) const {
  for (const auto& e : entities)
    if (e.id == id) return e;
  throw CorpusError("unknown entity id \"" + id + "\"");
}

void validate_sentence(const Sentence& s) {
  if (s.tokens.empty()) throw CorpusError("sentence has no tokens");
  std::set<std::string> ids;
  for (const auto& e : s.entities) {
    if (e.id.empty()) throw CorpusError("entity with empty id");
    if (!ids.insert(e.id).second) throw CorpusError("duplicate entity id \"" + e.id + "\"");
    if (e.start >= e.end)
      throw CorpusError("entity \"" + e.id + "\" has empty span [" + std::to_string(e.start) +
                        ", " + std::to_string(e.end) + ")");
    if (e.end > s.tokens.size())
      throw CorpusError("entity \"" + e.id + "\" span ends at " + std::to_string(e.end) +
                        " but the sentence has " + std::to_string(s.tokens.size()) + " tokens");
    if (e.etype.empty()) throw CorpusError("entity \"" + e.id + "\" has empty type");
  }
  std::set<std::pair<std::string, std::string>> seen_pairs;
  for (const auto& r : s.relations) {
    if (!ids.count(r.arg1)) throw CorpusError("relation references unknown entity \"" + r.arg1 + "\"");
    if (!ids.count(r.arg2)) throw CorpusError("relation references unknown entity \"" + r.arg2 + "\"");
    if (r.arg1 == r.arg2)
      throw CorpusError("relation relates entity \"" + r.arg1 + "\" to itself");
    if (r.rtype.empty()) throw CorpusError("relation with empty type");
    if (!seen_pairs.insert({r.arg1, r.arg2}).second)
      throw CorpusError("multiple relations on the ordered pair (\"" + r.arg1 + "\", \"" +
                        r.arg2 + "\")");
  }
}

Corpus parse_corpus(std::istream& in) {
  Corpus corpus;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ordered_json j = ordered_json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw CorpusError(corpus_where(line_number) + "invalid JSON");
    corpus.push_back(sentence_from_json(j, line_number));
  }
  return corpus;
}

Corpus parse_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open corpus file \"" + path + "\"");
  return parse_corpus(in);
}

std::string serialize_sentence(const Sentence& s) {
  ordered_json j;
  j["tokens"] = s.tokens;
  j["entities"] = ordered_json::array();
  for (const auto& e : s.entities) {
    ordered_json ent;
    ent["id"] = e.id;
    ent["start"] = e.start;
    ent["end"] = e.end;
    ent["type"] = e.etype;
    j["entities"].push_back(std::move(ent));
  }
  j["relations"] = ordered_json::array();
  for (const auto& r : s.relations) {
    ordered_json rel;
    rel["arg1"] = r.arg1;
    rel["arg2"] = r.arg2;
    rel["type"] = r.rtype;
    j["relations"].push_back(std::move(rel));
  }
  return j.dump();
}

void write_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CorpusError("cannot open \"" + path + "\" for writing");
  for (const auto& s : corpus) out << serialize_sentence(s) << '\n';
}

Vocabulary Vocabulary::build(const Corpus& corpus, const std::vector<std::string>* pretrained_words,
                             std::size_t position_clip) {
  std::set<std::string> words, types, relations;
  for (const auto& s : corpus) {
    words.insert(s.tokens.begin(), s.tokens.end());
    for (const auto& e : s.entities) types.insert(e.etype);
    for (const auto& r : s.relations) relations.insert(r.rtype);
  }
  if (pretrained_words) words.insert(pretrained_words->begin(), pretrained_words->end());

  Vocabulary v;
  v.words_.assign(words.begin(), words.end());
  v.types_.assign(types.begin(), types.end());
  v.relation_types_.assign(relations.begin(), relations.end());
  v.position_clip_ = position_clip;
  v.rebuild_lookups();
  return v;
}

Vocabulary Vocabulary::from_parts(std::vector<std::string> words, std::vector<std::string> types,
                                  std::vector<std::string> relations, std::size_t position_clip) {
  Vocabulary v;
  v.words_ = std::move(words);
  v.types_ = std::move(types);
  v.relation_types_ = std::move(relations);
  v.position_clip_ = position_clip;
  v.rebuild_lookups();
  return v;
}

void Vocabulary::rebuild_lookups() {
  word_lookup_.clear();
  type_lookup_.clear();
  relation_lookup_.clear();
  for (std::size_t i = 0; i < words_.size(); ++i) word_lookup_[words_[i]] = i + 2;
  for (std::size_t i = 0; i < types_.size(); ++i) type_lookup_[types_[i]] = i;
  for (std::size_t i = 0; i < relation_types_.size(); ++i) relation_lookup_[relation_types_[i]] = i;
}

std::size_t Vocabulary::word_index(const std::string& word) const {
  auto it = word_lookup_.find(word);
  return it == word_lookup_.end() ? kUnk : it->second;
}

std::size_t Vocabulary::type_index(const std::string& etype) const {
  auto it = type_lookup_.find(etype);
  return it == type_lookup_.end() ? null_type_index() : it->second;
}

std::size_t Vocabulary::label_index(const std::string& rtype, bool left_to_right) const {
  auto it = relation_lookup_.find(rtype);
  if (it == relation_lookup_.end())
    throw CorpusError("unknown relation type \"" + rtype + "\"");
  return 1 + 2 * it->second + (left_to_right ? 0 : 1);
}

Vocabulary::DecodedLabel Vocabulary::decode_label(std::size_t label) const {
  if (label >= label_count())
    throw CorpusError("label index " + std::to_string(label) + " out of range (" +
                      std::to_string(label_count()) + " labels)");
  DecodedLabel d;
  if (label == kNoRelation) return d;
  d.none = false;
  d.rtype = relation_types_[(label - 1) / 2];
  d.left_to_right = (label - 1) % 2 == 0;
  return d;
}

std::size_t Vocabulary::position_index(long long offset) const {
  const long long clip = static_cast<long long>(position_clip_);
  if (offset < -clip) return 0;
  if (offset > clip) return 2 * position_clip_ + 2;
  return static_cast<std::size_t>(offset + clip) + 1;
}

std::vector<PairInstance> generate_pairs(const Sentence& s, const Vocabulary& vocab,
                                         std::size_t sentence_index) {
  std::vector<PairInstance> pairs;
  if (s.entities.size() < 2) return pairs;

  // Gold labels keyed by ordered entity pair in both directions.
  std::map<std::pair<std::string, std::string>, std::size_t> gold;
  for (const auto& r : s.relations) {
    gold[{r.arg1, r.arg2}] = vocab.label_index(r.rtype, true);
    auto reversed = gold.find({r.arg2, r.arg1});
    if (reversed == gold.end()) gold[{r.arg2, r.arg1}] = vocab.label_index(r.rtype, false);
  }

  pairs.reserve(s.entities.size() * (s.entities.size() - 1));
  for (const auto& head : s.entities) {
    for (const auto& tail : s.entities) {
      if (head.id == tail.id) continue;
      PairInstance p;
      p.sentence_index = sentence_index;
      p.head = head.id;
      p.tail = tail.id;
      auto it = gold.find({head.id, tail.id});
      if (it != gold.end()) p.label = it->second;
      pairs.push_back(std::move(p));
    }
  }
  return pairs;
}

}  // namespace relwalk
