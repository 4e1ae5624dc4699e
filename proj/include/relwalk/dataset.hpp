#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace relwalk {

struct EntityMention {
  std::string id;
  std::size_t start;  // token index, inclusive
  std::size_t end;    // token index, exclusive
  std::string etype;

  /// Position anchor of the mention: its first token.
  std::size_t anchor() const { return start; }

  bool operator==(const EntityMention&) const = default;
};

struct GoldRelation {
  std::string arg1;
  std::string arg2;
  std::string rtype;

  bool operator==(const GoldRelation&) const = default;
};

struct Sentence {
  std::vector<std::string> tokens;
  std::vector<EntityMention> entities;
  std::vector<GoldRelation> relations;

  const EntityMention& entity(const std::string& id) const;

  bool operator==(const Sentence&) const = default;
};

using Corpus = std::vector<Sentence>;

struct CorpusError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structural validation: spans in bounds, ids unique, relations referencing
/// two distinct existing entities. Overlapping or nested spans are legal.
void validate_sentence(const Sentence& s);

/// One JSON object per line with keys tokens, entities, relations.
Corpus parse_corpus(std::istream& in);
Corpus parse_corpus_file(const std::string& path);

std::string serialize_sentence(const Sentence& s);
void write_corpus(const Corpus& corpus, const std::string& path);

/// Signed token offset of `from` relative to `to`: negative when `from`
/// precedes `to` in reading order.
inline long long relative_position(std::size_t from, std::size_t to) {
  return static_cast<long long>(from) - static_cast<long long>(to);
}

// Index spaces for words, entity types, directional relation labels and
// clipped position offsets. Construction is deterministic: every table is
// filled in sorted order.
class Vocabulary {
 public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kUnk = 1;

  Vocabulary() = default;

  static Vocabulary build(const Corpus& corpus,
                          const std::vector<std::string>* pretrained_words = nullptr,
                          std::size_t position_clip = 60);

  std::size_t word_index(const std::string& word) const;  // UNK for unknown words
  std::size_t word_count() const { return words_.size() + 2; }
  const std::vector<std::string>& words() const { return words_; }

  /// Unknown types map to the shared null row, keeping lookups total.
  std::size_t type_index(const std::string& etype) const;
  std::size_t null_type_index() const { return types_.size(); }
  std::size_t type_count() const { return types_.size(); }
  const std::vector<std::string>& types() const { return types_; }

  std::size_t relation_count() const { return relation_types_.size(); }
  const std::vector<std::string>& relation_types() const { return relation_types_; }

  /// 2r+1 directional labels: 0 is "no relation", each relation type owns a
  /// left-to-right and a right-to-left slot.
  std::size_t label_count() const { return 2 * relation_types_.size() + 1; }
  static constexpr std::size_t kNoRelation = 0;
  std::size_t label_index(const std::string& rtype, bool left_to_right) const;

  struct DecodedLabel {
    bool none = true;
    std::string rtype;
    bool left_to_right = true;
  };
  DecodedLabel decode_label(std::size_t label) const;

  /// Offsets clip to [-clip, clip]; anything beyond shares one far bucket
  /// per side.
  std::size_t position_index(long long offset) const;
  std::size_t position_clip() const { return position_clip_; }
  std::size_t position_rows() const { return 2 * position_clip_ + 3; }

  bool operator==(const Vocabulary&) const = default;

  // Checkpoint (de)serialization hooks; the binary layout lives there.
  const std::vector<std::string>& raw_words() const { return words_; }
  static Vocabulary from_parts(std::vector<std::string> words, std::vector<std::string> types,
                               std::vector<std::string> relations, std::size_t position_clip);

 private:
  std::vector<std::string> words_;           // sorted, excludes PAD/UNK
  std::vector<std::string> types_;           // sorted
  std::vector<std::string> relation_types_;  // sorted
  std::map<std::string, std::size_t> word_lookup_;
  std::map<std::string, std::size_t> type_lookup_;
  std::map<std::string, std::size_t> relation_lookup_;
  std::size_t position_clip_ = 60;

  void rebuild_lookups();
};

// One ordered candidate pair with its gold label index.
struct PairInstance {
  std::size_t sentence_index = 0;
  std::string head;
  std::string tail;
  std::size_t label = Vocabulary::kNoRelation;
};

/// All n(n-1) ordered entity pairs of a sentence. A pair matching a gold
/// relation (arg1=head, arg2=tail) carries the left-to-right label, the
/// reversed pair the right-to-left label, everything else "no relation".
std::vector<PairInstance> generate_pairs(const Sentence& s, const Vocabulary& vocab,
                                         std::size_t sentence_index = 0);

}  // namespace relwalk
