#pragma once

#include <string>
#include <vector>

#include "relwalk/dataset.hpp"
#include "relwalk/rng.hpp"
#include "relwalk/tensor.hpp"

namespace relwalk {

// Lookup tables for words, entity types and clipped position offsets. The
// type table carries one extra row shared by tokens outside any mention.
struct EmbeddingTables {
  Tensor word;      // word_count x word_dim
  Tensor type;      // (type_count + 1) x type_dim
  Tensor position;  // position_rows x position_dim

  static EmbeddingTables init(const Vocabulary& vocab, std::size_t word_dim,
                              std::size_t type_dim, std::size_t position_dim, Rng& rng);
};

struct PretrainedLoad {
  Tensor table;                 // word_count x word_dim
  std::size_t found_words = 0;  // vocabulary words present in the file
  std::size_t vocab_words = 0;  // vocabulary words excluding PAD and UNK

  double coverage() const {
    return vocab_words == 0 ? 0.0 : double(found_words) / double(vocab_words);
  }
};

/// Word list of a pretrained vector file, for vocabulary union before loading.
std::vector<std::string> read_pretrained_words(const std::string& path);

/// Rows for vocabulary words found in the file come from the file; all other
/// rows (PAD, UNK, missing words) are randomly initialized.
PretrainedLoad load_pretrained(const std::string& path, const Vocabulary& vocab,
                               std::size_t word_dim, Rng& rng);

/// Plain lookups for inspection and tests; the training path gathers rows
/// through the graph instead.
std::vector<std::vector<double>> embed_sentence(const Sentence& s, const EmbeddingTables& tables,
                                                const Vocabulary& vocab);
std::vector<double> embed_position(long long offset, const EmbeddingTables& tables,
                                   const Vocabulary& vocab);

}  // namespace relwalk
