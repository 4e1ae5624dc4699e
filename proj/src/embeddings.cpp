#include "relwalk/embeddings.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace relwalk {

namespace {
constexpr double kInitRange = 0.05;
}

EmbeddingTables EmbeddingTables::init(const Vocabulary& vocab, std::size_t word_dim,
                                      std::size_t type_dim, std::size_t position_dim, Rng& rng) {
  EmbeddingTables t;
  t.word = Tensor::uniform({vocab.word_count(), word_dim}, -kInitRange, kInitRange, rng);
  t.type = Tensor::uniform({vocab.type_count() + 1, type_dim}, -kInitRange, kInitRange, rng);
  t.position = Tensor::uniform({vocab.position_rows(), position_dim}, -kInitRange, kInitRange, rng);
  return t;
}

std::vector<std::string> read_pretrained_words(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pretrained vectors \"" + path + "\"");
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string word;
    if (fields >> word) words.push_back(word);
  }
  return words;
}

PretrainedLoad load_pretrained(const std::string& path, const Vocabulary& vocab,
                               std::size_t word_dim, Rng& rng) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pretrained vectors \"" + path + "\"");

  PretrainedLoad load;
  load.table = Tensor::uniform({vocab.word_count(), word_dim}, -kInitRange, kInitRange, rng);
  load.vocab_words = vocab.words().size();

  std::vector<bool> filled(vocab.word_count(), false);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    std::vector<double> values;
    double v;
    while (fields >> v) values.push_back(v);
    if (values.size() != word_dim)
      throw std::runtime_error("pretrained vectors line " + std::to_string(line_number) + ": " +
                               std::to_string(values.size()) + " values, expected " +
                               std::to_string(word_dim));
    const std::size_t row = vocab.word_index(word);
    if (row == Vocabulary::kUnk) continue;  // word outside the vocabulary
    for (std::size_t d = 0; d < word_dim; ++d) load.table.at(row, d) = values[d];
    if (!filled[row]) {
      filled[row] = true;
      ++load.found_words;
    }
  }
  return load;
}

std::vector<std::vector<double>> embed_sentence(const Sentence& s, const EmbeddingTables& tables,
                                                const Vocabulary& vocab) {
  std::vector<std::vector<double>> out;
  out.reserve(s.tokens.size());
  const std::size_t dim = tables.word.cols();
  for (const auto& token : s.tokens) {
    const std::size_t row = vocab.word_index(token);
    std::vector<double> vec(dim);
    for (std::size_t d = 0; d < dim; ++d) vec[d] = tables.word.at(row, d);
    out.push_back(std::move(vec));
  }
  return out;
}

std::vector<double> embed_position(long long offset, const EmbeddingTables& tables,
                                   const Vocabulary& vocab) {
  const std::size_t row = vocab.position_index(offset);
  const std::size_t dim = tables.position.cols();
  std::vector<double> vec(dim);
  for (std::size_t d = 0; d < dim; ++d) vec[d] = tables.position.at(row, d);
  return vec;
}

}  // namespace relwalk
