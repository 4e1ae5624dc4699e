#include "relwalk/config.hpp"

#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace relwalk {

namespace {

bool power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

void check(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("config: " + what);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

// One mutable binding per key, shared by parse and serialize so the two can
// never drift apart.
struct Field {
  std::function<std::string(const TrainConfig&)> get;
  std::function<void(TrainConfig&, const std::string&)> set;
};

std::size_t to_size(const std::string& v) {
  std::size_t pos = 0;
  const long long parsed = std::stoll(v, &pos);
  if (pos != v.size() || parsed < 0) throw std::invalid_argument("expected a nonnegative integer");
  return static_cast<std::size_t>(parsed);
}

double to_double(const std::string& v) {
  std::size_t pos = 0;
  const double parsed = std::stod(v, &pos);
  if (pos != v.size()) throw std::invalid_argument("expected a number");
  return parsed;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("expected true or false");
}

std::string from_double(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

const std::vector<std::pair<std::string, Field>>& fields() {
  auto size_field = [](std::size_t TrainConfig::* member) {
    return Field{[member](const TrainConfig& c) { return std::to_string(c.*member); },
                 [member](TrainConfig& c, const std::string& v) { c.*member = to_size(v); }};
  };
  auto double_field = [](double TrainConfig::* member) {
    return Field{[member](const TrainConfig& c) { return from_double(c.*member); },
                 [member](TrainConfig& c, const std::string& v) { c.*member = to_double(v); }};
  };
  auto bool_field = [](bool TrainConfig::* member) {
    return Field{[member](const TrainConfig& c) { return c.*member ? "true" : "false"; },
                 [member](TrainConfig& c, const std::string& v) { c.*member = to_bool(v); }};
  };

  static const std::vector<std::pair<std::string, Field>> table = {
      {"word_dim", size_field(&TrainConfig::word_dim)},
      {"type_dim", size_field(&TrainConfig::type_dim)},
      {"position_dim", size_field(&TrainConfig::position_dim)},
      {"lstm_dim", size_field(&TrainConfig::lstm_dim)},
      {"pair_dim", size_field(&TrainConfig::pair_dim)},
      {"walk_length", size_field(&TrainConfig::walk_length)},
      {"beta", double_field(&TrainConfig::beta)},
      {"attention", bool_field(&TrainConfig::attention)},
      {"position_clip", size_field(&TrainConfig::position_clip)},
      {"learning_rate", double_field(&TrainConfig::learning_rate)},
      {"batch_size", size_field(&TrainConfig::batch_size)},
      {"input_dropout", double_field(&TrainConfig::input_dropout)},
      {"output_dropout", double_field(&TrainConfig::output_dropout)},
      {"l2", double_field(&TrainConfig::l2)},
      {"gradient_clip", double_field(&TrainConfig::gradient_clip)},
      {"patience", size_field(&TrainConfig::patience)},
      {"max_epochs", size_field(&TrainConfig::max_epochs)},
      {"seed", Field{[](const TrainConfig& c) { return std::to_string(c.seed); },
                     [](TrainConfig& c, const std::string& v) {
                       c.seed = static_cast<std::uint64_t>(std::stoull(v));
                     }}},
      {"freeze_pretrained", bool_field(&TrainConfig::freeze_pretrained)},
  };
  return table;
}

}  // namespace

void TrainConfig::validate() const {
  check(word_dim > 0, "word_dim must be positive");
  check(type_dim > 0, "type_dim must be positive");
  check(position_dim > 0, "position_dim must be positive");
  check(lstm_dim > 0 && lstm_dim % 2 == 0, "lstm_dim must be positive and even");
  check(pair_dim > 0, "pair_dim must be positive");
  check(power_of_two(walk_length), "walk_length must be a power of two");
  check(beta >= 0.0 && beta <= 1.0, "beta must lie in [0, 1]");
  check(position_clip > 0, "position_clip must be positive");
  check(learning_rate >= 0.0, "learning_rate must be nonnegative");
  check(batch_size >= 1, "batch_size must be at least 1");
  check(input_dropout >= 0.0 && input_dropout < 1.0, "input_dropout must lie in [0, 1)");
  check(output_dropout >= 0.0 && output_dropout < 1.0, "output_dropout must lie in [0, 1)");
  check(l2 >= 0.0, "l2 must be nonnegative");
  check(gradient_clip > 0.0, "gradient_clip must be positive");
  check(patience >= 1, "patience must be at least 1");
  check(max_epochs >= 1, "max_epochs must be at least 1");
}

std::string TrainConfig::serialize() const {
  std::ostringstream out;
  for (const auto& [key, field] : fields()) out << key << " = " << field.get(*this) << "\n";
  return out.str();
}

TrainConfig TrainConfig::parse(const std::string& text) {
  std::map<std::string, const Field*> lookup;
  for (const auto& [key, field] : fields()) lookup[key] = &field;

  TrainConfig config;
  std::istringstream in(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_number) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto it = lookup.find(key);
    if (it == lookup.end())
      throw std::invalid_argument("config line " + std::to_string(line_number) +
                                  ": unknown key \"" + key + "\"");
    try {
      it->second->set(config, value);
    } catch (const std::exception& e) {
      throw std::invalid_argument("config line " + std::to_string(line_number) + ": key \"" +
                                  key + "\": " + e.what());
    }
  }
  return config;
}

std::vector<std::string> TrainConfig::keys() {
  std::vector<std::string> out;
  for (const auto& entry : fields()) out.push_back(entry.first);
  return out;
}

}  // namespace relwalk
