#include "fracepi/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <variant>

#include "fracepi/errors.hpp"

namespace fracepi {

void RunConfig::validate() const {
  params.validate();
  if (alphas.empty()) throw ValidationError("at least one order is required");
  for (double a : alphas) {
    if (!(a > 0.0 && a <= 1.0)) throw ValidationError("order must lie in (0,1]");
  }
  for (const auto& s : initial_states) {
    if (!s.allFinite() || !is_nonnegative(s)) {
      throw ValidationError("initial states must be finite and non-negative");
    }
  }
  if (!(step > 0.0)) throw ValidationError("step must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw ValidationError("t_end must be finite and non-negative");
  }
  if (corrector_iterations < 1) {
    throw ValidationError("corrector_iterations must be at least 1");
  }
  if (format != "csv") throw ValidationError("unsupported output format '" + format + "'");
}

RunConfig config_from_preset(const std::string& name) {
  const Preset& p = find_preset(name);
  RunConfig c;
  c.preset = p.name;
  c.params = p.params;
  c.initial_states = p.initial_states;
  c.t_end = p.t_end;
  c.theta2_reference_theta = p.theta2_reference_theta;
  return c;
}

namespace {

struct Value {
  // number, string, or list of values
  std::variant<double, std::string, std::vector<Value>> v;
};

class Parser {
 public:
  Parser(const std::string& text, std::string where)
      : s_(text), where_(std::move(where)) {}

  Value parse_value() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '[') return parse_list();
    if (c == '"') return parse_quoted();
    if (c == '-' || c == '+' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) {
      return parse_number_or_word();
    }
    return Value{parse_word()};
  }

  void expect_end() {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] != '#') fail("unexpected trailing text");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ValidationError(where_ + ": " + msg + " (column " +
                          std::to_string(pos_ + 1) + ")");
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  Value parse_list() {
    ++pos_;  // '['
    std::vector<Value> items;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return Value{items};
    }
    while (true) {
      items.push_back(parse_value());
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated list");
      if (s_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (s_[pos_] == ']') {
        ++pos_;
        return Value{items};
      }
      fail("expected ',' or ']'");
    }
  }

  Value parse_quoted() {
    ++pos_;
    const auto end = s_.find('"', pos_);
    if (end == std::string::npos) fail("unterminated string");
    std::string out = s_.substr(pos_, end - pos_);
    pos_ = end + 1;
    return Value{out};
  }

  std::string parse_word() {
    const std::size_t start = pos_;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
          c == '-' || c == '/' || c == '+') {
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ == start) fail("expected a value");
    return s_.substr(start, pos_ - start);
  }

  Value parse_number_or_word() {
    const std::string word = parse_word();
    const char* first = word.data();
    if (*first == '+') ++first;
    double v = 0.0;
    auto res = std::from_chars(first, word.data() + word.size(), v);
    if (res.ec == std::errc() && res.ptr == word.data() + word.size()) {
      return Value{v};
    }
    return Value{word};
  }

  const std::string& s_;
  std::string where_;
  std::size_t pos_ = 0;
};

struct Entry {
  Value value;
  std::string where;
};

[[noreturn]] void fail_at(const Entry& e, const std::string& msg) {
  throw ValidationError(e.where + ": " + msg);
}

double as_number(const Entry& e) {
  if (auto* d = std::get_if<double>(&e.value.v)) return *d;
  fail_at(e, "expected a number");
}

std::string as_string(const Entry& e) {
  if (auto* s = std::get_if<std::string>(&e.value.v)) return *s;
  if (auto* d = std::get_if<double>(&e.value.v)) return std::to_string(*d);
  fail_at(e, "expected a string");
}

std::vector<double> as_numbers(const Entry& e) {
  if (auto* d = std::get_if<double>(&e.value.v)) return {*d};
  const auto* list = std::get_if<std::vector<Value>>(&e.value.v);
  if (!list) fail_at(e, "expected a number or a list of numbers");
  std::vector<double> out;
  for (const auto& item : *list) {
    const auto* d = std::get_if<double>(&item.v);
    if (!d) fail_at(e, "list items must be numbers");
    out.push_back(*d);
  }
  return out;
}

std::vector<State> as_states(const Entry& e) {
  const auto* list = std::get_if<std::vector<Value>>(&e.value.v);
  if (!list) fail_at(e, "expected a list of [S, I, P] triples");
  std::vector<State> out;
  for (const auto& item : *list) {
    const auto* triple = std::get_if<std::vector<Value>>(&item.v);
    if (!triple || triple->size() != 3) fail_at(e, "each state must be [S, I, P]");
    State s;
    for (int i = 0; i < 3; ++i) {
      const auto* d = std::get_if<double>(&(*triple)[static_cast<std::size_t>(i)].v);
      if (!d) fail_at(e, "state components must be numbers");
      s[i] = *d;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace

RunConfig parse_config(std::istream& is, const std::string& source) {
  std::map<std::string, Entry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no);
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(where + ": expected 'key = value'");
    }
    std::string key = line.substr(first, eq - first);
    while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
    if (key.empty()) throw ValidationError(where + ": empty key");
    for (char c : key) {
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) {
        throw ValidationError(where + ": invalid character in key '" + key + "'");
      }
    }
    std::string rest = line.substr(eq + 1);
    if (!rest.empty() && rest.back() == '\r') rest.pop_back();
    Parser parser(rest, where);
    Value v = parser.parse_value();
    parser.expect_end();
    if (entries.count(key)) throw ValidationError(where + ": duplicate key '" + key + "'");
    entries.emplace(key, Entry{std::move(v), where});
  }

  RunConfig cfg;
  if (auto it = entries.find("model.preset"); it != entries.end()) {
    try {
      cfg = config_from_preset(as_string(it->second));
    } catch (const ValidationError& err) {
      fail_at(it->second, err.what());
    }
    entries.erase(it);
  }

  for (const auto& [key, entry] : entries) {
    if (key.rfind("model.", 0) == 0) {
      const std::string name = key.substr(6);
      const double v = as_number(entry);
      try {
        param_ref(cfg.params, name) = v;
      } catch (const ValidationError&) {
        fail_at(entry, "unknown key '" + key + "'");
      }
    } else if (key == "solver.alpha") {
      cfg.alphas = as_numbers(entry);
    } else if (key == "solver.step") {
      cfg.step = as_number(entry);
    } else if (key == "solver.t_end") {
      cfg.t_end = as_number(entry);
    } else if (key == "solver.corrector_iterations") {
      const double v = as_number(entry);
      if (v != std::floor(v) || v < 1) fail_at(entry, "expected a positive integer");
      cfg.corrector_iterations = static_cast<int>(v);
    } else if (key == "solver.memory_truncation") {
      if (auto* s = std::get_if<std::string>(&entry.value.v); s && *s == "none") {
        cfg.memory_truncation.reset();
      } else {
        const double v = as_number(entry);
        if (v != std::floor(v) || v < 1) fail_at(entry, "expected a positive integer or none");
        cfg.memory_truncation = static_cast<std::size_t>(v);
      }
    } else if (key == "run.initial_states") {
      cfg.initial_states = as_states(entry);
    } else if (key == "output.dir") {
      cfg.out_dir = as_string(entry);
    } else if (key == "output.format") {
      cfg.format = as_string(entry);
    } else if (key == "analysis.theta2_reference_theta") {
      cfg.theta2_reference_theta = as_number(entry);
    } else {
      fail_at(entry, "unknown key '" + key + "'");
    }
  }

  try {
    cfg.validate();
  } catch (const ValidationError& err) {
    throw ValidationError(source + ": " + err.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

}  // namespace fracepi
