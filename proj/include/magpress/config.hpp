#pragma once

// Run configuration: a small TOML subset (tables, key = value, numbers,
// booleans, strings, nested arrays, comments) plus typed accessors that
// report the offending key and line on error.

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "magpress/errors.hpp"
#include "magpress/medium.hpp"

namespace magpress::config {

class ConfigError : public Error {
public:
  using Error::Error;
};

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<double, bool, std::string, Array> data;
  int line = 0;

  bool is_number() const { return std::holds_alternative<double>(data); }
  bool is_bool() const { return std::holds_alternative<bool>(data); }
  bool is_string() const { return std::holds_alternative<std::string>(data); }
  bool is_array() const { return std::holds_alternative<Array>(data); }
};

using Table = std::map<std::string, Value>;

class Document {
public:
  static Document parse(const std::string &text,
                        const std::string &origin = "<config>") {
    Document doc;
    doc.origin_ = origin;
    doc.tables_[""];
    Parser p{text, origin};
    p.run(doc);
    return doc;
  }

  static Document load(const std::string &path) {
    std::ifstream in(path);
    if (!in)
      throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
  }

  const std::string &origin() const { return origin_; }

  bool has_table(const std::string &table) const {
    return tables_.count(table) != 0;
  }

  const Value *find(const std::string &table, const std::string &key) const {
    const auto t = tables_.find(table);
    if (t == tables_.end())
      return nullptr;
    const auto v = t->second.find(key);
    return v == t->second.end() ? nullptr : &v->second;
  }

  std::string where(const std::string &table, const std::string &key,
                    int line) const {
    std::ostringstream s;
    s << origin_ << ":" << line << ": field '"
      << (table.empty() ? key : table + "." + key) << "'";
    return s.str();
  }

  std::optional<double> number(const std::string &table,
                               const std::string &key) const {
    const auto *v = find(table, key);
    if (!v)
      return std::nullopt;
    if (!v->is_number())
      throw ConfigError(where(table, key, v->line) + " must be a number");
    return std::get<double>(v->data);
  }

  std::optional<std::string> string(const std::string &table,
                                    const std::string &key) const {
    const auto *v = find(table, key);
    if (!v)
      return std::nullopt;
    if (!v->is_string())
      throw ConfigError(where(table, key, v->line) + " must be a string");
    return std::get<std::string>(v->data);
  }

  std::optional<std::vector<double>> numbers(const std::string &table,
                                             const std::string &key) const {
    const auto *v = find(table, key);
    if (!v)
      return std::nullopt;
    return as_numbers(*v, table, key);
  }

  std::vector<double> as_numbers(const Value &v, const std::string &table,
                                 const std::string &key) const {
    if (!v.is_array())
      throw ConfigError(where(table, key, v.line) + " must be an array of numbers");
    std::vector<double> out;
    for (const auto &e : std::get<Array>(v.data)) {
      if (!e.is_number())
        throw ConfigError(where(table, key, v.line) +
                          " must contain only numbers");
      out.push_back(std::get<double>(e.data));
    }
    return out;
  }

private:
  struct Parser {
    const std::string &text;
    const std::string &origin;
    std::size_t pos = 0;
    int line = 1;

    [[noreturn]] void fail(const std::string &what) const {
      std::ostringstream s;
      s << origin << ":" << line << ": " << what;
      throw ConfigError(s.str());
    }

    bool at_end() const { return pos >= text.size(); }
    char peek() const { return at_end() ? '\0' : text[pos]; }

    void skip_blank(bool newlines) {
      while (!at_end()) {
        const char c = text[pos];
        if (c == '#') {
          while (!at_end() && text[pos] != '\n')
            ++pos;
        } else if (c == ' ' || c == '\t' || c == '\r') {
          ++pos;
        } else if (c == '\n' && newlines) {
          ++pos;
          ++line;
        } else {
          break;
        }
      }
    }

    std::string bare_key() {
      std::string key;
      while (!at_end()) {
        const char c = text[pos];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
            c == '-' || c == '.') {
          key += c;
          ++pos;
        } else {
          break;
        }
      }
      if (key.empty())
        fail("expected a key");
      return key;
    }

    Value value() {
      Value v;
      v.line = line;
      const char c = peek();
      if (c == '[') {
        ++pos;
        Array arr;
        const int opened = line;
        skip_blank(true);
        while (peek() != ']') {
          if (at_end()) {
            line = opened;
            fail("unterminated array");
          }
          arr.push_back(value());
          skip_blank(true);
          if (peek() == ',') {
            ++pos;
            skip_blank(true);
          } else if (at_end()) {
            line = opened;
            fail("unterminated array");
          } else if (peek() != ']') {
            fail("expected ',' or ']' in array");
          }
        }
        ++pos;
        v.data = std::move(arr);
      } else if (c == '"') {
        ++pos;
        std::string s;
        while (peek() != '"') {
          if (at_end() || peek() == '\n')
            fail("unterminated string");
          char ch = text[pos++];
          if (ch == '\\') {
            const char esc = text[pos++];
            ch = esc == 'n' ? '\n' : esc == 't' ? '\t' : esc;
          }
          s += ch;
        }
        ++pos;
        v.data = std::move(s);
      } else if (text.compare(pos, 4, "true") == 0) {
        pos += 4;
        v.data = true;
      } else if (text.compare(pos, 5, "false") == 0) {
        pos += 5;
        v.data = false;
      } else {
        std::size_t end = pos;
        while (end < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[end])) ||
                text[end] == '.' || text[end] == '+' || text[end] == '-' ||
                text[end] == '_'))
          ++end;
        std::string token = text.substr(pos, end - pos);
        std::erase(token, '_');
        if (token == "inf" || token == "+inf")
          v.data = kInf;
        else if (token == "-inf")
          v.data = -kInf;
        else {
          double d = 0.0;
          const char *first = token.data();
          if (!token.empty() && token[0] == '+')
            ++first;
          const auto res = std::from_chars(first, token.data() + token.size(), d);
          if (token.empty() || res.ec != std::errc() ||
              res.ptr != token.data() + token.size())
            fail("cannot parse value '" + token + "'");
          v.data = d;
        }
        pos = end;
      }
      return v;
    }

    void run(Document &doc) {
      std::string current;
      while (true) {
        skip_blank(true);
        if (at_end())
          break;
        if (peek() == '[') {
          ++pos;
          skip_blank(false);
          current = bare_key();
          skip_blank(false);
          if (peek() != ']')
            fail("expected ']' after table name");
          ++pos;
          if (doc.tables_.count(current) && current != "")
            fail("table [" + current + "] defined twice");
          doc.tables_[current];
        } else {
          const int key_line = line;
          const std::string key = bare_key();
          skip_blank(false);
          if (peek() != '=')
            fail("expected '=' after key '" + key + "'");
          ++pos;
          skip_blank(false);
          Value v = value();
          v.line = key_line;
          auto &table = doc.tables_[current];
          if (table.count(key))
            fail("duplicate key '" + key + "'");
          table.emplace(key, std::move(v));
        }
        skip_blank(false);
        if (!at_end() && peek() != '\n')
          fail("unexpected trailing characters");
      }
    }
  };

  std::string origin_;
  std::map<std::string, Table> tables_;
};

enum class UnitSystem { natural, si };

// SI constants used only at the I/O boundary.
inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kHbar = 1.054571817e-34;
inline constexpr double kZ0 = 376.730313668;

// Converts between natural units (c = 1, frequency unit omega_ref) and SI.
struct Units {
  UnitSystem system = UnitSystem::natural;
  double omega_ref = 1.0; // rad/s when system == si

  bool si() const { return system == UnitSystem::si; }
  double freq_in(double w) const { return si() ? w / omega_ref : w; }
  double freq_out(double w) const { return si() ? w * omega_ref : w; }
  double length_in(double x) const {
    return si() ? x * omega_ref / kSpeedOfLight : x;
  }
  double length_out(double x) const {
    return si() ? x * kSpeedOfLight / omega_ref : x;
  }
  double wavenumber_in(double k) const { return si() ? k / length_in(1.0) : k; }
  double wavenumber_out(double k) const { return si() ? k / length_out(1.0) : k; }
  double area_in(double a) const { return si() ? a * std::pow(length_in(1.0), 2) : a; }
  double time_in(double t) const { return si() ? t * omega_ref : t; }
  double time_out(double t) const { return si() ? t / omega_ref : t; }
};

struct RunConfig {
  Document doc;
  Units units;
  MediumModel medium;
  bool has_medium = false;

  // Named table value with unit conversion left to the caller.
  std::optional<double> number(const std::string &table,
                               const std::string &key) const {
    return doc.number(table, key);
  }

  // Strictly increasing grid from `key = [..]` or `key_range = [a, b, n]`.
  std::optional<std::vector<double>> grid(const std::string &table,
                                          const std::string &key) const {
    std::vector<double> values;
    int line = 0;
    if (const auto *v = doc.find(table, key)) {
      line = v->line;
      if (v->is_number())
        values = {std::get<double>(v->data)};
      else
        values = doc.as_numbers(*v, table, key);
    } else if (const auto *r = doc.find(table, key + "_range")) {
      line = r->line;
      const auto spec = doc.as_numbers(*r, table, key + "_range");
      if (spec.size() != 3 || spec[2] < 1 || spec[2] != std::floor(spec[2]))
        throw ConfigError(doc.where(table, key + "_range", line) +
                          " must be [start, stop, count] with integer count >= 1");
      const auto n = static_cast<int>(spec[2]);
      for (int i = 0; i < n; ++i)
        values.push_back(n == 1 ? spec[0]
                                : spec[0] + (spec[1] - spec[0]) * i / (n - 1));
    } else {
      return std::nullopt;
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i]) || (i > 0 && !(values[i] > values[i - 1])))
        throw ConfigError(doc.where(table, key, line) +
                          " must be finite and strictly increasing");
    }
    return values;
  }
};

namespace detail {

inline std::vector<ResonancePair> read_resonances(const Document &doc,
                                                  const Units &units,
                                                  const std::string &key) {
  std::vector<ResonancePair> out;
  const auto *v = doc.find("medium", key);
  if (!v)
    return out;
  if (!v->is_array())
    throw ConfigError(doc.where("medium", key, v->line) +
                      " must be an array of [omega_T, omega_L, gamma] rows");
  for (const auto &row : std::get<Array>(v->data)) {
    const auto nums = doc.as_numbers(row, "medium", key);
    if (nums.size() != 2 && nums.size() != 3)
      throw ConfigError(doc.where("medium", key, v->line) +
                        " rows must be [omega_T, omega_L] or "
                        "[omega_T, omega_L, gamma]");
    out.push_back({units.freq_in(nums[0]), units.freq_in(nums[1]),
                   nums.size() == 3 ? units.freq_in(nums[2]) : 0.0});
  }
  return out;
}

inline std::optional<cplx> read_frozen(const Document &doc,
                                       const std::string &key) {
  const auto *v = doc.find("medium", key);
  if (!v)
    return std::nullopt;
  if (v->is_number())
    return cplx(std::get<double>(v->data), 0.0);
  const auto nums = doc.as_numbers(*v, "medium", key);
  if (nums.size() != 2)
    throw ConfigError(doc.where("medium", key, v->line) +
                      " must be a number or [re, im]");
  return cplx(nums[0], nums[1]);
}

} // namespace detail

inline RunConfig interpret(Document doc) {
  RunConfig cfg;
  const auto system = doc.string("", "units").value_or("natural");
  if (system == "SI" || system == "si") {
    cfg.units.system = UnitSystem::si;
    const auto *ref = doc.find("", "omega_ref");
    if (!ref)
      throw ConfigError(doc.origin() +
                        ": field 'omega_ref' is required when units = \"SI\"");
    const double w = doc.number("", "omega_ref").value();
    if (!(w > 0.0))
      throw ConfigError(doc.where("", "omega_ref", ref->line) + " must be positive");
    cfg.units.omega_ref = w;
  } else if (system != "natural") {
    throw ConfigError(doc.where("", "units", doc.find("", "units")->line) +
                      " must be \"natural\" or \"SI\"");
  }

  if (doc.has_table("medium")) {
    cfg.has_medium = true;
    const auto electric = detail::read_resonances(doc, cfg.units, "electric");
    const auto magnetic = detail::read_resonances(doc, cfg.units, "magnetic");
    const double tol = doc.number("medium", "degeneracy_tol").value_or(1e-9);
    const auto feps = detail::read_frozen(doc, "frozen_eps");
    const auto fmu = detail::read_frozen(doc, "frozen_mu");
    auto line_of = [&](const char *key) {
      const auto *v = doc.find("medium", key);
      return v ? v->line : 0;
    };
    try {
      if (feps || fmu) {
        if (!electric.empty() || !magnetic.empty())
          throw ConfigError(doc.where("medium", "frozen_eps",
                                      line_of(feps ? "frozen_eps" : "frozen_mu")) +
                            " cannot be combined with resonance lists");
        cfg.medium = MediumModel::frozen(feps.value_or(1.0), fmu.value_or(1.0));
      } else {
        cfg.medium = MediumModel(electric, magnetic, tol);
      }
    } catch (const ModelError &e) {
      throw ConfigError(doc.origin() + ": [medium] (line " +
                        std::to_string(std::max(line_of("electric"),
                                                line_of("magnetic"))) +
                        "): " + e.what());
    }
  }
  cfg.doc = std::move(doc);
  return cfg;
}

inline RunConfig load(const std::string &path) {
  return interpret(Document::load(path));
}

} // namespace magpress::config
