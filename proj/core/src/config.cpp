#include "printopt/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/core.h>

#include "printopt/errors.hpp"

namespace printopt {

namespace {

// The config format is the array-of-tables subset of TOML: top-level
// `key = value` lines plus repeated [[product]] sections. Values are numbers,
// quoted strings, or (nested) numeric arrays.

struct RawValue {
  enum class Kind { Number, Text, Array } kind = Kind::Number;
  double number = 0.0;
  std::string text;
  std::vector<RawValue> items;
};

using RawTable = std::map<std::string, RawValue>;

struct Location {
  const std::string& origin;
  int line;
  std::string str() const { return origin + ":" + std::to_string(line); }
};

[[noreturn]] void parse_fail(const Location& loc, const std::string& message) {
  throw ValidationError(loc.str(), message);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

double parse_number(std::string_view token, const Location& loc) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    parse_fail(loc, "expected a number, got '" + std::string(token) + "'");
  }
  return value;
}

RawValue parse_value(std::string_view text, const Location& loc);

RawValue parse_array(std::string_view text, const Location& loc) {
  RawValue out;
  out.kind = RawValue::Kind::Array;
  std::size_t depth = 0;
  std::size_t start = 1;
  for (std::size_t i = 1; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '[') ++depth;
    if (c == ']' && depth > 0) --depth;
    if ((c == ',' && depth == 0) || i == text.size() - 1) {
      const std::string_view raw = trim(text.substr(start, i - start));
      if (!raw.empty()) out.items.push_back(parse_value(raw, loc));
      start = i + 1;
    }
  }
  return out;
}

RawValue parse_value(std::string_view text, const Location& loc) {
  text = trim(text);
  if (text.empty()) parse_fail(loc, "missing value");
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') parse_fail(loc, "unterminated string");
    RawValue out;
    out.kind = RawValue::Kind::Text;
    out.text = std::string(text.substr(1, text.size() - 2));
    return out;
  }
  if (text.front() == '[') {
    if (text.back() != ']') parse_fail(loc, "unterminated array");
    return parse_array(text, loc);
  }
  RawValue out;
  out.kind = RawValue::Kind::Number;
  out.number = parse_number(text, loc);
  return out;
}

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.') return false;
  }
  return true;
}

struct RawConfig {
  RawTable top;
  std::vector<RawTable> products;
};

RawConfig read_raw(std::istream& in, const std::string& origin) {
  RawConfig cfg;
  RawTable* current = &cfg.top;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const Location loc{origin, line_no};
    const std::string_view body = trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body == "[[product]]") {
        cfg.products.emplace_back();
        current = &cfg.products.back();
        continue;
      }
      parse_fail(loc, "unsupported section '" + std::string(body) + "'");
    }
    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos) parse_fail(loc, "expected key = value");
    const std::string key{trim(body.substr(0, eq))};
    if (!valid_key(key)) parse_fail(loc, "invalid key '" + key + "'");
    if (current->count(key)) parse_fail(loc, "duplicate key '" + key + "'");
    (*current)[key] = parse_value(body.substr(eq + 1), loc);
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Schema interpretation
// ---------------------------------------------------------------------------

double require_number(const RawTable& table, const std::string& key, const std::string& scope) {
  const auto it = table.find(key);
  if (it == table.end()) throw ValidationError(scope + key, "missing required key");
  if (it->second.kind != RawValue::Kind::Number) {
    throw ValidationError(scope + key, "expected a number");
  }
  return it->second.number;
}

std::string require_text(const RawTable& table, const std::string& key,
                         const std::string& scope) {
  const auto it = table.find(key);
  if (it == table.end()) throw ValidationError(scope + key, "missing required key");
  if (it->second.kind != RawValue::Kind::Text) {
    throw ValidationError(scope + key, "expected a quoted string");
  }
  return it->second.text;
}

void reject_unknown(const RawTable& table, std::initializer_list<const char*> allowed,
                    const std::string& scope) {
  for (const auto& [key, value] : table) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) known = true;
    }
    if (!known) throw ValidationError(scope + key, "unknown key");
  }
}

DemandModel build_demand(const RawTable& table, const std::string& scope) {
  const std::string kind = require_text(table, "demand", scope);
  if (kind == "uniform") {
    if (table.count("knots")) {
      throw ValidationError(scope + "knots", "not allowed for uniform demand");
    }
    return DemandModel::uniform(require_number(table, "upper", scope));
  }
  if (kind == "tabulated") {
    if (table.count("upper")) {
      throw ValidationError(scope + "upper", "not allowed for tabulated demand");
    }
    const auto it = table.find("knots");
    if (it == table.end()) throw ValidationError(scope + "knots", "missing required key");
    if (it->second.kind != RawValue::Kind::Array) {
      throw ValidationError(scope + "knots", "expected an array of [x, F] pairs");
    }
    std::vector<CdfKnot> knots;
    for (std::size_t k = 0; k < it->second.items.size(); ++k) {
      const RawValue& pair = it->second.items[k];
      const std::string where = scope + "knots[" + std::to_string(k) + "]";
      if (pair.kind != RawValue::Kind::Array || pair.items.size() != 2 ||
          pair.items[0].kind != RawValue::Kind::Number ||
          pair.items[1].kind != RawValue::Kind::Number) {
        throw ValidationError(where, "expected [x, F]");
      }
      knots.push_back({pair.items[0].number, pair.items[1].number});
    }
    return DemandModel::tabulated(std::move(knots));
  }
  throw ValidationError(scope + "demand", "must be \"uniform\" or \"tabulated\"");
}

}  // namespace

Instance parse_instance(std::istream& in, const std::string& origin) {
  const RawConfig raw = read_raw(in, origin);
  reject_unknown(raw.top, {"K", "Q"}, "");

  Instance inst;
  inst.adoption_cost = require_number(raw.top, "K", "");
  inst.capacity = require_number(raw.top, "Q", "");
  if (raw.products.empty()) {
    throw ValidationError("products", "config defines no [[product]] section");
  }
  for (std::size_t i = 0; i < raw.products.size(); ++i) {
    const RawTable& table = raw.products[i];
    const std::string scope = "products[" + std::to_string(i) + "].";
    reject_unknown(table, {"r", "c_m", "c_p", "demand", "upper", "knots"}, scope);
    Product p;
    p.retail_price = require_number(table, "r", scope);
    p.cost_traditional = require_number(table, "c_m", scope);
    p.cost_print = require_number(table, "c_p", scope);
    try {
      p.demand = build_demand(table, scope);
    } catch (const ValidationError& e) {
      // Demand factory errors carry model-local paths; anchor them here.
      if (e.field().rfind(scope, 0) == 0) throw;
      throw ValidationError(scope + e.field(), e.message());
    }
    inst.products.push_back(std::move(p));
  }
  validate(inst);
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parse_instance(in, path);
}

std::string format_instance(const Instance& inst) {
  std::string out = fmt::format("K = {}\nQ = {}\n", inst.adoption_cost, inst.capacity);
  for (const Product& p : inst.products) {
    out += fmt::format("\n[[product]]\nr = {}\nc_m = {}\nc_p = {}\n", p.retail_price,
                       p.cost_traditional, p.cost_print);
    if (p.demand.is_uniform()) {
      out += fmt::format("demand = \"uniform\"\nupper = {}\n", p.demand.upper());
    } else {
      out += "demand = \"tabulated\"\nknots = [";
      const auto& knots = p.demand.knots();
      for (std::size_t k = 0; k < knots.size(); ++k) {
        out += fmt::format("{}[{}, {}]", k ? ", " : "", knots[k].x, knots[k].F);
      }
      out += "]\n";
    }
  }
  return out;
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << format_instance(inst);
  out.flush();
  if (!out) throw IoError("failed while writing " + path);
}

}  // namespace printopt
