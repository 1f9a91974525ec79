#include "model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace symtherm::cli {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::kValidation, "model: " + what); }

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing section \"") + key + "\"");
  return j.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(where + " must be finite");
  return v;
}

Potential load_potential(const Sft& sft, const std::string& name, const json& j) {
  if (!j.is_object()) bad("potential \"" + name + "\" must be an object");
  const json& d = need(j, "depth");
  if (!d.is_number_integer() || d.get<int>() < 1) bad("potential \"" + name + "\" needs an integer depth >= 1");
  const int depth = d.get<int>();
  const json& table = need(j, "table");
  if (!table.is_object()) bad("potential \"" + name + "\" table must map words to values");
  std::map<Word, double> values;
  for (const auto& [key, v] : table.items()) {
    values[sft.parse_word(key)] = number(v, "potential \"" + name + "\" entry \"" + key + "\"");
  }
  try {
    return Potential::from_table(sft, depth, values);
  } catch (const Error& e) {
    fail(e.kind(), "model: potential \"" + name + "\": " + e.what());
  }
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Model parse_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  const json& alphabet = need(j, "alphabet");
  if (!alphabet.is_array()) bad("\"alphabet\" must be a list of symbol names");
  std::vector<std::string> names;
  for (const auto& a : alphabet) {
    if (!a.is_string()) bad("symbol names must be strings");
    names.push_back(a.get<std::string>());
  }
  const json& inc = need(j, "incidence");
  if (!inc.is_array()) bad("\"incidence\" must be a list of rows");
  std::vector<std::vector<int>> rows;
  for (const auto& row : inc) {
    if (!row.is_array()) bad("incidence rows must be lists of 0/1");
    std::vector<int> r;
    for (const auto& x : row) {
      if (!x.is_number_integer()) bad("incidence entries must be 0 or 1");
      r.push_back(x.get<int>());
    }
    rows.push_back(std::move(r));
  }
  Model m{Sft(names, rows), {}, std::nullopt, std::nullopt, fnv1a_hex(text)};

  if (j.contains("potentials")) {
    const json& pots = j.at("potentials");
    if (!pots.is_object()) bad("\"potentials\" must map names to {depth, table}");
    for (const auto& [name, p] : pots.items()) m.potentials.emplace(name, load_potential(m.sft, name, p));
  }
  if (j.contains("ifs")) {
    const json& f = j.at("ifs");
    const json& iv = need(f, "interval");
    if (!iv.is_array() || iv.size() != 2) bad("ifs interval must be [u, v]");
    const Interval interval{number(iv[0], "ifs interval"), number(iv[1], "ifs interval")};
    const json& maps = need(f, "maps");
    if (!maps.is_object()) bad("ifs maps must map symbol names to {rate, offset}");
    std::vector<std::optional<AffineMap>> by_symbol(static_cast<std::size_t>(m.sft.size()));
    for (const auto& [name, g] : maps.items()) {
      const auto s = m.sft.find(name);
      if (!s) bad("ifs map for unknown symbol \"" + name + "\"");
      by_symbol[static_cast<std::size_t>(*s)] =
          AffineMap{number(need(g, "rate"), "ifs rate"), number(need(g, "offset"), "ifs offset")};
    }
    std::vector<AffineMap> list;
    for (Symbol a = 0; a < m.sft.size(); ++a) {
      if (!by_symbol[static_cast<std::size_t>(a)]) bad("ifs has no map for symbol \"" + m.sft.name(a) + "\"");
      list.push_back(*by_symbol[static_cast<std::size_t>(a)]);
    }
    m.ifs.emplace(m.sft, interval, std::move(list));
  }
  if (j.contains("gibbs")) {
    if (!j.at("gibbs").is_string()) bad("\"gibbs\" must name a potential");
    m.gibbs = j.at("gibbs").get<std::string>();
    if (!m.potentials.count(*m.gibbs)) bad("\"gibbs\" names unknown potential \"" + *m.gibbs + "\"");
  }
  return m;
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kValidation, "cannot open model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

}  // namespace symtherm::cli
