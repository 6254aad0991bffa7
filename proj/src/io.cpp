#include "ballavg/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace ballavg::io {

std::string format_number(double value) {
  if (value == kInf) return "inf";
  if (value == -kInf) return "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

double parse_number(const std::string& text) {
  if (text == "inf" || text == "infinity") return kInf;
  if (text == "-inf") return -kInf;
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw DomainError("not a number: '" + text + "'");
  }
  return v;
}

void KeyValues::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void KeyValues::set(const std::string& key, double value) { set(key, format_number(value)); }

void KeyValues::set(const std::string& key, long value) { set(key, std::to_string(value)); }

bool KeyValues::contains(const std::string& key) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto& e) { return e.first == key; });
}

const std::string& KeyValues::get(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  throw DomainError("missing key '" + key + "'");
}

std::string KeyValues::get_or(const std::string& key, const std::string& fallback) const {
  return contains(key) ? get(key) : fallback;
}

double KeyValues::number(const std::string& key) const { return parse_number(get(key)); }

double KeyValues::number_or(const std::string& key, double fallback) const {
  return contains(key) ? number(key) : fallback;
}

void KeyValues::write(std::ostream& os) const {
  for (const auto& [k, v] : entries_) os << k << '=' << v << '\n';
}

KeyValues KeyValues::parse(const std::string& text) {
  KeyValues kv;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string tok;
    while (tokens >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw DomainError("expected key=value, got '" + tok + "'");
      }
      kv.set(tok.substr(0, eq), tok.substr(eq + 1));
    }
  }
  return kv;
}

void write_gf1(std::ostream& os, const GridFunction& f) {
  os << "GF1 dim=" << f.dim() << " N=" << f.samples_per_axis() << '\n';
  const int n = f.samples_per_axis();
  std::size_t i = 0;
  for (double v : f.values()) {
    os << format_number(v);
    ++i;
    os << ((i % static_cast<std::size_t>(n) == 0) ? '\n' : ' ');
  }
}

namespace {

int header_field(const std::string& token, const char* name) {
  const std::string prefix = std::string(name) + "=";
  if (token.rfind(prefix, 0) != 0) {
    throw DomainError("GF1 header: expected " + prefix + "<int>, got '" + token + "'");
  }
  int v = 0;
  const std::string digits = token.substr(prefix.size());
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw DomainError("GF1 header: bad integer in '" + token + "'");
  }
  return v;
}

GridFunction read_gf1_after_header(const std::string& header, std::istream& is) {
  std::istringstream hs(header);
  std::string magic, dim_tok, n_tok;
  hs >> magic >> dim_tok >> n_tok;
  if (magic != "GF1") throw DomainError("not a GF1 file (header '" + header + "')");
  const int dim = header_field(dim_tok, "dim");
  const int n = header_field(n_tok, "N");
  check_geometry(dim, n);
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
  std::vector<double> values;
  values.reserve(total);
  std::string tok;
  while (values.size() < total && is >> tok) values.push_back(parse_number(tok));
  if (values.size() != total) {
    throw DomainError("GF1: expected " + std::to_string(total) + " samples, found " +
                      std::to_string(values.size()));
  }
  if (is >> tok) throw DomainError("GF1: trailing data after the samples");
  return GridFunction(dim, n, std::move(values));
}

}  // namespace

GridFunction read_gf1(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw DomainError("GF1: empty input");
  return read_gf1_after_header(header, is);
}

void save_gf1(const std::string& path, const GridFunction& f) {
  std::ofstream os(path);
  if (!os) throw DomainError("cannot open '" + path + "' for writing");
  write_gf1(os, f);
}

GridFunction load_gf1(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("cannot open '" + path + "'");
  return read_gf1(is);
}

void write_annotated(std::ostream& os, const KeyValues& header, const GridFunction& f) {
  header.write(os);
  write_gf1(os, f);
}

std::pair<KeyValues, GridFunction> read_annotated(std::istream& is) {
  std::string line, block;
  while (std::getline(is, line)) {
    if (line.rfind("GF1", 0) == 0) {
      KeyValues kv = KeyValues::parse(block);
      return {std::move(kv), read_gf1_after_header(line, is)};
    }
    block += line;
    block += '\n';
  }
  throw DomainError("annotated file has no GF1 block");
}

}  // namespace ballavg::io
