#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ballavg/grid.hpp"

namespace ballavg::io {

/// Ordered key=value block. Keys keep insertion order so that emitted text
/// is stable and diffable.
class KeyValues {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, long value);
  void set(const std::string& key, int value) { set(key, static_cast<long>(value)); }

  bool contains(const std::string& key) const;
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  void write(std::ostream& os) const;
  /// Parses `key=value` tokens separated by whitespace or newlines; lines
  /// starting with '#' are comments.
  static KeyValues parse(const std::string& text);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_number(double value);
double parse_number(const std::string& text);

/// GF1 text grid format: a `GF1 dim=<n> N=<N>` header line followed by N^n
/// whitespace-separated samples in lexicographic order.
void write_gf1(std::ostream& os, const GridFunction& f);
GridFunction read_gf1(std::istream& is);

void save_gf1(const std::string& path, const GridFunction& f);
GridFunction load_gf1(const std::string& path);

/// A key=value header followed by a GF1 block; used by gradient candidates
/// and norm reports that carry a per-point field.
void write_annotated(std::ostream& os, const KeyValues& header, const GridFunction& f);
std::pair<KeyValues, GridFunction> read_annotated(std::istream& is);

}  // namespace ballavg::io
