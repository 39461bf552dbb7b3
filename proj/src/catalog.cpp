#include "plsoff/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <vector>

#include "plsoff/errors.hpp"

namespace plsoff {
namespace {

std::string canonical(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == ' ' || c == '_') c = '-';
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace

const PqcScheme& lookup(std::string_view name) {
  const std::string key = canonical(name);
  const PqcScheme* best = &kCatalog.front();
  std::size_t best_dist = std::string::npos;
  for (const auto& row : kCatalog) {
    const std::string cand = canonical(row.name);
    if (cand == key) return row;
    const std::size_t d = edit_distance(key, cand);
    if (d < best_dist) {
      best_dist = d;
      best = &row;
    }
  }
  throw UnknownSchemeError(std::string(name), std::string(best->name));
}

std::string catalog_csv() {
  std::ostringstream os;
  os << "name,level,pub,priv,ct_sig,cycles_per_bit\n";
  for (const auto& row : kCatalog) {
    os << row.name << ',';
    if (row.security_level == 0)
      os << "NA";
    else
      os << row.security_level;
    os << ',' << row.pub_key_bytes << ',' << row.priv_key_bytes << ',' << row.ct_or_sig_bytes << ','
       << static_cast<long long>(row.cycles_per_bit) << '\n';
  }
  return os.str();
}

}  // namespace plsoff
