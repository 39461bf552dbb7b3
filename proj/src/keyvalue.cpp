#include "plsoff/keyvalue.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "plsoff/errors.hpp"

namespace plsoff::kv {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

Document Document::parse(std::string_view text, const std::string& origin) {
  Document doc;
  doc.origin_ = origin;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw InvalidConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw InvalidConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
    doc.values_[key] = std::string(trim(line.substr(eq + 1)));
  }
  return doc;
}

Document Document::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

void Document::set(const std::string& key, std::string value) { values_[key] = std::move(value); }

const std::string& Document::at(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw InvalidConfigError(origin_ + ": missing key '" + key + "'");
  return it->second;
}

double parse_double(std::string_view s, const std::string& context) {
  s = trim(s);
  double v = 0.0;
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw InvalidConfigError(context + ": not a number: '" + std::string(s) + "'");
  return v;
}

double Document::get_double(const std::string& key) const {
  return parse_double(at(key), origin_ + ": key '" + key + "'");
}

std::int64_t Document::get_int(const std::string& key) const {
  const std::string& s = at(key);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw InvalidConfigError(origin_ + ": key '" + key + "': not an integer: '" + s + "'");
  return v;
}

std::uint64_t Document::get_uint(const std::string& key) const {
  const std::string& s = at(key);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw InvalidConfigError(origin_ + ": key '" + key + "': not an unsigned integer: '" + s + "'");
  return v;
}

std::vector<double> Document::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (auto item : split_list(at(key))) out.push_back(parse_double(item, origin_ + ": key '" + key + "'"));
  return out;
}

std::vector<std::string> Document::get_strings(const std::string& key) const {
  std::vector<std::string> out;
  for (auto item : split_list(at(key))) out.emplace_back(item);
  return out;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string format_doubles(const Eigen::Ref<const Eigen::VectorXd>& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out;
}

}  // namespace plsoff::kv
