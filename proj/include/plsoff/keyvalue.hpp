#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace plsoff::kv {

/// Flat `key = value` document. Blank lines and `#` comments are ignored;
/// arrays are comma-separated. Later keys override earlier ones.
class Document {
 public:
  static Document parse(std::string_view text, const std::string& origin = "<string>");
  static Document load(const std::filesystem::path& path);

  void set(const std::string& key, std::string value);
  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& at(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const noexcept { return values_; }
  const std::string& origin() const noexcept { return origin_; }

  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& key) const;

 private:
  std::string origin_;
  std::map<std::string, std::string> values_;
};

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);
std::string format_doubles(const Eigen::Ref<const Eigen::VectorXd>& v);

double parse_double(std::string_view s, const std::string& context);

}  // namespace plsoff::kv
