#pragma once
#include <string>
#include <string_view>
#include <vector>

namespace treecouple::cli {

/// %.17g, or "NA" for NaN and infinities.
std::string fmt_double(double x);

class Csv {
public:
  explicit Csv(std::vector<std::string> header);
  void row(std::vector<std::string> cells);
  const std::string& str() const { return buf_; }

private:
  void line(const std::vector<std::string>& cells);
  std::size_t width_;
  std::string buf_;
};

/// Writes `content` to a temporary file next to `path` and renames it into place.
void write_atomic(const std::string& path, std::string_view content);

} // namespace treecouple::cli
