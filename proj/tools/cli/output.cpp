#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <unistd.h>

namespace treecouple::cli {

std::string fmt_double(double x) {
  if (!std::isfinite(x))
    return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Csv::Csv(std::vector<std::string> header) : width_(header.size()) { line(header); }

void Csv::row(std::vector<std::string> cells) {
  if (cells.size() != width_)
    throw std::logic_error("Csv::row: wrong number of cells");
  line(cells);
}

void Csv::line(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i)
      buf_ += ',';
    const std::string& c = cells[i];
    if (c.find_first_of(",\"\n") == std::string::npos) {
      buf_ += c;
      continue;
    }
    buf_ += '"';
    for (char ch : c) {
      if (ch == '"')
        buf_ += '"';
      buf_ += ch;
    }
    buf_ += '"';
  }
  buf_ += '\n';
}

void write_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f)
      throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f)
      throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename into " + target.string() + ": " + ec.message());
  }
}

} // namespace treecouple::cli
