#include "pinchloc/csv_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pinchloc {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

double parse_double(std::string_view text) {
  const std::string s(trim(text));
  if (s.empty()) throw std::invalid_argument("empty numeric field");
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || (errno == ERANGE && std::isinf(value))) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return value;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    out.emplace_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string observation_csv(std::span<const Complex> samples) {
  std::string out = "n,re,im\n";
  for (std::size_t n = 0; n < samples.size(); ++n) {
    out += std::to_string(n + 1) + "," + format_double(samples[n].real()) + "," + format_double(samples[n].imag()) + "\n";
  }
  return out;
}

SignalVector parse_observation_csv(std::string_view text) {
  SignalVector out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (split(body, ',') != std::vector<std::string>{"n", "re", "im"}) {
        throw std::invalid_argument("observation line " + std::to_string(line_no) + ": expected header 'n,re,im'");
      }
      continue;
    }
    const auto fields = split(body, ',');
    if (fields.size() != 3) {
      throw std::invalid_argument("observation line " + std::to_string(line_no) + ": expected 3 fields");
    }
    try {
      const double n = parse_double(fields[0]);
      if (n != static_cast<double>(out.size() + 1)) {
        throw std::invalid_argument("antenna index " + fields[0] + " out of sequence");
      }
      out.emplace_back(parse_double(fields[1]), parse_double(fields[2]));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("observation line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (out.empty()) throw std::invalid_argument("observation file has no samples");
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace pinchloc
