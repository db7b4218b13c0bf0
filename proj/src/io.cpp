#include "circlemaps/io.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include <fmt/format.h>
#include <openssl/evp.h>
#include <unistd.h>

#include "circlemaps/errors.hpp"

#ifndef CIRCLEMAPS_VERSION
#define CIRCLEMAPS_VERSION "0.0.0"
#endif

namespace circlemaps {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& source, const std::string& where, const std::string& msg) {
  throw ParseError(source + ": " + (where.empty() ? "" : where + ": ") + msg);
}

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points at the last character read.
    const std::size_t offset = e.byte == 0 ? 0 : std::min(e.byte - 1, text.size());
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    if (const auto pos = what.find(": "); pos != std::string::npos) what = what.substr(pos + 2);
    throw ParseError(fmt::format("{}:{}:{}: {}", source, line, column, what));
  }
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& source,
                const std::string& where) {
  if (!obj.is_object()) fail(source, where, "expected an object");
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || item.key() == k;
    if (!ok) fail(source, where, "unknown key '" + item.key() + "'");
  }
}

const json& require(const json& obj, const char* key, const std::string& source, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(source, where, std::string("missing key '") + key + "'");
  return *it;
}

int as_int(const json& v, const std::string& source, const std::string& where) {
  if (!v.is_number_integer()) fail(source, where, "expected an integer");
  return v.get<int>();
}

TPoly as_tpoly(const json& v, const std::string& source, const std::string& where) {
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) fail(source, where, "expected a number or an array of numbers");
  TPoly p;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(source, where + "/" + std::to_string(i), "expected a number");
    p.push_back(v[i].get<double>());
  }
  return p;
}

TPoly optional_tpoly(const json& obj, const char* key, const std::string& source, const std::string& where) {
  const auto it = obj.find(key);
  return it == obj.end() ? TPoly{} : as_tpoly(*it, source, where + "/" + key);
}

std::string optional_label(const json& obj, const std::string& source) {
  const auto it = obj.find("label");
  if (it == obj.end()) return {};
  if (!it->is_string()) fail(source, "/label", "expected a string");
  return it->get<std::string>();
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string version_string() { return CIRCLEMAPS_VERSION; }

CircleFamily parse_family(std::string_view text, const std::string& source) {
  const json doc = parse_json(text, source);
  check_keys(doc, {"label", "winding", "const", "harmonics"}, source, "");
  const int winding = as_int(require(doc, "winding", source, ""), source, "/winding");
  if (winding < 1) fail(source, "/winding", "winding must be a positive integer");
  const TPoly c = optional_tpoly(doc, "const", source, "");
  std::vector<FamilyHarmonic> hs;
  if (const auto it = doc.find("harmonics"); it != doc.end()) {
    if (!it->is_array()) fail(source, "/harmonics", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string where = "/harmonics/" + std::to_string(i);
      const json& h = (*it)[i];
      check_keys(h, {"j", "a", "b"}, source, where);
      const int j = as_int(require(h, "j", source, where), source, where + "/j");
      if (j < 1) fail(source, where + "/j", "harmonic index must be positive");
      hs.push_back({j, optional_tpoly(h, "a", source, where), optional_tpoly(h, "b", source, where)});
    }
  }
  return CircleFamily(winding, c, std::move(hs), optional_label(doc, source));
}

SkewMap parse_skew_map(std::string_view text, const std::string& source) {
  const json doc = parse_json(text, source);
  check_keys(doc, {"label", "m", "modes"}, source, "");
  const int m = as_int(require(doc, "m", source, ""), source, "/m");
  if (m < 2) fail(source, "/m", "base m must be an integer >= 2");
  std::vector<SkewMode> modes;
  if (const auto it = doc.find("modes"); it != doc.end()) {
    if (!it->is_array()) fail(source, "/modes", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string where = "/modes/" + std::to_string(i);
      const json& md = (*it)[i];
      check_keys(md, {"jx", "jy", "a", "b"}, source, where);
      const int jx = as_int(require(md, "jx", source, where), source, where + "/jx");
      const int jy = as_int(require(md, "jy", source, where), source, where + "/jy");
      modes.push_back({jx, jy, optional_tpoly(md, "a", source, where), optional_tpoly(md, "b", source, where)});
    }
  }
  return SkewMap(m, std::move(modes), optional_label(doc, source));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw ParseError(path.string() + ": read error");
  return ss.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::filesystem::create_directories(dir);
  const auto tmp = dir / fmt::format(".{}.tmp-{}", path.filename().string(), static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("cannot write " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string git_blob_hash(std::string_view content) {
  const std::string header = fmt::format("blob {}", content.size());
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw std::runtime_error("git_blob_hash: cannot allocate digest context");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size() + 1) == 1 &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw std::runtime_error("git_blob_hash: digest failed");
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

Csv::Csv(std::vector<std::string> header) : columns_(header.size()) { row(header); }

Csv& Csv::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::invalid_argument("Csv::row: wrong number of cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += csv_cell(cells[i]);
  }
  text_ += '\n';
  return *this;
}

std::string ExperimentReport::to_json() const {
  nlohmann::ordered_json j;
  j["experiment"] = id;
  j["version"] = version_string();
  j["inputs"] = inputs;
  j["parameters"] = parameters;
  j["results"] = results;
  j["tables"] = tables;
  j["wall_clock_seconds"] = wall_clock_seconds;
  return j.dump(2) + "\n";
}

}  // namespace circlemaps
