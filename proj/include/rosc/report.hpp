#pragma once

// Configuration parsing, content cache and report rendering for the CLI.

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rosc/errors.hpp"
#include "rosc/puncture.hpp"

namespace rosc {

using Json = nlohmann::json;

// ---- configuration: "key = value" lines, '#' comments, [block] headers ----

struct ConfigBlock {
  std::string name;
  std::map<std::string, std::string> kv;

  std::optional<std::string> get(const std::string& k) const {
    auto it = kv.find(k);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  }
};

struct Config {
  std::map<std::string, std::string> top;
  std::vector<ConfigBlock> blocks;

  std::optional<std::string> get(const std::string& k) const {
    auto it = top.find(k);
    if (it == top.end()) return std::nullopt;
    return it->second;
  }
  std::string get_or(const std::string& k, const std::string& d) const { return get(k).value_or(d); }
  std::vector<const ConfigBlock*> blocks_named(const std::string& n) const {
    std::vector<const ConfigBlock*> v;
    for (const auto& b : blocks)
      if (b.name == n) v.push_back(&b);
    return v;
  }
};

inline std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline Config parse_config(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line;
  int ln = 0;
  ConfigBlock* cur = nullptr;
  while (std::getline(in, line)) {
    ++ln;
    auto h = line.find('#');
    if (h != std::string::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(Errc::Usage, "config line " + std::to_string(ln) + ": unterminated block header");
      c.blocks.push_back({trim(line.substr(1, line.size() - 2)), {}});
      cur = &c.blocks.back();
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(Errc::Usage, "config line " + std::to_string(ln) + ": expected key = value");
    std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (k.empty()) throw Error(Errc::Usage, "config line " + std::to_string(ln) + ": empty key");
    auto& dst = cur ? cur->kv : c.top;
    if (dst.count(k)) throw Error(Errc::Usage, "config line " + std::to_string(ln) + ": duplicate key " + k);
    dst[k] = v;
  }
  return c;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::Usage, "cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// split on ',' or ';' outside brackets
inline std::vector<std::string> split_top(const std::string& s, const std::string& seps = ",;") {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '[') ++depth;
    if (ch == ']') --depth;
    if (depth == 0 && seps.find(ch) != std::string::npos) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

inline std::vector<long> parse_long_list(const std::string& s) {
  std::vector<long> v;
  for (const auto& t : split_top(s)) {
    if (t.empty()) continue;
    try {
      std::size_t pos;
      v.push_back(std::stol(t, &pos));
      if (pos != t.size()) throw std::invalid_argument(t);
    } catch (const std::exception&) {
      throw Error(Errc::Usage, "expected an integer, got '" + t + "'");
    }
  }
  return v;
}

inline long parse_long(const std::string& s, const std::string& what) {
  auto v = parse_long_list(s);
  if (v.size() != 1) throw Error(Errc::Usage, what + " must be a single integer");
  return v[0];
}

inline bool parse_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw Error(Errc::Usage, "expected a boolean, got '" + s + "'");
}

// ---- content cache ----

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hx = "0123456789abcdef";
  std::string s;
  for (unsigned i = 0; i < len; ++i) {
    s += hx[md[i] >> 4];
    s += hx[md[i] & 15];
  }
  return s;
}

class ContentCache {
 public:
  explicit ContentCache(std::optional<std::filesystem::path> dir = std::nullopt) : dir_(std::move(dir)) {
    if (dir_) std::filesystem::create_directories(*dir_);
  }

  bool enabled() const { return dir_.has_value(); }
  int hits() const { return hits_; }
  int misses() const { return misses_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // entries are "<sha256 of payload>\n<payload>" under <dir>/<sha256 of key>
  std::string lookup_or_compute(const std::string& key, const std::function<std::string()>& producer) {
    if (!dir_) return producer();
    auto path = *dir_ / (sha256_hex(key) + ".entry");
    std::ifstream f(path, std::ios::binary);
    if (f) {
      std::ostringstream ss;
      ss << f.rdbuf();
      std::string body = ss.str();
      auto nl = body.find('\n');
      if (nl != std::string::npos && body.substr(0, nl) == sha256_hex(body.substr(nl + 1))) {
        ++hits_;
        return body.substr(nl + 1);
      }
      warnings_.push_back("CacheCorrupt: recomputed " + path.filename().string());
    }
    ++misses_;
    std::string payload = producer();
    auto tmp = path;
    tmp += ".tmp";
    {
      std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
      o << sha256_hex(payload) << '\n' << payload;
    }
    std::filesystem::rename(tmp, path);
    return payload;
  }

 private:
  std::optional<std::filesystem::path> dir_;
  int hits_ = 0, misses_ = 0;
  std::vector<std::string> warnings_;
};

// residue fields through the cache; the payload is the absolute defining polynomial
inline ResidueFieldProvider cached_residue_field(ContentCache& cache) {
  return [&cache](const NumberField& base, const KPoly& f) {
    std::string key = "residue-field|" + coeff_list(base.defining_poly()) + "|" + kpoly_string(f);
    std::string payload = cache.lookup_or_compute(key, [&] { return coeff_list(absolute_field(base, f).defining_poly()); });
    std::vector<Int> c;
    std::string body = payload;
    if (body.size() < 2 || body.front() != '[' || body.back() != ']') throw Error(Errc::InvalidArgument, "malformed cache payload");
    for (const auto& t : split_top(body.substr(1, body.size() - 2), ",")) c.emplace_back(t);
    return NumberField::make_unchecked(ZPoly(c));
  };
}

// ---- rendering ----

inline Json rat_json(const Rat& r) { return rat_string(r); }
inline Json int_json(const Int& n) {
  if (n.fits_slong_p()) return n.get_si();
  return n.get_str();
}

inline std::string cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  return v.dump();
}

// results.rows is the tabular part; every other results key is a summary line
inline std::string render_table(const Json& report) {
  std::ostringstream o;
  o << report["command"].get<std::string>() << "\n";
  const Json& res = report["results"];
  for (auto it = res.begin(); it != res.end(); ++it)
    if (it.key() != "rows") o << "  " << it.key() << ": " << cell(it.value()) << "\n";
  if (res.contains("rows") && !res["rows"].empty()) {
    std::vector<std::string> cols;
    for (const auto& row : res["rows"])
      for (auto it = row.begin(); it != row.end(); ++it)
        if (std::find(cols.begin(), cols.end(), it.key()) == cols.end()) cols.push_back(it.key());
    std::vector<std::size_t> w(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) w[j] = cols[j].size();
    for (const auto& row : res["rows"])
      for (std::size_t j = 0; j < cols.size(); ++j) w[j] = std::max(w[j], cell(row.value(cols[j], Json())).size());
    auto line = [&](auto get) {
      std::string s;
      for (std::size_t j = 0; j < cols.size(); ++j) {
        std::string c = get(j);
        s += c + std::string(w[j] - c.size() + 2, ' ');
      }
      o << trim(s) << "\n";
    };
    line([&](std::size_t j) { return cols[j]; });
    for (const auto& row : res["rows"]) line([&](std::size_t j) { return cell(row.value(cols[j], Json())); });
  }
  for (const auto& w : report["warnings"]) o << "warning: " << w.get<std::string>() << "\n";
  return o.str();
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string t = "\"";
  for (char c : s) t += c == '"' ? std::string("\"\"") : std::string(1, c);
  return t + "\"";
}

inline std::string render_csv(const Json& report) {
  const Json& res = report["results"];
  Json rows = res.contains("rows") ? res["rows"] : Json::array();
  if (rows.empty()) {
    Json one = Json::object();
    for (auto it = res.begin(); it != res.end(); ++it)
      if (it.key() != "rows") one[it.key()] = it.value();
    rows.push_back(one);
  }
  std::vector<std::string> cols;
  for (const auto& row : rows)
    for (auto it = row.begin(); it != row.end(); ++it)
      if (std::find(cols.begin(), cols.end(), it.key()) == cols.end()) cols.push_back(it.key());
  std::ostringstream o;
  for (std::size_t j = 0; j < cols.size(); ++j) o << (j ? "," : "") << csv_escape(cols[j]);
  o << "\n";
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < cols.size(); ++j) o << (j ? "," : "") << csv_escape(cell(row.value(cols[j], Json())));
    o << "\n";
  }
  return o.str();
}

}  // namespace rosc
