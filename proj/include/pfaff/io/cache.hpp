#pragma once

#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pfaff/slots.hpp"

namespace pfaff::io {

/// Lowercase hex SHA-256 of the bytes.
inline std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

/// Persists canonical RREF bases as text files named by the SHA-256 of the
/// key. Files that fail to parse, carry a different key, fail the checksum or
/// are not in canonical form are ignored and recomputed.
class DiskStore : public MatrixStore {
 public:
  explicit DiskStore(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

  std::optional<Subspace> load(const std::string& key, std::size_t ambient_dim) override {
    std::ifstream in(path_for(key));
    if (!in) return std::nullopt;
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto mark = text.rfind("checksum ");
    if (mark == std::string::npos) return std::nullopt;
    std::string stored = text.substr(mark + 9);
    while (!stored.empty() && std::isspace(static_cast<unsigned char>(stored.back()))) stored.pop_back();
    const std::string body = text.substr(0, mark);
    if (stored != sha256_hex(body)) return std::nullopt;
    try {
      return parse(body, key, ambient_dim);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  void save(const std::string& key, const Subspace& s) override {
    std::ostringstream body;
    body << "pfaff-rref 1\nkey " << key << "\nambient " << s.ambient_dim() << "\nrows " << s.dim() << '\n';
    for (const auto& row : s.rows()) {
      for (std::size_t i = 0; i < row.size(); ++i)
        body << (i ? " " : "") << row[i].first << ':' << row[i].second.get_str();
      body << '\n';
    }
    const std::string text = body.str();
    const auto target = path_for(key);
    const auto tmp = target.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      out << text << "checksum " << sha256_hex(text) << '\n';
      if (!out) return;
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
  }

  std::filesystem::path path_for(const std::string& key) const { return dir_ / (sha256_hex(key) + ".rref"); }

 private:
  static Subspace parse(const std::string& body, const std::string& key, std::size_t ambient_dim) {
    std::istringstream in(body);
    std::string line;
    auto field = [&](const std::string& name) {
      if (!std::getline(in, line) || line.rfind(name + " ", 0) != 0) throw std::runtime_error("bad header");
      return line.substr(name.size() + 1);
    };
    if (!std::getline(in, line) || line != "pfaff-rref 1") throw std::runtime_error("bad magic");
    if (field("key") != key) throw std::runtime_error("key mismatch");
    if (std::stoull(field("ambient")) != ambient_dim) throw std::runtime_error("dimension mismatch");
    const std::size_t nrows = std::stoull(field("rows"));
    std::vector<SparseRow> rows;
    for (std::size_t r = 0; r < nrows; ++r) {
      if (!std::getline(in, line)) throw std::runtime_error("truncated");
      SparseRow row;
      std::istringstream ls(line);
      std::string entry;
      while (ls >> entry) {
        const auto colon = entry.find(':');
        if (colon == std::string::npos) throw std::runtime_error("bad entry");
        row.emplace_back(std::stoull(entry.substr(0, colon)), parse_rational(entry.substr(colon + 1)));
      }
      rows.push_back(std::move(row));
    }
    return Subspace::from_echelon(ambient_dim, std::move(rows));
  }

  std::filesystem::path dir_;
};

}  // namespace pfaff::io
