#include "gt/design_io.hpp"

#include <fstream>
#include <sstream>

namespace gt {

namespace {

bool unreserved(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.' ||
         c == '~';
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw std::invalid_argument("bad percent escape");
}

// "key=value" with both sides attribute-style; used for the header tokens.
std::pair<std::string, std::string> split_kv(const std::string& token) {
  std::size_t eq = token.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("malformed header token: " + token);
  }
  return {token.substr(0, eq), token.substr(eq + 1)};
}

}  // namespace

std::string percent_encode(const std::string& raw) {
  static const char* kHex = "0123456789ABCDEF";
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (unreserved(c)) {
      out.push_back(c);
    } else {
      unsigned char u = static_cast<unsigned char>(c);
      out.push_back('%');
      out.push_back(kHex[u >> 4]);
      out.push_back(kHex[u & 0xf]);
    }
  }
  return out;
}

std::string percent_decode(const std::string& encoded) {
  std::string out;
  out.reserve(encoded.size());
  for (std::size_t i = 0; i < encoded.size(); ++i) {
    if (encoded[i] != '%') {
      out.push_back(encoded[i]);
      continue;
    }
    if (i + 2 >= encoded.size()) {
      throw std::invalid_argument("truncated percent escape");
    }
    out.push_back(static_cast<char>(hex_value(encoded[i + 1]) * 16 +
                                    hex_value(encoded[i + 2])));
    i += 2;
  }
  return out;
}

std::string encode_meta(const std::map<std::string, std::string>& meta) {
  std::string out;
  bool first = true;
  for (const auto& [key, value] : meta) {
    if (!first) out.push_back('&');
    first = false;
    out += percent_encode(key);
    out.push_back('=');
    out += percent_encode(value);
  }
  if (out.empty()) out = "-";  // keep the header token count fixed
  return out;
}

std::map<std::string, std::string> decode_meta(const std::string& encoded) {
  std::map<std::string, std::string> meta;
  if (encoded.empty() || encoded == "-") return meta;
  std::size_t pos = 0;
  while (pos <= encoded.size()) {
    std::size_t amp = encoded.find('&', pos);
    std::string pair = encoded.substr(
        pos, amp == std::string::npos ? std::string::npos : amp - pos);
    auto [key, value] = split_kv(pair);
    meta[percent_decode(key)] = percent_decode(value);
    if (amp == std::string::npos) break;
    pos = amp + 1;
  }
  return meta;
}

void write_design(std::ostream& out, const PoolingDesign& design) {
  design.check();
  out << "GTDESIGN v1 kind=" << design_kind_name(design.kind)
      << " n=" << design.n << " t=" << design.t() << " seed=" << design.seed
      << " meta=" << encode_meta(design.meta) << "\n";
  for (const Pool& row : design.rows) out << row.to_hex() << "\n";
}

std::string design_to_string(const PoolingDesign& design) {
  std::ostringstream os;
  write_design(os, design);
  return os.str();
}

PoolingDesign read_design(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("empty design stream");
  }
  std::istringstream header(line);
  std::string magic, version;
  header >> magic >> version;
  if (magic != "GTDESIGN" || version != "v1") {
    throw std::invalid_argument("not a GTDESIGN v1 header");
  }
  PoolingDesign design;
  int t = -1;
  std::string token;
  while (header >> token) {
    auto [key, value] = split_kv(token);
    if (key == "kind") {
      design.kind = parse_design_kind(value);
    } else if (key == "n") {
      design.n = std::stoi(value);
    } else if (key == "t") {
      t = std::stoi(value);
    } else if (key == "seed") {
      design.seed = std::stoull(value);
    } else if (key == "meta") {
      design.meta = decode_meta(value);
    } else {
      throw std::invalid_argument("unknown header key: " + key);
    }
  }
  if (design.n <= 0 || t < 0) {
    throw std::invalid_argument("design header missing n or t");
  }
  design.rows.reserve(static_cast<std::size_t>(t));
  for (int r = 0; r < t; ++r) {
    if (!std::getline(in, line)) {
      throw std::invalid_argument("design truncated: missing rows");
    }
    design.rows.push_back(Pool::from_hex(design.n, line));
  }
  return design;
}

PoolingDesign read_design_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open design file: " + path);
  return read_design(in);
}

void write_design_file(const std::string& path, const PoolingDesign& design) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write design file: " + path);
  write_design(out, design);
}

const std::string& meta_at(const PoolingDesign& design,
                           const std::string& key) {
  auto it = design.meta.find(key);
  if (it == design.meta.end()) {
    throw std::invalid_argument("design meta missing key: " + key);
  }
  return it->second;
}

}  // namespace gt
