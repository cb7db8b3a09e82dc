#include "aqedc/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace aqedc {

namespace {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "binary tensor format assumes a little-endian host");

std::vector<double> flatten(const std::vector<ComplexMatrix>& mats) {
  std::vector<double> out;
  for (const auto& m : mats) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        out.push_back(m(r, c).real());
        out.push_back(m(r, c).imag());
      }
  }
  return out;
}

void unflatten(const std::vector<double>& data, std::vector<ComplexMatrix>& mats, int D) {
  size_t k = 0;
  for (auto& m : mats) {
    m.resize(D, D);
    for (int r = 0; r < D; ++r)
      for (int c = 0; c < D; ++c) {
        m(r, c) = Complex(data.at(k), data.at(k + 1));
        k += 2;
      }
  }
  if (k != data.size()) throw std::runtime_error("tensor payload size mismatch");
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

constexpr char kMagic[4] = {'A', 'Q', 'T', 'N'};
constexpr std::uint32_t kVersion = 1;

void write_binary(const std::string& path, std::uint32_t p, std::uint32_t D, std::uint32_t role,
                  const std::vector<double>& payload) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kMagic, 4);
  auto put_u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
  put_u32(kVersion);
  put_u32(p);
  put_u32(D);
  put_u32(role);
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size() * sizeof(double)));
}

void read_binary(const std::string& path, std::uint32_t expected_role, std::uint32_t& p,
                 std::uint32_t& D, std::vector<double>& payload) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("bad tensor file magic");
  auto get_u32 = [&]() {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 4);
    return v;
  };
  const std::uint32_t version = get_u32();
  if (version != kVersion) throw std::runtime_error("unsupported tensor file version");
  p = get_u32();
  D = get_u32();
  const std::uint32_t role = get_u32();
  if (role != expected_role) throw std::runtime_error("tensor file role mismatch");
  const size_t count = static_cast<size_t>(p) * (expected_role == 1 ? p : 1) * D * D * 2;
  payload.resize(count);
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw std::runtime_error("truncated tensor file");
}

}  // namespace

void save_mps_json(const MpsTensor& a, const std::string& path) {
  json j{{"p", a.phys}, {"D", a.bond}, {"role", "mps"}, {"data", flatten(a.m)}};
  write_json(j, path);
}

MpsTensor load_mps_json(const std::string& path) {
  json j = read_json(path);
  if (j.at("role") != "mps") throw std::runtime_error("not an mps tensor file");
  MpsTensor a(j.at("p").get<int>(), j.at("D").get<int>());
  unflatten(j.at("data").get<std::vector<double>>(), a.m, a.bond);
  return a;
}

void save_mps_binary(const MpsTensor& a, const std::string& path) {
  write_binary(path, a.phys, a.bond, 0, flatten(a.m));
}

MpsTensor load_mps_binary(const std::string& path) {
  std::uint32_t p = 0, D = 0;
  std::vector<double> payload;
  read_binary(path, 0, p, D, payload);
  MpsTensor a(static_cast<int>(p), static_cast<int>(D));
  unflatten(payload, a.m, a.bond);
  return a;
}

void save_mpo_json(const MpoTensor& o, const std::string& path) {
  std::vector<ComplexMatrix> flat;
  for (const auto& row : o.m)
    for (const auto& m : row) flat.push_back(m);
  json j{{"p", o.phys}, {"D", o.bond}, {"role", "mpo"}, {"data", flatten(flat)}};
  write_json(j, path);
}

MpoTensor load_mpo_json(const std::string& path) {
  json j = read_json(path);
  if (j.at("role") != "mpo") throw std::runtime_error("not an mpo tensor file");
  MpoTensor o(j.at("p").get<int>(), j.at("D").get<int>());
  std::vector<ComplexMatrix> flat(o.phys * o.phys);
  unflatten(j.at("data").get<std::vector<double>>(), flat, o.bond);
  for (int i = 0; i < o.phys; ++i)
    for (int k = 0; k < o.phys; ++k) o.m[i][k] = flat[i * o.phys + k];
  return o;
}

void save_mpo_binary(const MpoTensor& o, const std::string& path) {
  std::vector<ComplexMatrix> flat;
  for (const auto& row : o.m)
    for (const auto& m : row) flat.push_back(m);
  write_binary(path, o.phys, o.bond, 1, flatten(flat));
}

MpoTensor load_mpo_binary(const std::string& path) {
  std::uint32_t p = 0, D = 0;
  std::vector<double> payload;
  read_binary(path, 1, p, D, payload);
  MpoTensor o(static_cast<int>(p), static_cast<int>(D));
  std::vector<ComplexMatrix> flat(o.phys * o.phys);
  unflatten(payload, flat, o.bond);
  for (int i = 0; i < o.phys; ++i)
    for (int k = 0; k < o.phys; ++k) o.m[i][k] = flat[i * o.phys + k];
  return o;
}

static const char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_encode(const unsigned char* data, size_t len) {
  std::string out;
  out.reserve((len + 2) / 3 * 4);
  for (size_t i = 0; i < len; i += 3) {
    unsigned val = data[i] << 16;
    if (i + 1 < len) val |= data[i + 1] << 8;
    if (i + 2 < len) val |= data[i + 2];
    out.push_back(kB64Alphabet[(val >> 18) & 63]);
    out.push_back(kB64Alphabet[(val >> 12) & 63]);
    out.push_back(i + 1 < len ? kB64Alphabet[(val >> 6) & 63] : '=');
    out.push_back(i + 2 < len ? kB64Alphabet[val & 63] : '=');
  }
  return out;
}

std::vector<unsigned char> base64_decode(const std::string& text) {
  auto value = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::vector<unsigned char> out;
  int buffer = 0, bits = 0;
  for (char c : text) {
    if (c == '=') break;
    const int v = value(c);
    if (v < 0) throw std::runtime_error("invalid base64 input");
    buffer = (buffer << 6) | v;
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<unsigned char>((buffer >> bits) & 0xff));
    }
  }
  return out;
}

std::string encode_matrix_b64(const ComplexMatrix& m) {
  std::vector<double> data;
  data.reserve(m.size() * 2);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      data.push_back(m(r, c).real());
      data.push_back(m(r, c).imag());
    }
  return base64_encode(reinterpret_cast<const unsigned char*>(data.data()),
                       data.size() * sizeof(double));
}

ComplexMatrix decode_matrix_b64(const std::string& text, Eigen::Index rows, Eigen::Index cols) {
  std::vector<unsigned char> raw = base64_decode(text);
  if (raw.size() != static_cast<size_t>(rows * cols * 2) * sizeof(double))
    throw std::runtime_error("decoded matrix payload has wrong size");
  const double* data = reinterpret_cast<const double*>(raw.data());
  ComplexMatrix m(rows, cols);
  size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = Complex(data[k], data[k + 1]);
      k += 2;
    }
  return m;
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace aqedc
