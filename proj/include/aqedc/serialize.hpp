#pragma once

#include <string>

#include "aqedc/mps.hpp"

namespace aqedc {

// Flat tensor format, two encodings sharing one header (p, D, role):
//  - JSON: {"p":..,"D":..,"role":"mps"|"mpo","data":[re,im,re,im,...]}
//  - binary: magic "AQTN", u32 version, u32 p, u32 D, u32 role (0 mps / 1 mpo),
//    then the payload as little-endian f64 pairs.
// The payload is row-major over (physical index [pair], row, col).

void save_mps_json(const MpsTensor& a, const std::string& path);
MpsTensor load_mps_json(const std::string& path);
void save_mps_binary(const MpsTensor& a, const std::string& path);
MpsTensor load_mps_binary(const std::string& path);

void save_mpo_json(const MpoTensor& o, const std::string& path);
MpoTensor load_mpo_json(const std::string& path);
void save_mpo_binary(const MpoTensor& o, const std::string& path);
MpoTensor load_mpo_binary(const std::string& path);

std::string base64_encode(const unsigned char* data, size_t len);
std::vector<unsigned char> base64_decode(const std::string& text);

// base64 little-endian f64 pairs, row-major
std::string encode_matrix_b64(const ComplexMatrix& m);
ComplexMatrix decode_matrix_b64(const std::string& text, Eigen::Index rows, Eigen::Index cols);

// FNV-1a 64-bit content hash, hex-encoded
std::string content_hash(const std::string& bytes);

}  // namespace aqedc
