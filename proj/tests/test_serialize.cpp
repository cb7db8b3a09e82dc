#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>

#include "aqedc/serialize.hpp"

using namespace aqedc;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/aqedc_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

MpsTensor sample_mps(std::uint64_t seed) {
  Rng rng(seed);
  MpsTensor a(2, 3);
  for (auto& m : a.m) m = rng.gaussian_matrix(3, 3);
  return a;
}

}  // namespace

TEST_CASE("mps tensors round-trip through both encodings") {
  MpsTensor a = sample_mps(1);
  TempFile j("mps.json"), b("mps.bin");

  save_mps_json(a, j.path);
  MpsTensor aj = load_mps_json(j.path);
  save_mps_binary(a, b.path);
  MpsTensor ab = load_mps_binary(b.path);

  REQUIRE(aj.phys == a.phys);
  REQUIRE(ab.bond == a.bond);
  for (int i = 0; i < a.phys; ++i) {
    CHECK((aj.m[i] - a.m[i]).norm() < 1e-15);   // JSON carries full doubles
    CHECK((ab.m[i] - a.m[i]).norm() == 0.0);    // binary is bit-exact
  }
}

TEST_CASE("mpo tensors round-trip and roles are enforced") {
  Rng rng(2);
  MpoTensor o(2, 2);
  for (auto& row : o.m)
    for (auto& m : row) m = rng.gaussian_matrix(2, 2);
  TempFile j("mpo.json"), b("mpo.bin");
  save_mpo_json(o, j.path);
  save_mpo_binary(o, b.path);
  MpoTensor oj = load_mpo_json(j.path);
  MpoTensor ob = load_mpo_binary(b.path);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) {
      CHECK((oj.m[i][k] - o.m[i][k]).norm() < 1e-15);
      CHECK((ob.m[i][k] - o.m[i][k]).norm() == 0.0);
    }

  CHECK_THROWS(static_cast<void>(load_mps_json(j.path)));
  CHECK_THROWS(static_cast<void>(load_mps_binary(b.path)));
}

TEST_CASE("base64 matrix encoding round-trips bit-exactly") {
  Rng rng(3);
  ComplexMatrix m = rng.gaussian_matrix(3, 5);
  std::string text = encode_matrix_b64(m);
  ComplexMatrix back = decode_matrix_b64(text, 3, 5);
  CHECK((m - back).norm() == 0.0);

  CHECK(base64_encode(reinterpret_cast<const unsigned char*>("foob"), 4) == "Zm9vYg==");
  auto raw = base64_decode("Zm9vYg==");
  CHECK(std::string(raw.begin(), raw.end()) == "foob");
}

TEST_CASE("content hash is stable and input-sensitive") {
  CHECK(content_hash("abc") == content_hash("abc"));
  CHECK(content_hash("abc") != content_hash("abd"));
  CHECK(content_hash("").size() == 16);
}
