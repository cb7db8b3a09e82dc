#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aqedc/magnon.hpp"
#include "test_helpers.hpp"

using namespace aqedc;
using namespace aqedc::testing;

namespace {

// independent dense construction: Psi = wbar sum_r w^r s_r^- |1...1>
StateVector dense_one_magnon(int n) {
  const Complex w = std::exp(Complex(0, 2 * M_PI / n));
  const long dim = 1L << n;
  StateVector psi = StateVector::Zero(dim);
  for (int r = 1; r <= n; ++r)
    psi((dim - 1) - (1L << (n - r))) = std::conj(w) * std::pow(w, r);
  return psi;
}

// descendant by repeated sparse application of S_-
StateVector dense_descendant(int n, int s) {
  StateVector psi = dense_one_magnon(n);
  const ComplexMatrix sm = total_lowering(n);
  for (int k = 0; k < s; ++k) psi = sm * psi;
  return psi;
}

// left cyclic rotation of site labels: site 2 -> site 1 etc.
StateVector cyclic_shift(const StateVector& psi, int n) {
  StateVector out(psi.size());
  for (long idx = 0; idx < psi.size(); ++idx) {
    const long top = (idx >> (n - 1)) & 1;
    out(((idx << 1) & ((1L << n) - 1)) | top) = psi(idx);
  }
  return out;
}

}  // namespace

TEST_CASE("XXX Hamiltonian: flip form, ground state, SU(2) symmetry") {
  const int n = 6;
  const long dim = 1L << n;
  ComplexMatrix h = xxx_hamiltonian(n);
  CHECK((h - h.adjoint()).norm() < 1e-12);

  // H = (n/4) I - 1/2 sum F_{m,m+1}
  ComplexMatrix swap2 = ComplexMatrix::Zero(4, 4);
  swap2(0, 0) = swap2(3, 3) = swap2(1, 2) = swap2(2, 1) = 1;
  ComplexMatrix flip_sum = ComplexMatrix::Zero(dim, dim);
  for (int a = 0; a < n; ++a) {
    std::vector<int> sup{a, (a + 1) % n};
    std::sort(sup.begin(), sup.end());
    ComplexMatrix term = swap2;
    if (sup[1] != sup[0] + 1) {  // wrap: legs are (site n-1, site 0), swap is symmetric
      term = swap2;
    }
    flip_sum += embed_operator(term, sup, n);
  }
  ComplexMatrix alt = (n / 4.0) * ComplexMatrix::Identity(dim, dim) - 0.5 * flip_sum;
  CHECK((h - alt).norm() < 1e-12);

  StateVector ones = StateVector::Zero(dim);
  ones(dim - 1) = 1;
  CHECK((h * ones + (n / 4.0) * ones).norm() < 1e-12);

  ComplexMatrix sm = total_lowering(n);
  CHECK((h * sm - sm * h).norm() < 1e-12);
}

TEST_CASE("one-magnon MPS equals the direct construction") {
  for (int n : {3, 4, 6}) {
    auto [a, x] = magnon_mps(n);
    StateVector mps = dense_state(a, x, n);
    StateVector direct = dense_one_magnon(n);
    CHECK((mps - direct).norm() < 1e-12);
    CHECK(mps.squaredNorm() == doctest::Approx(static_cast<double>(n)).epsilon(1e-12));

    // eigenvector of the cyclic shift with eigenvalue w
    const Complex w = std::exp(Complex(0, 2 * M_PI / n));
    CHECK((cyclic_shift(mps, n) - w * mps).norm() < 1e-12);
  }
}

TEST_CASE("one-magnon state is a highest weight vector of spin n/2 - 1") {
  const int n = 6;
  StateVector psi = dense_one_magnon(n);
  CHECK((total_raising(n) * psi).norm() < 1e-12);
  StateVector sz = total_sz(n) * psi;
  CHECK((sz - (n / 2.0 - 1.0) * psi).norm() < 1e-12);
}

TEST_CASE("lowering MPO reproduces the total lowering operator") {
  auto [o, x] = lowering_mpo();
  for (int n : {2, 3, 5}) {
    ComplexMatrix dense = mpo_dense(o, x, n);
    CHECK((dense - total_lowering(n)).norm() < 1e-12);
  }
}

TEST_CASE("compressed MPO: base case, powers, ladder coefficients") {
  // s = 1 reproduces S_-
  auto [o1, x1] = compressed_mpo(1);
  CHECK((mpo_dense(o1, x1, 4) - total_lowering(4)).norm() < 1e-12);

  // s = 2, n = 6: equals (S_-)^2 and the naive MPO power
  auto [o2, x2] = compressed_mpo(2);
  const int n = 6;
  ComplexMatrix sm = total_lowering(n);
  CHECK((mpo_dense(o2, x2, n) - sm * sm).norm() < 1e-11);

  auto [olow, xlow] = lowering_mpo();
  MpoTensor naive = mpo_diamond(olow, olow);
  CHECK((mpo_dense(naive, kron(xlow, xlow), n) - sm * sm).norm() < 1e-11);

  // s = 3 ladder entries (sqrt 3, 2, sqrt 3)
  ComplexMatrix jp = spin_raising(3);
  CHECK(jp(1, 0).real() == doctest::Approx(std::sqrt(3.0)));
  CHECK(jp(2, 1).real() == doctest::Approx(2.0));
  CHECK(jp(3, 2).real() == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("descendant norms match the closed formula and the dense oracle") {
  CHECK(magnon_norm_sq_exact(4, 1) == doctest::Approx(8.0));
  CHECK(magnon_norm_sq_exact(6, 0) == doctest::Approx(6.0));

  for (int n : {4, 6, 8}) {
    for (int s = 0; s <= n - 2; ++s) {
      auto [t, x] = magnon_descendant_tensor(n, s);
      const double mps_sq = dense_state(t, x, n).squaredNorm();
      const double exact = magnon_norm_sq_exact(n, s);
      CHECK(std::abs(mps_sq - exact) <= 1e-10 * exact);
      const double oracle = dense_descendant(n, s).squaredNorm();
      CHECK(std::abs(oracle - exact) <= 1e-10 * exact);
    }
  }
}

TEST_CASE("descendant energies: <psi_s|H|psi_s> = -n/4 + 1 - cos(2 pi / n)") {
  const int n = 6;
  ComplexMatrix h = xxx_hamiltonian(n);
  const double expect = -n / 4.0 + 1.0 - std::cos(2 * M_PI / n);
  for (int s : {0, 1, 2}) {
    MagnonState st = magnon_state(n, s, MagnonRep::Dense);
    const Complex e = st.dense.dot(h * st.dense);
    CHECK(std::abs(e - Complex(expect)) < 1e-11);
  }
}

TEST_CASE("magnon MPS tensors obey A1 A0 = w A0 A1 exactly") {
  for (int n : {4, 7, 12}) {
    auto [a, x] = magnon_mps(n);
    const Complex w = std::exp(Complex(0, 2 * M_PI / n));
    CHECK((a.m[1] * a.m[0] - w * a.m[0] * a.m[1]).norm() == 0.0);
  }
}

TEST_CASE("magnon transfer operator: spectrum, multiplicities, Jordan structure") {
  {
    MagnonTransfer t = magnon_transfer(0, 0, 4);
    REQUIRE(t.matrix.rows() == 4);
    CHECK(t.mult_one == 2);
    CHECK(t.mult_omega == 1);
    CHECK(t.mult_omega_bar == 1);
    CHECK(t.jordan.largest_block() == 2);  // one size-2 block at eigenvalue 1
    for (const auto& c : t.jordan.clusters)
      if (std::abs(c.eigenvalue - Complex(1.0)) < 1e-9)
        CHECK(c.block_sizes == std::vector<int>{2, 1, 1});
  }
  {
    MagnonTransfer t = magnon_transfer(0, 2, 8);
    CHECK(t.mult_one == 6);
    CHECK(t.mult_omega == 3);
    CHECK(t.mult_omega_bar == 3);
  }
  {
    MagnonTransfer t = magnon_transfer(2, 2, 8);
    CHECK(t.jordan.largest_block() <= 4);  // min(r, s) + 2
  }
  // strict lower-triangularity of the assembled matrix
  MagnonTransfer t = magnon_transfer(1, 3, 6);
  for (Eigen::Index i = 0; i < t.matrix.rows(); ++i)
    for (Eigen::Index j = i + 1; j < t.matrix.cols(); ++j)
      CHECK(std::abs(t.matrix(i, j)) == 0.0);
}

TEST_CASE("E_{0,0} matches the explicit five-term expression") {
  const int n = 6;
  const Complex w = std::exp(Complex(0, 2 * M_PI / n));
  MagnonTransfer t = magnon_transfer(0, 0, n);
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  expect(0, 0) = 1;
  expect(1, 1) = w;
  expect(2, 2) = std::conj(w);
  expect(3, 3) = 1;
  expect(3, 0) = 1;
  CHECK((t.matrix - expect).norm() < 1e-14);
}

TEST_CASE("nearest-neighbor transpositions act as Z-dagger (x) Z on descendants") {
  const int n = 6;
  const Complex w = std::exp(Complex(0, 2 * M_PI / n));
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = 1;
  z(1, 1) = w;
  for (int s : {0, 2, 3}) {
    StateVector psi = dense_descendant(n, s);
    for (int k = 0; k + 1 < n; ++k) {
      ComplexMatrix swap2 = ComplexMatrix::Zero(4, 4);
      swap2(0, 0) = swap2(3, 3) = swap2(1, 2) = swap2(2, 1) = 1;
      StateVector swapped = embed_operator(swap2, {k, k + 1}, n) * psi;
      ComplexMatrix phase = kron(z.adjoint(), z);
      StateVector phased = embed_operator(phase, {k, k + 1}, n) * psi;
      CHECK((swapped - phased).norm() < 1e-11);
    }
  }
}

TEST_CASE("matrix elements: orthogonality, dense oracle, translation covariance") {
  // f = I with r != s vanishes (different magnetization)
  ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  CHECK(std::abs(magnon_matrix_element(8, 0, 2, i2, {3})) < 1e-11);
  CHECK(std::abs(magnon_matrix_element(8, 1, 1, i2, {3}) - Complex(1.0)) < 1e-11);

  // n = 10, r = 0, s = 2, sigma_- (x) sigma_- on (1-based) sites {3, 7}
  {
    const int n = 10;
    ComplexMatrix f = kron(sigma_minus(), sigma_minus());
    const Complex via_transfer = magnon_matrix_element(n, 2, 0, f, {2, 6});
    StateVector r2 = dense_descendant(n, 2);
    r2 /= r2.norm();
    StateVector r0 = dense_descendant(n, 0);
    r0 /= r0.norm();
    const Complex dense = r2.dot(embed_operator(f, {2, 6}, n) * r0);
    CHECK(std::abs(via_transfer - dense) < 1e-10);
  }

  // random d-local operators on random (possibly disconnected) supports
  Rng rng(101);
  for (int trial = 0; trial < 12; ++trial) {
    Rng local = rng.derive(trial);
    const int n = 6 + 2 * static_cast<int>(local.uniform_int(4));  // 6..12
    const int r = static_cast<int>(local.uniform_int(std::min(4, n - 2)));
    const int s = static_cast<int>(local.uniform_int(std::min(4, n - 2)));
    const int d = 1 + static_cast<int>(local.uniform_int(2));
    std::vector<int> support;
    while (static_cast<int>(support.size()) < d) {
      int site = static_cast<int>(local.uniform_int(n));
      if (std::find(support.begin(), support.end(), site) == support.end())
        support.push_back(site);
    }
    std::sort(support.begin(), support.end());
    ComplexMatrix f = local.gaussian_matrix(1L << d, 1L << d);
    const Complex via_transfer = magnon_matrix_element(n, r, s, f, support);
    StateVector pr = dense_descendant(n, r);
    pr /= pr.norm();
    StateVector ps = dense_descendant(n, s);
    ps /= ps.norm();
    const Complex dense = pr.dot(embed_operator(f, support, n) * ps);
    CHECK(std::abs(via_transfer - dense) < 1e-10 * std::max(1.0, std::abs(dense)));
  }

  // |<psi_r|F_A|psi_s>| invariant under support translation for diagonal f
  {
    const int n = 9;
    Rng local(7);
    ComplexMatrix f = ComplexMatrix::Zero(4, 4);
    for (int k = 0; k < 4; ++k) f(k, k) = local.cgauss();
    const Complex base = magnon_matrix_element(n, 1, 1, f, {0, 1});
    for (int shift = 1; shift < n; ++shift) {
      std::vector<int> sup{shift % n, (1 + shift) % n};
      std::sort(sup.begin(), sup.end());
      const Complex moved = magnon_matrix_element(n, 1, 1, f, sup);
      CHECK(std::abs(std::abs(moved) - std::abs(base)) < 1e-12);
    }
  }
}

TEST_CASE("compressed and naive MPO paths agree on measurements") {
  auto [olow, xlow] = lowering_mpo();
  for (int s : {2, 3}) {
    const int n = 8;
    MpoTensor naive = olow;
    ComplexMatrix xnaive = xlow;
    for (int k = 1; k < s; ++k) {
      naive = mpo_diamond(olow, naive);
      xnaive = kron(xlow, xnaive).eval();
    }
    auto [a, xa] = magnon_mps(n);
    MpsTensor tn = mpo_diamond_mps(naive, a);
    ComplexMatrix xn = kron(xnaive, xa);
    auto [tc, xc] = magnon_descendant_tensor(n, s);

    StateVector via_naive = dense_state(tn, xn, n);
    StateVector via_compressed = dense_state(tc, xc, n);
    CHECK((via_naive - via_compressed).norm() < 1e-10 * via_naive.norm());

    Rng local(s);
    ComplexMatrix f = local.gaussian_matrix(2, 2);
    const Complex men = matrix_element_transfer(tn, xn, tn, xn, f, {2}, n);
    const Complex mec = matrix_element_transfer(tc, xc, tc, xc, f, {2}, n);
    CHECK(std::abs(men - mec) < 1e-10 * std::max(1.0, std::abs(men)));
  }
}

TEST_CASE("reduced overlap: closed form at s=0, dense vs transfer") {
  CHECK(reduced_overlap_check(10, 0, 3) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(reduced_overlap_check(10, 2, 0) == doctest::Approx(1.0));
  const double dense = reduced_overlap_check(12, 2, 2, MagnonRep::Dense);
  const double transfer = reduced_overlap_check(12, 2, 2, MagnonRep::Transfer);
  CHECK(std::abs(dense - transfer) < 1e-10);
}

TEST_CASE("scaling experiment produces decaying off-diagonals (smoke grid)") {
  ScalingExperiment ex =
      magnon_scaling_experiment(0, 2, 2, {16, 24, 32, 48}, 5, 8, /*s0_diag=*/2);
  REQUIRE(ex.rows.size() == 4);
  CHECK_FALSE(ex.off_diag_degenerate);
  CHECK(ex.off_diag_fit.slope < -0.5);
  CHECK(ex.diag_diff_fit.slope < -0.3);
  for (size_t k = 1; k < ex.rows.size(); ++k)
    CHECK(ex.rows[k].off_diag < ex.rows[k - 1].off_diag);

  // d = 1 cannot bridge |r - s| = 2: flagged degenerate, no bogus fit
  ScalingExperiment deg = magnon_scaling_experiment(0, 2, 1, {16, 24, 32, 48}, 5, 4);
  CHECK(deg.off_diag_degenerate);
}
