#include "aqedc/mps.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace aqedc {

void MpsTensor::check() const {
  if (phys < 1 || bond < 1 || static_cast<int>(m.size()) != phys)
    throw std::invalid_argument("MpsTensor: inconsistent shape");
  for (const auto& mat : m) {
    if (mat.rows() != bond || mat.cols() != bond)
      throw std::invalid_argument("MpsTensor: matrix dimension mismatch");
    if (!mat.allFinite()) throw std::invalid_argument("MpsTensor: non-finite entries");
  }
}

MpoTensor mpo_diamond(const MpoTensor& o1, const MpoTensor& o2) {
  if (o1.phys != o2.phys) throw std::invalid_argument("mpo_diamond: physical dimension mismatch");
  MpoTensor out(o1.phys, o1.bond * o2.bond);
  for (int i = 0; i < o1.phys; ++i)
    for (int j = 0; j < o1.phys; ++j) {
      ComplexMatrix acc = ComplexMatrix::Zero(out.bond, out.bond);
      for (int k = 0; k < o1.phys; ++k) acc += kron(o1.m[i][k], o2.m[k][j]);
      out.m[i][j] = acc;
    }
  return out;
}

MpsTensor mpo_diamond_mps(const MpoTensor& o, const MpsTensor& a) {
  if (o.phys != a.phys) throw std::invalid_argument("mpo_diamond_mps: physical dimension mismatch");
  MpsTensor out(a.phys, o.bond * a.bond);
  for (int i = 0; i < a.phys; ++i) {
    ComplexMatrix acc = ComplexMatrix::Zero(out.bond, out.bond);
    for (int j = 0; j < a.phys; ++j) acc += kron(o.m[i][j], a.m[j]);
    out.m[i] = acc;
  }
  return out;
}

ComplexMatrix mpo_dense(const MpoTensor& o, const ComplexMatrix& x, int n) {
  const long dim = static_cast<long>(std::llround(std::pow(o.phys, n)));
  if (dim * dim > kDenseAmplitudeCap)
    throw std::invalid_argument("mpo_dense: dense cap exceeded");
  ComplexMatrix out(dim, dim);
  std::vector<int> bra(n), ket(n);
  for (long r = 0; r < dim; ++r) {
    long tmp = r;
    for (int s = n - 1; s >= 0; --s) { bra[s] = tmp % o.phys; tmp /= o.phys; }
    for (long c = 0; c < dim; ++c) {
      tmp = c;
      for (int s = n - 1; s >= 0; --s) { ket[s] = tmp % o.phys; tmp /= o.phys; }
      ComplexMatrix prod = ComplexMatrix::Identity(o.bond, o.bond);
      for (int s = 0; s < n; ++s) prod = prod * o.m[bra[s]][ket[s]];
      out(r, c) = (prod * x).trace();
    }
  }
  return out;
}

ComplexMatrix transfer_matrix(const MpsTensor& a, const MpsTensor& b) {
  if (a.phys != b.phys) throw std::invalid_argument("transfer: physical dimension mismatch");
  ComplexMatrix e = ComplexMatrix::Zero(a.bond * b.bond, a.bond * b.bond);
  for (int i = 0; i < a.phys; ++i) e += kron(a.m[i].conjugate(), b.m[i]);
  return e;
}

namespace {

// Dominant left/right fixed points of a square transfer matrix with rho ~ 1,
// by power iteration with Rayleigh refinement.
bool dominant_fixed_points(const ComplexMatrix& e, ComplexMatrix& left, ComplexMatrix& right,
                           int bond) {
  const int dim = static_cast<int>(e.rows());
  const double tol = 1e-12;
  const int max_iter = 10000;
  auto iterate = [&](const ComplexMatrix& op, StateVector& v) {
    v.normalize();
    Complex ray = 0.0;
    for (int it = 0; it < max_iter; ++it) {
      StateVector w = op * v;
      const double nw = w.norm();
      if (nw == 0.0) return false;
      w /= nw;
      ray = v.dot(op * v);
      if ((op * w - ray * w).norm() < tol) { v = w; return true; }
      v = w;
    }
    return (op * v - ray * v).norm() < 100 * tol;
  };

  StateVector r0 = vectorize(ComplexMatrix::Identity(bond, bond));
  StateVector l0 = r0;
  if (!iterate(e, r0)) return false;
  ComplexMatrix eadj = e.adjoint();
  if (!iterate(eadj, l0)) return false;

  right = devectorize(r0, bond, bond);
  left = devectorize(l0, bond, bond);
  // fixed points of a CP map can be chosen self-adjoint; drop the residual phase
  auto hermitize = [](ComplexMatrix& x) {
    Complex tr = x.trace();
    if (std::abs(tr) > 1e-14) x *= std::conj(tr) / std::abs(tr);
    x = 0.5 * (x + x.adjoint()).eval();
    if (x.trace().real() < 0) x = -x;
  };
  hermitize(right);
  hermitize(left);
  return true;
}

}  // namespace

TransferOperator transfer_op(const MpsTensor& a, const MpsTensor& b) {
  TransferOperator t;
  t.matrix = transfer_matrix(a, b);
  if (a.bond == b.bond) {
    Eigen::VectorXcd ev = eigenvalues_by_modulus(t.matrix);
    t.rho = std::abs(ev(0));
    t.lambda2 = ev.size() > 1 ? std::abs(ev(1)) : 0.0;
    if (std::abs(t.rho - 1.0) < 1e-6) {
      ComplexMatrix l, r;
      if (dominant_fixed_points(t.matrix, l, r, a.bond)) {
        t.left_fixed = l;
        t.right_fixed = r;
        t.fixed_points_valid = true;
      }
    }
  }
  return t;
}

TransferOperator transfer_op(const MpsTensor& a) { return transfer_op(a, a); }

ComplexMatrix generalized_transfer(const MpsTensor& a, const MpsTensor& b,
                                   const ComplexMatrix& z) {
  if (a.phys != b.phys) throw std::invalid_argument("generalized_transfer: dimension mismatch");
  if (z.rows() != a.phys || z.cols() != a.phys)
    throw std::invalid_argument("generalized_transfer: z must be phys x phys");
  ComplexMatrix e = ComplexMatrix::Zero(a.bond * b.bond, a.bond * b.bond);
  for (int m = 0; m < a.phys; ++m)
    for (int n = 0; n < a.phys; ++n) {
      if (z(m, n) == Complex(0.0)) continue;
      e += z(m, n) * kron(a.m[m].conjugate(), b.m[n]);
    }
  return e;
}

ComplexMatrix operator_transfer(const MpsTensor& a, const MpsTensor& b, const ComplexMatrix& f) {
  if (a.phys != b.phys) throw std::invalid_argument("operator_transfer: dimension mismatch");
  const int p = a.phys;
  long dim = f.rows();
  if (dim == 0 || f.rows() != f.cols()) throw std::invalid_argument("operator_transfer: bad f");
  int d = 0;
  for (long t = dim; t > 1; t /= p) {
    if (t % p != 0) throw std::invalid_argument("operator_transfer: f not a p^d operator");
    ++d;
  }
  if (d == 0) throw std::invalid_argument("operator_transfer: d = 0");

  const int db = a.bond * b.bond;
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  std::vector<int> bra(d), ket(d);
  for (long r = 0; r < dim; ++r) {
    long tmp = r;
    for (int s = d - 1; s >= 0; --s) { bra[s] = tmp % p; tmp /= p; }
    for (long c = 0; c < dim; ++c) {
      if (f(r, c) == Complex(0.0)) continue;
      tmp = c;
      for (int s = d - 1; s >= 0; --s) { ket[s] = tmp % p; tmp /= p; }
      ComplexMatrix prod = kron(a.m[bra[0]].conjugate(), b.m[ket[0]]);
      for (int s = 1; s < d; ++s) prod = prod * kron(a.m[bra[s]].conjugate(), b.m[ket[s]]);
      out += f(r, c) * prod;
    }
  }
  return out;
}

InjectivityReport is_injective(const MpsTensor& a, double gap_tol) {
  InjectivityReport rep;
  ComplexMatrix e = transfer_matrix(a, a);
  Eigen::VectorXcd ev = eigenvalues_by_modulus(e);
  rep.rho = std::abs(ev(0));
  rep.lambda2 = ev.size() > 1 ? std::abs(ev(1)) : 0.0;
  if (rep.rho == 0.0) return rep;
  const double gap = (rep.rho - rep.lambda2) / rep.rho;
  ComplexMatrix l, r;
  if (!dominant_fixed_points(e / rep.rho, l, r, a.bond)) return rep;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(r);
  const double tr = r.trace().real();
  rep.fixed_point_min_eig = es.eigenvalues().minCoeff() / (tr > 0 ? tr : 1.0);
  rep.injective = gap > gap_tol && rep.fixed_point_min_eig > gap_tol;
  return rep;
}

MpsTensor normalize_spectral_radius(const MpsTensor& a) {
  const double rho = spectral_radius(transfer_matrix(a, a));
  if (rho <= 0.0) throw std::invalid_argument("normalize_spectral_radius: zero transfer map");
  MpsTensor out = a;
  const double scale = 1.0 / std::sqrt(rho);
  for (auto& mat : out.m) mat *= scale;
  return out;
}

CanonicalMps canonicalize(const MpsTensor& a0) {
  MpsTensor a = normalize_spectral_radius(a0);
  InjectivityReport rep = is_injective(a);
  if (!rep.injective) throw std::invalid_argument("canonicalize: not primitive");

  ComplexMatrix e = transfer_matrix(a, a);
  ComplexMatrix l, r;
  if (!dominant_fixed_points(e, l, r, a.bond))
    throw std::runtime_error("canonicalize: fixed-point iteration failed");

  // gauge P = sqrt(r) makes the right fixed point the identity
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> er(r);
  if (er.eigenvalues().minCoeff() <= 0)
    throw std::invalid_argument("canonicalize: right fixed point not positive definite");
  ComplexMatrix rsqrt = er.operatorSqrt();
  ComplexMatrix rinvsqrt = er.operatorInverseSqrt();
  MpsTensor b(a.phys, a.bond);
  for (int i = 0; i < a.phys; ++i) b.m[i] = rinvsqrt * a.m[i] * rsqrt;

  // unitary gauge diagonalizing the new left fixed point
  ComplexMatrix e2 = transfer_matrix(b, b);
  ComplexMatrix l2, r2;
  if (!dominant_fixed_points(e2, l2, r2, b.bond))
    throw std::runtime_error("canonicalize: fixed-point iteration failed");
  l2 /= l2.trace().real();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> el(l2);
  ComplexMatrix u = el.eigenvectors();

  CanonicalMps out;
  out.tensor = MpsTensor(a.phys, a.bond);
  for (int i = 0; i < a.phys; ++i) out.tensor.m[i] = u.adjoint() * b.m[i] * u;
  out.lambda = el.eigenvalues();
  out.lambda /= out.lambda.sum();
  out.lambda2 = rep.lambda2 / rep.rho;
  return out;
}

MpsTensor random_injective_mps(int p, int D, std::uint64_t seed) {
  if (p < 2 || D < 1) throw std::invalid_argument("random_injective_mps: need p >= 2, D >= 1");
  Rng rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Rng local = rng.derive(attempt);
    MpsTensor a(p, D);
    for (int i = 0; i < p; ++i) a.m[i] = local.gaussian_matrix(D, D);
    a = normalize_spectral_radius(a);
    if (is_injective(a).injective) return a;
  }
  throw std::runtime_error("random_injective_mps: 100 consecutive rejections");
}

StateVector dense_state(const MpsTensor& a, const ComplexMatrix& x, int n) {
  a.check();
  if (x.rows() != a.bond || x.cols() != a.bond)
    throw std::invalid_argument("dense_state: boundary dimension mismatch");
  double amps = std::pow(static_cast<double>(a.phys), n);
  if (amps > static_cast<double>(kDenseAmplitudeCap))
    throw std::invalid_argument("dense_state: dense cap exceeded");
  const long dim = static_cast<long>(std::llround(amps));
  StateVector out(dim);

  // depth-first accumulation of prefix products A_{i_1}...A_{i_k}
  std::vector<ComplexMatrix> prefix(n + 1);
  prefix[0] = ComplexMatrix::Identity(a.bond, a.bond);
  std::vector<int> digit(n, 0);
  long idx = 0;
  int depth = 0;
  while (true) {
    while (depth < n) {
      prefix[depth + 1] = prefix[depth] * a.m[digit[depth]];
      ++depth;
    }
    out(idx++) = (prefix[n] * x).trace();
    while (depth > 0 && digit[depth - 1] == a.phys - 1) {
      digit[depth - 1] = 0;
      --depth;
    }
    if (depth == 0) break;
    ++digit[depth - 1];
    --depth;  // prefix products from this level on must be rebuilt
  }
  return out;
}

Complex matrix_element_transfer(const MpsTensor& a1, const ComplexMatrix& x1,
                                const MpsTensor& a2, const ComplexMatrix& x2,
                                const ComplexMatrix& f, const std::vector<int>& support, int n) {
  if (a1.phys != a2.phys) throw std::invalid_argument("matrix_element: dimension mismatch");
  const int p = a1.phys;
  const int d = static_cast<int>(support.size());
  long fdim = 1;
  for (int s = 0; s < d; ++s) fdim *= p;
  if (f.rows() != fdim || f.cols() != fdim)
    throw std::invalid_argument("matrix_element: operator dimension mismatch with support");
  if (d > n) throw std::invalid_argument("matrix_element: support larger than chain");

  const ComplexMatrix e = transfer_matrix(a1, a2);
  const ComplexMatrix boundary = kron(x1.conjugate(), x2);
  if (d == 0) return (matrix_power(e, n) * boundary).trace() * f(0, 0);

  // Reduce mod n (periodic chain), then bring the sites into ascending order,
  // carrying the legs of f along with the sort.
  std::vector<int> reduced(support);
  for (int& s : reduced) s = ((s % n) + n) % n;
  std::vector<int> order(d);
  for (int k = 0; k < d; ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](int u, int v) { return reduced[u] < reduced[v]; });
  std::vector<int> sites(d);
  for (int k = 0; k < d; ++k) sites[k] = reduced[order[k]];
  if (std::adjacent_find(sites.begin(), sites.end()) != sites.end())
    throw std::invalid_argument("matrix_element: repeated support sites");

  ComplexMatrix fr = f;
  bool already_sorted = true;
  for (int k = 0; k < d; ++k) already_sorted = already_sorted && order[k] == k;
  if (!already_sorted) {
    ComplexMatrix fp = ComplexMatrix::Zero(fdim, fdim);
    std::vector<long> stride(d, 1);
    for (int s = d - 2; s >= 0; --s) stride[s] = stride[s + 1] * p;
    std::vector<int> digs(d);
    auto permute_index = [&](long x) {  // sorted leg k takes the caller's leg order[k]
      long tmp = x;
      for (int s = d - 1; s >= 0; --s) { digs[s] = tmp % p; tmp /= p; }
      long y = 0;
      for (int k = 0; k < d; ++k) y += digs[order[k]] * stride[k];
      return y;
    };
    for (long r = 0; r < fdim; ++r) {
      const long rp = permute_index(r);
      for (long c = 0; c < fdim; ++c) fp(rp, permute_index(c)) = f(r, c);
    }
    fr = fp;
  }

  // ordered product: E^{gap} segments between the legs of f, boundary at the end
  std::vector<int> gap_after(d);
  for (int k = 0; k + 1 < d; ++k) gap_after[k] = sites[k + 1] - sites[k] - 1;
  gap_after[d - 1] = n - 1 - sites[d - 1];
  std::vector<ComplexMatrix> epow(d);
  for (int k = 0; k < d; ++k) epow[k] = matrix_power(e, gap_after[k]);
  const ComplexMatrix prefix = matrix_power(e, sites[0]);

  Complex acc = 0.0;
  std::vector<int> bra(d), ket(d);
  for (long r = 0; r < fdim; ++r) {
    long tmp = r;
    for (int s = d - 1; s >= 0; --s) { bra[s] = tmp % p; tmp /= p; }
    for (long c = 0; c < fdim; ++c) {
      if (fr(r, c) == Complex(0.0)) continue;
      tmp = c;
      for (int s = d - 1; s >= 0; --s) { ket[s] = tmp % p; tmp /= p; }
      ComplexMatrix prod = prefix;
      for (int k = 0; k < d; ++k) {
        prod = prod * kron(a1.m[bra[k]].conjugate(), a2.m[ket[k]]);
        if (gap_after[k] > 0) prod = prod * epow[k];
      }
      acc += fr(r, c) * (prod * boundary).trace();
    }
  }
  return acc;
}

double mps_norm_sq(const MpsTensor& a, const ComplexMatrix& x, int n) {
  ComplexMatrix e = transfer_matrix(a, a);
  return (matrix_power(e, n) * kron(x.conjugate(), x)).trace().real();
}

Complex mps_overlap(const MpsTensor& a1, const ComplexMatrix& x1, const MpsTensor& a2,
                    const ComplexMatrix& x2, int n) {
  ComplexMatrix e = transfer_matrix(a1, a2);
  return (matrix_power(e, n) * kron(x1.conjugate(), x2)).trace();
}

}  // namespace aqedc
