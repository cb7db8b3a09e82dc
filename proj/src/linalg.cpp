#include "aqedc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace aqedc {

StateVector vectorize(const ComplexMatrix& x) {
  return Eigen::Map<const StateVector>(x.data(), x.size());
}

ComplexMatrix devectorize(const StateVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw std::invalid_argument("devectorize: size mismatch");
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<int>& local_dims,
                            const std::vector<int>& keep) {
  const int n = static_cast<int>(local_dims.size());
  long total = 1;
  for (int d : local_dims) {
    if (d < 1) throw std::invalid_argument("partial_trace: local dimension < 1");
    total *= d;
  }
  if (rho.rows() != total || rho.cols() != total)
    throw std::invalid_argument("partial_trace: dimension mismatch with local_dims");
  for (int s : keep)
    if (s < 0 || s >= n) throw std::invalid_argument("partial_trace: keep index out of range");
  if (!std::is_sorted(keep.begin(), keep.end()))
    throw std::invalid_argument("partial_trace: keep indices must be sorted");

  std::vector<int> traced;
  for (int s = 0; s < n; ++s)
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) traced.push_back(s);

  // strides of each site in the lexicographic index (site 0 most significant)
  std::vector<long> stride(n, 1);
  for (int s = n - 2; s >= 0; --s) stride[s] = stride[s + 1] * local_dims[s + 1];

  long dim_keep = 1, dim_traced = 1;
  for (int s : keep) dim_keep *= local_dims[s];
  for (int s : traced) dim_traced *= local_dims[s];

  auto expand = [&](long idx, const std::vector<int>& sites) {
    long full = 0;
    for (auto it = sites.rbegin(); it != sites.rend(); ++it) {
      full += (idx % local_dims[*it]) * stride[*it];
      idx /= local_dims[*it];
    }
    return full;
  };

  ComplexMatrix out = ComplexMatrix::Zero(dim_keep, dim_keep);
  for (long a = 0; a < dim_keep; ++a) {
    const long base_a = expand(a, keep);
    for (long b = 0; b < dim_keep; ++b) {
      const long base_b = expand(b, keep);
      Complex acc = 0.0;
      for (long t = 0; t < dim_traced; ++t) {
        const long off = expand(t, traced);
        acc += rho(base_a + off, base_b + off);
      }
      out(a, b) = acc;
    }
  }
  return out;
}

Eigen::VectorXcd eigenvalues_by_modulus(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues: matrix not square");
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m, /*computeEigenvectors=*/false);
  Eigen::VectorXcd ev = es.eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size(),
            [](const Complex& a, const Complex& b) { return std::abs(a) > std::abs(b); });
  return ev;
}

double spectral_radius(const ComplexMatrix& m) {
  Eigen::VectorXcd ev = eigenvalues_by_modulus(m);
  return ev.size() ? std::abs(ev(0)) : 0.0;
}

int numerical_rank(const ComplexMatrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = rel_tol * sv(0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

ComplexMatrix matrix_power(const ComplexMatrix& m, long k) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix_power: matrix not square");
  if (k < 0) throw std::invalid_argument("matrix_power: negative power");
  ComplexMatrix result = ComplexMatrix::Identity(m.rows(), m.cols());
  ComplexMatrix base = m;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

int JordanProfile::largest_block() const {
  int h = 0;
  for (const auto& c : clusters)
    for (int b : c.block_sizes) h = std::max(h, b);
  return h;
}

int JordanProfile::blocks_at(const Complex& lambda, double tol) const {
  for (const auto& c : clusters)
    if (std::abs(c.eigenvalue - lambda) <= tol) return c.multiplicity;
  return 0;
}

JordanProfile jordan_profile(const ComplexMatrix& m, const JordanOptions& opts) {
  if (m.rows() != m.cols()) throw std::invalid_argument("jordan_profile: matrix not square");
  const int dim = static_cast<int>(m.rows());
  JordanProfile out;
  out.dim = dim;
  if (dim == 0) return out;

  const double inf_norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  const double cluster_tol =
      opts.cluster_tol > 0 ? opts.cluster_tol : 1e-7 * std::max(inf_norm, 1.0);
  const double rank_tol = opts.rank_tol > 0 ? opts.rank_tol : 1e-9;

  Eigen::VectorXcd ev = eigenvalues_by_modulus(m);

  // Assign eigenvalues to clusters: seeded centers first, then greedy merging.
  std::vector<Complex> centers;
  std::vector<std::vector<int>> members;
  if (!opts.seeds.empty()) {
    centers = opts.seeds;
    members.assign(centers.size(), {});
    for (int i = 0; i < dim; ++i) {
      int best = 0;
      double bestd = std::abs(ev(i) - centers[0]);
      for (size_t c = 1; c < centers.size(); ++c) {
        double d = std::abs(ev(i) - centers[c]);
        if (d < bestd) { bestd = d; best = static_cast<int>(c); }
      }
      members[best].push_back(i);
    }
  } else {
    for (int i = 0; i < dim; ++i) {
      int found = -1;
      for (size_t c = 0; c < centers.size(); ++c) {
        if (std::abs(ev(i) - centers[c]) <= cluster_tol) { found = static_cast<int>(c); break; }
      }
      if (found < 0) {
        centers.push_back(ev(i));
        members.push_back({i});
      } else {
        members[found].push_back(i);
        // running mean keeps the representative centered
        Complex mean = 0.0;
        for (int j : members[found]) mean += ev(j);
        centers[found] = mean / static_cast<double>(members[found].size());
      }
    }
  }

  for (size_t c = 0; c < centers.size(); ++c)
    for (size_t c2 = c + 1; c2 < centers.size(); ++c2)
      if (!members[c].empty() && !members[c2].empty() &&
          std::abs(centers[c] - centers[c2]) < 10.0 * cluster_tol)
        out.ill_conditioned = true;

  const ComplexMatrix eye = ComplexMatrix::Identity(dim, dim);
  for (size_t c = 0; c < centers.size(); ++c) {
    if (members[c].empty()) continue;
    JordanCluster cl;
    cl.eigenvalue = centers[c];
    cl.multiplicity = static_cast<int>(members[c].size());

    // Rank chain r_k = rank((M - lambda I)^k); w_k = r_{k-1} - r_k counts blocks of size >= k.
    const ComplexMatrix shifted = m - cl.eigenvalue * eye;
    std::vector<int> ranks{dim};
    ComplexMatrix pw = eye;
    for (int k = 1; k <= cl.multiplicity + 1; ++k) {
      pw = pw * shifted;
      ranks.push_back(numerical_rank(pw, rank_tol));
      if (ranks.back() <= dim - cl.multiplicity) break;
    }
    std::vector<int> weyr;  // blocks of size >= k
    for (size_t k = 1; k < ranks.size(); ++k) weyr.push_back(ranks[k - 1] - ranks[k]);
    // convert the Weyr sequence into explicit block sizes
    for (size_t k = 0; k < weyr.size(); ++k) {
      const int geq_k = weyr[k];
      const int geq_k1 = (k + 1 < weyr.size()) ? weyr[k + 1] : 0;
      for (int b = 0; b < geq_k - geq_k1; ++b) cl.block_sizes.push_back(static_cast<int>(k + 1));
    }
    std::sort(cl.block_sizes.rbegin(), cl.block_sizes.rend());
    out.clusters.push_back(std::move(cl));
  }
  return out;
}

std::vector<std::pair<double, double>> matrix_power_norms(const ComplexMatrix& m,
                                                          const std::vector<long>& powers) {
  std::vector<std::pair<double, double>> out;
  out.reserve(powers.size());
  for (long k : powers) {
    ComplexMatrix pw = matrix_power(m, k);
    Eigen::JacobiSVD<ComplexMatrix> svd(pw);
    const double op = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    out.emplace_back(op, pw.norm());
  }
  return out;
}

}  // namespace aqedc
