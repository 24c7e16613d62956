#include "edmkit/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace edm {

MdsResult embed_gram(const Matrix& gram, int dim) {
  const Index n = gram.rows();
  if (dim < 1 || (n > 1 && dim > n - 1) || (n == 1 && dim != 1)) {
    throw std::invalid_argument("classical_mds: dimension " + std::to_string(dim) +
                                " outside [1, n-1] for n = " + std::to_string(n));
  }
  const SortedEigen eig = eigen_by_magnitude(gram);
  Matrix coords = Matrix::Zero(dim, n);
  int clamped = 0;
  for (int k = 0; k < dim && k < eig.values.size(); ++k) {
    double lambda = eig.values(k);
    if (lambda < 0.0) {
      ++clamped;
      lambda = 0.0;
    }
    coords.row(k) = std::sqrt(lambda) * eig.vectors.col(k).transpose();
  }
  // Eigenvectors of a centered Gram matrix are orthogonal to 1 up to
  // rounding; remove the residual mean explicitly.
  const Vector mean = coords.rowwise().mean();
  coords.colwise() -= mean;
  return MdsResult{PointSet(std::move(coords)), eig.values, clamped};
}

MdsResult classical_mds_detailed(const DistanceMatrix& d, int dim) {
  return embed_gram(gram_from_edm(d, CenteringMode::centroid).entries(), dim);
}

PointSet classical_mds(const DistanceMatrix& d, int dim) {
  return classical_mds_detailed(d, dim).points;
}

AnchorSet::AnchorSet(std::vector<Index> indices, Matrix coords)
    : indices_(std::move(indices)), coords_(std::move(coords)) {
  if (indices_.empty()) throw std::invalid_argument("AnchorSet needs at least one anchor");
  if (static_cast<Index>(indices_.size()) != coords_.cols()) {
    throw std::invalid_argument("AnchorSet: index count does not match coordinate columns");
  }
  std::set<Index> seen;
  for (Index i : indices_) {
    if (i < 0) throw std::invalid_argument("AnchorSet: negative index");
    if (!seen.insert(i).second) throw std::invalid_argument("AnchorSet: duplicate index");
  }
}

Matrix RigidTransform::apply(const Matrix& points) const {
  Matrix out = rotation * points;
  out.colwise() += translation;
  return out;
}

RigidTransform procrustes(const Matrix& source, const Matrix& target) {
  if (source.rows() != target.rows() || source.cols() != target.cols()) {
    throw std::invalid_argument("procrustes: source and target shapes differ");
  }
  if (source.cols() < 1) throw std::invalid_argument("procrustes: no points");
  const Vector src_c = source.rowwise().mean();
  const Vector tgt_c = target.rowwise().mean();
  const Matrix src = source.colwise() - src_c;
  const Matrix tgt = target.colwise() - tgt_c;

  // X_a Y^T = U S V^T  =>  R = V U^T.
  Eigen::JacobiSVD<Matrix> svd(src * tgt.transpose(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  RigidTransform t;
  t.rotation = svd.matrixV() * svd.matrixU().transpose();
  t.translation = tgt_c - t.rotation * src_c;

  const Index dim = source.rows();
  Eigen::JacobiSVD<Matrix> spread(src);
  const Vector& sv = spread.singularValues();
  const double tol = 1e-10 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  const Index rank = (sv.array() > tol).count();
  t.determined = rank == dim;
  return t;
}

PointSet align(const PointSet& points, const AnchorSet& anchors) {
  if (anchors.dim() != points.dim()) {
    throw std::invalid_argument("align: anchor dimension differs from point dimension");
  }
  Matrix source(points.dim(), anchors.size());
  for (Index k = 0; k < anchors.size(); ++k) {
    const Index idx = anchors.indices()[static_cast<std::size_t>(k)];
    if (idx >= points.size()) throw std::invalid_argument("align: anchor index out of range");
    source.col(k) = points.coords().col(idx);
  }
  const RigidTransform t = procrustes(source, anchors.coords());
  return PointSet(t.apply(points.coords()));
}

}  // namespace edm
