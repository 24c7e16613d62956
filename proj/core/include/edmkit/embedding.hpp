#pragma once

// Point recovery (classical MDS) and rigid alignment to anchors (orthogonal
// Procrustes).

#include "edmkit/edm_core.hpp"

#include <vector>

namespace edm {

struct MdsResult {
  PointSet points;
  /// Full spectrum of -1/2 J D J, sorted by decreasing magnitude.
  Vector eigenvalues;
  /// How many of the leading d eigenvalues were negative and clamped to 0.
  int clamped = 0;
};

/// Classical MDS: eigendecompose G = -1/2 J D J and keep the d eigenpairs of
/// largest magnitude. Negative values among them are clamped to zero. The
/// result is centered at the origin. Throws if d is outside [1, n-1]
/// (d = 1 is accepted for n = 1).
MdsResult classical_mds_detailed(const DistanceMatrix& d, int dim);
PointSet classical_mds(const DistanceMatrix& d, int dim);

/// Same embedding step for an already centered Gram matrix.
MdsResult embed_gram(const Matrix& gram, int dim);

/// Known positions for a subset of the columns of a PointSet.
class AnchorSet {
 public:
  AnchorSet(std::vector<Index> indices, Matrix coords);

  const std::vector<Index>& indices() const { return indices_; }
  const Matrix& coords() const { return coords_; }
  Index size() const { return static_cast<Index>(indices_.size()); }
  Index dim() const { return coords_.rows(); }

 private:
  std::vector<Index> indices_;
  Matrix coords_;
};

/// x -> R x + t. R may contain a reflection.
struct RigidTransform {
  Matrix rotation;
  Vector translation;
  /// False when fewer than d+1 affinely independent anchors were available;
  /// the transform is then one of many equally good solutions.
  bool determined = true;

  Matrix apply(const Matrix& points) const;
};

/// Best orthogonal R and translation mapping the columns of `source` onto
/// the columns of `target` in the least-squares sense.
RigidTransform procrustes(const Matrix& source, const Matrix& target);

/// Fits procrustes on the anchor columns and applies it to every column.
PointSet align(const PointSet& points, const AnchorSet& anchors);

}  // namespace edm
