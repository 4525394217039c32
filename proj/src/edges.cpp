#include "rbl/edges.hpp"

#include <cmath>
#include <complex>

#include "rbl/errors.hpp"

namespace rbl {

CoefficientMatrix::CoefficientMatrix(const PairIndex& index)
    : rows_(static_cast<Eigen::Index>(index.size())), cols_(index.num_nodes()) {
  triplets_.reserve(2 * index.size());
  for (std::size_t p = 0; p < index.size(); ++p) {
    const auto row = static_cast<int>(p);
    triplets_.emplace_back(row, index[p].i, -1.0);
    triplets_.emplace_back(row, index[p].j, 1.0);
  }
}

Eigen::SparseMatrix<double> CoefficientMatrix::to_sparse() const {
  Eigen::SparseMatrix<double> m(rows_, cols_);
  m.setFromTriplets(triplets_.begin(), triplets_.end());
  return m;
}

Eigen::MatrixXd CoefficientMatrix::to_dense() const { return Eigen::MatrixXd(to_sparse()); }

Eigen::VectorXcd CoefficientMatrix::apply(const Eigen::VectorXcd& x) const {
  if (x.size() != cols_) throw InvalidInputError("coordinate vector length does not match the node count");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(rows_);
  for (const auto& t : triplets_) v(t.row()) += t.value() * x(t.col());
  return v;
}

CoefficientMatrix build_coefficient_matrix(const PairIndex& index) { return CoefficientMatrix(index); }

EdgeSet::EdgeSet(PairIndex index, Eigen::VectorXcd values)
    : index_(std::move(index)), values_(std::move(values)) {
  if (values_.size() != static_cast<Eigen::Index>(index_.size()))
    throw InvalidInputError("edge vector length does not match the pair index");
}

EdgeSet edges_from_coordinates(const Eigen::VectorXcd& x, const PairIndex& index) {
  if (x.size() != index.num_nodes()) throw InvalidInputError("coordinate vector length does not match the node count");
  Eigen::VectorXcd v(static_cast<Eigen::Index>(index.size()));
  for (std::size_t p = 0; p < index.size(); ++p) {
    const auto k = static_cast<Eigen::Index>(p);
    v(k) = x(index[p].j) - x(index[p].i);
    if (std::abs(v(k)) <= 1e-12) throw DegenerateGeometryError("coincident nodes produce a zero-length edge");
  }
  return EdgeSet(index, std::move(v));
}

EdgeSet edges_from_measurements(const MeasurementSet& meas) {
  const auto n = static_cast<Eigen::Index>(meas.size());
  if (meas.distances.size() != n || meas.angles.size() != n)
    throw InvalidInputError("measurement vectors do not match the pair index");
  Eigen::VectorXcd v(n);
  for (Eigen::Index p = 0; p < n; ++p) {
    const double d = meas.distances(p);
    if (!(d > 0.0) || !std::isfinite(d)) throw InvalidInputError("measured distance must be positive");
    v(p) = std::polar(d, meas.angles(p));
  }
  return EdgeSet(meas.index, std::move(v));
}

Eigen::VectorXcd anchor_edges(const AnchorSet& anchors) {
  const auto m = static_cast<int>(anchors.size());
  Eigen::VectorXcd v(static_cast<Eigen::Index>(m) * (m - 1) / 2);
  Eigen::Index p = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      v(p++) = to_complex(anchors.positions().col(j)) - to_complex(anchors.positions().col(i));
  return v;
}

Eigen::MatrixXcd MinorBlocks::stacked() const {
  Eigen::MatrixXcd s(k1.rows() + k3.rows() + k4.cols(), k3.cols());
  s << k1, k3, k4.adjoint();
  return s;
}

Eigen::MatrixXcd KernelBlocks::assemble() const {
  const Eigen::MatrixXcd k2_block = k2();
  const Eigen::MatrixXcd k4_block = k4();
  const auto n = edges_.size();
  Eigen::MatrixXcd full(n, n);
  full << k_a(), k1(), k2_block,  //
      k1().adjoint(), k3(), k4_block,  //
      k2_block.adjoint(), k4_block.adjoint(), k_t();
  return full;
}

KernelBlocks build_kernel(const EdgeSet& edges) { return KernelBlocks(edges); }

MinorBlocks extract_minor(const KernelBlocks& kernel) {
  return {kernel.k1(), kernel.k3(), kernel.k4()};
}

}  // namespace rbl
