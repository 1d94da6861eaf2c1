#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace fatigue {

/// Nodal field (one value per mesh vertex).
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
/// Per-element gradients, one column per triangle.
using GradField = Eigen::Matrix2Xd;
/// Per-element cumulation variable. Two rows for the vector variant, one row
/// for the scalar variant; the Euclidean column norm covers both cases.
using ZetaField = Eigen::MatrixXd;

}  // namespace fatigue
