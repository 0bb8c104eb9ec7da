#pragma once

#include <optional>
#include <string>
#include <vector>

#include "concavelift/linalg.hpp"

namespace clift {

// A depth-truncated model of an l^2_+ tower over a finite-dimensional base.
// Levels are contiguous slices ordered bottom-up; level k occupies
// coordinates [k*base_dim, (k+1)*base_dim) within the block.
struct Tower {
  int base_dim = 0;
  int depth = 0;
  bool operator==(const Tower&) const = default;
};

struct Block {
  std::string label;
  int dim = 0;
  std::optional<Tower> tower;
  bool operator==(const Block&) const = default;
};

// Ordered direct sum of labeled blocks. Block order follows the standard
// displayed column order for each equation.
struct GradedSpace {
  std::vector<Block> blocks;

  int total_dim() const;
  int block_offset(const std::string& label) const;  // throws LabelNotFound
  const Block& block(const std::string& label) const;
  bool has_block(const std::string& label) const;
  int min_tower_depth() const;  // INT_MAX when no towers
  bool operator==(const GradedSpace&) const = default;
};

GradedSpace make_block_space(const std::string& label, int dim);
GradedSpace make_tower(const std::string& label, int base_dim, int depth);
GradedSpace direct_sum(const std::vector<GradedSpace>& parts);

// Window specification: identities involving at most k tower-shift factors
// are asserted only on tower levels 0 .. depth-1-margin-k, where they hold
// exactly for the untruncated model.
struct WindowSpec {
  GradedSpace space;
  int margin = 0;
};

// Indices of the coordinates kept by the window with the given shift budget.
std::vector<Eigen::Index> window_mask(const WindowSpec& w, int power_budget);

// The corresponding diagonal orthogonal projector.
la::CMatrix window_projector(const WindowSpec& w, int power_budget);

// Submatrix of m on the kept rows and columns.
la::CMatrix restrict_to(const la::CMatrix& m, const std::vector<Eigen::Index>& keep);
la::CMatrix restrict_to(const la::CMatrix& m, const std::vector<Eigen::Index>& rows,
                        const std::vector<Eigen::Index>& cols);

// ||P m P|| via the kept submatrix.
double windowed_norm(const la::CMatrix& m, const std::vector<Eigen::Index>& keep);

// PSD test of the window-restricted matrix (zero-padded coordinates are
// excluded so they cannot mask or fake violations).
bool windowed_psd(const la::CMatrix& m, const std::vector<Eigen::Index>& keep, double tol);

// Minimum eigenvalue of the restricted matrix; +inf on an empty window.
double windowed_min_eig(const la::CMatrix& m, const std::vector<Eigen::Index>& keep);

// P m P as a full-size matrix, with eigenvalues clamped at zero. Used where
// a boundary-corrupted PSD operator (Delta_T on a truncation) feeds a square
// root or a kernel split.
la::CMatrix windowed_clamped_psd(const la::CMatrix& m, const std::vector<Eigen::Index>& keep);

}  // namespace clift
