#include "concavelift/spaces.hpp"

#include <climits>
#include <set>

namespace clift {

int GradedSpace::total_dim() const {
  int n = 0;
  for (const auto& b : blocks) n += b.dim;
  return n;
}

int GradedSpace::block_offset(const std::string& label) const {
  int off = 0;
  for (const auto& b : blocks) {
    if (b.label == label) return off;
    off += b.dim;
  }
  fail(ErrorCode::LabelNotFound, "no block labeled '" + label + "'");
}

const Block& GradedSpace::block(const std::string& label) const {
  for (const auto& b : blocks)
    if (b.label == label) return b;
  fail(ErrorCode::LabelNotFound, "no block labeled '" + label + "'");
}

bool GradedSpace::has_block(const std::string& label) const {
  for (const auto& b : blocks)
    if (b.label == label) return true;
  return false;
}

int GradedSpace::min_tower_depth() const {
  int d = INT_MAX;
  for (const auto& b : blocks)
    if (b.tower) d = std::min(d, b.tower->depth);
  return d;
}

GradedSpace make_block_space(const std::string& label, int dim) {
  if (dim < 1) fail(ErrorCode::DimensionMismatch, "block dimension must be positive");
  return GradedSpace{{Block{label, dim, std::nullopt}}};
}

GradedSpace make_tower(const std::string& label, int base_dim, int depth) {
  if (depth < 2) fail(ErrorCode::InvalidDepth, "tower depth must be at least 2");
  if (base_dim < 1) fail(ErrorCode::DimensionMismatch, "tower base dimension must be positive");
  return GradedSpace{{Block{label, base_dim * depth, Tower{base_dim, depth}}}};
}

GradedSpace direct_sum(const std::vector<GradedSpace>& parts) {
  GradedSpace out;
  std::set<std::string> seen;
  for (const auto& p : parts)
    for (const auto& b : p.blocks) {
      if (!seen.insert(b.label).second)
        fail(ErrorCode::DimensionMismatch, "duplicate block label '" + b.label + "'");
      out.blocks.push_back(b);
    }
  return out;
}

std::vector<Eigen::Index> window_mask(const WindowSpec& w, int power_budget) {
  if (power_budget < 0) fail(ErrorCode::InvalidArgument, "negative power budget");
  std::vector<Eigen::Index> keep;
  Eigen::Index off = 0;
  for (const auto& b : w.space.blocks) {
    if (!b.tower) {
      for (int i = 0; i < b.dim; ++i) keep.push_back(off + i);
    } else {
      int drop = w.margin + power_budget;
      if (drop >= b.tower->depth)
        fail(ErrorCode::WindowTooDeep,
             "margin + budget = " + std::to_string(drop) + " exceeds tower depth " +
                 std::to_string(b.tower->depth) + " in block '" + b.label + "'");
      int kept_levels = b.tower->depth - drop;
      for (int i = 0; i < kept_levels * b.tower->base_dim; ++i) keep.push_back(off + i);
    }
    off += b.dim;
  }
  return keep;
}

la::CMatrix window_projector(const WindowSpec& w, int power_budget) {
  int n = w.space.total_dim();
  la::CMatrix p = la::CMatrix::Zero(n, n);
  for (Eigen::Index i : window_mask(w, power_budget)) p(i, i) = 1.0;
  return p;
}

la::CMatrix restrict_to(const la::CMatrix& m, const std::vector<Eigen::Index>& keep) {
  return restrict_to(m, keep, keep);
}

la::CMatrix restrict_to(const la::CMatrix& m, const std::vector<Eigen::Index>& rows,
                        const std::vector<Eigen::Index>& cols) {
  la::CMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(rows[i], cols[j]);
  return out;
}

double windowed_norm(const la::CMatrix& m, const std::vector<Eigen::Index>& keep) {
  return la::op_norm(restrict_to(m, keep));
}

bool windowed_psd(const la::CMatrix& m, const std::vector<Eigen::Index>& keep, double tol) {
  la::CMatrix r = restrict_to(m, keep);
  return la::is_psd(r, tol);
}

double windowed_min_eig(const la::CMatrix& m, const std::vector<Eigen::Index>& keep) {
  if (keep.empty()) return std::numeric_limits<double>::infinity();
  la::CMatrix r = restrict_to(m, keep);
  la::HermEig e = la::herm_eig(r);
  return e.values.minCoeff();
}

la::CMatrix windowed_clamped_psd(const la::CMatrix& m, const std::vector<Eigen::Index>& keep) {
  la::CMatrix p = la::CMatrix::Zero(m.rows(), m.cols());
  la::CMatrix r = restrict_to(m, keep);
  la::HermEig e = la::herm_eig(r);
  la::RVector clamped = e.values.cwiseMax(0.0);
  la::CMatrix rc = e.vectors * clamped.asDiagonal() * e.vectors.adjoint();
  for (size_t i = 0; i < keep.size(); ++i)
    for (size_t j = 0; j < keep.size(); ++j)
      p(keep[i], keep[j]) = rc(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return p;
}

}  // namespace clift
