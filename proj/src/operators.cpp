#include "concavelift/operators.hpp"

namespace clift {

Operator make_operator(la::CMatrix m, GradedSpace dom, GradedSpace cod, int boundary_depth) {
  if (m.rows() != cod.total_dim() || m.cols() != dom.total_dim())
    fail(ErrorCode::DimensionMismatch, "matrix dims do not match cod x dom");
  if (!la::all_finite(m)) fail(ErrorCode::InvalidArgument, "matrix has non-finite entries");
  return Operator{std::move(m), std::move(dom), std::move(cod), boundary_depth};
}

Operator identity_on(const GradedSpace& s) {
  int n = s.total_dim();
  return Operator{la::CMatrix::Identity(n, n), s, s, 0};
}

Operator adjoint(const Operator& t) {
  return Operator{t.matrix.adjoint(), t.cod, t.dom, t.boundary_depth};
}

Operator compose(const Operator& a, const Operator& b) {
  if (!(b.cod == a.dom))
    fail(ErrorCode::SpaceMismatch, "compose: codomain of second factor differs from domain of first");
  return Operator{a.matrix * b.matrix, b.dom, a.cod, a.boundary_depth + b.boundary_depth};
}

Operator assemble(const BlockLayout& layout) {
  const size_t nr = layout.row_labels.size();
  const size_t nc = layout.col_labels.size();
  if (layout.entries.size() != nr)
    fail(ErrorCode::DimensionMismatch, "assemble: entry grid rows mismatch");
  la::CMatrix m = la::CMatrix::Zero(layout.cod.total_dim(), layout.dom.total_dim());
  for (size_t i = 0; i < nr; ++i) {
    if (layout.entries[i].size() != nc)
      fail(ErrorCode::DimensionMismatch, "assemble: entry grid cols mismatch");
    const Block& rb = layout.cod.block(layout.row_labels[i]);
    int roff = layout.cod.block_offset(layout.row_labels[i]);
    for (size_t j = 0; j < nc; ++j) {
      if (!layout.entries[i][j]) continue;
      const la::CMatrix& e = *layout.entries[i][j];
      const Block& cb = layout.dom.block(layout.col_labels[j]);
      int coff = layout.dom.block_offset(layout.col_labels[j]);
      if (e.rows() != rb.dim || e.cols() != cb.dim)
        fail(ErrorCode::DimensionMismatch,
             "assemble: entry (" + layout.row_labels[i] + "," + layout.col_labels[j] +
                 ") has wrong dimensions");
      m.block(roff, coff, rb.dim, cb.dim) = e;
    }
  }
  return Operator{std::move(m), layout.dom, layout.cod, 0};
}

la::CMatrix slice(const Operator& t, const std::string& row_label, const std::string& col_label) {
  const Block& rb = t.cod.block(row_label);
  const Block& cb = t.dom.block(col_label);
  return t.matrix.block(t.cod.block_offset(row_label), t.dom.block_offset(col_label), rb.dim,
                        cb.dim);
}

Operator forward_shift(const GradedSpace& t) {
  if (t.blocks.size() != 1 || !t.blocks[0].tower)
    fail(ErrorCode::NotTower, "forward_shift requires a single tower block");
  const Tower& tw = *t.blocks[0].tower;
  int n = t.total_dim();
  la::CMatrix m = la::CMatrix::Zero(n, n);
  for (int k = 0; k + 1 < tw.depth; ++k)
    m.block((k + 1) * tw.base_dim, k * tw.base_dim, tw.base_dim, tw.base_dim) =
        la::CMatrix::Identity(tw.base_dim, tw.base_dim);
  return Operator{std::move(m), t, t, 1};
}

Operator embed(const GradedSpace& sub, const GradedSpace& whole, const std::string& at_label,
               int slot) {
  const Block& b = whole.block(at_label);
  int target_dim = b.tower ? b.tower->base_dim : b.dim;
  int sd = sub.total_dim();
  if (sd * (slot + 1) > target_dim)
    fail(ErrorCode::DimensionMismatch,
         "embed: subspace (with slot offset) does not fit inside block '" + at_label + "'");
  la::CMatrix m = la::CMatrix::Zero(whole.total_dim(), sd);
  int off = whole.block_offset(at_label) + slot * sd;
  m.block(off, 0, sd, sd) = la::CMatrix::Identity(sd, sd);
  return Operator{std::move(m), sub, whole, 0};
}

Compression compress(const Operator& t, const la::CMatrix& p, double tol) {
  if (!t.square() || p.rows() != t.matrix.rows() || p.cols() != t.matrix.cols())
    fail(ErrorCode::DimensionMismatch, "compress: projector dims mismatch");
  if (la::op_norm(p * p - p) > tol * 10 || la::op_norm(p - p.adjoint()) > tol * 10)
    fail(ErrorCode::NotProjector, "compress: p is not an orthogonal projector");
  la::CMatrix basis = la::range_basis(p, 0.5);  // eigenvalues cluster at 0 and 1
  la::CMatrix m = basis.adjoint() * t.matrix * basis;
  GradedSpace s = basis.cols() > 0
                      ? make_block_space("compressed", static_cast<int>(basis.cols()))
                      : GradedSpace{};
  return Compression{Operator{std::move(m), s, s, t.boundary_depth}, std::move(basis)};
}

double lifting_residual(const Operator& s, const Operator& j, const Operator& t,
                        const WindowSpec& w) {
  if (j.cod.total_dim() != s.dom.total_dim() || j.dom.total_dim() != t.dom.total_dim())
    fail(ErrorCode::SpaceMismatch, "lifting_residual: embedding dims mismatch");
  la::CMatrix lhs = j.matrix.adjoint() * s.matrix;
  la::CMatrix rhs = t.matrix * j.matrix.adjoint();
  la::CMatrix p = window_projector(w, s.boundary_depth);
  return la::op_norm((lhs - rhs) * p);
}

}  // namespace clift
