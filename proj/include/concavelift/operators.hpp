#pragma once

#include <optional>

#include "concavelift/spaces.hpp"

namespace clift {

// A matrix bound to its domain and codomain spaces. boundary_depth counts the
// tower-shift applications embedded in the operator's construction; windowed
// identity checks consume it as their power budget.
struct Operator {
  la::CMatrix matrix;
  GradedSpace dom;
  GradedSpace cod;
  int boundary_depth = 0;

  int dom_dim() const { return dom.total_dim(); }
  int cod_dim() const { return cod.total_dim(); }
  bool square() const { return dom == cod; }
};

Operator make_operator(la::CMatrix m, GradedSpace dom, GradedSpace cod, int boundary_depth = 0);
Operator identity_on(const GradedSpace& s);
Operator adjoint(const Operator& t);

// Space identity is nominal: composing across structurally equal but
// differently labeled spaces is an error.
Operator compose(const Operator& a, const Operator& b);

struct BlockLayout {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  GradedSpace cod;
  GradedSpace dom;
  // entries[i][j] acts from dom block col_labels[j] to cod block row_labels[i];
  // absent entries are zero blocks.
  std::vector<std::vector<std::optional<la::CMatrix>>> entries;
};

Operator assemble(const BlockLayout& layout);

// Slice a block back out of an operator whose spaces are block-decomposed.
la::CMatrix slice(const Operator& t, const std::string& row_label, const std::string& col_label);

// Truncated forward shift on a single-tower space: level k -> level k+1,
// top level absorbs to zero.
Operator forward_shift(const GradedSpace& t);

// Isometric embedding of `sub` into the labeled block of `whole` (into the
// bottom tower level when the block is a tower), offset by `slot` copies of
// sub inside that level.
Operator embed(const GradedSpace& sub, const GradedSpace& whole, const std::string& at_label,
               int slot = 0);

struct Compression {
  Operator op;        // in the orthonormal basis of range(p)
  la::CMatrix basis;  // columns: that basis, recorded for reproducibility
};

Compression compress(const Operator& t, const la::CMatrix& p, double tol = la::Tol::identity);

// ||(J* S - T J*) P_window|| with budget = s.boundary_depth.
double lifting_residual(const Operator& s, const Operator& j, const Operator& t,
                        const WindowSpec& w);

}  // namespace clift
