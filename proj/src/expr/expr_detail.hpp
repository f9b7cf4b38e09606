#pragma once

#include "hypfred/expr.hpp"

namespace hypfred::expr::detail {

// Shared by the tree walker and the compiled evaluator so both round identically.
double apply_unary(UnaryOp op, double v, const NodePtr& node);
double apply_binary(BinaryOp op, double a, double b, const NodePtr& node);

} // namespace hypfred::expr::detail
