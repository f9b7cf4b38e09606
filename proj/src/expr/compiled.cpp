#include "hypfred/expr.hpp"
#include "expr_detail.hpp"

#include <algorithm>
#include <array>

namespace hypfred::expr {
namespace {

constexpr std::size_t kInlineStack = 32;

} // namespace

CompiledExpr::CompiledExpr(const Expr& e) : source_(e), constant_(e.constant_value()) {
    std::size_t depth = 0;
    auto emit = [&](auto&& self, const NodePtr& n) -> void {
        std::visit(
            [&](const auto& d) {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, Constant>) {
                    program_.push_back({Code::constant, 0, d.value, n});
                    depth_ = std::max(depth_, ++depth);
                } else if constexpr (std::is_same_v<T, VariableRef>) {
                    program_.push_back({d.var == Variable::x ? Code::var_x : Code::var_t, 0, 0.0, n});
                    depth_ = std::max(depth_, ++depth);
                } else if constexpr (std::is_same_v<T, Unary>) {
                    self(self, d.child);
                    program_.push_back({Code::unary, static_cast<unsigned char>(d.op), 0.0, n});
                } else {
                    self(self, d.lhs);
                    self(self, d.rhs);
                    program_.push_back({Code::binary, static_cast<unsigned char>(d.op), 0.0, n});
                    --depth;
                }
            },
            n->data);
    };
    emit(emit, e.node());
}

double CompiledExpr::operator()(double x, double t) const {
    if (constant_) return *constant_;
    std::array<double, kInlineStack> inline_stack{};
    std::vector<double> heap_stack;
    double* stack = inline_stack.data();
    if (depth_ > kInlineStack) {
        heap_stack.resize(depth_);
        stack = heap_stack.data();
    }
    std::size_t top = 0;
    for (const Instr& in : program_) {
        switch (in.code) {
        case Code::constant: stack[top++] = in.value; break;
        case Code::var_x: stack[top++] = x; break;
        case Code::var_t: stack[top++] = t; break;
        case Code::unary:
            stack[top - 1] = detail::apply_unary(static_cast<UnaryOp>(in.op), stack[top - 1], in.node);
            break;
        case Code::binary:
            --top;
            stack[top - 1] = detail::apply_binary(static_cast<BinaryOp>(in.op), stack[top - 1], stack[top], in.node);
            break;
        }
    }
    return stack[0];
}

} // namespace hypfred::expr
