#pragma once

// Arithmetic shared by the eval/comparison intrinsics and the
// host:intrinsics library.

#include "mlp/terms.hpp"

#include <stdexcept>
#include <variant>

namespace mlp::vm {

class EvalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using Number = std::variant<std::int64_t, double>;

/// Evaluates +, -, * and / over INT and REAL leaves. Each node is INT when
/// both operands are INT and REAL otherwise; INT division truncates toward
/// zero. Throws EvalError.
Number evaluate(const terms::Store &store, terms::TermRef expr);

terms::TermRef make_number(terms::Store &store, const Number &n);

enum class Comparison { Lt, Gt, Le, Ge, Eq };

/// Numeric comparison; mixed INT/REAL pairs compare as REAL.
bool compare(Comparison c, const Number &a, const Number &b);

} // namespace mlp::vm
