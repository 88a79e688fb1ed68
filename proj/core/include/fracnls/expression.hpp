#pragma once

#include <functional>
#include <string>

namespace fracnls {

/// Compile a scalar expression in one variable (`t` or `x`) into a callable.
///
/// Grammar: numbers, `pi`, `+ - * / ^` (right-associative power), parentheses
/// and the unary functions exp, log, sqrt, abs, sin, cos, tan, sinh, cosh,
/// tanh, atan. Throws ConfigError on malformed input.
std::function<double(double)> compile_expression(const std::string& source);

}  // namespace fracnls
